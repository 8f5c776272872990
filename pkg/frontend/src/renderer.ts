// Canvas rendering of the view state. The map raster is cached by digest
// and blitted scaled; overlays are redrawn per frame.

import { rasterize } from "./map.js";
import type { ViewState } from "./store.js";
import { MapTransform } from "./transform.js";

const ROBOT_RADIUS_M = 0.18;
const THRESHOLD = 0.07; // switching threshold drawn on the error gauge

export class Renderer {
  private mapCanvas: HTMLCanvasElement | null = null;
  private mapDigest = "";
  transform: MapTransform | null = null;

  constructor(private readonly canvas: HTMLCanvasElement) {}

  private ensureMapRaster(state: ViewState): void {
    const map = state.map;
    if (!map || this.mapDigest === map.digest) return;
    const raster = rasterize(map);
    const off = document.createElement("canvas");
    off.width = raster.width;
    off.height = raster.height;
    const ctx = off.getContext("2d")!;
    const pixels = new Uint8ClampedArray(raster.data) as Uint8ClampedArray<ArrayBuffer>;
    ctx.putImageData(new ImageData(pixels, raster.width, raster.height), 0, 0);
    this.mapCanvas = off;
    this.mapDigest = map.digest;
  }

  draw(state: ViewState): void {
    const ctx = this.canvas.getContext("2d")!;
    const { width, height } = this.canvas;
    ctx.fillStyle = "#1a1b20";
    ctx.fillRect(0, 0, width, height);
    if (!state.map) return;
    this.ensureMapRaster(state);
    this.transform = new MapTransform(state.map, width, height);
    const tf = this.transform;

    const [left, bottom] = tf.worldToScreen(state.map.origin[0], state.map.origin[1]);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(this.mapCanvas!, left, bottom - tf.worldH * tf.scale,
                  tf.worldW * tf.scale, tf.worldH * tf.scale);

    const frame = state.frame;
    if (!frame) return;

    if (frame.plannedPath.length > 1) {
      ctx.strokeStyle = "#2e9e4f";
      ctx.lineWidth = 2;
      ctx.beginPath();
      frame.plannedPath.forEach(([x, y], i) => {
        const [px, py] = tf.worldToScreen(x, y);
        if (i === 0) ctx.moveTo(px, py);
        else ctx.lineTo(px, py);
      });
      ctx.stroke();
    }

    ctx.fillStyle = "#d04a4a";
    for (const [x, y] of frame.scanPoints) {
      const [px, py] = tf.worldToScreen(x, y);
      ctx.fillRect(px - 1.5, py - 1.5, 3, 3);
    }

    if (frame.goal) {
      const [gx, gy] = tf.worldToScreen(frame.goal[0], frame.goal[1]);
      ctx.strokeStyle = "#3b82f6";
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(gx - 7, gy + 7);
      ctx.lineTo(gx, gy - 9);
      ctx.lineTo(gx + 7, gy + 7);
      ctx.closePath();
      ctx.stroke();
    }

    const [rx, ry, theta] = frame.robotPose;
    const [px, py] = tf.worldToScreen(rx, ry);
    const r = Math.max(ROBOT_RADIUS_M * tf.scale, 5);
    ctx.fillStyle = frame.loa === "autonomy" ? "#2e9e4f" : "#3b82f6";
    ctx.beginPath();
    ctx.arc(px, py, r, 0, 2 * Math.PI);
    ctx.fill();
    ctx.strokeStyle = "#e4e4e7";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(px, py);
    ctx.lineTo(px + 1.8 * r * Math.cos(theta), py - 1.8 * r * Math.sin(theta));
    ctx.stroke();
  }

  drawErrorGauge(gauge: HTMLCanvasElement, state: ViewState): void {
    const ctx = gauge.getContext("2d")!;
    const { width, height } = gauge;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#26272e";
    ctx.fillRect(0, 0, width, height);
    const e = state.frame ? state.frame.eFiltered : 0;
    const frac = Math.min(e / 0.1, 1);
    ctx.fillStyle = e > THRESHOLD ? "#d04a4a" : "#3b82f6";
    ctx.fillRect(0, 0, width * frac, height);
    const tx = width * (THRESHOLD / 0.1);
    ctx.strokeStyle = "#f4b942";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(tx, 0);
    ctx.lineTo(tx, height);
    ctx.stroke();
  }
}
