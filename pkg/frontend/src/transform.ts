// Affine map <-> screen transform. World y points up, screen y points down;
// the map is fitted into the viewport preserving aspect and centered.

import type { MapMsg, Point } from "./protocol.js";

export class MapTransform {
  readonly scale: number;   // pixels per meter
  readonly offsetX: number; // screen x of world originX
  readonly offsetY: number; // screen y of world originY (bottom edge of the map)
  readonly worldW: number;
  readonly worldH: number;

  constructor(map: MapMsg, viewW: number, viewH: number) {
    this.worldW = map.width * map.resolution;
    this.worldH = map.height * map.resolution;
    this.scale = Math.min(viewW / this.worldW, viewH / this.worldH);
    const usedW = this.worldW * this.scale;
    const usedH = this.worldH * this.scale;
    const ox = map.origin[0];
    const oy = map.origin[1];
    this.offsetX = (viewW - usedW) / 2 - ox * this.scale;
    // world oy maps to the bottom of the centered raster
    this.offsetY = (viewH - usedH) / 2 + usedH + oy * this.scale;
  }

  worldToScreen(x: number, y: number): Point {
    return [x * this.scale + this.offsetX, this.offsetY - y * this.scale];
  }

  screenToWorld(px: number, py: number): Point {
    return [(px - this.offsetX) / this.scale, (this.offsetY - py) / this.scale];
  }
}
