// Occupancy raster decoding: run-length strings -> cells -> RGBA pixels.

import type { MapMsg } from "./protocol.js";

export function decodeRuns(msg: MapMsg): Uint8Array {
  const cells = new Uint8Array(msg.width * msg.height);
  let value = 0;
  let at = 0;
  for (const run of msg.runs) {
    if (value) cells.fill(1, at, at + run);
    at += run;
    value ^= 1;
  }
  if (at !== cells.length) {
    throw new Error(`map runs cover ${at} cells, expected ${cells.length}`);
  }
  return cells;
}

export const FREE_RGBA: [number, number, number, number] = [245, 245, 245, 255];
export const WALL_RGBA: [number, number, number, number] = [40, 40, 48, 255];

// Pixels in map-cell resolution, row 0 at the TOP (world row height-1),
// ready to draw onto a canvas without further flipping.
export function rasterize(msg: MapMsg): { data: Uint8ClampedArray; width: number; height: number } {
  const cells = decodeRuns(msg);
  const data = new Uint8ClampedArray(msg.width * msg.height * 4);
  for (let row = 0; row < msg.height; row++) {
    const srcRow = msg.height - 1 - row; // flip: world y up, screen y down
    for (let col = 0; col < msg.width; col++) {
      const rgba = cells[srcRow * msg.width + col] ? WALL_RGBA : FREE_RGBA;
      const at = (row * msg.width + col) * 4;
      data[at] = rgba[0];
      data[at + 1] = rgba[1];
      data[at + 2] = rgba[2];
      data[at + 3] = rgba[3];
    }
  }
  return { data, width: msg.width, height: msg.height };
}
