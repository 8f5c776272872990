// Click-to-goal: inverse view transform plus a local occupancy warning.
// The message is sent regardless; the server is the arbiter.

import { decodeRuns } from "./map.js";
import type { MapMsg, SetGoalCmd } from "./protocol.js";
import type { MapTransform } from "./transform.js";

export interface GoalClick {
  cmd: SetGoalCmd;
  warning: string | null;
}

export function goalForClick(map: MapMsg | null, transform: MapTransform | null,
                             px: number, py: number,
                             cells?: Uint8Array): GoalClick | null {
  if (!map || !transform) return null; // no map yet: clicking is a no-op
  const [x, y] = transform.screenToWorld(px, py);
  const cmd: SetGoalCmd = { type: "setGoal", x, y };
  const col = Math.floor((x - map.origin[0]) / map.resolution);
  const row = Math.floor((y - map.origin[1]) / map.resolution);
  let warning: string | null = null;
  if (col < 0 || col >= map.width || row < 0 || row >= map.height) {
    warning = "clicked outside the map";
  } else {
    const grid = cells ?? decodeRuns(map);
    if (grid[row * map.width + col]) {
      warning = "clicked an occupied cell; the planner will refuse it";
    }
  }
  return { cmd, warning };
}
