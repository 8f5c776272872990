// Protocol conformance against a recorded gateway session (robot-initiative
// run: one denied operator switch, one switcher-initiated rescue).

import { describe, expect, it } from "vitest";

import { decodeRuns, rasterize, FREE_RGBA, WALL_RGBA } from "../src/map.js";
import type { FrameMsg, MapMsg } from "../src/protocol.js";
import { applyMessage, initialState, type Notification } from "../src/store.js";
import { loadSession } from "./session.js";

const session = loadSession();
const mapMsg = session.find((m) => m.type === "map") as MapMsg;

function replayAll() {
  let state = initialState();
  const notes: Notification[] = [];
  const poses: FrameMsg["robotPose"][] = [];
  const loas: string[] = [];
  for (const msg of session) {
    const applied = applyMessage(state, msg);
    state = applied.state;
    notes.push(...applied.notes);
    if (state.frame && msg.type === "frame") {
      poses.push(state.frame.robotPose);
      loas.push(state.frame.loa);
    }
  }
  return { state, notes, poses, loas };
}

describe("recorded session", () => {
  it("starts with the map and the map renders walls and free space", () => {
    expect(session[0].type).toBe("map");
    const cells = decodeRuns(mapMsg);
    expect(cells.length).toBe(mapMsg.width * mapMsg.height);
    const raster = rasterize(mapMsg);
    // border wall at the top-left pixel, free space mid-map
    const corner = Array.from(raster.data.slice(0, 4));
    expect(corner).toEqual(Array.from(WALL_RGBA));
    const mid = ((mapMsg.height >> 1) * mapMsg.width + (mapMsg.width >> 1)) * 4;
    expect(Array.from(raster.data.slice(mid, mid + 4)))
      .toEqual(Array.from(FREE_RGBA));
  });

  it("frames tick at 10 Hz and update the pose", () => {
    const frames = session.filter((m): m is FrameMsg => m.type === "frame");
    expect(frames.length).toBeGreaterThan(50);
    const deltas = new Set(
      frames.slice(1).map((f, i) => Math.round((f.t - frames[i].t) * 1000)));
    expect(deltas).toEqual(new Set([100]));
    const { poses } = replayAll();
    const first = poses[0];
    const last = poses[poses.length - 1];
    expect(Math.hypot(last[0] - first[0], last[1] - first[1]))
      .toBeGreaterThan(0.5); // the rescue drove the robot
  });

  it("updates the LOA indicator when the switcher takes over", () => {
    const { loas } = replayAll();
    expect(loas[0]).toBe("teleoperation");
    expect(loas[loas.length - 1]).toBe("autonomy");
  });

  it("produces exactly one notification for the loaSwitch message", () => {
    const { notes } = replayAll();
    const switches = notes.filter((n) => n.kind === "loaSwitch");
    expect(switches.length).toBe(1);
    expect(switches[0].text).toContain("autonomy");
    expect(switches[0].text).toContain("EMICS");
  });

  it("surfaces the denial reason for switchLoa under robot-initiative", () => {
    const { notes } = replayAll();
    const denials = notes.filter((n) => n.kind === "denied");
    expect(denials.length).toBe(1);
    expect(denials[0].text).toContain("RI");
  });

  it("stores the end-of-run metrics", () => {
    const { state, notes } = replayAll();
    expect(state.metrics).not.toBeNull();
    expect(notes.some((n) => n.kind === "info")).toBe(true);
  });
});
