import { describe, expect, it } from "vitest";

import type { FrameMsg, MapMsg } from "../src/protocol.js";
import { applyMessage, initialState } from "../src/store.js";
import { loadSession } from "./session.js";

const session = loadSession();
const mapMsg = session.find((m) => m.type === "map") as MapMsg;
const frames = session.filter((m): m is FrameMsg => m.type === "frame");

function withMap() {
  return applyMessage(initialState(), mapMsg).state;
}

describe("view state reducer", () => {
  it("drops frames arriving before the map", () => {
    const { state } = applyMessage(initialState(), frames[0]);
    expect(state.frame).toBeNull();
  });

  it("drops stale frames by timestamp", () => {
    let state = withMap();
    state = applyMessage(state, frames[5]).state;
    const stale = applyMessage(state, frames[2]).state;
    expect(stale.frame).toBe(state.frame);
    const repeat = applyMessage(state, frames[5]).state;
    expect(repeat.frame).toBe(state.frame);
  });

  it("advances on newer frames", () => {
    let state = withMap();
    state = applyMessage(state, frames[0]).state;
    state = applyMessage(state, frames[1]).state;
    expect(state.frame).toBe(frames[1]);
  });

  it("reconnect rebuilds the whole view from map + next frame", () => {
    let state = withMap();
    state = applyMessage(state, frames[10]).state;
    // a fresh map message (reconnect) resets run state
    state = applyMessage(state, mapMsg).state;
    expect(state.frame).toBeNull();
    state = applyMessage(state, frames[0]).state;
    expect(state.frame).toBe(frames[0]); // t guard was reset too
  });

  it("every denied and every loaSwitch yields exactly one notification", () => {
    let state = withMap();
    let count = 0;
    for (const msg of session) {
      const applied = applyMessage(state, msg);
      state = applied.state;
      count += applied.notes.filter(
        (n) => n.kind === "denied" || n.kind === "loaSwitch").length;
    }
    const expected = session.filter(
      (m) => m.type === "denied" || m.type === "loaSwitch").length;
    expect(count).toBe(expected);
  });
});
