// Operator input: WASD keys and an optional gamepad, sampled on a fixed
// 10 Hz timer independent of the render rate. On release, one zero command
// is sent and then the channel goes quiet.

import type { TeleopCmd } from "./protocol.js";

export const COMMAND_PERIOD_MS = 100;
export const MAX_LINEAR = 0.4;   // m/s
export const MAX_ANGULAR = 1.0;  // rad/s

export interface InputSample {
  forward: number; // [-1, 1]
  turn: number;    // [-1, 1], positive = counterclockwise
}

export function keysToSample(pressed: ReadonlySet<string>): InputSample {
  let forward = 0;
  let turn = 0;
  if (pressed.has("w") || pressed.has("arrowup")) forward += 1;
  if (pressed.has("s") || pressed.has("arrowdown")) forward -= 1;
  if (pressed.has("a") || pressed.has("arrowleft")) turn += 1;
  if (pressed.has("d") || pressed.has("arrowright")) turn -= 1;
  return { forward, turn };
}

export function gamepadToSample(axes: readonly number[]): InputSample {
  const dead = (v: number) => (Math.abs(v) < 0.12 ? 0 : v);
  const flip = (v: number) => (v === 0 ? 0 : -v); // avoid -0 artifacts
  // left stick: axis 1 is forward (up = -1), axis 0 is lateral (right = +1)
  return { forward: flip(dead(axes[1] ?? 0)), turn: flip(dead(axes[0] ?? 0)) };
}

export function sampleToCommand(sample: InputSample): TeleopCmd {
  const clamp = (v: number) => Math.max(-1, Math.min(1, v));
  return {
    type: "teleop",
    linear: clamp(sample.forward) * MAX_LINEAR,
    angular: clamp(sample.turn) * MAX_ANGULAR,
  };
}

function isActive(sample: InputSample): boolean {
  return sample.forward !== 0 || sample.turn !== 0;
}

/** Emits a command every tick while input is active and exactly one zero
 * command on the tick after it goes idle. */
export class TeleopCadence {
  private wasActive = false;

  next(sample: InputSample): TeleopCmd | null {
    const active = isActive(sample);
    if (active) {
      this.wasActive = true;
      return sampleToCommand(sample);
    }
    if (this.wasActive) {
      this.wasActive = false;
      return { type: "teleop", linear: 0, angular: 0 };
    }
    return null;
  }
}

export class KeyboardTracker {
  readonly pressed = new Set<string>();

  attach(target: { addEventListener: Window["addEventListener"] }): void {
    target.addEventListener("keydown", (ev) => {
      this.pressed.add((ev as KeyboardEvent).key.toLowerCase());
    });
    target.addEventListener("keyup", (ev) => {
      this.pressed.delete((ev as KeyboardEvent).key.toLowerCase());
    });
    target.addEventListener("blur", () => this.pressed.clear());
  }
}
