// View model: a pure reducer over gateway messages. Rendering reads the
// state; notifications come out exactly once per switch/denial message.

import type { FrameMsg, MapMsg, MetricsMsg, ServerMsg } from "./protocol.js";

export type ConnectionStatus = "connecting" | "connected" | "closed";

export interface Notification {
  kind: "loaSwitch" | "denied" | "info";
  text: string;
}

export interface ViewState {
  map: MapMsg | null;
  frame: FrameMsg | null;
  lastT: number;
  metrics: MetricsMsg | null;
  connection: ConnectionStatus;
}

export function initialState(): ViewState {
  return { map: null, frame: null, lastT: -Infinity, metrics: null,
           connection: "connecting" };
}

export interface Applied {
  state: ViewState;
  notes: Notification[];
}

export function applyMessage(state: ViewState, msg: ServerMsg): Applied {
  switch (msg.type) {
    case "map":
      // a (re)connect resets the run view; everything rebuilds from here
      return {
        state: { ...state, map: msg, frame: null, lastT: -Infinity, metrics: null },
        notes: [],
      };
    case "frame": {
      if (state.map === null || msg.t <= state.lastT) {
        return { state, notes: [] }; // stale or premature frame: dropped
      }
      return { state: { ...state, frame: msg, lastT: msg.t }, notes: [] };
    }
    case "loaSwitch": {
      const who = msg.initiator === "emics" ? "EMICS" : "operator";
      const why = msg.reason ? `: ${msg.reason}` : "";
      return {
        state,
        notes: [{ kind: "loaSwitch",
                  text: `LOA switched to ${msg.loa} (initiated by ${who})${why}` }],
      };
    }
    case "denied":
      return { state, notes: [{ kind: "denied", text: `Denied: ${msg.reason}` }] };
    case "metrics":
      return {
        state: { ...state, metrics: msg },
        notes: [{ kind: "info", text: "Run finished, metrics received" }],
      };
  }
}

export function setConnection(state: ViewState,
                              connection: ConnectionStatus): ViewState {
  return { ...state, connection };
}
