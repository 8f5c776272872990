// Wire protocol of the simulation gateway. The console consumes it verbatim.

export type Pose = [number, number, number]; // x, y, theta
export type Point = [number, number];

export interface MapMsg {
  type: "map";
  width: number;
  height: number;
  resolution: number; // meters per cell
  origin: Pose;       // world pose of cell (0, 0)'s lower-left corner
  runs: number[];     // row-major run lengths, alternating free/occupied, free first
  digest: string;
}

export interface FrameMsg {
  type: "frame";
  t: number;
  robotPose: Pose; // estimated pose
  loa: "teleoperation" | "autonomy";
  controlMode: string;
  eFiltered: number;
  goal: Point | null;
  plannedPath: Point[];
  scanPoints: Point[];
  mapDigest: string;
}

export interface LoaSwitchMsg {
  type: "loaSwitch";
  t: number;
  loa: string;
  initiator: "operator" | "emics";
  reason: string;
}

export interface DeniedMsg {
  type: "denied";
  reason: string;
}

export interface MetricsMsg {
  type: "metrics";
  completionTime?: number;
  collisions?: number;
  score?: number;
  [key: string]: unknown;
}

export type ServerMsg = MapMsg | FrameMsg | LoaSwitchMsg | DeniedMsg | MetricsMsg;

export interface TeleopCmd {
  type: "teleop";
  linear: number;  // m/s
  angular: number; // rad/s
}

export interface SetGoalCmd {
  type: "setGoal";
  x: number;
  y: number;
}

export interface SwitchLoaCmd {
  type: "switchLoa";
}

export type ClientCmd = TeleopCmd | SetGoalCmd | SwitchLoaCmd;

export function parseServerMsg(raw: string): ServerMsg | null {
  let msg: unknown;
  try {
    msg = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof msg !== "object" || msg === null) return null;
  const type = (msg as { type?: unknown }).type;
  if (type === "map" || type === "frame" || type === "loaSwitch" ||
      type === "denied" || type === "metrics") {
    return msg as ServerMsg;
  }
  return null;
}
