// Map-free pose kinematics mirrored from the trace semantics: a trace record
// carries the pose before its action, so the pose after is derivable. This is
// decoding, not invention; every transition comes from a received record.

import type { ActionName, Heading, PoseMsg, TraceRecordMsg } from "./protocol.js";

const CCW: Record<Heading, Heading> = { N: "W", W: "S", S: "E", E: "N" };
const CW: Record<Heading, Heading> = { N: "E", E: "S", S: "W", W: "N" };
const VECTOR: Record<Heading, [number, number]> = {
  N: [0, -1],
  E: [1, 0],
  S: [0, 1],
  W: [-1, 0],
};

export function opposite(heading: Heading): Heading {
  return CCW[CCW[heading]];
}

export function poseAfter(record: TraceRecordMsg): PoseMsg {
  const { pose, action } = record;
  if (action === "LiftOff" || action === "Ask") return pose;
  let heading: Heading = pose.heading;
  let along: Heading;
  switch (action as Exclude<ActionName, "LiftOff" | "Ask">) {
    case "Forward":
      along = heading;
      break;
    case "Backward":
      along = opposite(heading);
      break;
    case "TurnLeft":
      heading = CCW[pose.heading];
      along = heading;
      break;
    case "TurnRight":
      heading = CW[pose.heading];
      along = heading;
      break;
  }
  const [dx, dy] = VECTOR[along];
  return { x: pose.x + dx, y: pose.y + dy, heading };
}
