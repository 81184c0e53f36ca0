export interface Coords {
  x: number;
  y: number;
  z: number;
  yaw: number;
  pitch: number;
}

export interface Observation {
  id: string;
  session_id: string;
  student: string;
  timestamp: string;
  coords: Coords;
  caption: string;
  image_ref: string;
}

export interface AssessmentResult {
  observation_id: string;
  generated_caption: string;
  score: number;
  keywords: string[];
  verdict: "Pass" | "Retry";
  feedback_text: string;
  encoder_identity: string;
  latency_ms: number;
}

export interface ResultEntry {
  observation: Observation;
  result: AssessmentResult;
}

export type ConnectionState = "connecting" | "connected" | "disconnected";
