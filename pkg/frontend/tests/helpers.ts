import type { ResultEntry } from "../src/types.js";

export function makeEntry(i: number, overrides: Partial<{ student: string; verdict: "Pass" | "Retry"; score: number; timestamp: string }> = {}): ResultEntry {
  const id = `obs-${String(i).padStart(6, "0")}`;
  return {
    observation: {
      id,
      session_id: "s1",
      student: overrides.student ?? `kid${i}`,
      timestamp: overrides.timestamp ?? `2026-08-10T10:00:${String(i % 60).padStart(2, "0")}+00:00`,
      coords: { x: i, y: 64, z: -i, yaw: 0, pitch: 0 },
      caption: `a red rock number ${i}`,
      image_ref: `images/${id}.png`,
    },
    result: {
      observation_id: id,
      generated_caption: `a gray rock number ${i}`,
      score: overrides.score ?? 0.25 + 0.1 * (i % 7),
      keywords: ["rock", "gray"],
      verdict: overrides.verdict ?? ((i % 7) >= 3 ? "Pass" : "Retry"),
      feedback_text:
        (overrides.verdict ?? ((i % 7) >= 3 ? "Pass" : "Retry")) === "Pass"
          ? "Excellent work, you noticed the rock and gray here!"
          : "Try again! Did you notice the rock and gray?",
      encoder_identity: "hashing-bow-v1-d256",
      latency_ms: 40,
    },
  };
}
