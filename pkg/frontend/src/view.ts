import type { ResultEntry } from "./types.js";

function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/**
 * One table row. Every row carries the four mandated columns: username,
 * the student's observation, the AI caption, and the feedback, plus the
 * POV thumbnail and a score/verdict badge for triage.
 */
export function rowHtml(entry: ResultEntry, imageUrl: string): string {
  const { observation: obs, result } = entry;
  const badgeClass = result.verdict === "Pass" ? "badge pass" : "badge retry";
  const when = new Date(obs.timestamp).toLocaleTimeString();
  return `<tr data-id="${escapeHtml(obs.id)}">
    <td class="student">${escapeHtml(obs.student)}<div class="when">${escapeHtml(when)}</div></td>
    <td class="thumb"><img src="${escapeHtml(imageUrl)}" alt="POV of ${escapeHtml(obs.student)}" loading="lazy"></td>
    <td class="caption">${escapeHtml(obs.caption)}</td>
    <td class="generated">${escapeHtml(result.generated_caption)}</td>
    <td class="verdict"><span class="${badgeClass}">${escapeHtml(result.verdict)} ${result.score.toFixed(2)}</span></td>
    <td class="feedback">${escapeHtml(result.feedback_text)}</td>
  </tr>`;
}

export function tableHtml(rows: string[]): string {
  return `<table class="observations">
    <thead><tr>
      <th>Student</th><th>POV</th><th>Observation</th><th>AI caption</th><th>Score</th><th>Feedback</th>
    </tr></thead>
    <tbody>${rows.join("\n")}</tbody>
  </table>`;
}

export function emptyStateHtml(): string {
  return `<p class="empty">No observations yet — waiting for learners.</p>`;
}
