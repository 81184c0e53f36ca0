import { Api } from "./api.js";
import { LiveFeed } from "./feed.js";
import type { FilterCriteria, SortKey } from "./store.js";
import { emptyStateHtml, rowHtml, tableHtml } from "./view.js";
import type { ConnectionState } from "./types.js";

const params = new URLSearchParams(window.location.search);
const api = new Api(params.get("endpoint") ?? "");

const el = {
  session: document.getElementById("session") as HTMLInputElement,
  connect: document.getElementById("connect") as HTMLButtonElement,
  newSession: document.getElementById("new-session") as HTMLButtonElement,
  status: document.getElementById("status") as HTMLSpanElement,
  error: document.getElementById("error") as HTMLDivElement,
  student: document.getElementById("filter-student") as HTMLInputElement,
  verdict: document.getElementById("filter-verdict") as HTMLSelectElement,
  minScore: document.getElementById("filter-min") as HTMLInputElement,
  maxScore: document.getElementById("filter-max") as HTMLInputElement,
  sort: document.getElementById("sort") as HTMLSelectElement,
  clear: document.getElementById("clear-filters") as HTMLButtonElement,
  exportBtn: document.getElementById("export") as HTMLAnchorElement,
  count: document.getElementById("count") as HTMLSpanElement,
  table: document.getElementById("table") as HTMLDivElement,
};

let sessionId = "";

import type { EventSourceLike } from "./feed.js";

const feed = new LiveFeed(
  // handler parameter variance only; EventSource calls match at runtime
  (url) => new EventSource(url) as unknown as EventSourceLike,
  (sid) => api.fetchListing(sid),
  { onRows: render, onStatus: showStatus },
);

function criteria(): FilterCriteria {
  const c: FilterCriteria = {};
  if (el.student.value.trim()) c.student = el.student.value.trim();
  if (el.verdict.value === "Pass" || el.verdict.value === "Retry") c.verdict = el.verdict.value;
  if (el.minScore.value !== "") c.minScore = Number(el.minScore.value);
  if (el.maxScore.value !== "") c.maxScore = Number(el.maxScore.value);
  return c;
}

function render(): void {
  const rows = feed.store.view(criteria(), el.sort.value as SortKey);
  el.count.textContent = `${rows.length} of ${feed.store.size} observations`;
  el.table.innerHTML = rows.length
    ? tableHtml(rows.map((r) => rowHtml(r, api.imageUrl(sessionId, r.observation.id))))
    : emptyStateHtml();
}

function showStatus(state: ConnectionState): void {
  el.status.textContent = state;
  el.status.className = `status ${state}`;
}

function showError(message: string): void {
  el.error.textContent = message;
  el.error.hidden = false;
  setTimeout(() => (el.error.hidden = true), 6000);
}

function connectTo(sid: string): void {
  sessionId = sid;
  el.session.value = sid;
  feed.store.clear();
  render();
  feed.connect(sid, api.streamUrl(sid));
  el.exportBtn.href = api.exportUrl(sid);
  el.exportBtn.classList.remove("disabled");
  const url = new URL(window.location.href);
  url.searchParams.set("session", sid);
  window.history.replaceState(null, "", url.toString());
}

el.connect.addEventListener("click", () => {
  const sid = el.session.value.trim();
  if (sid) connectTo(sid);
});

el.newSession.addEventListener("click", async () => {
  try {
    connectTo(await api.createSession());
  } catch (err) {
    showError(String(err));
  }
});

for (const input of [el.student, el.minScore, el.maxScore]) {
  input.addEventListener("input", render);
}
el.verdict.addEventListener("change", render);
el.sort.addEventListener("change", render);
el.clear.addEventListener("click", () => {
  el.student.value = "";
  el.verdict.value = "";
  el.minScore.value = "";
  el.maxScore.value = "";
  render();
});

const fromUrl = params.get("session");
if (fromUrl) {
  connectTo(fromUrl);
} else {
  render();
}
