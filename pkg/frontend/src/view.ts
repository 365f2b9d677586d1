/** Pure view: snapshot JSON in, HTML string out. All state lives on the
 * server; rendering the latest snapshot is the whole UI contract. */

import type { Snapshot } from "./api.js";

export interface UiFlags {
  busy?: boolean;
  notice?: string | null;
}

function esc(text: string): string {
  return text.replace(/[&<>"]/g, (c) =>
    ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" }[c] as string));
}

function confidenceClass(value: number): string {
  return value >= 0.8 ? "conf-high" : value >= 0.4 ? "conf-mid" : "conf-low";
}

export function renderHypothesis(snapshot: Snapshot): string {
  if (!snapshot.hypothesis) return "";
  const words = snapshot.hypothesis.words.map((word, i) => {
    const conf = snapshot.hypothesis!.confidences[i] ?? 0;
    return `<span class="word ${confidenceClass(conf)}" title="${conf.toFixed(2)}">${esc(word)}</span>`;
  });
  const buttons = snapshot.state === "recognized"
    ? `<div class="confirm-bar">
         <button id="confirm" class="primary">confirm</button>
         <button id="repeat">repeat</button>
       </div>`
    : "";
  return `<section class="hypothesis"><h2>heard</h2><p>${words.join(" ")}</p>${buttons}</section>`;
}

export function renderAnswer(snapshot: Snapshot): string {
  if (!snapshot.answer) return "";
  return `<section class="answer">
    <p class="answer-hindi">${esc(snapshot.answer.hindi)}</p>
    <p class="answer-english">${esc(snapshot.answer.english)}</p>
  </section>`;
}

export function renderResults(snapshot: Snapshot): string {
  if (!snapshot.results) return "";
  const rows = snapshot.results.map((row) =>
    `<li><span class="rank">${row.number}.</span> ${esc(row.title)}
      <span class="url">${esc(row.url)}</span>
      <span class="score">${row.score.toFixed(3)}</span></li>`);
  return `<section class="results"><h2>results</h2><ol>${rows.join("")}</ol></section>`;
}

export function renderLinks(snapshot: Snapshot): string {
  if (!snapshot.links) return "";
  const badges = snapshot.links.map((link) =>
    `<button class="link-badge" data-number="${link.number}">
       <span class="badge">${link.number}</span> ${esc(link.text)}
     </button>`);
  const hint = snapshot.links.length
    ? `<p class="hint">click a badge or type its number to follow the link</p>`
    : "";
  return `<section class="links"><h2>links on this page</h2>${badges.join("")}${hint}</section>`;
}

export function renderMessage(snapshot: Snapshot, flags: UiFlags): string {
  const parts: string[] = [];
  if (flags.notice) parts.push(`<p class="notice">${esc(flags.notice)}</p>`);
  if (snapshot.message) parts.push(`<p class="message">${esc(snapshot.message)}</p>`);
  return parts.join("");
}

/** The full console body under the input bar. */
export function renderSnapshot(snapshot: Snapshot, flags: UiFlags = {}): string {
  return [
    `<p class="state">state: <strong>${esc(snapshot.state)}</strong>${flags.busy ? " &#8943;" : ""}</p>`,
    renderMessage(snapshot, flags),
    renderHypothesis(snapshot),
    renderAnswer(snapshot),
    renderResults(snapshot),
    renderLinks(snapshot),
  ].join("\n");
}
