/** Console wiring: one in-flight request at a time, every response (or
 * error) re-rendered straight from the server snapshot. */

import { ApiError, SessionApi, Snapshot } from "./api.js";
import { MicDeniedError, MicRecorder } from "./recorder.js";
import { renderSnapshot, UiFlags } from "./view.js";
import { toCanonicalWav } from "./wav.js";

const api = new SessionApi("");
const recorder = new MicRecorder();

let sessionId = "";
let snapshot: Snapshot | null = null;
let busy = false;
let notice: string | null = null;

const output = () => document.getElementById("output") as HTMLElement;
const textInput = () => document.getElementById("query-text") as HTMLInputElement;
const recordButton = () => document.getElementById("record") as HTMLButtonElement;

function render() {
  const flags: UiFlags = { busy, notice };
  output().innerHTML = snapshot
    ? renderSnapshot(snapshot, flags)
    : `<p class="state">connecting&hellip;</p>`;
  for (const button of output().querySelectorAll<HTMLButtonElement>(".link-badge")) {
    button.onclick = () => run(() => api.select(sessionId, Number(button.dataset.number)));
  }
  const confirm = document.getElementById("confirm");
  if (confirm) (confirm as HTMLButtonElement).onclick = () => run(() => api.confirm(sessionId));
  const repeat = document.getElementById("repeat");
  if (repeat) (repeat as HTMLButtonElement).onclick = () => run(() => api.reject(sessionId));
  for (const el of document.querySelectorAll<HTMLButtonElement>("#input-bar button, #input-bar input")) {
    (el as HTMLButtonElement | HTMLInputElement).disabled = busy;
  }
}

async function run(action: () => Promise<Snapshot>) {
  if (busy || !sessionId) return;
  busy = true;
  notice = null;
  render();
  try {
    snapshot = await action();
  } catch (err) {
    if (err instanceof ApiError) {
      notice = `${err.error}: ${err.message}`;
      snapshot = await api.getState(sessionId);  // view = server truth
    } else {
      notice = String(err);
    }
  } finally {
    busy = false;
    render();
  }
}

async function submitTyped() {
  const text = textInput().value.trim();
  await run(() => api.submitText(sessionId, text));
  textInput().value = "";
}

async function toggleRecording() {
  if (!recorder.recording) {
    try {
      await recorder.start();
      recordButton().textContent = "stop";
      notice = "recording… press stop to submit";
      render();
    } catch (err) {
      if (err instanceof MicDeniedError) {
        // microphone denied: fall back to the text box
        notice = "microphone unavailable; type the query instead";
        textInput().focus();
        render();
        return;
      }
      throw err;
    }
    return;
  }
  const samples = await recorder.stop();
  recordButton().textContent = "record";
  const wav = toCanonicalWav(samples, recorder.captureRate);
  await run(() => api.submitAudio(sessionId, wav));
}

function onKey(event: KeyboardEvent) {
  if (document.activeElement === textInput()) return;
  if (!snapshot || !/^[1-9]$/.test(event.key)) return;
  if (snapshot.state !== "results" && snapshot.state !== "navigated") return;
  run(() => api.select(sessionId, Number(event.key)));
}

async function boot() {
  const created = await api.createSession();
  sessionId = created.id;
  snapshot = await api.getState(sessionId);
  render();
  (document.getElementById("submit") as HTMLButtonElement).onclick = submitTyped;
  recordButton().onclick = toggleRecording;
  textInput().addEventListener("keydown", (event) => {
    if (event.key === "Enter") submitTyped();
  });
  document.addEventListener("keydown", onKey);
}

boot().catch((err) => {
  output().innerHTML = `<p class="notice">failed to reach the service: ${String(err)}</p>`;
});
