/** Scripted end-to-end run against a live service instance: the exact
 * capital-of-India journey, driven through the same client and view
 * code the browser uses.  The service is spawned from the repo root;
 * set BOLKHOJ_URL to reuse an already-running one. */

import { spawn, ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, SessionApi } from "../src/api.js";
import { renderSnapshot } from "../src/view.js";

const PORT = 8741;
const BASE = process.env.BOLKHOJ_URL ?? `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;

async function up(): Promise<boolean> {
  try {
    const res = await fetch(`${BASE}/api/session`, { method: "POST" });
    return res.ok;
  } catch {
    return false;
  }
}

beforeAll(async () => {
  if (await up()) return;  // external instance
  server = spawn("python3", ["-m", "bolkhoj.cli", "serve", "--no-audio",
                             "--port", String(PORT)],
                 { cwd: "..", stdio: "ignore" });
  for (let i = 0; i < 60; i++) {
    await new Promise((r) => setTimeout(r, 500));
    if (await up()) return;
  }
  throw new Error("service did not come up");
}, 40_000);

afterAll(() => {
  server?.kill();
});

describe("console journey against the live service", () => {
  const api = new SessionApi(BASE);

  it("asks the capital-of-India query, confirms, selects link 1", async () => {
    const { id, state } = await api.createSession();
    expect(state).toBe("await_query");

    let snap = await api.submitText(id, "bharat ki rajdhani kya hai");
    expect(snap.state).toBe("recognized");
    expect(snap.hypothesis?.words).toEqual(["bharat", "ki", "rajdhani", "kya", "hai"]);
    expect(snap.hypothesis?.confidences.every((c) => c === 1.0)).toBe(true);

    snap = await api.confirm(id);
    expect(snap.state).toBe("results");
    expect(snap.results!.length).toBeGreaterThanOrEqual(1);
    expect(snap.results![0].number).toBe(1);
    expect(snap.answer!.hindi).toContain("delhi");
    const rendered = renderSnapshot(snap);
    expect(rendered).toContain("delhi");
    expect(rendered).toContain("data-number=\"1\"");

    snap = await api.select(id, 1);
    expect(snap.state).toBe("navigated");
    expect(snap.links).not.toBeNull();

    // the rendered view equals a render of the server's own snapshot
    const fetched = await api.getState(id);
    expect(renderSnapshot(fetched)).toBe(renderSnapshot(snap));
  });

  it("surfaces an out-of-range selection without losing state", async () => {
    const { id } = await api.createSession();
    await api.submitText(id, "sone ka bhav kya hai");
    const results = await api.confirm(id);
    expect(results.state).toBe("results");
    await expect(api.select(id, 99)).rejects.toBeInstanceOf(ApiError);
    const after = await api.getState(id);
    expect(renderSnapshot(after)).toBe(renderSnapshot(results));
  });

  it("repeat clears the hypothesis and asks again", async () => {
    const { id } = await api.createSession();
    await api.submitText(id, "kya hai");
    const snap = await api.reject(id);
    expect(snap.state).toBe("ask_again");
    expect(snap.hypothesis).toBeNull();
    expect(renderSnapshot(snap)).toContain("repeat the query");
  });
});
