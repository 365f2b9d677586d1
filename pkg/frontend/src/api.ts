/** Typed client for the session HTTP API. The browser does no pipeline
 * work of its own: every view is a render of a server snapshot. */

export interface Hypothesis {
  words: string[];
  confidences: number[];
}

export interface ResultRow {
  rank: number;
  number: number;
  title: string;
  url: string;
  score: number;
}

export interface NumberedLink {
  number: number;
  text: string;
  href: string;
}

export interface AnswerCard {
  english: string;
  hindi: string;
}

export interface Snapshot {
  id: string;
  state: string;
  page: string | null;
  hypothesis: Hypothesis | null;
  results: ResultRow[] | null;
  links: NumberedLink[] | null;
  answer: AnswerCard | null;
  message: string | null;
}

export class ApiError extends Error {
  constructor(public status: number, public error: string, detail: string) {
    super(detail);
  }
}

async function parse(res: Response): Promise<Snapshot> {
  const body = await res.json();
  if (!res.ok) {
    throw new ApiError(res.status, body.error ?? "error", body.detail ?? res.statusText);
  }
  return body as Snapshot;
}

export class SessionApi {
  constructor(private baseUrl: string = "") {}

  async createSession(): Promise<{ id: string; state: string }> {
    const res = await fetch(`${this.baseUrl}/api/session`, { method: "POST" });
    if (!res.ok) throw new ApiError(res.status, "error", await res.text());
    return res.json();
  }

  async submitText(id: string, text: string): Promise<Snapshot> {
    const res = await fetch(`${this.baseUrl}/api/session/${id}/query`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
    return parse(res);
  }

  async submitAudio(id: string, wav: ArrayBuffer): Promise<Snapshot> {
    const res = await fetch(`${this.baseUrl}/api/session/${id}/query`, {
      method: "POST",
      headers: { "content-type": "audio/wav" },
      body: wav,
    });
    return parse(res);
  }

  async confirm(id: string): Promise<Snapshot> {
    return parse(await fetch(`${this.baseUrl}/api/session/${id}/confirm`, { method: "POST" }));
  }

  async reject(id: string): Promise<Snapshot> {
    return parse(await fetch(`${this.baseUrl}/api/session/${id}/reject`, { method: "POST" }));
  }

  async select(id: string, n: number): Promise<Snapshot> {
    const res = await fetch(`${this.baseUrl}/api/session/${id}/select`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ n }),
    });
    return parse(res);
  }

  async getState(id: string): Promise<Snapshot> {
    return parse(await fetch(`${this.baseUrl}/api/session/${id}`));
  }
}
