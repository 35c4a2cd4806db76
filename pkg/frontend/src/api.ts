// Thin typed client over the session endpoints. All mutations go through
// here; the UI never computes or rewrites session state on its own.

import type { DocumentRecord, SessionState } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  constructor(
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function parse<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const message =
      body && typeof body.error === "string" ? body.error : `HTTP ${response.status}`;
    throw new ApiRequestError(message, response.status);
  }
  return body as T;
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.fetchImpl(`${this.base}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    }).then((r) => parse<T>(r));
  }

  private get<T>(path: string): Promise<T> {
    return this.fetchImpl(`${this.base}${path}`).then((r) => parse<T>(r));
  }

  registerCorpus(path: string): Promise<{ corpus_id: string }> {
    return this.post("/api/corpora", { path });
  }

  createSession(corpusId: string, config: unknown): Promise<SessionState> {
    return this.post("/api/sessions", { corpus_id: corpusId, config });
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.get(`/api/sessions/${encodeURIComponent(sessionId)}`);
  }

  gather(sessionId: string, clusterIds: string[], k?: number): Promise<SessionState> {
    const payload: { clusters: string[]; k?: number } = { clusters: clusterIds };
    if (k !== undefined) payload.k = k;
    return this.post(`/api/sessions/${encodeURIComponent(sessionId)}/gather`, payload);
  }

  back(sessionId: string): Promise<SessionState> {
    return this.post(`/api/sessions/${encodeURIComponent(sessionId)}/back`, {});
  }

  getDocument(sessionId: string, docId: string): Promise<DocumentRecord> {
    return this.get(
      `/api/sessions/${encodeURIComponent(sessionId)}/documents/${encodeURIComponent(docId)}`,
    );
  }
}
