// Thin typed client for the session + sharing API.

import type { ExpandResult, GraphModel, SnapshotDoc, StyleDoc } from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: Record<string, unknown> = {},
  ) {
    super(message);
  }

  get retryAfterSeconds(): number {
    const raw = this.detail['retry_after_seconds'];
    return typeof raw === 'number' ? raw : 0;
  }
}

async function request<T>(input: string, init?: RequestInit): Promise<T> {
  const response = await fetch(input, init);
  if (!response.ok) {
    let code = 'http_error';
    let message = `${response.status}`;
    let detail: Record<string, unknown> = {};
    try {
      const body = await response.json();
      code = body.code ?? code;
      message = body.message ?? message;
      detail = body.detail ?? {};
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, code, message, detail);
  }
  return (await response.json()) as T;
}

function post(body: unknown): RequestInit {
  return {
    method: 'POST',
    headers: { 'content-type': 'application/json' },
    body: JSON.stringify(body),
  };
}

export interface SessionResponse {
  session_id: string;
  graph: GraphModel;
}

export class ApiClient {
  constructor(private base = '') {}

  createSession(body?: object): Promise<SessionResponse> {
    return request(`${this.base}/api/sessions`, post(body ?? {}));
  }

  getGraph(sessionId: string): Promise<GraphModel> {
    return request(`${this.base}/api/sessions/${sessionId}/graph`);
  }

  seed(sessionId: string, corpusId: number): Promise<{ corpus_id: number; graph: GraphModel }> {
    return request(`${this.base}/api/sessions/${sessionId}/seed`, post({ corpus_id: corpusId }));
  }

  expand(
    sessionId: string,
    node: number,
    direction: 'references' | 'citations',
    strategy: string,
    batchSize = 5,
  ): Promise<{ result: ExpandResult; graph: GraphModel }> {
    return request(
      `${this.base}/api/sessions/${sessionId}/expand`,
      post({ node, direction, strategy, batch_size: batchSize }),
    );
  }

  patchStyle(sessionId: string, delta: Partial<StyleDoc>): Promise<{ style: StyleDoc }> {
    return request(`${this.base}/api/sessions/${sessionId}/style`, {
      method: 'PATCH',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(delta),
    });
  }

  runLayout(sessionId: string, body: object): Promise<{ graph: GraphModel }> {
    return request(`${this.base}/api/sessions/${sessionId}/layout`, post(body));
  }

  publish(doc: SnapshotDoc): Promise<{ share_id: string; url: string }> {
    return request(`${this.base}/api/snapshots`, post(doc));
  }

  getSnapshot(shareId: string): Promise<SnapshotDoc> {
    return request(`${this.base}/api/snapshots/${shareId}`);
  }
}
