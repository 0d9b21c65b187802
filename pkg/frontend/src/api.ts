// Typed client for the gazegroup service. fetch is injected so tests can
// stub the transport; stale responses are discarded by sequence number.

import type {
  ApiErrorBody,
  ClusterRequest,
  ClusterResponse,
  LayoutResponse,
  MetricsResponse,
  ScanpathResponse,
  SessionCreated,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: unknown = null,
  ) {
    super(message);
  }
}

export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    body?: string | Uint8Array;
    headers?: Record<string, string>;
  },
) => Promise<{
  status: number;
  ok: boolean;
  json(): Promise<unknown>;
}>;

async function raiseForStatus(
  response: Awaited<ReturnType<FetchLike>>,
): Promise<unknown> {
  const body = await response.json();
  if (!response.ok) {
    const err = body as Partial<ApiErrorBody>;
    throw new ApiError(
      response.status,
      err.code ?? "unknown_error",
      err.message ?? `request failed with ${response.status}`,
      err.detail,
    );
  }
  return body;
}

export class ServiceClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = fetch as unknown as FetchLike,
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(csv: Uint8Array | string): Promise<SessionCreated> {
    const response = await this.fetchFn(this.url("/sessions"), {
      method: "POST",
      body: csv,
      headers: { "Content-Type": "text/csv" },
    });
    return (await raiseForStatus(response)) as SessionCreated;
  }

  async getMetrics(sessionId: string): Promise<MetricsResponse> {
    const response = await this.fetchFn(
      this.url(`/sessions/${sessionId}/metrics`),
    );
    return (await raiseForStatus(response)) as MetricsResponse;
  }

  async postCluster(
    sessionId: string,
    request: ClusterRequest,
  ): Promise<ClusterResponse> {
    const response = await this.fetchFn(
      this.url(`/sessions/${sessionId}/cluster`),
      {
        method: "POST",
        body: JSON.stringify(request),
        headers: { "Content-Type": "application/json" },
      },
    );
    return (await raiseForStatus(response)) as ClusterResponse;
  }

  async getMatrix(sessionId: string, key?: string): Promise<LayoutResponse> {
    const query = key ? `?key=${encodeURIComponent(key)}` : "";
    const response = await this.fetchFn(
      this.url(`/sessions/${sessionId}/matrix${query}`),
    );
    return (await raiseForStatus(response)) as LayoutResponse;
  }

  async getScanpath(
    sessionId: string,
    participantId: string,
    stimulusId: string,
  ): Promise<ScanpathResponse> {
    const response = await this.fetchFn(
      this.url(
        `/sessions/${sessionId}/scanpaths/${encodeURIComponent(
          participantId,
        )}/${encodeURIComponent(stimulusId)}`,
      ),
    );
    return (await raiseForStatus(response)) as ScanpathResponse;
  }
}

// Keeps only the newest in-flight request per channel relevant; older
// responses resolve but are flagged stale so the UI drops them.
export class RequestGate {
  private seq = 0;

  begin(): number {
    return ++this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }

  async run<T>(request: () => Promise<T>): Promise<T | null> {
    const token = this.begin();
    const result = await request();
    return this.isCurrent(token) ? result : null;
  }
}
