/** Typed client for the semviz HTTP API. Stateless: every request carries
 * its full filter context, so callers can replay or cache freely. */

export interface Filter {
  field: string;
  term: string;
}

export interface TermCount {
  term: string;
  count: number;
}

export interface TagCloudResponse {
  field: string;
  k: number;
  terms: TermCount[];
}

export interface HeatMapResponse {
  x: string;
  y: string;
  x_terms: string[];
  y_terms: string[];
  cells: number[][];
}

export interface TableRow {
  doc_id: string;
  sentence: string;
  url: string | null;
  pmid: string | null;
  subject: string;
  object: string;
  relation: string;
}

export interface TableResponse {
  total: number;
  page: number;
  page_size: number;
  rows: TableRow[];
}

export interface MetricsResponse {
  evidence_count: number;
  article_count: number;
}

export interface HistogramResponse {
  granularity: string;
  buckets: { bucket: string; count: number }[];
}

export interface StatsResponse extends MetricsResponse {
  functional_type_count: number;
  record_count: number;
}

export interface RankedEntity {
  entity: string;
  display: string;
  count: number;
}

export interface EvidenceDocPayload {
  id: string;
  sentence: string;
  pmid: string | null;
  url: string | null;
  aligned: boolean;
}

export interface PathwayEntry {
  nodes: string[];
  relations: string[];
  net_polarity: string;
  length: number;
  first_edge_evidence?: EvidenceDocPayload[];
}

export interface PathwaysResponse {
  target: string;
  target_display: string;
  effective_depth: number;
  walk_estimate: number;
  regulators: RankedEntity[];
  upstream: RankedEntity[];
  pathway_count: number;
  pathways: PathwayEntry[];
}

export interface ApiError {
  error: { code: string; message: string; field?: string };
}

/** Minimal fetch contract so tests can substitute a request-logging double. */
export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export interface ContextPayload {
  filters: Filter[];
  text?: string;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...(args as [string])),
  ) {}

  private async request<T>(path: string, init?: Parameters<FetchLike>[1]): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const payload = (await response.json()) as T | ApiError;
    if (!response.ok) {
      const message =
        (payload as ApiError).error?.message ?? `request failed (${response.status})`;
      throw new Error(message);
    }
    return payload as T;
  }

  private post<T>(path: string, body: object): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  stats(): Promise<StatsResponse> {
    return this.request("/api/stats");
  }

  tagCloud(
    ctx: ContextPayload,
    field: string,
    k: number,
    extraFilters: Filter[] = [],
  ): Promise<TagCloudResponse> {
    return this.post("/api/agg/tagcloud", {
      ...ctx,
      filters: [...ctx.filters, ...extraFilters],
      field,
      k,
    });
  }

  heatMap(
    ctx: ContextPayload,
    x: string,
    y: string,
    kx: number,
    ky: number,
  ): Promise<HeatMapResponse> {
    return this.post("/api/agg/heatmap", { ...ctx, x, y, kx, ky });
  }

  table(ctx: ContextPayload, page: number, pageSize: number): Promise<TableResponse> {
    return this.post("/api/agg/table", { ...ctx, page, page_size: pageSize });
  }

  metrics(ctx: ContextPayload): Promise<MetricsResponse> {
    return this.post("/api/agg/metrics", ctx);
  }

  histogram(ctx: ContextPayload, granularity: string): Promise<HistogramResponse> {
    return this.post("/api/agg/histogram", { ...ctx, granularity });
  }

  pathways(
    target: string,
    options: { start?: string; k?: number; maxDepth?: number } = {},
  ): Promise<PathwaysResponse> {
    const params = new URLSearchParams({ target });
    if (options.start) params.set("start", options.start);
    if (options.k) params.set("k", String(options.k));
    if (options.maxDepth) params.set("max_depth", String(options.maxDepth));
    return this.request(`/api/pathways?${params.toString()}`);
  }
}
