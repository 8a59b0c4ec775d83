// Typed client for the explanation-serving API. The UI displays served
// values verbatim and never derives statistics of its own.

export interface NumericalSummary {
  kind: "numerical";
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
}

export interface CategoricalEntry {
  label: string;
  count: number;
}

export interface CategoricalSummary {
  kind: "categorical";
  entries: CategoricalEntry[];
}

export type Summary = NumericalSummary | CategoricalSummary;

export interface Marker {
  normalized: number;
  quartile_bucket: string | null;
  segment_index: number | null;
  clamped: boolean;
}

export interface Highlight {
  start?: number;
  end?: number;
  flags?: boolean[];
  degenerate: boolean;
}

export interface Palette {
  positive_color: string;
  negative_color: string;
  highlight_color: string;
  marker_color: string;
}

export interface ViewRow {
  feature: string;
  weight: number;
  weight_sign: "positive" | "negative" | "zero";
  in_rule: boolean;
  summary: Summary;
  highlight: Highlight | null;
  marker: Marker;
  observed: number | string;
}

export interface ViewDoc {
  bundle_id: string;
  prediction: string;
  options: { filter: string; sort: string; palette: Palette };
  rows: ViewRow[];
}

export interface ExplanationInfo {
  id: string;
  schema_ref: string;
  prediction: string;
  premise_size: number;
}

export interface BlockToken {
  role: "feature" | "operator" | "value";
  text: string;
}

export interface BlocksDoc {
  groups: BlockToken[][];
  consequence: BlockToken[];
}

export type FilterMode = "all" | "rule";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function getJson<T>(fetchFn: typeof fetch, url: string): Promise<T> {
  const resp = await fetchFn(url);
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { message?: string };
      if (body.message) detail = body.message;
    } catch {
      // keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(private readonly fetchFn: typeof fetch = fetch.bind(globalThis)) {}

  listExplanations(): Promise<{ explanations: ExplanationInfo[] }> {
    return getJson(this.fetchFn, "/api/explanations");
  }

  fetchView(bundleId: string, filter: FilterMode): Promise<ViewDoc> {
    const id = encodeURIComponent(bundleId);
    return getJson(this.fetchFn, `/api/explanations/${id}/view?filter=${filter}`);
  }

  async fetchText(bundleId: string): Promise<string> {
    const id = encodeURIComponent(bundleId);
    const resp = await this.fetchFn(`/api/explanations/${id}/modality/text`);
    if (!resp.ok) throw new ApiError(resp.status, resp.statusText);
    return resp.text();
  }

  fetchBlocks(bundleId: string): Promise<BlocksDoc> {
    const id = encodeURIComponent(bundleId);
    return getJson(this.fetchFn, `/api/explanations/${id}/modality/blocks`);
  }
}
