/** Typed client for the review service HTTP+JSON API. */

export type Category = "Spatial" | "Organization" | "Temporal" | "Thematic";
export type Flag = "Pending" | "Accepted" | "Rejected";
export type Decision = "Accepted" | "Rejected";

export const CATEGORIES: readonly Category[] = [
  "Spatial",
  "Organization",
  "Temporal",
  "Thematic",
];

export interface CorpusSummary {
  corpusId: string;
  status: "Queued" | "Running" | "Done";
  documentCount: number;
  failedCount: number;
  progress: { done: number; total: number } | null;
}

export interface Footprint {
  ref: number;
  lat: number;
  lon: number;
}

export interface Annotation {
  id: string;
  category: Category;
  flag: Flag;
  start: number;
  end: number;
  surface: string;
  // Spatial
  kind?: "Absolute" | "Relative";
  relation?: string | null;
  confidence?: number;
  footprint?: Footprint | null;
  // Organization
  trigger?: string;
  // Temporal
  temporalCategory?: "Date" | "Period";
  value?: string;
  // Thematic
  concept?: string;
  matchedVia?: string;
  broader?: string[];
}

export interface DocumentPayload {
  corpusId: string;
  docId: string;
  title: string;
  abstracts: { lang: string; text: string }[];
  annotations: Annotation[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function check(res: Response): Promise<Response> {
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = (await res.json()) as { detail?: unknown };
      if (body.detail !== undefined) detail = String(body.detail);
    } catch {
      /* non-JSON error body; keep statusText */
    }
    throw new ApiError(res.status, detail);
  }
  return res;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async listCorpora(): Promise<CorpusSummary[]> {
    const res = await check(await this.fetchFn(this.url("/corpora")));
    return (await res.json()) as CorpusSummary[];
  }

  async getDocument(
    corpusId: string,
    docId: string,
    categories?: readonly Category[],
  ): Promise<DocumentPayload> {
    const qs = categories?.length
      ? `?categories=${encodeURIComponent(categories.join(","))}`
      : "";
    const res = await check(
      await this.fetchFn(
        this.url(
          `/corpora/${encodeURIComponent(corpusId)}/documents/${encodeURIComponent(docId)}${qs}`,
        ),
      ),
    );
    return (await res.json()) as DocumentPayload;
  }

  async submitReview(
    corpusId: string,
    docId: string,
    annotationId: string,
    decision: Decision,
  ): Promise<void> {
    await check(
      await this.fetchFn(
        this.url(
          `/corpora/${encodeURIComponent(corpusId)}/documents/${encodeURIComponent(
            docId,
          )}/annotations/${encodeURIComponent(annotationId)}/review`,
        ),
        {
          method: "POST",
          headers: { "Content-Type": "application/json" },
          body: JSON.stringify({ decision }),
        },
      ),
    );
  }

  async exportCorpus(corpusId: string, docIds?: readonly string[]): Promise<Uint8Array> {
    const qs = docIds?.length ? `?docs=${encodeURIComponent(docIds.join(","))}` : "";
    const res = await check(
      await this.fetchFn(this.url(`/corpora/${encodeURIComponent(corpusId)}/export${qs}`)),
    );
    return new Uint8Array(await res.arrayBuffer());
  }
}
