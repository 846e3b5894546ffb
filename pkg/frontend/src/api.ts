/**
 * Typed client for the tuple-space wiki HTTP API.
 *
 * Every page read is a weighted random draw on the server, so two
 * consecutive getPage calls may return different revisions; that is
 * the point. Pass a seed to pin the draw.
 */

export type TupleFields = [string, string, number, string, string];

export interface ServedTuple {
  tuple: TupleFields;
  matching_instances: number;
}

export interface PageLink {
  name: string;
  exists: boolean;
}

export interface PageView extends ServedTuple {
  links: PageLink[];
}

export interface EditResult {
  tuple: TupleFields;
  page_instances: number;
}

export interface EditFields {
  author: string;
  date: string;
  body: string;
  base?: TupleFields;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

async function errorOf(response: Response): Promise<ApiError> {
  let message = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") message = body.error;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, message);
}

export class WikiClient {
  constructor(
    private base: string = "",
    private fetcher: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async getJson(path: string): Promise<any> {
    const response = await this.fetcher(this.base + path);
    if (!response.ok) throw await errorOf(response);
    return response.json();
  }

  private async postJson(path: string, payload: unknown): Promise<any> {
    const response = await this.fetcher(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!response.ok) throw await errorOf(response);
    return response.json();
  }

  async health(): Promise<{ status: string; total_instances: number }> {
    return this.getJson("/healthz");
  }

  /** One weighted draw among the page's revisions; null if the page does not exist. */
  async getPage(
    name: string,
    opts: { date?: string; seed?: string } = {},
  ): Promise<PageView | null> {
    const params = new URLSearchParams();
    if (opts.date !== undefined) params.set("date", opts.date);
    if (opts.seed !== undefined) params.set("seed", opts.seed);
    const query = params.toString();
    const path = `/page/${encodeURIComponent(name)}` + (query ? `?${query}` : "");
    try {
      const body = await this.getJson(path);
      // Dated reads have no links array; normalize so callers always see one.
      return { links: [], ...body } as PageView;
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) return null;
      throw err;
    }
  }

  /** Writes a new revision; the server numbers it base.rev + 1 (or 1 without a base). */
  async editPage(name: string, fields: EditFields): Promise<EditResult> {
    return this.postJson(`/page/${encodeURIComponent(name)}`, fields);
  }

  /** Duplicates the exact tuple (vote-by-duplication); returns its new multiplicity. */
  async vote(tuple: TupleFields): Promise<number> {
    const body = await this.postJson("/vote", { tuple });
    return body.multiplicity;
  }

  /** Removes one instance; false if the tuple was not present at all. */
  async unvote(tuple: TupleFields): Promise<boolean> {
    const body = await this.postJson("/unvote", { tuple });
    return body.removed;
  }
}
