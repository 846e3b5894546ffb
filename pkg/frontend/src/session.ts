/**
 * View state for one browsing session: which page is open, which
 * revision the last draw served, and the mutations that act on exactly
 * that displayed revision.
 *
 * Votes and edits must target the tuple the user is looking at, not
 * whatever a fresh draw would return, so the session pins the served
 * tuple until the next load/refresh.
 */

import { PageView, TupleFields, WikiClient } from "./api.js";

export type SessionState =
  | { kind: "empty" }
  | { kind: "missing"; name: string }
  | { kind: "viewing"; name: string; view: PageView };

export class PageSession {
  state: SessionState = { kind: "empty" };

  constructor(private client: WikiClient) {}

  /** The tuple currently on screen, if any. */
  get displayed(): TupleFields | null {
    return this.state.kind === "viewing" ? this.state.view.tuple : null;
  }

  get pageName(): string | null {
    return this.state.kind === "empty" ? null : this.state.name;
  }

  /** Fresh weighted draw of the named page. */
  async load(name: string): Promise<SessionState> {
    const view = await this.client.getPage(name);
    this.state = view === null ? { kind: "missing", name } : { kind: "viewing", name, view };
    return this.state;
  }

  /** Redraws the current page; a page can disappear if it was purged. */
  async refresh(): Promise<SessionState> {
    if (this.state.kind === "empty") throw new Error("no page loaded");
    return this.load(this.state.name);
  }

  /** Votes for the revision on screen and returns its new multiplicity. */
  async voteDisplayed(): Promise<number> {
    const t = this.displayed;
    if (t === null) throw new Error("nothing displayed to vote for");
    return this.client.vote(t);
  }

  /** Withdraws one instance of the revision on screen. */
  async unvoteDisplayed(): Promise<boolean> {
    const t = this.displayed;
    if (t === null) throw new Error("nothing displayed to unvote");
    return this.client.unvote(t);
  }

  /**
   * Writes a new revision based on the one on screen (or a first
   * revision when the page is missing or empty), then redraws.
   */
  async edit(author: string, date: string, body: string): Promise<SessionState> {
    const name = this.pageName;
    if (name === null) throw new Error("no page loaded");
    const base = this.displayed ?? undefined;
    await this.client.editPage(name, { author, date, body, base });
    return this.load(name);
  }
}

/** YYYY-MM-DD, the only date format tuples store. */
export function isValidDate(text: string): boolean {
  if (!/^\d{4}-\d{2}-\d{2}$/.test(text)) return false;
  const [y, m, d] = text.split("-").map(Number) as [number, number, number];
  const parsed = new Date(Date.UTC(y, m - 1, d));
  return (
    parsed.getUTCFullYear() === y && parsed.getUTCMonth() === m - 1 && parsed.getUTCDate() === d
  );
}

export function formatMeta(t: TupleFields): string {
  return `rev ${t[2]} by ${t[1]} on ${t[3]}`;
}
