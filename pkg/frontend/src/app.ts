/**
 * DOM wiring: binds one PageSession to the static elements in
 * index.html. All handlers funnel through a serial task queue so UI
 * actions never interleave and tests can await whenIdle().
 */

import { ApiError, WikiClient } from "./api.js";
import { PageSession, formatMeta, isValidDate } from "./session.js";

function el<T extends HTMLElement>(root: Document, id: string): T {
  const found = root.getElementById(id);
  if (!found) throw new Error(`index.html is missing #${id}`);
  return found as T;
}

export class App {
  readonly session: PageSession;
  private pending: Promise<void> = Promise.resolve();

  private pageInput: HTMLInputElement;
  private title: HTMLElement;
  private badge: HTMLElement;
  private meta: HTMLElement;
  private body: HTMLElement;
  private links: HTMLElement;
  private status: HTMLElement;
  private editAuthor: HTMLInputElement;
  private editDate: HTMLInputElement;
  private editBody: HTMLTextAreaElement;

  constructor(
    private root: Document,
    client: WikiClient,
  ) {
    this.session = new PageSession(client);
    this.pageInput = el(root, "page-name");
    this.title = el(root, "title-word");
    this.badge = el(root, "badge");
    this.meta = el(root, "meta");
    this.body = el(root, "body-text");
    this.links = el(root, "links");
    this.status = el(root, "status");
    this.editAuthor = el(root, "edit-author");
    this.editDate = el(root, "edit-date");
    this.editBody = el(root, "edit-body");

    el(root, "page-form").addEventListener("submit", (e) => {
      e.preventDefault();
      this.open(this.pageInput.value.trim());
    });
    el(root, "refresh").addEventListener("click", () => {
      this.run(async () => {
        await this.session.refresh();
      });
    });
    el(root, "vote").addEventListener("click", () => {
      this.run(async () => {
        const n = await this.session.voteDisplayed();
        await this.session.refresh();
        this.note(`voted: that revision now has ${n} instance${n === 1 ? "" : "s"}`);
      });
    });
    el(root, "unvote").addEventListener("click", () => {
      this.run(async () => {
        const removed = await this.session.unvoteDisplayed();
        await this.session.refresh();
        this.note(removed ? "removed one instance" : "already gone");
      });
    });
    el(root, "editor").addEventListener("submit", (e) => {
      e.preventDefault();
      this.submitEdit();
    });
  }

  /** Chain a UI action onto the serial queue; errors land in the status line. */
  run(task: () => Promise<void>): Promise<void> {
    this.pending = this.pending.then(async () => {
      try {
        await task();
        this.render();
      } catch (err) {
        this.render();
        this.note(err instanceof ApiError ? `server: ${err.message}` : String(err), true);
      }
    });
    return this.pending;
  }

  whenIdle(): Promise<void> {
    return this.pending;
  }

  open(name: string): Promise<void> {
    if (!name) return this.whenIdle();
    return this.run(async () => {
      await this.session.load(name);
      this.note("");
    });
  }

  private submitEdit(): void {
    const author = this.editAuthor.value.trim();
    const date = this.editDate.value.trim();
    const text = this.editBody.value;
    this.run(async () => {
      if (!author) throw new Error("author is required");
      if (!isValidDate(date)) throw new Error("date must be YYYY-MM-DD");
      await this.session.edit(author, date, text);
      this.editBody.value = "";
      this.note("revision written");
    });
  }

  private note(message: string, isError = false): void {
    this.status.textContent = message;
    this.status.className = isError ? "error" : "";
  }

  private render(): void {
    const state = this.session.state;
    if (state.kind === "empty") return;
    this.title.textContent = state.name;
    this.pageInput.value = state.name;
    if (state.kind === "missing") {
      this.badge.textContent = "0";
      this.meta.textContent = "no revisions";
      this.body.textContent = "This page does not exist yet. Write the first revision below.";
      this.links.replaceChildren();
      return;
    }
    const view = state.view;
    this.badge.textContent = String(view.matching_instances);
    this.meta.textContent = formatMeta(view.tuple);
    this.body.textContent = view.tuple[4];
    this.links.replaceChildren(
      ...view.links.map((link) => {
        const button = this.root.createElement("button");
        button.type = "button";
        button.textContent = link.exists ? link.name : `${link.name}?`;
        button.className = link.exists ? "link" : "link missing";
        button.addEventListener("click", () => this.open(link.name));
        return button;
      }),
    );
  }
}

export function mountApp(root: Document, client: WikiClient): App {
  return new App(root, client);
}
