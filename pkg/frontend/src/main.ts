/**
 * DOM wiring for the constraint-workbook grid.
 *
 * The app is a thin shell over the HTTP service: load a workbook JSON into
 * a session, edit cell text, Parse/Build to solve, step through solutions
 * with a count indicator, and restore the original state. All values shown
 * come from service responses.
 */

import { ApiClient, ApiError, type FetchLike, type WorkbookDoc } from "./api.js";
import { colLabel, refText } from "./grid.js";
import { viewExtent } from "./grid.js";
import {
  afterReset,
  applyReport,
  applyView,
  canGoNext,
  canGoPrev,
  counterText,
  initialState,
  statusText,
  type GridViewState,
} from "./state.js";
import { EIGHT_QUEENS } from "./samples.js";

type Doc = Document;

export class App {
  state: GridViewState = initialState();
  private editing: string | null = null;
  private busy = false;

  constructor(
    private doc: Doc,
    readonly api: ApiClient,
    private confirmFn: (msg: string) => boolean,
  ) {}

  private el<T extends HTMLElement>(id: string): T {
    const node = this.doc.getElementById(id);
    if (!node) {
      throw new Error(`missing #${id}`);
    }
    return node as T;
  }

  bind(): void {
    this.el("load").addEventListener("click", () => {
      void this.loadFromTextarea();
    });
    this.el("load-sample").addEventListener("click", () => {
      this.el<HTMLTextAreaElement>("workbook-json").value =
        JSON.stringify(EIGHT_QUEENS, null, 1);
      void this.loadFromTextarea();
    });
    this.el("solve").addEventListener("click", () => {
      void this.parseBuild();
    });
    this.el("prev").addEventListener("click", () => {
      void this.step(-1);
    });
    this.el("next").addEventListener("click", () => {
      void this.step(1);
    });
    this.el("goto").addEventListener("click", () => {
      const raw = this.el<HTMLInputElement>("goto-index").value;
      const oneBased = parseInt(raw, 10);
      if (!Number.isNaN(oneBased)) {
        void this.gotoSolution(oneBased - 1);
      }
    });
    this.el("reset").addEventListener("click", () => {
      void this.resetOriginal();
    });
    this.render();
  }

  private async guard(action: () => Promise<void>): Promise<void> {
    if (this.busy) {
      return;
    }
    this.busy = true;
    try {
      await action();
    } catch (e) {
      this.state = { ...this.state, banner: describeError(e) };
    } finally {
      this.busy = false;
      this.render();
    }
  }

  async loadFromTextarea(): Promise<void> {
    const raw = this.el<HTMLTextAreaElement>("workbook-json").value;
    await this.guard(async () => {
      const doc = JSON.parse(raw) as WorkbookDoc;
      await this.loadWorkbook(doc);
    });
  }

  async loadWorkbook(doc: WorkbookDoc): Promise<void> {
    const session = await this.api.createSession(doc);
    const view = await this.api.getWorkbook(session);
    this.state = { ...applyView(initialState(), view), session };
  }

  /** The Parse/Build action: solve, then show solution 0 and the count. */
  async parseBuild(): Promise<void> {
    await this.guard(async () => {
      const session = this.requireSession();
      const report = await this.api.solve(session, {});
      this.state = applyReport(this.state, report);
      if (report.status === "sat" || report.status === "optimal") {
        const view = await this.api.solution(session, 0);
        this.state = applyView(this.state, view);
      }
    });
  }

  async gotoSolution(index: number): Promise<void> {
    await this.guard(async () => {
      const session = this.requireSession();
      const view = await this.api.solution(session, index);
      this.state = applyView(this.state, view);
    });
  }

  async step(delta: number): Promise<void> {
    if (this.state.index === null) {
      return;
    }
    await this.gotoSolution(this.state.index + delta);
  }

  async resetOriginal(): Promise<void> {
    await this.guard(async () => {
      const session = this.requireSession();
      const view = await this.api.reset(session);
      this.state = afterReset(this.state, view);
    });
  }

  async commitCellEdit(ref: string, input: string): Promise<void> {
    this.editing = null;
    await this.guard(async () => {
      const session = this.requireSession();
      try {
        await this.api.putCell(session, ref, input);
      } catch (e) {
        if (e instanceof ApiError && e.status === 400) {
          this.state = {
            ...this.state,
            cellErrors: { ...this.state.cellErrors, [ref]: e.cellMessage() ?? "bad input" },
          };
          return;
        }
        throw e;
      }
      const view = await this.api.getWorkbook(session);
      this.state = applyView(this.state, view);
    });
  }

  beginEdit(ref: string): void {
    if (!this.state.session || this.busy) {
      return;
    }
    if (this.state.solved) {
      // solved values are read-only; offer the implicit reset
      if (!this.confirmFn("Restore the original state to edit cells?")) {
        return;
      }
      void this.resetOriginal().then(() => {
        this.editing = ref;
        this.render();
      });
      return;
    }
    this.editing = ref;
    this.render();
  }

  private requireSession(): string {
    if (!this.state.session) {
      throw new Error("load a workbook first");
    }
    return this.state.session;
  }

  // -- rendering -------------------------------------------------------------

  render(): void {
    const s = this.state;
    this.el("status").textContent = statusText(s);
    this.el("counter").textContent = counterText(s);
    this.el("banner").textContent = s.banner ?? "";
    this.el<HTMLButtonElement>("prev").disabled = !canGoPrev(s);
    this.el<HTMLButtonElement>("next").disabled = !canGoNext(s);
    this.el<HTMLButtonElement>("solve").disabled = s.session === null;
    this.el<HTMLButtonElement>("reset").disabled = s.session === null;
    this.el("sheet-name").textContent = s.name;
    this.renderGrid();
  }

  private renderGrid(): void {
    const container = this.el("grid");
    container.textContent = "";
    if (!this.state.session) {
      return;
    }
    const extent = viewExtent([
      ...Object.keys(this.state.cells),
      ...Object.keys(this.state.roles),
    ]);
    const table = this.doc.createElement("table");
    table.className = "grid";
    const head = this.doc.createElement("tr");
    head.appendChild(this.doc.createElement("th"));
    for (let c = 1; c <= extent.cols; c++) {
      const th = this.doc.createElement("th");
      th.textContent = colLabel(c);
      head.appendChild(th);
    }
    table.appendChild(head);
    for (let r = 1; r <= extent.rows; r++) {
      const tr = this.doc.createElement("tr");
      const th = this.doc.createElement("th");
      th.textContent = String(r);
      tr.appendChild(th);
      for (let c = 1; c <= extent.cols; c++) {
        tr.appendChild(this.renderCell(refText({ col: c, row: r })));
      }
      table.appendChild(tr);
    }
    container.appendChild(table);
  }

  private renderCell(ref: string): HTMLTableCellElement {
    const td = this.doc.createElement("td");
    td.dataset.ref = ref;
    const role = this.state.roles[ref];
    if (role === "variable") {
      td.classList.add("var-cell");
    } else if (role === "constraint") {
      td.classList.add("constraint-cell");
    }
    const error = this.state.cellErrors[ref];
    if (error) {
      td.classList.add("cell-error");
      td.title = error;
    }
    if (this.editing === ref) {
      const input = this.doc.createElement("input");
      input.value = this.state.cells[ref] ?? "";
      input.addEventListener("keydown", (ev) => {
        const key = (ev as KeyboardEvent).key;
        if (key === "Enter") {
          void this.commitCellEdit(ref, input.value);
        } else if (key === "Escape") {
          this.editing = null;
          this.render();
        }
      });
      td.appendChild(input);
      queueMicrotask(() => input.focus());
    } else {
      td.textContent = this.state.cells[ref] ?? "";
      td.addEventListener("click", () => this.beginEdit(ref));
    }
    return td;
  }
}

function describeError(e: unknown): string {
  if (e instanceof ApiError) {
    const issues = e.issues();
    if (issues.length) {
      return issues
        .map((i) => `${i.cell ?? "workbook"}: ${i.kind}: ${i.message}`)
        .join("; ");
    }
    return e.detail() ?? `service error ${e.status}`;
  }
  return e instanceof Error ? e.message : String(e);
}

/**
 * Mount the app onto a document. `baseUrl` is "" when served by the
 * sheetcsp service itself; tests pass the live service origin and a
 * node-side fetch.
 */
export function initApp(
  doc: Document,
  baseUrl = "",
  fetchFn?: FetchLike,
  confirmFn?: (msg: string) => boolean,
): App {
  const win = doc.defaultView as (Window & typeof globalThis) | null;
  const fetcher: FetchLike =
    fetchFn ?? ((url, init) => (win ? win.fetch(url, init) : fetch(url, init)));
  const confirm = confirmFn ?? ((msg: string) => (win ? win.confirm(msg) : true));
  const app = new App(doc, new ApiClient(baseUrl, fetcher), confirm);
  app.bind();
  return app;
}
