/**
 * Typed client for the workbook service. Every piece of grid data the UI
 * shows comes through this module; there is no client-side solving.
 */

export interface SolveReport {
  status: "sat" | "unsat" | "optimal" | "budget_exceeded" | "error";
  count: number;
  exhausted: boolean;
  objective: number | null;
  elapsed_ms: number;
  error: string | null;
}

export interface WorkbookView {
  name: string;
  cells: Record<string, string>;
  roles: Record<string, "variable" | "constraint">;
  var_range: string | null;
  constraint_range: string | null;
  report: SolveReport | null;
  index: number | null;
  count?: number;
  exhausted?: boolean;
}

export interface CellUpdate {
  cell: string;
  kind: "empty" | "int" | "domain" | "formula";
  text: string;
}

export interface WorkbookDoc {
  name: string;
  cells: Record<string, string>;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public payload: unknown,
  ) {
    super(`service error ${status}`);
  }

  /** Message of a single-cell error body, if that is what the payload is. */
  cellMessage(): string | null {
    const p = this.payload as { error?: { message?: string } } | null;
    const err = p?.error;
    if (err && typeof err === "object") {
      return err.message ?? null;
    }
    return null;
  }

  /** Best human-readable description of the error body. */
  detail(): string | null {
    const p = this.payload as { error?: unknown } | null;
    if (typeof p?.error === "string") {
      return p.error;
    }
    return this.cellMessage();
  }

  issues(): Array<{ cell: string | null; kind: string; message: string }> {
    const p = this.payload as { errors?: Array<never> } | null;
    return (p?.errors as Array<{ cell: string | null; kind: string; message: string }>) ?? [];
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, payload);
    }
    return payload as T;
  }

  async createSession(doc: WorkbookDoc): Promise<string> {
    const body = await this.request<{ session: string }>("POST", "/api/workbook", doc);
    return body.session;
  }

  getWorkbook(session: string): Promise<WorkbookView> {
    return this.request("GET", `/api/workbook?session=${session}`);
  }

  putCell(session: string, ref: string, input: string): Promise<CellUpdate> {
    return this.request("PUT", `/api/cells/${ref}?session=${session}`, { input });
  }

  solve(session: string, opts: { limit?: number; budget?: number } = {}): Promise<SolveReport> {
    return this.request("POST", `/api/solve?session=${session}`, opts);
  }

  solution(session: string, index: number): Promise<WorkbookView> {
    return this.request("GET", `/api/solutions/${index}?session=${session}`);
  }

  reset(session: string): Promise<WorkbookView> {
    return this.request("POST", `/api/reset?session=${session}`);
  }
}
