/**
 * View state and the pure transitions that apply service responses to it.
 * The grid always reflects the most recent service response.
 */

import type { SolveReport, WorkbookView } from "./api.js";

export interface GridViewState {
  session: string | null;
  name: string;
  cells: Record<string, string>;
  roles: Record<string, "variable" | "constraint">;
  report: SolveReport | null;
  index: number | null;
  count: number | null;
  exhausted: boolean;
  solved: boolean; // solved values render read-only until reset
  banner: string | null;
  cellErrors: Record<string, string>;
}

export function initialState(): GridViewState {
  return {
    session: null,
    name: "",
    cells: {},
    roles: {},
    report: null,
    index: null,
    count: null,
    exhausted: false,
    solved: false,
    banner: null,
    cellErrors: {},
  };
}

export function applyView(state: GridViewState, view: WorkbookView): GridViewState {
  return {
    ...state,
    name: view.name,
    cells: view.cells,
    roles: view.roles,
    report: view.report,
    index: view.index,
    count: view.count ?? (view.report ? view.report.count : state.count),
    exhausted: view.exhausted ?? (view.report ? view.report.exhausted : state.exhausted),
    solved: view.index !== null,
    cellErrors: {},
  };
}

export function applyReport(state: GridViewState, report: SolveReport): GridViewState {
  return {
    ...state,
    report,
    count: report.count,
    exhausted: report.exhausted,
    banner: report.status === "unsat" ? "No solution satisfies the constraints." : null,
  };
}

export function afterReset(state: GridViewState, view: WorkbookView): GridViewState {
  return { ...applyView(state, view), report: null, index: null, count: null,
           exhausted: false, solved: false, banner: null };
}

/** The "i+1 of N" indicator; N is exact once the enumeration is exhausted. */
export function counterText(state: GridViewState): string {
  if (state.report === null) {
    return "";
  }
  if (state.report.status === "unsat") {
    return "0 solutions";
  }
  const total = state.exhausted ? `${state.count}` : `≥${state.count}`;
  if (state.index === null) {
    return `${total} solutions`;
  }
  return `${state.index + 1} of ${total}`;
}

export function canGoPrev(state: GridViewState): boolean {
  return state.index !== null && state.index > 0;
}

export function canGoNext(state: GridViewState): boolean {
  if (state.index === null || state.count === null) {
    return false;
  }
  return !state.exhausted || state.index + 1 < state.count;
}

export function statusText(state: GridViewState): string {
  const r = state.report;
  if (!r) {
    return state.session ? "loaded" : "no workbook";
  }
  if (r.status === "optimal") {
    return `optimal (objective ${r.objective})`;
  }
  if (r.status === "budget_exceeded") {
    return "search budget exceeded";
  }
  return r.status;
}
