/**
 * View state and the pure transitions that apply service responses to it.
 * The grid always reflects the most recent service response.
 */
export function initialState() {
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
export function applyView(state, view) {
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
export function applyReport(state, report) {
    return {
        ...state,
        report,
        count: report.count,
        exhausted: report.exhausted,
        banner: report.status === "unsat" ? "No solution satisfies the constraints." : null,
    };
}
export function afterReset(state, view) {
    return { ...applyView(state, view), report: null, index: null, count: null,
        exhausted: false, solved: false, banner: null };
}
/** The "i+1 of N" indicator; N is exact once the enumeration is exhausted. */
export function counterText(state) {
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
export function canGoPrev(state) {
    return state.index !== null && state.index > 0;
}
export function canGoNext(state) {
    if (state.index === null || state.count === null) {
        return false;
    }
    return !state.exhausted || state.index + 1 < state.count;
}
export function statusText(state) {
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
//# sourceMappingURL=state.js.map