/**
 * Typed client for the workbook service. Every piece of grid data the UI
 * shows comes through this module; there is no client-side solving.
 */
export class ApiError extends Error {
    status;
    payload;
    constructor(status, payload) {
        super(`service error ${status}`);
        this.status = status;
        this.payload = payload;
    }
    /** Message of a single-cell error body, if that is what the payload is. */
    cellMessage() {
        const p = this.payload;
        const err = p?.error;
        if (err && typeof err === "object") {
            return err.message ?? null;
        }
        return null;
    }
    /** Best human-readable description of the error body. */
    detail() {
        const p = this.payload;
        if (typeof p?.error === "string") {
            return p.error;
        }
        return this.cellMessage();
    }
    issues() {
        const p = this.payload;
        return p?.errors ?? [];
    }
}
export class ApiClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl, fetchFn) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(method, path, body) {
        const init = { method };
        if (body !== undefined) {
            init.body = JSON.stringify(body);
            init.headers = { "Content-Type": "application/json" };
        }
        const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
        const payload = await resp.json();
        if (!resp.ok) {
            throw new ApiError(resp.status, payload);
        }
        return payload;
    }
    async createSession(doc) {
        const body = await this.request("POST", "/api/workbook", doc);
        return body.session;
    }
    getWorkbook(session) {
        return this.request("GET", `/api/workbook?session=${session}`);
    }
    putCell(session, ref, input) {
        return this.request("PUT", `/api/cells/${ref}?session=${session}`, { input });
    }
    solve(session, opts = {}) {
        return this.request("POST", `/api/solve?session=${session}`, opts);
    }
    solution(session, index) {
        return this.request("GET", `/api/solutions/${index}?session=${session}`);
    }
    reset(session) {
        return this.request("POST", `/api/reset?session=${session}`);
    }
}
//# sourceMappingURL=api.js.map