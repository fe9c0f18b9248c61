import { strict as assert } from "node:assert";
import { test } from "node:test";

import { ApiClient, ApiError, type FetchLike } from "../src/api.js";

interface Recorded {
  url: string;
  method: string;
  body: unknown;
}

function mockFetch(
  responses: Array<{ status?: number; payload: unknown }>,
  log: Recorded[],
): FetchLike {
  return async (url, init) => {
    log.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    });
    const next = responses.shift() ?? { status: 500, payload: { error: "exhausted" } };
    const status = next.status ?? 200;
    return {
      ok: status >= 200 && status < 300,
      status,
      json: async () => next.payload,
    } as Response;
  };
}

test("createSession posts the workbook and returns the token", async () => {
  const log: Recorded[] = [];
  const api = new ApiClient("http://x", mockFetch([{ payload: { session: "tok" } }], log));
  const token = await api.createSession({ name: "wb", cells: { A1: "1..2" } });
  assert.equal(token, "tok");
  assert.deepEqual(log, [{
    url: "http://x/api/workbook",
    method: "POST",
    body: { name: "wb", cells: { A1: "1..2" } },
  }]);
});

test("cell edits PUT the raw input text", async () => {
  const log: Recorded[] = [];
  const api = new ApiClient("", mockFetch(
    [{ payload: { cell: "A1", kind: "domain", text: "0..1" } }], log));
  await api.putCell("tok", "A1", "0..1");
  assert.equal(log[0].url, "/api/cells/A1?session=tok");
  assert.equal(log[0].method, "PUT");
  assert.deepEqual(log[0].body, { input: "0..1" });
});

test("solution fetches hit the numbered endpoint", async () => {
  const log: Recorded[] = [];
  const api = new ApiClient("", mockFetch([{ payload: { name: "t", cells: {} } }], log));
  await api.solution("tok", 91);
  assert.equal(log[0].url, "/api/solutions/91?session=tok");
});

test("non-2xx responses raise ApiError with the payload", async () => {
  const api = new ApiClient("", mockFetch([{
    status: 400,
    payload: { errors: [{ cell: "J4", kind: "MissingVarRange", message: "gone" }] },
  }], []));
  await assert.rejects(
    api.solve("tok"),
    (e: unknown) => {
      assert.ok(e instanceof ApiError);
      assert.equal(e.status, 400);
      assert.equal(e.issues()[0].kind, "MissingVarRange");
      return true;
    },
  );
});

test("single-cell error payloads expose the message", async () => {
  const api = new ApiClient("", mockFetch([{
    status: 400,
    payload: { error: { cell: "A1", message: "unexpected character" } },
  }], []));
  try {
    await api.putCell("tok", "A1", "???");
    assert.fail("should have thrown");
  } catch (e) {
    assert.ok(e instanceof ApiError);
    assert.match(e.cellMessage() ?? "", /unexpected/);
  }
});
