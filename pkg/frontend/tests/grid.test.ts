import { strict as assert } from "node:assert";
import { test } from "node:test";

import { colLabel, parseRef, refText, viewExtent } from "../src/grid.js";

test("column labels follow bijective base 26", () => {
  assert.equal(colLabel(1), "A");
  assert.equal(colLabel(26), "Z");
  assert.equal(colLabel(27), "AA");
  assert.equal(colLabel(256), "IV");
});

test("parseRef and refText round-trip", () => {
  for (const text of ["A1", "H8", "AA10", "IV65536", "T20"]) {
    const coord = parseRef(text);
    assert.ok(coord, text);
    assert.equal(refText(coord), text);
  }
});

test("parseRef rejects junk", () => {
  for (const bad of ["", "1A", "A0", "A65537", "IW1", "$A$1"]) {
    assert.equal(parseRef(bad), null, bad);
  }
});

test("viewExtent covers all refs plus a margin", () => {
  const extent = viewExtent(["A1", "H8", "J8"]);
  assert.ok(extent.cols >= 11); // J is column 10
  assert.ok(extent.rows >= 9);
});

test("viewExtent clamps to sane bounds", () => {
  assert.deepEqual(viewExtent([]), { rows: 10, cols: 10 });
  const big = viewExtent(["IV65536"]);
  assert.ok(big.rows <= 60 && big.cols <= 60);
});
