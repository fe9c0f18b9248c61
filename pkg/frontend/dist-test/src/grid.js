/** Grid geometry helpers: A1 labels and view extent. Pure view logic. */
/** Column label in bijective base 26: 1 -> A, 26 -> Z, 27 -> AA. */
export function colLabel(col) {
    let n = col;
    let out = "";
    while (n > 0) {
        const rem = (n - 1) % 26;
        out = String.fromCharCode(65 + rem) + out;
        n = Math.floor((n - 1) / 26);
    }
    return out;
}
export function refText(coord) {
    return `${colLabel(coord.col)}${coord.row}`;
}
const REF_RE = /^([A-Za-z]+)([0-9]+)$/;
export function parseRef(text) {
    const m = REF_RE.exec(text.trim());
    if (!m) {
        return null;
    }
    let col = 0;
    for (const ch of m[1].toUpperCase()) {
        col = col * 26 + (ch.charCodeAt(0) - 64);
    }
    const row = parseInt(m[2], 10);
    if (col < 1 || col > 256 || row < 1 || row > 65536) {
        return null;
    }
    return { col, row };
}
const MIN_COLS = 10;
const MIN_ROWS = 10;
const MAX_COLS = 60;
const MAX_ROWS = 60;
/** Rows/cols to draw: everything referenced plus one blank margin. */
export function viewExtent(refs) {
    let rows = 0;
    let cols = 0;
    for (const text of refs) {
        const coord = parseRef(text);
        if (coord) {
            rows = Math.max(rows, coord.row);
            cols = Math.max(cols, coord.col);
        }
    }
    return {
        rows: Math.min(Math.max(rows + 1, MIN_ROWS), MAX_ROWS),
        cols: Math.min(Math.max(cols + 1, MIN_COLS), MAX_COLS),
    };
}
//# sourceMappingURL=grid.js.map