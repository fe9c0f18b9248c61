/** Built-in sample: the 8-queens workbook from the corpus. */

import type { WorkbookDoc } from "./api.js";

export const EIGHT_QUEENS: WorkbookDoc = {
  name: "8-queens",
  cells: {
    J1: "ssVarRange(A1:H8)",
    J2: "ssConstraintRange(J4:J8)",
    J4: "ssDomain(A1:H8, 0, 1)",
    J5: "ssRowsAggregate(+, A1:H8, #=, 1)",
    J6: "ssColsAggregate(+, A1:H8, #=, 1)",
    J7: "ssDiagonalAggregate(+, A1:H8, #=<, 1)",
    J8: "ssBackDiagonalAggregate(+, A1:H8, #=<, 1)",
  },
};
