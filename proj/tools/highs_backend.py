#!/usr/bin/env python3
"""Solve an MPS file with HiGHS and write a plain-text solution.

usage: highs_backend.py MODEL.mps SOLUTION.txt

Output lines: `status <s>`, `objective <v>`, then `primal <name> <v>` per
column and `dual <name> <v>` per row. Duals use the minimize convention
d(objective)/d(rhs), which is what HiGHS reports.
"""
import sys

try:
    import highspy
except ImportError:
    sys.stderr.write("highspy is not installed\n")
    sys.exit(77)


def main():
    if len(sys.argv) != 3:
        sys.stderr.write(__doc__)
        return 2
    model, out = sys.argv[1], sys.argv[2]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("solver", "simplex")
    if h.readModel(model) != highspy.HighsStatus.kOk:
        sys.stderr.write("cannot read %s\n" % model)
        return 3
    h.run()
    status = h.getModelStatus()
    names = {
        highspy.HighsModelStatus.kOptimal: "optimal",
        highspy.HighsModelStatus.kInfeasible: "infeasible",
        highspy.HighsModelStatus.kUnbounded: "unbounded",
        highspy.HighsModelStatus.kUnboundedOrInfeasible: "infeasible",
    }
    lp = h.getLp()
    with open(out, "w") as f:
        f.write("status %s\n" % names.get(status, "error"))
        if status == highspy.HighsModelStatus.kOptimal:
            sol = h.getSolution()
            f.write("objective %.17g\n" % h.getInfo().objective_function_value)
            for name, v in zip(lp.col_names_, sol.col_value):
                f.write("primal %s %.17g\n" % (name, v))
            for name, v in zip(lp.row_names_, sol.row_dual):
                f.write("dual %s %.17g\n" % (name, v))
    return 0


if __name__ == "__main__":
    sys.exit(main())
