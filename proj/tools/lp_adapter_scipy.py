#!/usr/bin/env python3
"""External LP adapter: solves the JSON-encoded LP with scipy's HiGHS.

Usage: lp_adapter_scipy.py <input.json> <output.json>

Select it with MSSC_LP_ADAPTER="python3 /path/to/lp_adapter_scipy.py" and
--lp-backend external.
"""
import json
import sys

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csc_matrix


def main(argv):
    with open(argv[1]) as f:
        lp = json.load(f)

    n_rows = len(lp["sense"])
    n_cols = len(lp["cost"])
    data, rows, cols = [], [], []
    for j, col in enumerate(lp["columns"]):
        for r, v in col:
            rows.append(r)
            cols.append(j)
            data.append(v)
    a = csc_matrix((data, (rows, cols)), shape=(n_rows, n_cols)).tocsr()
    rhs = np.asarray(lp["rhs"], dtype=float)
    sense = lp["sense"]

    ub_idx = [i for i, s in enumerate(sense) if s in ("G", "L")]
    eq_idx = [i for i, s in enumerate(sense) if s == "E"]
    flip = np.array([-1.0 if sense[i] == "G" else 1.0 for i in ub_idx])

    kwargs = {}
    if ub_idx:
        kwargs["A_ub"] = a[ub_idx].multiply(flip[:, None]).tocsr()
        kwargs["b_ub"] = rhs[ub_idx] * flip
    if eq_idx:
        kwargs["A_eq"] = a[eq_idx]
        kwargs["b_eq"] = rhs[eq_idx]
    bounds = [(lo, up) for lo, up in zip(lp["lower"], lp["upper"])]

    res = linprog(np.asarray(lp["cost"], dtype=float), bounds=bounds, method="highs", **kwargs)
    out = {"status": {0: "Optimal", 1: "IterationLimit", 2: "Infeasible", 3: "Unbounded"}.get(res.status, "Error")}
    if res.status == 0:
        duals = [0.0] * n_rows
        if ub_idx:
            for k, i in enumerate(ub_idx):
                duals[i] = float(res.ineqlin.marginals[k] * flip[k])
        if eq_idx:
            for k, i in enumerate(eq_idx):
                duals[i] = float(res.eqlin.marginals[k])
        out.update(objective=float(res.fun), primal=[float(v) for v in res.x], duals=duals)
    with open(argv[2], "w") as f:
        json.dump(out, f)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
