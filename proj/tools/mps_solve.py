#!/usr/bin/env python3
"""MPS front end for scipy's HiGHS-backed MILP solver.

Reads a free-format MPS file, solves it, and writes a "name value" solution
file.  Meant to be plugged into the MG_EXT_SOLVER command template:

    MG_EXT_SOLVER="python3 tools/mps_solve.py --mps {mps} --out {sol}"
"""

import argparse
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import lil_matrix

INF = float("inf")


def parse_mps(path):
    sense = 1.0  # minimize by default
    rows = []  # (name, rel, rhs)
    row_idx = {}
    obj_row = None
    variables = []  # name
    var_idx = {}
    integral = []
    lb = []
    ub = []
    saw_lb = []
    entries = []  # (row, col, coef)
    obj = {}
    obj_const = 0.0
    ranges = []

    section = None
    in_int = False

    def var(name):
        if name in var_idx:
            return var_idx[name]
        var_idx[name] = len(variables)
        variables.append(name)
        integral.append(in_int)
        lb.append(0.0)
        ub.append(INF)
        saw_lb.append(False)
        return var_idx[name]

    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n").rstrip("\r")
            if not line or line.startswith("*"):
                continue
            toks = line.split()
            if line[0] not in (" ", "\t"):
                head = toks[0]
                if head == "NAME":
                    continue
                if head == "OBJSENSE":
                    section = "objsense"
                    if len(toks) > 1:
                        sense = -1.0 if toks[1].upper().startswith("MAX") else 1.0
                    continue
                if head in ("ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS"):
                    section = head.lower()
                    continue
                if head == "ENDATA":
                    break
                raise ValueError(f"unknown section {head}")
            if section == "objsense":
                sense = -1.0 if toks[0].upper().startswith("MAX") else 1.0
            elif section == "rows":
                kind, name = toks[0], toks[1]
                if kind == "N":
                    if obj_row is None:
                        obj_row = name
                else:
                    row_idx[name] = len(rows)
                    rows.append((name, kind, 0.0))
            elif section == "columns":
                if len(toks) >= 3 and toks[1] == "'MARKER'":
                    in_int = toks[2] == "'INTORG'"
                    continue
                j = var(toks[0])
                for k in range(1, len(toks) - 1, 2):
                    row, coef = toks[k], float(toks[k + 1])
                    if row == obj_row:
                        obj[j] = obj.get(j, 0.0) + coef
                    elif row in row_idx:
                        entries.append((row_idx[row], j, coef))
                    # other N rows are free rows: ignored
            elif section == "rhs":
                for k in range(1, len(toks) - 1, 2):
                    row, val = toks[k], float(toks[k + 1])
                    if row == obj_row:
                        obj_const = -val
                    else:
                        i = row_idx[row]
                        rows[i] = (rows[i][0], rows[i][1], val)
            elif section == "ranges":
                for k in range(1, len(toks) - 1, 2):
                    ranges.append((toks[k], float(toks[k + 1])))
            elif section == "bounds":
                kind = toks[0]
                j = var(toks[2])
                val = float(toks[3]) if len(toks) > 3 else 0.0
                if kind == "LO":
                    lb[j] = val
                    saw_lb[j] = True
                elif kind == "UP":
                    ub[j] = val
                    if val < 0 and not saw_lb[j]:
                        lb[j] = -INF
                elif kind == "FX":
                    lb[j] = ub[j] = val
                    saw_lb[j] = True
                elif kind == "FR":
                    lb[j], ub[j] = -INF, INF
                    saw_lb[j] = True
                elif kind == "MI":
                    lb[j] = -INF
                    saw_lb[j] = True
                elif kind == "PL":
                    ub[j] = INF
                elif kind == "BV":
                    lb[j], ub[j], integral[j] = 0.0, 1.0, True
                elif kind == "LI":
                    lb[j], integral[j] = val, True
                    saw_lb[j] = True
                elif kind == "UI":
                    ub[j], integral[j] = val, True
                else:
                    raise ValueError(f"unknown bound kind {kind}")
            else:
                raise ValueError(f"data outside a known section: {line}")

    n = len(variables)
    m = len(rows)
    A = lil_matrix((m, n))
    for i, j, coef in entries:
        A[i, j] += coef
    con_lb = np.empty(m)
    con_ub = np.empty(m)
    for i, (_, kind, rhs) in enumerate(rows):
        if kind == "L":
            con_lb[i], con_ub[i] = -INF, rhs
        elif kind == "G":
            con_lb[i], con_ub[i] = rhs, INF
        else:
            con_lb[i], con_ub[i] = rhs, rhs
    for name, r in ranges:
        i = row_idx[name]
        kind = rows[i][1]
        rhs = rows[i][2]
        if kind == "L":
            con_lb[i] = rhs - abs(r)
        elif kind == "G":
            con_ub[i] = rhs + abs(r)
        else:
            con_lb[i], con_ub[i] = (rhs, rhs + abs(r)) if r >= 0 else (rhs - abs(r), rhs)

    c = np.zeros(n)
    for j, coef in obj.items():
        c[j] = sense * coef
    return {
        "c": c,
        "sense": sense,
        "obj_const": obj_const,
        "A": A.tocsr(),
        "con_lb": con_lb,
        "con_ub": con_ub,
        "lb": np.array(lb),
        "ub": np.array(ub),
        "integral": np.array(integral, dtype=float),
        "variables": variables,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--mps", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--time-limit", type=float, default=600.0)
    ap.add_argument("--gap", type=float, default=1e-9)
    args = ap.parse_args()

    p = parse_mps(args.mps)
    constraints = LinearConstraint(p["A"], p["con_lb"], p["con_ub"])

    res = milp(
        c=p["c"],
        constraints=constraints,
        integrality=p["integral"],
        bounds=Bounds(p["lb"], p["ub"]),
        options={"time_limit": args.time_limit, "mip_rel_gap": args.gap, "presolve": True},
    )

    with open(args.out, "w") as fh:
        if res.status == 2:
            fh.write("status infeasible\n")
            return 0
        if res.status == 3:
            fh.write("status unbounded\n")
            return 0
        if res.status != 0 or res.x is None:
            fh.write("status failed\n")
            print(f"solver status {res.status}: {res.message}", file=sys.stderr)
            return 1
        fh.write("status optimal\n")
        obj = p["sense"] * res.fun + p["obj_const"]
        fh.write(f"objective {obj:.17g}\n")
        for name, val in zip(p["variables"], res.x):
            fh.write(f"{name} {val:.17g}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
