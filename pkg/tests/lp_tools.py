"""Reading back and solving the LP files written by export_ilp (test-side only)."""

import io
import itertools
import re

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from groupcloseness import export_ilp


def parse_lp(text):
    """Minimal reader for the LP dialect written by export_ilp."""
    sections = re.split(r"^(Minimize|Subject To|Binary|End)\s*$", text, flags=re.M)
    body = dict(zip(sections[1::2], sections[2::2]))
    assert list(body) == ["Minimize", "Subject To", "Binary", "End"]

    def terms(expr):
        out = {}
        for sign, coef, var in re.findall(r"([+-]?)\s*(\d*)\s*([A-Za-z_][\w.]*)", expr):
            c = int(coef) if coef else 1
            out[var] = -c if sign == "-" else c
        return out

    obj_text = " ".join(body["Minimize"].split())
    objective = terms(obj_text.split(":", 1)[1])
    constraints = []
    for stmt in re.split(r"\n(?=\s*\w+:)", body["Subject To"].strip()):
        stmt = " ".join(stmt.split())
        name, rest = stmt.split(":", 1)
        m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)$", rest.strip())
        constraints.append((name, terms(m.group(1)), m.group(2), int(m.group(3))))
    binaries = body["Binary"].split()
    return objective, constraints, binaries


def lp_text(g, k):
    buf = io.StringIO()
    export_ilp(g, k, buf)
    return buf.getvalue()


def solve_by_milp(objective, constraints, binaries):
    idx = {v: i for i, v in enumerate(binaries)}
    c = np.zeros(len(binaries))
    for v, w in objective.items():
        c[idx[v]] = w
    A = np.zeros((len(constraints), len(binaries)))
    lo, hi = np.empty(len(constraints)), np.empty(len(constraints))
    for r, (_, t, op, rhs) in enumerate(constraints):
        for v, w in t.items():
            A[r, idx[v]] = w
        lo[r] = rhs if op in ("=", ">=") else -np.inf
        hi[r] = rhs if op in ("=", "<=") else np.inf
    res = milp(c, constraints=LinearConstraint(A, lo, hi), integrality=np.ones(len(c)), bounds=Bounds(0, 1))
    assert res.success
    return round(res.fun)


def solve_by_y_enumeration(objective, constraints, binaries):
    """Fix every y with the right cardinality; the x part then decomposes per assignment row."""
    ys = [v for v in binaries if v.startswith("y_")]
    size = next(t for name, t, _, _ in constraints if name == "size")
    k = next(rhs for name, _, _, rhs in constraints if name == "size")
    assert set(size) == set(ys)
    links = {}
    for name, t, op, rhs in constraints:
        if name.startswith("link_"):
            (x,) = [v for v, w in t.items() if w == 1]
            (y,) = [v for v, w in t.items() if w == -1]
            assert op == "<=" and rhs == 0
            links[x] = y
    rows = [t for name, t, _, _ in constraints if name.startswith("assign_")]
    best = None
    for chosen in itertools.combinations(ys, k):
        chosen = set(chosen)
        total = sum(min(objective.get(x, 0) for x in row if links[x] in chosen) for row in rows)
        best = total if best is None else min(best, total)
    return best
