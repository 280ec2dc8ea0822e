"""Dense two-phase tableau simplex over mpq with Bland's anti-cycling rule.

Solves ``min c.x`` subject to ``A_ub x <= b_ub`` and ``A_eq x = b_eq`` with
``x`` free.  Free variables are split as ``x = xp - xn``.  The routine is
deterministic: identical inputs produce identical pivots and witnesses.
"""
from __future__ import annotations

from .rational import ZERO, ONE

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class _Tableau:
    __slots__ = ("rows", "rhs", "basis", "ncols")

    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, j: int, obj: list, objval: list) -> None:
        rows = self.rows
        prow = rows[r]
        inv = ONE / prow[j]
        nz = [k for k, v in enumerate(prow) if v]
        for k in nz:
            prow[k] *= inv
        self.rhs[r] *= inv
        pr_rhs = self.rhs[r]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[j]
            if not f:
                continue
            for k in nz:
                row[k] -= f * prow[k]
            self.rhs[i] -= f * pr_rhs
        f = obj[j]
        if f:
            for k in nz:
                obj[k] -= f * prow[k]
            objval[0] -= f * pr_rhs
        self.basis[r] = j

    def run(self, obj: list, objval: list, allowed: int) -> str:
        """Minimize; ``obj`` holds reduced costs, ``objval`` the negated value."""
        rows, rhs, basis = self.rows, self.rhs, self.basis
        while True:
            j = -1
            for k in range(allowed):
                if obj[k] < 0:
                    j = k
                    break
            if j < 0:
                return OPTIMAL
            best = None
            r = -1
            for i, row in enumerate(rows):
                a = row[j]
                if a > 0:
                    ratio = rhs[i] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[r]):
                        best = ratio
                        r = i
            if r < 0:
                return UNBOUNDED
            self.pivot(r, j, obj, objval)


def solve(c, A_ub, b_ub, A_eq, b_eq, n):
    """Return ``(status, x)`` with ``x`` a tuple of mpq when optimal."""
    m_ub = len(A_ub)
    m_eq = len(A_eq)
    nx = 2 * n
    ns = m_ub
    base = nx + ns
    rows = []
    rhs = []
    basis = []
    art_rows = []
    for i in range(m_ub):
        a = A_ub[i]
        b = b_ub[i]
        row = [ZERO] * base
        sign = -1 if b < 0 else 1
        for k, v in enumerate(a):
            if v:
                row[k] = v if sign > 0 else -v
                row[n + k] = -row[k]
        row[nx + i] = ONE if sign > 0 else -ONE
        rows.append(row)
        rhs.append(b if sign > 0 else -b)
        if sign > 0:
            basis.append(nx + i)
        else:
            basis.append(None)
            art_rows.append(len(rows) - 1)
    for i in range(m_eq):
        a = A_eq[i]
        b = b_eq[i]
        row = [ZERO] * base
        sign = -1 if b < 0 else 1
        for k, v in enumerate(a):
            if v:
                row[k] = v if sign > 0 else -v
                row[n + k] = -row[k]
        rows.append(row)
        rhs.append(b if sign > 0 else -b)
        basis.append(None)
        art_rows.append(len(rows) - 1)

    nart = len(art_rows)
    ncols = base + nart
    if nart:
        for row in rows:
            row.extend([ZERO] * nart)
        for t, i in enumerate(art_rows):
            rows[i][base + t] = ONE
            basis[i] = base + t
    tab = _Tableau(rows, rhs, basis, ncols)

    if nart:
        # phase one: minimize the sum of artificials
        obj = [ZERO] * ncols
        objval = [ZERO]
        for i in art_rows:
            row = rows[i]
            for k in range(base):
                if row[k]:
                    obj[k] -= row[k]
            objval[0] -= rhs[i]
        tab.run(obj, objval, base)
        if objval[0] != 0:
            return INFEASIBLE, None
        # drive remaining artificials out of the basis
        i = 0
        while i < len(rows):
            if basis[i] >= base:
                row = rows[i]
                j = next((k for k in range(base) if row[k]), None)
                if j is None:
                    del rows[i]
                    del rhs[i]
                    del basis[i]
                    continue
                tab.pivot(i, j, [ZERO] * ncols, [ZERO])
            i += 1
        for row in rows:
            del row[base:]
        tab.ncols = base

    cost = [ZERO] * base
    for k, v in enumerate(c):
        if v:
            cost[k] = v
            cost[n + k] = -v
    obj = list(cost)
    objval = [ZERO]
    for i, bvar in enumerate(basis):
        cb = cost[bvar]
        if cb:
            row = rows[i]
            for k in range(base):
                if row[k]:
                    obj[k] -= cb * row[k]
            objval[0] -= cb * rhs[i]
    status = tab.run(obj, objval, base)
    if status == UNBOUNDED:
        return UNBOUNDED, None
    xfull = [ZERO] * base
    for i, bvar in enumerate(basis):
        xfull[bvar] = rhs[i]
    x = tuple(xfull[k] - xfull[n + k] for k in range(n))
    return OPTIMAL, x
