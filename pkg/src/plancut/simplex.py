"""Exact two-phase simplex over rationals.

Small lifted models are solved exactly so that feasibility questions (is the
integral encoding a solution? is this alpha attainable at all?) have yes/no
answers instead of tolerance haggling.  Bland's rule keeps the pivoting
finite on degenerate models.  Everything is dense ``Fraction`` arithmetic,
which is only sensible for the model sizes this package builds on small
instances; larger models go through the floating-point path in the lp
module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import PreconditionViolated

__all__ = ["ExactResult", "Row", "solve_exact"]

Row = tuple[Mapping[int, Fraction | int], str, Fraction | int]


@dataclass(frozen=True)
class ExactResult:
    status: str
    x: tuple[Fraction, ...] | None
    objective: Fraction | None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = T[r][c]
    T[r] = [v / piv for v in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, T[r])]
    basis[r] = c


def _bland_min(T: list[list[Fraction]], basis: list[int], cost: list[Fraction]) -> str:
    """Minimize ``cost`` over the current tableau in place; returns status."""
    m = len(T)
    if m == 0:
        return "unbounded" if any(v < 0 for v in cost) else "optimal"
    ncols = len(T[0]) - 1
    # reduced costs maintained in an extra working row
    red = list(cost) + [Fraction(0)]
    for i, b in enumerate(basis):
        if red[b] != 0:
            f = red[b]
            red = [a - f * v for a, v in zip(red, T[i] + [])]
    while True:
        enter = next((j for j in range(ncols) if red[j] < 0), None)
        if enter is None:
            return "optimal"
        best_ratio: Fraction | None = None
        leave = -1
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(T, basis, leave, enter)
        f = red[enter]
        red = [a - f * v for a, v in zip(red, T[leave])]


def solve_exact(
    c: Sequence[Fraction | int],
    rows: Sequence[Row],
    upper: Mapping[int, Fraction | int] | None = None,
    maximize: bool = False,
) -> ExactResult:
    """Optimize ``c . x`` subject to ``rows`` and ``0 <= x`` exactly.

    Each row is ``(coeffs, sense, rhs)`` with sense one of ``"="``, ``"<="``,
    ``">="``; ``upper`` adds bounds ``x_j <= u_j`` as explicit rows.  Returns
    the optimum with Fraction coordinates, or an infeasible or unbounded
    status.
    """
    nvar = len(c)
    work: list[tuple[dict[int, Fraction], str, Fraction]] = []
    for coeffs, sense, rhs in rows:
        if sense not in ("=", "<=", ">="):
            raise PreconditionViolated(f"unknown row sense {sense!r}")
        cd = {j: Fraction(v) for j, v in coeffs.items() if v != 0}
        if any(j >= nvar or j < 0 for j in cd):
            raise PreconditionViolated("row references an unknown variable")
        work.append((cd, sense, Fraction(rhs)))
    for j, u in (upper or {}).items():
        work.append(({j: Fraction(1)}, "<=", Fraction(u)))

    m = len(work)
    nslack = sum(1 for _, sense, _ in work if sense != "=")
    total = nvar + nslack
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    si = 0
    for cd, sense, rhs in work:
        row = [Fraction(0)] * total
        for j, v in cd.items():
            row[j] = v
        if sense != "=":
            row[nvar + si] = Fraction(1) if sense == "<=" else Fraction(-1)
            si += 1
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        A.append(row)
        b.append(rhs)

    # phase 1: artificials give a trivially feasible start
    T = [A[i] + [Fraction(0)] * m + [b[i]] for i in range(m)]
    for i in range(m):
        T[i][total + i] = Fraction(1)
    basis = [total + i for i in range(m)]
    phase1 = [Fraction(0)] * total + [Fraction(1)] * m
    status = _bland_min(T, basis, phase1)
    assert status == "optimal", "phase 1 objective is bounded below by zero"
    if sum(T[i][-1] for i in range(m) if basis[i] >= total) != 0:
        return ExactResult("infeasible", None, None)

    # drive leftover artificials out of the basis, dropping redundant rows
    drop: list[int] = []
    for i in range(m):
        if basis[i] >= total:
            col = next((j for j in range(total) if T[i][j] != 0), None)
            if col is None:
                drop.append(i)
            else:
                _pivot(T, basis, i, col)
    for i in sorted(drop, reverse=True):
        del T[i]
        del basis[i]
    T = [row[:total] + [row[-1]] for row in T]

    sign = Fraction(-1) if maximize else Fraction(1)
    phase2 = [sign * Fraction(v) for v in c] + [Fraction(0)] * nslack
    status = _bland_min(T, basis, phase2)
    if status == "unbounded":
        return ExactResult("unbounded", None, None)
    x = [Fraction(0)] * nvar
    for i, bv in enumerate(basis):
        if bv < nvar:
            x[bv] = T[i][-1]
    obj = sum(Fraction(cv) * xv for cv, xv in zip(c, x))
    return ExactResult("optimal", tuple(x), obj)
