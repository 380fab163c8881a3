"""Exact solvers: maximum-weight closure via s-t min-cut, rational LP feasibility."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

INT64_MAX = 2**63 - 1


class SolverLimitError(RuntimeError):
    """Problem exceeds a configured size bound."""


class DualityError(AssertionError):
    """Min-cut and closure value disagree; indicates a solver bug."""


# -- maximum-weight closure ----------------------------------------------------


@dataclass(frozen=True)
class ClosureProblem:
    """Items with integer weights (profit > 0, cost < 0) and requirement edges."""

    weights: Mapping[Hashable, int]
    requires: Mapping[Hashable, frozenset] = field(default_factory=dict)


@dataclass(frozen=True)
class ClosureResult:
    value: int
    chosen: frozenset
    cut_value: int
    total_profit: int


def max_closure(problem: ClosureProblem) -> ClosureResult:
    """Maximise total weight of a requirement-closed item set.

    Standard project-selection reduction: source -> profit item (cap profit),
    cost item -> sink (cap cost), requirement edges with infinite capacity.
    The source side of a minimum cut is an optimal closure.
    """
    weights = dict(problem.weights)
    for item, reqs in problem.requires.items():
        if item not in weights:
            raise KeyError(f"unknown item {item!r}")
        for r in reqs:
            if r not in weights:
                raise KeyError(f"unknown required item {r!r}")
    total_profit = sum(w for w in weights.values() if w > 0)
    total_cost = sum(-w for w in weights.values() if w < 0)
    if total_profit > INT64_MAX or total_cost > INT64_MAX:
        raise OverflowError("closure weights exceed 64-bit range")
    inf = total_profit + 1

    items = list(weights)
    index = {item: j + 2 for j, item in enumerate(items)}
    size = len(items) + 2
    src, snk = 0, 1
    cap: list[dict[int, int]] = [dict() for _ in range(size)]

    def add(u: int, v: int, c: int) -> None:
        cap[u][v] = cap[u].get(v, 0) + c
        cap[v].setdefault(u, 0)

    for item, w in weights.items():
        if w > 0:
            add(src, index[item], w)
        elif w < 0:
            add(index[item], snk, -w)
    for item, reqs in problem.requires.items():
        for r in reqs:
            add(index[item], index[r], inf)

    flow = 0
    while True:
        parent = [-1] * size
        parent[src] = src
        queue = deque([src])
        while queue and parent[snk] < 0:
            u = queue.popleft()
            for v, c in cap[u].items():
                if c > 0 and parent[v] < 0:
                    parent[v] = u
                    queue.append(v)
        if parent[snk] < 0:
            break
        push = inf
        v = snk
        while v != src:
            u = parent[v]
            push = min(push, cap[u][v])
            v = u
        v = snk
        while v != src:
            u = parent[v]
            cap[u][v] -= push
            cap[v][u] += push
            v = u
        flow += push

    reach = [False] * size
    reach[src] = True
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v, c in cap[u].items():
            if c > 0 and not reach[v]:
                reach[v] = True
                queue.append(v)
    chosen = frozenset(item for item in items if reach[index[item]])
    value = sum(weights[item] for item in chosen)
    if flow + value != total_profit:
        raise DualityError(f"cut {flow} + closure {value} != profits {total_profit}")
    return ClosureResult(value, chosen, flow, total_profit)


def closure_bruteforce(problem: ClosureProblem) -> int:
    """Best closed-set weight by enumerating all subsets (small problems only)."""
    items = list(problem.weights)
    if len(items) > 20:
        raise SolverLimitError("brute-force closure limited to 20 items")
    best = 0
    for bits in range(1 << len(items)):
        chosen = {items[j] for j in range(len(items)) if bits >> j & 1}
        if all(problem.requires.get(x, frozenset()) <= chosen for x in chosen):
            best = max(best, sum(problem.weights[x] for x in chosen))
    return best


# -- exact LP feasibility ------------------------------------------------------

LE, EQ, GE = "<=", "==", ">="


@dataclass
class RationalLP:
    """Feasibility system over named variables with exact rational data.

    Bounds default to ``[0, +inf)``; ``None`` means unbounded on that side.
    """

    lower: dict[str, Fraction | None] = field(default_factory=dict)
    upper: dict[str, Fraction | None] = field(default_factory=dict)
    rows: list[tuple[dict[str, Fraction], str, Fraction]] = field(default_factory=list)

    def var(self, name: str, lo=0, hi=None) -> str:
        if name in self.lower:
            raise ValueError(f"duplicate variable {name!r}")
        self.lower[name] = None if lo is None else Fraction(lo)
        self.upper[name] = None if hi is None else Fraction(hi)
        return name

    def add(self, coeffs: Mapping[str, object], sense: str, rhs) -> None:
        if sense not in (LE, EQ, GE):
            raise ValueError(f"bad sense {sense!r}")
        for v in coeffs:
            if v not in self.lower:
                raise KeyError(f"unknown variable {v!r}")
        row = {v: Fraction(c) for v, c in coeffs.items() if c != 0}
        self.rows.append((row, sense, Fraction(rhs)))

    @property
    def variables(self) -> list[str]:
        return list(self.lower)

    def all_constraints(self) -> list[tuple[dict[str, Fraction], str, Fraction]]:
        """Rows plus bounds written as rows."""
        out = list(self.rows)
        for v in self.variables:
            if self.lower[v] is not None:
                out.append(({v: Fraction(1)}, GE, self.lower[v]))
            if self.upper[v] is not None:
                out.append(({v: Fraction(1)}, LE, self.upper[v]))
        return out


def check_point(lp: RationalLP, point: Mapping[str, Fraction]) -> bool:
    """Exact re-substitution of every constraint, zero slack."""
    for coeffs, sense, rhs in lp.all_constraints():
        lhs = sum((c * point[v] for v, c in coeffs.items()), Fraction(0))
        if sense == LE and not lhs <= rhs:
            return False
        if sense == GE and not lhs >= rhs:
            return False
        if sense == EQ and lhs != rhs:
            return False
    return True


def lp_feasible(
    lp: RationalLP, max_vars: int = 400, max_rows: int = 400
) -> dict[str, Fraction] | None:
    """Phase-1 simplex with Bland's rule in exact arithmetic.

    Returns a point that passes :func:`check_point`, or None when the system
    is infeasible.
    """
    names = lp.variables
    if len(names) > max_vars or len(lp.rows) > max_rows:
        raise SolverLimitError(f"LP too large: {len(names)} vars, {len(lp.rows)} rows")

    # Columns: x = lower + y (y >= 0), or x = y+ - y- if free below.
    cols: list[tuple[str, int]] = []  # (var, +1/-1)
    shift: dict[str, Fraction] = {}
    for v in names:
        lo = lp.lower[v]
        if lo is None:
            cols.append((v, 1))
            cols.append((v, -1))
            shift[v] = Fraction(0)
        else:
            cols.append((v, 1))
            shift[v] = lo
    col_index: dict[str, list[tuple[int, int]]] = {}
    for j, (v, sgn) in enumerate(cols):
        col_index.setdefault(v, []).append((j, sgn))

    rows: list[tuple[dict[str, Fraction], str, Fraction]] = list(lp.rows)
    for v in names:
        if lp.upper[v] is not None:
            rows.append(({v: Fraction(1)}, LE, lp.upper[v]))

    ncols = len(cols)
    tableau: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    slack_cols = 0
    specs = []
    for coeffs, sense, b in rows:
        dense = [Fraction(0)] * ncols
        b = b - sum((c * shift[v] for v, c in coeffs.items()), Fraction(0))
        for v, c in coeffs.items():
            for j, sgn in col_index[v]:
                dense[j] += c * sgn
        specs.append((dense, sense, b))
        if sense != EQ:
            slack_cols += 1

    total = ncols + slack_cols + len(specs)
    basis: list[int] = []
    s = ncols
    for r, (dense, sense, b) in enumerate(specs):
        row = dense + [Fraction(0)] * (slack_cols + len(specs))
        if sense == LE:
            row[s] = Fraction(1)
            s += 1
        elif sense == GE:
            row[s] = Fraction(-1)
            s += 1
        if b < 0:
            row = [-x for x in row]
            b = -b
        art = ncols + slack_cols + r
        row[art] = Fraction(1)
        tableau.append(row)
        rhs.append(b)
        basis.append(art)

    first_art = ncols + slack_cols
    # objective: minimise sum of artificials; reduced costs kept as row 'cost'
    cost = [Fraction(0)] * total
    for j in range(first_art, total):
        cost[j] = Fraction(1)
    obj = Fraction(0)
    for r in range(len(tableau)):
        for j in range(total):
            cost[j] -= tableau[r][j]
        obj -= rhs[r]

    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for r in range(len(tableau)):
            a = tableau[r][enter]
            if a > 0:
                ratio = rhs[r] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:  # unbounded phase-1 cannot happen (objective >= 0)
            raise AssertionError("phase-1 objective unbounded")
        piv = tableau[leave][enter]
        prow = [x / piv for x in tableau[leave]]
        tableau[leave] = prow
        rhs[leave] = rhs[leave] / piv
        for r in range(len(tableau)):
            if r != leave:
                f = tableau[r][enter]
                if f:
                    row = tableau[r]
                    tableau[r] = [x - f * y for x, y in zip(row, prow)]
                    rhs[r] -= f * rhs[leave]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, prow)]
        obj -= f * rhs[leave]
        basis[leave] = enter

    if obj != 0:
        return None
    values = [Fraction(0)] * total
    for r, j in enumerate(basis):
        values[j] = rhs[r]
    point = {}
    for v in names:
        point[v] = shift[v] + sum((values[j] * sgn for j, sgn in col_index[v]), Fraction(0))
    if not check_point(lp, point):
        raise AssertionError("simplex returned a point that fails re-substitution")
    return point


def fourier_motzkin_feasible(lp: RationalLP, max_rows: int = 20000) -> bool:
    """Independent feasibility decision by variable elimination.

    Equalities are eliminated by substitution first. Intended for small
    systems; raises SolverLimitError when the row count explodes.
    """
    # every row as (coeffs, rhs) meaning sum coeffs*x <= rhs, or an equality
    ineqs: list[tuple[dict[str, Fraction], Fraction]] = []
    eqs: list[tuple[dict[str, Fraction], Fraction]] = []
    for coeffs, sense, b in lp.all_constraints():
        coeffs = {v: c for v, c in coeffs.items() if c}
        if sense == LE:
            ineqs.append((coeffs, b))
        elif sense == GE:
            ineqs.append(({v: -c for v, c in coeffs.items()}, -b))
        else:
            eqs.append((coeffs, b))

    def substitute(rows, var, expr, const):
        # var = const + sum expr
        out = []
        for coeffs, b in rows:
            a = coeffs.get(var)
            if not a:
                out.append((coeffs, b))
                continue
            new = {v: c for v, c in coeffs.items() if v != var}
            for u, c in expr.items():
                new[u] = new.get(u, Fraction(0)) + a * c
            out.append(({v: c for v, c in new.items() if c}, b - a * const))
        return out

    while eqs:
        coeffs, b = eqs.pop()
        if not coeffs:
            if b != 0:
                return False
            continue
        var, a = next(iter(coeffs.items()))
        expr = {u: -c / a for u, c in coeffs.items() if u != var}
        const = b / a
        eqs = substitute(eqs, var, expr, const)
        ineqs = substitute(ineqs, var, expr, const)

    def normalise(rows):
        seen = {}
        for coeffs, b in rows:
            if not coeffs:
                if b < 0:
                    return None
                continue
            scale = max(abs(c) for c in coeffs.values())
            key = tuple(sorted((v, c / scale) for v, c in coeffs.items()))
            val = b / scale
            if key not in seen or val < seen[key]:
                seen[key] = val
        return [(dict(key), b) for key, b in seen.items()]

    rows = normalise(ineqs)
    if rows is None:
        return False
    while True:
        variables = {v for coeffs, _ in rows for v in coeffs}
        if not variables:
            return True

        def cost(v):
            pos = sum(1 for c, _ in rows if c.get(v, 0) > 0)
            neg = sum(1 for c, _ in rows if c.get(v, 0) < 0)
            return pos * neg - pos - neg

        var = min(sorted(variables), key=cost)
        pos, neg, rest = [], [], []
        for coeffs, b in rows:
            a = coeffs.get(var, 0)
            (pos if a > 0 else neg if a < 0 else rest).append((coeffs, b))
        for cp, bp in pos:
            ap = cp[var]
            for cn, bn in neg:
                an = -cn[var]
                new = {}
                for v, c in cp.items():
                    if v != var:
                        new[v] = new.get(v, Fraction(0)) + c / ap
                for v, c in cn.items():
                    if v != var:
                        new[v] = new.get(v, Fraction(0)) + c / an
                rest.append(({v: c for v, c in new.items() if c}, bp / ap + bn / an))
        rows = normalise(rest)
        if rows is None:
            return False
        if len(rows) > max_rows:
            raise SolverLimitError("Fourier-Motzkin row explosion")


def lp_from_rows(
    variables: Iterable[tuple[str, object, object]],
    rows: Iterable[tuple[Mapping[str, object], str, object]],
) -> RationalLP:
    lp = RationalLP()
    for name, lo, hi in variables:
        lp.var(name, lo, hi)
    for coeffs, sense, rhs in rows:
        lp.add(coeffs, sense, rhs)
    return lp
