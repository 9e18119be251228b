"""Exact rational linear programming for intersection numbers and transversals.

A dense two-phase tableau simplex over fractions.Fraction with Bland's
anti-cycling rule.  Instances here are small (at most a few hundred
variables), so termination and bit-exact primal/dual certificates matter
more than speed.  Variables are implicitly nonnegative.

The two LPs of interest are dual to each other on a finite ground set:

    i(F)  = max t   s.t.  sum_{x in S} p_x >= t for all S,  sum p_x = 1
    tau*  = min sum phi(x)   s.t.  sum_{x in S} phi(x) >= 1 for all S

and i(F) * tau*(F) = 1 whenever all members are nonempty.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._jsonutil import SCHEMA_VERSION, rat_to_json
from .setfam import SetFamily

_REL = ("<=", ">=", "==")


@dataclass(frozen=True)
class LpProblem:
    """max/min objective . x subject to rows {<=,>=,==} rhs, x >= 0."""

    sense: str
    objective: tuple
    rows: tuple
    relations: tuple
    rhs: tuple

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        obj = tuple(Fraction(c) for c in self.objective)
        if not obj:
            raise ValueError("need at least one variable")
        rows = tuple(tuple(Fraction(a) for a in row) for row in self.rows)
        rel = tuple(self.relations)
        rhs = tuple(Fraction(b) for b in self.rhs)
        if not (len(rows) == len(rel) == len(rhs)):
            raise ValueError("rows, relations, rhs must have equal length")
        for row in rows:
            if len(row) != len(obj):
                raise ValueError("row width must match objective length")
        for r in rel:
            if r not in _REL:
                raise ValueError(f"unknown relation {r!r}")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "relations", rel)
        object.__setattr__(self, "rhs", rhs)


@dataclass(frozen=True)
class LpSolution:
    """status is 'optimal', 'infeasible', or 'unbounded'.

    When optimal: value is exact, primal is the variable vector, and dual is
    one multiplier per constraint row satisfying exact feasibility,
    complementary slackness, and objective equality (checked before return).
    """

    status: str
    value: Optional[Fraction] = None
    primal: Optional[tuple] = None
    dual: Optional[tuple] = None

    def to_json_dict(self) -> dict:
        out = {"schema": SCHEMA_VERSION, "status": self.status}
        if self.status == "optimal":
            out["value"] = rat_to_json(self.value)
            out["primal"] = [rat_to_json(v) for v in self.primal]
            out["dual"] = [rat_to_json(v) for v in self.dual]
        return out


@dataclass(frozen=True)
class TransversalResult:
    tau_star: Optional[Fraction]
    weights: dict
    status: str = "optimal"
    integer_tau: Optional[int] = None
    integer_witness: Optional[frozenset] = None

    def to_json_dict(self) -> dict:
        out = {"schema": SCHEMA_VERSION, "status": self.status}
        if self.tau_star is not None:
            out["tau_star"] = rat_to_json(self.tau_star)
        out["weights"] = {str(e): rat_to_json(w) for e, w in sorted(self.weights.items())}
        if self.integer_tau is not None:
            out["integer_tau"] = self.integer_tau
            out["integer_witness"] = sorted(self.integer_witness)
        return out


def _price(rows, rhs, basis, costs, ncols):
    """Reduced-cost row r_j = c_j - c_B . (tableau column j), and z = c_B . b."""
    m = len(rows)
    red = list(costs)
    z = Fraction(0)
    for i in range(m):
        cb = costs[basis[i]]
        if cb:
            z += cb * rhs[i]
            row = rows[i]
            for j in range(ncols):
                if row[j]:
                    red[j] -= cb * row[j]
    return red, z


def _pivot(rows, rhs, red, basis, prow, pcol):
    piv = rows[prow][pcol]
    rows[prow] = [a / piv for a in rows[prow]]
    rhs[prow] /= piv
    prow_vals = rows[prow]
    for i in range(len(rows)):
        if i == prow:
            continue
        f = rows[i][pcol]
        if f:
            rows[i] = [a - f * b for a, b in zip(rows[i], prow_vals)]
            rhs[i] -= f * rhs[prow]
    f = red[pcol]
    if f:
        for j in range(len(red)):
            red[j] -= f * prow_vals[j]
    basis[prow] = pcol


def _simplex(rows, rhs, basis, costs, ncols, banned):
    """Run Bland-rule simplex to optimality; returns 'optimal' or 'unbounded'."""
    red, _ = _price(rows, rhs, basis, costs, ncols)
    while True:
        pcol = -1
        for j in range(ncols):
            if j not in banned and red[j] > 0:
                pcol = j
                break
        if pcol < 0:
            return "optimal", red
        prow = -1
        best_ratio = None
        for i in range(len(rows)):
            a = rows[i][pcol]
            if a > 0:
                ratio = rhs[i] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[prow])
                ):
                    best_ratio = ratio
                    prow = i
        if prow < 0:
            return "unbounded", red
        _pivot(rows, rhs, red, basis, prow, pcol)


def solve_lp(problem: LpProblem) -> LpSolution:
    """Exact optimum with primal and dual witnesses; deterministic given input.

    Infeasible and unbounded problems are reported in the status, never as
    exceptions.
    """
    nvars = len(problem.objective)
    maximize = problem.sense == "max"
    obj = list(problem.objective) if maximize else [-c for c in problem.objective]

    # normalize to rhs >= 0, remembering sign flips for the dual
    rows = []
    rels = []
    rhs = []
    flipped = []
    for row, rel, b in zip(problem.rows, problem.relations, problem.rhs):
        if b < 0:
            row = tuple(-a for a in row)
            b = -b
            rel = {"<=": ">=", ">=": "<=", "==": "=="}[rel]
            flipped.append(True)
        else:
            flipped.append(False)
        rows.append(list(row))
        rels.append(rel)
        rhs.append(b)

    m = len(rows)
    # column layout: structural | slack/surplus | artificial
    ncols = nvars
    slack_cols = []
    for i, rel in enumerate(rels):
        if rel == "<=":
            slack_cols.append((ncols, None))
            ncols += 1
        elif rel == ">=":
            slack_cols.append((ncols, ncols + 1))
            ncols += 2
        else:
            slack_cols.append((None, ncols))
            ncols += 1

    tab = []
    basis = []
    unit_cols = []
    artificials = set()
    for i in range(m):
        row = [Fraction(0)] * ncols
        row[:nvars] = rows[i]
        surplus_or_slack, art = slack_cols[i]
        if rels[i] == "<=":
            row[surplus_or_slack] = Fraction(1)
            basis.append(surplus_or_slack)
            unit_cols.append(surplus_or_slack)
        elif rels[i] == ">=":
            row[surplus_or_slack] = Fraction(-1)
            row[art] = Fraction(1)
            basis.append(art)
            unit_cols.append(art)
            artificials.add(art)
        else:
            row[art] = Fraction(1)
            basis.append(art)
            unit_cols.append(art)
            artificials.add(art)
        tab.append(row)

    b = list(rhs)

    if artificials:
        costs1 = [Fraction(0)] * ncols
        for a in artificials:
            costs1[a] = Fraction(-1)
        status, _ = _simplex(tab, b, basis, costs1, ncols, banned=set())
        # status cannot be 'unbounded': phase-1 objective is bounded above by 0
        _, z1 = _price(tab, b, basis, costs1, ncols)
        if z1 < 0:
            return LpSolution(status="infeasible")

    costs2 = [Fraction(0)] * ncols
    costs2[:nvars] = obj
    status, red = _simplex(tab, b, basis, costs2, ncols, banned=artificials)
    if status == "unbounded":
        return LpSolution(status="unbounded")

    primal = [Fraction(0)] * nvars
    for i, bv in enumerate(basis):
        if bv < nvars:
            primal[bv] = b[i]
    value = sum((c * v for c, v in zip(obj, primal)), Fraction(0))

    # y_i = -reduced cost of row i's unit column (slack or artificial, cost 0)
    dual = []
    for i in range(m):
        y = -red[unit_cols[i]]
        if flipped[i]:
            y = -y
        dual.append(y)
    if not maximize:
        value = -value
        dual = [-y for y in dual]

    sol = LpSolution(
        status="optimal", value=value, primal=tuple(primal), dual=tuple(dual)
    )
    _verify_certificates(problem, sol)
    return sol


def _verify_certificates(problem: LpProblem, sol: LpSolution):
    """Exact feasibility + strong duality check; raises on internal error."""
    x = sol.primal
    y = sol.dual
    for row, rel, b in zip(problem.rows, problem.relations, problem.rhs):
        lhs = sum((a * v for a, v in zip(row, x)), Fraction(0))
        ok = lhs <= b if rel == "<=" else (lhs >= b if rel == ">=" else lhs == b)
        if not ok:
            raise ArithmeticError("internal: primal certificate violated")
    maximize = problem.sense == "max"
    ncon = len(problem.rows)
    for i in range(ncon):
        rel = problem.relations[i]
        if rel == "==":
            continue
        sign = y[i] >= 0 if (rel == "<=") == maximize else y[i] <= 0
        if not sign:
            raise ArithmeticError("internal: dual sign violated")
    for j in range(len(problem.objective)):
        coef = sum(
            (problem.rows[i][j] * y[i] for i in range(ncon)), Fraction(0)
        )
        c = problem.objective[j]
        if maximize:
            ok = coef >= c
        else:
            ok = coef <= c
        if not ok:
            raise ArithmeticError("internal: dual feasibility violated")
    yb = sum((problem.rhs[i] * y[i] for i in range(ncon)), Fraction(0))
    if yb != sol.value:
        raise ArithmeticError("internal: strong duality violated")


def _atoms(family: SetFamily):
    """Venn atoms: ground elements grouped by membership pattern.

    Elements in no member are dropped (they can never help either LP).
    Returns (reps, patterns) with reps[i] the smallest element of atom i and
    patterns[i] the frozenset of member indices containing it.  Atomization
    preserves all intersection patterns of the family.
    """
    by_pattern: dict = {}
    for e in range(family.ground_size):
        pat = frozenset(i for i, m in enumerate(family.masks) if m >> e & 1)
        if not pat:
            continue
        if pat not in by_pattern:
            by_pattern[pat] = e
    items = sorted(by_pattern.items(), key=lambda kv: kv[1])
    reps = [e for _, e in items]
    patterns = [pat for pat, _ in items]
    return reps, patterns


def intersection_number(family: SetFamily):
    """Kelley-style max-min LP: the best worst-case mass a probability
    distribution on the ground set can give every member.

    Returns (value, distribution); the distribution is a witness measure
    supported on atom representatives.  An empty member forces value 0 and a
    documented degenerate distribution (point mass on element 0).
    """
    if family.n == 0:
        raise ValueError("family has no members")
    if family.empty_members:
        return Fraction(0), {0: Fraction(1)}
    reps, patterns = _atoms(family)
    na = len(reps)
    # variables: p_0..p_{na-1}, then t
    objective = [Fraction(0)] * na + [Fraction(1)]
    rows = []
    rels = []
    rhs = []
    for i in range(family.n):
        row = [Fraction(1) if i in pat else Fraction(0) for pat in patterns]
        row.append(Fraction(-1))
        rows.append(tuple(row))
        rels.append(">=")
        rhs.append(Fraction(0))
    rows.append(tuple([Fraction(1)] * na + [Fraction(0)]))
    rels.append("==")
    rhs.append(Fraction(1))
    sol = solve_lp(
        LpProblem("max", tuple(objective), tuple(rows), tuple(rels), tuple(rhs))
    )
    if sol.status != "optimal":
        raise ArithmeticError(f"intersection LP came back {sol.status}")
    dist = {reps[i]: sol.primal[i] for i in range(na) if sol.primal[i]}
    return sol.value, dist


def fractional_transversal(
    family: SetFamily, integer_cap: Optional[int] = None
) -> TransversalResult:
    """Minimum total weight on ground elements giving every member weight >= 1.

    Families with an empty member are flagged infeasible rather than raising,
    so generators can pipe degenerate instances through.  When integer_cap is
    given, the exact smallest integer transversal up to that size is attached.
    """
    if family.n == 0:
        return TransversalResult(tau_star=Fraction(0), weights={})
    if family.empty_members:
        return TransversalResult(tau_star=None, weights={}, status="infeasible")
    reps, patterns = _atoms(family)
    na = len(reps)
    objective = [Fraction(1)] * na
    rows = []
    for i in range(family.n):
        rows.append(
            tuple(Fraction(1) if i in pat else Fraction(0) for pat in patterns)
        )
    sol = solve_lp(
        LpProblem(
            "min",
            tuple(objective),
            tuple(rows),
            tuple([">="] * family.n),
            tuple([Fraction(1)] * family.n),
        )
    )
    if sol.status != "optimal":
        raise ArithmeticError(f"transversal LP came back {sol.status}")
    weights = {reps[i]: sol.primal[i] for i in range(na) if sol.primal[i]}
    integer_tau = None
    integer_witness = None
    if integer_cap is not None:
        hit = min_transversal_exact(family, integer_cap)
        if hit is not None:
            integer_tau, integer_witness = hit
    return TransversalResult(
        tau_star=sol.value,
        weights=weights,
        integer_tau=integer_tau,
        integer_witness=integer_witness,
    )


def min_transversal_exact(family: SetFamily, cap: int):
    """Smallest hitting set of size <= cap, or None.

    Iterative deepening over the target size with branch-on-smallest-member
    search; deterministic, so the witness is reproducible.
    """
    if cap < 0:
        raise ValueError("cap must be >= 0")
    if family.n == 0:
        return 0, frozenset()
    if family.empty_members:
        return None
    reps, patterns = _atoms(family)
    # member -> candidate atom reps
    member_reps = []
    for i in range(family.n):
        member_reps.append(
            tuple(reps[a] for a in range(len(reps)) if i in patterns[a])
        )
    covers = {
        reps[a]: frozenset(patterns[a]) for a in range(len(reps))
    }

    def exists(budget, members_left, chosen):
        if not members_left:
            return tuple(chosen)
        if budget == 0:
            return None
        target = min(members_left, key=lambda i: len(member_reps[i]))
        for e in member_reps[target]:
            if e in chosen:
                continue
            chosen.append(e)
            rest = frozenset(i for i in members_left if i not in covers[e])
            found = exists(budget - 1, rest, chosen)
            chosen.pop()
            if found is not None:
                return found
        return None

    all_members = frozenset(range(family.n))
    for size in range(0, cap + 1):
        found = exists(size, all_members, [])
        if found is not None:
            return len(found), frozenset(found)
    return None
