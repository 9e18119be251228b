"""Definable set families over small prime fields, with counting-measure fits.

Ground sets are F_p^d for a verified prime field F_p; families come from a
membership formula phi(x; y) whose parameters b range over a definable set
psi(y; z) at a fixed z = e.  Point counts of members are then matched
against the mu * q^d + O(q^(d-1/2)) shape: dim_meas_fit snaps mu to a
small-denominator rational and reports dimension, measure, and residual
exactly.  Everything is exhaustive; the caps keep that honest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import sympy

from ._jsonutil import SCHEMA_VERSION, rat_to_json
from .formulas import evaluate_formula
from .setfam import (
    ColorfulReport,
    FhpReport,
    MeasureReport,
    RationalWeights,
    SetFamily,
    check_fhp_instance,
    colorful_check,
    measure_fhp_check,
)

FIELD_CAP = 61
ARITY_CAP = 3
DEFAULT_SIZE_CAP = 250000


class FieldStructure:
    """F_p with explicit +/* tables, axioms re-verified at construction.

    Use FieldStructure.for_prime(p); instances are cached per p.
    """

    __slots__ = ("p", "add_table", "mul_table")

    def __init__(self, p: int):
        if not sympy.isprime(p):
            raise ValueError(f"p = {p} is not prime")
        if p > FIELD_CAP:
            raise ValueError(f"p = {p} exceeds the field cap {FIELD_CAP}")
        self.p = p
        r = np.arange(p)
        add = (r[:, None] + r[None, :]) % p
        mul = (r[:, None] * r[None, :]) % p
        _verify_field_axioms(p, add, mul)
        self.add_table = tuple(tuple(int(v) for v in row) for row in add)
        self.mul_table = tuple(tuple(int(v) for v in row) for row in mul)

    @classmethod
    @lru_cache(maxsize=32)
    def for_prime(cls, p: int) -> "FieldStructure":
        return cls(p)

    @property
    def universe(self):
        return range(self.p)

    def const(self, v) -> int:
        return int(v) % self.p

    def fn(self, name: str, args) -> int:
        if name == "+":
            return self.add_table[args[0]][args[1]]
        if name == "*":
            return self.mul_table[args[0]][args[1]]
        if name == "-":
            return (args[0] - args[1]) % self.p
        if name == "neg":
            return (-args[0]) % self.p
        raise ValueError(f"unknown function {name!r}")

    def rel(self, name: str, args) -> bool:
        raise ValueError(f"unknown relation {name!r}")


def _verify_field_axioms(p: int, add: np.ndarray, mul: np.ndarray):
    r = np.arange(p)
    i, j, k = np.meshgrid(r, r, r, indexing="ij", sparse=False)
    checks = [
        (add == add.T).all(),
        (mul == mul.T).all(),
        (add[0] == r).all(),
        (mul[1] == r).all(),
        (add[add[i, j], k] == add[i, add[j, k]]).all(),
        (mul[mul[i, j], k] == mul[i, mul[j, k]]).all(),
        (mul[i, add[j, k]] == add[mul[i, j], mul[i, k]]).all(),
        all(0 in add[a] for a in range(p)),
        all(1 in mul[a] for a in range(1, p)),
        (mul[0] == 0).all(),
    ]
    if not all(bool(c) for c in checks):
        raise ArithmeticError(f"field axiom verification failed for p={p}")


def eval_formula(field: FieldStructure, formula, point: Sequence[int]) -> bool:
    """Truth of the formula with variables 0..len(point)-1 bound to point."""
    env = {i: field.const(v) for i, v in enumerate(point)}
    return evaluate_formula(field, formula, env)


def definable_family(
    field: FieldStructure,
    phi,
    x_arity: int,
    psi,
    y_arity: int,
    e: Sequence[int] = (),
    size_cap: int = DEFAULT_SIZE_CAP,
) -> SetFamily:
    """One member per parameter b with psi(b; e); member = {x : phi(x; b)}.

    phi's variables are x (indices 0..x_arity-1) then y; psi's are y
    (indices 0..y_arity-1) then z, with z fixed to e.  Ground points are
    the tuples of F_p^x_arity in lexicographic order; labels name b.  An
    empty parameter set yields a family with zero members (callers that
    need members should treat that as a flag).
    """
    if not 1 <= x_arity <= ARITY_CAP:
        raise ValueError(f"x_arity must be in 1..{ARITY_CAP}")
    if not 1 <= y_arity <= ARITY_CAP:
        raise ValueError(f"y_arity must be in 1..{ARITY_CAP}")
    p = field.p
    npoints = p**x_arity
    if npoints > size_cap:
        raise ValueError(f"ground size {npoints} exceeds size_cap {size_cap}")
    e = tuple(field.const(v) for v in e)
    params = []
    for b in itertools.product(range(p), repeat=y_arity):
        if eval_formula(field, psi, b + e):
            params.append(b)
    points = list(itertools.product(range(p), repeat=x_arity))
    members = []
    labels = []
    for b in params:
        members.append(
            frozenset(
                idx
                for idx, x in enumerate(points)
                if eval_formula(field, phi, x + b)
            )
        )
        labels.append(f"b={b}")
    return SetFamily(
        ground_size=npoints, members=tuple(members), labels=tuple(labels)
    )


def line_family(field: FieldStructure) -> SetFamily:
    """All q^2 non-vertical lines x1 = a*x0 + b over F_q^2, labeled by (a,b)."""
    phi = ["=", ["var", 1], ["+", ["*", ["var", 2], ["var", 0]], ["var", 3]]]
    return definable_family(field, phi, 2, ["true"], 2)


@dataclass(frozen=True)
class DimMeasFit:
    """count ~ mu * q^d with residual |count - mu*q^d| <= C*q^(d-1/2).

    ok is False when no (d, mu) within the caps meets the residual bound
    (the returned pair is then the best effort); ambiguous is True when
    more than one dimension admits an in-bound fit.
    """

    d: int
    mu: Fraction
    residual: Fraction
    ok: bool
    ambiguous: bool

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "d": self.d,
            "mu": rat_to_json(self.mu),
            "residual": rat_to_json(self.residual),
            "ok": self.ok,
            "ambiguous": self.ambiguous,
        }


def _walk_fit(count: int, q: int, d: int, bound2: Fraction, den_cap: int, mu_cap: int):
    """Stern-Brocot walk toward count/q^d.

    Returns (first admissible (residual, mu) or None, best-seen (residual,
    mu)).  The first mediant on the path meeting the residual bound is the
    simplest admissible measure for this dimension.
    """
    qd = Fraction(q) ** d
    tau = Fraction(count) / qd
    ln, ld, rn, rd = 0, 1, 1, 0
    first = None
    best = None
    while True:
        mn, md = ln + rn, ld + rd
        if md > den_cap:
            break
        mu = Fraction(mn, md)
        if mu <= mu_cap:
            resid = abs(count - mu * qd)
            if best is None or (resid, mu) < best:
                best = (resid, mu)
            if first is None and resid * resid <= bound2:
                first = (resid, mu)
                break
        if tau == mu:
            break
        if tau < mu:
            rn, rd = mn, md
        else:
            if mu > mu_cap:
                break
            ln, ld = mn, md
    return first, best


def dim_meas_fit(
    count: int,
    q: int,
    n: int,
    C=1,
    den_cap: int = 8,
    mu_cap: int = 8,
) -> DimMeasFit:
    """Snap a point count to (dimension, measure) against powers of q.

    For each d in 0..n the walk finds the simplest rational mu (denominator
    and value capped) with |count - mu*q^d| <= C*q^(d-1/2); among
    admissible dimensions the fit minimizing (residual, |mu-1|, d) wins.
    count = 0 returns the conventional (0, 0).
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if q < 2:
        raise ValueError("q must be >= 2")
    if n < 0:
        raise ValueError("n must be >= 0")
    if count > q**n:
        raise ValueError(f"count {count} exceeds q^n = {q ** n}")
    C = Fraction(C)
    if C <= 0:
        raise ValueError("C must be positive")
    if count == 0:
        return DimMeasFit(
            d=0, mu=Fraction(0), residual=Fraction(0), ok=True, ambiguous=False
        )
    admissible = []
    fallback = []
    for d in range(n + 1):
        bound2 = C * C * Fraction(q) ** (2 * d - 1)
        first, best = _walk_fit(count, q, d, bound2, den_cap, mu_cap)
        if first is not None:
            resid, mu = first
            admissible.append((resid, abs(mu - 1), d, mu))
        if best is not None:
            resid, mu = best
            fallback.append((resid, abs(mu - 1), d, mu))
    if admissible:
        resid, _, d, mu = min(admissible)
        return DimMeasFit(
            d=d, mu=mu, residual=resid, ok=True, ambiguous=len(admissible) > 1
        )
    resid, _, d, mu = min(fallback)
    return DimMeasFit(d=d, mu=mu, residual=resid, ok=False, ambiguous=False)


@dataclass(frozen=True)
class FfReport:
    """FHP statistics of a definable family, stamped with the field size."""

    q: int
    k: int
    alpha: Fraction
    fhp: FhpReport

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "q": self.q,
            "k": self.k,
            "alpha": rat_to_json(self.alpha),
            "fhp": self.fhp.to_json_dict(),
        }


def ff_fhp_experiment(
    field: FieldStructure,
    phi,
    x_arity: int,
    psi,
    y_arity: int,
    e: Sequence[int],
    k: int,
    alpha,
) -> FfReport:
    """Build the definable family and run the instance-level FHP check."""
    family = definable_family(field, phi, x_arity, psi, y_arity, e)
    if family.n == 0:
        raise ValueError("parameter set is empty; no family members")
    alpha = Fraction(alpha)
    return FfReport(
        q=field.p, k=k, alpha=alpha, fhp=check_fhp_instance(family, k, alpha)
    )


@dataclass(frozen=True)
class ColorfulFfReport:
    q: int
    alpha: Fraction
    colorful: ColorfulReport
    measures: tuple

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "q": self.q,
            "alpha": rat_to_json(self.alpha),
            "colorful": self.colorful.to_json_dict(),
            "measures": [m.to_json_dict() for m in self.measures],
        }


def colorful_ff_experiment(
    field: FieldStructure, specs: Sequence[tuple], alpha
) -> ColorfulFfReport:
    """Rainbow check over several definable families on one point sort.

    specs is a sequence of (phi, x_arity, psi, y_arity, e); all x_arities
    must agree.  Each family also gets a product-measure check under the
    uniform counting measure on its parameter set, with tuple arity d =
    number of families.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("need at least one family spec")
    arities = {s[1] for s in specs}
    if len(arities) != 1:
        raise ValueError("families must share the point sort (equal x_arity)")
    families = [
        definable_family(field, phi, xa, psi, ya, e)
        for phi, xa, psi, ya, e in specs
    ]
    for idx, fam in enumerate(families):
        if fam.n == 0:
            raise ValueError(f"family {idx}: parameter set is empty")
    alpha = Fraction(alpha)
    d = len(families)
    colorful = colorful_check(families, alpha)
    measures = tuple(
        measure_fhp_check(fam, RationalWeights.uniform(fam.n), d, alpha)
        for fam in families
    )
    return ColorfulFfReport(
        q=field.p, alpha=alpha, colorful=colorful, measures=measures
    )
