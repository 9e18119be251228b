"""Shattering, VC dimension, and dual shatter growth for finite set families.

The dual shatter function pi*(n) counts the most cells (distinct membership
patterns, the empty pattern included when realized) an n-member subfamily
cuts the ground set into.  Families whose pi* grows strictly slower than n^d
are exactly the ones covered by the fractional Helly machinery for
dimension d, which is why the report carries a log-log growth-rate estimate
next to the exact combinatorial quantities.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ._jsonutil import SCHEMA_VERSION, rat_to_json
from .setfam import SetFamily

# exhaustive subfamily enumeration only below this many candidate subfamilies
EXHAUSTIVE_LIMIT = 20000
DEFAULT_TRIALS = 200


class DualShatterResult(NamedTuple):
    values: dict
    mode: str
    seed: Optional[int]


@dataclass(frozen=True)
class ShatterReport:
    """vc_exact is None when the search stopped at the cap; vc_lower always
    holds.  dual_values/density_fit are filled only when dual sizes were
    requested; density_fit is a finite-sample estimate, not a limit."""

    vc_lower: int
    vc_exact: Optional[int]
    witness: frozenset
    dual_values: dict = field(default_factory=dict)
    density_fit: Optional[Fraction] = None
    dual_mode: Optional[str] = None

    def to_json_dict(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "vc_lower": self.vc_lower,
            "vc_exact": self.vc_exact,
            "witness": sorted(self.witness),
        }
        if self.dual_values:
            out["dual_values"] = {str(n): v for n, v in sorted(self.dual_values.items())}
            out["dual_mode"] = self.dual_mode
        if self.density_fit is not None:
            out["density_fit"] = rat_to_json(self.density_fit)
        return out


def is_shattered(family: SetFamily, subset) -> bool:
    """True iff every subset of `subset` occurs as S & subset for a member S.

    The empty subset is vacuously shattered.
    """
    elems = sorted(set(subset))
    for e in elems:
        if not 0 <= e < family.ground_size:
            raise ValueError(f"element {e!r} outside ground range")
    d = len(elems)
    if d == 0:
        return True
    if family.n < (1 << d):
        return False
    smask = 0
    for e in elems:
        smask |= 1 << e
    traces = set()
    for m in family.masks:
        traces.add(m & smask)
        if len(traces) == 1 << d:
            return True
    return False


def vc_dimension(
    family: SetFamily,
    cap: int,
    dual_sizes: Optional[Sequence[int]] = None,
    seed: int = 0,
) -> ShatterReport:
    """Largest shattered subset up to size cap, by levelwise extension.

    Search visits candidate sets in lexicographic order, so the witness is
    deterministic.  vc_exact is set when no shattered set above the reported
    size can exist (search closed below cap, or cap covers the whole ground).
    """
    if cap < 0:
        raise ValueError("cap must be >= 0")
    level = [()]
    best = ()
    d = 0
    while d < cap:
        nxt = []
        for s in level:
            start = s[-1] + 1 if s else 0
            for e in range(start, family.ground_size):
                cand = s + (e,)
                if is_shattered(family, cand):
                    nxt.append(cand)
        if not nxt:
            break
        level = nxt
        best = level[0]
        d += 1
    exact = d if (d < cap or cap >= family.ground_size) else None
    dual_values: dict = {}
    mode = None
    fit = None
    if dual_sizes:
        res = dual_shatter(family, dual_sizes, seed=seed)
        dual_values = res.values
        mode = res.mode
        fit = density_fit(dual_values)
    return ShatterReport(
        vc_lower=d,
        vc_exact=exact,
        witness=frozenset(best),
        dual_values=dual_values,
        density_fit=fit,
        dual_mode=mode,
    )


def _atom_count(masks, ground_size: int) -> int:
    patterns = set()
    for e in range(ground_size):
        pat = 0
        for i, m in enumerate(masks):
            if m >> e & 1:
                pat |= 1 << i
        patterns.add(pat)
    return len(patterns)


def dual_shatter(
    family: SetFamily,
    sizes: Sequence[int],
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
) -> DualShatterResult:
    """max cells cut by an n-member subfamily, for each requested n.

    Exhaustive when every C(members, n) fits under EXHAUSTIVE_LIMIT;
    otherwise seeded sampling of member orderings, scoring every prefix, so
    the sampled values stay non-decreasing in n.  One mode covers the whole
    call and is recorded in the result.
    """
    sizes = sorted(set(sizes))
    if not sizes:
        return DualShatterResult({}, "exhaustive", None)
    if sizes[0] < 1 or sizes[-1] > family.n:
        raise ValueError("sizes must lie in 1..number of members")
    masks = family.masks
    exhaustive = all(math.comb(family.n, n) <= EXHAUSTIVE_LIMIT for n in sizes)
    values = {}
    if exhaustive:
        for n in sizes:
            best = 0
            for combo in itertools.combinations(range(family.n), n):
                sub = [masks[i] for i in combo]
                best = max(best, _atom_count(sub, family.ground_size))
            values[n] = best
        return DualShatterResult(values, "exhaustive", None)
    rng = random.Random(seed)
    values = {n: 0 for n in sizes}
    order = list(range(family.n))
    for _ in range(trials):
        rng.shuffle(order)
        for n in sizes:
            sub = [masks[i] for i in order[:n]]
            values[n] = max(values[n], _atom_count(sub, family.ground_size))
    return DualShatterResult(values, "sampled", seed)


def density_fit(dual_values: dict) -> Optional[Fraction]:
    """Least-squares slope of log pi*(n) vs log n, as a small rational.

    An estimate of the polynomial growth rate; needs at least two distinct
    sizes with positive values, else None.
    """
    pts = [(n, v) for n, v in sorted(dual_values.items()) if n >= 1 and v >= 1]
    if len(pts) < 2:
        return None
    xs = np.log([float(n) for n, _ in pts])
    ys = np.log([float(v) for _, v in pts])
    if np.allclose(xs, xs[0]):
        return None
    slope = float(np.polyfit(xs, ys, 1)[0])
    return Fraction(slope).limit_denominator(1000)
