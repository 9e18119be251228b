"""Finite set systems and their intersection-pattern checks.

The universal object is a SetFamily: an ordered tuple of subsets of a finite
ground set {0, ..., ground_size-1}.  Repeats are allowed; every counting
notion is indexed by member position, so two identical sets at different
indices are distinct members.  All fractions are exact rationals; verdicts
never touch floating point.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import NamedTuple, Optional, Sequence

from . import _backend as backend
from ._jsonutil import SCHEMA_VERSION, rat_from_json, rat_to_json


@dataclass(frozen=True)
class SetFamily:
    """Ordered family of subsets of {0..ground_size-1}, repeats allowed.

    Empty member sets are legal but surface in `empty_members`; one empty
    member makes every index subset through it inconsistent.
    """

    ground_size: int
    members: tuple = ()
    labels: Optional[tuple] = None

    def __post_init__(self):
        if not isinstance(self.ground_size, int) or self.ground_size < 1:
            raise ValueError("ground_size must be a positive integer")
        frozen = tuple(frozenset(s) for s in self.members)
        object.__setattr__(self, "members", frozen)
        for idx, s in enumerate(frozen):
            for e in s:
                if not isinstance(e, int) or not 0 <= e < self.ground_size:
                    raise ValueError(
                        f"set {idx}: element {e!r} outside ground range "
                        f"[0, {self.ground_size})"
                    )
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(frozen):
                raise ValueError("labels length must match number of members")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.members)

    @cached_property
    def masks(self) -> tuple:
        """Bitmask per member; bit e is set iff e belongs to the member."""
        out = []
        for s in self.members:
            m = 0
            for e in s:
                m |= 1 << e
            out.append(m)
        return tuple(out)

    @cached_property
    def empty_members(self) -> tuple:
        return tuple(i for i, s in enumerate(self.members) if not s)

    def to_json_dict(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "ground": self.ground_size,
            "sets": [sorted(s) for s in self.members],
        }
        if self.labels is not None:
            out["labels"] = [str(l) for l in self.labels]
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SetFamily":
        if not isinstance(obj, dict):
            raise ValueError("family document must be a JSON object")
        try:
            ground = obj["ground"]
            sets = obj["sets"]
        except KeyError as exc:
            raise ValueError(f"family document missing key {exc}") from None
        if not isinstance(ground, int) or ground < 1:
            raise ValueError("'ground' must be a positive integer")
        if not isinstance(sets, list):
            raise ValueError("'sets' must be a list of lists")
        members = []
        for idx, s in enumerate(sets):
            if not isinstance(s, list):
                raise ValueError(f"set {idx}: not a list")
            for e in s:
                if not isinstance(e, int) or not 0 <= e < ground:
                    raise ValueError(
                        f"set {idx}: element {e!r} outside ground range [0, {ground})"
                    )
            members.append(frozenset(s))
        labels = obj.get("labels")
        if labels is not None:
            if not isinstance(labels, list) or len(labels) != len(members):
                raise ValueError("'labels' must be a list matching 'sets' in length")
            labels = tuple(labels)
        return cls(ground_size=ground, members=tuple(members), labels=labels)


@dataclass(frozen=True)
class RationalWeights:
    """Finitely supported probability weights over member indices."""

    weights: dict

    def __post_init__(self):
        clean = {}
        for idx, w in dict(self.weights).items():
            if not isinstance(idx, int) or idx < 0:
                raise ValueError(f"weight index {idx!r} is not a member index")
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"weight at index {idx} is negative")
            if w > 0:
                clean[idx] = w
        if sum(clean.values(), Fraction(0)) != 1:
            raise ValueError("weights must sum to exactly 1")
        object.__setattr__(self, "weights", clean)

    @classmethod
    def uniform(cls, n: int) -> "RationalWeights":
        if n < 1:
            raise ValueError("uniform weights need at least one index")
        return cls({i: Fraction(1, n) for i in range(n)})

    def to_json_dict(self) -> dict:
        return {str(i): rat_to_json(w) for i, w in sorted(self.weights.items())}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "RationalWeights":
        return cls({int(i): rat_from_json(w) for i, w in obj.items()})


@dataclass(frozen=True)
class ConsReport:
    """How many k-element index subsets have intersecting members."""

    k: int
    cons_count: int
    total: int
    fraction: Fraction = field(init=False)

    def __post_init__(self):
        if not 0 <= self.cons_count <= self.total:
            raise ValueError("cons_count outside [0, total]")
        object.__setattr__(self, "fraction", Fraction(self.cons_count, self.total))

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "cons_count": self.cons_count,
            "total": self.total,
            "fraction": rat_to_json(self.fraction),
        }


class MaxIntersecting(NamedTuple):
    size: int
    element: int
    indices: frozenset


@dataclass(frozen=True)
class FhpReport:
    """Instance-level fractional Helly report.

    best_beta * n is the maximum depth over ground elements, i.e. the size of
    the largest subfamily with a common point; witness_element is the
    smallest ground element attaining it.
    """

    n: int
    k: int
    alpha: Fraction
    cons: ConsReport
    best_beta: Fraction
    witness_element: int
    witness_indices: frozenset
    hypothesis_holds: bool
    empty_members: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "n": self.n,
            "k": self.k,
            "alpha": rat_to_json(self.alpha),
            "cons": self.cons.to_json_dict(),
            "best_beta": rat_to_json(self.best_beta),
            "witness_element": self.witness_element,
            "witness_indices": sorted(self.witness_indices),
            "hypothesis_holds": self.hypothesis_holds,
            "empty_members": list(self.empty_members),
        }


class PkResult(NamedTuple):
    holds: bool
    counterexample: Optional[tuple]


@dataclass(frozen=True)
class ColorfulReport:
    """Rainbow-tuple intersection statistics for several families."""

    d: int
    alpha: Fraction
    rainbow_count: int
    total: int
    fraction: Fraction
    per_family_beta: tuple
    best_beta: Fraction
    holds: bool
    # reference constant from the convex colorful bound, carried as metadata
    beta_reference: Fraction

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "d": self.d,
            "alpha": rat_to_json(self.alpha),
            "rainbow_count": self.rainbow_count,
            "total": self.total,
            "fraction": rat_to_json(self.fraction),
            "per_family_beta": [rat_to_json(b) for b in self.per_family_beta],
            "best_beta": rat_to_json(self.best_beta),
            "holds": self.holds,
            "beta_reference": rat_to_json(self.beta_reference),
        }


@dataclass(frozen=True)
class MeasureReport:
    """Product-measure mass of consistent d-tuples plus max weighted depth."""

    d: int
    alpha: Fraction
    tuple_measure: Fraction
    weighted_depth: Fraction
    holds: bool

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "d": self.d,
            "alpha": rat_to_json(self.alpha),
            "tuple_measure": rat_to_json(self.tuple_measure),
            "weighted_depth": rat_to_json(self.weighted_depth),
            "holds": self.holds,
        }


def k_subsets_colex(n: int, k: int):
    """Yield the k-subsets of range(n) in colexicographic order.

    This is the documented enumeration order wherever subsets are
    materialized, so reported tuples are reproducible.
    """
    if k == 0:
        yield ()
        return
    for top in range(k - 1, n):
        for rest in k_subsets_colex(top, k - 1):
            yield rest + (top,)


def cons_k(family: SetFamily, k: int) -> ConsReport:
    """Count k-element index subsets whose member sets share a ground element."""
    n = family.n
    if k < 1 or k > n:
        raise ValueError(f"k must satisfy 1 <= k <= {n}, got {k}")
    count = backend.count_intersecting_k(family.masks, family.ground_size, k)
    return ConsReport(k=k, cons_count=count, total=comb(n, k))


def max_intersecting(family: SetFamily) -> MaxIntersecting:
    """Largest subfamily with a common element, via ground-element depths.

    Ties go to the smallest ground element.  If every member is empty the
    size is 0 and the witness degenerates to element 0 with no indices.
    """
    if family.n == 0:
        raise ValueError("family has no members")
    depths = backend.depth_counts(family.masks, family.ground_size)
    size = max(depths)
    element = depths.index(size)
    if size == 0:
        return MaxIntersecting(0, 0, frozenset())
    indices = frozenset(i for i, s in enumerate(family.members) if element in s)
    return MaxIntersecting(size, element, indices)


def check_fhp_instance(family: SetFamily, k: int, alpha) -> FhpReport:
    alpha = Fraction(alpha)
    cons = cons_k(family, k)
    best = max_intersecting(family)
    return FhpReport(
        n=family.n,
        k=k,
        alpha=alpha,
        cons=cons,
        best_beta=Fraction(best.size, family.n),
        witness_element=best.element,
        witness_indices=best.indices,
        hypothesis_holds=cons.fraction >= alpha,
        empty_members=family.empty_members,
    )


def check_pk_property(family: SetFamily, p: int, k: int) -> PkResult:
    """Does every p-tuple of members (repetition allowed) contain k with a
    common element?

    A tuple passes iff some ground element appears in at least k of its
    positions, which is invariant under permuting the tuple; the scan
    therefore runs over p-multisets in nondecreasing order, and the first
    failing multiset is exactly the lexicographically first failing tuple.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if p < k:
        raise ValueError(f"need p >= k, got p={p}, k={k}")
    if family.n == 0:
        raise ValueError("family has no members")
    members = family.members
    for combo in itertools.combinations_with_replacement(range(family.n), p):
        counts: dict = {}
        ok = False
        for i in combo:
            for e in members[i]:
                c = counts.get(e, 0) + 1
                if c >= k:
                    ok = True
                    break
                counts[e] = c
            if ok:
                break
        if not ok:
            return PkResult(False, combo)
    return PkResult(True, None)


def sequence_ratio(family: SetFamily, index_sequence: Sequence[int]) -> Fraction:
    """(largest intersecting sub-multiset size) / (sequence length).

    A sub-multiset of positions is intersecting iff a ground element lies in
    all of them, so the numerator is the maximum multiplicity-weighted depth.
    A singleton of a nonempty set counts; a sequence of empty sets scores 0.
    """
    seq = tuple(index_sequence)
    if not seq:
        raise ValueError("index sequence must be nonempty")
    for i in seq:
        if not 0 <= i < family.n:
            raise ValueError(f"index {i} out of range")
    counts: dict = {}
    best = 0
    for i in seq:
        for e in family.members[i]:
            c = counts.get(e, 0) + 1
            counts[e] = c
            if c > best:
                best = c
    return Fraction(best, len(seq))


def min_sequence_ratio(family: SetFamily, max_len: int) -> Fraction:
    """Minimum of sequence_ratio over all index sequences of length <= max_len.

    sequence_ratio is permutation-invariant, so the exhaustive scan walks
    nondecreasing sequences (multisets) with incremental depth updates; this
    covers every sequence of length 1..max_len exactly.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if family.n == 0:
        raise ValueError("family has no members")
    members = family.members
    counts = [0] * family.ground_size
    best = Fraction(2)  # ratios never exceed 1

    def rec(start: int, length: int, maxdepth: int):
        nonlocal best
        for i in range(start, family.n):
            md = maxdepth
            for e in members[i]:
                counts[e] += 1
                if counts[e] > md:
                    md = counts[e]
            ratio = Fraction(md, length + 1)
            if ratio < best:
                best = ratio
            if length + 1 < max_len:
                rec(i, length + 1, md)
            for e in members[i]:
                counts[e] -= 1

    rec(0, 0, 0)
    return best


def colorful_check(families: Sequence[SetFamily], alpha) -> ColorfulReport:
    """Count rainbow index tuples (one member per family) with a common element."""
    alpha = Fraction(alpha)
    fams = list(families)
    if not fams:
        raise ValueError("need at least one family")
    ground = fams[0].ground_size
    for f in fams:
        if f.ground_size != ground:
            raise ValueError("families must share one ground set")
        if f.n == 0:
            raise ValueError("families must be nonempty")
    d = len(fams)
    total = 1
    for f in fams:
        total *= f.n

    mask_rows = [f.masks for f in fams]
    count = 0

    def rec(level: int, acc: int):
        nonlocal count
        if level == d:
            count += 1
            return
        for m in mask_rows[level]:
            a = acc & m
            if a:
                rec(level + 1, a)

    rec(0, (1 << ground) - 1)

    betas = tuple(
        Fraction(max_intersecting(f).size, f.n) for f in fams
    )
    fraction = Fraction(count, total)
    return ColorfulReport(
        d=d,
        alpha=alpha,
        rainbow_count=count,
        total=total,
        fraction=fraction,
        per_family_beta=betas,
        best_beta=max(betas),
        holds=fraction >= alpha,
        beta_reference=alpha / (d + 1),
    )


def measure_fhp_check(
    family: SetFamily, weights: RationalWeights, d: int, alpha
) -> MeasureReport:
    """Product-measure mass of consistent ordered d-tuples of indices.

    Ordered tuples include the diagonal; a tuple is consistent iff the
    member sets at its support have a common element.  Also reports the
    maximum weighted depth max_a mu({i : a in S_i}).
    """
    alpha = Fraction(alpha)
    if d < 1:
        raise ValueError("d must be >= 1")
    w = weights.weights
    for idx in w:
        if idx >= family.n:
            raise ValueError(f"weight index {idx} beyond family size {family.n}")
    support = sorted(w)
    masks = family.masks
    total = Fraction(0)
    for combo in itertools.combinations_with_replacement(support, d):
        inter = -1
        for i in set(combo):
            inter &= masks[i]
            if not inter:
                break
        if not inter:
            continue
        mult = Counter(combo)
        arrangements = factorial(d)
        wprod = Fraction(1)
        for i, c in mult.items():
            arrangements //= factorial(c)
            wprod *= w[i] ** c
        total += arrangements * wprod

    depth: dict = {}
    for i in support:
        for e in family.members[i]:
            depth[e] = depth.get(e, Fraction(0)) + w[i]
    weighted_depth = max(depth.values(), default=Fraction(0))
    return MeasureReport(
        d=d,
        alpha=alpha,
        tuple_measure=total,
        weighted_depth=weighted_depth,
        holds=total >= alpha,
    )


def wfhp_counting_bound(n: int, p: int, k: int) -> Fraction:
    """Guaranteed cons_k count for any n-member family with the (p,k)-property.

    Every k-subset lies in C(n-k, p-k) many p-subsets and every p-subset
    contains an intersecting k-subset, so cons_k >= C(n,p)/C(n-k,p-k).
    """
    if not (n >= p >= k >= 1):
        raise ValueError(f"need n >= p >= k >= 1, got n={n}, p={p}, k={k}")
    return Fraction(comb(n, p), comb(n - k, p - k))
