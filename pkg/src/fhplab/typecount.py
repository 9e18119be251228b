"""Positive partial types over finite structures, and their counting growth.

The central quantity: given a formula phi(x; y) and a parameter set A of
size l, count the largest family of pairwise m-inconsistent positive
phi-types of size <= k.  Consistency here always means satisfiability in
the supplied ambient finite structure; every report carries that caveat
implicitly, since no larger model is ever consulted.

Growth of this count in l separates tame formulas (polynomial with a
power saving below exponent k) from grid-like ones; the probe at the
bottom measures the exponent empirically and compares it against the
Zarankiewicz threshold k - 1/d^(k-1).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._jsonutil import SCHEMA_VERSION, rat_to_json
from .formulas import evaluate_formula
from .setfam import SetFamily

X_CAP = 50000
TYPE_CAP = 5000
EXHAUSTIVE_A_LIMIT = 300
DEFAULT_SAMPLES = 30
DEFAULT_DIVIDING_BUDGET = 200000


class TypeBlowupError(RuntimeError):
    """Type enumeration exceeded its cap; carries the partial count."""

    def __init__(self, cap: int, partial_count: int):
        super().__init__(
            f"type enumeration exceeded cap {cap} (partial count {partial_count})"
        )
        self.cap = cap
        self.partial_count = partial_count


@dataclass(frozen=True)
class FiniteStructure:
    """Universe plus named total relation/function tables.

    relations: name -> (arity, set of true tuples); functions: name ->
    (arity, dict tuple -> value).  Function tables must be total on the
    universe and relation rows must stay inside it; both are checked.
    Universe elements should be orderable (ints in practice) so searches
    can fix a deterministic order.
    """

    universe: tuple
    relations: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)

    def __post_init__(self):
        uni = tuple(self.universe)
        if not uni:
            raise ValueError("universe must be nonempty")
        if len(set(uni)) != len(uni):
            raise ValueError("universe has repeated elements")
        uset = set(uni)
        rels = {}
        for name, (arity, rows) in dict(self.relations).items():
            rows = frozenset(tuple(r) for r in rows)
            for row in rows:
                if len(row) != arity:
                    raise ValueError(f"relation {name!r}: row {row} has wrong arity")
                if not set(row) <= uset:
                    raise ValueError(f"relation {name!r}: row {row} leaves universe")
            rels[str(name)] = (int(arity), rows)
        fns = {}
        for name, (arity, table) in dict(self.functions).items():
            table = {tuple(t): v for t, v in dict(table).items()}
            if len(uni) ** arity > 10**6:
                raise ValueError(f"function {name!r}: table too large to validate")
            for args in itertools.product(uni, repeat=arity):
                if args not in table:
                    raise ValueError(f"function {name!r}: not total at {args}")
                if table[args] not in uset:
                    raise ValueError(f"function {name!r}: value leaves universe")
            fns[str(name)] = (int(arity), table)
        object.__setattr__(self, "universe", uni)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "functions", fns)

    def const(self, v):
        if v not in set(self.universe):
            raise ValueError(f"constant {v!r} not in universe")
        return v

    def fn(self, name, args):
        if name not in self.functions:
            raise ValueError(f"unknown function {name!r}")
        arity, table = self.functions[name]
        if len(args) != arity:
            raise ValueError(f"function {name!r} expects {arity} arguments")
        return table[tuple(args)]

    def rel(self, name, args) -> bool:
        if name not in self.relations:
            raise ValueError(f"unknown relation {name!r}")
        arity, rows = self.relations[name]
        if len(args) != arity:
            raise ValueError(f"relation {name!r} expects {arity} arguments")
        return tuple(args) in rows

    def to_json_dict(self) -> dict:
        size = len(self.universe)
        if tuple(self.universe) != tuple(range(size)):
            raise ValueError("JSON export needs universe = range(size)")
        out = {"schema": SCHEMA_VERSION, "universe_size": size, "relations": {}}
        for name, (arity, rows) in sorted(self.relations.items()):
            bits = []
            for args in itertools.product(range(size), repeat=arity):
                bits.append("1" if args in rows else "0")
            out["relations"][name] = {"arity": arity, "bits": "".join(bits)}
        if self.functions:
            out["functions"] = {}
            for name, (arity, table) in sorted(self.functions.items()):
                flat = [
                    table[args]
                    for args in itertools.product(range(size), repeat=arity)
                ]
                out["functions"][name] = {"arity": arity, "table": flat}
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "FiniteStructure":
        size = obj["universe_size"]
        if not isinstance(size, int) or size < 1:
            raise ValueError("'universe_size' must be a positive integer")
        relations = {}
        for name, spec in obj.get("relations", {}).items():
            arity = spec["arity"]
            bits = spec["bits"]
            if len(bits) != size**arity:
                raise ValueError(f"relation {name!r}: bits length mismatch")
            rows = set()
            for args, bit in zip(
                itertools.product(range(size), repeat=arity), bits
            ):
                if bit == "1":
                    rows.add(args)
                elif bit != "0":
                    raise ValueError(f"relation {name!r}: bits must be 0/1")
            relations[name] = (arity, rows)
        functions = {}
        for name, spec in obj.get("functions", {}).items():
            arity = spec["arity"]
            flat = spec["table"]
            table = {}
            for args, v in zip(
                itertools.product(range(size), repeat=arity), flat
            ):
                table[args] = v
            functions[name] = (arity, table)
        return cls(
            universe=tuple(range(size)), relations=relations, functions=functions
        )


def structure_from_family(family: SetFamily):
    """Encode a set family as a one-relation structure plus a parameter pool.

    Universe = ground elements 0..g-1 followed by member labels g..g+n-1;
    relation 'In'(point, member).  With phi = ['rel','In',['var',0],['var',1]]
    and the returned pool, phi-types over the pool mirror intersection
    patterns of the family.
    """
    g = family.ground_size
    rows = set()
    for i, s in enumerate(family.members):
        for e in s:
            rows.add((e, g + i))
    structure = FiniteStructure(
        universe=tuple(range(g + family.n)), relations={"In": (2, rows)}
    )
    pool = [(g + i,) for i in range(family.n)]
    phi = ["rel", "In", ["var", 0], ["var", 1]]
    return structure, phi, pool


@dataclass(frozen=True, eq=False)
class PositiveType:
    """A consistent set of instances phi(x, a), a in A, with its witnesses.

    instances is the frozenset of parameter tuples; witnesses the nonempty
    frozenset of x-tuples satisfying all instances in the ambient
    structure.  inst_masks keeps the per-instance witness bitmask over the
    enumeration's x-tuple order so inconsistency checks between types from
    the same enumeration stay exact and cheap.
    """

    formula: object
    x_arity: int
    instances: frozenset
    witnesses: frozenset
    inst_masks: dict

    def __post_init__(self):
        if not self.instances:
            raise ValueError("a positive type needs at least one instance")
        if not self.witnesses:
            raise ValueError("a positive type must have a witness")

    @property
    def size(self) -> int:
        return len(self.instances)


def _x_space(structure: FiniteStructure, x_arity: int):
    count = len(structure.universe) ** x_arity
    if count > X_CAP:
        raise ValueError(f"witness space size {count} exceeds cap {X_CAP}")
    return list(itertools.product(structure.universe, repeat=x_arity))


def _instance_masks(structure, phi, x_arity, params, xspace):
    masks = {}
    for a in params:
        a = tuple(a)
        m = 0
        for idx, x in enumerate(xspace):
            env = dict(enumerate(x + a))
            if evaluate_formula(structure, phi, env):
                m |= 1 << idx
        masks[a] = m
    return masks


def _decode(mask: int, xspace) -> frozenset:
    out = []
    while mask:
        low = mask & -mask
        out.append(xspace[low.bit_length() - 1])
        mask ^= low
    return frozenset(out)


def enumerate_types(
    structure: FiniteStructure,
    phi,
    x_arity: int,
    A: Sequence[tuple],
    k: int,
    cap: int = TYPE_CAP,
):
    """All satisfiable instance sets of size 1..k over parameters from A.

    phi's variables are x (indices 0..x_arity-1) then the parameter tuple.
    Satisfiability is exhaustive over universe^x_arity.  Exceeding the cap
    raises TypeBlowupError carrying the partial count.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    params = sorted({tuple(a) for a in A})
    xspace = _x_space(structure, x_arity)
    masks = _instance_masks(structure, phi, x_arity, params, xspace)
    return _types_from_masks(phi, x_arity, params, masks, k, xspace, cap)


def _types_from_masks(phi, x_arity, params, masks, k, xspace, cap):
    types = []

    def rec(start: int, chosen: tuple, mask: int):
        if len(types) > cap:
            raise TypeBlowupError(cap, len(types))
        for i in range(start, len(params)):
            a = params[i]
            m2 = mask & masks[a]
            if not m2:
                continue
            sel = chosen + (a,)
            types.append(
                PositiveType(
                    formula=phi,
                    x_arity=x_arity,
                    instances=frozenset(sel),
                    witnesses=_decode(m2, xspace),
                    inst_masks={b: masks[b] for b in sel},
                )
            )
            if len(sel) < k:
                rec(i + 1, sel, m2)

    rec(0, (), -1)
    return types


def m_inconsistent(p: PositiveType, q: PositiveType, m: int) -> bool:
    """Some subsets p0 of p and q0 of q, sizes <= m, share no witness.

    Only maximal-size subsets need checking: shrinking a subset enlarges
    its witness set.  Types must come from the same enumeration (shared
    x-tuple order) so their masks are comparable.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if p.formula != q.formula or p.x_arity != q.x_arity:
        raise ValueError("types must share the formula and x arity")
    kp = min(m, p.size)
    kq = min(m, q.size)
    q_subs = []
    for q0 in itertools.combinations(sorted(q.instances), kq):
        mq = -1
        for b in q0:
            mq &= q.inst_masks[b]
        q_subs.append(mq)
    for p0 in itertools.combinations(sorted(p.instances), kp):
        mp = -1
        for b in p0:
            mp &= p.inst_masks[b]
        for mq in q_subs:
            if not mp & mq:
                return True
    return False


def _greedy_clique(adj):
    order = sorted(range(len(adj)), key=lambda v: (-len(adj[v]), v))
    clique = []
    cand = set(range(len(adj)))
    for v in order:
        if v in cand:
            clique.append(v)
            cand &= adj[v]
    return sorted(clique)


def _max_clique(adj):
    """Exact maximum clique, branch and bound with a greedy seed."""
    best = _greedy_clique(adj)

    def expand(current, candidates):
        nonlocal best
        if not candidates:
            if len(current) > len(best):
                best = list(current)
            return
        cand = sorted(candidates)
        while cand:
            if len(current) + len(cand) <= len(best):
                return
            v = cand.pop(0)
            current.append(v)
            expand(current, [u for u in cand if u in adj[v]])
            current.pop()

    expand([], list(range(len(adj))))
    return best


@dataclass(frozen=True)
class CountReport:
    """Largest pairwise-m-inconsistent type family found over size-l sets.

    exact means: the parameter-set scan was exhaustive and every type
    enumeration completed; the clique search itself is always exact.
    greedy_value is the greedy lower bound on the attaining parameter set.
    """

    m: int
    k: int
    l: int
    value: int
    exact: bool
    mode: str
    greedy_value: int
    witness_family: tuple
    parameter_set: tuple
    seed: Optional[int] = None

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "m": self.m,
            "k": self.k,
            "l": self.l,
            "value": self.value,
            "exact": self.exact,
            "mode": self.mode,
            "greedy_value": self.greedy_value,
            "witness_sizes": [t.size for t in self.witness_family],
            "parameter_set": [list(a) for a in self.parameter_set],
            "seed": self.seed,
        }


def f_phi(
    structure: FiniteStructure,
    phi,
    x_arity: int,
    m: int,
    k: int,
    parameter_pool: Sequence[tuple],
    l: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    type_cap: int = TYPE_CAP,
) -> CountReport:
    """max over |A| = l of the largest pairwise-m-inconsistent type family.

    Exhaustive over all C(pool, l) parameter sets when that count is at
    most EXHAUSTIVE_A_LIMIT, otherwise seeded sampling (mode recorded).
    The inner maximization is an exact max-clique on the m-inconsistency
    graph of the types.
    """
    pool = sorted({tuple(a) for a in parameter_pool})
    if l < 1 or l > len(pool):
        raise ValueError(f"l must lie in 1..{len(pool)}")
    xspace = _x_space(structure, x_arity)
    masks = _instance_masks(structure, phi, x_arity, pool, xspace)

    exhaustive = math.comb(len(pool), l) <= EXHAUSTIVE_A_LIMIT
    if exhaustive:
        subsets = itertools.combinations(pool, l)
        mode = "exhaustive"
        used_seed = None
    else:
        rng = random.Random(seed)
        subsets = [
            tuple(sorted(rng.sample(pool, l))) for _ in range(samples)
        ]
        mode = "sampled"
        used_seed = seed

    best = None
    complete = True
    for A in subsets:
        try:
            types = _types_from_masks(
                phi, x_arity, list(A), {a: masks[a] for a in A}, k, xspace, type_cap
            )
        except TypeBlowupError:
            complete = False
            continue
        adj = [set() for _ in types]
        for i in range(len(types)):
            for j in range(i + 1, len(types)):
                if m_inconsistent(types[i], types[j], m):
                    adj[i].add(j)
                    adj[j].add(i)
        clique = _max_clique(adj)
        greedy = len(_greedy_clique(adj))
        if best is None or len(clique) > best[0]:
            best = (len(clique), greedy, tuple(types[i] for i in clique), A)
    if best is None:
        raise TypeBlowupError(type_cap, 0)
    value, greedy, witness, A = best
    return CountReport(
        m=m,
        k=k,
        l=l,
        value=value,
        exact=exhaustive and complete,
        mode=mode,
        greedy_value=greedy,
        witness_family=witness,
        parameter_set=A,
        seed=used_seed,
    )


@dataclass(frozen=True)
class DividingReport:
    """status: 'divides' | 'none' | 'indeterminate' (budget ran out)."""

    status: str
    instance: Optional[tuple] = None
    sequence: Optional[tuple] = None

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "status": self.status,
            "instance": list(self.instance) if self.instance else None,
            "sequence": [list(b) for b in self.sequence] if self.sequence else None,
        }


def _delta_indiscernible(structure, sequence, C, delta, budget):
    """All increasing r-tuples give the same delta truths with C-parameters.

    delta entries are (tree, r, s): the tree's variables cover r sequence
    elements then s parameter tuples from C, concatenated positionally.
    Returns (verdict, evaluations spent); verdict None when out of budget.
    """
    spent = 0
    n = len(sequence)
    for tree, r, s in delta:
        if r > n:
            continue
        combos = list(itertools.combinations(range(n), r))
        cpars = list(itertools.product(C, repeat=s)) if s else [()]
        for cp in cpars:
            ref = None
            for pos, idx in enumerate(combos):
                flat = []
                for i in idx:
                    flat.extend(sequence[i])
                for ctup in cp:
                    flat.extend(ctup)
                spent += 1
                if spent > budget:
                    return None, spent
                val = evaluate_formula(structure, tree, dict(enumerate(flat)))
                if pos == 0:
                    ref = val
                elif val != ref:
                    return False, spent
    return True, spent


def internal_dividing_check(
    structure: FiniteStructure,
    phi,
    x_arity: int,
    p: PositiveType,
    B: Sequence[tuple],
    C: Sequence[tuple],
    delta: Sequence[tuple],
    n: int,
    k: int,
    budget: int = DEFAULT_DIVIDING_BUDGET,
) -> DividingReport:
    """Search for an instance of p that starts a dividing sequence inside B.

    A witness is phi(x, b) with b in p and a length-n sequence of distinct
    elements of B starting at b that is delta-indiscernible over C and
    whose instance set {phi(x, b_i)} is k-inconsistent (at least k
    distinct instances, every k of them jointly unsatisfiable).  Exceeding
    the evaluation budget returns status 'indeterminate'.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if n > 6:
        raise ValueError("n capped at 6; the search is exponential")
    if k < 2:
        raise ValueError("k must be >= 2")
    B = sorted({tuple(b) for b in B})
    C = sorted({tuple(c) for c in C})
    xspace = _x_space(structure, x_arity)
    masks = _instance_masks(structure, phi, x_arity, B, xspace)
    spent = 0
    for b in sorted(p.instances):
        if b not in masks:
            continue
        others = [c for c in B if c != b]
        if len(others) < n - 1:
            continue
        for rest in itertools.permutations(others, n - 1):
            seq = (b,) + rest
            spent += 1
            if spent > budget:
                return DividingReport(status="indeterminate")
            if not _k_inconsistent_set(seq, masks, k):
                continue
            verdict, used = _delta_indiscernible(
                structure, seq, C, delta, budget - spent
            )
            spent += used
            if verdict is None:
                return DividingReport(status="indeterminate")
            if verdict:
                return DividingReport(status="divides", instance=b, sequence=seq)
    return DividingReport(status="none")


def _k_inconsistent_set(sequence, masks, k: int) -> bool:
    distinct = sorted(set(sequence))
    if len(distinct) < k:
        return False
    for combo in itertools.combinations(distinct, k):
        acc = -1
        for b in combo:
            acc &= masks[b]
        if acc:
            return False
    return True


def find_kddd(edges, d: int):
    """First complete k-partite K_{d,...,d} in a k-uniform hypergraph.

    Parts are returned as sorted tuples, ordered by smallest vertex; the
    search is deterministic.  The last part is filled from the vertices
    compatible with every transversal of the first k-1, which is sound
    because completeness factorizes over the last coordinate.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    edge_set = {frozenset(e) for e in edges}
    if not edge_set:
        return None
    sizes = {len(e) for e in edge_set}
    if len(sizes) != 1:
        raise ValueError(f"hypergraph is not uniform: edge sizes {sorted(sizes)}")
    k = sizes.pop()
    if k < 1:
        raise ValueError("edges must be nonempty sets")
    vertices = sorted({v for e in edge_set for v in e})
    if len(vertices) < k * d:
        return None

    def rec(parts, used, min_start):
        if len(parts) == k - 1:
            cands = []
            for v in vertices:
                if v in used:
                    continue
                if all(
                    frozenset(tr) | {v} in edge_set
                    for tr in itertools.product(*parts)
                ):
                    cands.append(v)
                    if len(cands) == d:
                        return parts + [tuple(cands)]
            return None
        pool = [v for v in vertices if v not in used and v >= min_start]
        for combo in itertools.combinations(pool, d):
            res = rec(parts + [combo], used | set(combo), combo[0])
            if res is not None:
                return res
        return None

    found = rec([], set(), vertices[0])
    if found is None:
        return None
    return tuple(tuple(sorted(part)) for part in found)


@dataclass(frozen=True)
class PowerSavingReport:
    """Estimated growth exponent of f_phi against the Zarankiewicz threshold.

    exponent_estimate is a finite-sample log-log fit, an estimate only.
    """

    l_values: tuple
    counts: tuple
    exponent_estimate: Fraction
    threshold: Fraction
    below_threshold: bool
    exact: bool

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "l_values": list(self.l_values),
            "counts": list(self.counts),
            "exponent_estimate": rat_to_json(self.exponent_estimate),
            "threshold": rat_to_json(self.threshold),
            "below_threshold": self.below_threshold,
            "exact": self.exact,
        }


def power_saving_probe(
    structure: FiniteStructure,
    phi,
    x_arity: int,
    m: int,
    k: int,
    parameter_pool: Sequence[tuple],
    l_values: Sequence[int],
    d: int,
    seed: int = 0,
) -> PowerSavingReport:
    """Fit the growth exponent of f_phi(m,k,l) over the given l values.

    Compares the log-log slope against k - 1/d^(k-1); an estimate, not a
    limit statement.  Needs at least three l values with positive counts.
    """
    ls = list(l_values)
    if len(ls) < 3:
        raise ValueError("need at least three l values")
    if any(b <= a for a, b in zip(ls, ls[1:])):
        raise ValueError("l_values must be strictly increasing")
    if d < 1:
        raise ValueError("d must be >= 1")
    counts = []
    exact = True
    for l in ls:
        rep = f_phi(structure, phi, x_arity, m, k, parameter_pool, l, seed=seed)
        counts.append(rep.value)
        exact = exact and rep.exact
    pts = [(l, c) for l, c in zip(ls, counts) if c >= 1]
    if len(pts) < 3:
        raise ValueError("need at least three l values with positive counts")
    xs = np.log([float(l) for l, _ in pts])
    ys = np.log([float(c) for _, c in pts])
    slope = float(np.polyfit(xs, ys, 1)[0])
    estimate = Fraction(slope).limit_denominator(1000)
    threshold = Fraction(k) - Fraction(1, d ** (k - 1))
    return PowerSavingReport(
        l_values=tuple(ls),
        counts=tuple(counts),
        exponent_estimate=estimate,
        threshold=threshold,
        below_threshold=estimate <= threshold,
        exact=exact,
    )
