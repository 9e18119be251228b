"""Command-line front door: batch analyses with reproducible reports.

Every report is a single JSON object (or flattened CSV) that embeds the
tool version, the seed, and the caps in effect, so a report alone is
enough to rerun its experiment.  Outputs are byte-deterministic for a
fixed command line; wall-clock runtime is attached only under --timing.

Exit codes: 0 success, 1 a requested property check failed (FHP
hypothesis false, LP infeasible, construction verification failed,
unsatisfiable or inadmissible system), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from ._jsonutil import SCHEMA_VERSION, parse_rational, rat_to_json
from . import constructs, fraclp, pseudofield, setfam, sqfint, typecount, vc

ENV_SIZE_CAP = "FHPLAB_SIZE_CAP"
ENV_TYPE_CAP = "FHPLAB_TYPE_CAP"


@dataclass
class ExperimentConfig:
    """Everything a subcommand run depends on, resolved and validated."""

    command: str
    options: argparse.Namespace
    seed: int
    caps: dict = field(default_factory=dict)
    fmt: str = "json"
    output: Optional[str] = None
    timing: bool = False


def parse_family(path: str) -> setfam.SetFamily:
    """Load a family JSON file with line-addressed schema errors."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except FileNotFoundError:
        raise ValueError(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}"
        )
    try:
        family = setfam.SetFamily.from_json_dict(obj)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}")
    if family.n == 0:
        print(f"warning: {path}: family has zero members", file=sys.stderr)
    return family


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValueError(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}"
        )


def _int_list(text: str):
    text = text.strip()
    if not text:
        return []
    return [int(v) for v in text.replace(";", ",").split(",")]


def _caps_from_env() -> dict:
    caps = {}
    size_cap = os.environ.get(ENV_SIZE_CAP)
    if size_cap is not None:
        caps["size_cap"] = int(size_cap)
    type_cap = os.environ.get(ENV_TYPE_CAP)
    if type_cap is not None:
        caps["type_cap"] = int(type_cap)
    for name, value in caps.items():
        if value < 1:
            raise ValueError(f"cap {name} must be positive")
    return caps


# ---------------------------------------------------------------- handlers


def _handle_analyze(cfg: ExperimentConfig):
    opt = cfg.options
    family = parse_family(opt.family)
    alpha = parse_rational(opt.alpha)
    report = setfam.check_fhp_instance(family, opt.k, alpha)
    out = {"fhp": report.to_json_dict()}
    ok = report.hypothesis_holds
    if opt.pk is not None:
        pk = setfam.check_pk_property(family, opt.pk, opt.k)
        out["pk"] = {
            "p": opt.pk,
            "k": opt.k,
            "holds": pk.holds,
            "counterexample": list(pk.counterexample) if pk.counterexample else None,
        }
        out["wfhp_bound"] = rat_to_json(
            setfam.wfhp_counting_bound(family.n, opt.pk, opt.k)
        )
        ok = ok and pk.holds
    return out, (0 if ok else 1)


def _handle_lp(cfg: ExperimentConfig):
    opt = cfg.options
    family = parse_family(opt.family)
    value, dist = fraclp.intersection_number(family)
    tr = fraclp.fractional_transversal(family, integer_cap=opt.integer_cap)
    out = {
        "intersection_number": rat_to_json(value),
        "distribution": {str(e): rat_to_json(w) for e, w in sorted(dist.items())},
        "transversal": tr.to_json_dict(),
    }
    return out, (0 if tr.status == "optimal" else 1)


def _handle_vc(cfg: ExperimentConfig):
    opt = cfg.options
    family = parse_family(opt.family)
    sizes = _int_list(opt.dual_sizes) if opt.dual_sizes else None
    report = vc.vc_dimension(family, opt.cap, dual_sizes=sizes, seed=cfg.seed)
    return {"vc": report.to_json_dict()}, 0


def _build_construction(cfg: ExperimentConfig):
    opt = cfg.options
    name = opt.construction
    size_cap = cfg.caps.get("size_cap", constructs.DEFAULT_SIZE_CAP)
    if name == "block":
        params = constructs.BlockParams(
            k=opt.k,
            alpha=parse_rational(opt.alpha),
            gamma=parse_rational(opt.gamma),
            p_prime=opt.pprime,
            k_prime=opt.kprime,
            r=opt.r,
            m=opt.m,
        )
        fam = constructs.build_block_counterexample(params, size_cap=size_cap)
        meta = {
            "k": opt.k,
            "r": opt.r,
            "m": opt.m,
            "alpha": rat_to_json(params.alpha),
            "gamma": rat_to_json(params.gamma),
            "p_prime": opt.pprime,
            "k_prime": opt.kprime,
        }
    elif name == "tp2":
        fam = constructs.build_tp2_grid(opt.k, opt.m, d=opt.d, size_cap=size_cap)
        meta = {"k": opt.k, "m": opt.m, "d": opt.d}
    elif name == "cross":
        fam = constructs.build_two_order_cross(opt.n)
        meta = {"n": opt.n}
    elif name == "caps":
        fam = constructs.build_caps_family(opt.w, opt.depth, size_cap=size_cap)
        meta = {"W": opt.w, "D": opt.depth}
    elif name == "shattered":
        fam = constructs.build_shattered_pairs(opt.m, size_cap=size_cap)
        meta = {"m": opt.m}
    else:
        raise ValueError(f"unknown construction {name!r}")
    return fam, meta


def _verify_construction(name: str, opt, fam: setfam.SetFamily) -> bool:
    if name == "block":
        import math

        cons = setfam.cons_k(fam, opt.k)
        return cons.cons_count == math.comb(opt.r, opt.k) * opt.m**opt.k
    if name == "tp2":
        best = setfam.max_intersecting(fam)
        return Fraction(best.size, fam.n) == Fraction(1, opt.m)
    if name == "cross":
        return (
            setfam.cons_k(fam, 2).fraction == 1
            and setfam.cons_k(fam, 3).cons_count == 0
            and setfam.max_intersecting(fam).size == 2
        )
    if name == "caps":
        masks = fam.masks
        W, D = opt.w, opt.depth
        for i in range(D):
            row = masks[i * W : (i + 1) * W]
            for a in range(W):
                for b in range(a + 1, W):
                    if row[a] & row[b]:
                        return False
        import itertools

        for branch in itertools.product(range(W), repeat=D):
            acc = -1
            for i, j in enumerate(branch):
                acc &= masks[i * W + j]
            if not acc:
                return False
        return True
    if name == "shattered":
        want = 2 ** (opt.m - 2)
        return all(len(s) == want for s in fam.members)
    return True


def _handle_construct(cfg: ExperimentConfig):
    opt = cfg.options
    if opt.construction == "furedi":
        family = parse_family(opt.family)
        res = constructs.furedi_extract(family, opt.trials, cfg.seed)
        out = {
            "construction": "furedi",
            "params": {"trials": opt.trials},
            "found": res is not None,
        }
        if res is not None:
            out["result"] = {
                "parts": [sorted(p) for p in res.parts],
                "indices": list(res.indices),
                "trial": res.trial,
                "target": res.target,
            }
        return out, (0 if res is not None else 1)
    fam, meta = _build_construction(cfg)
    out = fam.to_json_dict()
    out["construction"] = opt.construction
    out["params"] = meta
    if opt.verify:
        ok = _verify_construction(opt.construction, opt, fam)
        out["verified"] = ok
        return out, (0 if ok else 1)
    return out, 0


def _load_system(opt) -> sqfint.GSystem:
    if getattr(opt, "shifts", None):
        return sqfint.shift_system(_int_list(opt.shifts), m=opt.modulus)
    if getattr(opt, "system", None):
        return sqfint.GSystem.from_json_dict(_load_json(opt.system))
    raise ValueError("provide --shifts or --system")


def _handle_sqf(cfg: ExperimentConfig):
    opt = cfg.options
    action = opt.action
    if action == "count":
        sys_ = _load_system(opt)
        count = sqfint.count_solutions_window(sys_, opt.window)
        out = {
            "action": "count",
            "system": sys_.to_json_dict(),
            "window": opt.window,
            "count": count,
        }
        if opt.tail_prime:
            cert = sqfint.density_certificate(
                sys_.formula, opt.tail_prime, constants=sys_.c
            )
            bound = cert.epsilon_lower * opt.window - cert.error_term(opt.window)
            out["certificate"] = cert.to_json_dict()
            out["lower_bound"] = rat_to_json(bound)
            out["bound_holds"] = Fraction(count) >= bound
        return out, 0
    if action == "psat":
        sys_ = _load_system(opt)
        sat, witness = sqfint.p_satisfiable(sys_, opt.p)
        out = {
            "action": "psat",
            "system": sys_.to_json_dict(),
            "p": opt.p,
            "satisfiable": sat,
            "witness": list(witness) if witness else None,
        }
        return out, (0 if sat else 1)
    if action == "density":
        formula = sqfint.SpecialFormula.from_json_dict(_load_json(opt.formula))
        constants = _int_list(opt.constants) if opt.constants else None
        cert = sqfint.density_certificate(
            formula, opt.tail_prime, constants=constants
        )
        return {"action": "density", "certificate": cert.to_json_dict()}, 0
    if action == "dickson":
        forms = []
        for chunk in opt.forms.split(";"):
            a, b = chunk.split(",")
            forms.append((int(a), int(b)))
        admissible, obstruction = sqfint.dickson_admissible(
            forms, prime_bound=opt.prime_bound
        )
        out = {
            "action": "dickson",
            "forms": [list(f) for f in forms],
            "admissible": admissible,
            "obstruction": obstruction,
        }
        return out, (0 if admissible else 1)
    if action == "experiment":
        formula = sqfint.SpecialFormula.from_json_dict(_load_json(opt.formula))
        params = []
        for chunk in opt.params.split(";"):
            cs = _int_list(chunk)
            s = formula.positive_slots
            params.append((tuple(cs[:s]), tuple(cs[s:])))
        rep = sqfint.sqf_fhp_experiment(
            formula, params, opt.k, parse_rational(opt.alpha), opt.window
        )
        return (
            {"action": "experiment", "report": rep.to_json_dict()},
            0 if rep.fhp.hypothesis_holds else 1,
        )
    raise ValueError(f"unknown sqf action {action!r}")


def _handle_ff(cfg: ExperimentConfig):
    opt = cfg.options
    if opt.action == "fit":
        fit = pseudofield.dim_meas_fit(
            opt.count, opt.q, opt.n, C=parse_rational(opt.C)
        )
        return {"action": "fit", "fit": fit.to_json_dict()}, 0
    field_ = pseudofield.FieldStructure.for_prime(opt.p)
    if opt.action == "lines":
        family = pseudofield.line_family(field_)
        alpha = parse_rational(opt.alpha)
        rep = pseudofield.FfReport(
            q=field_.p,
            k=opt.k,
            alpha=alpha,
            fhp=setfam.check_fhp_instance(family, opt.k, alpha),
        )
        return (
            {"action": "lines", "report": rep.to_json_dict()},
            0 if rep.fhp.hypothesis_holds else 1,
        )
    if opt.action == "custom":
        phi = _load_json(opt.phi)
        psi = _load_json(opt.psi)
        e = tuple(_int_list(opt.e)) if opt.e else ()
        rep = pseudofield.ff_fhp_experiment(
            field_,
            phi,
            opt.x_arity,
            psi,
            opt.y_arity,
            e,
            opt.k,
            parse_rational(opt.alpha),
        )
        return (
            {"action": "custom", "report": rep.to_json_dict()},
            0 if rep.fhp.hypothesis_holds else 1,
        )
    raise ValueError(f"unknown ff action {opt.action!r}")


def _handle_count_types(cfg: ExperimentConfig):
    opt = cfg.options
    type_cap = cfg.caps.get("type_cap", typecount.TYPE_CAP)
    if opt.family:
        family = parse_family(opt.family)
        structure, phi, pool = typecount.structure_from_family(family)
        x_arity = 1
    else:
        structure = typecount.FiniteStructure.from_json_dict(
            _load_json(opt.structure)
        )
        phi = _load_json(opt.phi)
        pool = [tuple(a) for a in _load_json(opt.pool)]
        x_arity = opt.x_arity
    if opt.l_values:
        report = typecount.power_saving_probe(
            structure,
            phi,
            x_arity,
            opt.m,
            opt.k,
            pool,
            _int_list(opt.l_values),
            opt.d,
            seed=cfg.seed,
        )
        return {"power_saving": report.to_json_dict()}, 0
    report = typecount.f_phi(
        structure,
        phi,
        x_arity,
        opt.m,
        opt.k,
        pool,
        opt.l,
        samples=opt.samples,
        seed=cfg.seed,
        type_cap=type_cap,
    )
    return {"count": report.to_json_dict()}, 0


_HANDLERS = {
    "analyze": _handle_analyze,
    "lp": _handle_lp,
    "vc": _handle_vc,
    "construct": _handle_construct,
    "sqf": _handle_sqf,
    "ff": _handle_ff,
    "count-types": _handle_count_types,
}


# ---------------------------------------------------------------- emission


def _flatten(obj, prefix=""):
    rows = []
    if isinstance(obj, dict):
        if set(obj.keys()) == {"num", "den"}:
            rows.append((prefix, f"{obj['num']}/{obj['den']}"))
            return rows
        for key in obj:
            sub = f"{prefix}.{key}" if prefix else str(key)
            rows.extend(_flatten(obj[key], sub))
        return rows
    if isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            rows.extend(_flatten(v, f"{prefix}[{i}]"))
        return rows
    rows.append((prefix, obj))
    return rows


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    lines = ["key,value"]
    for key, value in _flatten(report):
        text = "" if value is None else str(value)
        if "," in text or '"' in text:
            text = '"' + text.replace('"', '""') + '"'
        lines.append(f"{key},{text}")
    return "\n".join(lines) + "\n"


def _emit(text: str, output: Optional[str]):
    if output is None:
        sys.stdout.write(text)
        return
    tmp = output + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, output)


def run(config: ExperimentConfig) -> int:
    """Dispatch a resolved config, emit its report, return the exit code."""
    handler = _HANDLERS.get(config.command)
    if handler is None:
        print(f"error: unknown command {config.command!r}", file=sys.stderr)
        return 2
    started = time.monotonic()
    try:
        body, code = handler(config)
    except (
        ValueError,
        OverflowError,
        ArithmeticError,
        typecount.TypeBlowupError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "schema": SCHEMA_VERSION,
        "tool": "fhplab",
        "version": __version__,
        "command": config.command,
        "seed": config.seed,
        "caps": dict(sorted(config.caps.items())),
        "report": body,
    }
    if config.timing:
        report["runtime_seconds"] = round(time.monotonic() - started, 6)
    _emit(_render(report, config.fmt), config.output)
    return code


# ---------------------------------------------------------------- parser


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=0, help="64-bit seed")
    parser.add_argument(
        "--format", choices=("json", "csv"), default="json", dest="fmt"
    )
    parser.add_argument("--output", default=None, help="write report to file")
    parser.add_argument(
        "--timing",
        action="store_true",
        help="attach wall-clock runtime (breaks byte determinism)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fhplab",
        description="Exact intersection-pattern analytics for finite set families",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="intersection statistics of a family")
    p.add_argument("--family", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--pk", type=int, default=None, help="also check the (PK, k)-property")
    _add_common(p)

    p = sub.add_parser("lp", help="intersection number and fractional transversal")
    p.add_argument("--family", required=True)
    p.add_argument("--integer-cap", type=int, default=None, dest="integer_cap")
    _add_common(p)

    p = sub.add_parser("vc", help="VC dimension and dual shatter growth")
    p.add_argument("--family", required=True)
    p.add_argument("--cap", type=int, default=6)
    p.add_argument("--dual-sizes", default=None, dest="dual_sizes")
    _add_common(p)

    p = sub.add_parser("construct", help="emit a generated family")
    ps = p.add_subparsers(dest="construction", required=True)
    b = ps.add_parser("block")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--alpha", default="1/2")
    b.add_argument("--gamma", default="1")
    b.add_argument("--pprime", type=int, default=4)
    b.add_argument("--kprime", type=int, default=2)
    b.add_argument("--verify", action="store_true")
    _add_common(b)
    t = ps.add_parser("tp2")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--m", type=int, required=True)
    t.add_argument("--d", type=int, default=2)
    t.add_argument("--verify", action="store_true")
    _add_common(t)
    c = ps.add_parser("cross")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--verify", action="store_true")
    _add_common(c)
    ca = ps.add_parser("caps")
    ca.add_argument("--w", type=int, required=True)
    ca.add_argument("--depth", type=int, required=True)
    ca.add_argument("--verify", action="store_true")
    _add_common(ca)
    sh = ps.add_parser("shattered")
    sh.add_argument("--m", type=int, required=True)
    sh.add_argument("--verify", action="store_true")
    _add_common(sh)
    fu = ps.add_parser("furedi")
    fu.add_argument("--family", required=True)
    fu.add_argument("--trials", type=int, default=10000)
    _add_common(fu)

    p = sub.add_parser("sqf", help="square-free arithmetic systems")
    ps = p.add_subparsers(dest="action", required=True)
    co = ps.add_parser("count")
    co.add_argument("--shifts", default=None, help="comma list, e.g. 0,2,6")
    co.add_argument("--modulus", type=int, default=1)
    co.add_argument("--system", default=None, help="GSystem JSON path")
    co.add_argument("--window", type=int, required=True)
    co.add_argument("--tail-prime", type=int, default=None, dest="tail_prime")
    _add_common(co)
    pa = ps.add_parser("psat")
    pa.add_argument("--shifts", default=None)
    pa.add_argument("--modulus", type=int, default=1)
    pa.add_argument("--system", default=None)
    pa.add_argument("--p", type=int, required=True)
    _add_common(pa)
    de = ps.add_parser("density")
    de.add_argument("--formula", required=True, help="SpecialFormula JSON path")
    de.add_argument("--tail-prime", type=int, required=True, dest="tail_prime")
    de.add_argument("--constants", default=None)
    _add_common(de)
    di = ps.add_parser("dickson")
    di.add_argument("--forms", required=True, help="a,b pairs joined by ';'")
    di.add_argument("--prime-bound", type=int, default=None, dest="prime_bound")
    _add_common(di)
    ex = ps.add_parser("experiment")
    ex.add_argument("--formula", required=True)
    ex.add_argument("--params", required=True, help="constant lists joined by ';'")
    ex.add_argument("--k", type=int, required=True)
    ex.add_argument("--alpha", required=True)
    ex.add_argument("--window", type=int, required=True)
    _add_common(ex)

    p = sub.add_parser("ff", help="definable families over small prime fields")
    ps = p.add_subparsers(dest="action", required=True)
    li = ps.add_parser("lines")
    li.add_argument("--p", type=int, required=True)
    li.add_argument("--k", type=int, default=2)
    li.add_argument("--alpha", default="1/2")
    _add_common(li)
    cu = ps.add_parser("custom")
    cu.add_argument("--p", type=int, required=True)
    cu.add_argument("--phi", required=True)
    cu.add_argument("--x-arity", type=int, required=True, dest="x_arity")
    cu.add_argument("--psi", required=True)
    cu.add_argument("--y-arity", type=int, required=True, dest="y_arity")
    cu.add_argument("--e", default=None)
    cu.add_argument("--k", type=int, required=True)
    cu.add_argument("--alpha", required=True)
    _add_common(cu)
    fi = ps.add_parser("fit")
    fi.add_argument("--count", type=int, required=True)
    fi.add_argument("--q", type=int, required=True)
    fi.add_argument("--n", type=int, required=True)
    fi.add_argument("--C", default="1")
    _add_common(fi)

    p = sub.add_parser("count-types", help="positive type counting")
    p.add_argument("--family", default=None, help="encode a family as a structure")
    p.add_argument("--structure", default=None, help="FiniteStructure JSON path")
    p.add_argument("--phi", default=None, help="formula JSON (structure mode)")
    p.add_argument("--pool", default=None, help="parameter pool JSON (structure mode)")
    p.add_argument("--x-arity", type=int, default=1, dest="x_arity")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--l-values", default=None, dest="l_values")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--samples", type=int, default=typecount.DEFAULT_SAMPLES)
    _add_common(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    opt = parser.parse_args(argv)
    try:
        caps = _caps_from_env()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if opt.command == "count-types":
        if (opt.family is None) == (opt.structure is None):
            print(
                "error: provide exactly one of --family / --structure",
                file=sys.stderr,
            )
            return 2
        if opt.structure is not None and (opt.phi is None or opt.pool is None):
            print(
                "error: --structure mode needs --phi and --pool", file=sys.stderr
            )
            return 2
        if (opt.l is None) == (opt.l_values is None):
            print("error: provide exactly one of --l / --l-values", file=sys.stderr)
            return 2
    config = ExperimentConfig(
        command=opt.command,
        options=opt,
        seed=opt.seed,
        caps=caps,
        fmt=opt.fmt,
        output=opt.output,
        timing=opt.timing,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
