"""Command-line front end: ``toric-sarkisov {check,mmp,geography,sarkisov}``.

Exit codes: 0 ok, 2 bad input, 3 engine error, 4 genericity retries
exhausted, 5 an MMP output is a minimal model so there is nothing to connect.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import serialize
from .divisors import is_terminal
from .fan import Fan, FanError, ToricModel, is_complete, is_projective, is_simplicial, picard_number, validate_fan
from .geography import GeographySlice, SliceError, chamber_decomposition, generic_slice, verify_span_picard
from .mmp import EngineError, MMPTrace, prefer_kind, run_mmp, verify_output
from .sarkisov import LinkError, SarkisovChain, factorize

EXIT_OK, EXIT_INPUT, EXIT_ENGINE, EXIT_GENERICITY, EXIT_NO_MFS = 0, 2, 3, 4, 5
SEED_ENV = "TORIC_SARKISOV_SEED"

STRATEGIES = {
    "deterministic-lex": "deterministic-lex",
    "seeded-random": "seeded-random",
    "prefer-fiber": prefer_kind("fiber"),
    "prefer-divisorial": prefer_kind("divisorial"),
    "prefer-small": prefer_kind("small"),
}


class InputError(Exception):
    pass


@dataclass(frozen=True)
class JobConfig:
    seed: int
    strategy: str = "deterministic-lex"
    retry_limit: int = 6
    out: Optional[str] = None
    svg: Optional[str] = None
    jobs: int = 1


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_fan(path: str) -> Fan:
    try:
        return serialize.fan_from_input(_read_json(path))
    except FanError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_divisor(path: str, f: Fan) -> tuple[Fraction, ...]:
    try:
        return serialize.divisor_from_input(_read_json(path), f)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _require_model(f: Fan, path: str) -> ToricModel:
    diag = validate_fan(f)
    if not diag.valid:
        raise InputError(f"{path}: invalid fan: {'; '.join(diag.problems)}")
    if not (is_complete(f) and is_simplicial(f)):
        raise InputError(f"{path}: the engine needs a complete simplicial fan")
    if not is_projective(f).projective:
        raise InputError(f"{path}: fan is not projective")
    return ToricModel.birational(f)


def _emit(payload, out: Optional[str]) -> None:
    text = json.dumps(serialize.plain(payload), indent=1, separators=(",", ": ")) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def model_id(M: ToricModel) -> str:
    return hashlib.sha256(serialize.dumps(M.key).encode()).hexdigest()[:12]


def _model_summary(M: Optional[ToricModel]):
    if M is None:
        return None
    return {"id": model_id(M), "dim": M.dim, "fan": serialize.fan_to_input(M.fan),
            "lattice_map": [list(r) for r in M.lattice_map]}


# check

def check_report(f: Fan) -> dict:
    diag = validate_fan(f)
    report = {"valid": diag.valid, "problems": list(diag.problems)}
    if diag.violating_pair is not None:
        report["violating_pair"] = list(diag.violating_pair)
    complete = diag.valid and is_complete(f)
    simplicial = diag.valid and is_simplicial(f)
    report["complete"] = complete
    report["simplicial"] = simplicial
    report["projective"] = None
    report["terminal"] = None
    if complete:
        cert = is_projective(f)
        report["projective"] = cert.projective
        if cert.support_values is not None:
            report["support_values"] = list(cert.support_values)
        if cert.farkas is not None:
            report["farkas_certificate"] = list(cert.farkas)
        if simplicial:
            report["picard_number"] = picard_number(f)
    if simplicial:
        report["terminal"] = is_terminal(f)
    return report


def cmd_check(args, cfg: JobConfig) -> int:
    f = load_fan(args.fan)
    report = check_report(f)
    _emit(report, cfg.out)
    return EXIT_OK if report["valid"] else EXIT_INPUT


# mmp

def _trace_summary(tr: MMPTrace) -> dict:
    return {
        "outcome": tr.outcome,
        "steps": [{"kind": s.kind, "relation": list(s.ray.relation),
                   "source": serialize.fan_to_input(s.source.fan),
                   "result": serialize.fan_to_input(s.result.fan)} for s in tr.steps],
        "model": _model_summary(tr.model),
        "base": _model_summary(tr.base),
        "final_divisor": list(tr.final_divisor),
    }


def _run(Z: ToricModel, d, strategy: str, seed: int) -> MMPTrace:
    return run_mmp(Z, d, strategy=STRATEGIES[strategy], seed=seed)


def cmd_mmp(args, cfg: JobConfig) -> int:
    f = load_fan(args.fan)
    Z = _require_model(f, args.fan)
    d = load_divisor(args.divisor, f)
    tr = _run(Z, d, cfg.strategy, cfg.seed)
    rep = verify_output(tr)
    _emit({"strategy": cfg.strategy, "seed": cfg.seed, "summary": _trace_summary(tr),
           "verify": {"ok": rep.ok, "clauses": rep.clauses, "details": rep.details},
           "trace": serialize.encode(tr)}, cfg.out)
    return EXIT_OK if rep.ok else EXIT_ENGINE


# geography

def _parse_point(p) -> tuple[Fraction, Fraction]:
    if not isinstance(p, list) or len(p) != 2:
        raise InputError(f"region vertex {p!r} must be a pair")
    return (Fraction(p[0]), Fraction(p[1]))


def load_slice_spec(path: str, f: Fan, d):
    """``{"origin"?: coeffs, "directions": [coeffs, coeffs], "region": [[s, t], ...]}``."""
    data = _read_json(path)
    try:
        origin = serialize.divisor_from_input({"coeffs": data["origin"]}, f) if "origin" in data else d
        u, w = (serialize.divisor_from_input({"coeffs": c}, f) for c in data["directions"])
        region = [_parse_point(p) for p in data["region"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad slice specification: {exc}") from exc
    return origin, u, w, region


def slice_summary(sl: GeographySlice) -> dict:
    return {
        "origin": list(sl.origin),
        "directions": [list(x) for x in sl.directions],
        "region": [list(p) for p in sl.region],
        "effective": [list(p) for p in sl.effective],
        "chambers": [{"id": c.id, "model": _model_summary(c.model), "dimension": c.dimension,
                      "closure": [list(p) for p in c.closure], "big": c.big, "interior": c.interior,
                      "adjacency": list(c.adjacency)} for c in sl.chambers],
        "notes": sl.notes,
    }


def cmd_geography(args, cfg: JobConfig) -> int:
    from .plotting import save_slice_svg

    f = load_fan(args.fan)
    Z = _require_model(f, args.fan)
    d = load_divisor(args.divisor, f)
    if args.slice == "auto":
        sl = generic_slice(Z, seed=cfg.seed, jobs=cfg.jobs, origin=d)
    else:
        origin, u, w, region = load_slice_spec(args.slice, f, d)
        sl = chamber_decomposition(Z, origin, u, w, region, jobs=cfg.jobs)
    span = verify_span_picard(sl)
    _emit({"seed": cfg.seed, "slice": slice_summary(sl),
           "span_picard": {"ok": span.ok, "span": span.span, "picard": span.picard},
           "data": serialize.encode(sl)}, cfg.out)
    if cfg.svg:
        save_slice_svg(sl, cfg.svg)
    return EXIT_OK


# sarkisov

def _parse_run(spec: str, default_seed: int) -> tuple[str, int]:
    name, _, seed = spec.partition(":")
    if name not in STRATEGIES:
        raise InputError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGIES)}")
    try:
        return name, int(seed) if seed else default_seed
    except ValueError as exc:
        raise InputError(f"bad seed in {spec!r}") from exc


def chain_summary(ch: SarkisovChain) -> dict:
    return {
        "start": [_model_summary(m) for m in ch.start],
        "end": [_model_summary(m) for m in ch.end],
        "types": list(ch.types),
        "links": [{"type": l.type, "case": l.case, "vertex": list(l.vertex), "chambers": list(l.chambers),
                   "X": _model_summary(l.X), "S": _model_summary(l.S), "Y": _model_summary(l.Y),
                   "T": _model_summary(l.T), "R": _model_summary(l.R), "flops": len(l.flops),
                   "note": l.note} for l in ch.links],
        "checks": ch.checks,
    }


def cmd_sarkisov(args, cfg: JobConfig) -> int:
    from .plotting import save_empty_svg, save_slice_svg

    f = load_fan(args.fan)
    Z = _require_model(f, args.fan)
    d = load_divisor(args.divisor, f)
    runs = [_parse_run(s, cfg.seed) for s in (args.run_a, args.run_b)]
    traces = [_run(Z, d, name, seed) for name, seed in runs]
    if not all(tr.is_mfs for tr in traces):
        print("output is a minimal model, no MFS to connect", file=sys.stderr)
        return EXIT_NO_MFS
    ch = factorize(Z, d, traces[0], traces[1], seed=cfg.seed, retries=cfg.retry_limit, jobs=cfg.jobs)
    _emit({"seed": cfg.seed, "runs": [{"strategy": n, "seed": s} for n, s in runs],
           "chain": chain_summary(ch), "data": serialize.encode(ch)}, cfg.out)
    if cfg.svg:
        if ch.slice is None:
            save_empty_svg(cfg.svg, "identical Mori fiber spaces")
        else:
            save_slice_svg(ch.slice, cfg.svg, marks=[l.vertex for l in ch.links],
                           title=" ".join(ch.types))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    env_seed = os.environ.get(SEED_ENV, "0")
    parser = argparse.ArgumentParser(prog="toric-sarkisov",
                                     description="Exact toric MMP, geography of models and Sarkisov links.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for chamber sampling")
    common.add_argument("--out", help="write JSON here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validity, completeness, simpliciality, projectivity, terminality")
    p.add_argument("fan")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("mmp", parents=[common], help="run the D-MMP")
    p.add_argument("fan")
    p.add_argument("divisor")
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="deterministic-lex")
    p.set_defaults(func=cmd_mmp)

    p = sub.add_parser("geography", parents=[common], help="chamber decomposition of a two-dimensional slice")
    p.add_argument("fan")
    p.add_argument("divisor")
    p.add_argument("--slice", default="auto", help="slice specification file, or 'auto'")
    p.add_argument("--svg", help="figure output path")
    p.set_defaults(func=cmd_geography)

    p = sub.add_parser("sarkisov", parents=[common], help="factorize two MMP outputs into Sarkisov links")
    p.add_argument("fan")
    p.add_argument("divisor")
    p.add_argument("--run-a", default="deterministic-lex", help="STRATEGY[:SEED]")
    p.add_argument("--run-b", default="prefer-fiber", help="STRATEGY[:SEED]")
    p.add_argument("--retries", type=int, default=6)
    p.add_argument("--svg", help="figure output path")
    p.set_defaults(func=cmd_sarkisov)

    parser.set_defaults(env_seed=env_seed)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seed = args.seed if args.seed is not None else int(args.env_seed)
    except ValueError:
        print(f"error: ${SEED_ENV} must be an integer", file=sys.stderr)
        return EXIT_INPUT
    cfg = JobConfig(seed=seed, strategy=getattr(args, "strategy", "deterministic-lex"),
                    retry_limit=getattr(args, "retries", 6), out=args.out,
                    svg=getattr(args, "svg", None), jobs=args.jobs)
    try:
        return args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SliceError, LinkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        certs = getattr(exc, "failures", None) or getattr(exc, "diagnostics", None)
        if certs:
            print(json.dumps(serialize.encode(certs), indent=1), file=sys.stderr)
        return EXIT_GENERICITY
    except (EngineError, FanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
