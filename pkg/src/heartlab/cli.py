"""Command line front end.

Every subcommand prints one JSON object (or TSV for ``scan``) on standard
output and diagnostics on standard error.  Exit codes: 0 success, 2 usage or
configuration error, 3 resonance, 4 a check that found a violation.

Parameters come from builtin families (``P0``, ``P1``, ``Pq``, ``P2``,
``P0mu``), from ``[families.<name>]`` tables of a ``--config`` TOML file, or
from a TOML file holding one family.  Coefficients are strings parsed at the
working precision; TOML floats are refused because they have already been
rounded to a double.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import acceptance
from .arithmetic import ViolationsFound, diophantine_check, measure_experiment
from .bifurcations import gap_intervals, locate_EI, scan
from .errors import (
    BracketError, ConsistencyError, DepthError, DomainError, HeartlabError, ResonanceError,
)
from .families import BUILTIN
from .kernel import DEFAULT_PRECISION, bits_to_digits, context, required_precision
from .lmf import (
    REGIMES, Distinct, WeaklyEquivalent, classify_pair, dumps, isotopic, loads, surgery,
    template, validate,
)
from .model import FamilyParams, as_family, derive

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_RESONANCE, EXIT_CHECK = 0, 2, 3, 4

FAMILY_KEYS = {"lambda": "lam", "mu": "mu", "B1": "B1", "B2": "B2", "C1": "C1", "C2": "C2"}
CONFIG_KEYS = {
    "precision", "depth", "max_drop", "p_bound", "q_bound", "tol", "n_max", "seed",
    "format", "families",
}


class UsageError(Exception):
    pass


# -- configuration --------------------------------------------------------------

def _load_toml(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _family_from_table(table: dict, name: str, where: str) -> FamilyParams:
    unknown = sorted(set(table) - set(FAMILY_KEYS) - {"name"})
    if unknown:
        raise UsageError(f"{where}: unknown key {unknown[0]!r}")
    missing = sorted(set(FAMILY_KEYS) - set(table))
    if missing:
        raise UsageError(f"{where}: missing key {missing[0]!r}")
    values = {}
    for key, field_name in FAMILY_KEYS.items():
        v = table[key]
        if isinstance(v, bool) or not isinstance(v, (str, int)):
            raise UsageError(f"{where}: key {key!r} must be a decimal string or an integer")
        values[field_name] = str(v)
    return FamilyParams(**values, name=str(table.get("name", name)))


def load_config(path) -> dict:
    """Read a run configuration; unknown keys are rejected by name."""
    if path is None:
        return {}
    data = _load_toml(path)
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise UsageError(f"{path}: unknown key {unknown[0]!r}")
    families = {}
    for name, table in data.get("families", {}).items():
        if not isinstance(table, dict):
            raise UsageError(f"{path}: families.{name} must be a table")
        families[name] = _family_from_table(table, name, f"{path} [families.{name}]")
    data["families"] = families
    return data


def resolve_family(spec: str, config: dict) -> FamilyParams:
    if spec in config.get("families", {}):
        return config["families"][spec]
    if spec in BUILTIN:
        return BUILTIN[spec]
    path = Path(spec)
    if path.suffix == ".toml" or path.exists():
        if not path.exists() and path.stem in BUILTIN:
            return BUILTIN[path.stem]
        return _family_from_table(_load_toml(path), path.stem, str(path))
    raise UsageError(f"unknown family {spec!r}; builtins are {', '.join(BUILTIN)}")


def _setting(args, config, key, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return config.get(key, default)


def resolve_precision(args, config, depth=None, gamma=None) -> int:
    """Flag, then ``HEARTLAB_PRECISION``, then the config file; ``auto`` sizes it from the depth."""
    value = args.precision
    if value is None:
        value = os.environ.get("HEARTLAB_PRECISION")
    if value is None:
        value = config.get("precision", "auto")
    if str(value) == "auto":
        if depth is None or gamma is None:
            return DEFAULT_PRECISION
        return max(DEFAULT_PRECISION, required_precision(int(depth), gamma))
    try:
        prec = int(value)
    except (TypeError, ValueError):
        raise UsageError(f"precision must be an integer number of bits or 'auto', got {value!r}") from None
    if prec < 53:
        raise UsageError(f"precision must be at least 53 bits, got {prec}")
    return prec


# -- output helpers -------------------------------------------------------------

def _num(x, digits):
    if x is None:
        return None
    if isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return repr(x)
    return context(DEFAULT_PRECISION).nstr(x, digits, strip_zeros=False) if digits else str(x)


def _emit(obj):
    obj = {"schema_version": SCHEMA_VERSION, **obj}
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _event_json(e, digits):
    return {
        "sigma": _num(e.sigma, digits), "mark": e.mark, "n": e.n, "k": e.k,
        "offset": _num(e.offset, digits) if e.offset is not None else None,
    }


# -- subcommands ------------------------------------------------------------------

def cmd_invariants(args, config):
    params = resolve_family(args.family, config)
    prec = resolve_precision(args, config)
    digits = bits_to_digits(prec)
    inv = derive(params, prec)
    fam = as_family(params, prec)
    out = {
        "family": params.name, "precision_bits": prec, "params": params.as_dict(),
        "lambda": _num(fam.lam, digits), "mu": _num(fam.mu, digits), "nu": _num(inv.nu, digits),
        "gamma": _num(inv.gamma, digits), "beta": _num(inv.beta, digits), "A": _num(inv.A, digits),
        "c_E": _num(inv.c_E, digits), "c_I": _num(inv.c_I, digits),
        "s_paper": _num(inv.s_paper, digits), "s_model": _num(inv.s_model, digits),
        "tau_paper": _num(inv.tau_paper, digits), "tau_model": _num(inv.tau_model, digits),
    }
    _emit({"command": "invariants", **out})
    return EXIT_OK


def _scan_params(args, config):
    params = resolve_family(args.family, config)
    depth = _setting(args, config, "depth", 30)
    gamma = derive(params).gamma
    prec = resolve_precision(args, config, depth, gamma)
    return params, depth, prec


def cmd_scan(args, config):
    params, depth, prec = _scan_params(args, config)
    ms = scan(params, depth=depth, sigma_max=args.sigma_max, prec=prec, with_ei=not args.no_ei)
    digits = bits_to_digits(prec)
    fmt = _setting(args, config, "format", "json")
    if fmt == "tsv":
        lines = [f"# precision_bits={prec} digits={digits} family={params.name}", "sigma\tmark\tn\tk"]
        for e in ms:
            n = "" if e.n is None else str(e.n)
            k = "" if e.k is None else str(e.k)
            lines.append(f"{_num(e.sigma, digits)}\t{e.mark}\t{n}\t{k}")
        sys.stdout.write("\n".join(lines) + "\n")
    elif fmt == "json":
        _emit({
            "command": "scan", "family": params.name, "precision_bits": prec, "depth": depth,
            "word": ms.word(), "events": [_event_json(e, digits) for e in ms],
        })
    else:
        raise UsageError(f"format must be json or tsv, got {fmt!r}")
    return EXIT_OK


def cmd_ei_locate(args, config):
    params, depth, prec = _scan_params(args, config)
    ms = scan(params, depth=max(depth, args.index + 2), prec=prec, with_ei=False)
    gaps = gap_intervals(ms)
    if not 0 <= args.index < len(gaps):
        raise UsageError(f"interval index must lie in [0, {len(gaps) - 1}]")
    lo, hi, n, k = gaps[args.index]
    digits = bits_to_digits(prec)
    try:
        ev = locate_EI((lo, hi), n, k, params, prec=prec)
    except BracketError as exc:
        print(f"heartlab: one-EI-per-interval counterexample candidate: {exc}", file=sys.stderr)
        _emit({"command": "ei-locate", "family": params.name, "index": args.index,
               "interval": [_num(lo, digits), _num(hi, digits)], "n": n, "k": k, "root": None})
        return EXIT_CHECK
    _emit({
        "command": "ei-locate", "family": params.name, "precision_bits": prec, "index": args.index,
        "interval": [_num(lo, digits), _num(hi, digits)], "n": n, "k": k,
        "root": _event_json(ev, digits),
    })
    return EXIT_OK


def _verdict_json(v, digits):
    if isinstance(v, WeaklyEquivalent):
        return {
            "verdict": "WeaklyEquivalent", "drops": list(v.drops),
            "shift": list(v.shift) if v.shift is not None else None,
            "not_diophantine": v.not_diophantine,
            "homeomorphism": [[_num(a, digits), _num(b, digits)] for a, b in v.h.breakpoints],
            "certificates": {k: dict(sorted(c.edge_map.items())) for k, c in v.certificates.items()},
        }
    witness = v.witness
    if isinstance(witness, dict):
        witness = {k: ([_num(x, digits) for x in w] if isinstance(w, tuple) else
                       (_num(w, digits) if not hasattr(w, "__dataclass_fields__") else repr(w)))
                   for k, w in witness.items()}
    else:
        witness = repr(witness)
    return {"verdict": "Distinct", "reason": v.reason, "witness": witness,
            "not_diophantine": v.not_diophantine}


def cmd_compare(args, config):
    pa, pb = resolve_family(args.family_a, config), resolve_family(args.family_b, config)
    depth = _setting(args, config, "depth", 30)
    prec = resolve_precision(args, config, depth, derive(pa).gamma)
    bounds = (_setting(args, config, "p_bound", 50), _setting(args, config, "q_bound", 50))
    kwargs = {"max_drop": _setting(args, config, "max_drop", 4), "n_max": _setting(args, config, "n_max", 200)}
    tol = _setting(args, config, "tol", None)
    if tol is not None:
        kwargs["tol"] = float(tol)
    v = classify_pair(pa, pb, depth, bounds, prec=prec, **kwargs)
    _emit({"command": "compare", "family_a": pa.name, "family_b": pb.name, "depth": depth,
           "precision_bits": prec, **_verdict_json(v, bits_to_digits(prec))})
    return EXIT_OK


def cmd_diophantine(args, config):
    if args.triple:
        source, label = tuple(args.triple), "triple"
    else:
        params = resolve_family(args.family or "P0", config)
        source, label = params, params.name
    prec = resolve_precision(args, config)
    n_max = _setting(args, config, "n_max", 200)
    rep = diophantine_check(source, n_max, prec=prec)
    digits = bits_to_digits(prec)
    verdict = rep.verdict
    _emit({
        "command": "diophantine-check", "source": label, "n_max": n_max, "precision_bits": prec,
        "violations": [{"m": v.m, "n": v.n, "offset": _num(v.offset, digits)} for v in rep.violations],
        "verdict": type(verdict).__name__,
        "index": getattr(verdict, "index", getattr(verdict, "last", None)),
    })
    return EXIT_CHECK if isinstance(verdict, ViolationsFound) else EXIT_OK


def cmd_measure(args, config):
    seed = _setting(args, config, "seed", 0)
    reports = [measure_experiment(args.gamma, args.s, args.T, N, args.samples, seed)
               for N in args.N]
    rows = [{
        "N": r.N, "N_cap": r.N_cap, "segments": r.interval_count, "measure": r.measure,
        "bound": r.bound, "within_bound": r.within_bound, "hit_fraction": r.hit_fraction,
        "expected_fraction": r.expected_fraction, "mc_sigma": r.mc_sigma,
    } for r in reports]
    ratios = [a.measure / b.measure for a, b in zip(reports, reports[1:]) if b.measure > 0]
    _emit({"command": "measure-experiment", "gamma": args.gamma, "s": args.s, "T": args.T,
           "seed": seed, "samples": args.samples, "rows": rows, "decay_ratios": ratios})
    return EXIT_OK if all(r.within_bound for r in reports) else EXIT_CHECK


def _read_graph(path):
    try:
        return loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_lmf(args, config):
    if args.isotopic:
        g1, g2 = (_read_graph(p) for p in args.isotopic)
        iso = isotopic(g1, g2)
        _emit({"command": "lmf", "isotopic": iso is not None,
               "vertex_map": dict(sorted(iso.vertex_map.items())) if iso else None})
        return EXIT_OK
    if args.validate:
        problems = validate(_read_graph(args.validate))
        _emit({"command": "lmf", "file": args.validate, "violations": problems})
        return EXIT_CHECK if problems else EXIT_OK
    g = template(args.template)
    if args.surgery:
        g = surgery(g, args.surgery)
    if args.text:
        sys.stdout.write(dumps(g))
    else:
        _emit({"command": "lmf", "template": args.template, "surgery": args.surgery,
               "violations": validate(g), "graph": dumps(g)})
    return EXIT_OK


def cmd_selftest(args, config):
    def report(outcome):
        print(outcome.line(), flush=True)

    outcomes = acceptance.run(args.criteria, report)
    failed = [o.criterion for o in outcomes if not o.passed]
    print(f"{len(outcomes) - len(failed)} of {len(outcomes)} criteria pass"
          + (f"; failing: {', '.join(f'AC-{c}' for c in failed)}" if failed else ""))
    return EXIT_CHECK if failed else EXIT_OK


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--precision", help="working precision in bits, or 'auto'")

    p = argparse.ArgumentParser(prog="heartlab", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", parents=[common], help="derived invariants of a family")
    s.add_argument("--family", default="P0")
    s.set_defaults(run=cmd_invariants)

    s = sub.add_parser("scan", parents=[common], help="LE/LI/EI connections in sigma order")
    s.add_argument("--family", default="P0")
    s.add_argument("--depth", type=int, help="number of LE/LI events (default 30)")
    s.add_argument("--sigma-max", help="sigma horizon")
    s.add_argument("--no-ei", action="store_true", help="skip the EI roots")
    s.add_argument("--format", choices=("json", "tsv"))
    s.set_defaults(run=cmd_scan)

    s = sub.add_parser("ei-locate", parents=[common], help="EI root of one gap interval")
    s.add_argument("--family", default="P0")
    s.add_argument("--index", type=int, required=True, help="gap interval, counted from 0")
    s.add_argument("--depth", type=int)
    s.set_defaults(run=cmd_ei_locate)

    s = sub.add_parser("compare", parents=[common], help="classify a pair of families")
    s.add_argument("--family-a", required=True)
    s.add_argument("--family-b", required=True)
    s.add_argument("--depth", type=int)
    s.add_argument("--max-drop", dest="max_drop", type=int)
    s.add_argument("--p-bound", dest="p_bound", type=int)
    s.add_argument("--q-bound", dest="q_bound", type=int)
    s.add_argument("--n-max", dest="n_max", type=int)
    s.add_argument("--tol", type=float)
    s.set_defaults(run=cmd_compare)

    s = sub.add_parser("diophantine-check", parents=[common], help="violations of the Diophantine inclusion")
    s.add_argument("--family")
    s.add_argument("--triple", nargs=3, metavar=("A", "GAMMA", "S"), help="explicit (A, gamma, s) expressions")
    s.add_argument("--n-max", dest="n_max", type=int)
    s.set_defaults(run=cmd_diophantine)

    s = sub.add_parser("measure-experiment", parents=[common], help="measure of the exceptional set")
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--s", type=float, default=0.0)
    s.add_argument("--T", type=float, default=1.0)
    s.add_argument("--N", type=int, nargs="+", default=[10, 20, 40])
    s.add_argument("--samples", type=int, default=20_000)
    s.add_argument("--seed", type=int)
    s.set_defaults(run=cmd_measure)

    s = sub.add_parser("lmf", parents=[common], help="regime graphs, surgery, validation")
    s.add_argument("--template", choices=[r.value for r in REGIMES], default="PosEpsGeneric")
    s.add_argument("--surgery", choices=("LE", "LI", "EI"))
    s.add_argument("--text", action="store_true", help="print the graph text format only")
    s.add_argument("--validate", metavar="FILE")
    s.add_argument("--isotopic", nargs=2, metavar="FILE")
    s.set_defaults(run=cmd_lmf)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    s.add_argument("--criteria", type=int, nargs="+", choices=sorted(acceptance.CHECKS))
    s.set_defaults(run=cmd_selftest)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = load_config(args.config)
        return args.run(args, config)
    except (UsageError, DomainError, DepthError) as exc:
        print(f"heartlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResonanceError as exc:
        print(f"heartlab: resonance: {exc}", file=sys.stderr)
        return EXIT_RESONANCE
    except (ConsistencyError, BracketError) as exc:
        print(f"heartlab: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except HeartlabError as exc:
        print(f"heartlab: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())
