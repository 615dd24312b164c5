"""Command-line driver: evaluate symbols, Gauss sums, and L-functions,
run the family experiments and series probes, and manage the disk caches.

Every subcommand emits one JSON report on stdout (or to ``--json-out``)
with a fixed schema tag; numbers carry an error bound or an ``exact`` tag.
Reports are canonical JSON — sorted keys, no timestamps — so identical
invocations against the same caches produce byte-identical output.  A
declarative JSON config file supplies per-command defaults which explicit
flags override.  Exit codes: 0 on success, 2 when a precondition is
violated (the offending constraint is named), 3 when a computation refuses
to converge at the requested tolerance.

Gaussian integers are written like ``3-2i`` or ``-3``; complex shifts like
``0.25`` or ``0.1+0.2i``.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .cache import LValueCache, cache_roundtrip, refresh_manifest_entry, resolve_cache_dir
from .errors import ConvergenceError, DomainError
from .experiments import (
    canonical_json,
    density_experiment,
    moment_experiment,
    moment_sweep,
    rational_experiment,
)
from .gauss_sums import gauss_sum_fast
from .lfun import HeckeLFunction
from .ray_class import build_group
from .series import (
    exponent_fit,
    f_partial,
    h_partial,
    h_relations_check,
    h_sample,
    vaughan_decompose,
)
from .symbols import large_sieve_ratio, quadratic_symbol, quartic_symbol
from .weights import DensityTestFunction, bump_weight
from .zi import GInt

SCHEMA = "quartic-hecke-report-v1"
EXIT_PRECONDITION = 2
EXIT_NONCONVERGENCE = 3

_WEIGHTS = {"bump": bump_weight}

_SYMBOL_NAMES = {None: "0", 0: "1", 1: "i", 2: "-1", 3: "-i"}


def _parse_complex(text: str) -> complex:
    s = str(text).strip().replace(" ", "").replace("I", "i").replace("j", "i")
    if s.endswith("i"):
        return complex(s.replace("i", "j"))
    return complex(float(s))


def _parse_gint(text: str) -> GInt:
    return GInt.parse(str(text))


def _character(index: int):
    group = build_group()
    if not (0 <= index < len(group.characters)):
        raise DomainError(f"character index {index} outside 0..{len(group.characters) - 1}")
    return group.characters[index]


def _weight(name: str):
    try:
        return _WEIGHTS[name]()
    except KeyError:
        raise DomainError(f"unknown weight {name!r}; expected one of {sorted(_WEIGHTS)}") from None


def _emit(args, command: str, params: dict, result: dict) -> None:
    body = canonical_json({"schema": SCHEMA, "command": command, "params": params, "result": result})
    if getattr(args, "json_out", None):
        Path(args.json_out).write_text(body + "\n")
        print(f"report written to {args.json_out}")
    else:
        print(body)


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_symbol(args) -> None:
    a = _parse_gint(args.a)
    n = _parse_gint(args.n)
    fn = quadratic_symbol if args.quadratic else quartic_symbol
    val = fn(a, n)
    name = _SYMBOL_NAMES[val.exponent]
    if not getattr(args, "json_out", None):
        print(name)
        return
    _emit(
        args,
        "symbol",
        {"a": str(a), "n": str(n), "power": 2 if args.quadratic else 4},
        {"value": name, "error": "exact"},
    )


def _cmd_gauss_sum(args) -> None:
    k = _parse_gint(args.k)
    c = _parse_gint(args.c)
    gv = gauss_sum_fast(k, c, args.l, args.variant)
    value = complex(gv.value)
    _emit(
        args,
        "gauss-sum",
        {"k": str(k), "c": str(c), "l": args.l, "variant": args.variant},
        {
            "value": value,
            "modulus_norm": gv.modulus_norm,
            "abs_value": abs(value),
            "method": gv.method,
            "error": "exact up to float rounding",
        },
    )


def _lvalue_with_bound(lf: HeckeLFunction, s: complex) -> tuple[complex, float]:
    value = lf.value(s)
    alt = lf.value(s, split=1.3)
    return value, abs(value - alt)


def _cmd_lfun_eval(args) -> None:
    pi = _parse_gint(args.pi)
    s = _parse_complex(args.s)
    lf = HeckeLFunction(pi)
    store = None
    if args.use_cache:
        store = cache_roundtrip("lvalues", 0, args.cache_dir)
        hit = store.get(pi, s, "afe")
        if hit is not None:
            _emit(
                args,
                "lfun-eval",
                {"pi": str(pi), "s": s},
                {"value": hit, "error_bound": "cached", "source": "cache"},
            )
            return
    value, bound = _lvalue_with_bound(lf, s)
    if store is not None:
        store.put(pi, s, "afe", value, bound)
        store.save()
        refresh_manifest_entry("lvalues", 0, args.cache_dir)
    _emit(
        args,
        "lfun-eval",
        {"pi": str(pi), "s": s},
        {
            "value": value,
            "error_bound": bound,
            "conductor_norm": 4 * pi.norm,
            "source": "computed",
        },
    )


def _cmd_zeros(args) -> None:
    pi = _parse_gint(args.pi)
    zl = HeckeLFunction(pi).find_zeros(args.T)
    if args.csv_out:
        with open(args.csv_out, "w") as fh:
            zl.to_csv(fh)
    _emit(
        args,
        "zeros",
        {"pi": str(pi), "T": args.T},
        {
            "conductor_norm": zl.conductor_norm,
            "count": len(zl.ordinates),
            "ordinates": list(zl.ordinates),
            "bracket_width_max": max((b - a for a, b in zl.brackets), default=0.0),
            "suspected_missing": zl.suspected_missing,
            "csv": args.csv_out or None,
        },
    )


def _experiment_result(rep) -> dict:
    body = json.loads(rep.to_json())
    return body


def _cmd_moment(args) -> None:
    w = _weight(args.weight)
    alpha = _parse_complex(args.alpha)
    if args.x_grid:
        xs = [float(t) for t in str(args.x_grid).split(",")]
        reps = moment_sweep(xs, w, "first", alpha=alpha)
        _emit(
            args,
            "moment",
            {"x_grid": xs, "alpha": alpha, "weight": args.weight},
            {"experiments": [_experiment_result(r) for r in reps]},
        )
        return
    if args.X is None:
        raise DomainError("moment needs --X or --x-grid")
    rep = moment_experiment(float(args.X), w, "first", alpha=alpha)
    _emit(args, "moment", {"x": float(args.X), "alpha": alpha, "weight": args.weight}, _experiment_result(rep))


def _cmd_ratio(args) -> None:
    w = _weight(args.weight)
    rep = moment_experiment(
        float(args.X),
        w,
        "ratio",
        alpha=_parse_complex(args.alpha),
        beta=_parse_complex(args.beta),
        inv_radius=args.inv_radius,
    )
    _emit(
        args,
        "ratio",
        {"x": float(args.X), "alpha": _parse_complex(args.alpha), "beta": _parse_complex(args.beta)},
        _experiment_result(rep),
    )


def _cmd_logderiv(args) -> None:
    w = _weight(args.weight)
    rep = moment_experiment(float(args.X), w, "logderiv", r=_parse_complex(args.r))
    _emit(args, "logderiv", {"x": float(args.X), "r": _parse_complex(args.r)}, _experiment_result(rep))


def _cmd_density(args) -> None:
    w = _weight(args.weight)
    dens = DensityTestFunction(args.a)
    rep = density_experiment(float(args.X), dens, w, height=args.height)
    _emit(
        args,
        "density",
        {"x": float(args.X), "a": args.a, "height": args.height},
        _experiment_result(rep),
    )


def _cmd_rational(args) -> None:
    w = _weight(args.weight)
    shifts = {}
    if args.alpha is not None:
        shifts["alpha"] = _parse_complex(args.alpha)
    if args.beta is not None:
        shifts["beta"] = _parse_complex(args.beta)
    if args.r is not None:
        shifts["r"] = _parse_complex(args.r)
    rep = rational_experiment(float(args.Q), w, args.variant, inv_radius=args.inv_radius, **shifts)
    _emit(
        args,
        "rational",
        dict({"q": float(args.Q), "variant": args.variant}, **shifts),
        _experiment_result(rep),
    )


def _cmd_series(args) -> None:
    which = args.which
    psi = _character(args.psi)
    r = _parse_gint(args.r)
    if which == "H":
        value = h_partial(r, psi, args.Z)
        _emit(
            args,
            "series",
            {"which": "H", "r": str(r), "psi": args.psi, "Z": args.Z},
            {"value": value, "error": "exact finite sum"},
        )
    elif which == "F":
        a = _parse_gint(args.a)
        value = f_partial(a, args.Z, r, psi)
        _emit(
            args,
            "series",
            {"which": "F", "a": str(a), "r": str(r), "psi": args.psi, "z": args.Z},
            {"value": value, "error": "exact finite sum"},
        )
    elif which == "vaughan":
        _vaughan_report(args, r, psi)
    elif which == "relations":
        reports = h_relations_check(
            r,
            _parse_gint(args.r2),
            _parse_gint(args.r3),
            psi,
            s=_parse_complex(args.s),
            norm_cap=args.cap,
        )
        _emit(
            args,
            "series",
            {
                "which": "relations",
                "r1": str(r),
                "r2": args.r2,
                "r3": args.r3,
                "psi": args.psi,
                "s": _parse_complex(args.s),
                "cap": args.cap,
            },
            {
                "relations": [
                    {
                        "relation": rep.relation,
                        "lhs": rep.lhs,
                        "rhs": rep.rhs,
                        "discrepancy": rep.discrepancy,
                        "tolerance": rep.tolerance,
                        "ok": rep.ok,
                    }
                    for rep in reports
                ],
                "all_ok": all(rep.ok for rep in reports),
            },
        )
    elif which == "slope":
        grid = [float(t) for t in str(args.grid).split(",")]
        fit = exponent_fit(h_sample(r, psi, grid), reference=args.reference)
        _emit(
            args,
            "series",
            {"which": "slope", "r": str(r), "psi": args.psi, "grid": grid},
            {
                "slope": fit.slope,
                "intercept": fit.intercept,
                "reference": fit.reference,
                "within_reference": fit.within_reference,
                "error": "least-squares fit, diagnostic only",
            },
        )
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown series probe {which!r}")


def _vaughan_report(args, r: GInt, psi) -> None:
    vd = vaughan_decompose(r, args.Z, args.u, psi)
    _emit(
        args,
        "vaughan",
        {"r": str(r), "psi": args.psi, "Z": args.Z, "u": args.u},
        {
            "sigma0": vd.sigma0,
            "sigma1": vd.sigma1,
            "sigma2_prime": vd.sigma2_prime,
            "sigma2_dprime": vd.sigma2_dprime,
            "sigma3": vd.sigma3,
            "sigma4": vd.sigma4,
            "identity_residual": vd.identity_residual,
            "error": "exact finite sums; residual is the identity defect",
        },
    )


def _cmd_vaughan(args) -> None:
    _vaughan_report(args, _parse_gint(args.r), _character(args.psi))


def _cmd_sieve_diag(args) -> None:
    result = large_sieve_ratio(args.M, args.N, trials=args.trials, seed=args.seed)
    result["error"] = "empirical trial statistics"
    _emit(args, "sieve-diag", {"M": args.M, "N": args.N, "trials": args.trials, "seed": args.seed}, result)


def _cmd_cache(args) -> None:
    caught: list[str] = []
    with warnings.catch_warnings(record=True) as grabbed:
        warnings.simplefilter("always")
        data = cache_roundtrip(args.kind, args.limit, args.cache_dir)
        caught = [str(w.message) for w in grabbed]
    if args.action == "check" and caught:
        # a check that had to rebuild is a failed check, but the caches are
        # now valid; surface the reasons
        _emit(
            args,
            "cache",
            {"action": args.action, "kind": args.kind, "limit": args.limit},
            {"status": "rebuilt", "warnings": caught, "records": _cache_size(data)},
        )
        return
    _emit(
        args,
        "cache",
        {"action": args.action, "kind": args.kind, "limit": args.limit},
        {
            "status": "built-or-loaded" if args.action == "build" else "verified",
            "warnings": caught,
            "records": _cache_size(data),
            "directory": str(resolve_cache_dir(args.cache_dir)),
        },
    )


def _cache_size(data) -> int:
    if isinstance(data, LValueCache):
        return len(data)
    return len(data)


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhecke",
        description="Workbench for quartic Hecke characters over the Gaussian field.",
        allow_abbrev=False,
    )
    parser.add_argument("--config", help="JSON file of per-command defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(handler=handler)
        p.add_argument("--json-out", help="write the JSON report here instead of stdout")
        p.add_argument("--cache-dir", default=None, help="cache directory override")
        return p

    p = add("symbol", _cmd_symbol, help="evaluate a residue symbol")
    p.add_argument("--a", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--quadratic", action="store_true", help="use the quadratic symbol")

    p = add("gauss-sum", _cmd_gauss_sum, help="evaluate a Gauss sum")
    p.add_argument("--c", required=True, help="modulus")
    p.add_argument("--k", default="1", help="numerator twist")
    p.add_argument("--l", type=int, default=4, choices=(2, 4))
    p.add_argument("--variant", default="K", choices=("K", "rational", "plain"))

    p = add("lfun-eval", _cmd_lfun_eval, help="evaluate a Hecke L-function")
    p.add_argument("--pi", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--use-cache", action="store_true")

    p = add("zeros", _cmd_zeros, help="find certified zeros on the critical line")
    p.add_argument("--pi", required=True)
    p.add_argument("--T", type=float, default=30.0)
    p.add_argument("--csv-out")

    p = add("moment", _cmd_moment, help="smoothed first moment over the family")
    p.add_argument("--X", type=float)
    p.add_argument("--x-grid", help="comma-separated increasing scales for a sweep")
    p.add_argument("--alpha", default="0")
    p.add_argument("--weight", default="bump")

    p = add("ratio", _cmd_ratio, help="smoothed ratio moment over the family")
    p.add_argument("--X", type=float, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--inv-radius", type=float, default=6000.0)
    p.add_argument("--weight", default="bump")

    p = add("logderiv", _cmd_logderiv, help="smoothed L'/L moment over the family")
    p.add_argument("--X", type=float, required=True)
    p.add_argument("--r", default="0.3")
    p.add_argument("--weight", default="bump")

    p = add("density", _cmd_density, help="one-level density of low zeros")
    p.add_argument("--X", type=float, required=True)
    p.add_argument("--a", type=float, default=0.8)
    p.add_argument("--height", type=float, default=40.0)
    p.add_argument("--weight", default="bump")

    p = add("rational", _cmd_rational, help="moments over quartic Dirichlet characters")
    p.add_argument("--Q", type=float, required=True)
    p.add_argument("--variant", default="first", choices=("first", "ratio", "negative", "logderiv"))
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--r")
    p.add_argument("--inv-radius", type=float, default=3000.0)
    p.add_argument("--weight", default="bump")

    p = add("series", _cmd_series, help="Gauss-sum series probes")
    p.add_argument("which", choices=("H", "F", "vaughan", "relations", "slope"))
    p.add_argument("--r", default="1", help="twist numerator (primary)")
    p.add_argument("--psi", type=int, default=0, help="ray class character index")
    p.add_argument("--Z", type=float, default=1000.0)
    p.add_argument("--u", type=float, default=10.0)
    p.add_argument("--a", default="1", help="divisor constraint for F")
    p.add_argument("--r2", default="1")
    p.add_argument("--r3", default="1")
    p.add_argument("--s", default="1.75")
    p.add_argument("--cap", type=int, default=20000)
    p.add_argument("--grid", default="1000,2000,4000,8000,16000,32000,64000")
    p.add_argument("--reference", type=float, default=1.0)

    p = add("vaughan", _cmd_vaughan, help="Vaughan-style decomposition identity")
    p.add_argument("--Z", type=float, required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--r", default="1")
    p.add_argument("--psi", type=int, default=0)

    p = add("sieve-diag", _cmd_sieve_diag, help="quadratic large-sieve constant trials")
    p.add_argument("--M", type=int, default=50)
    p.add_argument("--N", type=int, default=50)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)

    p = add("cache", _cmd_cache, help="build or verify a disk cache")
    p.add_argument("action", choices=("build", "check"))
    p.add_argument("--kind", required=True, choices=("primes", "gauss", "lvalues"))
    p.add_argument("--limit", type=int, default=100_000)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Merge per-command defaults from --config into the subparsers."""
    probe = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return argv
    try:
        table = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"unreadable config file {known.config}: {exc}") from exc
    if not isinstance(table, dict):
        raise DomainError("config file must hold an object of per-command defaults")
    actions = next(
        a for a in parser._subparsers._group_actions if isinstance(a, argparse._SubParsersAction)
    )
    for command, defaults in table.items():
        sp = actions.choices.get(command)
        if sp is None:
            raise DomainError(f"config names unknown command {command!r}")
        if not isinstance(defaults, dict):
            raise DomainError(f"config for {command!r} must be an object")
        sp.set_defaults(**{str(k).replace("-", "_"): v for k, v in defaults.items()})
    return argv


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        args.handler(args)
        return 0
    except DomainError as exc:
        print(canonical_json({"error": {"exit": EXIT_PRECONDITION, "kind": "precondition", "detail": str(exc)}}))
        return EXIT_PRECONDITION
    except ConvergenceError as exc:
        print(canonical_json({"error": {"exit": EXIT_NONCONVERGENCE, "kind": "non-convergence", "detail": str(exc)}}))
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
