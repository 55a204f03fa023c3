"""Command-line driver: every experiment as a subcommand with reproducible output.

Output formats: json (default, schema-versioned, byte-identical for identical
configurations on one machine), csv (tabular subcommands), text.  Timing
fields are volatile and therefore excluded unless --timings is given.  Exit
status is 0 exactly when every hard assertion of the invoked operation
passed.

Long runs (statistics or extreme eigenpairs beyond N = 4000, divisor systems
beyond n = 2500) must be acknowledged with --allow-slow.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, is_dataclass
from fractions import Fraction

import numpy as np

from . import cardinal as cardinal_mod
from . import identities, quadform, spectral
from .multiplicative import ComplexPower, DirichletCharacter, Liouville, Principal
from .operators import DENSE_CAP_DEFAULT, build_operator
from .sieve import sieve_mobius
from .zeta import constants, zeta_partial_window

SCHEMA_VERSION = 1
SLOW_N = 4000
SLOW_CARDINAL = 2500

_CONSTANT_NOTES = {
    "gamma": "Euler's constant",
    "gamma1": "linear coefficient of zeta(s) - 1/(s-1) about s=1 "
    "(minus the first Stieltjes constant)",
    "zeta_half": "zeta(1/2), Euler-Maclaurin evaluation",
    "alpha": "-zeta(1/2); trace coefficient",
    "beta": "1 - pi^2/24 - (log(2 pi)-1)^2/2 + (1-gamma)^2/2; limit of phi",
    "c1": "3 gamma^2 - 3 gamma + 3 gamma1 + 1; tau_3 summatory coefficient",
    "c2": "gamma^2 - 2 gamma + 2 gamma1 + 1; divisor-remainder integral",
    "c3": "c1 - 2 c2; ones-vector quadratic-form coefficient",
    "c4": "gamma - gamma1 - 1; limit of w^T A w / N^2",
    "c5": "beta + 1/4 + c3 - gamma^2; limit of Tr(Z^2)/N^2",
}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, Fraction):
        return str(x)
    if is_dataclass(x) and not isinstance(x, type):
        return _jsonable(asdict(x))
    if hasattr(x, "_asdict"):
        return _jsonable(x._asdict())
    return x


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip() != ""]


def _weight_from_args(args, limit: int):
    name = getattr(args, "g", "principal")
    if name == "principal":
        return Principal()
    if name == "liouville":
        return Liouville(limit)
    if name == "power":
        return ComplexPower(complex(args.s.replace("i", "j")))
    if name == "character":
        values = [complex(v) for v in args.chi_values.split(",")]
        return DirichletCharacter(args.q, values)
    raise SystemExit(f"unknown weight {name!r}")


def _emit(args, payload: dict, csv_rows=None, csv_header=None) -> None:
    fmt = args.format
    if fmt == "json":
        text = json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"
    elif fmt == "csv":
        if csv_rows is None:
            raise SystemExit(f"subcommand {payload['command']!r} has no CSV form")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        text = buf.getvalue()
    else:
        lines = [f"{payload['command']}:"]
        for key, val in sorted(payload.get("results", {}).items()):
            lines.append(f"  {key} = {_jsonable(val)}")
        lines.append(f"  passed = {payload['passed']}")
        text = "\n".join(lines) + "\n"
    out_path = args.output
    if out_path:
        base_dir = os.environ.get("MERTENSLAB_OUT_DIR", "")
        if base_dir and not os.path.isabs(out_path):
            out_path = os.path.join(base_dir, out_path)
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _payload(args, command: str, params: dict, results: dict, passed: bool) -> dict:
    payload = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "results": results,
        "passed": bool(passed),
    }
    if not args.timings:
        results.pop("elapsed", None)
    return payload


def _require_fast(args, n: int, bound: int = SLOW_N) -> None:
    if n > bound and not args.allow_slow:
        raise SystemExit(
            f"N = {n} exceeds the quick-run bound {bound}; pass --allow-slow"
        )


# ---- handlers ---------------------------------------------------------------


def _cmd_sieve(args) -> tuple[dict, bool, object, object]:
    table = sieve_mobius(args.N)
    results = {
        "mu": table.mu[1:].tolist(),
        "mertens_prefix": table.mertens_prefix[1:].tolist(),
    }
    rows = [
        (n, int(table.mu[n]), int(table.mertens_prefix[n]))
        for n in range(1, args.N + 1)
    ]
    return results, True, rows, ("n", "mu", "mertens")


def _cmd_mertens(args) -> tuple[dict, bool, object, object]:
    limit = math.floor(args.x)
    table = sieve_mobius(max(1, limit))
    g = _weight_from_args(args, max(1, limit))
    from .multiplicative import mertens_oracle

    value = mertens_oracle(g, args.x, table)
    return {"value": value, "g": str(g), "x": args.x}, True, None, None


def _cmd_identity(args) -> tuple[dict, bool, object, object]:
    mode = args.mode
    if mode == "inclusion-exclusion":
        ranges = _parse_int_list(args.ranges)
        ok = identities.inclusion_exclusion_check(
            len(ranges), args.K, ranges, args.trials, seed=args.seed
        )
        return {"all_trials_zero": ok, "trials": args.trials}, ok, None, None
    if mode == "bilinear":
        limit = args.N * args.N
        table = sieve_mobius(limit)
        rep = identities.mertens_via_bilinear(
            _weight_from_args(args, limit), args.N, table
        )
    elif mode == "uniform":
        table = sieve_mobius(args.K)
        rep = identities.mertens_via_uniform(
            _weight_from_args(args, args.K), args.d, args.K, args.N, table
        )
    elif mode == "flexible":
        ranges = _parse_int_list(args.ranges)
        table = sieve_mobius(args.K)
        rep = identities.mertens_via_flexible(
            _weight_from_args(args, args.K), args.K, ranges, table
        )
    else:
        raise SystemExit(f"unknown identity mode {mode!r}")
    results = {
        "value": rep.value_identity,
        "oracle": rep.value_oracle,
        "match": rep.match,
        "term_count": rep.term_count,
        "identity": rep.identity,
        "elapsed": rep.elapsed,
    }
    return results, rep.match, None, None


def _cmd_mobius(args) -> tuple[dict, bool, object, object]:
    ranges = _parse_int_list(args.ranges)
    table = sieve_mobius(args.K)
    value = identities.mobius_via_identity(args.K, ranges, table)
    sieve_value = int(table.mu[args.K])
    return (
        {"value": value, "sieve": sieve_value, "match": value == sieve_value},
        value == sieve_value,
        None,
        None,
    )


def _cmd_meissel(args) -> tuple[dict, bool, object, object]:
    table = sieve_mobius(max(1, math.floor(args.x)))
    value = identities.meissel_sum(args.x, table)
    expected = 1 if args.x >= 1 else 0
    return (
        {"value": value, "expected": expected, "match": value == expected},
        value == expected,
        None,
        None,
    )


def _cmd_pi_check(args) -> tuple[dict, bool, object, object]:
    chk = identities.eratosthenes_pi_check(args.N)
    return {"lhs": chk.lhs, "rhs": chk.rhs, "match": chk.match}, chk.match, None, None


def _cmd_terms(args) -> tuple[dict, bool, object, object]:
    n_list = _parse_int_list(args.N_list)
    rows = identities.term_count_survey(args.d, n_list)
    results = {"rows": [r._asdict() for r in rows]}
    csv_rows = [(r.n, r.term_count, r.ratio) for r in rows]
    return results, True, csv_rows, ("N", "term_count", "ratio")


def _cmd_stats(args) -> tuple[dict, bool, object, object]:
    _require_fast(args, args.N)
    st = spectral.compute_stats(args.N, threads=args.threads)
    chk = spectral.trace_closed_form_check(args.N)
    results = {**asdict(st), "trace_check": chk._asdict()}
    return results, True, None, None


def _cmd_spectrum(args) -> tuple[dict, bool, object, object]:
    kind = args.kind.replace("-", "_")
    op = build_operator(kind, args.N, g=Principal() if kind == "A_general" else None,
                        h=args.h)
    if args.extreme:
        _require_fast(args, args.N, bound=12000)
        spec = spectral.extreme_eigenpairs(op, threads=args.threads)
    else:
        _require_fast(args, args.N)
        if args.N > DENSE_CAP_DEFAULT:
            raise SystemExit("full spectrum needs N within the dense cap")
        spec = spectral.full_spectrum(op)
    ok = bool(
        np.all(spec.residuals <= 1e-8 * (1 + np.abs(spec.eigenvalues)))
    )
    results = {
        "mode": spec.mode,
        "eigenvalues": spec.eigenvalues.tolist(),
        "indices": spec.indices.tolist(),
        "residuals": spec.residuals.tolist(),
        "residual_contract": ok,
    }
    return results, ok, spec.to_rows(), ("N", "k", "lambda", "residual")


def _cmd_bounds(args) -> tuple[dict, bool, object, object]:
    _require_fast(args, args.N)
    rep = spectral.bounds_report(args.N, threads=args.threads)
    results = {
        "checks": [
            {"name": c.name, "status": c.status, "details": c.details}
            for c in rep.checks
        ]
    }
    return results, rep.all_passed, None, None


def _cmd_phi(args) -> tuple[dict, bool, object, object]:
    _require_fast(args, args.N)
    chk = spectral.phi_limit_check(args.N, threads=args.threads)
    return chk._asdict(), True, None, None


def _cmd_wform(args) -> tuple[dict, bool, object, object]:
    _require_fast(args, args.N)
    chk = spectral.w_form_check(args.N, threads=args.threads)
    return chk._asdict(), True, None, None


def _cmd_scan(args) -> tuple[dict, bool, object, object]:
    k_values = _parse_int_list(args.k_values)
    n_values = _parse_int_list(args.N_values)
    for n in n_values:
        _require_fast(args, n)
    rows = spectral.scaling_scan(k_values, n_values)
    results = {
        "rows": [r._asdict() for r in rows],
        "annotations": spectral.SCAN_ANNOTATION,
    }
    csv_rows = [
        (r.k, r.n, r.index, r.lambda_over_n)
        + tuple(r.tail.get(t, "") for t in (0.25, 0.5, 0.75))
        for r in rows
    ]
    header = ("k", "N", "index", "lambda_over_n", "tail_0.25", "tail_0.5", "tail_0.75")
    return results, True, csv_rows, header


def _cmd_cardinal(args) -> tuple[dict, bool, object, object]:
    if args.n > SLOW_CARDINAL and not args.allow_slow:
        raise SystemExit(
            f"n = {args.n} exceeds the quick-run bound {SLOW_CARDINAL}; "
            "pass --allow-slow"
        )
    table = sieve_mobius(args.n)
    system = cardinal_mod.build_cardinal(args.n, table)
    results: dict = {"n": args.n, "s": system.s}
    passed = True
    if args.verify:
        verified = cardinal_mod.verify_cardinal_identity(system, method=args.method)
        results["identity_verified"] = verified
        passed = passed and verified
    value = cardinal_mod.mertens_via_cardinal(
        args.n, table, system=system, method=args.method
    )
    sieve_value = table.mertens(args.n)
    results.update(
        {"mertens": value, "sieve": sieve_value, "match": value == sieve_value}
    )
    return results, passed and value == sieve_value, None, None


def _cmd_quadform(args) -> tuple[dict, bool, object, object]:
    table = sieve_mobius(max(args.N, 1))
    route = args.route
    if route == "ranksplit":
        rep = quadform.ranksplit_check(args.N, table)
        ok = abs(rep.discrepancy) * args.N**2 <= 1e-9 * (1 + abs(rep.m_quadform))
        return asdict(rep), ok, None, None
    if route in ("spectral", "z-spectral"):
        k_list = _parse_int_list(args.K_list) if args.K_list else [args.N]
        fn = (
            quadform.spectral_truncation_report
            if route == "spectral"
            else quadform.z_spectral_report
        )
        reps = fn(args.N, k_list, table)
        ok = all(
            abs(r.residual_terms["reconstruction_error"]) * args.N**2
            <= quadform.RECONSTRUCTION_TOL * (1 + abs(r.m_quadform))
            for r in reps
        )
        rows = [
            (r.n, r.route_params["K"], r.route_value, r.discrepancy) for r in reps
        ]
        return (
            {"reports": [asdict(r) for r in reps]},
            ok,
            rows,
            ("N", "K", "route_value", "discrepancy"),
        )
    if route == "fourier":
        h_list = _parse_int_list(args.H_list) if args.H_list else [1]
        rep = quadform.fourier_truncation_report(args.N, h_list, table)
        rows = list(rep.rows)
        return (
            {
                "z_quadform": rep.z_quadform,
                "rows": rows,
                "broadly_decreasing": rep.broadly_decreasing,
            },
            True,
            rows,
            ("H", "eta", "E", "normalized"),
        )
    if route == "trace-z2":
        _require_fast(args, args.N)
        chk = quadform.trace_z2_check(args.N)
        return chk._asdict(), True, None, None
    raise SystemExit(f"unknown quadform route {route!r}")


def _cmd_constants(args) -> tuple[dict, bool, object, object]:
    vals = constants().as_dict()
    theta, _ = zeta_partial_window(100, 0.5)
    results = {
        "values": vals,
        "notes": _CONSTANT_NOTES,
        "window_theta_example": {"K": 100, "sigma": 0.5, "theta": theta},
    }
    ok = 0 < theta < 1
    rows = [(k, vals[k], _CONSTANT_NOTES[k]) for k in sorted(vals)]
    return results, ok, rows, ("name", "value", "note")


# ---- parser -----------------------------------------------------------------


_GLOBAL_DEFAULTS = {
    "format": "json",
    "output": None,
    "seed": 0,
    "threads": 1,
    "allow_slow": False,
    "timings": False,
}


def _build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    supp = argparse.SUPPRESS
    common.add_argument("--format", choices=("json", "csv", "text"), default=supp)
    common.add_argument(
        "--output", default=supp, help="output file (MERTENSLAB_OUT_DIR-relative)"
    )
    common.add_argument(
        "--seed", type=int, default=supp, help="seed for randomized checks"
    )
    common.add_argument(
        "--threads", type=int, default=supp, help="row-parallel workers"
    )
    common.add_argument("--allow-slow", action="store_true", default=supp)
    common.add_argument(
        "--timings", action="store_true", default=supp, help="include elapsed fields"
    )
    parser = argparse.ArgumentParser(
        prog="mertenslab",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name: str, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("sieve", help="Mobius values and Mertens prefix sums")
    p.add_argument("--N", type=int, required=True)

    p = add_parser("mertens", help="direct-sieve weighted Mertens sum")
    p.add_argument("--x", type=float, required=True)
    _add_weight_args(p)

    p = add_parser("identity", help="identity evaluation vs. sieve oracle")
    p.add_argument(
        "--mode",
        choices=("bilinear", "uniform", "flexible", "inclusion-exclusion"),
        required=True,
    )
    p.add_argument("--N", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--ranges", help="comma-separated range limits")
    p.add_argument("--trials", type=int, default=100)
    _add_weight_args(p)

    p = add_parser("mobius", help="mu(K) via the flexible identity")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--ranges", required=True)

    p = add_parser("meissel", help="floor-weighted Mobius sum")
    p.add_argument("--x", type=float, required=True)

    p = add_parser("pi-check", help="prime counting via the sieve relation")
    p.add_argument("--N", type=int, required=True)

    p = add_parser("terms", help="identity term-count survey")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N-list", dest="N_list", required=True)

    p = add_parser("stats", help="quadratic-form statistics of A(N)")
    p.add_argument("--N", type=int, required=True)

    p = add_parser("spectrum", help="full or extreme eigenpairs")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--extreme", action="store_true")
    p.add_argument("--kind", choices=("A", "Z", "Z-fourier"), default="A")
    p.add_argument("--h", type=int, help="Fourier mode for Z-fourier")

    p = add_parser("bounds", help="eigenvalue bound suite")
    p.add_argument("--N", type=int, required=True)

    p = add_parser("phi", help="fractional-part mean square vs its limit")
    p.add_argument("--N", type=int, required=True)

    p = add_parser("wform", help="w^T A w / N^2 vs its limit")
    p.add_argument("--N", type=int, required=True)

    p = add_parser("scan", help="eigenvalue scaling scan")
    p.add_argument("--k-values", dest="k_values", required=True)
    p.add_argument("--N-values", dest="N_values", required=True)

    p = add_parser("cardinal", help="divisor-system identity and Mertens value")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument(
        "--method", choices=("auto", "modular", "bareiss", "fraction"), default="auto"
    )

    p = add_parser("quadform", help="quadratic-form decompositions")
    p.add_argument(
        "--route",
        choices=("ranksplit", "spectral", "z-spectral", "fourier", "trace-z2"),
        required=True,
    )
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--K-list", dest="K_list")
    p.add_argument("--H-list", dest="H_list")

    add_parser("constants", help="named constants with provenance notes")
    return parser


def _add_weight_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--g",
        choices=("principal", "liouville", "power", "character"),
        default="principal",
    )
    p.add_argument("--s", default="0", help="exponent for --g power, e.g. '0.5+1i'")
    p.add_argument("--q", type=int, help="modulus for --g character")
    p.add_argument("--chi-values", dest="chi_values", help="comma residue values")


_HANDLERS = {
    "sieve": _cmd_sieve,
    "mertens": _cmd_mertens,
    "identity": _cmd_identity,
    "mobius": _cmd_mobius,
    "meissel": _cmd_meissel,
    "pi-check": _cmd_pi_check,
    "terms": _cmd_terms,
    "stats": _cmd_stats,
    "spectrum": _cmd_spectrum,
    "bounds": _cmd_bounds,
    "phi": _cmd_phi,
    "wform": _cmd_wform,
    "scan": _cmd_scan,
    "cardinal": _cmd_cardinal,
    "quadform": _cmd_quadform,
    "constants": _cmd_constants,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    for key, default in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, default)
    handler = _HANDLERS[args.command]
    try:
        results, passed, csv_rows, csv_header = handler(args)
    except (ValueError, ArithmeticError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "format", "output", "timings") and v is not None
    }
    payload = _payload(args, args.command, params, results, passed)
    _emit(args, payload, csv_rows, csv_header)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
