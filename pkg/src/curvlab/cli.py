"""Command-line front end: ``curvlab {model,check,identities,minimize,scan}``.

Every command except ``model`` prints a JSON run report. Its ``timing`` member is the only
part that varies between identical runs; everything else is reproducible from the input
digest, the seed and the echoed config.

Exit codes: 0 success or HOLDS_STRICT, 1 error, 2 HOLDS_WEAK, 3 FAILS (or an identity over
its bound), 4 optimizer/oracle disagreement, 5 harness violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from . import io as tio
from .errors import CurvlabError, InvalidDimension, UsageError
from .frames import Frame, random_frame
from .models import constant_curvature, flat, fubini_study, sphere_cross_circle
from .search import FrameFunctional, SearchConfig, brute_force_extremum, extremize
from .tensor import CurvatureTensor, curvature_scalars, direct_sum
from .verify import (
    Condition,
    Family,
    Verdict,
    check_condition,
    check_dim_specific_decomposition,
    check_general_decomposition,
    check_identity_2_2,
    check_identity_2_3,
    check_identity_4d,
    check_prop_main_decomposition,
    check_scalar_identity,
    implication_harness,
)

EXIT_OK, EXIT_ERROR, EXIT_WEAK, EXIT_FAILS, EXIT_ORACLE, EXIT_VIOLATION = 0, 1, 2, 3, 4, 5
ORACLE_TOLERANCE = 1e-6
SEED_ENV = "CURVLAB_SEED"

_VERDICT_EXIT = {Verdict.HOLDS_STRICT: EXIT_OK, Verdict.HOLDS_WEAK: EXIT_WEAK, Verdict.FAILS: EXIT_FAILS}

# name -> (functional factory, maximise)
_FUNCTIONALS = {
    "a-sum": (lambda g: FrameFunctional.a_sum(), False),
    "b-sum": (lambda g: FrameFunctional.b_sum(), False),
    "condition": (lambda g: FrameFunctional.condition(g), False),
    "isotropic": (lambda g: FrameFunctional.isotropic(), False),
    "sectional-min": (lambda g: FrameFunctional.sectional(), False),
    "sectional-max": (lambda g: FrameFunctional.sectional(), True),
    "flag": (lambda g: FrameFunctional.flag(), False),
}


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage, which would read as HOLDS_WEAK."""

    def error(self, message):
        raise UsageError(message)


# --- models -------------------------------------------------------------------------

def _params(items) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"model parameters are key=value pairs, got {item!r}")
        if key in out:
            raise UsageError(f"parameter {key!r} given twice")
        out[key] = value
    return out


def _int(params, key, default=None):
    if key not in params:
        if default is None:
            raise UsageError(f"missing parameter {key}=")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise UsageError(f"{key} must be an integer, got {params[key]!r}") from None


def _float(params, key, default):
    try:
        return float(params.get(key, default))
    except ValueError:
        raise UsageError(f"{key} must be a number, got {params[key]!r}") from None


_MODEL_KEYS = {
    "sphere": {"n", "kappa"},
    "flat": {"n"},
    "fubini-study": {"m"},
    "sphere-cross-circle": {"n"},
    "product": {"a", "b"},
}


def build_model(name: str, params: dict) -> CurvatureTensor:
    if name not in _MODEL_KEYS:
        raise UsageError(f"unknown model {name!r}; choose from {', '.join(_MODEL_KEYS)}")
    extra = set(params) - _MODEL_KEYS[name]
    if extra:
        raise UsageError(f"model {name} does not take {', '.join(sorted(extra))}")
    try:
        if name == "sphere":
            return constant_curvature(_int(params, "n"), _float(params, "kappa", 1.0))
        if name == "flat":
            return flat(_int(params, "n"))
        if name == "fubini-study":
            return fubini_study(_int(params, "m"))[0]
        if name == "sphere-cross-circle":
            return sphere_cross_circle(_int(params, "n"))
    except InvalidDimension as exc:
        raise UsageError(str(exc)) from None
    if "a" not in params or "b" not in params:
        raise UsageError("product needs a=<file> b=<file>")
    return direct_sum(tio.load(params["a"]), tio.load(params["b"]))


# --- reports ------------------------------------------------------------------------

def _config(args) -> SearchConfig:
    return SearchConfig(restarts=args.restarts, max_iterations=args.max_iter, seed=args.seed)


def _load_input(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise UsageError(f"{path} is not UTF-8 text") from None
    return tio.loads(text), {"path": path, "sha256": tio.digest(data)}


def _report(command: str, inputs, cfg: SearchConfig | None, seed: int, results: dict, exit_code: int) -> dict:
    return {
        "tool": "curvlab",
        "version": __version__,
        "command": command,
        "input": inputs,
        "seed": seed,
        "config": cfg.as_dict() if cfg is not None else None,
        "results": results,
        "exit_code": exit_code,
    }


def _emit(report: dict, out: str | None, started: float) -> int:
    report = dict(report)
    report["timing"] = {"wall_seconds": round(time.perf_counter() - started, 6)}
    text = json.dumps(report, indent=2) + "\n"
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return report["exit_code"]


def report_body(report: dict) -> dict:
    """The reproducible part of a run report (everything but timing)."""
    return {k: v for k, v in report.items() if k != "timing"}


# --- commands -----------------------------------------------------------------------

def cmd_model(args) -> int:
    R = build_model(args.name, _params(args.params))
    text = tio.dumps(R, args.format)
    sc = curvature_scalars(R)
    summary = {"model": args.name, "dim": R.dim, "scalar": sc.scalar, "s0": sc.normalized_scalar}
    if args.out and args.out != "-":
        Path(args.out).write_text(text, encoding="utf-8")
        sys.stdout.write(json.dumps(summary) + "\n")
    else:
        sys.stdout.write(text)
        sys.stderr.write(json.dumps(summary) + "\n")
    return EXIT_OK


def cmd_check(args, started) -> int:
    R, inputs = _load_input(args.tensor)
    cfg = _config(args)
    rep = check_condition(R, args.condition, cfg, gamma=args.gamma)
    code = _VERDICT_EXIT[rep.verdict]
    return _emit(_report("check", inputs, cfg, args.seed, rep.as_dict(), code), args.out, started)


def identity_rows(R: CurvatureTensor, gamma: float, seed: int) -> tuple[list, list]:
    """Every identity check applicable to ``R.dim``: (reports, skipped notices)."""
    n = R.dim
    rows, skipped = [], []
    if n < 4:
        return rows, [f"all identities need n >= 4 (tensor has n = {n})"]
    frames = [Frame.standard(n), random_frame(n, 4, seed)]
    rows += [check_identity_2_2(R), check_identity_2_3(R), check_scalar_identity(R, gamma)]
    rows += [check_prop_main_decomposition(R, F) for F in frames]
    if n == 4:
        rows += [check_identity_4d(R, F) for F in frames]
    else:
        skipped.append(f"4d identity skipped: needs n = 4 (tensor has n = {n})")
    if n in (5, 6, 7):
        rows += [check_dim_specific_decomposition(R, n, w) for w in ("YAU_LOWER", "YAU_UPPER")]
    elif n >= 8:
        rows += [check_general_decomposition(R, w) for w in ("YAU_LOWER", "YAU_UPPER")]
    else:
        skipped.append("dimension-specific decompositions skipped: they cover n >= 5")
    return rows, skipped


def cmd_identities(args, started) -> int:
    R, inputs = _load_input(args.tensor)
    gamma = 0.5 if args.gamma is None else args.gamma
    rows, skipped = identity_rows(R, gamma, args.seed)
    for note in skipped:
        sys.stderr.write(f"curvlab: {note}\n")
    results = {"gamma": gamma, "identities": [r.as_dict() for r in rows], "skipped": skipped}
    code = EXIT_OK if all(r.ok for r in rows) else EXIT_FAILS
    return _emit(_report("identities", inputs, None, args.seed, results, code), args.out, started)


def cmd_minimize(args, started) -> int:
    R, inputs = _load_input(args.tensor)
    cfg = _config(args)
    factory, maximize = _FUNCTIONALS[args.functional]
    maximize = maximize or args.maximize
    gamma = 0.5 if args.gamma is None else args.gamma
    f = factory(gamma)
    res = extremize(R, f, cfg, maximize=maximize)
    results = {
        "functional": args.functional,
        "gamma": gamma if f.kind.name == "CONDITION" else None,
        "maximize": maximize,
        "value": res.value,
        "frame": res.frame.vectors.tolist(),
        "theta": res.theta,
        "iterations": res.iterations,
        "restarts_used": res.restarts_used,
        "restart_index": res.restart_index,
        "converged": res.converged,
        "gradient_norm": res.gradient_norm,
    }
    code = EXIT_OK
    if args.oracle:
        oracle = brute_force_extremum(R, f, args.oracle, args.seed, minimize=not maximize)
        gap = (res.value - oracle) if not maximize else (oracle - res.value)
        results["oracle"] = {"samples": args.oracle, "seed": args.seed, "value": oracle,
                             "optimizer_minus_oracle": res.value - oracle}
        # the optimizer may beat the oracle freely; only falling behind it counts
        if gap > ORACLE_TOLERANCE:
            code = EXIT_ORACLE
    return _emit(_report("minimize", inputs, cfg, args.seed, results, code), args.out, started)


def cmd_scan(args, started) -> int:
    cfg = _config(args)
    summary = implication_harness(args.family, args.trials, args.seed, cfg, workers=args.workers)
    results = summary.as_dict()
    code = EXIT_VIOLATION if summary.violations else EXIT_OK
    return _emit(_report("scan", None, cfg, args.seed, results, code), args.out, started)


# --- parser -------------------------------------------------------------------------

def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be a non-negative integer, got {raw!r}") from None
    if seed < 0:
        raise UsageError(f"{SEED_ENV} must be a non-negative integer, got {raw!r}")
    return seed


def _positive(text) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _nonneg(text) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    seed = _default_seed()
    parser = _Parser(prog="curvlab", description="Check pinching conditions on algebraic curvature tensors.")
    parser.add_argument("--version", action="version", version=f"curvlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def search_flags(p):
        p.add_argument("--restarts", type=_positive, default=SearchConfig.restarts)
        p.add_argument("--max-iter", type=_positive, default=SearchConfig.max_iterations)
        p.add_argument("--seed", type=_nonneg, default=seed, help=f"default: ${SEED_ENV} or 0")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("model", help="write a model-space tensor file")
    p.add_argument("name", help=", ".join(_MODEL_KEYS))
    p.add_argument("params", nargs="*", help="key=value parameters, e.g. n=5 kappa=1")
    p.add_argument("--out", help="tensor file to write (default: stdout)")
    p.add_argument("--format", choices=tio.FORMATS, default="sparse")

    p = sub.add_parser("check", help="check a named curvature condition")
    p.add_argument("tensor")
    p.add_argument("--condition", required=True, choices=[c.value for c in Condition])
    p.add_argument("--gamma", type=float, help="override 1/2 in the main condition")
    search_flags(p)

    p = sub.add_parser("identities", help="residuals of every applicable exact identity")
    p.add_argument("tensor")
    p.add_argument("--gamma", type=float, help="gamma for the scalar identity (default 0.5)")
    p.add_argument("--seed", type=_nonneg, default=seed, help="seed of the random test frame")
    p.add_argument("--out")

    p = sub.add_parser("minimize", help="extremise a frame functional")
    p.add_argument("tensor")
    p.add_argument("--functional", required=True, choices=list(_FUNCTIONALS))
    p.add_argument("--gamma", type=float, help="gamma for the condition functional (default 0.5)")
    p.add_argument("--maximize", action="store_true")
    p.add_argument("--oracle", type=_positive, metavar="N", help="also sample N random frames")
    search_flags(p)

    p = sub.add_parser("scan", help="run an implication harness")
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--trials", type=_positive, default=100)
    p.add_argument("--workers", type=_positive, default=1)
    search_flags(p)
    return parser


def main(argv=None) -> int:
    started = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        if args.command == "model":
            return cmd_model(args)
        return {"check": cmd_check, "identities": cmd_identities,
                "minimize": cmd_minimize, "scan": cmd_scan}[args.command](args, started)
    except (CurvlabError, OSError, ValueError) as exc:
        sys.stderr.write(f"curvlab: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
