"""Command-line front end.

One subcommand per capability: validate, ghdist, dim, cover, telescope,
asymcone, experiment, embed. Every subcommand honors --format
table|structured (12 significant digits in tables, full precision in
structured output), --out to write the report to a file, --seed, and
--threads (mirrored by ASSOUAD_LAB_THREADS; recorded in the run config —
execution itself is sequential, compiled kernels aside).

Exit codes: 0 success / verdict pass, 1 verdict fail, 2 usage error,
3 input or validation error.

A JSON config file with a top-level "command" field can replace the
argument list: `--config run.json` expands each remaining key into the
matching long option (booleans become bare flags, lists join with
commas) and dispatches as usual.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .constructions import (
    AsymptoticExampleSpec,
    TelescopeSpec,
    asymptotic_example,
    telescope,
)
from .covering import covering_number
from .dimension import (
    EstimatorParams,
    assouad_estimate_covering,
    assouad_estimate_subsets,
    lower_assouad_estimate,
)
from .errors import AssouadLabError, InputFormatError
from .experiments import (
    SCENARIOS,
    demo_dictionary,
    run_scenario,
    telescope_lemma_checks,
)
from .gh import gh_auto, gh_bounds, gh_exact
from .io import dump_document, read_space, write_space
from .spaces import FiniteMetricSpace, frechet_embed

__all__ = ["RunConfig", "main"]

THREADS_ENV = "ASSOUAD_LAB_THREADS"


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters, echoed verbatim into structured output."""

    command: str
    params: dict
    threads: int
    seed: int
    out: str | None


def _fmt12(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _kv_table(pairs: list[tuple[str, object]]) -> str:
    w = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k.ljust(w)}  {_fmt12(v)}" for k, v in pairs) + "\n"


def _finite_or_none(v: float) -> float | None:
    return float(v) if math.isfinite(v) else None


# ---------------------------------------------------------------------------
# subcommand handlers: args -> (result document, table text, exit code)


def _cmd_validate(args) -> tuple[dict, str, int]:
    space = read_space(args.infile, validate=True)
    sep = _finite_or_none(space.separation())
    result = {
        "valid": True,
        "points": space.card,
        "diameter": space.diameter(),
        "separation": sep,
    }
    table = _kv_table(
        [
            ("valid", "yes"),
            ("points", space.card),
            ("diameter", space.diameter()),
            ("separation", "inf" if sep is None else sep),
        ]
    )
    return result, table, 0


def _cmd_ghdist(args) -> tuple[dict, str, int]:
    x = read_space(args.a)
    y = read_space(args.b)
    solver = {"auto": gh_auto, "exact": gh_exact, "bounds": gh_bounds}[args.mode]
    res = solver(x, y)
    result = {
        "value": res.value,
        "kind": res.kind,
        "lower": res.lower,
        "upper": res.upper,
        "witness_pairs": len(res.witness.pairs),
    }
    table = _kv_table(
        [
            ("value", res.value),
            ("kind", res.kind),
            ("lower", res.lower),
            ("upper", res.upper),
            ("witness_pairs", len(res.witness.pairs)),
        ]
    )
    return result, table, 0


def _estimator_params(args) -> EstimatorParams:
    return EstimatorParams(
        rho_min=args.rho_min,
        r_min=args.r_min,
        r_max=args.r_max,
        ladder_factor=args.ladder_factor,
        ball_centers=args.ball_centers,
        random_subsets=args.random_subsets,
        seed=args.seed,
    )


def _cmd_dim(args) -> tuple[dict, str, int]:
    space = read_space(args.infile)
    estimator = {
        "subsets": assouad_estimate_subsets,
        "covering": assouad_estimate_covering,
        "lower": lower_assouad_estimate,
    }[args.method]
    est = estimator(space, _estimator_params(args))
    result = est.to_document()
    table = _kv_table(
        [
            ("beta_hat", est.beta_hat),
            ("constant_C", est.constant_C),
            ("method", est.method),
            ("kind", est.kind),
            ("rho_min", est.window[0]),
            ("r_min", est.window[1]),
            ("r_max", est.window[2]),
            ("samples", est.samples),
            ("extremal_max", est.extremal_max),
            ("extremal_min", est.extremal_min),
        ]
    )
    return result, table, 0


def _cmd_cover(args) -> tuple[dict, str, int]:
    space = read_space(args.infile)
    cert = covering_number(space.full_subset(), args.radius, mode=args.mode)
    result = cert.to_document()
    table = _kv_table(
        [
            ("r", cert.r),
            ("count", cert.count),
            ("exactness", "exact" if cert.exact else "upper-bound"),
            ("largest_block", max(len(b) for b in cert.blocks)),
        ]
    )
    return result, table, 0


def _random_component(rng: np.random.Generator, size: int) -> FiniteMetricSpace:
    pts = rng.uniform(0.0, 1.0, size=(size, 2))
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    return FiniteMetricSpace(tuple(f"x{j}" for j in range(size)), d)


def _cmd_telescope(args) -> tuple[dict, str, int]:
    rng = np.random.default_rng(args.seed)
    if args.sizes:
        try:
            sizes = [int(t) for t in args.sizes.split(",")]
        except ValueError as e:
            raise InputFormatError(f"bad --sizes list {args.sizes!r}") from e
        if any(s < 1 for s in sizes):
            raise InputFormatError("component sizes must be >= 1")
    else:
        sizes = [int(rng.integers(2, 6)) for _ in range(args.blocks)]
    comps = [_random_component(rng, s) for s in sizes]
    space = telescope(TelescopeSpec(tuple(comps), rescale=not args.no_rescale))
    if args.save_space:
        write_space(space, args.save_space)

    rows = []
    pos = 1
    ok = True
    for i, c in enumerate(comps):
        expected = 2.0**-i
        block = space.d[0, pos : pos + c.card]
        worst = float(np.abs(block - expected).max())
        exact = worst == 0.0
        ok = ok and exact
        rows.append(
            {
                "i": i,
                "points": c.card,
                "basepoint_distance": expected,
                "max_deviation": worst,
                "exact": exact,
            }
        )
        pos += c.card
    result = {
        "points": space.card,
        "diameter": space.diameter(),
        "blocks": rows,
        "verdict": "pass" if ok else "fail",
    }
    lines = ["i  points  basepoint_distance  max_deviation  exact"]
    for r in rows:
        lines.append(
            f"{r['i']}  {r['points']}  {_fmt12(r['basepoint_distance'])}  "
            f"{_fmt12(r['max_deviation'])}  {'yes' if r['exact'] else 'no'}"
        )
    lines.append(f"verdict: {'pass' if ok else 'fail'}")
    return result, "\n".join(lines) + "\n", 0 if ok else 1


def _cmd_asymcone(args) -> tuple[dict, str, int]:
    spec = AsymptoticExampleSpec(dictionary=demo_dictionary(), n_blocks=args.blocks)
    if args.save_space:
        write_space(asymptotic_example(spec).space, args.save_space)
    rep = telescope_lemma_checks(spec, args.radius)
    return rep.to_document(), rep.to_table(), 0 if rep.passed else 1


def _cmd_experiment(args) -> tuple[dict, str, int]:
    reports = run_scenario(args.scenario, args.seed)
    overall = all(r.passed for r in reports)
    result = {
        "overall": "pass" if overall else "fail",
        "reports": [r.to_document() for r in reports],
    }
    parts = []
    for r in reports:
        parts.append(f"== {r.name}: {r.verdict} ==")
        parts.append(r.to_table().rstrip("\n"))
        for note in r.notes:
            parts.append(f"note: {note}")
        parts.append("")
    parts.append(f"overall: {'pass' if overall else 'fail'}")
    return result, "\n".join(parts) + "\n", 0 if overall else 1


def _cmd_embed(args) -> tuple[dict, str, int]:
    space = read_space(args.infile)
    emb = frechet_embed(space)
    result = {"labels": list(emb.labels), "vectors": emb.vectors}
    lines = []
    for lab, row in zip(emb.labels, emb.vectors):
        lines.append(lab + "  " + "  ".join(_fmt12(float(v)) for v in row))
    return result, "\n".join(lines) + "\n", 0


_HANDLERS: dict[str, Callable] = {
    "validate": _cmd_validate,
    "ghdist": _cmd_ghdist,
    "dim": _cmd_dim,
    "cover": _cmd_cover,
    "telescope": _cmd_telescope,
    "asymcone": _cmd_asymcone,
    "experiment": _cmd_experiment,
    "embed": _cmd_embed,
}

# presentation-only argument names kept out of the recorded params
_NON_PARAMS = {"command", "format", "out", "threads", "seed"}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _resolve_threads(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(THREADS_ENV)
    if env is not None:
        try:
            value = int(env)
        except ValueError as e:
            raise InputFormatError(f"{THREADS_ENV}={env!r} is not an integer") from e
        if value < 1:
            raise InputFormatError(f"{THREADS_ENV} must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("table", "structured"), default="table",
        help="report form: human table or machine document (default table)",
    )
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    common.add_argument(
        "--threads", type=_positive_int, default=None,
        help=f"worker cap (default: {THREADS_ENV} or the core count)",
    )
    common.add_argument("--seed", type=int, default=0, help="seed for anything randomized (default 0)")

    parser = argparse.ArgumentParser(
        prog="assouad-lab",
        description="Finite metric spaces: distances, coverings, dimension "
        "estimates, model constructions, and scenario checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check all metric axioms of a matrix file")
    p.add_argument("--in", dest="infile", required=True, help="matrix file (JSON or flat)")

    p = sub.add_parser("ghdist", parents=[common], help="distance between two spaces")
    p.add_argument("--a", required=True, help="first matrix file")
    p.add_argument("--b", required=True, help="second matrix file")
    p.add_argument("--mode", choices=("auto", "exact", "bounds"), default="auto")

    p = sub.add_parser("dim", parents=[common], help="empirical dimension estimate")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--method", choices=("subsets", "covering", "lower"), required=True)
    p.add_argument("--rho-min", type=float, default=4.0, help="minimum scale ratio per sample")
    p.add_argument("--r-min", type=float, default=None, help="finest scale (default: 2x separation)")
    p.add_argument("--r-max", type=float, default=None, help="coarsest scale (default: diameter/2)")
    p.add_argument("--ladder-factor", type=float, default=2.0)
    p.add_argument("--ball-centers", type=int, default=4)
    p.add_argument("--random-subsets", type=int, default=0, help="extra seeded random subsets")

    p = sub.add_parser("cover", parents=[common], help="covering number at a scale")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--mode", choices=("auto", "greedy", "exact"), default="auto")

    p = sub.add_parser("telescope", parents=[common], help="build a glued shrinking-block space")
    p.add_argument("--blocks", type=_positive_int, default=8, help="number of random components")
    p.add_argument("--sizes", help="comma list of component sizes (overrides --blocks)")
    p.add_argument("--no-rescale", action="store_true", help="use components at their own diameters")
    p.add_argument("--save-space", metavar="FILE", help="also write the built matrix here")

    p = sub.add_parser("asymcone", parents=[common], help="weighted block space lemma suite")
    p.add_argument("--blocks", type=_positive_int, default=6)
    p.add_argument("--radius", type=float, default=1.5)
    p.add_argument("--save-space", metavar="FILE")

    p = sub.add_parser("experiment", parents=[common], help="run a named scenario")
    p.add_argument(
        "--scenario", choices=tuple(SCENARIOS) + ("all",), default="all",
        help="scenario name (default: all)",
    )

    p = sub.add_parser("embed", parents=[common], help="distance-vector embedding with sup metric")
    p.add_argument("--in", dest="infile", required=True)

    return parser


def _config_argv(path: str) -> list[str]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InputFormatError(f"bad JSON in config {path}: {e}") from e
    if not isinstance(doc, dict) or "command" not in doc:
        raise InputFormatError(f"config {path}: expected an object with a 'command' field")
    argv = [str(doc["command"])]
    for key in sorted(k for k in doc if k != "command"):
        flag = "--" + key.replace("_", "-")
        value = doc[key]
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        elif isinstance(value, (list, tuple)):
            argv.extend([flag, ",".join(str(t) for t in value)])
        else:
            argv.extend([flag, str(value)])
    return argv


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    if "--config" in argv:
        if len(argv) != 2 or argv[0] != "--config":
            print("error: --config FILE must be the only arguments", file=sys.stderr)
            return 2
        try:
            argv = _config_argv(argv[1])
        except (AssouadLabError, OSError) as e:
            print(f"error: {e}", file=sys.stderr)
            return 3

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    try:
        threads = _resolve_threads(args.threads)
        params = {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in _NON_PARAMS and v is not None
        }
        config = RunConfig(
            command=args.command,
            params=params,
            threads=threads,
            seed=args.seed,
            out=args.out,
        )
        result, table, code = _HANDLERS[args.command](args)
    except AssouadLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3

    if args.format == "structured":
        doc = {
            "command": config.command,
            "threads": config.threads,
            "seed": config.seed,
            "params": config.params,
            "result": result,
        }
        text = dump_document(doc)
    else:
        text = table
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
