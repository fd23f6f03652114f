"""Command-line entry point.

Exit codes: 0 on success or a passing comparison, 2 when a statistical
comparison fails its threshold, 1 on any error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from ..gwtree import lukasiewicz_of, sample_conditioned_gw
from ..intensity import StableDensityEvaluator
from ..offspring import bn, law_from_tag
from .experiment import ExperimentConfig, run_convergence, run_pipeline, write_jsonl
from .figure import write_figure
from .streams import replicate_rng

log = logging.getLogger("stablefrag")

EXIT_OK, EXIT_ERROR, EXIT_STAT_FAIL = 0, 1, 2


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="64-bit master seed (default 0)")
    p.add_argument("--config", default=d, help="JSON file whose keys fill in unset options")
    p.add_argument("--out", default=d, help="output path (stdout when omitted)")
    p.add_argument("--threads", type=int, default=d, help="worker threads (default: FRAG_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stablefrag", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        _global_flags(p, suppress=True)
        return p

    p = cmd("sample-tree", "sample a conditioned tree and write its Lukasiewicz path")
    p.add_argument("--law")
    p.add_argument("--n", type=int)

    p = cmd("fragment", "Bernoulli edge-deletion fragment masses")
    p.add_argument("--law")
    p.add_argument("--n", type=int)
    p.add_argument("--times", type=_floats)
    p.add_argument("--reps", type=int)

    p = cmd("excursion", "ladder masses of drifted excursions")
    p.add_argument("--mode", choices=["brownian", "lattice"])
    p.add_argument("--law")
    p.add_argument("--m", type=int)
    p.add_argument("--t", type=_floats)
    p.add_argument("--reps", type=int)

    p = cmd("crt-cut", "Poisson cutting of a conditioned tree")
    p.add_argument("--law")
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=_floats)
    p.add_argument("--reps", type=int)

    p = cmd("converge", "two-sample KS comparison of two pipelines")
    p.add_argument("--law")
    p.add_argument("--sizes", type=_ints)
    p.add_argument("--times", type=_floats)
    p.add_argument("--reps", type=int)
    p.add_argument("--pipelines", type=lambda s: s.split(","))
    p.add_argument("--threshold", type=float)

    p = cmd("intensity", "stable density based intensity and its identities")
    p.add_argument("--alpha", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--z", type=_floats)
    p.add_argument("--check-moment", action="store_true")

    cmd("reproduce-figure", "write the worked-example CSV tables")
    return parser


# Used when neither the command line nor the config file sets an option.
DEFAULTS = {
    "law": "geometric-half",
    "times": [1.0],
    "t": [1.0],
    "reps": 1,
    "mode": "brownian",
    "z": [1.0],
}
REQUIRED = {
    "sample-tree": ("n",),
    "fragment": ("n",),
    "excursion": ("m",),
    "crt-cut": ("n",),
    "intensity": ("alpha",),
}


def _apply_config(args: argparse.Namespace) -> None:
    """Fill unset options from --config, then from DEFAULTS."""
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise ValueError("config must be a JSON object")
        for key, value in cfg.items():
            attr = key.replace("-", "_")
            if getattr(args, attr, None) is None:
                setattr(args, attr, value)
    if args.seed is None:
        args.seed = 0
    if args.command != "converge":
        for key, value in DEFAULTS.items():
            if getattr(args, key, 0) is None:
                setattr(args, key, value)
    if args.command == "intensity" and isinstance(args.t, list):
        args.t = args.t[0]
    for key in REQUIRED.get(args.command, ()):
        if getattr(args, key, None) is None:
            raise ValueError(f"--{key} is required (on the command line or in --config)")


def _emit_text(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_jsonl(args, results, times) -> None:
    if args.out:
        write_jsonl(args.out, results, times)
    else:
        for rep, states in enumerate(results):
            for t, m in zip(times, states):
                print(json.dumps({"rep": rep, "t": float(t), "masses": m.masses.tolist()}))


def cmd_sample_tree(args) -> int:
    law = law_from_tag(args.law)
    tree = sample_conditioned_gw(law, args.n, replicate_rng(args.seed, 0))
    w = lukasiewicz_of(tree)
    lines = [json.dumps({"law": law.tag, "n": args.n, "B_n": bn(law, args.n)})]
    rows = [("k", "W_lex", "c")] + [(k, int(w[k]), int(tree.children[k]) if k < tree.n else "") for k in range(tree.n + 1)]
    body = "\n".join(",".join(map(str, r)) for r in rows)
    _emit_text(args, "# " + lines[0] + "\n" + body + "\n")
    return EXIT_OK


def cmd_fragment(args) -> int:
    law = law_from_tag(args.law)
    res = run_pipeline("bernoulli-fragment", law, args.n, args.times, args.reps, args.seed, args.threads)
    _emit_jsonl(args, res, args.times)
    return EXIT_OK


def cmd_excursion(args) -> int:
    law = law_from_tag(args.law)
    pipeline = "brownian-excursion" if args.mode == "brownian" else "drift-ladder"
    res = run_pipeline(pipeline, law, args.m, args.t, args.reps, args.seed, args.threads)
    _emit_jsonl(args, res, args.t)
    return EXIT_OK


def cmd_crt_cut(args) -> int:
    law = law_from_tag(args.law)
    res = run_pipeline("poisson-cut", law, args.n, args.t, args.reps, args.seed, args.threads)
    _emit_jsonl(args, res, args.t)
    return EXIT_OK


def cmd_converge(args) -> int:
    fields = ("law", "sizes", "times", "reps", "pipelines", "threshold", "side_seeds")
    cfg = {k: getattr(args, k) for k in fields if getattr(args, k, None) is not None}
    cfg["seed"] = args.seed
    cfg["threads"] = args.threads
    report = run_convergence(ExperimentConfig.from_dict(cfg))
    _emit_text(args, json.dumps(report.to_dict(), indent=2) + "\n")
    for r in report.times:
        log.info("t=%g ks_largest=%.4f %s", r.t, r.ks_largest, "pass" if r.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_STAT_FAIL


def cmd_intensity(args) -> int:
    ev = StableDensityEvaluator(args.alpha)
    z = np.asarray(args.z, dtype=float)
    out = {
        "alpha": args.alpha,
        "t": args.t,
        "convention": ev.convention,
        "z": z.tolist(),
        "intensity": np.atleast_1d(ev.intensity(args.t, z)).tolist(),
    }
    if args.check_moment:
        target = 1.0 / ((args.alpha - 1.0) * args.t)
        value = ev.mass_moment(args.t)
        out["moment"] = {"value": value, "target": target, "residual": value - target}
    _emit_text(args, json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def cmd_reproduce_figure(args) -> int:
    for p in write_figure(args.out or "figure"):
        print(p)
    return EXIT_OK


COMMANDS = {
    "sample-tree": cmd_sample_tree,
    "fragment": cmd_fragment,
    "excursion": cmd_excursion,
    "crt-cut": cmd_crt_cut,
    "converge": cmd_converge,
    "intensity": cmd_intensity,
    "reproduce-figure": cmd_reproduce_figure,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        _apply_config(args)
        return COMMANDS[args.command](args)
    except Exception as exc:  # noqa: BLE001
        log.error("error: %s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
