"""Command-line interface.

One binary with subcommands covering the dynamics, landmark analysis,
sampling, exact enumeration, Monte Carlo experiments, random-walk laws
and the Brownian reference simulations.  Every randomized command takes
an explicit --seed, every JSON artifact embeds the full invocation and
a schema version, and probabilities print with 12 significant digits so
golden files stay stable.

Exit status: 0 on success, 1 on invalid input, 2 on an internal
assertion failure (for example a predicate/simulation mismatch).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import core, experiments, reference, sampling, walk
from .landmarks import landmarks as _landmarks, predict_zero_excess

SCHEMA_VERSION = 1


def _fmt(x):
    """Round floats to 12 significant digits for stable artifacts."""
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    return x


def _write_artifact(path, payload):
    """Write JSON atomically so failures never leave partial artifacts."""
    text = json.dumps(payload, indent=1)
    if path is None:
        print(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _payload(args, result):
    invocation = {
        k: v for k, v in vars(args).items() if k not in ("func", "required_opts")
    }
    return {
        "schema_version": SCHEMA_VERSION,
        "invocation": _fmt(invocation),
        "result": _fmt(result),
    }


def _check_string(s: str) -> str:
    if not s or any(c not in "012" for c in s):
        raise ValueError(f"input string must be nonempty over {{0,1,2}}, got {s!r}")
    return s


def _cmd_evolve(args):
    s = _check_string(args.input_string)
    step = core.step_three if args.three else core.step_two
    trajectory = [s]
    for _ in range(args.steps):
        s = step(s)
        trajectory.append(s)
    return {"trajectory": trajectory}


def _cmd_stabilize(args):
    s = _check_string(args.input_string)
    fn = core.stabilize_three if args.three else core.stabilize_two
    out = fn(s, record_trajectory=args.trajectory)
    result = {"T": out.steps, "final": out.final}
    if args.trajectory:
        result["trajectory"] = list(out.trajectory)
    return result


def _cmd_landmarks(args):
    s = _check_string(args.input_string)
    marks = _landmarks(s)
    return {
        "L": marks.L,
        "R": marks.R,
        "U": marks.U,
        "K": marks.K,
        "M": marks.M,
        "M_list": list(marks.M_list),
        "K_fallback": marks.K_fallback,
        "predict_zero_excess": predict_zero_excess(s) if marks.U is not None else None,
    }


def _density(args):
    if getattr(args, "lam", None) is not None:
        return sampling.critical_density(args.n, args.lam, args.convention)
    if getattr(args, "p", None) is None:
        raise ValueError("pass either --p or --lam")
    return args.p


def _cmd_sample(args):
    p = _density(args)
    header = {
        "generator": "philox counter-based, keyed by (seed, sample_index)",
        "seed": args.seed,
        "n": args.n,
        "p": f"{p:.12g}",
        "count": args.count,
        "kind": "three" if args.three else "two",
    }
    if args.three:
        rows, u = sampling.sample_three_with_scp_batch(args.n, p, args.seed, args.count)
        strings = [
            f"{line} {pos}"
            for line, pos in zip(
                [(r + ord("0")).tobytes().decode() for r in rows], u.tolist()
            )
        ]
        header["columns"] = "string u_position"
    else:
        rows = sampling.sample_two_batch(args.n, p, args.seed, args.count)
        strings = [(r + ord("0")).tobytes().decode() for r in rows]
    if args.out:
        sampling.write_strings(args.out, strings, header)
        return {"written": args.out, "count": args.count}
    return {"header": header, "samples": strings}


def _cmd_enumerate(args):
    law = experiments.exact_excess_distribution(args.n, args.p)
    return {
        "n": law.n,
        "p": law.p,
        "excess": {f"P(E={k})": v for k, v in law.excess.items()},
        "t_three": {str(k): v for k, v in law.t_three.items()},
        "t_two": {str(k): v for k, v in law.t_two.items()},
    }


def _experiment_config(args, mode=None):
    scaling = "fixed"
    if args.lam is not None:
        scaling = "critical_plus" if args.convention == "plus" else "critical_minus"
    return experiments.ExperimentConfig(
        n=args.n,
        samples=args.samples,
        master_seed=args.seed,
        p=args.p,
        scaling=scaling,
        lam=args.lam or 0.0,
        mode=mode or getattr(args, "mode", "predicate"),
    )


def _cmd_mc_t2(args):
    cfg = _experiment_config(args)
    res = experiments.run_stabilization_experiment(cfg, workers=args.threads)
    result = {
        "estimates": res.estimates,
        "stderr": res.stderr,
        "ks": res.ks,
        "reference": res.reference,
        "wall_seconds": res.wall_seconds,
    }
    if args.samples_out:
        with open(args.samples_out, "w") as fh:
            fh.write("value\n")
            for v in res.samples:
                fh.write(f"{v:.12g}\n")
        result["samples_out"] = args.samples_out
    return result


def _cmd_mc_excess(args):
    cfg = _experiment_config(args)
    res = experiments.run_excess_experiment(cfg, workers=args.threads)
    return {
        "estimates": res.estimates,
        "stderr": res.stderr,
        "wall_seconds": res.wall_seconds,
    }


def _cmd_rw(args):
    w = walk.WalkParams(args.p)
    result = {}
    if args.pmf_max is not None:
        table = walk.hitting_pmf_array(w, args.pmf_max)
        result["pmf"] = {str(2 * k + 1): float(v) for k, v in enumerate(table)}
    if args.tail is not None:
        result["tail"] = walk.hitting_tail(w, args.tail)
        result["conditional_hit_probability"] = walk.conditional_hit_probability(w, args.tail)
        result["conditional_hit_expectation"] = walk.conditional_hit_expectation(w, args.tail)
    if args.gf is not None:
        result["gf"] = walk.hitting_gf(w, args.gf)
    if args.escape:
        result["escape_probability"] = walk.escape_probability(w)
    if args.excursion_horizon is not None:
        if args.seed is None:
            raise ValueError("--excursion-horizon needs --seed")
        rec = walk.simulate_excursion_chain(w, args.excursion_horizon, args.seed)
        result["excursion"] = {
            "tau": list(rec.tau),
            "indicators": list(rec.indicators),
            "N": rec.N,
            "total": rec.total,
        }
    if not result:
        raise ValueError("rw: nothing requested; pass --pmf-max/--tail/--gf/--escape/--excursion-horizon")
    return result


def _cmd_brownian_ref(args):
    out = reference.simulate_brownian_functional(
        args.lam, args.kind, args.paths, args.steps, args.seed
    )
    if args.kind == "argmax_expectation":
        return {"estimate": float(out)}
    result = {"mean": float(out.mean()), "paths": args.paths}
    result["ks_vs_chi3_half"] = reference.ks_statistic(out, reference.chi3_half_cdf)
    if args.samples_out:
        with open(args.samples_out, "w") as fh:
            fh.write("value\n")
            for v in out:
                fh.write(f"{v:.12g}\n")
        result["samples_out"] = args.samples_out
    return result


def _cmd_mk_gap(args):
    return experiments.estimate_mk_gap(
        args.n, args.samples, args.seed, p=args.p, lam=args.lam
    )


def _add_density_flags(sub, require_n=True):
    if require_n:
        sub.add_argument("--n", type=int)
    sub.add_argument("--p", type=float, default=None)
    sub.add_argument("--lam", type=float, default=None)
    sub.add_argument("--convention", choices=("plus", "minus"), default="minus")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trisort",
        description="Parallel sorting dynamics on {0,1,2}-strings: "
        "simulation, landmarks and limit-law experiments.",
    )
    parser.add_argument("--config", default=None, help="key=value file of defaults; flags win")
    parser.add_argument("--output", default=None, help="write the JSON artifact here")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker bound; results do not depend on it")
    # the same flags are accepted after the subcommand; SUPPRESS keeps a
    # subcommand-level absence from clobbering a value given up front
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser(parents=[common], name="evolve", help="apply parallel update steps")
    s.add_argument("--input-string")
    s.add_argument("--three", action="store_true", help="three-type dynamics (default two-type)")
    s.add_argument("--steps", type=int, default=1)
    s.set_defaults(func=_cmd_evolve, required_opts=("input_string",))

    s = sub.add_parser(parents=[common], name="stabilize", help="run to the fixed point")
    s.add_argument("--input-string")
    s.add_argument("--three", action="store_true")
    s.add_argument("--trajectory", action="store_true")
    s.set_defaults(func=_cmd_stabilize, required_opts=("input_string",))

    s = sub.add_parser(parents=[common], name="landmarks", help="L, R, U, K and the maximum chain")
    s.add_argument("--input-string")
    s.set_defaults(func=_cmd_landmarks, required_opts=("input_string",))

    s = sub.add_parser(parents=[common], name="sample", help="draw random initial conditions")
    _add_density_flags(s)
    s.add_argument("--seed", type=int)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--three", action="store_true")
    s.add_argument("--out", default=None, help="line-oriented output file")
    s.set_defaults(func=_cmd_sample, required_opts=("n", "seed"))

    s = sub.add_parser(parents=[common], name="enumerate", help="exact laws by full enumeration (n <= 14)")
    s.add_argument("--n", type=int)
    s.add_argument("--p", type=float)
    s.set_defaults(func=_cmd_enumerate, required_opts=("n", "p"))

    s = sub.add_parser(parents=[common], name="mc-t2", help="Monte Carlo normalized stabilization times")
    _add_density_flags(s)
    s.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--samples-out", default=None, help="CSV of normalized samples")
    s.set_defaults(func=_cmd_mc_t2, required_opts=("n", "samples", "seed"))

    s = sub.add_parser(parents=[common], name="mc-excess", help="Monte Carlo excess probabilities")
    _add_density_flags(s)
    s.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--mode", choices=("predicate", "simulate", "both"), default="predicate")
    s.set_defaults(func=_cmd_mc_excess, required_opts=("n", "samples", "seed"))

    s = sub.add_parser(parents=[common], name="rw", help="first-passage laws of the biased walk")
    s.add_argument("--p", type=float)
    s.add_argument("--pmf-max", type=int, default=None, help="tabulate pmf up to this k")
    s.add_argument("--tail", type=int, default=None, help="tail and conditional laws at this m")
    s.add_argument("--gf", type=float, default=None, help="generating function at this s")
    s.add_argument("--escape", action="store_true")
    s.add_argument("--excursion-horizon", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=_cmd_rw, required_opts=("p",))

    s = sub.add_parser(parents=[common], name="brownian-ref", help="simulated Brownian reference laws")
    s.add_argument("--lam", type=float)
    s.add_argument("--kind", choices=("max_minus_half", "argmax_expectation"))
    s.add_argument("--paths", type=int, default=10**4)
    s.add_argument("--steps", type=int, default=10**4)
    s.add_argument("--seed", type=int)
    s.add_argument("--samples-out", default=None)
    s.set_defaults(func=_cmd_brownian_ref, required_opts=("lam", "kind", "seed"))

    s = sub.add_parser(parents=[common], name="mk-gap", help="Monte Carlo estimate of the landmark gap M - K")
    _add_density_flags(s)
    s.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=_cmd_mk_gap, required_opts=("n", "samples", "seed"))

    return parser


def _apply_config(args, argv):
    """Fill argparse values from a key=value file; explicit flags win."""
    if not args.config:
        return
    given = {tok.split("=", 1)[0] for tok in argv if tok.startswith("--")}
    with open(args.config) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if "--" + key in given:
                continue
            dest = key.replace("-", "_")
            if not hasattr(args, dest):
                raise ValueError(f"unknown config key {key!r}")
            current = getattr(args, dest)
            if isinstance(current, bool):
                value = value.lower() in ("1", "true", "yes")
            elif isinstance(current, int):
                value = int(value)
            elif isinstance(current, float):
                value = float(value)
            elif current is None:
                for cast in (int, float):
                    try:
                        value = cast(value)
                        break
                    except ValueError:
                        continue
            setattr(args, dest, value)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, argv)
        for dest in getattr(args, "required_opts", ()):
            if getattr(args, dest) is None:
                raise ValueError(f"missing required option --{dest.replace('_', '-')}")
        result = args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        json.dump({"error": str(exc), "schema_version": SCHEMA_VERSION}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    except AssertionError as exc:
        json.dump(
            {"error": f"internal assertion failed: {exc}", "schema_version": SCHEMA_VERSION},
            sys.stderr,
        )
        sys.stderr.write("\n")
        return 2
    _write_artifact(args.output, _payload(args, result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
