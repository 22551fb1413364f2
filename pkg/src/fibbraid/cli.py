"""Command-line entry point: ``fibbraid <command> [options]``.

Every command prints a JSON envelope (or a plain table / CSV when asked).
Exit codes: 0 success, 1 verification failure, 2 usage error, 3 search
budget exhausted without meeting ``--max-error``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, blocks, cftchars, checks, interferometry
from .braidrep import BASIS_KINDS, MAX_STRANDS, generators
from .fusion import Label, count_paths, path_str, register_label
from .gatesynth import (EXACT, PHASE_MODES, STANDARD_GATES, BraidWord, GateTarget, distance,
                        evaluate, leakage, search)
from .serialize import dumps, matrix_from_json, matrix_to_json

SCHEMA_VERSION = "1"


class UsageError(Exception):
    pass


def _envelope(command, payload, elapsed_ms=0):
    return {"schema_version": SCHEMA_VERSION, "command": command, "payload": payload,
            "elapsed_ms": int(elapsed_ms)}


def _charge(text):
    lab = Label.parse(text)
    if lab not in (Label.I, Label.eps):
        raise argparse.ArgumentTypeError("charge must be I or eps")
    return lab


def _fmt_c(z: complex) -> str:
    re, im = z.real, z.imag
    re = 0.0 if abs(re) < 5e-13 else re
    im = 0.0 if abs(im) < 5e-13 else im
    return f"{re:+.6f}{im:+.6f}i"


def _matrix_table(m, labels) -> str:
    width = max([len(x) for x in labels] + [4])
    head = " " * width + "  " + "  ".join(f"{x:>21s}" for x in labels)
    lines = [head]
    for lab, row in zip(labels, m):
        lines.append(f"{lab:>{width}s}  " + "  ".join(f"{_fmt_c(v):>21s}" for v in row))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands

def cmd_gens(args):
    if not 1 <= args.n <= MAX_STRANDS:
        raise UsageError(f"--n must be between 1 and {MAX_STRANDS}")
    if args.n < 2:
        raise UsageError("--n must be at least 2 for a generator to exist")
    if count_paths(args.n, args.charge) == 0:
        raise UsageError(f"no fusion paths for n={args.n} with charge {args.charge}")
    gens = generators(args.n, args.charge, kind=args.basis)
    if args.format == "table":
        labels = [register_label(p) if args.charge is Label.I else path_str(p)
                  for p in gens[0].basis]
        out = []
        for i, g in enumerate(gens, 1):
            out.append(f"B{i}^({args.n})")
            out.append(_matrix_table(g.matrix, labels))
        return "\n".join(out), 0
    payload = {"n": args.n, "charge": str(args.charge), "basis_kind": args.basis,
               "basis": [path_str(p) for p in gens[0].basis],
               "labels": [register_label(p) for p in gens[0].basis],
               "generators": [{"index": i, **matrix_to_json(g.matrix)}
                              for i, g in enumerate(gens, 1)]}
    return payload, 0


def cmd_verify(args):
    rows = checks.run(args.suite, args.n)
    summ = checks.summary(rows)
    code = 0 if summ["ok"] else 1
    if args.format == "table":
        lines = [f"{'status':8s} {'suite':15s} {'check':50s} {'value':>24s}  bound"]
        for r in rows:
            v = r["value"]
            v = f"{v:.6e}" if isinstance(v, float) else str(v)
            b = r["bound"]
            b = f"{b:.3e}" if isinstance(b, float) else str(b)
            lines.append(f"{r['status']:8s} {r['suite']:15s} {r['check'][:50]:50s} {v:>24s}  {b}"
                         + (f"  # {r['note']}" if r["note"] else ""))
        lines.append(f"pass={summ['pass']} erratum={summ['erratum']} fail={summ['fail']}")
        return "\n".join(lines), code
    return {"suite": args.suite, "rows": rows, "summary": summ}, code


def _target(args) -> GateTarget:
    if args.matrix_file:
        obj = json.loads(Path(args.matrix_file).read_text())
        m, _ = matrix_from_json(obj)
        return GateTarget(Path(args.matrix_file).stem, m, args.phase_mode)
    if args.target not in STANDARD_GATES:
        raise UsageError(f"unknown target {args.target!r}; known: {', '.join(STANDARD_GATES)}")
    return GateTarget(args.target, STANDARD_GATES[args.target], args.phase_mode)


def cmd_eval(args):
    word = BraidWord.parse(args.word, args.n)
    u = evaluate(word, args.charge)
    payload = {"word": str(word), "n": args.n, "charge": str(args.charge),
               "factors": len(word), "weave_count": word.weave_count,
               "labels": u.labels if args.charge is Label.I else [path_str(p) for p in u.basis],
               "matrix": matrix_to_json(u.matrix, u.basis)}
    if args.target:
        t = STANDARD_GATES.get(args.target)
        if t is None:
            raise UsageError(f"unknown target {args.target!r}")
        block = u.matrix[:t.shape[0], :t.shape[0]]
        payload["target"] = args.target
        payload["phase_mode"] = args.phase_mode
        payload["distance"] = distance(block, t, args.phase_mode)
    return payload, 0


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("FIBBRAID_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError("FIBBRAID_THREADS must be an integer") from None
    return 1


def cmd_compile(args):
    target = _target(args)
    gens = tuple(int(x) for x in args.generators.split(","))
    res = search(target, args.max_weaves, args.method, gens, args.n, args.max_exponent,
                 args.max_error, _threads(args))
    payload = res.to_dict()
    if args.trace_csv:
        lines = ["evaluated,distance,word"] + [f"{c},{d:.17g},{w}" for c, d, w in res.trace]
        Path(args.trace_csv).write_text("\n".join(lines) + "\n")
        payload["trace_csv"] = args.trace_csv
    if args.plot:
        from .plotting import plot_trace
        payload["plot"] = plot_trace(res.trace or [(1, res.distance, "")], args.plot)
    return payload, (0 if res.met else 3)


def cmd_leakage(args):
    n = 2 * args.qubits + 2
    word = BraidWord.parse(args.word, n)
    return {"word": str(word), "qubits": args.qubits, "strands": n,
            "leakage": leakage(word, args.qubits)}, 0


def cmd_interfere(args):
    inner = [Label.parse(x) for x in args.inner.split(",")]
    probe = Label.parse(args.probe)
    rows = interferometry.sweep(inner, complex(args.t1), complex(args.t2), probe, args.points)
    extra = {}
    if args.plot:
        from .plotting import plot_sweep
        extra["plot"] = plot_sweep(rows, args.plot)
    if args.format == "csv":
        return interferometry.sweep_csv(rows).rstrip("\n"), 0
    vis = {str(lab): interferometry.visibility(lab, probe, abs(complex(args.t1))) for lab in inner}
    return {"probe": str(probe), "t1": [complex(args.t1).real, complex(args.t1).imag],
            "t2": [complex(args.t2).real, complex(args.t2).imag],
            "monodromy": {str(lab): interferometry.monodromy(probe, lab) for lab in inner},
            "visibility": vis, "rows": rows, **extra}, 0


def cmd_init_sim(args):
    rng = np.random.default_rng(args.seed)
    runs = []
    for _ in range(args.runs):
        states, stats = interferometry.initialize_register(args.qubits, rng, args.max_trials)
        runs.append(interferometry.transcript(states, stats))
    totals = [r["stats"]["total_trials"] for r in runs]
    antidots = 2 * args.qubits + 2
    payload = {"qubits": args.qubits, "antidots": antidots, "seed": args.seed,
               "runs": args.runs, "p_eps": interferometry.P_EPS,
               "mean_total_trials": float(np.mean(totals)),
               "expected_total_trials": antidots / interferometry.P_EPS}
    if args.transcripts:
        payload["transcripts"] = runs
    return payload, 0


def cmd_chars(args):
    if args.full:
        l, rho = args.full
        series = cftchars.full_character(l, rho, args.order)
        head = {"kind": "full", "l": l, "rho": rho, "summands": cftchars.summands(l, rho)}
    elif args.k is not None:
        series = cftchars.k_function(args.k, 15, args.order)
        head = {"kind": "u1", "l": args.k, "m": 15}
    else:
        if args.sector:
            lab = Label.parse(args.sector)
            w = cftchars.CosetWeight(*lab.weight)
            sigma, q = w.sigma, w.Q
        else:
            sigma, q = args.sigma, args.Q
        series = cftchars.parafermion_char(sigma, q, args.order)
        head = {"kind": "parafermion", "sigma": sigma, "Q": q}
    if args.format == "table":
        lines = [f"{'exponent':>12s} {'y_power':>10s} {'coefficient':>12s}"]
        lines += [f"{r['exponent']:>12s} {r['y_power']:>10s} {r['coefficient']:>12d}"
                  for r in series.rows()]
        return "\n".join(lines), 0
    return {**head, "order": args.order, "leading_exponent": str(series.leading_exponent),
            "cutoff": str(series.cutoff), "terms": series.rows()}, 0


def cmd_blocks(args):
    if args.check:
        return blocks.braid_consistency_check(args.steps), 0
    around = args.around if args.around == "inf" else int(args.around)
    res = blocks.monodromy_matrix(around, complex(args.base), radius=args.radius,
                                  steps=args.steps)
    m = res.matrix
    ev = np.linalg.eigvals(m)
    return {"around": args.around, "base": [complex(args.base).real, complex(args.base).imag],
            "radius": res.path.radius, "steps": res.steps, "residual": res.residual,
            "matrix": matrix_to_json(m),
            "eigenphases_over_pi": sorted(float(np.angle(x) / np.pi) for x in ev)}, 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = argparse.ArgumentParser(prog="fibbraid", formatter_class=fmt,
                                description="Fibonacci-anyon braids, gates and CFT checks.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--timing", action="store_true",
                   help="record wall time in elapsed_ms (output is then not reproducible)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gens", help="braid generators", formatter_class=fmt)
    s.add_argument("--n", type=int, default=4, help="number of anyons")
    s.add_argument("--charge", type=_charge, default=Label.I, help="total charge, I or eps")
    s.add_argument("--basis", choices=BASIS_KINDS, default="canonical", help="path ordering")
    s.add_argument("--format", choices=("json", "table"), default="json")
    s.set_defaults(func=cmd_gens)

    s = sub.add_parser("verify", help="run verification suites", formatter_class=fmt)
    s.add_argument("--suite", choices=("all",) + checks.SUITES, default="all")
    s.add_argument("--n", type=int, nargs="+", default=None, help="strand counts for artin")
    s.add_argument("--format", choices=("json", "table"), default="json")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("eval", help="evaluate a braid word", formatter_class=fmt)
    s.add_argument("--word", required=True, help="e.g. 'B1^4 B2^-2 B1^2'")
    s.add_argument("--n", type=int, default=4, help="number of anyons")
    s.add_argument("--charge", type=_charge, default=Label.I)
    s.add_argument("--target", default=None, help="standard gate to compare against")
    s.add_argument("--phase-mode", choices=PHASE_MODES, default=EXACT)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("compile", help="search for a braid word", formatter_class=fmt)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--target", default="identity", help="standard gate name")
    g.add_argument("--matrix-file", default=None, help="JSON matrix of [re, im] rows")
    s.add_argument("--phase-mode", choices=PHASE_MODES, default=EXACT)
    s.add_argument("--max-weaves", type=int, default=10, help="total |exponent| budget")
    s.add_argument("--max-exponent", type=int, default=5, help="largest |exponent| per factor")
    s.add_argument("--method", choices=("exhaustive", "meet_in_middle"), default="exhaustive")
    s.add_argument("--generators", default="1,2", help="comma-separated generator indices")
    s.add_argument("--n", type=int, default=4, help="number of anyons")
    s.add_argument("--max-error", type=float, default=None, help="exit 3 if not met")
    s.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: FIBBRAID_THREADS or 1)")
    s.add_argument("--trace-csv", default=None, help="write the improvement trace as CSV")
    s.add_argument("--plot", default=None, help="write a PNG of the trace (needs matplotlib)")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("leakage", help="leakage of a word out of the qubit space",
                       formatter_class=fmt)
    s.add_argument("--word", required=True)
    s.add_argument("--qubits", type=int, default=2)
    s.set_defaults(func=cmd_leakage)

    s = sub.add_parser("interfere", help="Fabry-Perot sweep over the Abelian phase",
                       formatter_class=fmt)
    s.add_argument("--t1", default="0.5", help="tunneling amplitude (complex literal allowed)")
    s.add_argument("--t2", default="0.5")
    s.add_argument("--inner", default="I,eps", help="enclosed charges")
    s.add_argument("--probe", default="sigma1", help="sigma1 or sigma2")
    s.add_argument("--points", type=int, default=73)
    s.add_argument("--format", choices=("json", "csv"), default="csv")
    s.add_argument("--plot", default=None, help="write a PNG of the sweep (needs matplotlib)")
    s.set_defaults(func=cmd_interfere)

    s = sub.add_parser("init-sim", help="simulate antidot initialization", formatter_class=fmt)
    s.add_argument("--qubits", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--max-trials", type=int, default=1000)
    s.add_argument("--transcripts", action="store_true", help="include per-antidot trial logs")
    s.set_defaults(func=cmd_init_sim)

    s = sub.add_parser("chars", help="truncated character q-series", formatter_class=fmt)
    s.add_argument("--sector", default=None, help="field name, e.g. eps")
    s.add_argument("--sigma", type=int, default=0)
    s.add_argument("--Q", type=int, default=0)
    s.add_argument("--k", type=int, default=None, help="u(1) label l of K_l(.;15)")
    s.add_argument("--full", type=int, nargs=2, metavar=("L", "RHO"), default=None)
    s.add_argument("--order", type=int, default=10, help="window above the leading power")
    s.add_argument("--format", choices=("json", "table"), default="json")
    s.set_defaults(func=cmd_chars)

    s = sub.add_parser("blocks", help="monodromy of the reduced blocks", formatter_class=fmt)
    s.add_argument("--around", choices=("0", "1", "inf"), default="0")
    s.add_argument("--base", default="0.5", help="base point eta")
    s.add_argument("--radius", type=float, default=None, help="loop radius")
    s.add_argument("--steps", type=int, default=96, help="points per circle")
    s.add_argument("--check", action="store_true", help="run the braid consistency report")
    s.set_defaults(func=cmd_blocks)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        payload, code = args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"fibbraid {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except blocks.ContinuationError as exc:
        print(f"fibbraid {args.command}: continuation failed: {exc}", file=sys.stderr)
        return 1
    if isinstance(payload, str):
        print(payload)
        return code
    elapsed = (time.perf_counter() - start) * 1000 if args.timing else 0
    print(dumps(_envelope(args.command, payload, elapsed)))
    return code


if __name__ == "__main__":
    sys.exit(main())
