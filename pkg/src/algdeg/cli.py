"""Command-line interface: ``algdeg analyze|induce|degseq|predict|verify|dyndeg``.

Reports are JSON on stdout.  Exit codes: 0 success, 1 usage or input
error, 2 computation error, 3 verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from contextlib import contextmanager

from . import __version__
from .algebra import Algebra, AlgebraProfile, nilradical_and_m, profile
from .degrees import (
    DEFAULT_C_MAX, DEFAULT_EPS, DEFAULT_MIN_LEN, DEFAULT_TERM_BUDGET, DegreeSequence, Status,
    asymptotic_check, brute_force_degrees, dynamical_degree, theorem_a_predict, theorem_b_predict,
)
from .errors import AlgdegError, ParseError
from .exactnum import format_scalar
from .induced import MonomialSpec, induce_monomial, induce_univariate
from .parsing import algebra_to_doc, parse_algebra, parse_matrix, parse_ratfunc

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; this interface reserves 2 for computation errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_source(value: str) -> str:
    if value == "-":
        return sys.stdin.read()
    if value.startswith("@"):
        try:
            with open(value[1:], encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {value[1:]}: {exc.strerror}") from None
    return value


def _fmt_float(x: float) -> str:
    return f"{x:.6f}"


def _seq_doc(seq: DegreeSequence) -> dict:
    doc = {
        "p": seq.p,
        "provenance": seq.provenance.value,
        "values": [str(v) for v in seq.values],
        "truncated": seq.truncated,
    }
    rate = seq.growth_rate()
    doc["growth_rate"] = None if rate is None else _fmt_float(rate)
    return doc


def _profile_doc(prof: AlgebraProfile) -> dict:
    coords = lambda x: [format_scalar(c) for c in x.coords]  # noqa: E731
    return {
        "flags": prof.flags.as_dict(),
        "unit": None if prof.unit is None else coords(prof.unit),
        "nilradical_basis": None if prof.nilradical_basis is None else [coords(b) for b in prof.nilradical_basis],
        "reduced_dim": prof.reduced_dim,
        "generic_delta": prof.generic_delta,
        "generic_k": prof.generic_k,
        "genericity": {"method": "sampled", "seed": prof.seed, "samples": prof.samples},
        "dim2_type": None if prof.dim2_type is None else prof.dim2_type.value,
    }


class _Timer:
    def __init__(self):
        self.items: dict[str, str] = {}

    @contextmanager
    def __call__(self, name: str):
        start = time.perf_counter()
        yield
        self.items[name] = f"{time.perf_counter() - start:.6f}"


def _load_inputs(args) -> tuple[Algebra, dict]:
    inputs = {"algebra": args.algebra}
    text = _read_source(args.algebra)
    if args.algebra == "-" or args.algebra.startswith("@"):
        inputs["algebra_text"] = text
    V = parse_algebra(text)
    return V, inputs


def _map_choice(args, V: Algebra, inputs: dict):
    """Returns (kind, object, map) for --phi or --monomial."""
    if getattr(args, "phi", None) is not None:
        phi = parse_ratfunc(args.phi)
        inputs["phi"] = args.phi
        return "phi", phi, induce_univariate(V, phi)
    A = parse_matrix(args.monomial)
    inputs["monomial"] = args.monomial
    spec = MonomialSpec(A, V)
    return "monomial", spec, induce_monomial(spec)


def _map_names(V: Algebra, kind: str, obj) -> list[str]:
    if kind == "phi":
        return [f"l{i}" for i in range(V.dim)]
    return [f"x{j + 1}_{i}" for j in range(obj.d) for i in range(V.dim)]


def _predict(kind: str, obj, V: Algebra, p: int, n: int, seed: int, samples: int):
    if kind == "phi":
        prof = profile(V, seed=seed, samples=samples)
        if prof.generic_k is None:
            raise AlgdegError("the algebra is not unital and power-associative")
        return theorem_a_predict(prof.generic_k, obj.degree, p, n), prof
    _, m = nilradical_and_m(V)
    prof = profile(V, seed=seed, samples=samples)
    return theorem_b_predict(obj.matrix, V.dim, m, p, n), prof


def _exact_shift(measured: DegreeSequence, kind: str, obj, V: Algebra, p: int, max_shift: int = 3):
    """Smallest ``s`` with ``measured[n] == prediction[n + s]`` for every ``n``, if any."""
    if kind != "monomial":
        return None
    _, m = nilradical_and_m(V)
    longer = theorem_b_predict(obj.matrix, V.dim, m, p, len(measured) + max_shift).values
    for s in range(max_shift + 1):
        if all(a == longer[n + s] for n, a in enumerate(measured.values)):
            return s
    return None


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_analyze(args, timer) -> tuple[dict, int]:
    V, inputs = _load_inputs(args)
    inputs.update(seed=args.seed, samples=args.samples)
    with timer("profile"):
        prof = profile(V, seed=args.seed, samples=args.samples)
    return {"inputs": inputs, "algebra": algebra_to_doc(V), "profile": _profile_doc(prof)}, EXIT_OK


def cmd_induce(args, timer) -> tuple[dict, int]:
    V, inputs = _load_inputs(args)
    with timer("induce"):
        kind, obj, f = _map_choice(args, V, inputs)
    names = _map_names(V, kind, obj)
    return {"inputs": inputs, "map": {"variables": names, "coordinates": f.format(names)}}, EXIT_OK


def cmd_degseq(args, timer) -> tuple[dict, int]:
    V, inputs = _load_inputs(args)
    inputs.update(iters=args.iters, budget=args.budget)
    kind, obj, f = _map_choice(args, V, inputs)
    with timer("brute_force"):
        seq = brute_force_degrees(f, args.iters, args.budget)
    return {"inputs": inputs, "measurements": {"brute_force": _seq_doc(seq)}}, EXIT_OK


def cmd_predict(args, timer) -> tuple[dict, int]:
    V, inputs = _load_inputs(args)
    inputs.update(p=args.p, iters=args.iters, seed=args.seed, samples=args.samples)
    kind, obj, _ = _map_choice(args, V, inputs)
    with timer("predict"):
        seq, prof = _predict(kind, obj, V, args.p, args.iters, args.seed, args.samples)
    return {
        "inputs": inputs,
        "profile": _profile_doc(prof),
        "predictions": {seq.provenance.value: _seq_doc(seq)},
    }, EXIT_OK


def cmd_verify(args, timer) -> tuple[dict, int]:
    V, inputs = _load_inputs(args)
    inputs.update(p=1, iters=args.iters, seed=args.seed, samples=args.samples, budget=args.budget,
                  c_max=str(args.c_max), eps=str(args.eps))
    kind, obj, f = _map_choice(args, V, inputs)
    with timer("brute_force"):
        measured = brute_force_degrees(f, args.iters, args.budget)
    with timer("predict"):
        predicted, prof = _predict(kind, obj, V, 1, args.iters, args.seed, args.samples)
    predicted = predicted.prefix(len(measured))
    if len(measured) < 2:
        raise AlgdegError("fewer than two iterates were computed")
    verdict = asymptotic_check(measured, predicted, args.c_max, args.eps, DEFAULT_MIN_LEN)
    report = {
        "inputs": inputs,
        "profile": _profile_doc(prof),
        "predictions": {predicted.provenance.value: _seq_doc(predicted)},
        "measurements": {"brute_force": _seq_doc(measured)},
        "verdicts": {"asymptotic": verdict.as_dict()},
    }
    shift = _exact_shift(measured, kind, obj, V, 1)
    if kind == "monomial":
        report["verdicts"]["exact_index_shift"] = shift
    return report, EXIT_OK if verdict.status is Status.PASS else EXIT_VERIFY


def cmd_dyndeg(args, timer) -> tuple[dict, int]:
    V, inputs = _load_inputs(args)
    A = parse_matrix(args.monomial)
    inputs.update(monomial=args.monomial, p=args.p)
    MonomialSpec(A, V)
    _, m = nilradical_and_m(V)
    with timer("dyndeg"):
        lam = dynamical_degree(A, m, V.dim, args.p)
    return {
        "inputs": inputs,
        "parameters": {"d": A.nrows, "k_dim": V.dim, "m": m, "p": args.p},
        "dynamical_degree": _fmt_float(lam),
    }, EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="algdeg", description="Degree growth of maps induced by finite-dimensional algebras.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, seed=False):
        p.add_argument("--algebra", required=True,
                       help='presentation ("Q[t]/(t^2)", "C^2", "Mat(2)", "A x B"), JSON document, @file or - for stdin')
        p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
        if seed:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--samples", type=_positive, default=16)

    def map_args(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--phi", help='univariate rational function, e.g. "(t^2+1)/(t-2)"')
        g.add_argument("--monomial", help='integer exponent matrix, e.g. "[[2,1],[1,1]]"')

    p = sub.add_parser("analyze", help="algebra profile")
    common(p, seed=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("induce", help="print the induced map")
    common(p)
    map_args(p)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("degseq", help="brute-force degree sequence (p = 1)")
    common(p)
    map_args(p)
    p.add_argument("--iters", type=_positive, required=True)
    p.add_argument("--budget", type=_positive, default=DEFAULT_TERM_BUDGET, help="term cap per iterate")
    p.set_defaults(func=cmd_degseq)

    p = sub.add_parser("predict", help="predicted degree growth")
    common(p, seed=True)
    map_args(p)
    p.add_argument("--p", type=_nonneg, required=True)
    p.add_argument("--iters", type=_positive, required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("verify", help="compare brute force with the prediction (p = 1)")
    common(p, seed=True)
    map_args(p)
    p.add_argument("--iters", type=_positive, required=True)
    p.add_argument("--p", type=int, default=1, choices=[1], help="only p = 1 can be measured")
    p.add_argument("--budget", type=_positive, default=DEFAULT_TERM_BUDGET)
    p.add_argument("--c-max", type=float, default=DEFAULT_C_MAX)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dyndeg", help="dynamical degree of a generalized monomial map")
    common(p)
    p.add_argument("--monomial", required=True)
    p.add_argument("--p", type=_nonneg, required=True)
    p.set_defaults(func=cmd_dyndeg)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    timer = _Timer()
    try:
        body, code = args.func(args, timer)
    except (UsageError, ParseError) as exc:
        print(f"algdeg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AlgdegError as exc:
        print(f"algdeg: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, **body}
    report["timings"] = timer.items if args.timings else None
    json.dump(report, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
