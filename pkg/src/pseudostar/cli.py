"""Command-line front end.

Every command prints one JSON report::

    {"command": ..., "input_digest": ..., "prime": ..., "seed": ...,
     "result": ..., "timings": {...}}

Exit status: 0 on success, 2 when the answer is "none found" (no
pseudo-star certificate), 1 on input or computation errors, 64 on usage
errors.  ``timings`` stays empty unless ``--timings`` is given, so repeated
runs produce identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import acmcheck, configs, ideals, verification
from .exactalg import SECOND_PRIME, check_prime, default_prime
from .fileformat import ArrangementFile, parse_file, serialize, serialize_family
from .geometry import general_section

EXIT_OK, EXIT_ERROR, EXIT_NOT_FOUND, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _digest(data: str) -> str:
    return "sha256:" + hashlib.sha256(data.encode()).hexdigest()


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


class _Timer:
    def __init__(self):
        self.marks: dict[str, float] = {}

    def run(self, label, fn, *args, **kwargs):
        start = time.perf_counter()
        out = fn(*args, **kwargs)
        self.marks[label] = round(time.perf_counter() - start, 6)
        return out


# -- commands on an arrangement file ---------------------------------------

def _cmd_alpha(f: ArrangementFile, args, timer):
    return {"m": args.m, "alpha": timer.run("alpha", ideals.alpha, f.arrangement, args.m)}, EXIT_OK


def _cmd_sequence(f, args, timer):
    seq = timer.run("sequence", ideals.initial_sequence, f.arrangement, args.m_max)
    return {"m_max": args.m_max, "values": seq.as_list()}, EXIT_OK


def _cmd_hilbert(f, args, timer):
    table = timer.run("hilbert", ideals.hilbert_table, f.arrangement, args.m, args.t_max)
    return {"t_max": args.t_max, **table.as_dict()}, EXIT_OK


def _cmd_classify(f, args, timer):
    cls = timer.run("classify", configs.classify, f.arrangement)
    return cls.as_dict(), EXIT_OK


def _cmd_recognize(f, args, timer):
    cert = timer.run("recognize", configs.recognize_pseudo_star, f.arrangement)
    if cert is None:
        return {"certificate": None}, EXIT_NOT_FOUND
    return {"certificate": cert.as_dict()}, EXIT_OK


def _cmd_section(f, args, timer):
    rng = np.random.default_rng(args.seed)
    section, H = timer.run("section", general_section, f.arrangement, rng)
    return {"hyperplane": list(H.coefficients), "arrangement": serialize(section)}, EXIT_OK


def _cmd_acm(f, args, timer):
    rng = np.random.default_rng(args.seed)
    report = timer.run("acm", acmcheck.acm_indicator, f.arrangement, args.t_max, rng)
    return report.as_dict(), EXIT_OK


FILE_COMMANDS = {
    "alpha": _cmd_alpha,
    "sequence": _cmd_sequence,
    "hilbert": _cmd_hilbert,
    "classify": _cmd_classify,
    "recognize": _cmd_recognize,
    "section": _cmd_section,
    "acm-check": _cmd_acm,
}
# invariants of the arrangement, meaningful to recompute modulo another prime
PRIME_CHECKABLE = {"alpha", "sequence", "hilbert", "classify", "recognize"}


def _comparable(command: str, result: dict):
    if command in ("classify", "recognize"):
        cert = result.get("certificate")
        return result.get("tag"), result.get("d"), cert and cert["s"]
    return result


# -- generator commands -----------------------------------------------------

def _cmd_generate(args, prime, timer):
    rng = np.random.default_rng(args.seed)
    H = timer.run("generate", configs.random_family, args.N, args.s, args.kind, rng, prime)
    directive = ("pseudostar", args.c)
    return {
        "N": args.N,
        "s": args.s,
        "kind": args.kind,
        "hyperplanes": [list(f.coefficients) for f in H.forms],
        "file": serialize_family(H, directive, args.seed),
    }, EXIT_OK


def _cmd_verify(args, prime, timer):
    sweep = verification.SWEEPS[args.which]
    summary = timer.run(args.which, sweep, args.trials, args.seed, prime=prime)
    summary["which"] = args.which
    summary["passed"] = not summary["failures"]
    return summary, EXIT_OK if summary["passed"] else EXIT_ERROR


def _cmd_search(args, prime, timer):
    found = timer.run("search", acmcheck.search_non_acm_pseudo_star, args.N, args.s, args.trials, args.seed, prime)
    return {"N": args.N, "s": args.s, "trials": args.trials, "candidates": found}, EXIT_OK


GENERATOR_COMMANDS = {
    "generate": _cmd_generate,
    "verify": _cmd_verify,
    "search-nonacm": _cmd_search,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prime", type=int, help="working prime (default: file header, $PSEUDOSTAR_PRIME, 2147483647)")
    common.add_argument("--seed", type=int, help="random seed (default: file header or 0)")
    common.add_argument("--timings", action="store_true", help="record wall-clock timings in the report")
    common.add_argument("--indent", type=int, default=None, help="pretty-print the JSON report")

    def with_prime_check(p):
        p.add_argument(
            "--second-prime",
            nargs="?",
            const=SECOND_PRIME,
            type=int,
            help=f"recompute modulo a second prime and report agreement (default {SECOND_PRIME})",
        )
        return p

    parser = _Parser(prog="pseudostar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = with_prime_check(sub.add_parser("alpha", parents=[common], help="initial degree of a symbolic power"))
    p.add_argument("file")
    p.add_argument("--m", type=int, default=1)

    p = with_prime_check(sub.add_parser("sequence", parents=[common], help="initial sequence alpha_1..alpha_m"))
    p.add_argument("file")
    p.add_argument("--m-max", type=int, default=4)

    p = with_prime_check(sub.add_parser("hilbert", parents=[common], help="Hilbert function table"))
    p.add_argument("file")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--t-max", type=int, default=8)

    for name, text in [("classify", "hyperplane / pseudo-star / other"), ("recognize", "pseudo-star certificate")]:
        p = with_prime_check(sub.add_parser(name, parents=[common], help=text))
        p.add_argument("file")

    p = sub.add_parser("section", parents=[common], help="section by a random hyperplane")
    p.add_argument("file")

    p = sub.add_parser("acm-check", parents=[common], help="ACM necessary-condition indicator")
    p.add_argument("file")
    p.add_argument("--t-max", type=int)

    p = sub.add_parser("generate", parents=[common], help="random hyperplane family")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--kind", choices=["proper", "through_point"], default="proper")
    p.add_argument("--c", type=int, default=2)

    p = sub.add_parser("verify", parents=[common], help="seeded theorem sweeps")
    p.add_argument("which", choices=sorted(verification.SWEEPS))
    p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("search-nonacm", parents=[common], help="look for non-ACM pseudo-stars")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    return parser


def _validate(args) -> None:
    positive = {"m": 1, "m_max": 1, "trials": 1, "N": 1, "s": 2, "c": 1}
    for name, low in positive.items():
        value = getattr(args, name, None)
        if value is not None and value < low:
            raise UsageError(f"--{name.replace('_', '-')} must be at least {low}")
    for name in ("t_max", "seed"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            raise UsageError(f"--{name.replace('_', '-')} must be non-negative")


def run(argv: list[str]) -> tuple[int, dict | None, str | None]:
    """Execute a command; returns (exit code, report, error message)."""
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
    except UsageError as exc:
        return EXIT_USAGE, None, f"usage error: {exc}"

    timer = _Timer()
    try:
        if args.command in FILE_COMMANDS:
            text = _read(args.file)
            parsed = parse_file(text, args.prime)
            seed = args.seed if args.seed is not None else (parsed.seed or 0)
            args.seed = seed
            result, code = FILE_COMMANDS[args.command](parsed, args, timer)
            prime, digest = parsed.prime, _digest(text)
            q = getattr(args, "second_prime", None)
            if q is not None and args.command in PRIME_CHECKABLE:
                q = check_prime(q)
                other, _ = FILE_COMMANDS[args.command](parse_file(text, q), args, _Timer())
                result["second_prime"] = {
                    "prime": q,
                    "agrees": _comparable(args.command, other) == _comparable(args.command, result),
                }
        else:
            prime = check_prime(args.prime or default_prime())
            seed = args.seed if args.seed is not None else 0
            args.seed = seed
            digest = _digest(json.dumps({k: v for k, v in sorted(vars(args).items()) if k not in ("timings", "indent")}))
            result, code = GENERATOR_COMMANDS[args.command](args, prime, timer)
    except (OSError, ValueError, ArithmeticError, RuntimeError) as exc:
        return EXIT_ERROR, None, f"{type(exc).__name__}: {exc}"

    report = {
        "command": args.command,
        "input_digest": digest,
        "prime": prime,
        "seed": seed,
        "result": result,
        "timings": timer.marks if args.timings else {},
    }
    report["_indent"] = args.indent
    return code, report, None


def main(argv: list[str] | None = None) -> int:
    code, report, error = run(sys.argv[1:] if argv is None else argv)
    if error:
        print(error, file=sys.stderr)
        return code
    indent = report.pop("_indent", None)
    print(json.dumps(report, indent=indent, sort_keys=False))
    return code


if __name__ == "__main__":
    sys.exit(main())
