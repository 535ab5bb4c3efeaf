"""Line-oriented text format for arrangements.

::

    # comments run to end of line
    P 3 prime 2147483647 seed 7
    hyperplanes 4
    1 2 3 0
    1 1 0 1
    1 0 1 1
    0 1 1 1
    star 2              # or: pseudostar <c>; omit to keep s hyperplanes
    flat 2
    1 0 0 0
    0 1 0 0

Coefficient rows list x_0 .. x_N.  Integers are reduced modulo the prime.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactalg import check_prime, default_prime
from .geometry import (
    AllZeroForm,
    Arrangement,
    DependentForms,
    DuplicateFlat,
    Flat,
    LinearForm,
    flat_from_forms,
)


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidFlat(ValueError):
    pass


@dataclass
class ArrangementFile:
    ambient_dim: int
    prime: int
    seed: int | None
    arrangement: Arrangement
    families: list = field(default_factory=list)


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ints(lineno: int, words: list[str]) -> list[int]:
    try:
        return [int(w) for w in words]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {' '.join(words)!r}") from None


def _header(lineno: int, words: list[str]) -> tuple[int, int | None, int | None]:
    if words[0] != "P" or len(words) < 2:
        raise ParseError(lineno, "header must start with 'P <N>'")
    (N,) = _ints(lineno, words[1:2])
    if N < 1:
        raise ParseError(lineno, "ambient dimension must be positive")
    prime = seed = None
    rest = words[2:]
    if len(rest) % 2:
        raise ParseError(lineno, "header options come in 'key value' pairs")
    for key, value in zip(rest[::2], rest[1::2]):
        (v,) = _ints(lineno, [value])
        if key == "prime":
            prime = v
        elif key == "seed":
            if not 0 <= v < 2**64:
                raise ParseError(lineno, "seed must be an unsigned 64-bit integer")
            seed = v
        else:
            raise ParseError(lineno, f"unknown header option {key!r}")
    return N, prime, seed


def parse_file(text: str, prime: int | None = None) -> ArrangementFile:
    """Parse ``text``; ``prime`` overrides the header's prime if given."""
    from .configs import HyperplaneFamily, build_pseudo_star, build_star

    lines = list(_tokens(text))
    if not lines:
        raise ParseError(1, "empty input: missing 'P <N>' header")
    lineno, words = lines[0]
    N, header_prime, seed = _header(lineno, words)
    try:
        p = check_prime(prime or header_prime or default_prime())
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None

    flats: list[Flat] = []
    families = []
    pos = 1

    def take_rows(count: int, start_line: int) -> list[tuple[int, list[int]]]:
        nonlocal pos
        rows = []
        for _ in range(count):
            if pos >= len(lines):
                raise ParseError(start_line, f"block ends early: expected {count} rows")
            ln, ws = lines[pos]
            vals = _ints(ln, ws)
            if len(vals) != N + 1:
                raise ParseError(ln, f"expected {N + 1} coefficients, got {len(vals)}")
            rows.append((ln, vals))
            pos += 1
        return rows

    while pos < len(lines):
        ln, words = lines[pos]
        pos += 1
        if len(words) != 2 or words[0] not in ("flat", "hyperplanes"):
            raise ParseError(ln, f"expected 'flat <c>' or 'hyperplanes <s>', got {' '.join(words)!r}")
        (count,) = _ints(ln, words[1:])
        if count < 1:
            raise ParseError(ln, "block size must be positive")
        rows = take_rows(count, ln)
        if words[0] == "flat":
            if count > N:
                raise InvalidFlat(f"line {ln}: codimension {count} exceeds N = {N}")
            try:
                flats.append(flat_from_forms(N, [r for _, r in rows], p, strict=True))
            except (AllZeroForm, DependentForms) as exc:
                raise InvalidFlat(f"line {ln}: {exc}") from None
            continue
        try:
            forms = tuple(LinearForm(tuple(r), p) for _, r in rows)
        except AllZeroForm as exc:
            raise InvalidFlat(f"line {ln}: {exc}") from None
        family = HyperplaneFamily(N, forms, p)
        directive = None
        if pos < len(lines) and lines[pos][1][0] in ("star", "pseudostar"):
            dl, dw = lines[pos]
            pos += 1
            if len(dw) != 2:
                raise ParseError(dl, f"expected '{dw[0]} <c>'")
            (c,) = _ints(dl, dw[1:])
            directive = (dw[0], c)
        families.append((family, directive))
        if directive is None:
            flats.extend(Flat(N, (f,), p) for f in forms)
        elif directive[0] == "star":
            flats.extend(build_star(directive[1], family).flats)
        else:
            flats.extend(build_pseudo_star(directive[1], family).flats)

    if not flats:
        raise ParseError(lines[-1][0], "no flats defined")
    seen = set()
    for L in flats:
        if L in seen:
            raise DuplicateFlat(f"flat {L} appears twice")
        seen.add(L)
    return ArrangementFile(N, p, seed, Arrangement(N, tuple(flats), p), families)


def parse_arrangement(text: str, prime: int | None = None) -> Arrangement:
    return parse_file(text, prime).arrangement


def serialize(A: Arrangement, seed: int | None = None) -> str:
    """Canonical text for ``A``: one ``flat`` block per flat, RREF rows."""
    header = f"P {A.ambient_dim} prime {A.prime}"
    if seed is not None:
        header += f" seed {seed}"
    out = [header]
    for L in A.flats:
        out.append(f"flat {L.codim}")
        out.extend(" ".join(str(v) for v in f.coefficients) for f in L.forms)
    return "\n".join(out) + "\n"


def serialize_family(family, directive: tuple[str, int] | None = None, seed: int | None = None) -> str:
    header = f"P {family.ambient_dim} prime {family.prime}"
    if seed is not None:
        header += f" seed {seed}"
    out = [header, f"hyperplanes {family.s}"]
    out.extend(" ".join(str(v) for v in f.coefficients) for f in family.forms)
    if directive:
        out.append(f"{directive[0]} {directive[1]}")
    return "\n".join(out) + "\n"
