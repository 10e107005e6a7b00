"""Provenance polynomials: data model, canonicalization, parsing, valuation.

A polynomial is a sum of monomials, each a rational coefficient times a
product of variables with positive integer exponents.  A bundle is the
multiset of result polynomials of one query, keyed by result row.
"""

from __future__ import annotations

import json
import math
import re
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import EvaluationError, ParseError

NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# merged coefficients below this magnitude are treated as zero and dropped
ZERO_EPS = 1e-12

Factors = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Monomial:
    """coefficient * product(var^exp); ``factors`` sorted by variable name.

    An empty ``factors`` tuple denotes a constant term.
    """

    coefficient: float
    factors: Factors = ()

    @classmethod
    def make(cls, coefficient: float, factors: Iterable[tuple[str, int]] = ()) -> "Monomial":
        """Build a monomial, merging repeated variables (x*x -> x^2)."""
        merged: dict[str, int] = {}
        for name, exp in factors:
            merged[name] = merged.get(name, 0) + exp
        return cls(float(coefficient), tuple(sorted(merged.items())))

    def variables(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.factors)


@dataclass(frozen=True)
class Polynomial:
    """A sum of monomials for one result key, kept in canonical form."""

    key: str
    monomials: tuple[Monomial, ...] = ()

    @classmethod
    def make(cls, key: str, monomials: Iterable[Monomial]) -> "Polynomial":
        return cls(key, canonical_monomials(monomials))


def canonical_monomials(monomials: Iterable[Monomial]) -> tuple[Monomial, ...]:
    """Merge monomials with equal factor maps, drop zeros, sort.

    Sort order: factor sequences compared lexicographically by
    (name, exponent); constants (empty factors) come first.
    """
    merged: dict[Factors, float] = {}
    for m in monomials:
        merged[m.factors] = merged.get(m.factors, 0.0) + m.coefficient
    return tuple(
        Monomial(c, f)
        for f, c in sorted(merged.items())
        if abs(c) >= ZERO_EPS
    )


@dataclass(frozen=True)
class ProvenanceBundle:
    """Multiset of result polynomials with unique keys, sorted by key."""

    polynomials: tuple[Polynomial, ...] = ()

    @classmethod
    def make(cls, polynomials: Iterable[Polynomial]) -> "ProvenanceBundle":
        polys = sorted(polynomials, key=lambda p: p.key)
        seen: set[str] = set()
        for p in polys:
            if p.key in seen:
                raise ParseError(f"duplicate polynomial key {p.key!r}")
            seen.add(p.key)
        return cls(tuple(Polynomial.make(p.key, p.monomials) for p in polys))

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(
            name
            for poly in self.polynomials
            for m in poly.monomials
            for name, _ in m.factors
        )

    def __len__(self) -> int:
        return bundle_size(self)


def bundle_size(bundle: ProvenanceBundle) -> int:
    """Total monomial count across all polynomials."""
    return sum(len(p.monomials) for p in bundle.polynomials)


@dataclass(frozen=True)
class Valuation:
    """Values for variables; ``default`` fills anything unassigned."""

    assignments: Mapping[str, float] = field(default_factory=dict)
    default: float = 1.0

    def value(self, name: str) -> float:
        return self.assignments.get(name, self.default)

    def with_overrides(self, overrides: Mapping[str, float]) -> "Valuation":
        merged = dict(self.assignments)
        merged.update(overrides)
        return Valuation(merged, self.default)


def evaluate(poly: Polynomial, val: Valuation) -> float:
    """Sum over monomials of coefficient * product(value(var)^exp)."""
    assignments = val.assignments
    default = val.default
    total = 0.0
    try:
        for m in poly.monomials:
            term = m.coefficient
            for name, exp in m.factors:
                v = assignments.get(name, default)
                term *= v if exp == 1 else v**exp
            total += term
    except OverflowError:
        raise EvaluationError(f"overflow while evaluating polynomial {poly.key!r}") from None
    if not math.isfinite(total):
        raise EvaluationError(f"non-finite value for polynomial {poly.key!r}")
    return total


def evaluate_bundle(bundle: ProvenanceBundle, val: Valuation) -> tuple[dict[str, float], float]:
    """Evaluate every polynomial; returns (key -> value, wall-clock seconds)."""
    start = time.perf_counter()
    values = {poly.key: evaluate(poly, val) for poly in bundle.polynomials}
    return values, time.perf_counter() - start


# ---------------------------------------------------------------------------
# JSON format


def bundle_from_obj(obj: object) -> ProvenanceBundle:
    if not isinstance(obj, dict) or not isinstance(obj.get("polynomials"), list):
        raise ParseError('bundle JSON must be an object with a "polynomials" list')
    polys = []
    for p in obj["polynomials"]:
        if not isinstance(p, dict) or "key" not in p:
            raise ParseError('each polynomial needs a "key"')
        key = str(p["key"])
        monomials = []
        for m in p.get("monomials", []):
            if not isinstance(m, dict) or "c" not in m:
                raise ParseError(f'monomial in polynomial {key!r} needs a coefficient "c"')
            c = m["c"]
            if not isinstance(c, (int, float)) or not math.isfinite(c):
                raise ParseError(f"non-finite coefficient in polynomial {key!r}")
            factors = []
            for pair in m.get("v", []):
                if (
                    not isinstance(pair, (list, tuple))
                    or len(pair) != 2
                    or not isinstance(pair[0], str)
                ):
                    raise ParseError(f"bad factor entry in polynomial {key!r}: {pair!r}")
                name, exp = pair
                if not NAME_PATTERN.match(name):
                    raise ParseError(f"invalid variable name {name!r}")
                if not isinstance(exp, int) or exp < 1:
                    raise ParseError(f"non-positive exponent for {name!r} in polynomial {key!r}")
                factors.append((name, exp))
            monomials.append(Monomial.make(c, factors))
        polys.append(Polynomial.make(key, monomials))
    return ProvenanceBundle.make(polys)


def bundle_to_obj(bundle: ProvenanceBundle) -> dict:
    return {
        "polynomials": [
            {
                "key": poly.key,
                "monomials": [
                    {"c": m.coefficient, "v": [[n, e] for n, e in m.factors]}
                    for m in poly.monomials
                ],
            }
            for poly in bundle.polynomials
        ]
    }


# ---------------------------------------------------------------------------
# Text format
#
#   # key: 10001
#   208.8*p1*m1 + 240*p1*m3 - 4*x^2

_KEY_LINE = re.compile(r"#\s*key:\s*(\S+)\s*$")
_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[*^+\-]))"
)


def _tokenize(text: str, line: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r}", line, pos + 1)
        for kind in ("num", "name", "op"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return tokens


def _parse_expression(text: str, line: int) -> list[Monomial]:
    tokens = _tokenize(text, line)
    if not tokens:
        raise ParseError("empty polynomial expression", line)
    monomials: list[Monomial] = []
    i = 0
    n = len(tokens)

    def expect_factor() -> None:
        nonlocal i, coeff
        kind, value, col = tokens[i]
        if kind == "num":
            c = float(value)
            if not math.isfinite(c):
                raise ParseError("non-finite coefficient", line, col)
            coeff *= c
            i += 1
        elif kind == "name":
            i += 1
            exp = 1
            if i < n and tokens[i][1] == "^":
                i += 1
                if i >= n or tokens[i][0] != "num":
                    raise ParseError("expected exponent after '^'", line, col)
                ekind, evalue, ecol = tokens[i]
                try:
                    exp = int(evalue)
                except ValueError:
                    raise ParseError("exponent must be an integer", line, ecol) from None
                if exp < 1:
                    raise ParseError(f"non-positive exponent for {value!r}", line, ecol)
                i += 1
            factors.append((value, exp))
        else:
            raise ParseError(f"expected a number or variable, got {value!r}", line, col)

    while i < n:
        sign = 1.0
        while tokens[i][1] in "+-" and tokens[i][0] == "op":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
            if i >= n:
                raise ParseError("dangling sign at end of expression", line)
        coeff = sign
        factors: list[tuple[str, int]] = []
        expect_factor()
        while i < n and tokens[i][1] == "*":
            i += 1
            if i >= n:
                raise ParseError("dangling '*' at end of expression", line)
            expect_factor()
        monomials.append(Monomial.make(coeff, factors))
        if i < n and tokens[i][1] not in "+-":
            kind, value, col = tokens[i]
            raise ParseError(f"expected '+' or '-' between terms, got {value!r}", line, col)
    return monomials


def _bundle_from_text(text: str) -> ProvenanceBundle:
    polys: list[Polynomial] = []
    key: str | None = None
    body: list[tuple[str, int]] = []

    def flush() -> None:
        if key is None:
            return
        if not body:
            raise ParseError(f"polynomial {key!r} has no body")
        monomials: list[Monomial] = []
        for chunk, line in body:
            monomials.extend(_parse_expression(chunk, line))
        polys.append(Polynomial.make(key, monomials))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        m = _KEY_LINE.match(line)
        if m:
            flush()
            key = m.group(1)
            body = []
        elif line.startswith("#"):
            continue  # comment
        else:
            if key is None:
                raise ParseError("polynomial text before any '# key:' header", lineno)
            body.append((line, lineno))
    flush()
    return ProvenanceBundle.make(polys)


def _format_number(c: float) -> str:
    if c == int(c) and abs(c) < 1e15:
        return str(int(c))
    return repr(c)


def _format_monomial(m: Monomial) -> str:
    """Unsigned rendering; caller handles the sign."""
    c = abs(m.coefficient)
    parts = [] if (c == 1.0 and m.factors) else [_format_number(c)]
    for name, exp in m.factors:
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return "*".join(parts)


def _polynomial_to_text(poly: Polynomial) -> str:
    if not poly.monomials:
        return "0"
    pieces = []
    for idx, m in enumerate(poly.monomials):
        body = _format_monomial(m)
        if idx == 0:
            pieces.append(f"-{body}" if m.coefficient < 0 else body)
        else:
            pieces.append(("- " if m.coefficient < 0 else "+ ") + body)
    return " ".join(pieces)


def _bundle_to_text(bundle: ProvenanceBundle) -> str:
    blocks = [f"# key: {p.key}\n{_polynomial_to_text(p)}" for p in bundle.polynomials]
    return "\n".join(blocks) + ("\n" if blocks else "")


# ---------------------------------------------------------------------------
# Entry points


def parse_bundle(text: str, format: str = "json") -> ProvenanceBundle:
    """Parse a bundle from JSON or text format (see module docs)."""
    if format == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        return bundle_from_obj(obj)
    if format == "text":
        return _bundle_from_text(text)
    raise ValueError(f"unknown bundle format {format!r}")


def serialize_bundle(bundle: ProvenanceBundle, format: str = "json") -> str:
    """Deterministic canonical serialization; round-trips via parse_bundle."""
    if format == "json":
        return json.dumps(bundle_to_obj(bundle), separators=(",", ":")) + "\n"
    if format == "text":
        return _bundle_to_text(bundle)
    raise ValueError(f"unknown bundle format {format!r}")


def valuation_from_obj(obj: object) -> Valuation:
    if not isinstance(obj, dict):
        raise ParseError("valuation JSON must be an object")
    assignments = obj.get("assignments", {})
    if not isinstance(assignments, dict):
        raise ParseError('"assignments" must be an object')
    out = {}
    for name, value in assignments.items():
        if not NAME_PATTERN.match(name):
            raise ParseError(f"invalid variable name {name!r}")
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ParseError(f"non-finite value for {name!r}")
        out[name] = float(value)
    default = obj.get("default", 1.0)
    if not isinstance(default, (int, float)) or not math.isfinite(default):
        raise ParseError("non-finite default value")
    return Valuation(out, float(default))


def valuation_to_obj(val: Valuation) -> dict:
    return {"assignments": dict(sorted(val.assignments.items())), "default": val.default}
