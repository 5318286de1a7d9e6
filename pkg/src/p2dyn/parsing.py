"""Text syntax for polynomials and map files.

Polynomials: integer literals, the variables ``x y z``, ``+ - * ^`` and
parentheses, e.g. ``x*y - 2*z^2``.  Multiplication must be explicit.  Two
small additions: ``/`` by a nonzero constant, and the symbol ``a`` for the
generator of GF(p^k) (it is a root of the field's modulus).

Map files are line based::

    name: quadratic example     (optional)
    field: QQ
    map: [x*y, x*y - 2*z^2, y*z + 3*z^2]
    inverse: [2*x^2 - 2*x*y, ...]   (optional)

For GF(p,k) fields whose modulus is not the default seeded choice, a
``modulus: c0, c1, ..., 1`` line (constant term first) pins it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .cremona import CremonaMap, map_new
from .fields import ExtensionField, Field, FieldError, field_make
from .hpoly import HPoly, format_poly

__all__ = ["ParseError", "parse_poly", "parse_triple", "format_triple", "MapFile", "read_map_file"]

_VARS = {"x": 0, "y": 1, "z": 2}


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{msg}{where}" + (f": {text!r}" if text is not None else ""))


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            toks.append(("op", m.group(3), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    # polynomials are plain dicts {exponent triple: raw coefficient}, not yet homogeneous

    def __init__(self, text: str, field: Field):
        self.text = text
        self.field = field
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], self.text)

    # arithmetic on dicts
    def add(self, a, b, sign=1):
        f = self.field
        out = dict(a)
        for e, v in b.items():
            w = v if sign > 0 else f.neg(v)
            s = f.add(out[e], w) if e in out else w
            if f.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return out

    def mul(self, a, b):
        f = self.field
        out: dict = {}
        for ea, va in a.items():
            for eb, vb in b.items():
                e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
                s = f.add(out.get(e, f.zero), f.mul(va, vb))
                out[e] = s
        return {e: v for e, v in out.items() if not f.is_zero(v)}

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            v = self.add(v, self.term(), 1 if op == "+" else -1)
        return v

    def term(self):
        v = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op_tok = self.take()
            rhs = self.unary()
            if op_tok[1] == "*":
                v = self.mul(v, rhs)
            else:
                if set(rhs) - {(0, 0, 0)} or not rhs:
                    raise self.error("division only by a nonzero constant", op_tok)
                inv = self.field.inv(rhs[(0, 0, 0)])
                v = self.mul(v, {(0, 0, 0): inv})
        return v

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return self.add({}, self.unary(), -1)
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise self.error("exponent must be a non-negative integer literal", tok)
            result = {(0, 0, 0): self.field.one}
            for _ in range(tok[1]):
                result = self.mul(result, base)
            if self.peek()[:2] == ("op", "^"):
                raise self.error("chained exponents are ambiguous; use parentheses")
            return result
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            c = self.field.from_int(val)
            return {} if self.field.is_zero(c) else {(0, 0, 0): c}
        if kind == "name":
            if val in _VARS:
                e = [0, 0, 0]
                e[_VARS[val]] = 1
                return {tuple(e): self.field.one}
            if val == "a" and isinstance(self.field, ExtensionField):
                return {(0, 0, 0): self.field.gen()}
            raise ParseError(f"unknown symbol {val!r}", pos, self.text)
        if kind == "op" and val == "(":
            v = self.expr()
            close = self.take()
            if close[:2] != ("op", ")"):
                raise self.error("expected ')'", close)
            return v
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected {val!r}", pos, self.text)


def _mono_text(e) -> str:
    parts = [(n if e[i] == 1 else f"{n}^{e[i]}") for i, n in enumerate("xyz") if e[i]]
    return "*".join(parts) or "1"


def parse_poly(text: str, field: Field) -> HPoly:
    """Parse a homogeneous polynomial; non-homogeneous input names the clash."""
    terms = _Parser(text, field).parse()
    by_deg: dict[int, tuple] = {}
    for e in sorted(terms, reverse=True):
        by_deg.setdefault(sum(e), e)
    if len(by_deg) > 1:
        (d1, e1), (d2, e2) = sorted(by_deg.items())[:2]
        raise ParseError(
            f"non-homogeneous polynomial: monomial {_mono_text(e1)} has degree {d1} "
            f"but {_mono_text(e2)} has degree {d2}"
        )
    return HPoly(field, terms)


def _split_triple(text: str) -> list[str]:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError("a map is written [f0, f1, f2]", None, text)
    parts, depth, cur = [], 0, []
    for ch in s[1:-1]:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    if len(parts) != 3:
        raise ParseError(f"a map needs exactly three components, got {len(parts)}", None, text)
    return parts


def parse_triple(text: str, field: Field) -> tuple[HPoly, HPoly, HPoly]:
    polys = tuple(parse_poly(p, field) for p in _split_triple(text))
    degs = {P.degree for P in polys if not P.is_zero()}
    if len(degs) > 1:
        raise ParseError(f"components have different degrees {sorted(degs)}", None, text)
    return polys  # type: ignore[return-value]


def format_triple(polys: Sequence[HPoly]) -> str:
    return "[" + ", ".join(format_poly(P) for P in polys) + "]"


@dataclass(frozen=True)
class MapFile:
    """Contents of a map file: components exactly as written (not reduced)."""

    field: Field
    components: tuple[HPoly, HPoly, HPoly]
    inverse: tuple[HPoly, HPoly, HPoly] | None = None
    name: str | None = None
    field_text: str | None = dc_field(default=None, compare=False)

    def to_map(self) -> CremonaMap:
        return map_new(*self.components)

    def inverse_map(self) -> CremonaMap | None:
        return map_new(*self.inverse) if self.inverse is not None else None

    @classmethod
    def from_map(cls, f: CremonaMap, inverse: CremonaMap | None = None, name: str | None = None) -> "MapFile":
        return cls(f.field, f.components, inverse.components if inverse else None, name)

    @classmethod
    def parse(cls, text: str, seed: int | None = 0) -> "MapFile":
        entries: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition(":")
            key = key.strip().lower()
            if not sep or key not in {"name", "field", "map", "inverse", "modulus"}:
                raise ParseError(f"line {lineno}: expected 'key: value' with key name/field/map/inverse/modulus")
            if key in entries:
                raise ParseError(f"line {lineno}: duplicate key {key!r}")
            entries[key] = value.strip()
        if "field" not in entries or "map" not in entries:
            raise ParseError("map file needs 'field:' and 'map:' lines")
        modulus = None
        if "modulus" in entries:
            modulus = [int(c) for c in entries["modulus"].split(",")]
        field = field_make(entries["field"], seed=seed, modulus=modulus)
        comps = parse_triple(entries["map"], field)
        inv = parse_triple(entries["inverse"], field) if "inverse" in entries else None
        return cls(field, comps, inv, entries.get("name"), entries["field"])

    def dumps(self) -> str:
        lines = []
        if self.name:
            lines.append(f"name: {self.name}")
        lines.append(f"field: {self.field}")
        if isinstance(self.field, ExtensionField):
            try:
                default = field_make(str(self.field))
            except FieldError:  # pragma: no cover
                default = None
            if default != self.field:
                lines.append("modulus: " + ", ".join(str(c) for c in self.field.modulus))
        lines.append(f"map: {format_triple(self.components)}")
        if self.inverse is not None:
            lines.append(f"inverse: {format_triple(self.inverse)}")
        return "\n".join(lines) + "\n"


def read_map_file(path, seed: int | None = 0) -> MapFile:
    with open(path, encoding="utf-8") as fh:
        return MapFile.parse(fh.read(), seed=seed)
