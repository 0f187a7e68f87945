"""Weighted-graded polynomials over C = k[X_1..X_n] and the doubled ring k[X, Y].

A polynomial is a sparse map from exponent tuples to nonzero field elements.
Graded pieces are enumerated in ascending lexicographic order of exponent
vectors; that order is the basis order used by every coordinate map.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .exactalg import Field

Monomial = tuple[int, ...]

MAX_EXPONENT = 1000


@dataclass(frozen=True)
class Ring:
    """Variable weights, display names and coefficient field.

    For a doubled ring the variables are ``X_1..X_n, Y_1..Y_n`` and ``weights``
    lists all ``2n`` weights (each ``m_i`` twice); ``n`` stays the base count.
    """

    weights: tuple[int, ...]
    names: tuple[str, ...]
    field: Field = Field(0)
    doubled: bool = False

    def __post_init__(self):
        if not self.weights:
            raise ValueError("need at least one variable")
        if any(w < 1 for w in self.weights):
            raise ValueError(f"weights must be positive, got {self.weights}")
        if len(self.names) != len(self.weights):
            raise ValueError("one name per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names {self.names}")
        if self.doubled and len(self.weights) % 2:
            raise ValueError("doubled ring needs an even variable count")

    @classmethod
    def make(cls, weights: Sequence[int], names: Optional[Sequence[str]] = None,
             field: Field = Field(0)) -> "Ring":
        weights = tuple(int(w) for w in weights)
        if names is None:
            names = canonical_names(len(weights), "X")
        return cls(weights, tuple(names), field)

    @property
    def nvars(self) -> int:
        return len(self.weights)

    @property
    def n(self) -> int:
        return self.nvars // 2 if self.doubled else self.nvars

    @property
    def base_weights(self) -> tuple[int, ...]:
        return self.weights[: self.n]

    def doubled_ring(self) -> "Ring":
        if self.doubled:
            raise ValueError("ring is already doubled")
        names = canonical_names(self.n, "X") + canonical_names(self.n, "Y")
        return Ring(self.weights * 2, names, self.field, True)

    def with_names(self, names: Sequence[str]) -> "Ring":
        return Ring(self.weights, tuple(names), self.field, self.doubled)

    def wdeg(self, mono: Monomial) -> int:
        return sum(a * w for a, w in zip(mono, self.weights))

    def bidegree(self, mono: Monomial) -> tuple[int, int]:
        n, w = self.n, self.base_weights
        return (sum(a * m for a, m in zip(mono[:n], w)),
                sum(a * m for a, m in zip(mono[n:], w)))

    def var(self, i: int) -> "WPoly":
        e = [0] * self.nvars
        e[i] = 1
        return WPoly(self, {tuple(e): 1})

    def const(self, c) -> "WPoly":
        return WPoly(self, {(0,) * self.nvars: c})

    def zero(self) -> "WPoly":
        return WPoly(self, {})

    def one(self) -> "WPoly":
        return self.const(1)


def canonical_names(n: int, letter: str) -> tuple[str, ...]:
    return (letter,) if n == 1 else tuple(f"{letter}{i + 1}" for i in range(n))


@lru_cache(maxsize=None)
def _monomials(weights: tuple[int, ...], nu: int) -> tuple[Monomial, ...]:
    if nu < 0:
        return ()
    if len(weights) == 1:
        w = weights[0]
        return ((nu // w,),) if nu % w == 0 else ()
    out = []
    w = weights[0]
    for a in range(nu // w + 1):
        for rest in _monomials(weights[1:], nu - a * w):
            out.append((a,) + rest)
    return tuple(out)


def monomials_of_wdeg(ring: Ring, nu: int) -> tuple[Monomial, ...]:
    """All monomials of weighted degree ``nu``, ascending lex on exponents."""
    return _monomials(ring.weights, nu)


@lru_cache(maxsize=None)
def _index(weights: tuple[int, ...], nu: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(_monomials(weights, nu))}


def monomial_index(ring: Ring, nu: int) -> dict[Monomial, int]:
    return _index(ring.weights, nu)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class WPoly:
    """Sparse polynomial; ``terms`` never stores a zero coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Optional[Mapping[Monomial, object]] = None):
        self.ring = ring
        f = ring.field
        clean = {}
        for m, c in (terms or {}).items():
            if len(m) != ring.nvars:
                raise ValueError(f"monomial {m} has wrong length for {ring.nvars} variables")
            c = f(c)
            if c != 0:
                clean[tuple(m)] = c
        self.terms: dict[Monomial, object] = clean

    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> "WPoly":
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, WPoly):
            return self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def _check(self, other: "WPoly"):
        if self.ring != other.ring:
            raise ValueError("ring mismatch")

    def _coerce(self, other) -> "WPoly":
        if isinstance(other, WPoly):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        f = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = f(out.get(m, 0) + c)
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return WPoly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return WPoly._raw(self.ring, {m: f(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "WPoly":
        f = self.ring.field
        c = f(c)
        if c == 0:
            return self.ring.zero()
        return WPoly._raw(self.ring, {m: f(v * c) for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, WPoly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return WPoly(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def mul_monomial(self, mono: Monomial, c=1) -> "WPoly":
        f = self.ring.field
        return WPoly(self.ring, {mono_mul(m, mono): f(v * c) for m, v in self.terms.items()})

    def wdegrees(self) -> list[int]:
        return sorted({self.ring.wdeg(m) for m in self.terms})

    def homogeneous_degree(self) -> Optional[int]:
        """Common weighted degree of all terms, ``None`` when they differ."""
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        degs = {self.ring.wdeg(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self, nu: Optional[int] = None) -> bool:
        if not self.terms:
            return True
        d = self.homogeneous_degree()
        return d is not None and (nu is None or d == nu)

    def substitute(self, images: Sequence["WPoly"]) -> "WPoly":
        """Replace variable ``i`` by ``images[i]`` (all images share one ring)."""
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable required")
        target = images[0].ring
        for i, img in enumerate(images):
            if img.ring != target:
                raise ValueError("images live in different rings")
            if img and img.homogeneous_degree() != self.ring.weights[i]:
                raise ValueError(
                    f"image of {self.ring.names[i]} is not homogeneous of weight {self.ring.weights[i]}")
        powers: list[dict[int, WPoly]] = [dict() for _ in images]

        def power(i, e):
            if e not in powers[i]:
                powers[i][e] = images[i] ** e
            return powers[i][e]

        out = target.zero()
        for m, c in self.terms.items():
            t = target.const(c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
                    if not t:
                        break
            out = out + t
        return out

    def coords(self, nu: Optional[int] = None) -> np.ndarray:
        """Coefficient vector over ``monomials_of_wdeg(nu)``."""
        if nu is None:
            if not self.terms:
                raise ValueError("degree needed for the zero polynomial")
            nu = self.homogeneous_degree()
            if nu is None:
                raise ValueError(f"inhomogeneous polynomial, degrees {self.wdegrees()}")
        idx = monomial_index(self.ring, nu)
        v = self.ring.field.zeros(len(idx))
        for m, c in self.terms.items():
            if m not in idx:
                raise ValueError(f"inhomogeneous polynomial, degrees {self.wdegrees()} (expected {nu})")
            v[idx[m]] = c
        return v

    @classmethod
    def from_coords(cls, ring: Ring, nu: int, v: Iterable) -> "WPoly":
        monos = monomials_of_wdeg(ring, nu)
        return cls(ring, {m: c for m, c in zip(monos, v) if c != 0})

    def leading(self):
        """Largest term in lex order, as ``(monomial, coefficient)``."""
        m = max(self.terms)
        return m, self.terms[m]

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        names = names or self.ring.names
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            parts.append(_format_term(self.terms[m], m, names, self.ring.field))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"WPoly({self.format()!r})"


def _format_term(c, m: Monomial, names, field: Field) -> str:
    factors = []
    for name, e in zip(names, m):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    body = "*".join(factors)
    if not body:
        return str(c)
    if c == 1:
        return body
    if field.is_rational and c == -1:
        return "-" + body
    cs = str(c)
    if "/" in cs:
        cs = f"({cs})" if not cs.startswith("-") else f"-({cs[1:]})"
    return f"{cs}*{body}"


def divide_linear_diff(f: WPoly, j: int) -> WPoly:
    """Exact quotient of a doubled-ring polynomial by ``X_j - Y_j`` (0-based j)."""
    ring = f.ring
    if not ring.doubled:
        raise ValueError("division by X_j - Y_j needs the doubled ring")
    n = ring.n
    xj, yj = j, n + j
    fld = ring.field
    rem = dict(f.terms)
    quot: dict = {}
    while True:
        top = [m for m in rem if m[xj] > 0]
        if not top:
            break
        m = max(top, key=lambda t: t[xj])
        c = rem.pop(m)
        q = list(m)
        q[xj] -= 1
        q = tuple(q)
        quot[q] = fld(quot.get(q, 0) + c)
        # rem += c * Y_j * X^q, cancelling c*X^m
        s = list(q)
        s[yj] += 1
        s = tuple(s)
        v = fld(rem.get(s, 0) + c)
        if v == 0:
            rem.pop(s, None)
        else:
            rem[s] = v
    if rem:
        left = WPoly(ring, rem)
        raise ArithmeticError(f"not divisible by {ring.names[xj]} - {ring.names[yj]}: remainder {left}")
    return WPoly(ring, quot)


# --- expression parsing -----------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            toks.append(("op", ch, m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = {name: k for k, name in enumerate(ring.names)}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], self.text)

    def parse(self) -> WPoly:
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.factor()
        return p

    def factor(self):
        p = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                raise self.error("expected exponent")
            self.take()
            e = int(tok[1])
            if e > MAX_EXPONENT:
                raise self.error(f"exponent {e} exceeds {MAX_EXPONENT}", tok)
            p = p ** e
        return p

    def atom(self):
        tok = self.peek()
        kind, val, _ = tok
        if kind == "num":
            self.take()
            return self.ring.const(int(val))
        if kind == "name":
            if val not in self.vars:
                raise self.error(f"unknown variable {val!r}")
            self.take()
            return self.ring.var(self.vars[val])
        if tok[:2] == ("op", "("):
            self.take()
            p = self.expr()
            if self.peek()[:2] != ("op", ")"):
                raise self.error("expected ')'")
            self.take()
            return p
        if tok[:2] == ("op", "-"):
            self.take()
            return -self.factor()
        raise self.error("expected a number, variable or '('" if kind != "end" else "unexpected end of input")


def parse(text: str, ring: Ring) -> WPoly:
    """Parse an integer-coefficient polynomial expression over ``ring``."""
    return _Parser(text, ring).parse()
