"""Exact field arithmetic and dense linear algebra.

Two coefficient fields are supported: the rationals (``Field(0)``) and prime
fields ``Field(p)``.  Matrices are plain numpy arrays; over a prime field they
hold ``int64`` residues in ``[0, p)``, over the rationals they are ``object``
arrays of ``gmpy2.mpq`` (much faster than ``fractions.Fraction``).  Every routine takes the field explicitly so the
same elimination code serves both.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Optional

import numpy as np
from gmpy2 import mpq

MAX_MODULUS = 2**31


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class Field:
    """The rationals when ``modulus == 0``, otherwise GF(modulus)."""

    modulus: int = 0

    def __post_init__(self):
        p = self.modulus
        if p != 0 and (p >= MAX_MODULUS or not is_prime(p)):
            raise ValueError(f"modulus {p} is not a prime below 2^31")

    @property
    def is_rational(self) -> bool:
        return self.modulus == 0

    @property
    def dtype(self):
        return object if self.modulus == 0 else np.int64

    def __call__(self, x):
        """Map an int or rational number into the field."""
        if self.modulus == 0:
            return mpq(x)
        if isinstance(x, numbers.Rational) and x.denominator != 1:
            return (int(x.numerator) * pow(int(x.denominator), -1, self.modulus)) % self.modulus
        return int(x) % self.modulus

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.modulus == 0:
            return 1 / mpq(x)
        return pow(int(x), -1, self.modulus)

    def neg(self, x):
        return self(-x)

    def zeros(self, shape) -> np.ndarray:
        if self.modulus == 0:
            out = np.empty(shape, dtype=object)
            out.fill(0)
            return out
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = 1
        return out

    def array(self, data) -> np.ndarray:
        """Coerce nested lists / arrays into a field array (a fresh copy)."""
        if self.modulus == 0:
            a = np.array(data, dtype=object)
            flat = a.reshape(-1)
            for i, x in enumerate(flat):
                flat[i] = self(x)
            return a
        a = np.array(data, dtype=object)
        if a.size == 0:
            return np.zeros(a.shape, dtype=np.int64)
        return np.array([self(x) for x in a.reshape(-1)], dtype=np.int64).reshape(a.shape)

    def norm(self, a: np.ndarray) -> np.ndarray:
        """Reduce an array produced by ring operations back into the field."""
        if self.modulus == 0:
            return a
        return a % self.modulus

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.modulus == 0:
            if a.shape[-1] == 0:
                return self.zeros(a.shape[:-1] + b.shape[1:])
            return np.dot(a, b)
        # entries < 2^31, so chunk the inner dimension to stay inside int64
        p = self.modulus
        k = a.shape[-1]
        step = max(1, (2**62) // (p * p))
        out = None
        for s in range(0, max(k, 1), step):
            part = np.dot(a[..., s:s + step], b[s:s + step]) % p
            out = part if out is None else (out + part) % p
        return out

    def __str__(self):
        return "QQ" if self.modulus == 0 else f"GF({self.modulus})"


def _nonzero(v: np.ndarray) -> np.ndarray:
    return np.flatnonzero(v != 0)


def rref(field: Field, m) -> tuple[np.ndarray, list[int], int]:
    """Reduced row echelon form of ``m``; returns ``(R, pivots, rank)``."""
    a = field.array(m) if not isinstance(m, np.ndarray) or m.dtype != field.dtype else m.copy()
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = _nonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r, c:] = field.norm(a[r, c:] * field.inv(a[r, c]))
        col = a[:, c].copy()
        col[r] = 0
        others = _nonzero(col)
        if others.size:
            a[others, c:] = field.norm(a[others, c:] - np.outer(col[others], a[r, c:]))
        pivots.append(c)
        r += 1
    return a, pivots, r


def rank(field: Field, m) -> int:
    return rref(field, m)[2]


def nullspace(field: Field, m) -> np.ndarray:
    """Kernel basis as the columns of the returned matrix.

    One column per free variable of ``rref(m)``, in increasing free-column
    order, with that free coordinate equal to 1 and the other free ones 0.
    """
    a = field.array(m) if not isinstance(m, np.ndarray) else m
    cols = a.shape[1]
    r, pivots, rk = rref(field, a)
    free = [c for c in range(cols) if c not in set(pivots)]
    out = field.zeros((cols, len(free)))
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, pc in enumerate(pivots):
            out[pc, k] = field.neg(r[i, f])
    return out


def solve_in_span(field: Field, a, b) -> Optional[np.ndarray]:
    """Return ``x`` with ``a @ x == b`` (free variables zero), or ``None``."""
    a = field.array(a) if not isinstance(a, np.ndarray) else a
    b = field.array(b) if not isinstance(b, np.ndarray) else b
    if a.ndim != 2 or b.shape != (a.shape[0],):
        raise ValueError(f"dimension mismatch: A is {a.shape}, b is {b.shape}")
    cols = a.shape[1]
    aug = field.zeros((a.shape[0], cols + 1))
    aug[:, :cols] = a
    aug[:, cols] = b
    r, pivots, rk = rref(field, aug)
    if pivots and pivots[-1] == cols:
        return None
    x = field.zeros(cols)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols]
    return x


class Reducer:
    """Reduction of vectors modulo a fixed subspace.

    The subspace is given by spanning rows; they are brought to reduced echelon
    form once, after which ``reduce`` subtracts ``v[pivots] @ R`` from ``v``.
    The residual vanishes on the pivot coordinates and is zero exactly when
    ``v`` lies in the span.
    """

    def __init__(self, field: Field, rows: np.ndarray, dim: int):
        self.field = field
        self.dim = dim
        if rows.shape[0] == 0:
            self.rows = field.zeros((0, dim))
            self.pivots: list[int] = []
        else:
            r, pivots, rk = rref(field, rows)
            self.rows = r[:rk]
            self.pivots = pivots
        self._pivot_set = set(self.pivots)
        self.complement = [i for i in range(dim) if i not in self._pivot_set]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Residual of a vector, or of each row of a 2-d batch."""
        if not self.pivots:
            return v.copy()
        f = self.field
        if v.ndim == 1:
            return f.norm(v - f.matmul(v[self.pivots], self.rows))
        return f.norm(v - f.matmul(v[:, self.pivots], self.rows))

    def contains(self, v: np.ndarray) -> bool:
        return not np.any(self.reduce(v) != 0)

    def coords(self, v: np.ndarray) -> Optional[np.ndarray]:
        """Coordinates of ``v`` on the echelon rows, or ``None`` if outside."""
        if not self.contains(v):
            return None
        return v[self.pivots].copy() if v.ndim == 1 else v[:, self.pivots].copy()

    def quotient(self, v: np.ndarray) -> np.ndarray:
        """Residual restricted to the non-pivot coordinates."""
        res = self.reduce(v)
        return res[self.complement] if res.ndim == 1 else res[:, self.complement]


def quotient_coords(field: Field, s, v) -> np.ndarray:
    """Coordinates of ``v`` modulo the column span of ``s``.

    The complement basis is the set of unit vectors at the coordinates that are
    not pivots of ``rref(s.T)``; the returned vector is the residual of ``v``
    on those coordinates, so it is zero iff ``v`` is in the span.
    """
    s = field.array(s) if not isinstance(s, np.ndarray) else s
    v = field.array(v) if not isinstance(v, np.ndarray) else v
    if s.ndim != 2 or v.shape != (s.shape[0],):
        raise ValueError(f"dimension mismatch: S is {s.shape}, v is {v.shape}")
    return Reducer(field, s.T.copy(), s.shape[0]).quotient(v)
