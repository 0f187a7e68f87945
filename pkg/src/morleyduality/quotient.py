"""Graded pieces of B = C/I, Hilbert function, finiteness certificate, duals.

Everything is degreewise linear algebra: ``I_q`` is spanned by the products
``X^g f_i`` of degree ``q``; the monomials that are not pivots of its echelon
form give a basis of ``B_q``, and the echelon residual is the normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exactalg import Field, Reducer
from .wpoly import Monomial, Ring, WPoly, monomial_index, monomials_of_wdeg


@dataclass(frozen=True)
class SystemConfig:
    ring: Ring
    polys: tuple[WPoly, ...]

    def __post_init__(self):
        if len(self.polys) < self.ring.n:
            raise ValueError(f"need r >= n, got r={len(self.polys)} polynomials in n={self.ring.n} variables")
        for i, f in enumerate(self.polys):
            if f.ring != self.ring:
                raise ValueError(f"polynomial {i + 1} is over another ring")
            if not f:
                raise ValueError(f"polynomial {i + 1} is zero")
            d = f.homogeneous_degree()
            if d is None:
                raise ValueError(f"polynomial {i + 1} ({f}) is inhomogeneous: weighted degrees {f.wdegrees()}")
            if d < 1:
                raise ValueError(f"polynomial {i + 1} has degree {d}; positive degree required")

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def r(self) -> int:
        return len(self.polys)

    @property
    def weights(self) -> tuple[int, ...]:
        return self.ring.weights

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.homogeneous_degree() for f in self.polys)

    @property
    def delta(self) -> int:
        return sum(self.degrees) - sum(self.weights)

    def over(self, field: Field) -> "SystemConfig":
        """The same system with coefficients mapped into another field."""
        ring = Ring(self.ring.weights, self.ring.names, field)
        return SystemConfig(ring, tuple(WPoly(ring, f.terms) for f in self.polys))


@dataclass
class BPiece:
    degree: int
    monomials: tuple[Monomial, ...]
    ideal: Reducer
    basis_positions: list[int]

    @property
    def dim(self) -> int:
        return len(self.basis_positions)

    @property
    def basis(self) -> list[Monomial]:
        return [self.monomials[i] for i in self.basis_positions]

    @property
    def ideal_rank(self) -> int:
        return self.ideal.rank

    def normal_form_vector(self, v: np.ndarray) -> np.ndarray:
        return self.ideal.quotient(v)


@dataclass
class DualVector:
    """A linear form on ``B_degree``, given on the monomial basis of that piece."""

    degree: int
    coords: np.ndarray


class Quotient:
    """The graded algebra B = C/I, built lazily one degree at a time."""

    def __init__(self, cfg: SystemConfig):
        self.cfg = cfg
        self.ring = cfg.ring
        self.field = cfg.field
        self._pieces: dict[int, BPiece] = {}

    def ideal_generators(self, q: int) -> np.ndarray:
        """Rows are the coordinate vectors of ``X^g f_i`` in ``C_q``."""
        rows = []
        for f in self.cfg.polys:
            d = f.homogeneous_degree()
            for g in monomials_of_wdeg(self.ring, q - d):
                rows.append(f.mul_monomial(g).coords(q))
        size = len(monomials_of_wdeg(self.ring, q))
        if not rows:
            return self.field.zeros((0, size))
        return np.array(rows, dtype=self.field.dtype).reshape(len(rows), size)

    def ideal_piece(self, q: int) -> np.ndarray:
        """Basis of ``I_q`` as the columns of a matrix."""
        return self.b_piece(q).ideal.rows.T.copy()

    def b_piece(self, q: int) -> BPiece:
        if q not in self._pieces:
            monos = monomials_of_wdeg(self.ring, q)
            red = Reducer(self.field, self.ideal_generators(q), len(monos))
            self._pieces[q] = BPiece(q, monos, red, red.complement)
        return self._pieces[q]

    def dim(self, q: int) -> int:
        return self.b_piece(q).dim if q >= 0 else 0

    def hilbert(self, top: int) -> list[int]:
        return [self.dim(q) for q in range(top + 1)]

    def normal_form(self, f: WPoly, q: Optional[int] = None) -> np.ndarray:
        if q is None:
            if not f:
                raise ValueError("degree needed for the zero polynomial")
            q = f.homogeneous_degree()
            if q is None:
                raise ValueError(f"inhomogeneous polynomial, degrees {f.wdegrees()}")
        return self.b_piece(q).normal_form_vector(f.coords(q))

    def normal_form_monomial(self, m: Monomial) -> np.ndarray:
        q = self.ring.wdeg(m)
        piece = self.b_piece(q)
        v = self.field.zeros(len(piece.monomials))
        v[monomial_index(self.ring, q)[m]] = 1
        return piece.normal_form_vector(v)

    def element(self, coords: Sequence, q: int) -> WPoly:
        """The polynomial sum of B-basis monomials with these coordinates."""
        piece = self.b_piece(q)
        return WPoly(self.ring, {m: c for m, c in zip(piece.basis, coords) if c != 0})

    def multiplication_matrix(self, b: WPoly, s: int, target: int) -> np.ndarray:
        """Matrix of ``x -> normal_form(b x)`` from ``B_{target-s}`` to ``B_target``.

        Rows index the source basis."""
        src = self.b_piece(target - s)
        rows = [self.normal_form(b.mul_monomial(m), target) for m in src.basis]
        if not rows:
            return self.field.zeros((0, self.dim(target)))
        return np.array(rows, dtype=self.field.dtype).reshape(len(rows), self.dim(target))

    def dual_action(self, b: Sequence, s: int, u: DualVector) -> DualVector:
        """``(b.u)(x) = u(b x)``; ``b`` holds coordinates over the ``B_s`` basis."""
        if u.degree - s < 0:
            raise ValueError(f"degree underflow: {u.degree} - {s} < 0")
        poly = self.element(b, s)
        if not poly:
            return DualVector(u.degree - s, self.field.zeros(self.dim(u.degree - s)))
        mat = self.multiplication_matrix(poly, s, u.degree)
        return DualVector(u.degree - s, self.field.matmul(mat, u.coords))

    def dual_basis(self, q: int) -> list[DualVector]:
        eye = self.field.eye(self.dim(q))
        return [DualVector(q, eye[i]) for i in range(self.dim(q))]

    def default_search_bound(self) -> int:
        return sum(self.cfg.degrees) + max(self.cfg.weights)

    def finiteness_certificate(self, search_bound: Optional[int] = None) -> Optional[int]:
        """Smallest ``s0 <= bound`` with ``B`` zero on ``[s0, s0 + max m_i)``.

        A vanishing strip that wide forces ``B_mu = 0`` for every ``mu >= s0``
        (strip off one variable at a time), so ``B`` is finite dimensional,
        which over a field is equivalent to ``depth_I(C) = n``.  Returns
        ``None`` when no such ``s0`` exists up to the bound.
        """
        bound = self.default_search_bound() if search_bound is None else search_bound
        width = max(self.cfg.weights)
        run = 0
        for mu in range(bound + width):
            run = run + 1 if self.dim(mu) == 0 else 0
            if run == width:
                s0 = mu - width + 1
                return s0 if s0 <= bound else None
        return None
