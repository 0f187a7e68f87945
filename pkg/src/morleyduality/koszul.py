"""Graded pieces of Koszul complexes K_.(h_1..h_r; R) and their homology.

Chains are stored per wedge index ``J`` (a sorted 0-based tuple) as a
polynomial coefficient; the ambient basis of ``(K_p)_nu`` is the list of pairs
``(J, monomial)`` ordered wedge-lex major, monomial-lex minor.  The
differential is ``d(e_J) = sum_l (-1)^l h_{J[l]} e_{J minus J[l]}`` (0-based l).
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .exactalg import Field, Reducer, nullspace, solve_in_span
from .wpoly import Monomial, Ring, WPoly, mono_mul, monomials_of_wdeg

WedgeIndex = tuple[int, ...]


class NotACycle(ValueError):
    def __init__(self, boundary: "Chain"):
        super().__init__(f"chain is not a cycle; its differential is {boundary.format()}")
        self.boundary = boundary


def wedge_basis(r: int, p: int) -> list[WedgeIndex]:
    """All p-subsets of ``range(r)`` in lexicographic order."""
    if p < 0 or p > r:
        return []
    return list(combinations(range(r), p))


def format_wedge(J: WedgeIndex) -> str:
    return "e{" + ",".join(str(j + 1) for j in J) + "}"


class KoszulContext:
    """Koszul complex of a homogeneous sequence over ``ring``; pieces are memoized."""

    def __init__(self, ring: Ring, sequence: Sequence[WPoly]):
        self.ring = ring
        self.field: Field = ring.field
        self.sequence = list(sequence)
        degs = []
        for h in self.sequence:
            if h.ring != ring:
                raise ValueError("sequence element lives in another ring")
            d = h.homogeneous_degree()
            if d is None or d <= 0:
                raise ValueError(f"sequence element {h} is not homogeneous of positive degree")
            degs.append(d)
        self.degrees = tuple(degs)
        self.r = len(self.sequence)
        self._basis: dict = {}
        self._dmat: dict = {}
        self._homology: dict = {}
        self._boundary: dict = {}

    def shift(self, J: WedgeIndex) -> int:
        return sum(self.degrees[j] for j in J)

    # --- bases and coordinates -------------------------------------------

    def basis(self, p: int, nu: int) -> tuple[list[tuple[WedgeIndex, Monomial]], dict]:
        key = (p, nu)
        if key not in self._basis:
            items = []
            for J in wedge_basis(self.r, p):
                for m in monomials_of_wdeg(self.ring, nu - self.shift(J)):
                    items.append((J, m))
            self._basis[key] = (items, {b: i for i, b in enumerate(items)})
        return self._basis[key]

    def dim(self, p: int, nu: int) -> int:
        return len(self.basis(p, nu)[0])

    def vector(self, c: "Chain") -> np.ndarray:
        items, idx = self.basis(c.p, c.nu)
        v = self.field.zeros(len(items))
        for J, poly in c.coeffs.items():
            for m, a in poly.terms.items():
                try:
                    v[idx[(J, m)]] = a
                except KeyError:
                    raise ValueError(f"coefficient on {format_wedge(J)} has the wrong degree") from None
        return v

    def chain(self, v: np.ndarray, p: int, nu: int) -> "Chain":
        items, _ = self.basis(p, nu)
        coeffs: dict = {}
        for (J, m), a in zip(items, v):
            if a != 0:
                coeffs.setdefault(J, {})[m] = a
        return Chain(self, p, nu, {J: WPoly(self.ring, t) for J, t in coeffs.items()})

    # --- differential -----------------------------------------------------

    def differential_matrix(self, p: int, nu: int) -> np.ndarray:
        """Matrix of d: (K_p)_nu -> (K_{p-1})_nu; columns index the source basis."""
        key = (p, nu)
        if key in self._dmat:
            return self._dmat[key]
        f = self.field
        src, _ = self.basis(p, nu)
        tgt, tidx = self.basis(p - 1, nu)
        mat = f.zeros((len(tgt), len(src)))
        for col, (J, m) in enumerate(src):
            for l, j in enumerate(J):
                rest = J[:l] + J[l + 1:]
                for hm, hc in self.sequence[j].terms.items():
                    row = tidx[(rest, mono_mul(m, hm))]
                    mat[row, col] = f(mat[row, col] + (hc if l % 2 == 0 else -hc))
        self._dmat[key] = mat
        return mat

    def differential(self, c: "Chain") -> "Chain":
        if c.p < 1:
            raise ValueError("differential of a 0-chain leaves the complex")
        out: dict = {}
        for J, poly in c.coeffs.items():
            for l, j in enumerate(J):
                rest = J[:l] + J[l + 1:]
                term = poly * self.sequence[j]
                if l % 2:
                    term = -term
                out[rest] = out[rest] + term if rest in out else term
        return Chain(self, c.p - 1, c.nu, out)

    # --- homology -----------------------------------------------------------

    def boundaries(self, p: int, nu: int) -> Reducer:
        key = (p, nu)
        if key not in self._boundary:
            dm = self.differential_matrix(p + 1, nu)
            self._boundary[key] = Reducer(self.field, dm.T.copy(), self.dim(p, nu))
        return self._boundary[key]

    def homology(self, p: int, nu: int) -> "HomologyPiece":
        key = (p, nu)
        if key not in self._homology:
            self._homology[key] = HomologyPiece(self, p, nu)
        return self._homology[key]

    def is_cycle(self, c: "Chain") -> bool:
        return c.p == 0 or self.differential(c).is_zero()

    def is_boundary(self, c: "Chain", preimage: bool = False):
        """Whether the cycle ``c`` lies in the image of d; optionally with a preimage."""
        if not self.is_cycle(c):
            raise NotACycle(self.differential(c))
        v = self.vector(c)
        if not preimage:
            return self.boundaries(c.p, c.nu).contains(v)
        x = solve_in_span(self.field, self.differential_matrix(c.p + 1, c.nu), v)
        if x is None:
            return False, None
        return True, self.chain(x, c.p + 1, c.nu)

    def shift_map(self, p: int, nu: int, mono: Monomial) -> np.ndarray:
        """Target indices in degree ``nu + wdeg(mono)`` of ``(J, m) -> (J, m*mono)``."""
        items, _ = self.basis(p, nu)
        _, tidx = self.basis(p, nu + self.ring.wdeg(mono))
        return np.array([tidx[(J, mono_mul(m, mono))] for J, m in items], dtype=np.int64)

    def multiply_vectors(self, v: np.ndarray, p: int, nu: int, mono: Monomial) -> np.ndarray:
        """Multiply chain coordinate vectors (1-d or row batch) by a monomial."""
        target = self.dim(p, nu + self.ring.wdeg(mono))
        idx = self.shift_map(p, nu, mono)
        if v.ndim == 1:
            out = self.field.zeros(target)
            out[idx] = v
        else:
            out = self.field.zeros((v.shape[0], target))
            out[:, idx] = v
        return out

    def euler_characteristic(self, nu: int) -> tuple[int, int]:
        """(sum_p (-1)^p dim K_p, sum_p (-1)^p dim H_p) in degree ``nu``."""
        chains = sum((-1) ** p * self.dim(p, nu) for p in range(self.r + 1))
        hom = sum((-1) ** p * self.homology(p, nu).dim for p in range(self.r + 1))
        return chains, hom


class Chain:
    """An element of ``(K_p)_nu``: a homogeneous coefficient per wedge index."""

    __slots__ = ("ctx", "p", "nu", "coeffs")

    def __init__(self, ctx: KoszulContext, p: int, nu: int, coeffs: Optional[dict] = None):
        self.ctx = ctx
        self.p = p
        self.nu = nu
        clean = {}
        for J, poly in (coeffs or {}).items():
            J = tuple(J)
            if len(J) != p:
                raise ValueError(f"wedge index {J} in a {p}-chain")
            if poly:
                want = nu - ctx.shift(J)
                if not poly.is_homogeneous(want):
                    raise ValueError(
                        f"coefficient {poly} on {format_wedge(J)} is not homogeneous of degree {want}")
                clean[J] = poly
        self.coeffs: dict[WedgeIndex, WPoly] = dict(sorted(clean.items()))

    @classmethod
    def basis_element(cls, ctx: KoszulContext, J: WedgeIndex, poly: Optional[WPoly] = None) -> "Chain":
        poly = poly if poly is not None else ctx.ring.one()
        d = poly.homogeneous_degree()
        return cls(ctx, len(J), ctx.shift(J) + d, {tuple(J): poly})

    def is_zero(self) -> bool:
        return not self.coeffs

    def _same(self, other: "Chain"):
        if self.ctx is not other.ctx or self.p != other.p or self.nu != other.nu:
            raise ValueError("chains live in different graded pieces")

    def __add__(self, other: "Chain") -> "Chain":
        self._same(other)
        out = dict(self.coeffs)
        for J, poly in other.coeffs.items():
            out[J] = out[J] + poly if J in out else poly
        return Chain(self.ctx, self.p, self.nu, out)

    def __neg__(self) -> "Chain":
        return Chain(self.ctx, self.p, self.nu, {J: -c for J, c in self.coeffs.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scale(self, c) -> "Chain":
        return Chain(self.ctx, self.p, self.nu, {J: q.scale(c) for J, q in self.coeffs.items()})

    def mul_poly(self, poly: WPoly) -> "Chain":
        d = poly.homogeneous_degree() if poly else 0
        return Chain(self.ctx, self.p, self.nu + d, {J: q * poly for J, q in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.ctx is other.ctx and self.p == other.p and self.nu == other.nu
                and self.coeffs == other.coeffs)

    def terms(self, names: Optional[Sequence[str]] = None) -> list[str]:
        """One display line per nonzero wedge coefficient.

        Over the rationals the sign of the leading coefficient is pulled out
        front, so ``-X^2 - X*Y`` prints as ``(-1)·(X^2 + X*Y)``.
        """
        out = []
        rational = self.ctx.field.is_rational
        for J, poly in self.coeffs.items():
            sign = 1
            if rational and poly.leading()[1] < 0:
                sign, poly = -1, -poly
            out.append(f"({sign:+d})·({poly.format(names)})·{format_wedge(J)}")
        return out

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        return " ".join(self.terms(names)) if self.coeffs else "0"

    def __repr__(self):
        return f"Chain(p={self.p}, nu={self.nu}, {self.format()})"


class HomologyPiece:
    """H_p(K)_nu with a deterministic class-coordinate map.

    Cycles are reduced modulo the boundary space; the residuals of a cycle
    basis are brought to echelon form and their rows serve both as class
    representatives and as the coordinate system (coordinates are read off at
    the echelon pivots).
    """

    def __init__(self, ctx: KoszulContext, p: int, nu: int):
        self.ctx = ctx
        self.p = p
        self.nu = nu
        f = ctx.field
        self.ambient = ctx.dim(p, nu)
        if p == 0:
            self.cycles = f.eye(self.ambient)
        else:
            self.cycles = nullspace(f, ctx.differential_matrix(p, nu))
        self.boundary = ctx.boundaries(p, nu)
        residuals = self.boundary.reduce(self.cycles.T.copy()) if self.cycles.shape[1] else f.zeros((0, self.ambient))
        self.classes = Reducer(f, residuals, self.ambient)
        self.representatives = self.classes.rows

    @property
    def dim(self) -> int:
        return self.classes.rank

    @property
    def cycle_dim(self) -> int:
        return self.cycles.shape[1]

    @property
    def boundary_dim(self) -> int:
        return self.boundary.rank

    def coords_of_vector(self, v: np.ndarray, check: bool = True) -> np.ndarray:
        """Class coordinates of a cycle vector (or a row batch of them)."""
        f = self.ctx.field
        if check and self.p > 0:
            dm = self.ctx.differential_matrix(self.p, self.nu)
            img = f.matmul(dm, v) if v.ndim == 1 else f.matmul(v, dm.T.copy())
            if np.any(img != 0):
                if v.ndim == 1:
                    raise NotACycle(self.ctx.chain(img, self.p - 1, self.nu))
                raise ValueError("batch contains a non-cycle")
        res = self.boundary.reduce(v)
        coords = self.classes.coords(res)
        if coords is None:
            raise AssertionError("residual of a cycle left the class span")
        return coords

    def class_coords(self, c: Chain) -> np.ndarray:
        if c.p != self.p or c.nu != self.nu:
            raise ValueError("chain lives in another graded piece")
        return self.coords_of_vector(self.ctx.vector(c))

    def lift(self, coords: np.ndarray) -> np.ndarray:
        """A cycle vector representing the class with these coordinates."""
        f = self.ctx.field
        if self.dim == 0:
            return f.zeros(self.ambient) if coords.ndim == 1 else f.zeros((coords.shape[0], self.ambient))
        return f.matmul(coords, self.representatives)

    def lift_chain(self, coords: np.ndarray) -> Chain:
        return self.ctx.chain(self.lift(coords), self.p, self.nu)

    def multiply_matrix(self, mono: Monomial) -> np.ndarray:
        """Matrix (rows: source classes) of multiplication by a monomial."""
        ctx = self.ctx
        target = ctx.homology(self.p, self.nu + ctx.ring.wdeg(mono))
        f = ctx.field
        if self.dim == 0:
            return f.zeros((0, target.dim))
        shifted = ctx.multiply_vectors(self.representatives, self.p, self.nu, mono)
        return target.coords_of_vector(shifted, check=False)

    def multiply_class(self, coords: np.ndarray, j: int) -> np.ndarray:
        """Coordinates of ``X_j`` times the class (0-based variable index)."""
        e = [0] * self.ctx.ring.nvars
        e[j] = 1
        return self.multiply_monomial(coords, tuple(e))

    def multiply_monomial(self, coords: np.ndarray, mono: Monomial) -> np.ndarray:
        ctx = self.ctx
        target = ctx.homology(self.p, self.nu + ctx.ring.wdeg(mono))
        v = ctx.multiply_vectors(self.lift(coords), self.p, self.nu, mono)
        return target.coords_of_vector(v, check=False)
