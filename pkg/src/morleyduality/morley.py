"""Generalized Morley forms.

For each ``f_i`` a decomposition ``f_i(X) - f_i(Y) = sum_j (X_j - Y_j) g_ij``
is produced by telescoping; the Morley form is the Koszul chain

    Delta = sum_S eps(S) det(g_{S, 1..n}) e_{complement of S}

over the n-subsets ``S`` of ``{1..r}``.  Setting ``Y = 0`` in the ``g_ij``
gives the analogous chain Lambda for the sequence ``f`` over C, and pushing
Delta into ``C (x) B`` and splitting by bidegree gives the components
``nabla[(p, q)]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .koszul import Chain, KoszulContext, WedgeIndex
from .quotient import Quotient, SystemConfig
from .wpoly import Ring, WPoly, divide_linear_diff, monomial_index, monomials_of_wdeg


class InvariantBreach(AssertionError):
    """An identity that holds by construction failed; indicates a bug."""


@dataclass
class Decomposition:
    direction: str
    doubled: Ring
    g: list[list[WPoly]]  # r x n

    def verify(self, cfg: SystemConfig) -> None:
        x_side, y_side = embeddings(cfg.ring, self.doubled)
        n = cfg.n
        for i, f in enumerate(cfg.polys):
            lhs = f.substitute(x_side) - f.substitute(y_side)
            rhs = self.doubled.zero()
            for j in range(n):
                rhs = rhs + (self.doubled.var(j) - self.doubled.var(n + j)) * self.g[i][j]
            if lhs != rhs:
                raise InvariantBreach(f"decomposition of f_{i + 1} does not sum to f(X) - f(Y)")


def embeddings(ring: Ring, doubled: Ring) -> tuple[list[WPoly], list[WPoly]]:
    """Images of ``X_i`` under ``C -> C (x) 1`` and ``C -> 1 (x) C``."""
    n = ring.n
    return ([doubled.var(i) for i in range(n)], [doubled.var(n + i) for i in range(n)])


def difference_context(cfg: SystemConfig) -> KoszulContext:
    """Koszul complex of ``f_i(X) - f_i(Y)`` over the doubled ring."""
    doubled = cfg.ring.doubled_ring()
    xs, ys = embeddings(cfg.ring, doubled)
    return KoszulContext(doubled, [f.substitute(xs) - f.substitute(ys) for f in cfg.polys])


def telescoping_decomposition(cfg: SystemConfig, direction: str = "forward",
                              doubled: Optional[Ring] = None) -> Decomposition:
    """Quotients of consecutive mixed substitutions by ``X_j - Y_j``.

    forward: ``P_j = f(Y_1..Y_j, X_{j+1}..X_n)``, so ``g_ij = (P_{j-1} - P_j) / (X_j - Y_j)``;
    reverse: ``P_j = f(X_1..X_j, Y_{j+1}..Y_n)``, so ``g_ij = (P_j - P_{j-1}) / (X_j - Y_j)``.
    """
    if direction not in ("forward", "reverse"):
        raise ValueError(f"unknown direction {direction!r}")
    doubled = doubled or cfg.ring.doubled_ring()
    xs, ys = embeddings(cfg.ring, doubled)
    n = cfg.n

    def mixed(f: WPoly, ymask) -> WPoly:
        return f.substitute([ys[k] if ymask[k] else xs[k] for k in range(n)])

    g = []
    for f in cfg.polys:
        row = [None] * n
        for j in range(n):
            if direction == "forward":
                before = [k < j for k in range(n)]
                after = [k <= j for k in range(n)]
            else:
                before = [k > j for k in range(n)]
                after = [k >= j for k in range(n)]
            diff = mixed(f, before) - mixed(f, after)
            try:
                row[j] = divide_linear_diff(diff, j)
            except ArithmeticError as exc:
                raise InvariantBreach(str(exc)) from exc
        g.append(row)
    dec = Decomposition(direction, doubled, g)
    dec.verify(cfg)
    return dec


def shuffle_sign(S, r: int) -> int:
    """Signature of the shuffle listing ``S`` (ascending) then its complement."""
    S = sorted(S)
    rest = [k for k in range(r) if k not in S]
    inversions = sum(1 for s in S for t in rest if t < s)
    return -1 if inversions % 2 else 1


def determinant(rows: list[list[WPoly]], ring: Ring) -> WPoly:
    """Cofactor expansion along the first row."""
    size = len(rows)
    if size == 0:
        return ring.one()
    if size == 1:
        return rows[0][0]
    out = ring.zero()
    for c in range(size):
        a = rows[0][c]
        if not a:
            continue
        minor = [row[:c] + row[c + 1:] for row in rows[1:]]
        term = a * determinant(minor, ring)
        out = out - term if c % 2 else out + term
    return out


def shuffle_form(ctx: KoszulContext, matrix: list[list[WPoly]], nu: int) -> Chain:
    """``sum_S eps(S) det(matrix[S]) e_{complement}`` as a chain of degree ``nu``."""
    r = len(matrix)
    n = len(matrix[0]) if matrix else 0
    coeffs = {}
    for S in combinations(range(r), n):
        det = determinant([matrix[s] for s in S], ctx.ring)
        if det:
            T = tuple(k for k in range(r) if k not in S)
            coeffs[T] = det if shuffle_sign(S, r) > 0 else -det
    return Chain(ctx, r - n, nu, coeffs)


def delta_form(cfg: SystemConfig, dec: Decomposition, ctx: Optional[KoszulContext] = None) -> Chain:
    ctx = ctx or difference_context(cfg)
    delta = shuffle_form(ctx, dec.g, cfg.delta)
    if not ctx.is_cycle(delta):
        raise InvariantBreach("Morley form is not a cycle")
    return delta


def lambda_matrix(cfg: SystemConfig, dec: Decomposition) -> list[list[WPoly]]:
    """``f_ij = g_ij(X, 0)``, as polynomials over C."""
    n = cfg.n
    ring = cfg.ring
    images = [ring.var(k) for k in range(n)] + [ring.zero()] * n
    return [[g.substitute(images) for g in row] for row in dec.g]


def lambda_form(cfg: SystemConfig, dec: Decomposition, ctx: Optional[KoszulContext] = None) -> Chain:
    ctx = ctx or KoszulContext(cfg.ring, cfg.polys)
    lam = shuffle_form(ctx, lambda_matrix(cfg, dec), cfg.delta)
    if not ctx.is_cycle(lam):
        raise InvariantBreach("Lambda is not a cycle")
    return lam


def nabla(delta: Chain, quotient: Quotient) -> dict[tuple[int, int], dict[WedgeIndex, np.ndarray]]:
    """Image of Delta in ``C (x) B`` split by bidegree.

    ``out[(p, q)][J]`` has rows indexed by the ``B_q`` basis and columns by the
    X-monomials of degree ``p - D_J``; zero components are dropped.
    """
    ctx = delta.ctx
    ring = quotient.ring
    fld = quotient.field
    n = ring.n
    out: dict = {}
    for J, poly in delta.coeffs.items():
        DJ = ctx.shift(J)
        for mono, c in poly.terms.items():
            alpha, beta = mono[:n], mono[n:]
            q = ring.wdeg(beta)
            if quotient.dim(q) == 0:
                continue
            nf = quotient.normal_form_monomial(beta)
            if not np.any(nf != 0):
                continue
            p = ring.wdeg(alpha) + DJ
            comp = out.setdefault((p, q), {})
            if J not in comp:
                comp[J] = fld.zeros((quotient.dim(q), len(monomials_of_wdeg(ring, p - DJ))))
            col = monomial_index(ring, p - DJ)[alpha]
            comp[J][:, col] = fld.norm(comp[J][:, col] + nf * c)
    return {
        key: {J: m for J, m in sorted(comp.items()) if np.any(m != 0)}
        for key, comp in sorted(out.items())
        if any(np.any(m != 0) for m in comp.values())
    }


def contract(ctx: KoszulContext, nabla_pq: dict, p: int, u: np.ndarray) -> Chain:
    """``sum_b u(b) * X^alpha e_J`` over one bigraded component of nabla."""
    fld = ctx.field
    coeffs = {}
    for J, mat in nabla_pq.items():
        vec = fld.matmul(u, mat) if mat.shape[0] else fld.zeros(mat.shape[1])
        coeffs[J] = WPoly.from_coords(ctx.ring, p - ctx.shift(J), vec)
    return Chain(ctx, ctx.r - ctx.ring.n, p, coeffs)


def interior(ctx: KoszulContext, c: Chain, psi: list[WPoly], weight: int) -> Chain:
    """Contraction by the functional ``e_k -> psi[k]`` (same sign rule as d).

    ``weight`` is the amount by which the functional lowers the internal degree.
    """
    out: dict = {}
    for J, poly in c.coeffs.items():
        for l, j in enumerate(J):
            if not psi[j]:
                continue
            rest = J[:l] + J[l + 1:]
            term = poly * psi[j]
            if l % 2:
                term = -term
            out[rest] = out[rest] + term if rest in out else term
    return Chain(ctx, c.p - 1, c.nu - weight, out)


def dp_preimage(dec: Decomposition, delta: Chain, j: int) -> Optional[Chain]:
    """A chain whose differential is ``(X_j - Y_j) Delta``, built from the g_ij.

    With ``psi_k`` the functional ``e_i -> g_ik`` and ``omega = e_1 ^ .. ^ e_r``,
    the contraction ``iota_{psi_n} .. iota_{psi_1} omega`` is ``+-Delta``; leaving
    out ``psi_j`` gives a chain ``G`` with ``d G = (-1)^{n-1-j} (X_j - Y_j) (that)``.
    Returns ``None`` only if the scaled candidate fails the exact check.
    """
    ctx = delta.ctx
    ring = ctx.ring
    n, r = ring.n, ctx.r
    top = Chain.basis_element(ctx, tuple(range(r)))
    psi = [[dec.g[i][k] for i in range(r)] for k in range(n)]

    def contract_all(skip: Optional[int]) -> Chain:
        c = top
        for k in range(n):
            if k != skip:
                c = interior(ctx, c, psi[k], ring.weights[k])
        return c

    full = contract_all(None)
    if full.is_zero() or delta.is_zero():
        sign = 1
    elif full == delta:
        sign = 1
    elif full == -delta:
        sign = -1
    else:
        return None
    cand = contract_all(j)
    if (n - 1 - j) % 2:
        sign = -sign
    cand = cand.scale(sign)
    lin = ring.var(j) - ring.var(n + j)
    if cand.is_zero():
        return cand if delta.mul_poly(lin).is_zero() else None
    return cand if ctx.differential(cand) == delta.mul_poly(lin) else None


def dp_check(delta: Chain, j: int, dec: Optional[Decomposition] = None,
             brute_force: bool = False) -> bool:
    """Whether ``(X_j - Y_j) Delta`` is a boundary of the difference complex.

    An explicit preimage from ``dec`` settles the question when it verifies;
    otherwise (or with ``brute_force``) the boundary system is solved.
    """
    ctx = delta.ctx
    if dec is not None and not brute_force:
        if dp_preimage(dec, delta, j) is not None:
            return True
    ring = ctx.ring
    lin = ring.var(j) - ring.var(ring.n + j)
    return bool(ctx.is_boundary(delta.mul_poly(lin)))


def wiebe_check(delta_a: Chain, delta_b: Chain) -> bool:
    """Whether two Morley forms differ by a boundary."""
    diff = delta_a - delta_b
    if diff.is_zero():
        return True
    return bool(delta_a.ctx.is_boundary(diff))


@dataclass
class MorleyData:
    cfg: SystemConfig
    decomposition: Decomposition
    delta: Chain
    lam: Chain
    nabla: dict
    diff_ctx: KoszulContext
    ctx: KoszulContext

    def nabla_component(self, p: int) -> dict:
        return self.nabla.get((p, self.cfg.delta - p), {})

    def nabla_top_chain(self) -> Chain:
        """``nabla_{delta,0}`` read as a chain over C (B_0 = k)."""
        comp = self.nabla_component(self.cfg.delta)
        u = self.cfg.field.eye(1)[0]
        return contract(self.ctx, comp, self.cfg.delta, u)


def build_morley(cfg: SystemConfig, quotient: Quotient, ctx: Optional[KoszulContext] = None,
                 diff_ctx: Optional[KoszulContext] = None) -> MorleyData:
    diff_ctx = diff_ctx or difference_context(cfg)
    ctx = ctx or KoszulContext(cfg.ring, cfg.polys)
    dec = telescoping_decomposition(cfg, "forward", diff_ctx.ring)
    delta = delta_form(cfg, dec, diff_ctx)
    lam = lambda_form(cfg, dec, ctx)
    return MorleyData(cfg, dec, delta, lam, nabla(delta, quotient), diff_ctx, ctx)
