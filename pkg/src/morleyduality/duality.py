"""The map omega from the graded dual of B onto the m-torsion of H_{r-n}.

For ``u`` in the dual of ``B_{delta-nu}``, ``omega(u)`` is the class of the
contraction of ``nabla_{nu, delta-nu}`` with ``u``.  ``check_duality`` runs
the whole pipeline and compares, degree by degree, the rank of omega with the
dimension of the torsion of ``H_{r-n}`` and of ``B_{delta-nu}``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exactalg import Field, Reducer, nullspace, rank, solve_in_span
from .koszul import Chain, HomologyPiece, KoszulContext
from .morley import (MorleyData, build_morley, contract, delta_form, dp_check,
                     telescoping_decomposition, wiebe_check)
from .quotient import DualVector, Quotient, SystemConfig
from .wpoly import canonical_names

log = logging.getLogger(__name__)

VERIFIED = "DUALITY VERIFIED"
MISMATCH = "DUALITY MISMATCH"
NOT_CERTIFIED = "NOT CERTIFIED"
NOT_CERTIFIED_STATUS = "hypothesis depth_I(C)=n not certified"


class WindowTooSmall(RuntimeError):
    pass


class ImageNotTorsion(RuntimeError):
    pass


class DegreeOutOfRange(ValueError):
    pass


def default_slack(cfg: SystemConfig) -> int:
    return max(cfg.weights) + max(cfg.degrees)


class Duality:
    """All per-degree data for one system: B, H_{r-n}, torsion, omega."""

    def __init__(self, cfg: SystemConfig, slack: Optional[int] = None,
                 search_bound: Optional[int] = None):
        self.cfg = cfg
        self.field: Field = cfg.field
        self.p = cfg.r - cfg.n
        self.delta = cfg.delta
        self.slack = default_slack(cfg) if slack is None else slack
        self.top = self.delta + self.slack
        self.quotient = Quotient(cfg)
        self.search_bound = self.quotient.default_search_bound() if search_bound is None else search_bound
        self.s0 = self.quotient.finiteness_certificate(self.search_bound)
        self.ctx = KoszulContext(cfg.ring, cfg.polys)
        self._morley: Optional[MorleyData] = None
        self._torsion: Optional[dict[int, np.ndarray]] = None
        self.torsion_method: Optional[str] = None

    @property
    def certified(self) -> bool:
        return self.s0 is not None

    @property
    def window(self) -> range:
        return range(0, self.top + 1)

    @property
    def morley(self) -> MorleyData:
        if self._morley is None:
            self._morley = build_morley(self.cfg, self.quotient, self.ctx)
        return self._morley

    def homology(self, nu: int) -> HomologyPiece:
        return self.ctx.homology(self.p, nu)

    # --- torsion ------------------------------------------------------------

    def _strip_vanishes(self) -> bool:
        width = max(self.cfg.weights)
        return all(self.homology(mu).dim == 0 for mu in range(max(0, self.top - width + 1), self.top + 1))

    def torsion_fixpoint(self) -> dict[int, np.ndarray]:
        """Iterate ``T_mu = {x : X_j x in T_{mu+m_j} for all j}`` from ``T = 0``.

        Degrees above the window are unknown, so the iteration runs twice:
        once treating them as zero (a lower bound for the torsion) and once
        as everything (an upper bound).  Agreement settles the answer;
        otherwise :class:`WindowTooSmall` is raised.  Bases are returned as
        rows in homology coordinates.
        """
        lower = self._fixpoint(beyond_full=False)
        upper = self._fixpoint(beyond_full=True)
        for mu in self.window:
            if lower[mu].shape[0] != upper[mu].shape[0]:
                raise WindowTooSmall(
                    f"torsion in degree {mu} undetermined within window [0, {self.top}]; raise --slack")
        return lower

    def _fixpoint(self, beyond_full: bool) -> dict[int, np.ndarray]:
        f = self.field
        weights = self.cfg.weights
        n = self.cfg.n
        mult: dict = {}
        for mu in self.window:
            for j in range(n):
                if mu + weights[j] <= self.top:
                    e = tuple(1 if k == j else 0 for k in range(n))
                    mult[mu, j] = self.homology(mu).multiply_matrix(e)
        T = {mu: f.zeros((0, self.homology(mu).dim)) for mu in self.window}
        while True:
            changed = False
            new = {}
            for mu in self.window:
                h = self.homology(mu).dim
                if h == 0:
                    new[mu] = f.zeros((0, 0))
                    continue
                blocks = []
                blocked = False
                for j in range(n):
                    nu = mu + weights[j]
                    if nu > self.top:
                        if not beyond_full:
                            blocked = True
                        continue
                    red = Reducer(f, T[nu], self.homology(nu).dim)
                    # x -> residual of x*M modulo T_nu, as a linear map on x
                    blocks.append(red.quotient(mult[mu, j]))
                if blocked:
                    new[mu] = f.zeros((0, h))
                    continue
                if blocks:
                    stacked = np.concatenate(blocks, axis=1)
                    ker = nullspace(f, stacked.T.copy())
                    new[mu] = ker.T.copy()
                else:
                    new[mu] = f.eye(h)
                if new[mu].shape[0] != T[mu].shape[0]:
                    changed = True
            T = new
            if not changed:
                return T

    def torsion(self) -> dict[int, np.ndarray]:
        """Torsion basis (rows, homology coordinates) for every window degree."""
        if self._torsion is not None:
            return self._torsion
        if self.certified and self._strip_vanishes():
            self.torsion_method = "short-circuit"
            self._torsion = {mu: self.field.eye(self.homology(mu).dim) for mu in self.window}
        else:
            self.torsion_method = "fixpoint"
            self._torsion = self.torsion_fixpoint()
        return self._torsion

    def torsion_dim(self, nu: int) -> int:
        if nu < 0:
            return 0
        if nu > self.top:
            raise DegreeOutOfRange(f"degree {nu} above window {self.top}")
        return self.torsion()[nu].shape[0]

    # --- omega ---------------------------------------------------------------

    def omega_chain(self, u: DualVector, nu: Optional[int] = None) -> Chain:
        nu = self.delta - u.degree if nu is None else nu
        if u.degree != self.delta - nu or not 0 <= nu <= self.delta:
            raise DegreeOutOfRange(f"degree {nu} outside [0, {self.delta}]")
        comp = self.morley.nabla_component(nu)
        if not comp:
            return Chain(self.ctx, self.p, nu, {})
        return contract(self.ctx, comp, nu, u.coords)

    def omega_classes(self, nu: int) -> np.ndarray:
        """Rows: homology coordinates of omega on the dual basis of ``B_{delta-nu}``."""
        q = self.delta - nu
        h = self.homology(nu)
        rows = [h.class_coords(self.omega_chain(u, nu)) for u in self.quotient.dual_basis(q)]
        if not rows:
            return self.field.zeros((0, h.dim))
        return np.array(rows, dtype=self.field.dtype).reshape(len(rows), h.dim)

    def omega_matrix(self, nu: int) -> np.ndarray:
        """Matrix of omega_nu: columns are dual basis vectors, rows torsion basis coordinates."""
        if nu < 0 or nu > self.top:
            raise DegreeOutOfRange(f"degree {nu} outside the window [0, {self.top}]")
        if nu > self.delta:
            return self.field.zeros((self.torsion_dim(nu), 0))
        if not self.certified:
            raise RuntimeError("omega into the torsion needs the finiteness certificate")
        tors = self.torsion()[nu]
        classes = self.omega_classes(nu)
        cols = []
        for row in classes:
            x = solve_in_span(self.field, tors.T.copy(), row) if tors.shape[0] else (
                self.field.zeros(0) if not np.any(row != 0) else None)
            if x is None:
                raise ImageNotTorsion(f"omega image in degree {nu} is not m-torsion")
            cols.append(x)
        out = self.field.zeros((tors.shape[0], len(cols)))
        for k, c in enumerate(cols):
            out[:, k] = c
        return out

    def lambda_coords(self) -> np.ndarray:
        return self.homology(self.delta).class_coords(self.morley.lam)

    # --- pairing ---------------------------------------------------------------

    def pairing_matrix(self, nu: int) -> np.ndarray:
        """Rows: ``B_{delta-nu}`` basis; columns: torsion basis of ``H_nu``.

        Entry ``(b, h)`` is the coefficient of ``b h`` on Lambda-bar in the
        degree-delta torsion line.
        """
        f = self.field
        tors_top = self.torsion()[self.delta]
        if tors_top.shape[0] != 1:
            raise ValueError(f"degree-delta torsion is not a line (dimension {tors_top.shape[0]})")
        ref = self.lambda_coords()
        ref_t = solve_in_span(f, tors_top.T.copy(), ref)
        if ref_t is None or ref_t[0] == 0:
            raise ValueError("Lambda-bar does not span the degree-delta torsion")
        scale = f.inv(ref_t[0])
        q = self.delta - nu
        bas = self.quotient.b_piece(q).basis
        tors = self.torsion()[nu]
        h = self.homology(nu)
        out = f.zeros((len(bas), tors.shape[0]))
        for col, t in enumerate(tors):
            for row, mono in enumerate(bas):
                prod = h.multiply_monomial(t, mono)
                c = solve_in_span(f, tors_top.T.copy(), prod)
                if c is None:
                    raise ImageNotTorsion("product left the torsion line")
                out[row, col] = f(c[0] * scale)
        return out

    # --- B-linearity -----------------------------------------------------------

    def b_linearity_check(self, b, s: int, u: DualVector) -> bool:
        """``omega(b.u) == b omega(u)`` as classes in degree ``delta - u.degree + s``."""
        nu = self.delta - u.degree
        target = nu + s
        lhs = self.homology(target).class_coords(self.omega_chain(self.quotient.dual_action(b, s, u), target))
        rep = self.omega_chain(u, nu)
        poly = self.quotient.element(b, s)
        if poly:
            prod = rep.mul_poly(poly)
        else:
            prod = Chain(self.ctx, self.p, target, {})
        rhs = self.homology(target).class_coords(prod)
        return bool(np.all(lhs == rhs))

    # --- lemma checks ------------------------------------------------------------

    def lemma_checks(self) -> dict[str, bool]:
        md = self.morley
        cfg = self.cfg
        out = {}
        out["delta_cycle"] = md.diff_ctx.is_cycle(md.delta)
        out["lambda_cycle"] = self.ctx.is_cycle(md.lam)
        for j in range(cfg.n):
            out[f"dp_{j + 1}"] = dp_check(md.delta, j, md.decomposition)
        rev = telescoping_decomposition(cfg, "reverse", md.diff_ctx.ring)
        out["wiebe"] = wiebe_check(md.delta, delta_form(cfg, rev, md.diff_ctx))
        out["nabla_top_is_lambda"] = md.nabla_top_chain() == md.lam
        out["lambda_class_nonzero"] = bool(np.any(self.lambda_coords() != 0)) if self.certified else True
        return out


@dataclass
class DegreeRow:
    nu: int
    dimB_dual: int
    dimH: int
    dimTorsion: Optional[int]
    rankOmega: Optional[int]
    pairingRank: Optional[int]
    verdict: str

    def as_dict(self) -> dict:
        return {"nu": self.nu, "dimB_dual": self.dimB_dual, "dimH": self.dimH,
                "dimTorsion": self.dimTorsion, "rankOmega": self.rankOmega,
                "pairingRank": self.pairingRank, "verdict": self.verdict}


@dataclass
class DualityReport:
    cfg: SystemConfig
    delta: int
    hilbert: list[int]
    s0: Optional[int]
    search_bound: int
    slack: int
    window_top: int
    rows: list[DegreeRow]
    lemmas: dict[str, bool]
    torsion_method: Optional[str]
    morley_terms: list[str]
    lambda_terms: list[str]
    verdict: str
    notes: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.s0 is not None

    @property
    def certificate_status(self) -> str:
        return "certified" if self.certified else NOT_CERTIFIED_STATUS


def check_duality(cfg: SystemConfig, slack: Optional[int] = None,
                  search_bound: Optional[int] = None) -> DualityReport:
    dual = Duality(cfg, slack, search_bound)
    return dual_report(dual)


def dual_report(dual: Duality) -> DualityReport:
    cfg = dual.cfg
    f = dual.field
    md = dual.morley
    lemmas = dual.lemma_checks()
    names = _display_names(cfg)
    delta_terms = md.delta.terms(names[1])
    lambda_terms = md.lam.terms(names[0])
    rows: list[DegreeRow] = []
    notes = []
    if not dual.certified:
        hil = dual.quotient.hilbert(dual.search_bound)
        notes.append(f"B does not vanish on any strip of width {max(cfg.weights)} "
                     f"starting at or below {dual.search_bound}; no duality claim is made")
        for nu in dual.window:
            dimB = dual.quotient.dim(dual.delta - nu)
            h = dual.homology(nu)
            rank_h = None
            if nu <= dual.delta:
                rank_h = rank(f, dual.omega_classes(nu)) if dimB and h.dim else 0
            rows.append(DegreeRow(nu, dimB, h.dim, None, rank_h, None, "unverified"))
        return DualityReport(cfg, dual.delta, hil, None, dual.search_bound, dual.slack, dual.top, rows,
                             lemmas, None, delta_terms, lambda_terms, NOT_CERTIFIED, notes)

    hil = dual.quotient.hilbert(max(dual.s0 - 1, 0))
    ok = all(lemmas.values())
    if not ok:
        notes.append("lemma failures: " + ", ".join(k for k, v in lemmas.items() if not v))
    try:
        tors = dual.torsion()
    except WindowTooSmall as exc:
        notes.append(str(exc))
        tors = None
    top_line = tors is not None and tors[dual.delta].shape[0] == 1
    for nu in dual.window:
        dimB = dual.quotient.dim(dual.delta - nu)
        h = dual.homology(nu)
        if tors is None:
            rows.append(DegreeRow(nu, dimB, h.dim, None, None, None, "mismatch"))
            ok = False
            continue
        dt = tors[nu].shape[0]
        if nu > dual.delta:
            good = dt == 0 and dimB == 0
            rows.append(DegreeRow(nu, dimB, h.dim, dt, 0, 0, "zero" if good else "mismatch"))
            ok = ok and good
            continue
        try:
            om = dual.omega_matrix(nu)
            rk = rank(f, om)
        except ImageNotTorsion as exc:
            notes.append(str(exc))
            rk = None
        pr = None
        if top_line:
            pr = rank(f, dual.pairing_matrix(nu))
        good = rk is not None and rk == dimB == dt and pr == dimB
        verdict = ("iso" if dimB else "zero") if good else "mismatch"
        rows.append(DegreeRow(nu, dimB, h.dim, dt, rk, pr, verdict))
        ok = ok and good
    return DualityReport(cfg, dual.delta, hil, dual.s0, dual.search_bound, dual.slack, dual.top, rows,
                         lemmas, dual.torsion_method, delta_terms, lambda_terms,
                         VERIFIED if ok else MISMATCH, notes)


def _display_names(cfg: SystemConfig):
    n = cfg.n
    return canonical_names(n, "X"), canonical_names(n, "X") + canonical_names(n, "Y")
