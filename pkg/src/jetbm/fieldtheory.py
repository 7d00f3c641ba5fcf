"""Gravitational potential, local Einstein-equation blocks, stress-energy
identities, conservation-law residuals, the unsolvable h_11 ODE system, and
the electromagnetic 2-form.

The Einstein blocks and conservation laws form the closed field-theory layer
built on the Ricci table with diagonal 3/(4 y_i^2) (``bm_s_ricci_field``) and
on xi_11 = (9 h_11 + kappa^2) / (2 K).  That layer is internally consistent:
the raised identities follow from g-/h-raising the blocks and the computed
divergences reproduce the closed right-hand sides at machine precision.  For
non-Berwald-Moor tensors the honest Ricci contraction feeds the same block
formulas and divergences fall back to the unreduced covariant definitions
with finite differences.
"""

from dataclasses import dataclass

import numpy as np

from .connection import apriori_nlc, cartan_connection, christoffel_time
from .curvature import bm_s_raised_field, bm_s_ricci_field, ricci_scalar
from .errors import ConfigError
from .jetcore import DIM, JetPoint, QuarticTensor, Taylor2, TimeMetric, taylor2_seed
from .metric import g_scalars, metric_pair

__all__ = [
    "GravPotential",
    "EinsteinBlocks",
    "ConservationResiduals",
    "DesCheck",
    "EMForm",
    "grav_potential",
    "einstein_blocks",
    "conservation_residuals",
    "des_check",
    "em_form",
    "xi_11",
]


@dataclass(frozen=True)
class GravPotential:
    """Blocks of the gravitational potential h_11 dt^2 + g_ij dx^i dx^j + h^11 g_ij dy^i dy^j."""

    tt_block: float
    xx_block: np.ndarray
    yy_block: np.ndarray


@dataclass(frozen=True)
class EinsteinBlocks:
    """Stress-energy blocks determined by the local Einstein equations.

    Lowered blocks: t_11, t_ij, t_yy = T^(1)(1)_(i)(j), and the two mixed
    blocks t_i_yj = T^ (1)_i(j), t_yi_j = T^(1)_(i)j.  Raised components:
    raised_t11 = T^1_1, raised_h = T^m_i, raised_mixed_t = T^(m)_(1)i,
    raised_mixed_v = T^m(1)_(i), raised_vv = T^(m)(1)_(1)(i).
    The four remaining mixed blocks vanish identically.
    """

    k: float
    xi11: float
    t_11: float
    t_ij: np.ndarray
    t_yy: np.ndarray
    t_i_yj: np.ndarray
    t_yi_j: np.ndarray
    zero_blocks: dict[str, bool]
    raised_t11: float
    raised_h: np.ndarray
    raised_mixed_t: np.ndarray
    raised_mixed_v: np.ndarray
    raised_vv: np.ndarray


@dataclass(frozen=True)
class ConservationResiduals:
    """Computed divergence combinations and their closed right-hand sides."""

    t1: float
    ti: np.ndarray
    tyi: np.ndarray
    closed_t1: float
    closed_ti: np.ndarray
    closed_tyi: np.ndarray


@dataclass(frozen=True)
class DesCheck:
    """Residuals of the two h_11 differential equations over a t-grid."""

    r1: np.ndarray
    r2: np.ndarray
    solvable: bool


@dataclass(frozen=True)
class EMForm:
    """Electromagnetic 2-form coefficients F^(1)_(i)j (antisymmetric)."""

    f: np.ndarray


def grav_potential(G: QuarticTensor, tm: TimeMetric, p: JetPoint) -> GravPotential:
    v = tm.eval(p.t)
    mp = metric_pair(G, tm, p)
    return GravPotential(tt_block=v.h11, xx_block=mp.g_lo, yy_block=v.h11_inv * mp.g_lo)


def xi_11(tm: TimeMetric, t: float, k: float) -> float:
    """xi_11 = (9 h_11 + kappa^2) / (2 K), the scalar in every diagonal block."""
    if k == 0.0:
        raise ConfigError("einstein constant K must be nonzero")
    h11 = tm.eval(t).h11
    kappa = christoffel_time(tm, t).kappa
    return (9.0 * h11 + kappa * kappa) / (2.0 * k)


def _s_source(G: QuarticTensor, tm: TimeMetric, p: JetPoint):
    """Ricci table and its g-raising feeding the block formulas.

    Berwald-Moor tensors use the closed field-theory table; custom tensors
    fall back to the honest contraction of the generic pipeline.
    """
    if G.is_berwald_moor:
        return bm_s_ricci_field(p.y), bm_s_raised_field(p.y)
    rs = ricci_scalar(G, tm, p)
    return rs.s_ricci, rs.s_raised


def einstein_blocks(G: QuarticTensor, tm: TimeMetric, p: JetPoint, k: float) -> EinsteinBlocks:
    """Stress-energy blocks of the local Einstein equations.

    T_11 = xi h_11 / sqrt(G_1111)
    T_ij = (kappa^2 / 9K) S_(i)(j) + (xi / sqrt(G_1111)) g_ij
    T^(1)(1)_(i)(j) = (1/K) S_(i)(j) + (xi / sqrt(G_1111)) h^11 g_ij
    mixed blocks    = (kappa / 3K) S_(i)(j)
    plus the raised components, cross-checkable against g-/h-raising.
    """
    if k == 0.0:
        raise ConfigError("einstein constant K must be nonzero")
    v = tm.eval(p.t)
    kappa = christoffel_time(tm, p.t).kappa
    mp = metric_pair(G, tm, p)
    sq = np.sqrt(g_scalars(G, p.y).g1111)
    s_ric, s_raised = _s_source(G, tm, p)
    xi = (9.0 * v.h11 + kappa * kappa) / (2.0 * k)

    t_11 = xi * v.h11 / sq
    t_ij = (kappa**2 / (9.0 * k)) * s_ric + (xi / sq) * mp.g_lo
    t_yy = (1.0 / k) * s_ric + (xi / sq) * v.h11_inv * mp.g_lo
    mixed = (kappa / (3.0 * k)) * s_ric
    eye = np.eye(DIM)
    return EinsteinBlocks(
        k=k,
        xi11=xi,
        t_11=t_11,
        t_ij=t_ij,
        t_yy=t_yy,
        t_i_yj=mixed,
        t_yi_j=mixed.copy(),
        zero_blocks={"t_1i": True, "t_i1": True, "t_yi_1": True, "t_1_yi": True},
        raised_t11=xi / sq,
        raised_h=(kappa**2 / (9.0 * k)) * s_raised + (xi / sq) * eye,
        raised_mixed_t=(v.h11 * kappa / (3.0 * k)) * s_raised,
        raised_mixed_v=(kappa / (3.0 * k)) * s_raised,
        raised_vv=(v.h11 / k) * s_raised + (xi / sq) * eye,
    )


def _t2_field_tables(y):
    """Taylor2 tables of 1/sqrt(G_1111) and the raised field table S_i^m11(y)."""
    s = taylor2_seed(y)
    sq = (s[0] * s[1] * s[2] * s[3]).sqrt()
    inv_sq = sq.reciprocal()
    raised: list[list[Taylor2]] = [[None] * DIM for _ in range(DIM)]
    for m in range(DIM):
        for i in range(DIM):
            coef = (5.0 - 14.0 * (m == i)) / 4.0
            raised[m][i] = s[m] / s[i] / sq * coef
    return inv_sq, raised


def conservation_residuals(G: QuarticTensor, tm: TimeMetric, p: JetPoint, k: float) -> ConservationResiduals:
    """Divergence combinations of the stress-energy components versus their
    closed right-hand sides.

    For Berwald-Moor tensors the reduced covariant forms are differentiated
    exactly (Taylor2); the unreduced definitions with the full C- and L-terms
    are asserted to agree in debug mode.  Custom tensors use the unreduced
    definitions with central finite differences.
    """
    if k == 0.0:
        raise ConfigError("einstein constant K must be nonzero")
    v = tm.eval(p.t)
    ct = christoffel_time(tm, p.t)
    kappa, h11 = ct.kappa, v.h11
    xi = (9.0 * h11 + kappa * kappa) / (2.0 * k)
    dxi = (9.0 * v.dh11 + 2.0 * kappa * ct.dkappa) / (2.0 * k)
    sq = np.sqrt(g_scalars(G, p.y).g1111)

    closed_t1 = (v.h11_inv**2 / (8.0 * k)) * v.dh11 * (2.0 * v.d2h11 - 3.0 * v.dh11**2 / h11) / sq
    closed_ti = kappa * xi / (18.0 * sq * p.y)
    closed_tyi = xi / (6.0 * sq * p.y)

    if G.is_berwald_moor:
        inv_sq, raised = _t2_field_tables(p.y)
        # T1 = delta(xi / sqrt(G)) / delta t with delta/delta t = d/dt + kappa y^p d/dy^p
        t1 = dxi * inv_sq.value + kappa * xi * float(np.dot(p.y, inv_sq.grad))
        ti = np.zeros(DIM)
        tyi = np.zeros(DIM)
        for i in range(DIM):
            div_s = sum(raised[m][i].grad[m] for m in range(DIM))
            div_delta = inv_sq.grad[i]
            ti[i] = (kappa / 3.0) * ((kappa**2 / (9.0 * k)) * div_s + xi * div_delta) + (
                h11 * kappa / (3.0 * k)
            ) * div_s
            tyi[i] = (kappa / 3.0) * (kappa / (3.0 * k)) * div_s + (h11 / k) * div_s + xi * div_delta
        if __debug__:
            _assert_reduction_terms_vanish(G, tm, p, k)
    else:
        t1, ti, tyi = _divergences_unreduced(G, tm, p, k)

    return ConservationResiduals(
        t1=float(t1), ti=ti, tyi=tyi, closed_t1=float(closed_t1), closed_ti=closed_ti, closed_tyi=closed_tyi
    )


def _assert_reduction_terms_vanish(G: QuarticTensor, tm: TimeMetric, p: JetPoint, k: float):
    """The reduced divergence forms drop C/L contraction terms; they vanish
    through the trace-free property of C and the raised-orthogonality
    identity, which is what this assertion pins down."""
    cart = cartan_connection(G, tm, p)
    blocks = einstein_blocks(G, tm, p, k)
    trace = np.einsum("mjm->j", cart.c)
    scale = max(np.abs(cart.c).max(), 1.0)
    assert np.abs(trace).max() <= 1e-9 * scale
    for field in (blocks.raised_h, blocks.raised_mixed_t, blocks.raised_mixed_v, blocks.raised_vv):
        dropped = np.einsum("mr,rim->i", field, cart.c)
        assert np.abs(dropped).max() <= 1e-9 * max(np.abs(field).max(), 1.0)


def _raised_fields_at(G: QuarticTensor, tm: TimeMetric, t: float, y, k: float):
    p = JetPoint.from_y(y, t=t)
    b = einstein_blocks(G, tm, p, k)
    return b


def _divergences_unreduced(G: QuarticTensor, tm: TimeMetric, p: JetPoint, k: float):
    """Unreduced covariant divergences with central finite differences in y."""
    cart = cartan_connection(G, tm, p)
    kappa = cart.kappa
    b0 = einstein_blocks(G, tm, p, k)
    v = tm.eval(p.t)
    ct = christoffel_time(tm, p.t)
    xi = b0.xi11
    dxi = (9.0 * v.dh11 + 2.0 * kappa * ct.dkappa) / (2.0 * k)

    step = 1e-5
    d_h = np.zeros((DIM, DIM, DIM))  # d raised_h[m,i] / dy^n
    d_mt = np.zeros((DIM, DIM, DIM))
    d_mv = np.zeros((DIM, DIM, DIM))
    d_vv = np.zeros((DIM, DIM, DIM))
    d_invsq = np.zeros(DIM)
    sq0 = np.sqrt(g_scalars(G, p.y).g1111)
    for n in range(DIM):
        h_n = step * p.y[n]
        e = np.zeros(DIM)
        e[n] = h_n
        bp = _raised_fields_at(G, tm, p.t, p.y + e, k)
        bm = _raised_fields_at(G, tm, p.t, p.y - e, k)
        d_h[:, :, n] = (bp.raised_h - bm.raised_h) / (2.0 * h_n)
        d_mt[:, :, n] = (bp.raised_mixed_t - bm.raised_mixed_t) / (2.0 * h_n)
        d_mv[:, :, n] = (bp.raised_mixed_v - bm.raised_mixed_v) / (2.0 * h_n)
        d_vv[:, :, n] = (bp.raised_vv - bm.raised_vv) / (2.0 * h_n)
        sp = np.sqrt(g_scalars(G, p.y + e).g1111)
        sm = np.sqrt(g_scalars(G, p.y - e).g1111)
        d_invsq[n] = (1.0 / sp - 1.0 / sm) / (2.0 * h_n)

    # T1: only delta T^1_1 / delta t survives (the other two fields vanish)
    t1 = dxi / sq0 + kappa * xi * float(np.dot(p.y, d_invsq))

    C, L = cart.c, cart.l
    trace_l = np.einsum("mrm->r", L)  # L^m_rm
    trace_c = np.einsum("mrm->r", C)  # C^m_r(m)
    ti = np.zeros(DIM)
    tyi = np.zeros(DIM)
    for i in range(DIM):
        div_h = np.trace(d_h[:, i, :])
        div_mt = np.trace(d_mt[:, i, :])
        div_mv = np.trace(d_mv[:, i, :])
        div_vv = np.trace(d_vv[:, i, :])
        # horizontal: delta T^m_i / delta x^m + T^r_i L^m_rm - T^m_r L^r_im
        hor = (kappa / 3.0) * div_h + float(
            b0.raised_h[:, i] @ trace_l - np.einsum("mr,rm->", b0.raised_h, L[:, i, :])
        )
        # vertical: d T^(m)_i / dy^m + T^(r)_i C^m_r(m) - T^(m)_r C^r_i(m)
        vert = div_mt + float(
            b0.raised_mixed_t[:, i] @ trace_c - np.einsum("mr,rm->", b0.raised_mixed_t, C[:, i, :])
        )
        ti[i] = hor + vert
        hor_v = (kappa / 3.0) * div_mv + float(
            b0.raised_mixed_v[:, i] @ trace_l - np.einsum("mr,rm->", b0.raised_mixed_v, L[:, i, :])
        )
        vert_v = div_vv + float(
            b0.raised_vv[:, i] @ trace_c - np.einsum("mr,rm->", b0.raised_vv, C[:, i, :])
        )
        tyi[i] = hor_v + vert_v
    return t1, ti, tyi


def des_check(tm: TimeMetric, t_samples) -> DesCheck:
    """Residuals of the system
    dh [2 h'' - 3 (h')^2 / h] = 0   and   9 h + kappa^2 = 0
    over the samples; the second residual is bounded below by 9 h > 0, so the
    system is never solvable."""
    ts = np.atleast_1d(np.asarray(t_samples, dtype=float))
    if ts.size == 0:
        raise ConfigError("des_check needs a nonempty sample list")
    r1 = np.empty(ts.size)
    r2 = np.empty(ts.size)
    for idx, t in enumerate(ts):
        v = tm.eval(t)
        kappa = christoffel_time(tm, t).kappa
        r1[idx] = v.dh11 * (2.0 * v.d2h11 - 3.0 * v.dh11**2 / v.h11)
        r2[idx] = 9.0 * v.h11 + kappa * kappa
    solvable = bool(np.any((np.abs(r1) <= 1e-12) & (np.abs(r2) <= 1e-12)))
    return DesCheck(r1=r1, r2=r2, solvable=solvable)


def em_form(G: QuarticTensor, tm: TimeMetric, p: JetPoint) -> EMForm:
    """F^(1)_(i)j = (h^11/2)[g_jm N^m_i - g_im N^m_j + (g_ir L^r_jm - g_jr L^r_im) y^m].

    Antisymmetric by construction; zero for any tensor whose C satisfies the
    y-transversality identity, in particular Berwald-Moor."""
    v = tm.eval(p.t)
    nlc = apriori_nlc(tm, p)
    cart = cartan_connection(G, tm, p)
    mp = metric_pair(G, tm, p)
    U = np.einsum("jm,mi->ij", mp.g_lo, nlc.n)
    V = np.einsum("ir,rjm,m->ij", mp.g_lo, cart.l, p.y)
    F = 0.5 * v.h11_inv * ((U - U.T) + (V - V.T))
    return EMForm(f=F)
