"""G-scalar hierarchy, the fundamental metric g_ij, its inverse, and the
Berwald-Moor closed forms.

Conventions (all indices 0-based in arrays, summation written out):
    G_1111 = G_pqrs y^p y^q y^r y^s
    G_i111 = d G_1111 / dy^i      = 4  G_ipqr y^p y^q y^r
    G_ij11 = d2 G_1111 / dy^i dy^j = 12 G_ijpq y^p y^q
    g_ij   = (1 / (4 sqrt(G_1111))) [ G_ij11 - G_i111 G_j111 / (2 G_1111) ]
    g^jk   = 4 sqrt(G_1111) [ G^jk11 + G^j_1 G^k_1 / (2 (G_1111 - scriptG)) ]
with G^j_1 = G^jp11 G_p111 and 2 scriptG = G^pq11 G_p111 G_q111.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominatorError, DomainError, SingularTensorError
from .jetcore import DIM, JetPoint, QuarticTensor, Taylor2, TimeMetric

__all__ = [
    "GScalars",
    "MetricPair",
    "g_scalars",
    "metric_pair",
    "bm_metric_closed",
    "metric_taylor2",
]

_SINGULAR_RTOL = 1e-12
_DEGENERATE_RTOL = 1e-12


def _check_cone(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape != (DIM,):
        raise DomainError(f"expected a 4-vector, got shape {y.shape}")
    if not np.all(y > 0.0):
        raise DomainError(f"y must lie in the open positive cone, got {y}")
    return y


@dataclass(frozen=True)
class GScalars:
    """All y-contractions of G_pqrs used by the metric and its derivatives."""

    g1111: float
    gi111: np.ndarray
    gij11: np.ndarray
    gijk1: np.ndarray
    gijkl: np.ndarray
    gij11_inv: np.ndarray
    det_gij11: float
    g_script: float
    gj_up: np.ndarray


@dataclass(frozen=True)
class MetricPair:
    """The fundamental metric g_ij and its inverse g^jk, both symmetric."""

    g_lo: np.ndarray
    g_up: np.ndarray


def g_scalars(G: QuarticTensor, y) -> GScalars:
    """Contract G_pqrs with y to all orders, by direct polynomial contraction."""
    y = _check_cone(y)
    D = G.dense
    g1111 = float(np.einsum("pqrs,p,q,r,s", D, y, y, y, y))
    gi111 = 4.0 * np.einsum("ipqr,p,q,r->i", D, y, y, y)
    gij11 = 12.0 * np.einsum("ijpq,p,q->ij", D, y, y)
    gijk1 = 24.0 * np.einsum("ijkp,p->ijk", D, y)
    gijkl = 24.0 * D

    det = float(np.linalg.det(gij11))
    scale = float(np.abs(gij11).max())
    if scale == 0.0 or abs(det) < _SINGULAR_RTOL * scale**4:
        raise SingularTensorError(f"G_ij11 is singular at y={y} (det={det})")
    inv = np.linalg.inv(gij11)
    inv = 0.5 * (inv + inv.T)

    gj_up = inv @ gi111
    g_script = 0.5 * float(gi111 @ inv @ gi111)
    return GScalars(
        g1111=g1111,
        gi111=gi111,
        gij11=gij11,
        gijk1=gijk1,
        gijkl=gijkl,
        gij11_inv=inv,
        det_gij11=det,
        g_script=g_script,
        gj_up=gj_up,
    )


def metric_pair(G: QuarticTensor, tm: TimeMetric, p: JetPoint) -> MetricPair:
    """Fundamental metric and inverse from the generic closed formulas.

    The inverse is also cross-checked against direct 4x4 inversion of g_lo,
    which guards against index-convention mistakes in scriptG and G^j_1.
    """
    s = g_scalars(G, p.y)
    if s.g1111 <= 0.0:
        raise DomainError(f"G_1111 must be positive, got {s.g1111} at y={p.y}")
    denom = s.g1111 - s.g_script
    if abs(denom) < _DEGENERATE_RTOL * abs(s.g1111):
        raise DegenerateDenominatorError(
            f"G_1111 - scriptG = {denom} is degenerate relative to G_1111 = {s.g1111}"
        )
    sq = np.sqrt(s.g1111)
    g_lo = (s.gij11 - np.outer(s.gi111, s.gi111) / (2.0 * s.g1111)) / (4.0 * sq)
    g_up = 4.0 * sq * (s.gij11_inv + np.outer(s.gj_up, s.gj_up) / (2.0 * denom))
    g_lo = 0.5 * (g_lo + g_lo.T)
    g_up = 0.5 * (g_up + g_up.T)

    direct = np.linalg.inv(g_lo)
    scale = np.abs(direct).max()
    assert np.abs(g_up - direct).max() <= 1e-8 * max(scale, 1.0), "inverse-metric formula disagrees with direct inversion"
    return MetricPair(g_lo=g_lo, g_up=g_up)


def bm_metric_closed(y) -> MetricPair:
    """Berwald-Moor closed forms:
    g_ij = (1 - 2 delta_ij) sqrt(G_1111) / (8 y^i y^j),
    g^jk = 2 (1 - 2 delta_jk) y^j y^k / sqrt(G_1111)   (no sums).
    """
    y = _check_cone(y)
    sq = np.sqrt(np.prod(y))
    sign = 1.0 - 2.0 * np.eye(DIM)
    g_lo = sign * sq / (8.0 * np.outer(y, y))
    g_up = 2.0 * sign * np.outer(y, y) / sq
    return MetricPair(g_lo=g_lo, g_up=g_up)


def metric_taylor2(G: QuarticTensor, y) -> list[list[Taylor2]]:
    """g_ij(y) as Taylor2 values: exact entries, gradients and Hessians.

    The ingredients are seeded with their exact polynomial-contraction Taylor
    data (G_1111 has gradient G_i111 and Hessian G_ij11, and so on down the
    hierarchy), so no expression tree over raw seeds is needed.
    """
    s = g_scalars(G, y)
    if s.g1111 <= 0.0:
        raise DomainError(f"G_1111 must be positive, got {s.g1111} at y={y}")
    G_t = Taylor2(s.g1111, s.gi111, s.gij11)
    Gi_t = [Taylor2(s.gi111[i], s.gij11[i], s.gijk1[i]) for i in range(DIM)]
    inv_2g = (G_t * 2.0).reciprocal()
    inv_4sq = (G_t.sqrt() * 4.0).reciprocal()
    g: list[list[Taylor2]] = [[None] * DIM for _ in range(DIM)]
    for i in range(DIM):
        for j in range(i, DIM):
            Gij_t = Taylor2(s.gij11[i, j], s.gijk1[i, j], s.gijkl[i, j])
            gij = (Gij_t - Gi_t[i] * Gi_t[j] * inv_2g) * inv_4sq
            g[i][j] = gij
            g[j][i] = gij
    return g
