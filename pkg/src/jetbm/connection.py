"""Christoffel symbol of h_11, the two nonlinear connections, adapted
frame/coframe coefficients, and the Cartan canonical connection.

The adapted operators induced by a nonlinear connection (M, N) are
    delta/delta t   = d/dt   - M^p d/dy^p
    delta/delta x^j = d/dx^j - N^p_j d/dy^p
    delta y^i       = dy^i + M^i dt + N^i_j dx^j
For the a-priori connection M^i = -kappa y^i and N^i_j = -(kappa/3) delta^i_j,
so delta y^i = dy^i - kappa y^i dt - (kappa/3) dx^i.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .jetcore import DIM, JetPoint, QuarticTensor, TimeMetric
from .metric import _check_cone, metric_taylor2

__all__ = [
    "ChristoffelTime",
    "NonlinearConnection",
    "AdaptedCobasis",
    "CartanConnection",
    "christoffel_time",
    "canonical_nlc",
    "apriori_nlc",
    "adapted_cobasis",
    "adapted_frame",
    "adapted_coframe",
    "cartan_connection",
    "bm_cartan_closed",
    "a_table",
]


@dataclass(frozen=True)
class ChristoffelTime:
    """kappa = (h^11 / 2) dh_11/dt and its exact t-derivative."""

    kappa: float
    dkappa: float


def christoffel_time(tm: TimeMetric, t: float) -> ChristoffelTime:
    v = tm.eval(t)
    kappa = 0.5 * v.h11_inv * v.dh11
    dkappa = 0.5 * v.d2h11 / v.h11 - 0.5 * (v.dh11 / v.h11) ** 2
    return ChristoffelTime(kappa=kappa, dkappa=dkappa)


@dataclass(frozen=True)
class NonlinearConnection:
    """Coefficients (M^i, N^i_j) defining the horizontal distribution."""

    m: np.ndarray
    n: np.ndarray


def canonical_nlc(tm: TimeMetric, p: JetPoint) -> NonlinearConnection:
    """Canonical connection: M = -kappa y, N = 0 (spatially trivial)."""
    kappa = christoffel_time(tm, p.t).kappa
    return NonlinearConnection(m=-kappa * p.y, n=np.zeros((DIM, DIM)))


def apriori_nlc(tm: TimeMetric, p: JetPoint) -> NonlinearConnection:
    """A-priori connection: M = -kappa y, N = -(kappa/3) identity."""
    kappa = christoffel_time(tm, p.t).kappa
    return NonlinearConnection(m=-kappa * p.y, n=-(kappa / 3.0) * np.eye(DIM))


@dataclass(frozen=True)
class AdaptedCobasis:
    """Coefficients of delta y^i = dy^i + (dy_correction_t)^i dt + (dy_correction_x)^i_j dx^j."""

    dy_correction_t: np.ndarray
    dy_correction_x: np.ndarray


def adapted_cobasis(nlc: NonlinearConnection, p: JetPoint) -> AdaptedCobasis:
    return AdaptedCobasis(dy_correction_t=nlc.m.copy(), dy_correction_x=nlc.n.copy())


def adapted_frame(nlc: NonlinearConnection) -> np.ndarray:
    """Rows are (delta/delta t, delta/delta x^i, d/dy^i) in (d/dt, d/dx, d/dy) components."""
    F = np.eye(1 + 2 * DIM)
    F[0, 1 + DIM :] = -nlc.m
    F[1 : 1 + DIM, 1 + DIM :] = -nlc.n.T
    return F


def adapted_coframe(nlc: NonlinearConnection) -> np.ndarray:
    """Rows are (dt, dx^i, delta y^i) in (dt, dx, dy) components."""
    C = np.eye(1 + 2 * DIM)
    C[1 + DIM :, 0] = nlc.m
    C[1 + DIM :, 1 : 1 + DIM] = nlc.n
    return C


def a_table() -> np.ndarray:
    """Dense coefficient table A^i_{jk} = (2 d^i_j + 2 d^i_k + 2 d_jk - 8 d^i_j d_jk - 1)/8.

    Values: -1/8 on distinct triples, +1/8 when exactly two indices agree,
    -3/8 on the diagonal i = j = k.
    """
    d = np.eye(DIM)
    A = np.empty((DIM, DIM, DIM))
    for i in range(DIM):
        for j in range(DIM):
            for k in range(DIM):
                A[i, j, k] = (2 * d[i, j] + 2 * d[i, k] + 2 * d[j, k] - 8 * d[i, j] * d[j, k] - 1) / 8.0
    A.flags.writeable = False
    return A


_A = a_table()

# canonical-representative maps for the totally symmetric derivative tables:
# flat (j,m,k) -> position of sorted(j,m,k) among the 20 sorted triples, and
# flat (j,m,k,n) -> position among the 35 sorted quadruples
_TRIPLES = list(combinations_with_replacement(range(DIM), 3))
_QUADS = list(combinations_with_replacement(range(DIM), 4))
_CANON3 = np.array(
    [_TRIPLES.index(tuple(sorted(idx))) for idx in np.ndindex(DIM, DIM, DIM)], dtype=np.intp
)
_CANON4 = np.array(
    [_QUADS.index(tuple(sorted(idx))) for idx in np.ndindex(DIM, DIM, DIM, DIM)], dtype=np.intp
)


@dataclass(frozen=True)
class CartanConnection:
    """Adapted components (kappa, G^k_j1, L^i_jk, C^i_j(k)) of the Cartan connection."""

    kappa: float
    gk: np.ndarray
    l: np.ndarray
    c: np.ndarray


def _derivative_tables(G: QuarticTensor, y):
    """Metric value, inverse, and canonical third/fourth derivative tables.

    T3[j,m,k] = d g_jm / dy^k and T4[j,m,k,n] = d2 g_jm / dy^k dy^n are both
    totally symmetric (they are derivatives of a single scalar), so one
    representative per sorted multi-index is stored into every permutation.
    This keeps downstream index symmetries exact in floating point.
    """
    gt = metric_taylor2(G, y)
    gv = np.array([[gt[i][j].value for j in range(DIM)] for i in range(DIM)])
    gu = np.linalg.inv(gv)
    gu = 0.5 * (gu + gu.T)

    vals3 = np.empty(len(_TRIPLES))
    for pos, (a, b, c) in enumerate(_TRIPLES):
        val = gt[a][b].grad[c]
        if __debug__:
            scale = max(abs(val), 1.0)
            assert abs(gt[a][c].grad[b] - val) <= 1e-9 * scale, "mixed-partial consistency"
        vals3[pos] = val
    T3 = vals3[_CANON3].reshape(DIM, DIM, DIM)
    vals4 = np.empty(len(_QUADS))
    for pos, (a, b, c, d) in enumerate(_QUADS):
        val = gt[a][b].hess[c, d]
        if __debug__:
            scale = max(abs(val), 1.0)
            assert abs(gt[a][c].hess[b, d] - val) <= 1e-9 * scale, "mixed-partial consistency"
        vals4[pos] = val
    T4 = vals4[_CANON4].reshape(DIM, DIM, DIM, DIM)
    return gv, gu, T3, T4


def cartan_connection(G: QuarticTensor, tm: TimeMetric, p: JetPoint) -> CartanConnection:
    """Cartan canonical connection from the generic adapted-component formulas.

    C^i_j(k) = (g^im / 2) dg_jm/dy^k   (one-term reduction)
    G^k_j1   = (g^km / 2) delta g_mj / delta t,  delta/delta t = d/dt + kappa y^p d/dy^p
    L^i_jk   = (g^im / 2)(dg_jm/dx^k + ... ) with delta/delta x^k = (kappa/3) d/dy^k
    for x-constant G. G^k_j1 is computed honestly (g is 0-homogeneous in y, so
    it comes out zero) rather than assumed.
    """
    kappa = christoffel_time(tm, p.t).kappa
    gv, gu, T3, _ = _derivative_tables(G, p.y)
    C = 0.5 * np.einsum("im,jmk->ijk", gu, T3)
    # L assembled from the full three-term form with delta/delta x^k = (kappa/3) d/dy^k;
    # it collapses onto (kappa/3) C because T3 is totally symmetric (asserted in
    # _derivative_tables), not by assumption here.
    three_term = T3 + T3.transpose(2, 1, 0) - T3.transpose(0, 2, 1)
    L = (kappa / 3.0) * 0.5 * np.einsum("im,jmk->ijk", gu, three_term)
    # delta g/delta t = dg/dt + kappa y^p dg/dy^p; the metric carries no t-dependence
    dg_dt = kappa * np.einsum("mjp,p->mj", T3, p.y)
    gk = 0.5 * np.einsum("km,mj->kj", gu, dg_dt)
    return CartanConnection(kappa=kappa, gk=gk, l=L, c=C)


def bm_cartan_closed(tm: TimeMetric, p: JetPoint) -> CartanConnection:
    """Closed Berwald-Moor components: C^i_j(k) = A^i_jk y^i / (y^j y^k),
    L = (kappa/3) C, G^k_j1 = 0."""
    y = _check_cone(p.y)
    kappa = christoffel_time(tm, p.t).kappa
    C = _A * y[:, None, None] / (y[None, :, None] * y[None, None, :])
    return CartanConnection(kappa=kappa, gk=np.zeros((DIM, DIM)), l=(kappa / 3.0) * C, c=C)
