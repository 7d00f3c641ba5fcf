"""Core domain types: jet points, time-metric families, the symmetric quartic
tensor, and second-order forward-mode Taylor arithmetic.

Every object is immutable after construction and every operation is a pure
function of its inputs, so evaluation at many points can run concurrently.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations

import numpy as np

from .errors import ConstructionError, DomainError

__all__ = [
    "JetPoint",
    "TimeMetric",
    "TimeMetricValues",
    "QuarticTensor",
    "Taylor2",
    "VerificationReport",
    "time_metric_eval",
    "taylor2_seed",
]

DIM = 4


def _frozen(a, shape) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True).reshape(shape)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class JetPoint:
    """A point (t, x, y) of the jet space, with y in the open positive cone.

    The fiber coordinates y must be strictly positive so that all fourth
    roots and sqrt(G_1111) appearing downstream are real.
    """

    t: float
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "x", _frozen(self.x, (DIM,)))
        object.__setattr__(self, "y", _frozen(self.y, (DIM,)))
        if not np.all(self.y > 0.0):
            raise DomainError(f"fiber coordinates must be strictly positive, got y={self.y}")

    @classmethod
    def from_y(cls, y, t: float = 0.0, x=None) -> "JetPoint":
        return cls(t=t, x=np.zeros(DIM) if x is None else x, y=y)


@dataclass(frozen=True)
class TimeMetricValues:
    """h_11 and its exact first and second t-derivatives, plus h^11 = 1/h_11."""

    h11: float
    h11_inv: float
    dh11: float
    d2h11: float


@dataclass(frozen=True)
class TimeMetric:
    """A closed-form family h_11(t) > 0 on the time axis.

    Families:
      constant:     h_11 = c
      exponential:  h_11 = c * exp(lam * t)
      power:        h_11 = (1 + t^2)^a

    Closed forms (rather than tabulated samples) are required because the
    downstream torsion tensors need exact first AND second t-derivatives.
    """

    family: str
    c: float = 1.0
    lam: float = 0.0
    a: float = 1.0

    def __post_init__(self):
        if self.family not in ("constant", "exponential", "power"):
            raise ConstructionError(f"unknown time-metric family {self.family!r}")
        if self.family in ("constant", "exponential") and not self.c > 0.0:
            raise ConstructionError(f"time metric requires c > 0, got c={self.c}")

    @classmethod
    def constant(cls, c: float) -> "TimeMetric":
        return cls(family="constant", c=c)

    @classmethod
    def exponential(cls, c: float, lam: float) -> "TimeMetric":
        return cls(family="exponential", c=c, lam=lam)

    @classmethod
    def power(cls, a: float) -> "TimeMetric":
        return cls(family="power", a=a)

    def eval(self, t: float) -> TimeMetricValues:
        if self.family == "constant":
            h, dh, d2h = self.c, 0.0, 0.0
        elif self.family == "exponential":
            h = self.c * np.exp(self.lam * t)
            dh = self.lam * h
            d2h = self.lam * self.lam * h
        else:
            u = 1.0 + t * t
            h = u**self.a
            dh = 2.0 * self.a * t * u ** (self.a - 1.0)
            d2h = 2.0 * self.a * u ** (self.a - 1.0) + 4.0 * self.a * (self.a - 1.0) * t * t * u ** (self.a - 2.0)
        return TimeMetricValues(h11=h, h11_inv=1.0 / h, dh11=dh, d2h11=d2h)


def time_metric_eval(tm: TimeMetric, t: float) -> TimeMetricValues:
    """Evaluate h_11, h^11 and the exact t-derivatives of the family at t."""
    return tm.eval(t)


def _sorted_quad(idx) -> tuple[int, int, int, int]:
    q = tuple(sorted(int(i) for i in idx))
    if len(q) != 4 or any(i < 1 or i > DIM for i in q):
        raise ConstructionError(f"index quadruple must hold four indices in 1..4, got {idx}")
    return q


class QuarticTensor:
    """Totally symmetric (0,4) tensor G_pqrs stored by sorted index quadruple.

    Keys use 1-based indices p <= q <= r <= s; the 35 independent components
    are all present (zeros included). Any permutation of a quadruple reads
    the same stored entry.
    """

    __slots__ = ("components", "_dense")

    def __init__(self, components: dict[tuple[int, int, int, int], float]):
        table = {q: 0.0 for q in combinations_with_replacement(range(1, DIM + 1), 4)}
        seen: dict[tuple[int, int, int, int], float] = {}
        for idx, val in components.items():
            quad = _sorted_quad(idx)
            val = float(val)
            if quad in seen and seen[quad] != val:
                raise ConstructionError(
                    f"conflicting values {seen[quad]} and {val} for the quadruple {quad}"
                )
            seen[quad] = val
            table[quad] = val
        self.components = table
        dense = np.zeros((DIM, DIM, DIM, DIM))
        for quad, val in table.items():
            if val != 0.0:
                zero_based = tuple(i - 1 for i in quad)
                for perm in set(permutations(zero_based)):
                    dense[perm] = val
        dense.flags.writeable = False
        self._dense = dense

    @classmethod
    def berwald_moor(cls) -> "QuarticTensor":
        """1/4! on the distinct quadruple (1,2,3,4), zero elsewhere."""
        return cls({(1, 2, 3, 4): 1.0 / 24.0})

    @classmethod
    def from_components(cls, components) -> "QuarticTensor":
        return cls(dict(components))

    def __getitem__(self, idx) -> float:
        return self.components[_sorted_quad(idx)]

    @property
    def dense(self) -> np.ndarray:
        """Dense 4x4x4x4 view (0-based, fully symmetrized)."""
        return self._dense

    @property
    def is_berwald_moor(self) -> bool:
        bm = 1.0 / 24.0
        return all(
            val == (bm if quad == (1, 2, 3, 4) else 0.0) for quad, val in self.components.items()
        )

    def __repr__(self):
        nonzero = {q: v for q, v in self.components.items() if v != 0.0}
        return f"QuarticTensor({nonzero})"


class Taylor2:
    """Scalar with exact gradient and Hessian w.r.t. the four fiber coordinates.

    Arithmetic propagates (value, grad, hess) by truncated second-order Taylor
    rules; for polynomial-and-root compositions the results are exact up to
    floating-point rounding. The Hessian stays exactly symmetric because every
    rule builds it from symmetric pieces (a x b + b x a outer products).
    """

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value: float, grad=None, hess=None):
        self.value = float(value)
        g = np.zeros(DIM) if grad is None else np.array(grad, dtype=float, copy=True)
        h = np.zeros((DIM, DIM)) if hess is None else np.array(hess, dtype=float, copy=True)
        if g.shape != (DIM,) or h.shape != (DIM, DIM):
            raise ConstructionError("Taylor2 needs a 4-vector gradient and a 4x4 Hessian")
        g.flags.writeable = False
        h.flags.writeable = False
        self.grad = g
        self.hess = h

    @classmethod
    def _wrap(cls, value, grad, hess) -> "Taylor2":
        out = object.__new__(cls)
        out.value = float(value)
        grad.flags.writeable = False
        hess.flags.writeable = False
        out.grad = grad
        out.hess = hess
        return out

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Taylor2):
            return Taylor2._wrap(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        return Taylor2._wrap(self.value + other, self.grad.copy(), self.hess.copy())

    __radd__ = __add__

    def __neg__(self):
        return Taylor2._wrap(-self.value, -self.grad, -self.hess)

    def __sub__(self, other):
        if isinstance(other, Taylor2):
            return Taylor2._wrap(self.value - other.value, self.grad - other.grad, self.hess - other.hess)
        return Taylor2._wrap(self.value - other, self.grad.copy(), self.hess.copy())

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Taylor2):
            cross = self.grad[:, None] * other.grad
            # (cross + cross.T) is summed on its own first so the Hessian
            # stays exactly symmetric (float addition commutes but does not
            # associate).
            return Taylor2._wrap(
                self.value * other.value,
                self.value * other.grad + other.value * self.grad,
                (self.value * other.hess + other.value * self.hess) + (cross + cross.T),
            )
        return Taylor2._wrap(self.value * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def _chain(self, f0: float, f1: float, f2: float) -> "Taylor2":
        """Compose with a scalar map given its value and first two derivatives."""
        return Taylor2._wrap(
            f0, f1 * self.grad, f1 * self.hess + f2 * (self.grad[:, None] * self.grad)
        )

    def reciprocal(self) -> "Taylor2":
        r = 1.0 / self.value
        return self._chain(r, -r * r, 2.0 * r * r * r)

    def __truediv__(self, other):
        if isinstance(other, Taylor2):
            return self * other.reciprocal()
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def sqrt(self) -> "Taylor2":
        if self.value <= 0.0:
            raise DomainError(f"sqrt of non-positive Taylor2 value {self.value}")
        r = np.sqrt(self.value)
        return self._chain(r, 0.5 / r, -0.25 / (r * self.value))

    def __pow__(self, p):
        p = float(p)
        if self.value <= 0.0 and p != int(p):
            raise DomainError(f"non-integer power of non-positive value {self.value}")
        f0 = self.value**p
        f1 = p * self.value ** (p - 1.0)
        f2 = p * (p - 1.0) * self.value ** (p - 2.0)
        return self._chain(f0, f1, f2)

    def __repr__(self):
        return f"Taylor2(value={self.value!r}, grad={self.grad!r})"


def taylor2_seed(y) -> tuple[Taylor2, Taylor2, Taylor2, Taylor2]:
    """Seed the four fiber coordinates: i-th output has grad = e_i, hess = 0."""
    y = np.asarray(y, dtype=float)
    if y.shape != (DIM,):
        raise DomainError(f"expected a 4-vector, got shape {y.shape}")
    if not np.all(y > 0.0):
        raise DomainError(f"seeds must lie in the positive cone, got {y}")
    return tuple(Taylor2(y[i], np.eye(DIM)[i]) for i in range(DIM))


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one named check over a batch of sampled points."""

    check_name: str
    samples: int
    max_abs_err: float
    max_rel_err: float
    passed: bool
    seed: int
    skipped: bool = False

    @classmethod
    def from_errors(
        cls,
        check_name: str,
        samples: int,
        max_abs_err: float,
        max_rel_err: float,
        seed: int,
        abs_tol: float | None = None,
        rel_tol: float | None = None,
    ) -> "VerificationReport":
        """Apply the pass rule: abs error within abs_tol OR rel error within rel_tol."""
        ok = False
        if abs_tol is not None and max_abs_err <= abs_tol:
            ok = True
        if rel_tol is not None and max_rel_err <= rel_tol:
            ok = True
        return cls(check_name, samples, float(max_abs_err), float(max_rel_err), ok, seed)

    @classmethod
    def skip(cls, check_name: str, seed: int) -> "VerificationReport":
        return cls(check_name, 0, float("nan"), float("nan"), True, seed, skipped=True)

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "samples": self.samples,
            "max_abs_err": None if np.isnan(self.max_abs_err) else self.max_abs_err,
            "max_rel_err": None if np.isnan(self.max_rel_err) else self.max_rel_err,
            "pass": self.passed,
            "seed": self.seed,
            "skipped": self.skipped,
        }
