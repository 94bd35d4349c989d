"""Deformation-parameter arithmetic.

Everything downstream (operator tables, coefficient homotopies, fusion data)
consumes a real deformation parameter q in [-1, 1] \\ {0} and spin labels in
half-integer steps.  This module keeps both exact: q is validated once and
carried around as a :class:`QParam`, spins are stored as twice their value in
a plain integer (:class:`HalfInt`), and the handful of scalar functions that
appear in every coefficient formula live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


__all__ = [
    "HalfInt",
    "QParam",
    "Precision",
    "qnumber",
    "m_scalar",
    "guarded_sqrt",
]


@dataclass(frozen=True)
class HalfInt:
    """Exact half-integer, stored as twice its value.

    All arithmetic happens on the integer ``twice``, so spin bookkeeping is
    exact for q arbitrarily close to the classical point.
    """

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int):
            raise TypeError(f"twice must be an int, got {type(self.twice).__name__}")

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Coerce an int, HalfInt or exact float multiple of 1/2."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, int):
            return cls(2 * value)
        doubled = 2 * value
        if doubled != int(doubled):
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(int(doubled))

    @classmethod
    def parse(cls, text: str) -> "HalfInt":
        """Parse "n" or "n/2" (the serialization used in configs)."""
        text = text.strip()
        if text.endswith("/2"):
            return cls(int(text[:-2]))
        return cls(2 * int(text))

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def integer_distance(self, other) -> bool:
        """True iff self - other is an integer (same parity of ``twice``)."""
        other = HalfInt.of(other)
        return (self.twice - other.twice) % 2 == 0

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __mul__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("HalfInt can only be scaled by an integer")
        return HalfInt(self.twice * n)

    __rmul__ = __mul__

    def __float__(self):
        return self.twice / 2.0

    def __eq__(self, other):
        try:
            return self.twice == HalfInt.of(other).twice
        except (TypeError, ValueError):
            return NotImplemented

    def __le__(self, other):
        return self.twice <= HalfInt.of(other).twice

    def __lt__(self, other):
        return self.twice < HalfInt.of(other).twice

    def __ge__(self, other):
        return self.twice >= HalfInt.of(other).twice

    def __gt__(self, other):
        return self.twice > HalfInt.of(other).twice

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self.twice})"


@dataclass(frozen=True)
class QParam:
    """Validated deformation parameter.

    q must lie in [-1, 1] and be nonzero.  The operator modules additionally
    need |q| < 1; they call :meth:`require_strict` at their entry points.
    """

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not math.isfinite(q) or q == 0.0 or abs(q) > 1.0:
            raise ValueError(f"q must lie in [-1, 1] and be nonzero, got {q!r}")
        object.__setattr__(self, "q", q)

    @classmethod
    def of(cls, value) -> "QParam":
        if isinstance(value, QParam):
            return value
        return cls(float(value))

    @property
    def abs_q(self) -> float:
        return abs(self.q)

    @property
    def sign(self) -> int:
        return 1 if self.q > 0 else -1

    def require_strict(self) -> "QParam":
        """Reject |q| = 1 (needed whenever a 1 - q^(2n) denominator occurs)."""
        if self.abs_q == 1.0:
            raise ValueError("this evaluation path needs |q| < 1")
        return self


@dataclass(frozen=True)
class Precision:
    """Residual thresholds shared by the verification suites.

    tol_identity gates algebraic identities, tol_decay gates tail and decay
    checks.  Defaults leave at least four orders of magnitude of headroom
    over double-precision residuals at the spin cutoffs used here.
    """

    mode: str = "double"
    tol_identity: float = 1e-10
    tol_decay: float = 1e-8

    def __post_init__(self):
        if self.mode not in ("double", "extended"):
            raise ValueError(f"unknown precision mode {self.mode!r}")
        if not (self.tol_identity > 0.0 and self.tol_decay > 0.0):
            raise ValueError("tolerances must be positive")


def qnumber(q, a: int) -> float:
    """The q-integer (q^a - q^-a)/(q - q^-1).

    Antisymmetric in a; equals a at q -> 1 but that limit is excluded since
    the denominator vanishes there.
    """
    qp = QParam.of(q).require_strict()
    x = qp.q
    return (x**a - x**(-a)) / (x - 1.0 / x)


def m_scalar(q, t: float, l: int) -> float:
    """Interpolation scalar (q^2 - |q|^(2t) q^(2l)) / (|q|^(2t) - q^(2l+2)).

    Defined for t in [0, 1] and spin l >= 1, where numerator and denominator
    are both nonnegative (denominator strictly positive) for |q| < 1.  At
    t = 1 the value is exactly 1 for every l, and the single degenerate
    request (t=1, l=0) is resolved to 1 by that convention.
    """
    qp = QParam.of(q).require_strict()
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    l = int(l)
    if l < 1:
        if l == 0 and t == 1.0:
            return 1.0
        raise ValueError(f"spin label must be >= 1, got {l}")
    x = qp.q
    s2 = qp.abs_q ** (2.0 * t)
    return (x**2 - s2 * x ** (2 * l)) / (s2 - x ** (2 * l + 2))


def guarded_sqrt(x: float, tol: float = 1e-12) -> float:
    """Square root that clamps tiny negative rounding residue to zero.

    A radicand below -tol is a genuinely negative value, i.e. a formula bug
    upstream, and raises instead of being silently clamped.
    """
    if x < -tol:
        raise ValueError(f"negative radicand {x!r} exceeds tolerance {tol!r}")
    return math.sqrt(x) if x > 0.0 else 0.0
