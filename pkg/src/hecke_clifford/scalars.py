"""Coefficient arithmetic.

Scalars are either exact ``Fraction`` values or ``mpmath.mpc`` numbers at the
working precision.  Rational inputs stay exact as long as no irrational square
root is needed; everything else is promoted to ``mpc``.
"""
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

DEFAULT_PRECISION = 256
DEFAULT_TOLERANCE = 1e-30

mpmath.mp.prec = DEFAULT_PRECISION

_sqrt_cache = {}
_sqrt_lock = threading.Lock()


class DomainError(ValueError):
    """Raised when a scalar function is evaluated outside its domain."""


def set_precision(bits):
    """Set the mpmath working precision and drop memoized roots."""
    mpmath.mp.prec = int(bits)
    with _sqrt_lock:
        _sqrt_cache.clear()


def parse(value):
    """Turn an int, Fraction, decimal string or complex into a scalar.

    Strings such as ``"5/2"`` or ``"2.5"`` are read exactly.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except ValueError:
            return mpmath.mpc(mpmath.mpmathify(text.replace("i", "j")))
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, (mpmath.mpc, mpmath.mpf, complex)):
        return mpmath.mpc(value)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def to_mpc(x):
    if isinstance(x, Fraction):
        return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
    if isinstance(x, int):
        return mpmath.mpc(x)
    return mpmath.mpc(x)


def to_complex(x):
    """Nearest double-precision complex number."""
    z = to_mpc(x)
    return complex(float(z.real), float(z.imag))


def is_exact(x):
    return isinstance(x, (Fraction, int))


def absval(x):
    return abs(to_mpc(x))


def is_zero(x, tol=DEFAULT_TOLERANCE):
    if is_exact(x):
        return x == 0
    return absval(x) <= tol


def close(a, b, tol=DEFAULT_TOLERANCE):
    """Equality to tolerance, scaled by the size of the operands."""
    if is_exact(a) and is_exact(b):
        return a == b
    scale = max(1, absval(a), absval(b))
    return absval(a - b) <= tol * scale


def _exact_sqrt(x):
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(int(rn), int(rd))
    return None


def sqrt(x):
    """Principal square root, memoized so equal inputs share one value.

    The principal branch has nonnegative real part, and nonnegative imaginary
    part when the real part vanishes, so ``sqrt(-1) == 1j``.
    """
    if is_exact(x):
        x = Fraction(x)
        root = _exact_sqrt(x)
        if root is not None:
            return root
        key = ("q", x)
    else:
        x = to_mpc(x)
        key = ("c", mpmath.mp.prec, x.real, x.imag)
    with _sqrt_lock:
        hit = _sqrt_cache.get(key)
    if hit is not None:
        return hit
    root = mpmath.sqrt(to_mpc(x))
    if root.real == 0 and root.imag < 0:
        root = -root
    with _sqrt_lock:
        return _sqrt_cache.setdefault(key, root)


def inv(x):
    if is_exact(x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)
    return 1 / to_mpc(x)


def power(x, k):
    if is_exact(x):
        return Fraction(x) ** k
    return to_mpc(x) ** k


def to_json(x):
    z = to_mpc(x)
    digits = max(20, int(mpmath.mp.dps))
    return {"re": mpmath.nstr(z.real, digits), "im": mpmath.nstr(z.imag, digits)}


def from_json(obj):
    re = mpmath.mpf(obj["re"])
    im = mpmath.mpf(obj["im"])
    return mpmath.mpc(re, im)


NONDEGENERATE = "nd"
DEGENERATE = "d"


@dataclass(frozen=True)
class Params:
    """Parameters of a cyclotomic Hecke-Clifford or Sergeev superalgebra.

    ``flavor`` is ``"nd"`` (non-degenerate, parameter ``q``) or ``"d"``
    (degenerate).  ``bullet`` selects the cyclotomic polynomial type
    ``"0"``, ``"s"`` or ``"ss"``.
    """
    flavor: str = NONDEGENERATE
    bullet: str = "s"
    Q: tuple = ()
    q: object = Fraction(2)
    n: int = 3
    precision: int = DEFAULT_PRECISION
    tolerance: float = DEFAULT_TOLERANCE
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.flavor not in (NONDEGENERATE, DEGENERATE):
            raise ValueError(f"flavor must be 'nd' or 'd', got {self.flavor!r}")
        if self.bullet not in ("0", "s", "ss"):
            raise ValueError(f"bullet must be '0', 's' or 'ss', got {self.bullet!r}")
        if self.flavor == DEGENERATE and self.bullet == "ss":
            raise ValueError("bullet 'ss' is not available in the degenerate flavor")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        object.__setattr__(self, "Q", tuple(parse(x) for x in self.Q))
        object.__setattr__(self, "q", parse(self.q))
        if self.flavor == NONDEGENERATE:
            q2 = power(self.q, 2)
            if is_zero(self.q) or close(q2, 1) or close(q2, -1):
                raise ValueError("q must satisfy q^2 not in {0, 1, -1}")
            if any(is_zero(x) for x in self.Q):
                raise ValueError("Q parameters must be nonzero in the non-degenerate flavor")
        if mpmath.mp.prec != self.precision:
            set_precision(self.precision)

    @property
    def m(self):
        return len(self.Q)

    @property
    def nondegenerate(self):
        return self.flavor == NONDEGENERATE

    @property
    def eps(self):
        """epsilon = q - 1/q (non-degenerate only)."""
        return self.q - inv(self.q)

    @property
    def level(self):
        return 2 * self.m + {"0": 0, "s": 1, "ss": 2}[self.bullet]

    def labels(self):
        """Component labels in order: strict components first."""
        lead = {"0": [], "s": ["0"], "ss": ["0-", "0+"]}[self.bullet]
        return lead + [str(k) for k in range(1, self.m + 1)]

    def strict_labels(self):
        return {"0": (), "s": ("0",), "ss": ("0-", "0+")}[self.bullet]

    def Q_of(self, label):
        """The parameter Q_l attached to a component label."""
        if label in ("0", "0+"):
            return Fraction(1) if self.nondegenerate else Fraction(0)
        if label == "0-":
            return Fraction(-1)
        return self.Q[int(label) - 1]

    def with_n(self, n):
        return Params(self.flavor, self.bullet, self.Q, self.q, n, self.precision, self.tolerance)


def q_of(iota, params):
    """The spectral function: 2(q iota + 1/(q iota))/(q + 1/q), or iota(iota+1)."""
    if params.nondegenerate:
        if is_zero(iota):
            raise DomainError("q-function needs a nonzero argument")
        qi = params.q * iota
        return 2 * (qi + inv(qi)) / (params.q + inv(params.q))
    return iota * (iota + 1)


def b_pm(iota, sign, params):
    """Roots x of x + 1/x = q(iota); sign +1 gives b_+, -1 gives b_-."""
    if not params.nondegenerate:
        raise DomainError("b_pm is defined for the non-degenerate flavor")
    half = q_of(iota, params) / 2
    root = sqrt(half * half - 1)
    return half + root if sign > 0 else half - root


def u_pm(iota, sign, params=None):
    """+-sqrt(iota(iota+1)), the degenerate eigenvalues."""
    if params is not None and params.nondegenerate:
        raise DomainError("u_pm is defined for the degenerate flavor")
    root = sqrt(iota * (iota + 1))
    return root if sign > 0 else -root


def deformed_qint(k, label, params):
    """[k]_{l,q^2} = (Q_l q^{2k} - Q_l^{-1} q^{-2k}) / (q^2 - q^{-2})."""
    if not params.nondegenerate:
        raise DomainError("deformed quantum integers need the non-degenerate flavor")
    Ql = params.Q_of(label)
    q2 = power(params.q, 2)
    return (Ql * power(q2, k) - inv(Ql) * power(q2, -k)) / (q2 - inv(q2))


def idempotency_condition(x, y, params):
    """Whether (x, y) satisfies the idempotency condition."""
    tol = params.tolerance
    if params.nondegenerate:
        if close(y, x, tol) or close(y, inv(x), tol):
            raise DomainError("need y not in {x, 1/x}")
        a = inv(x) * y
        b = x * y
        lhs = a / (a - 1) ** 2 + b / (b - 1) ** 2
        return close(lhs, inv(params.eps ** 2), tol)
    if close(y, x, tol) or close(y, -x, tol):
        raise DomainError("need y not in {x, -x}")
    lhs = inv((x - y) ** 2) + inv((x + y) ** 2)
    return close(lhs, 1, tol)


def default_configs(n=3):
    """The standard test parameter sets, keyed by a short name."""
    return {
        "nd-0": Params(NONDEGENERATE, "0", (3,), 2, n),
        "nd-s": Params(NONDEGENERATE, "s", (), 2, n),
        "nd-ss": Params(NONDEGENERATE, "ss", (), 2, n),
        "d-s": Params(DEGENERATE, "s", (), 0, n),
        "d-0": Params(DEGENERATE, "0", ("5/2",), 0, n),
    }
