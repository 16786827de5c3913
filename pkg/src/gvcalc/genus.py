"""Genus-basis calculus for symmetric Laurent polynomials and q-kernels.

A symmetric Laurent polynomial in y decomposes uniquely over the basis
(y**(1/2) + y**(-1/2))**(2g); the coefficients are the genus table this
module extracts and rebuilds.  The same square-root bookkeeping gives
the q-kernels (q**(1/2) +- q**(-1/2))**(2g-2): honest Laurent
polynomials for g >= 1 and exact window-truncated q-series for g <= 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .errors import (IntegralityError, ResidualError, ValidationError,
                     WindowError)
from .laurent import HalfLaurent, Rat, Window, binomial, norm_rat

MODULE = "genus_basis"


@dataclass(frozen=True)
class GenusVector:
    """Finitely supported map genus -> integer multiplicity."""

    entries: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for g, n in self.entries.items():
            if not isinstance(g, int):
                raise ValidationError(f"genus {g!r} is not an integer",
                                      module=MODULE, operation="GenusVector")
            n = norm_rat(n)
            if not isinstance(n, int):
                raise IntegralityError(f"multiplicity at genus {g} is {n}, "
                                       "not an integer", value=n,
                                       module=MODULE, operation="GenusVector",
                                       location=g)
            if n:
                clean[g] = n
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, g: int) -> int:
        return self.entries.get(g, 0)

    def is_zero(self) -> bool:
        return not self.entries

    def min_genus(self) -> Optional[int]:
        return min(self.entries) if self.entries else None

    def max_genus(self) -> Optional[int]:
        return max(self.entries) if self.entries else None

    def nonnegative(self) -> bool:
        return all(g >= 0 for g in self.entries)

    def to_json(self) -> dict:
        return {"entries": [[g, n] for g, n in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, obj) -> "GenusVector":
        return cls({int(g): int(n) for g, n in obj["entries"]})


def basis_power(g: int) -> HalfLaurent:
    """(y**(1/2) + y**(-1/2))**(2g) expanded, integer y-exponents."""
    if g < 0:
        raise ValidationError("basis power needs g >= 0", module=MODULE,
                              operation="basis_power")
    return HalfLaurent({2 * j: binomial(2 * g, g - j) for j in range(-g, g + 1)})


def recompose(n: GenusVector) -> HalfLaurent:
    """Sum of n_g (y**(1/2)+y**(-1/2))**(2g); inverse of decompose_symmetric."""
    if not n.nonnegative():
        raise ValidationError(f"negative genus present: {n.min_genus()}",
                              module=MODULE, operation="recompose",
                              location=n.min_genus())
    out = HalfLaurent.zero()
    for g, c in n.entries.items():
        out = out + basis_power(g) * c
    return out


def decompose_symmetric(p: HalfLaurent) -> GenusVector:
    """Unique rewriting of a symmetric y-polynomial in the genus basis.

    Downward induction on the top degree: the coefficient at y**gmax is
    the top multiplicity since lower basis elements cannot reach it.
    """
    if not p.is_polynomial():
        raise ValidationError("decomposition needs a polynomial", module=MODULE,
                              operation="decompose_symmetric")
    if not p.has_integer_exponents():
        raise ValidationError("half-integer exponents present", module=MODULE,
                              operation="decompose_symmetric")
    for u, c in p.coeffs.items():
        if p.coeffs.get(-u, 0) != c:
            raise ValidationError("polynomial is not symmetric under y -> 1/y",
                                  module=MODULE, operation="decompose_symmetric",
                                  location=u // 2)
    entries: dict[int, int] = {}
    rest = p
    while not rest.is_zero():
        top = rest.support_max()
        g = top // 2
        c = rest.coeff(top)
        if not isinstance(c, int):
            raise IntegralityError(f"coefficient {c} at y^{g} is not an integer",
                                   value=c, module=MODULE,
                                   operation="decompose_symmetric", location=g)
        entries[g] = c
        rest = rest - basis_power(g) * c
    return GenusVector(entries)


def eval_minus_one(p: HalfLaurent) -> Rat:
    """P(-1); equals the genus-0 multiplicity of recompose output."""
    if not p.has_integer_exponents():
        raise ValidationError("half-integer exponents present", module=MODULE,
                              operation="eval_minus_one")
    if not p.is_polynomial():
        raise ValidationError("evaluation needs a polynomial", module=MODULE,
                              operation="eval_minus_one")
    total: Rat = 0
    for u, c in p.coeffs.items():
        total += c if (u // 2) % 2 == 0 else -c
    return norm_rat(total)


def kernel_plus(g: int, window: Window = None) -> HalfLaurent:
    """(q**(1/2) + q**(-1/2))**(2g-2).

    Laurent polynomial for g >= 1; for g <= 0 the q-series expansion of
    q**(1-g) / (1+q)**(2-2g) truncated to the window.
    """
    if g >= 1:
        m = g - 1
        return HalfLaurent({2 * j: binomial(2 * m, m - j) for j in range(-m, m + 1)})
    return _series_kernel(g, 1, window, alternating=True)


def kernel_minus(g: int, k: int = 1, window: Window = None) -> HalfLaurent:
    """(q**(k/2) - q**(-k/2))**(2g-2).

    Laurent polynomial in q**k for g >= 1; for g <= 0 the expansion of
    q**(k(1-g)) (1-q**k)**(2g-2) truncated to the window.
    """
    if k < 1:
        raise ValidationError("cover degree k must be >= 1", module=MODULE,
                              operation="kernel_minus")
    if g >= 1:
        # ((q^(k/2) - q^(-k/2))^2)^(g-1) = (q^k - 2 + q^-k)^(g-1)
        base = HalfLaurent({2 * k: 1, 0: -2, -2 * k: 1})
        return base ** (g - 1)
    return _series_kernel(g, k, window, alternating=False)


def _series_kernel(g: int, k: int, window: Window, alternating: bool) -> HalfLaurent:
    if window is None:
        raise WindowError("series expansion of a g <= 0 kernel needs a window",
                          module=MODULE, operation="kernel")
    lo, hi = window
    n = 2 - 2 * g           # positive denominator exponent
    start = k * (1 - g)     # leading q-power
    if lo > 2 * start:
        raise WindowError(f"window {window} starts above the kernel support "
                          f"q^{start}", module=MODULE, operation="kernel")
    coeffs: dict[int, Rat] = {}
    j = 0
    while 2 * (start + k * j) <= hi:
        c = binomial(n - 1 + j, j)
        if alternating and j % 2 == 1:
            c = -c
        coeffs[2 * (start + k * j)] = c
        j += 1
    return HalfLaurent(coeffs, (lo, hi))


U_POLY = HalfLaurent({2: 1, 0: -2, -2: 1})  # q - 2 + 1/q


def _u_power_negative(m: int, hi: int) -> HalfLaurent:
    """(q / (1-q)**2)**m = u**(-m) expanded through half-unit hi."""
    coeffs: dict[int, Rat] = {}
    j = 0
    while 2 * (m + j) <= hi:
        coeffs[2 * (m + j)] = binomial(2 * m - 1 + j, j)
        j += 1
    return HalfLaurent(coeffs, (0, hi))


def extract_genus_from_qseries(series: HalfLaurent, g_max: int,
                               g_min: int = 0) -> GenusVector:
    """Invert L = sum n_g (-1)**(g-1) (q**(1/2)-q**(-1/2))**(2g-2).

    Multiplying by u = q - 2 + 1/q turns the sum into sum n_g (-1)**(g-1)
    u**g, which is triangular: u**g has lowest exponent q**(-g) for
    g >= 0, and for g < 0 lowest positive exponent q**(-g).  Extraction
    walks g downward from g_max to g_min; whatever remains must vanish
    identically inside the window.
    """
    if g_min > 0 or g_max < g_min:
        raise ValidationError(f"need g_min <= 0 and g_min <= g_max, got "
                              f"g_max={g_max}, g_min={g_min}", module=MODULE,
                              operation="extract_genus_from_qseries")
    if not series.has_integer_exponents():
        raise ValidationError("q-series has half-integer exponents",
                              module=MODULE,
                              operation="extract_genus_from_qseries")
    g_series = series * U_POLY
    if g_series.window is not None:
        lo, hi = g_series.window
        required = 2 * (-g_min + 1)
        if hi < required:
            raise WindowError(
                f"window top {hi} cannot certify genus down to {g_min} "
                f"(needs {required})", module=MODULE,
                operation="extract_genus_from_qseries")
    smin = g_series.support_min()
    if smin is not None and smin < -2 * g_max:
        raise ResidualError(
            f"principal part reaches q^{smin // 2}, below -g_max = {-g_max}: "
            "genus support exceeds g_max or window too small",
            residual=g_series, module=MODULE,
            operation="extract_genus_from_qseries", location=smin // 2)
    entries: dict[int, int] = {}
    rest = g_series
    hi = rest.window[1] if rest.window is not None else None
    for g in range(g_max, g_min - 1, -1):
        u = -2 * g  # half-unit exponent carrying n_g
        if hi is not None and u > hi:
            continue
        c = rest.coeff(u)
        if not c:
            continue
        sign = 1 if (g - 1) % 2 == 0 else -1
        n = norm_rat(Fraction(c) * sign)
        if not isinstance(n, int):
            raise IntegralityError(f"extracted n_{g} = {n} is not an integer",
                                   value=n, module=MODULE,
                                   operation="extract_genus_from_qseries",
                                   location=g)
        entries[g] = n
        if g >= 0:
            upow = U_POLY ** g
        else:
            top = hi if hi is not None else (rest.support_max() or 0)
            upow = _u_power_negative(-g, top)
        rest = rest - upow * (n * sign)
    if not rest.is_zero():
        raise ResidualError(
            "nonvanishing residual: genus support exceeds g_max or window too "
            "small", residual=rest, module=MODULE,
            operation="extract_genus_from_qseries")
    return GenusVector(entries)
