"""Exact Laurent arithmetic in a half-integer-exponent variable.

The ambient variable (q, y, or lambda depending on context) is handled
through its formal square root s, so an integer exponent u in "half
units" stands for s**u = q**(u/2).  Objects with only even exponents are
ordinary Laurent polynomials or series in the ambient variable.
Coefficients are exact rationals; integers are kept as ``int`` and only
promoted to ``Fraction`` when a denominator appears.

A value is either POLYNOMIAL (``window is None``: finite support, exact
everywhere) or windowed.  ``window == (lo, hi)`` asserts two things: the
true object has no support below ``lo``, and every coefficient with
``lo <= u <= hi`` is stored exactly.  Nothing is claimed above ``hi``.
Those two claims make truncated multiplication sound: the product of
objects supported in ``[la, oo)`` and ``[lb, oo)`` is fully determined
up to ``min(ha + lb, la + hb)``, which is the window the product gets.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Tuple, Union

from .errors import ValidationError, WindowError

Rat = Union[int, Fraction]
Window = Optional[Tuple[int, int]]


def norm_rat(v: Rat) -> Rat:
    """Collapse Fractions with unit denominator back to int."""
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else v
    if isinstance(v, int):
        return v
    raise ValidationError(f"coefficient {v!r} is not an exact rational",
                          module="series_core", operation="coefficient")


def rat_str(v: Rat) -> str:
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(s) -> Rat:
    if isinstance(s, int):
        return s
    if isinstance(s, str):
        return norm_rat(Fraction(s))
    raise ValidationError(f"cannot parse rational from {s!r}",
                          module="series_core", operation="parse")


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


class HalfLaurent:
    """Immutable Laurent object in half-unit exponents with a window."""

    __slots__ = ("coeffs", "window")

    def __init__(self, coeffs: Mapping[int, Rat] | Iterable[tuple[int, Rat]] = (),
                 window: Window = None):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        store: dict[int, Rat] = {}
        for u, c in items:
            if not isinstance(u, int):
                raise ValidationError(f"exponent {u!r} is not an integer half-unit",
                                      module="series_core", operation="HalfLaurent")
            c = norm_rat(c)
            if c:
                store[u] = store.get(u, 0) + c
                if not store[u]:
                    del store[u]
        if window is not None:
            lo, hi = window
            if lo > hi:
                raise WindowError(f"empty window {window}",
                                  module="series_core", operation="HalfLaurent")
            below = [u for u in store if u < lo]
            if below:
                raise ValidationError(
                    f"coefficients below window support bound {lo}: {sorted(below)}",
                    module="series_core", operation="HalfLaurent")
            for u in [u for u in store if u > hi]:
                del store[u]
            window = (lo, hi)
        object.__setattr__(self, "coeffs", store)
        object.__setattr__(self, "window", window)

    def __setattr__(self, *a):  # immutability by construction
        raise AttributeError("HalfLaurent is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, window: Window = None) -> "HalfLaurent":
        return cls((), window)

    @classmethod
    def one(cls) -> "HalfLaurent":
        return cls({0: 1})

    @classmethod
    def constant(cls, c: Rat) -> "HalfLaurent":
        return cls({0: c})

    @classmethod
    def monomial(cls, u: int, c: Rat = 1, window: Window = None) -> "HalfLaurent":
        return cls({u: c}, window)

    @classmethod
    def from_q_coeffs(cls, pairs: Iterable[tuple[int, Rat]],
                      window: Window = None) -> "HalfLaurent":
        """Build from (integer q-exponent, coefficient) pairs."""
        return cls({2 * k: c for k, c in pairs}, window)

    # -- predicates and access ----------------------------------------

    def is_polynomial(self) -> bool:
        return self.window is None

    def is_zero(self) -> bool:
        return not self.coeffs

    def has_integer_exponents(self) -> bool:
        return all(u % 2 == 0 for u in self.coeffs)

    def support_min(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def support_max(self) -> Optional[int]:
        return max(self.coeffs) if self.coeffs else None

    def support_bound(self) -> Optional[int]:
        """Best known lower bound for the support; None for zero polynomial."""
        if self.window is not None:
            return self.window[0]
        return self.support_min()

    def coeff(self, u: int) -> Rat:
        """Exact coefficient at s**u; refuses to read beyond the window."""
        if self.window is not None and u > self.window[1]:
            raise WindowError(f"coefficient at exponent {u} is outside window "
                              f"{self.window}", module="series_core",
                              operation="coeff")
        return self.coeffs.get(u, 0)

    def q_coeff(self, k: int) -> Rat:
        return self.coeff(2 * k)

    # -- window bookkeeping -------------------------------------------

    def truncated(self, window: Window) -> "HalfLaurent":
        """Re-declare the window; only sound weakenings are allowed."""
        if window is None:
            if self.window is not None:
                raise WindowError("cannot promote a windowed value to polynomial",
                                  module="series_core", operation="truncated")
            return self
        lo, hi = window
        if self.window is not None:
            olo, ohi = self.window
            if hi > ohi:
                raise WindowError(f"cannot widen window top {ohi} to {hi}",
                                  module="series_core", operation="truncated")
            if lo > olo:
                smin = self.support_min()
                if smin is not None and smin < lo:
                    raise WindowError(f"support starts at {smin}, below new bound {lo}",
                                      module="series_core", operation="truncated")
        else:
            smin = self.support_min()
            if smin is not None and smin < lo:
                raise WindowError(f"support starts at {smin}, below new bound {lo}",
                                  module="series_core", operation="truncated")
        return HalfLaurent({u: c for u, c in self.coeffs.items() if lo <= u <= hi},
                           (lo, hi))

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HalfLaurent.constant(other)
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        window = _add_window(self, other)
        merged = dict(self.coeffs)
        for u, c in other.coeffs.items():
            merged[u] = merged.get(u, 0) + c
        if window is not None:
            lo, hi = window
            merged = {u: c for u, c in merged.items() if u <= hi}
        return HalfLaurent(merged, window)

    __radd__ = __add__

    def __neg__(self):
        return HalfLaurent({u: -c for u, c in self.coeffs.items()}, self.window)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HalfLaurent.constant(other)
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return HalfLaurent.zero(self.window)
            return HalfLaurent({u: c * other for u, c in self.coeffs.items()},
                               self.window)
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        window = _mul_window(self, other)
        hi = window[1] if window is not None else None
        acc: dict[int, Rat] = {}
        for u1, c1 in self.coeffs.items():
            for u2, c2 in other.coeffs.items():
                u = u1 + u2
                if hi is not None and u > hi:
                    continue
                acc[u] = acc.get(u, 0) + c1 * c2
        return HalfLaurent(acc, window)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of HalfLaurent by zero scalar")
            return HalfLaurent({u: Fraction(c) / other
                                for u, c in self.coeffs.items()}, self.window)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValidationError("HalfLaurent powers must be nonnegative integers",
                                  module="series_core", operation="pow")
        out = HalfLaurent.one()
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HalfLaurent.constant(other)
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        return self.coeffs == other.coeffs and self.window == other.window

    def __hash__(self):
        return hash((tuple(sorted(self.coeffs.items())), self.window))

    def values_equal(self, other: "HalfLaurent") -> bool:
        """Coefficient equality, ignoring window declarations."""
        return self.coeffs == other.coeffs

    # -- substitutions ---------------------------------------------------

    def substitute_minus(self) -> "HalfLaurent":
        """q -> -q on integer-exponent objects (flips odd q-degrees)."""
        if not self.has_integer_exponents():
            raise ValidationError("q -> -q substitution needs integer exponents",
                                  module="series_core", operation="substitute_minus")
        return HalfLaurent({u: (c if (u // 2) % 2 == 0 else -c)
                            for u, c in self.coeffs.items()}, self.window)

    def reciprocal(self, hi: int) -> "HalfLaurent":
        """Inverse of a nonzero-leading-term object, exact through exponent hi.

        Writes self = c0*s**m * (1 + tail) and inverts the unit factor by
        the triangular recursion; the result carries window (-m, hi).
        """
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of zero")
        m = self.support_min()
        depth = hi + m  # how far into the unit factor we must expand
        if self.window is not None and self.window[1] - m < depth:
            raise WindowError(f"operand window {self.window} too shallow to "
                              f"invert through {hi}", module="series_core",
                              operation="reciprocal")
        c0 = self.coeffs[m]
        c0inv = norm_rat(1 / Fraction(c0))
        shifted = {u - m: c for u, c in self.coeffs.items() if u != m}
        res: dict[int, Rat] = {0: 1}
        for u in range(1, depth + 1):
            s: Rat = 0
            for v, cv in shifted.items():
                if 1 <= v <= u:
                    s += cv * res.get(u - v, 0)
            if s:
                res[u] = norm_rat(-Fraction(s) / Fraction(c0))
        # res inverts the unit factor (1 + tail); fold the leading 1/c0 in:
        out = {u - m: norm_rat(Fraction(c) * Fraction(c0inv))
               for u, c in res.items() if c}
        return HalfLaurent(out, (-m, hi))

    # -- serialization ---------------------------------------------------

    def coeff_pairs(self) -> list[list]:
        return [[u, rat_str(c)] for u, c in sorted(self.coeffs.items())]

    @classmethod
    def from_coeff_pairs(cls, pairs, window: Window = None) -> "HalfLaurent":
        return cls({int(u): parse_rat(c) for u, c in pairs},
                   tuple(window) if window is not None else None)

    def __repr__(self):
        if self.is_zero():
            body = "0"
        else:
            parts = []
            for u, c in sorted(self.coeffs.items()):
                if u == 0:
                    parts.append(f"{c}")
                elif u % 2 == 0:
                    parts.append(f"{c}*q^{u // 2}")
                else:
                    parts.append(f"{c}*q^{Fraction(u, 2)}")
            body = " + ".join(parts)
        win = "poly" if self.window is None else f"win={self.window}"
        return f"<HL {body} | {win}>"


def _add_window(a: HalfLaurent, b: HalfLaurent) -> Window:
    if a.window is None and b.window is None:
        return None
    if a.window is None:
        lo, hi = b.window
        amin = a.support_min()
        return (lo if amin is None else min(amin, lo), hi)
    if b.window is None:
        lo, hi = a.window
        bmin = b.support_min()
        return (lo if bmin is None else min(bmin, lo), hi)
    (la, ha), (lb, hb) = a.window, b.window
    return (min(la, lb), min(ha, hb))


def _mul_window(a: HalfLaurent, b: HalfLaurent) -> Window:
    if a.window is None and b.window is None:
        return None
    if a.window is None:
        if a.is_zero():
            return None  # exact zero
        amin = a.support_min()
        lo, hi = b.window
        return (amin + lo, amin + hi)
    if b.window is None:
        if b.is_zero():
            return None
        bmin = b.support_min()
        lo, hi = a.window
        return (bmin + lo, bmin + hi)
    (la, ha), (lb, hb) = a.window, b.window
    if max(la, lb) > min(ha, hb):
        raise WindowError(f"disjoint windows {a.window} and {b.window}",
                          module="series_core", operation="hl_mul")
    return (la + lb, min(ha + lb, la + hb))


def hl_mul(a: HalfLaurent, b: HalfLaurent) -> HalfLaurent:
    """Exact product truncated to the window both factors can certify."""
    return a * b
