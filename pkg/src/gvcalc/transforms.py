"""Global correspondences between GV, GW, and stable-pair invariants.

GV -> GW expands each table entry against (2 sin(k*lambda/2))**(2g-2)
and sums the k-fold covers over the class monoid; GV -> PT exponentiates
the same multiple-cover sum with the q-kernels instead.  Both inverses
run a recursion in increasing monoid order, stripping the k >= 2
contributions of smaller classes before solving a triangular system at
each class.  Integrality of the solved table is checked, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .errors import (IntegralityError, ResidualError, ValidationError,
                     WindowError)
from .genus import (GenusVector, extract_genus_from_qseries, kernel_minus,
                    kernel_plus)
from .laurent import HalfLaurent, Rat, Window, norm_rat, parse_rat, rat_str
from .series import (CurveClass, DegreeCutoff, GradedSeries, gs_exp, gs_log,
                     is_effective, scale_class, zero_class)

MODULE = "transforms"


@dataclass(frozen=True)
class GVTable:
    """Map (genus, nonzero effective class) -> integer multiplicity."""

    rank: int
    entries: Dict[Tuple[int, CurveClass], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (g, beta), n in self.entries.items():
            beta = tuple(int(b) for b in beta)
            self._check_key(g, beta)
            if not isinstance(n, int):
                raise IntegralityError(f"GV multiplicity at {(g, beta)} is {n}",
                                       value=n, module=MODULE, operation="GVTable",
                                       location=[g, list(beta)])
            if n:
                clean[(g, beta)] = n
        object.__setattr__(self, "entries", clean)

    def _check_key(self, g: int, beta: CurveClass):
        if len(beta) != self.rank:
            raise ValidationError(f"class {beta} has wrong rank", module=MODULE,
                                  operation="GVTable")
        if not is_effective(beta) or not any(beta):
            raise ValidationError(f"class {beta} must be effective and nonzero",
                                  module=MODULE, operation="GVTable")

    def __getitem__(self, key) -> int:
        g, beta = key
        return self.entries.get((g, tuple(beta)), 0)

    def is_zero(self) -> bool:
        return not self.entries

    def max_positive_genus(self) -> int:
        return max((g for g, _ in self.entries), default=0)

    def min_genus(self) -> int:
        return min((g for g, _ in self.entries), default=0)

    def genus_column(self, beta: CurveClass) -> GenusVector:
        return GenusVector({g: n for (g, b), n in self.entries.items()
                            if b == tuple(beta)})

    def to_json(self) -> dict:
        items = sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        return {"rank": self.rank,
                "entries": [[g, list(b), n] for (g, b), n in items]}

    @classmethod
    def from_json(cls, obj) -> "GVTable":
        return cls(int(obj["rank"]),
                   {(int(g), tuple(b)): int(n) for g, b, n in obj["entries"]})


@dataclass(frozen=True)
class GWTable:
    """Map (genus >= 0, nonzero effective class) -> rational invariant."""

    rank: int
    entries: Dict[Tuple[int, CurveClass], Rat] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (g, beta), v in self.entries.items():
            beta = tuple(int(b) for b in beta)
            if g < 0:
                raise ValidationError("GW genus must be >= 0", module=MODULE,
                                      operation="GWTable")
            if len(beta) != self.rank or not is_effective(beta) or not any(beta):
                raise ValidationError(f"bad class {beta}", module=MODULE,
                                      operation="GWTable")
            v = norm_rat(v if isinstance(v, (int, Fraction)) else Fraction(v))
            if v:
                clean[(g, beta)] = v
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, key) -> Rat:
        g, beta = key
        return self.entries.get((g, tuple(beta)), 0)

    def is_zero(self) -> bool:
        return not self.entries

    def to_json(self) -> dict:
        items = sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        return {"rank": self.rank,
                "entries": [[g, list(b), rat_str(v)] for (g, b), v in items]}

    @classmethod
    def from_json(cls, obj) -> "GWTable":
        return cls(int(obj["rank"]),
                   {(int(g), tuple(b)): parse_rat(v) for g, b, v in obj["entries"]})


# ---------------------------------------------------------------------------
# lambda-series side
# ---------------------------------------------------------------------------

def sin_kernel_lambda(g: int, k: int, order: int) -> HalfLaurent:
    """(2 sin(k*lambda/2))**(2g-2) about lambda = 0, exact through order.

    Exponents are plain lambda-powers (one unit per power).  For g = 0
    the squared sine series is inverted, giving the familiar
    1/(k*lambda)**2 + 1/12 + (k*lambda)**2/240 + ... expansion.
    """
    if g < 0:
        raise ValidationError("sine kernel needs g >= 0", module=MODULE,
                              operation="sin_kernel_lambda")
    if k < 1:
        raise ValidationError("cover degree k must be >= 1", module=MODULE,
                              operation="sin_kernel_lambda")
    if order < 2 * g - 2:
        raise ValidationError(f"order {order} cannot resolve genus {g}",
                              module=MODULE, operation="sin_kernel_lambda")
    if g == 1:
        return HalfLaurent.one()
    depth = order + 2  # spare room so powers stay exact through `order`
    # (2 sin(k l / 2))^2 = sum_{j>=1} (-1)^(j-1) 2 (k l)^(2j) / (2j)!
    sq: dict[int, Rat] = {}
    fact = 1
    j = 1
    while 2 * j <= depth + 2:
        fact_2j = 1
        for i in range(1, 2 * j + 1):
            fact_2j *= i
        c = Fraction(2 * (-1) ** (j - 1) * k ** (2 * j), fact_2j)
        sq[2 * j] = norm_rat(c)
        j += 1
    square = HalfLaurent(sq, (2, depth + 2))
    if g == 0:
        return square.reciprocal(order)
    out = HalfLaurent.one()
    for _ in range(g - 1):
        out = out * square
    return out


def gw_from_gv(table: GVTable, cutoff: DegreeCutoff, g_max: Optional[int] = None,
               lam_order: Optional[int] = None) -> GWTable:
    """GW_(g',b') as the lambda**(2g'-2) t**b' coefficient of the cover sum."""
    if any(g < 0 for g, _ in table.entries):
        raise ValidationError("GW side needs g >= 0 input", module=MODULE,
                              operation="gw_from_gv")
    if g_max is None and lam_order is None:
        lam_order = 2 * table.max_positive_genus() + 2
    if g_max is None:
        g_max = (lam_order + 2) // 2  # every genus the order resolves
    if lam_order is None:
        lam_order = 2 * g_max + 2
    if lam_order < 2 * g_max - 2:
        raise ValidationError(f"lambda order {lam_order} too small to resolve "
                              f"genus {g_max}", module=MODULE,
                              operation="gw_from_gv")
    acc: dict[Tuple[int, CurveClass], Rat] = {}
    for (g, beta), n in table.entries.items():
        k = 1
        while cutoff.contains(scale_class(k, beta)):
            kern = sin_kernel_lambda(g, k, lam_order)
            target = scale_class(k, beta)
            for gp in range(0, g_max + 1):
                c = kern.coeff(2 * gp - 2)
                if c:
                    key = (gp, target)
                    acc[key] = acc.get(key, 0) + Fraction(n, k) * c
            k += 1
    return GWTable(table.rank, acc)


def gv_from_gw(table: GWTable, cutoff: DegreeCutoff, g_max: int) -> GVTable:
    """Invert the multiple-cover sum; integrality is checked, not assumed."""
    lam_order = 2 * g_max + 2
    solved: dict[Tuple[int, CurveClass], int] = {}
    kern1 = [sin_kernel_lambda(g, 1, lam_order) for g in range(g_max + 1)]
    for beta in cutoff.classes(include_zero=False):
        # residual lambda-series at beta after stripping k >= 2 covers
        resid: dict[int, Rat] = {}
        for g in range(g_max + 1):
            v = table[(g, beta)]
            if v:
                resid[2 * g - 2] = Fraction(v)
        for k in range(2, cutoff.bound + 1):
            if any(b % k for b in beta):
                continue
            base = tuple(b // k for b in beta)
            col = {g: solved.get((g, base), 0) for g in range(g_max + 1)}
            if not any(col.values()):
                continue
            for g, n in col.items():
                if not n:
                    continue
                kern = sin_kernel_lambda(g, k, lam_order)
                for gp in range(g_max + 1):
                    c = kern.coeff(2 * gp - 2)
                    if c:
                        resid[2 * gp - 2] = resid.get(2 * gp - 2, 0) \
                            - Fraction(n, k) * c
        for g in range(g_max + 1):
            c = resid.get(2 * g - 2, 0)
            if not c:
                continue
            lead = kern1[g].coeff(2 * g - 2)
            n = Fraction(c) / lead
            if n.denominator != 1:
                raise IntegralityError(
                    f"input not of GV form: n_{g} at {beta} is {n}", value=n,
                    module=MODULE, operation="gv_from_gw",
                    location=[g, list(beta)])
            n = int(n)
            if n:
                solved[(g, beta)] = n
            for gp in range(g, g_max + 1):
                cc = kern1[g].coeff(2 * gp - 2)
                if cc:
                    resid[2 * gp - 2] = resid.get(2 * gp - 2, 0) - n * cc
    return GVTable(table.rank, solved)


# ---------------------------------------------------------------------------
# stable-pair side
# ---------------------------------------------------------------------------

def principal_depth(table: GVTable, cutoff: DegreeCutoff) -> int:
    """Worst half-unit principal depth the cover sum of `table` can reach."""
    gmax = table.max_positive_genus()
    return 2 * max(0, gmax - 1) * cutoff.bound


def recommended_window(cutoff: DegreeCutoff, g_max: int, g_min: int = 0,
                       depth_margin: int = 4) -> Window:
    """A window deep enough to build and invert PT series exactly.

    The top covers genus extraction down to g_min plus the erosion that
    principal parts of positive-genus kernels cause inside log/exp; the
    bottom covers the deepest principal part itself.
    """
    pad = 2 * max(0, g_max - 1) * cutoff.bound
    hi = 2 * (max(1, -g_min) + 1 + depth_margin) + 2 * pad
    return (-pad, hi)


def pt_from_gv(table: GVTable, cutoff: DegreeCutoff,
               window: Window) -> GradedSeries:
    """Stable-pair series Z with log Z the (-1)**(g-1)/k cover sum.

    The t**beta coefficient of Z carries the (-q)**n bookkeeping baked
    into its q-coefficients.  Kernels are expanded beyond `window` so
    the returned series is exact at least on it; the extra depth is kept
    so a later inversion does not starve.
    """
    if window is None:
        raise WindowError("pt_from_gv needs an explicit window", module=MODULE,
                          operation="pt_from_gv")
    lo, hi = window
    pad = principal_depth(table, cutoff)
    if lo > -pad:
        lo = -pad
    work_hi = hi + pad
    log_terms: dict[CurveClass, HalfLaurent] = {}
    for (g, beta), n in table.entries.items():
        k = 1
        while cutoff.contains(scale_class(k, beta)):
            kern = kernel_minus(g, k, (min(lo, 0), work_hi))
            sign = 1 if (g - 1) % 2 == 0 else -1
            piece = kern * Fraction(n * sign, k)
            target = scale_class(k, beta)
            log_terms[target] = log_terms[target] + piece \
                if target in log_terms else piece
            k += 1
    log_series = GradedSeries(cutoff, log_terms)
    z = gs_exp(log_series)
    w = z.window()
    if w is not None and w[1] < hi:
        raise WindowError(f"window too shallow for requested cutoff: achieved "
                          f"top {w[1]} < {hi}", module=MODULE,
                          operation="pt_from_gv")
    return z


def gv_from_pt(z: GradedSeries, g_max: int, g_min: int = 0) -> GVTable:
    """Invert pt_from_gv: log, strip k >= 2 covers, extract genus per class.

    Residual or integrality failures abort with the offending class in
    the error location.
    """
    log_series = gs_log(z)
    cutoff = z.cutoff
    solved: dict[Tuple[int, CurveClass], int] = {}
    for beta in cutoff.classes(include_zero=False):
        term = log_series.terms.get(beta)
        acc = term
        for k in range(2, cutoff.bound + 1):
            if any(b % k for b in beta):
                continue
            base = tuple(b // k for b in beta)
            col = GenusVector({g: solved.get((g, base), 0)
                               for g in range(g_min, g_max + 1)})
            if col.is_zero():
                continue
            if acc is None:
                acc = HalfLaurent.zero()
            for g, n in col.entries.items():
                if acc.window is not None:
                    kw = acc.window
                else:
                    # polynomial data: pick a window deep enough to extract
                    hi = max(acc.support_max() or 0,
                             2 * k * (1 - min(g, 0))) + 2 * (1 - g_min) + 2
                    kw = (min(0, acc.support_min() or 0), hi)
                kern = kernel_minus(g, k, kw)
                sign = 1 if (g - 1) % 2 == 0 else -1
                acc = acc - kern * Fraction(n * sign, k)
        if acc is None or acc.is_zero():
            continue
        try:
            vec = extract_genus_from_qseries(acc, g_max, g_min)
        except (ResidualError, IntegralityError) as e:
            raise type(e)(f"class {beta}: {e.reason}", module=MODULE,
                          operation="gv_from_pt", location=list(beta))
        for g, n in vec.entries.items():
            solved[(g, beta)] = n
    return GVTable(z.rank, solved)


def pt_local_irreducible(n: GenusVector, window: Window) -> HalfLaurent:
    """Local stable-pair series of an irreducible cycle: sum of plus-kernels."""
    if not n.nonnegative():
        raise ValidationError("irreducible local table needs g >= 0",
                              module=MODULE, operation="pt_local_irreducible")
    out = HalfLaurent.zero(window)
    for g, c in sorted(n.entries.items()):
        out = out + kernel_plus(g, window) * c
    return out
