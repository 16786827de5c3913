"""Series graded by an effective curve-class monoid.

Curve classes are integer vectors of a fixed rank; a class is effective
when every coordinate is nonnegative.  A positive weight vector plus a
bound (DegreeCutoff) keeps the set of admissible classes finite, which
is what makes the formal variable t**beta computable.  A GradedSeries
stores one HalfLaurent per class; windows are tracked per term and the
reported series window is the deepest claim all terms support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Tuple

from .errors import EffectiveConeError, ValidationError, WindowError
from .laurent import HalfLaurent, Window, parse_rat

CurveClass = Tuple[int, ...]


def is_effective(beta: Iterable[int]) -> bool:
    return all(b >= 0 for b in beta)


def add_class(a: CurveClass, b: CurveClass) -> CurveClass:
    return tuple(x + y for x, y in zip(a, b))


def scale_class(k: int, a: CurveClass) -> CurveClass:
    return tuple(k * x for x in a)


def zero_class(rank: int) -> CurveClass:
    return (0,) * rank


@dataclass(frozen=True)
class DegreeCutoff:
    """Positive linear functional plus a bound; truncates the class monoid."""

    weights: Tuple[int, ...]
    bound: int

    def __post_init__(self):
        if not self.weights or any(w <= 0 for w in self.weights):
            raise ValidationError("cutoff weights must be strictly positive",
                                  module="series_core", operation="DegreeCutoff")
        if self.bound <= 0:
            raise ValidationError("cutoff bound must be positive",
                                  module="series_core", operation="DegreeCutoff")
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))

    @property
    def rank(self) -> int:
        return len(self.weights)

    def degree(self, beta: CurveClass) -> int:
        return sum(w * b for w, b in zip(self.weights, beta))

    def contains(self, beta: CurveClass) -> bool:
        return is_effective(beta) and self.degree(beta) <= self.bound

    def classes(self, include_zero: bool = True) -> list[CurveClass]:
        """All admissible classes in graded-lexicographic order."""
        out: list[CurveClass] = []

        def rec(prefix: list[int], remaining: int, idx: int):
            if idx == self.rank:
                out.append(tuple(prefix))
                return
            w = self.weights[idx]
            for b in range(remaining // w + 1):
                prefix.append(b)
                rec(prefix, remaining - w * b, idx + 1)
                prefix.pop()

        rec([], self.bound, 0)
        out.sort(key=lambda b: (self.degree(b), b))
        if not include_zero:
            out = [b for b in out if any(b)]
        return out

    def to_json(self) -> dict:
        return {"weights": list(self.weights), "bound": self.bound}

    @classmethod
    def from_json(cls, obj) -> "DegreeCutoff":
        return cls(tuple(obj["weights"]), int(obj["bound"]))


def _det(rows: tuple[tuple[int, ...], ...]) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = tuple(r[:j] + r[j + 1:] for r in rows[1:])
        term = rows[0][j] * _det(minor)
        total += term if j % 2 == 0 else -term
    return total


@dataclass(frozen=True)
class LatticeMap:
    """Integer matrix invertible over the integers (det = +-1)."""

    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if any(len(r) != n for r in rows):
            raise ValidationError("lattice map matrix must be square",
                                  module="series_core", operation="LatticeMap")
        object.__setattr__(self, "rows", rows)
        if abs(_det(rows)) != 1:
            raise ValidationError("lattice map must have determinant +-1",
                                  module="series_core", operation="LatticeMap")

    @property
    def rank(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, rank: int) -> "LatticeMap":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(rank))
                         for i in range(rank)))

    def apply(self, beta: CurveClass) -> CurveClass:
        return tuple(sum(r[j] * beta[j] for j in range(self.rank))
                     for r in self.rows)

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """self applied after other."""
        n = self.rank
        return LatticeMap(tuple(
            tuple(sum(self.rows[i][k] * other.rows[k][j] for k in range(n))
                  for j in range(n))
            for i in range(n)))

    def inverse(self) -> "LatticeMap":
        n = self.rank
        d = _det(self.rows)
        adj = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = tuple(tuple(self.rows[a][b] for b in range(n) if b != i)
                              for a in range(n) if a != j)
                c = _det(minor) if n > 1 else 1
                row.append(((-1) ** (i + j)) * c * d)  # d = +-1 so this is exact
            adj.append(tuple(row))
        return LatticeMap(tuple(adj))

    def to_json(self) -> list:
        return [list(r) for r in self.rows]

    @classmethod
    def from_json(cls, obj) -> "LatticeMap":
        return cls(tuple(tuple(int(x) for x in r) for r in obj))


class GradedSeries:
    """Map from admissible curve classes to HalfLaurent coefficients."""

    __slots__ = ("rank", "cutoff", "terms")

    def __init__(self, cutoff: DegreeCutoff,
                 terms: Mapping[CurveClass, HalfLaurent] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        store: dict[CurveClass, HalfLaurent] = {}
        for beta, hl in items:
            beta = tuple(int(b) for b in beta)
            if len(beta) != cutoff.rank:
                raise ValidationError(f"class {beta} has wrong rank",
                                      module="series_core", operation="GradedSeries")
            if not is_effective(beta):
                raise EffectiveConeError(f"class {beta} is not effective",
                                         offenders=[beta], module="series_core",
                                         operation="GradedSeries")
            if not cutoff.contains(beta):
                raise ValidationError(f"class {beta} exceeds cutoff {cutoff}",
                                      module="series_core", operation="GradedSeries")
            if not hl.is_zero():
                store[beta] = hl
        self.rank = cutoff.rank
        self.cutoff = cutoff
        self.terms = store

    @classmethod
    def unit(cls, cutoff: DegreeCutoff) -> "GradedSeries":
        return cls(cutoff, {zero_class(cutoff.rank): HalfLaurent.one()})

    def term(self, beta: CurveClass) -> HalfLaurent:
        return self.terms.get(tuple(beta), HalfLaurent.zero())

    def window(self) -> Window:
        """Deepest (lo, hi) claim every stored term supports; None if all poly."""
        his = [h.window[1] for h in self.terms.values() if h.window is not None]
        if not his:
            return None
        los = []
        for h in self.terms.values():
            b = h.support_bound()
            if h.window is not None:
                los.append(h.window[0])
            elif b is not None:
                los.append(b)
        return (min(los), min(his))

    def normalized(self) -> "GradedSeries":
        """Clamp every term to the common window (canonical/serial form)."""
        w = self.window()
        if w is None:
            return self
        return GradedSeries(self.cutoff,
                            {b: h.truncated(w) if h.window is not None else h
                             for b, h in self.terms.items()})

    def support(self) -> list[CurveClass]:
        return sorted(self.terms, key=lambda b: (self.cutoff.degree(b), b))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (self.cutoff == other.cutoff and self.terms == other.terms)

    def __repr__(self):
        body = ", ".join(f"t^{b}: {h!r}" for b, h in sorted(self.terms.items()))
        return f"<GS rank={self.rank} bound={self.cutoff.bound} {{{body}}}>"

    def to_json(self) -> dict:
        norm = self.normalized()
        w = norm.window()
        return {
            "rank": self.rank,
            "cutoff": self.cutoff.to_json(),
            "window": list(w) if w is not None else None,
            "terms": [{"beta": list(b), "coeffs": norm.terms[b].coeff_pairs()}
                      for b in norm.support()],
        }

    @classmethod
    def from_json(cls, obj) -> "GradedSeries":
        cutoff = DegreeCutoff.from_json(obj["cutoff"])
        if int(obj["rank"]) != cutoff.rank:
            raise ValidationError("rank does not match cutoff weights",
                                  module="series_core", operation="from_json")
        w = obj.get("window")
        window = tuple(w) if w is not None else None
        terms = {}
        for t in obj["terms"]:
            hl = HalfLaurent.from_coeff_pairs(t["coeffs"], window)
            terms[tuple(t["beta"])] = hl
        return cls(cutoff, terms)


def _require_compatible(a: GradedSeries, b: GradedSeries, op: str):
    if a.rank != b.rank:
        raise ValidationError(f"rank mismatch {a.rank} != {b.rank}",
                              module="series_core", operation=op)
    if a.cutoff != b.cutoff:
        raise ValidationError("cutoff mismatch", module="series_core", operation=op)


def gs_add(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    _require_compatible(a, b, "gs_add")
    out = dict(a.terms)
    for beta, h in b.terms.items():
        out[beta] = out[beta] + h if beta in out else h
    return GradedSeries(a.cutoff, out)


def gs_sub(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    _require_compatible(a, b, "gs_sub")
    out = dict(a.terms)
    for beta, h in b.terms.items():
        out[beta] = out[beta] - h if beta in out else -h
    return GradedSeries(a.cutoff, out)


def gs_scale(a: GradedSeries, c) -> GradedSeries:
    return GradedSeries(a.cutoff, {b: h * c for b, h in a.terms.items()})


def gs_mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    """Monoid-ring product: (ab)_beta = sum over beta1+beta2=beta."""
    _require_compatible(a, b, "gs_mul")
    cutoff = a.cutoff
    acc: dict[CurveClass, HalfLaurent] = {}
    for b1, h1 in a.terms.items():
        d1 = cutoff.degree(b1)
        for b2, h2 in b.terms.items():
            if d1 + cutoff.degree(b2) > cutoff.bound:
                continue
            beta = add_class(b1, b2)
            prod = h1 * h2
            acc[beta] = acc[beta] + prod if beta in acc else prod
    return GradedSeries(cutoff, acc)


def gs_exp(a: GradedSeries) -> GradedSeries:
    """exp with respect to gs_mul; needs zero constant term.

    Uses the Euler-operator recursion deg(b)*Z_b = sum deg(b1)*L_b1*Z_(b-b1),
    one convolution pass instead of summing powers.
    """
    z0 = zero_class(a.rank)
    if z0 in a.terms:
        raise ValidationError("gs_exp needs a zero constant term",
                              module="series_core", operation="gs_exp")
    cutoff = a.cutoff
    out: dict[CurveClass, HalfLaurent] = {z0: HalfLaurent.one()}
    for beta in cutoff.classes(include_zero=False):
        acc = None
        for b1, h1 in a.terms.items():
            rest = tuple(x - y for x, y in zip(beta, b1))
            if not is_effective(rest):
                continue
            zrest = out.get(rest)
            if zrest is None:
                continue
            piece = (h1 * zrest) * cutoff.degree(b1)
            acc = piece if acc is None else acc + piece
        if acc is not None and not acc.is_zero():
            out[beta] = acc / cutoff.degree(beta)
    return GradedSeries(cutoff, out)


def gs_log(a: GradedSeries) -> GradedSeries:
    """log with respect to gs_mul; needs constant term exactly 1."""
    z0 = zero_class(a.rank)
    if a.term(z0) != HalfLaurent.one():
        raise ValidationError("gs_log needs constant term 1",
                              module="series_core", operation="gs_log")
    cutoff = a.cutoff
    out: dict[CurveClass, HalfLaurent] = {}
    for beta in cutoff.classes(include_zero=False):
        acc = a.terms.get(beta)
        deg = cutoff.degree(beta)
        for b1, h1 in out.items():
            rest = tuple(x - y for x, y in zip(beta, b1))
            if not is_effective(rest) or not any(rest):
                continue
            zrest = a.terms.get(rest)
            if zrest is None:
                continue
            piece = (h1 * zrest) * Fraction(cutoff.degree(b1), deg)
            acc = -piece if acc is None else acc - piece
        if acc is not None and not acc.is_zero():
            out[beta] = acc
    return GradedSeries(cutoff, out)


def gs_div(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    """Exact quotient; the divisor must have constant term 1."""
    _require_compatible(a, b, "gs_div")
    z0 = zero_class(a.rank)
    if b.term(z0) != HalfLaurent.one():
        raise ValidationError("gs_div needs a divisor with constant term 1",
                              module="series_core", operation="gs_div")
    cutoff = a.cutoff
    out: dict[CurveClass, HalfLaurent] = {}
    for beta in cutoff.classes():
        acc = a.terms.get(beta)
        for b1, h1 in out.items():
            rest = tuple(x - y for x, y in zip(beta, b1))
            if not is_effective(rest) or not any(rest):
                continue
            h2 = b.terms.get(rest)
            if h2 is None:
                continue
            piece = h1 * h2
            acc = -piece if acc is None else acc - piece
        if acc is not None and not acc.is_zero():
            out[beta] = acc
    return GradedSeries(cutoff, out)


def push_class(a: GradedSeries, phi: LatticeMap, cutoff: DegreeCutoff,
               on_overflow: str = "error") -> GradedSeries:
    """Variable change t**beta -> t**phi(beta).

    Classes whose image leaves the effective cone raise a diagnostic
    listing them; images beyond the target cutoff raise unless
    on_overflow="truncate" is requested explicitly.
    """
    if phi.rank != a.rank or cutoff.rank != a.rank:
        raise ValidationError("lattice map rank mismatch",
                              module="series_core", operation="push_class")
    out: dict[CurveClass, HalfLaurent] = {}
    bad: list[CurveClass] = []
    overflow: list[CurveClass] = []
    for beta, h in a.terms.items():
        img = phi.apply(beta)
        if not is_effective(img):
            bad.append(beta)
            continue
        if not cutoff.contains(img):
            overflow.append(beta)
            continue
        out[img] = out[img] + h if img in out else h
    if bad:
        raise EffectiveConeError(
            f"image leaves effective cone for classes {sorted(bad)}",
            offenders=sorted(bad), module="series_core", operation="push_class",
            location=sorted(bad))
    if overflow and on_overflow != "truncate":
        raise ValidationError(
            f"image exceeds target cutoff for classes {sorted(overflow)}",
            module="series_core", operation="push_class",
            location=sorted(overflow))
    return GradedSeries(cutoff, out)
