"""Piecewise-linear homeomorphisms of the line with exact rational data.

The dynamical side of this package works with orientation-preserving PL
homeomorphisms of the real line that are *translations near minus infinity*
(slope one) and *the identity near plus infinity*.  This class of maps is
closed under composition and inversion, carries an exact notion of the
rightmost point of support, and is small enough to store completely: a map
is determined by finitely many rational breakpoints.

A :class:`PLMap` stores its breakpoints ``(x_i, y_i)`` with both
coordinates strictly increasing and the last point on the diagonal.  To the
left of the first breakpoint the map is the translation by ``y_0 - x_0``
(the :attr:`~PLMap.offset`); to the right of the last breakpoint it is the
identity; in between it interpolates linearly.  Breakpoint lists are kept
*canonical* -- no collinear interior points, no redundant first or last
point -- so two maps are equal as functions exactly when their breakpoint
tuples are equal, and the identity is the empty tuple.

For a map ``f`` other than the identity, the last breakpoint is the
critical point ``r_f``: the supremum of the support.  The behaviour of
``f`` immediately to the left of any point, and the supremum of the set
where ``f`` displaces points in a chosen direction, are both exactly
computable and drive the order comparisons elsewhere in the package.

All arithmetic is :class:`fractions.Fraction`; nothing here is ever
floating point.
"""

from __future__ import annotations

import re
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from random import Random


class InvalidPLMap(ValueError):
    """Raised for breakpoint data that does not describe a map of our class."""


class InvalidTau(ValueError):
    """Raised for inconsistent parameters of a three-piece comparison map."""


def sign(q) -> int:
    """The sign of a rational number as -1, 0 or +1."""
    if q > 0:
        return 1
    if q < 0:
        return -1
    return 0


def _slope(p, q) -> Fraction:
    return (q[1] - p[1]) / (q[0] - p[0])


def _collinear(p, q, r) -> bool:
    """Whether three points lie on one line (cross-multiplied, no division)."""
    return (q[1] - p[1]) * (r[0] - q[0]) == (r[1] - q[1]) * (q[0] - p[0])


@dataclass(frozen=True)
class PLMap:
    """An increasing PL map: translation far left, identity far right.

    Build instances with :meth:`from_points`; the raw constructor trusts its
    input to be canonical.  Maps compose with ``*`` (``f * g`` is ``f`` after
    ``g``), invert with ``~`` and power with ``**``.
    """

    points: tuple

    @classmethod
    def from_points(cls, points) -> "PLMap":
        pts = [(Fraction(x), Fraction(y)) for x, y in points]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 >= x1 or y0 >= y1:
                raise InvalidPLMap(
                    f"breakpoints must increase strictly: {(x0, y0)} !< {(x1, y1)}")
        if pts and pts[-1][0] != pts[-1][1]:
            raise InvalidPLMap(
                f"last breakpoint {pts[-1]} must lie on the diagonal")
        # Drop interior points where the slope does not change.
        if len(pts) > 2:
            kept = [pts[0]]
            for i in range(1, len(pts) - 1):
                if _slope(kept[-1], pts[i]) != _slope(pts[i], pts[i + 1]):
                    kept.append(pts[i])
            kept.append(pts[-1])
            pts = kept
        # The left tail has slope one, so a first segment of slope one is
        # part of the tail; symmetrically the map is the identity beyond the
        # last breakpoint, so a final diagonal segment is redundant.
        while len(pts) >= 2 and _slope(pts[0], pts[1]) == 1:
            pts.pop(0)
        while len(pts) >= 2 and pts[-2][0] == pts[-2][1]:
            pts.pop()
        if len(pts) == 1:  # a single diagonal point is the identity
            pts = []
        return cls(tuple(pts))

    # ------------------------------------------------------------------
    # evaluation

    @cached_property
    def _xs(self):
        return tuple(p[0] for p in self.points)

    @cached_property
    def _ys(self):
        return tuple(p[1] for p in self.points)

    @cached_property
    def _slopes(self):
        pts = self.points
        return tuple(_slope(pts[i], pts[i + 1]) for i in range(len(pts) - 1))

    @cached_property
    def _inv_slopes(self):
        # Slopes of an increasing map are positive, so the reciprocal of an
        # already reduced fraction needs no re-normalisation work.
        return tuple(Fraction(s.denominator, s.numerator) for s in self._slopes)

    @property
    def offset(self) -> Fraction:
        """The translation amount near minus infinity."""
        if not self.points:
            return Fraction(0)
        return self.points[0][1] - self.points[0][0]

    @property
    def is_identity(self) -> bool:
        return not self.points

    def __call__(self, x) -> Fraction:
        if not isinstance(x, Fraction):
            x = Fraction(x)
        if not self.points:
            return x
        if x <= self._xs[0]:
            return x + self.offset
        if x >= self._xs[-1]:
            return x
        i = bisect_right(self._xs, x) - 1
        x0, y0 = self.points[i]
        return y0 + (x - x0) * self._slopes[i]

    def preimage(self, y) -> Fraction:
        if not isinstance(y, Fraction):
            y = Fraction(y)
        if not self.points:
            return y
        if y <= self._ys[0]:
            return y - self.offset
        if y >= self._ys[-1]:
            return y
        i = bisect_right(self._ys, y) - 1
        x0, y0 = self.points[i]
        return x0 + (y - y0) * self._inv_slopes[i]

    # ------------------------------------------------------------------
    # group structure

    def __mul__(self, other):
        """Composition ``self after other``."""
        if not isinstance(other, PLMap):
            return NotImplemented
        if not self.points:
            return other
        if not other.points:
            return self
        # Every breakpoint of the composition sits at a breakpoint of
        # ``other`` or at an ``other``-preimage of a breakpoint of ``self``.
        # Sweep ``other``'s graph left to right, splicing in the preimages as
        # they are crossed; the image values come out increasing, so the
        # evaluation through ``self`` only ever advances a segment pointer.
        fx, fy, fs = self._xs, self._ys, self._slopes
        gpts, ginv = other.points, other._inv_slopes
        nf, ng = len(fx), len(gpts)
        foff, goff = self.offset, other.offset
        pts = []
        fseg = 0

        def emit(x, y):
            if y <= fx[0]:
                z = y + foff
            elif y >= fx[-1]:
                z = y
            else:
                nonlocal fseg
                while fx[fseg + 1] <= y:
                    fseg += 1
                z = fy[fseg] + (y - fx[fseg]) * fs[fseg]
            p = (x, z)
            while len(pts) >= 2 and _collinear(pts[-2], pts[-1], p):
                pts.pop()
            pts.append(p)

        j = 0  # pointer into self's breakpoints, viewed in other's image space
        while j < nf and fx[j] < gpts[0][1]:
            emit(fx[j] - goff, fx[j])  # left of other's support: translation
            j += 1
        for k in range(ng):
            x0, y0 = gpts[k]
            while j < nf and fx[j] <= y0:
                j += 1  # lands on this vertex; no extra candidate needed
            emit(x0, y0)
            if k + 1 < ng:
                y1 = gpts[k + 1][1]
                inv = ginv[k]
                while j < nf and fx[j] < y1:
                    emit(x0 + (fx[j] - y0) * inv, fx[j])
                    j += 1
        while j < nf:
            emit(fx[j], fx[j])  # right of other's support: identity
            j += 1
        # Trim a slope-one leading segment (it belongs to the left tail) and
        # trailing diagonal points (they belong to the right tail).
        while len(pts) >= 2 and pts[1][1] - pts[1][0] == pts[0][1] - pts[0][0]:
            pts.pop(0)
        while len(pts) >= 2 and pts[-2][0] == pts[-2][1]:
            pts.pop()
        if len(pts) <= 1:  # at most a single diagonal point: the identity
            pts = []
        return PLMap(tuple(pts))

    def __invert__(self) -> "PLMap":
        return PLMap(tuple((y, x) for x, y in self.points))

    def __pow__(self, k: int) -> "PLMap":
        base = self if k >= 0 else ~self
        out = IDENTITY
        for _ in range(abs(k)):
            out = out * base
        return out

    # ------------------------------------------------------------------
    # order-related geometry

    def critical_point(self):
        """The rightmost point of support, or ``None`` for the identity."""
        if not self.points:
            return None
        return self.points[-1][0]

    def slope_left(self, x) -> Fraction:
        """The slope on a small interval immediately left of ``x``."""
        x = Fraction(x)
        j = bisect_left(self._xs, x) if self.points else 0
        if j == 0 or j == len(self.points):
            return Fraction(1)
        return _slope(self.points[j - 1], self.points[j])

    def germ_sign_left(self, x) -> int:
        """How the map compares to the identity just left of ``x``.

        Positive means ``f(t) > t`` on some interval ``(x - delta, x)``.  At
        a fixed point the comparison is decided by the slope: a slope below
        one pushes points up on the left of ``x``.
        """
        fx = self(x)
        if fx != x:
            return sign(fx - x)
        return sign(1 - self.slope_left(x))

    def norm(self) -> Fraction:
        """The supremum of ``|f(x) - x|`` (attained at a breakpoint or tail)."""
        if not self.points:
            return Fraction(0)
        return max(abs(self.offset),
                   max(abs(y - x) for x, y in self.points))

    def agrees_on_ray(self, other: "PLMap", x) -> bool:
        """Whether the two maps are equal as functions on ``[x, oo)``."""
        x = Fraction(x)
        if self(x) != other(x):
            return False
        stops = {p for p in self._xs if p >= x}
        stops |= {p for p in other._xs if p >= x}
        return all(self(p) == other(p) for p in stops)

    def sup_displaced(self, direction: int):
        """The supremum of ``{x : sign(f(x) - x) == direction}``, if any.

        Scans the graph right to left; the first segment carrying the wanted
        sign determines the supremum, either at a breakpoint where the
        displacement vanishes or at an exact zero crossing.  Returns ``None``
        when no point is displaced in that direction.
        """
        if direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        pts = self.points
        for i in range(len(pts) - 2, -1, -1):
            d_left = pts[i][1] - pts[i][0]
            d_right = pts[i + 1][1] - pts[i + 1][0]
            if sign(d_left) != direction:
                continue
            if d_right == 0:
                return pts[i + 1][0]
            # opposite signs: the displacement crosses zero inside
            return pts[i][0] + (pts[i + 1][0] - pts[i][0]) * d_left / (d_left - d_right)
        return None


IDENTITY = PLMap(())


# ----------------------------------------------------------------------
# text round trip

_POINT = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")


def format_plmap(f: PLMap) -> str:
    """Render as ``offset; (x0,y0) (x1,y1) ...``, or ``id``."""
    if f.is_identity:
        return "id"
    body = " ".join(f"({x},{y})" for x, y in f.points)
    return f"{f.offset}; {body}"


def parse_plmap(text: str) -> PLMap:
    s = text.strip()
    if s == "id":
        return IDENTITY
    head, sep, body = s.partition(";")
    if not sep:
        raise InvalidPLMap(f"missing offset separator in {text!r}")
    try:
        offset = Fraction(head.strip())
        pts = [(Fraction(a), Fraction(b)) for a, b in _POINT.findall(body)]
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidPLMap(f"bad rational in {text!r}: {exc}") from None
    if not pts or _POINT.sub("", body).strip():
        raise InvalidPLMap(f"malformed breakpoint list in {text!r}")
    f = PLMap.from_points(pts)
    if f.offset != offset:
        raise InvalidPLMap(
            f"stated offset {offset} does not match breakpoints in {text!r}")
    return f


# ----------------------------------------------------------------------
# constructions


def make_tau(t_prime, t_dprime, t_tprime, u, v) -> PLMap:
    """The three-piece comparison map through the points below.

    The map fixes ``[t_prime, oo)``, sends ``t_dprime`` to ``u`` and
    ``t_tprime`` to ``v``, interpolating linearly in between and translating
    (slope one) below ``t_tprime``.  The parameters must satisfy
    ``t_tprime < t_dprime < t_prime`` and ``v < u < t_prime``.
    """
    t1, t2, t3 = Fraction(t_prime), Fraction(t_dprime), Fraction(t_tprime)
    u, v = Fraction(u), Fraction(v)
    if not t3 < t2 < t1:
        raise InvalidTau(f"need t''' < t'' < t', got {t3}, {t2}, {t1}")
    if not v < u < t1:
        raise InvalidTau(f"need v < u < t', got {v}, {u}, {t1}")
    return PLMap.from_points([(t3, v), (t2, u), (t1, t1)])


def random_bump(lo, hi, eps, rng: Random, max_denom: int = 2 ** 6,
                interior: int = 3) -> PLMap:
    """A random PL map supported in ``[lo, hi]`` with norm below ``eps/2``.

    Interior breakpoints sit at equal spacing and are displaced vertically
    by exact rationals small enough to keep the map increasing.  Useful as a
    gentle conjugating perturbation; driven by a caller-owned ``rng`` so
    results are reproducible.  The default displacement granularity is
    deliberately coarse: compositions multiply denominators, and keeping
    them small keeps long products fast without affecting any property that
    matters here.
    """
    lo, hi, eps = Fraction(lo), Fraction(hi), Fraction(eps)
    if not (lo < hi and eps > 0):
        raise ValueError("need lo < hi and eps > 0")
    gap = (hi - lo) / (interior + 1)
    bound = min(gap / 3, eps / 2)
    pts = [(lo, lo)]
    for j in range(1, interior + 1):
        x = lo + gap * j
        delta = bound * Fraction(rng.randrange(-max_denom + 1, max_denom),
                                 max_denom)
        pts.append((x, x + delta))
    pts.append((hi, hi))
    return PLMap.from_points(pts)


def perturb(f: PLMap, eps, rng: Random, window=None) -> PLMap:
    """Compose ``f`` with a small random bump: ``bump * f``.

    The bump's support defaults to the breakpoint range of ``f`` widened by
    one on both sides (or ``[-1, 1]`` for the identity), and its norm stays
    below ``eps/2``, so the result is uniformly within ``eps`` of ``f``.
    """
    if window is None:
        if f.points:
            window = (f.points[0][0] - 1, f.points[-1][0] + 1)
        else:
            window = (Fraction(-1), Fraction(1))
    return random_bump(window[0], window[1], eps, rng) * f
