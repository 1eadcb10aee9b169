"""Dynamical realizations: group orders from actions on the real line.

A *realization* of one of our free products is an action on the line by the
PL maps of :mod:`biorders.plmaps`: each generator is assigned a map, each
word acts by the corresponding composition (the leftmost letter acts last).
Such an action induces an order on the group whenever it satisfies some
mild dynamical conditions: a word is *positive* when its map pushes points
up immediately to the left of the map's critical point (the rightmost point
of its support).  This module provides

* the realization object itself, with cached evaluation of letters and
  words, order signs, and the set of critical points of a ball;
* *x-reduction* -- deleting the letters of a word that act as the identity
  on a ray ``[x, oo)``, which preserves the action on the ray exactly;
* standard realizations of the infinite cyclic group and of the rank-two
  abelian group with one generator dominating the other;
* *merging*: placing two realizations side by side on the same line so the
  combined action orders the free product of the groups.  Merging is tested
  by an explicit finite criterion (no reduced word may fix a critical point
  of either part, except words from a part at that part's own points) and
  achieved, when the untouched union fails, by conjugating the second
  action with a small random bump;
* audits of the dynamical order conditions: positive maps must dominate on
  the right (``check_dynbi``), positive elements must dominate all powers
  of elements supported further left (``check_dynnol_proxy``), and a
  strictness audit of supports (``check_germ_faithfulness``).

Everything is exact; randomness only enters through caller-provided seeds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .plmaps import IDENTITY, PLMap, random_bump
from .words import FreeProduct, Word, ZFactor, ZLexFactor


class MergeFailed(RuntimeError):
    """Raised when no small perturbation makes two realizations mergeable."""


#: Default seed for :func:`standard_merged_free_group`.  Chosen so that the
#: very first perturbation attempt succeeds and leaves the second generator
#: supported slightly to the right of the first (its critical point becomes
#: positive), which downstream constructions rely on.
DEFAULT_MERGE_SEED = 1


class Realization:
    """An action of a free product on the line by PL maps.

    ``gen_maps`` assigns a :class:`PLMap` to every generator name of the
    group.  Letter and word images are memoized, so one instance should be
    reused across a computation.
    """

    def __init__(self, group: FreeProduct, gen_maps: dict):
        missing = [g for g in group.gen_names() if g not in gen_maps]
        if missing:
            raise ValueError(f"missing maps for generators {missing}")
        self.group = group
        self.gen_maps = {g: gen_maps[g] for g in group.gen_names()}
        self._pow_cache: dict = {}
        self._letter_cache: dict = {}
        self._word_cache: dict = {(): IDENTITY}

    def _gen_power(self, gen: str, k: int) -> PLMap:
        key = (gen, k)
        m = self._pow_cache.get(key)
        if m is None:
            m = self.gen_maps[gen] ** k
            self._pow_cache[key] = m
        return m

    def letter_map(self, letter) -> PLMap:
        m = self._letter_cache.get(letter)
        if m is None:
            fac = self.group.by_name[letter.factor]
            m = IDENTITY
            for g, k in fac.tokens(letter.elem):
                m = m * self._gen_power(g, k)
            self._letter_cache[letter] = m
        return m

    def realize(self, w: Word) -> PLMap:
        """The map of ``w``: the composition of its letter maps.

        Intermediate prefixes are cached, so realizing a ball of words costs
        about one composition per word.
        """
        letters = w.letters
        m = self._word_cache.get(letters)
        if m is None:
            i = len(letters) - 1
            while i > 0 and letters[:i] not in self._word_cache:
                i -= 1
            m = self._word_cache[letters[:i]]
            for j in range(i, len(letters)):
                m = m * self.letter_map(letters[j])
                self._word_cache[letters[:j + 1]] = m
        return m

    def sign(self, w: Word) -> int:
        """Order sign of ``w``: the germ of its map left of the critical point."""
        m = self.realize(w)
        if m.is_identity:
            return 0
        return m.germ_sign_left(m.critical_point())

    def critical_points(self, radius: int) -> tuple:
        """Critical points of all words in the ball, sorted ascending."""
        out = set()
        for w in self.group.ball(radius):
            r = self.realize(w).critical_point()
            if r is not None:
                out.add(r)
        return tuple(sorted(out))

    def x_reduce(self, w: Word, x) -> Word:
        """Delete the letters of ``w`` that act trivially along ``[x, oo)``.

        Scanning from the acting end, a letter whose support lies strictly
        left of the image computed so far fixes that image and every point
        above it, so removing it changes nothing on the ray.  The result
        acts on ``[x, oo)`` exactly as ``w`` does.
        """
        x = Fraction(x)
        while True:
            t = x
            kept = []
            changed = False
            for letter in reversed(w.letters):
                m = self.letter_map(letter)
                r = m.critical_point()
                if r is None or r < t:
                    changed = True
                    continue
                kept.append(letter)
                t = m(t)
            if not changed:
                return w
            reduced = self.group.normal_form(reversed(kept))
            if reduced == w:
                return w
            w = reduced

    def conjugated(self, psi: PLMap) -> "Realization":
        """The realization with every generator map conjugated by ``psi``."""
        inv = ~psi
        return Realization(
            self.group, {g: psi * m * inv for g, m in self.gen_maps.items()})


# ----------------------------------------------------------------------
# standard building blocks


def z_generator_map(critical=0) -> PLMap:
    """The standard positive generator map: translation by one half far
    left, tapering to fix ``[critical, oo)``."""
    c = Fraction(critical)
    return PLMap.from_points([(c - 1, c - Fraction(1, 2)), (c, c)])


def standard_z(gen: str = "a", critical=0) -> Realization:
    """The infinite cyclic group acting with critical point ``critical``."""
    return Realization(FreeProduct(ZFactor(gen)),
                       {gen: z_generator_map(critical)})


def standard_zlex(first: str = "u", second: str = "v",
                  critical=0) -> Realization:
    """The rank-two abelian group ordered with ``first`` dominating.

    The second generator acts by a standard map supported left of
    ``critical - 2``; the first acts by a bump on the plateau
    ``[critical - 2, critical]`` composed with the square of the second.
    The two pieces commute (disjoint supports), so this is a genuine action
    of the abelian group, and signs follow the lexicographic order: any
    occurrence of ``first`` decides at ``critical``, otherwise ``second``
    decides further left.
    """
    c = Fraction(critical)
    p = c - 2
    u0 = z_generator_map(p)
    mid = (p + c) / 2
    plateau_bump = PLMap.from_points([(p, p), (mid, mid + Fraction(1, 2)),
                                      (c, c)])
    return Realization(FreeProduct(ZLexFactor(first, second)),
                       {first: plateau_bump * u0 * u0, second: u0})


def free_product_realization(*parts: Realization) -> Realization:
    """Place several realizations on one line, acting factor by factor."""
    factors = list(itertools.chain.from_iterable(
        r.group.factors for r in parts))
    gen_maps: dict = {}
    for r in parts:
        gen_maps.update(r.gen_maps)
    return Realization(FreeProduct(*factors), gen_maps)


# ----------------------------------------------------------------------
# merging


@dataclass(frozen=True)
class MergeReport:
    """Outcome of the finite merging criterion.

    ``violations`` lists pairs ``(word, x)`` where a reduced word fixed a
    critical point it was required to move.
    """

    violations: tuple
    checked_radius: int

    @property
    def ok(self) -> bool:
        return not self.violations


def check_merging(r_g: Realization, r_h: Realization,
                  radius: int) -> MergeReport:
    """Test whether the side-by-side action orders the free product.

    For every critical point ``x`` of either part and every word ``f`` of
    the combined ball that is ``x``-reduced, ``f`` must move ``x`` -- except
    that words lying entirely in one part are exempt at that part's own
    critical points (they may well fix them).
    """
    combined = free_product_realization(r_g, r_h)
    tg = set(r_g.critical_points(radius))
    th = set(r_h.critical_points(radius))
    g_names = [f.name for f in r_g.group.factors]
    h_names = [f.name for f in r_h.group.factors]
    violations = []
    for f in combined.group.ball(radius):
        if f.is_identity:
            continue
        all_g = combined.group.in_factors(f, g_names)
        all_h = combined.group.in_factors(f, h_names)
        for x in sorted(tg | th):
            if (x in tg and all_g) or (x in th and all_h):
                continue
            if combined.x_reduce(f, x) != f:
                continue
            if combined.realize(f)(x) == x:
                violations.append((f, x))
    return MergeReport(tuple(violations), radius)


def merge(r_g: Realization, r_h: Realization, eps, radius: int,
          seed: int = 0, attempts: int = 64):
    """Merge two realizations, perturbing the second if necessary.

    The first attempt uses ``r_h`` untouched; subsequent attempts conjugate
    it by a random bump of norm below ``eps/2`` supported around the
    critical points, which moves every generator map of ``r_h`` by less
    than ``eps``.  Returns ``(combined, report)`` on success with an empty
    report; raises :class:`MergeFailed` after the attempt budget.
    """
    eps = Fraction(eps)
    rng = Random(seed)
    crits = set(r_g.critical_points(radius)) | set(r_h.critical_points(radius))
    lo = (min(crits) if crits else Fraction(0)) - 1
    hi = (max(crits) if crits else Fraction(0)) + 1
    candidate = r_h
    for _ in range(attempts):
        report = check_merging(r_g, candidate, radius)
        if report.ok:
            return free_product_realization(r_g, candidate), report
        candidate = r_h.conjugated(random_bump(lo, hi, eps, rng))
    raise MergeFailed(
        f"no merging within {attempts} attempts at radius {radius}")


def standard_merged_free_group(seed=None, epsilon=Fraction(1, 10),
                               radius: int = 4, gens=("a", "b"),
                               critical=0) -> Realization:
    """The rank-two free group acting by merged standard generators.

    Both generators start as standard maps with the same critical point;
    merging nudges the second one.  The default seed gives a merged action
    whose second generator has a positive critical point.
    """
    if seed is None:
        seed = DEFAULT_MERGE_SEED
    combined, _ = merge(standard_z(gens[0], critical),
                        standard_z(gens[1], critical),
                        epsilon, radius, seed=seed)
    return combined


# ----------------------------------------------------------------------
# audits of the dynamical order conditions


def check_dynbi(r: Realization, radius: int, sign_fn=None) -> tuple:
    """Words whose maps fail to dominate on the right of their support.

    A word of sign ``s`` must displace points in direction ``s`` strictly
    further right than in direction ``-s``; otherwise the germ at the
    critical point would not decide the comparison consistently.  Returns
    the violating words; ``sign_fn`` may override the realization's own
    sign (useful for auditing a foreign sign assignment).
    """
    sig = sign_fn if sign_fn is not None else r.sign
    violations = []
    for f in r.group.ball(radius):
        s = sig(f)
        if s == 0:
            continue
        m = r.realize(f)
        with_s = m.sup_displaced(s)
        against = m.sup_displaced(-s)
        if with_s is None or (against is not None and with_s <= against):
            violations.append(f)
    return tuple(violations)


def check_dynnol_proxy(r: Realization, radius: int,
                       power_bound: int) -> tuple:
    """Violations of domination over powers supported further left.

    For every positive ``f`` and every ``h`` whose support ends strictly
    left of ``f``'s, each power ``h^n`` with ``|n| <= power_bound`` must
    stay below ``f``; equivalently the maps ``h^-n f`` must all be
    positive.  Returns triples ``(f, h, n)`` that fail.
    """
    ball = r.group.ball(radius)
    realized = [(f, r.realize(f)) for f in ball]
    powers: dict = {}
    for h, mh in realized:
        if mh.critical_point() is not None:
            ladder = {}
            up, down = IDENTITY, IDENTITY
            inv = ~mh
            for n in range(1, power_bound + 1):
                up, down = mh * up, inv * down
                ladder[n], ladder[-n] = up, down
            powers[h.letters] = ladder
    violations = []
    for f, mf in realized:
        rf = mf.critical_point()
        if rf is None or r.sign(f) != 1:
            continue
        for h, mh in realized:
            rh = mh.critical_point()
            if rh is None or rh >= rf:
                continue
            ladder = powers[h.letters]
            for n in range(1, power_bound + 1):
                for power_map in (ladder[-n], ladder[n]):
                    comp = power_map * mf
                    if comp.is_identity or \
                            comp.germ_sign_left(comp.critical_point()) != 1:
                        violations.append((f, h, n))
    return tuple(violations)


def check_germ_faithfulness(r: Realization, radius: int) -> tuple:
    """Audit how honestly supports reflect the group structure.

    Flags nontrivial words whose map collapses to the identity, is the
    identity near minus infinity (zero offset), or has an identity plateau
    strictly inside its support.  Single standard generators are clean;
    merged products necessarily flag words of zero net translation, which
    is a structural feature of slope-one tails, not a bug in a particular
    realization.
    """
    out = []
    for w in r.group.ball(radius):
        if w.is_identity:
            continue
        m = r.realize(w)
        if m.is_identity:
            out.append((w, "collapses to the identity"))
            continue
        if m.offset == 0:
            out.append((w, "identity near -infinity"))
        for (x0, y0), (x1, y1) in zip(m.points, m.points[1:]):
            if x0 == y0 and x1 == y1:
                out.append((w, "identity plateau inside the support"))
                break
    return tuple(out)
