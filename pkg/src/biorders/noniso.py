"""Witnessing non-isolation: two nearby orders from one realized order.

Given a realized bi-invariant order on a free product of two groups and a
finite increasing chain of positive elements, this module constructs two
further bi-invariant orders that keep every chain element positive yet
disagree with each other on an explicit pair of conjugates of the first
chain element.  Since the chain is arbitrary, no finite set of positivity
constraints determines the order completely.

The construction is dynamical.  Locate a conjugate ``f0`` of the first
chain element ``f1`` whose realized support reaches as low as any
conjugate by a subword can; find a short word ``f'`` pushing the top of
``f1``'s support strictly below ``f0``'s; and follow the pushed point
through the syllables of ``f'`` down to a landmark ``t'_m``.  An auxiliary
homeomorphism ``tau``, supported entirely below the chain's supports,
transports a probe generator ``g`` of the opposite factor so that the
conjugate ``tau g tau^-1`` acts near the landmark.  Adjoining ``tau`` as a
fresh free factor (merging its realization with the given one) and
re-reading every word with its ``g``-side syllables conjugated by ``tau``
yields a new bi-invariant order.  Two choices of ``tau`` placing the
transported probe on opposite sides of the landmark's second image give
two orders, and the pair of conjugates ``f1^{g f'}`` and ``f1^{f'_m f'}``
witnesses their disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from .oracles import OrderOracle, check_biinvariance, compare
from .plmaps import InvalidTau, PLMap, make_tau, random_bump
from .realization import (MergeFailed, Realization, check_merging,
                          free_product_realization)
from .words import FreeProduct, Word, ZFactor


class ChainError(ValueError):
    """The supplied chain is not positive and strictly increasing."""


class NotFound(RuntimeError):
    """A finite search stage ran out of candidates."""


class NoMovement(RuntimeError):
    """The probe factor fixes everything below the landmark."""


@dataclass(frozen=True)
class NonIsoInput:
    """Inputs for the construction.

    ``chain`` must be strictly increasing and positive under the realized
    order of ``realization`` (checked up front).  ``search_radius`` bounds
    the ball searched for the pushing word; ``audit_radius`` is the radius
    at which both produced orders are audited for bi-invariance.  ``seed``
    steers the perturbations used while merging the auxiliary maps.
    """

    realization: Realization
    chain: tuple
    search_radius: int
    audit_radius: int
    seed: int = 0


@dataclass(frozen=True)
class NonIsoWitness:
    """Two orders agreeing on the chain and disagreeing on a pair.

    ``order1`` ranks ``witness_pair[0]`` above ``witness_pair[1]``;
    ``order2`` ranks it below.  ``tau1``/``tau2`` are the adjusted
    auxiliary maps actually merged; ``disagreement_word`` is the quotient
    of the pair, positive for ``order2`` and negative for ``order1``;
    ``ball_differences`` lists ball-3 words on which the three orders
    (base, first, second) do not all agree.
    """

    order1: OrderOracle
    order2: OrderOracle
    tau1: PLMap
    tau2: PLMap
    f0: Word
    conjugator: Word
    fprime: Word
    probe: Word
    probe_points: tuple
    landmarks: tuple
    witness_pair: tuple
    verdicts: tuple
    audits: tuple
    disagreement_word: Word
    ball_differences: tuple


# ----------------------------------------------------------------------
# stages


def smallest_conjugate(realization: Realization, chain,
                       all_subwords: bool = False):
    """The least conjugate of the first chain element, and its conjugator.

    Candidates are ``u f1 u^-1`` for ``u`` ranging over the suffixes of
    every chain element (every contiguous subword with ``all_subwords``,
    a larger candidate set that can only lower the minimum).  Comparison
    is by the realized order; the earliest candidate achieving the
    minimum is kept, so the result is deterministic.
    """
    fp = realization.group
    f1 = chain[0]
    pieces = fp.subwords if all_subwords else fp.suffixes
    best = best_u = None
    for element in chain:
        for u in pieces(element):
            candidate = fp.conjugate(f1, u)
            if best is None or realization.sign(
                    fp.multiply(fp.invert(candidate), best)) == 1:
                best, best_u = candidate, u
    return best, best_u


def find_push_word(realization: Realization, f1: Word, f0: Word,
                   search_radius: int) -> Word:
    """The first ball word carrying the top of ``f1``'s support below
    ``f0``'s.

    Ball enumeration order is deterministic (length first), so the result
    is the shortest such word; the empty word qualifies whenever the
    supports are separated already.  Raises :class:`NotFound` when the
    ball contains no pushing word.
    """
    t1 = realization.realize(f1).critical_point()
    t0 = realization.realize(f0).critical_point()
    if t1 is None or t0 is None:
        raise ChainError("push search needs non-identity realized maps")
    for w in realization.group.ball(search_radius):
        if realization.realize(w)(t1) < t0:
            return w
    raise NotFound(
        f"push: no word of length <= {search_radius} moves {t1} below {t0}")


def normalize_push(realization: Realization, fprime: Word, t1, t0):
    """Trim a pushing word to a strictly descending staircase.

    Reading ``fprime`` in application order (rightmost syllable first),
    each syllable must carry the running point strictly down; syllables
    that fail to are dropped, and everything after the first step landing
    below ``t0`` is cut.  The surviving word is renormalised and the
    process repeated until stable.  Returns the word together with the
    descending points, one per syllable, the last being the only one
    below ``t0``; returns the identity and no points when the descent
    never reaches below ``t0``.
    """
    fp = realization.group
    t1 = Fraction(t1)
    t0 = Fraction(t0)
    word = fprime
    while True:
        kept = []
        points = []
        t = t1
        for letter in reversed(word.letters):
            image = realization.letter_map(letter)(t)
            if image < t:
                kept.append(letter)
                points.append(image)
                t = image
        for i, p in enumerate(points):
            if p < t0:
                kept, points = kept[:i + 1], points[:i + 1]
                break
        else:
            return fp.identity, ()
        trimmed = fp.normal_form(tuple(reversed(kept)))
        if trimmed == word:
            return word, tuple(points)
        word = trimmed


def _descending_components(m: PLMap, bound) -> list:
    """Maximal open intervals below ``bound`` on which ``m(x) < x``.

    Each entry is ``(lo, hi)`` with ``lo`` possibly ``None`` for an
    interval reaching to minus infinity.  Endpoints are exact: crossings
    of the diagonal are solved on the segment.
    """
    if m.is_identity:
        return []
    pts = m.points
    segments = [[None, pts[0][0], m.offset, m.offset]]
    for i in range(len(pts) - 1):
        segments.append([pts[i][0], pts[i + 1][0],
                         pts[i][1] - pts[i][0], pts[i + 1][1] - pts[i + 1][0]])
    raw = []
    for x0, x1, d0, d1 in segments:
        if d0 < 0 and d1 < 0:
            raw.append([x0, x1, d0, d1])
        elif d0 < 0 <= d1:
            raw.append([x0, x0 + (x1 - x0) * d0 / (d0 - d1), d0, Fraction(0)])
        elif d1 < 0 <= d0:
            raw.append([x0 + (x1 - x0) * d0 / (d0 - d1), x1, Fraction(0), d1])
    merged = []
    for piece in raw:
        if merged and merged[-1][1] == piece[0] and merged[-1][3] < 0:
            merged[-1][1], merged[-1][3] = piece[1], piece[3]
        else:
            merged.append(piece)
    out = []
    for x0, x1, _, _ in merged:
        if x0 is not None and x0 >= bound:
            continue
        out.append((x0, min(x1, bound)))
    return out


def choose_probe(realization: Realization, factor_name: str, bound):
    """A probe generator moving some point below ``bound`` downwards.

    Tries the factor's generator and then its inverse; for the first one
    that moves points down somewhere below ``bound``, picks the largest
    descending interval (an unbounded one wins outright) and probes at
    its midpoint -- or one unit inside when unbounded.  Returns the probe
    word ``g`` and the exact pair ``t'' > t''' = g(t'')``.  Raises
    :class:`NoMovement` if neither direction moves anything down there.
    """
    fp = realization.group
    bound = Fraction(bound)
    for exponent in (1, -1):
        g = fp.generator(factor_name, exponent)
        m = realization.realize(g)
        components = _descending_components(m, bound)
        if not components:
            continue
        unbounded = [c for c in components if c[0] is None]
        if unbounded:
            t_probe = unbounded[0][1] - 1
        else:
            lo, hi = max(components, key=lambda c: (c[1] - c[0], c[1]))
            t_probe = (lo + hi) / 2
        t_image = m(t_probe)
        if not t_image < t_probe < bound:
            raise NoMovement(
                "probe: selected interval did not move down (internal)")
        return g, t_probe, t_image
    raise NoMovement(
        f"probe: factor {factor_name!r} fixes everything below {bound}")


def build_tau_pair(t_prime, t_dprime, t_tprime, t_m, t_m1, t_m3,
                   probe_map: PLMap = None, t_m2=None):
    """The two auxiliary maps, with their defining equalities re-checked.

    Both send ``t''`` to ``t_m`` and act as the identity from ``t_prime``
    on; the first sends ``t'''`` to ``t_m1``, the second to ``t_m3``.
    When the probe map and the middle landmark ``t_m2`` are supplied, the
    transported-probe inequalities are verified exactly: the first map
    must put ``tau g tau^-1 (t_m)`` above ``t_m2``, the second below.
    """
    tau1 = make_tau(t_prime, t_dprime, t_tprime, t_m, t_m1)
    tau2 = make_tau(t_prime, t_dprime, t_tprime, t_m, t_m3)
    for tau, target in ((tau1, t_m1), (tau2, t_m3)):
        if tau(t_dprime) != t_m or tau(t_tprime) != target:
            raise InvalidTau("constructed map misses its defining points")
        if tau(t_prime) != t_prime:
            raise InvalidTau("constructed map moves the support bound")
    if probe_map is not None and t_m2 is not None:
        if not tau1(probe_map(tau1.preimage(t_m))) > t_m2:
            raise InvalidTau("first transported probe not above the landmark")
        if not tau2(probe_map(tau2.preimage(t_m))) < t_m2:
            raise InvalidTau("second transported probe not below the landmark")
    return tau1, tau2


# ----------------------------------------------------------------------
# decorated orders


def decorate(decorated_group: FreeProduct, w: Word, wrapped_factor: str,
             wrapper: str) -> Word:
    """Conjugate every syllable of one factor by the wrapper generator."""
    t_pos = decorated_group.generator(wrapper, 1).letters[0]
    t_neg = decorated_group.generator(wrapper, -1).letters[0]
    out = []
    for letter in w.letters:
        if letter.factor == wrapped_factor:
            out.extend((t_pos, letter, t_neg))
        else:
            out.append(letter)
    return decorated_group.normal_form(tuple(out))


class DecoratedOracle(OrderOracle):
    """Sign of a word read through its wrapper-conjugated image.

    The rewriting ``decorate`` is an injective homomorphism into the
    enlarged merged realization, so germ signs of images define a
    bi-invariant order on the original group; the audit confirms it on a
    ball.
    """

    def __init__(self, group: FreeProduct, combined: Realization,
                 wrapped_factor: str, wrapper: str, provenance: str):
        super().__init__(group, provenance)
        self.realization = combined
        self.wrapped_factor = wrapped_factor
        self.wrapper = wrapper

    def decorate(self, w: Word) -> Word:
        return decorate(self.realization.group, w, self.wrapped_factor,
                        self.wrapper)

    def _sign(self, w):
        return self.realization.sign(self.decorate(w))


def _fresh_generator_name(fp: FreeProduct) -> str:
    taken = set(fp.by_name) | set(fp.gen_names())
    for name in "tsuvwxyz":
        if name not in taken:
            return name
    raise ValueError("no free single-letter generator name available")


def _adjust(base: Realization, tau: PLMap, *, want_above: bool,
            probe_map: PLMap, t_m, t_m2, t0, radius: int, eps,
            seed: int, always_perturb: bool, attempts: int = 24,
            wrapper: str = "t"):
    """Merge ``tau`` as a fresh factor, keeping its defining inequalities.

    Conjugates ``tau`` by small random bumps until the side-by-side
    action passes the merging audit at ``radius`` while the adjusted map
    still sends the transported probe to the required side of ``t_m2``
    and keeps its support below ``t0``.  With ``always_perturb`` the
    unperturbed candidate is skipped, which forces a strict inequality
    where the raw map produces an exact tie.
    """
    tau_group = FreeProduct(ZFactor(wrapper))
    crits = set(base.critical_points(radius))
    crits.add(tau.critical_point())
    lo, hi = min(crits) - 1, max(crits) + 1
    rng = Random(seed)
    candidate = tau
    if always_perturb:
        bump = random_bump(lo, hi, eps, rng)
        candidate = bump * tau * ~bump
    for _ in range(attempts):
        part = Realization(tau_group, {wrapper: candidate})
        if check_merging(base, part, radius).ok:
            value = candidate(probe_map(candidate.preimage(t_m)))
            side_ok = value > t_m2 if want_above else value < t_m2
            if side_ok and candidate.critical_point() < t0:
                return free_product_realization(base, part), candidate
        bump = random_bump(lo, hi, eps, rng)
        candidate = bump * tau * ~bump
    raise MergeFailed(
        f"adjustment: no candidate met the merge and side conditions "
        f"within {attempts} attempts (seed {seed})")


# ----------------------------------------------------------------------
# the full construction


def nonisolation_witness(task: NonIsoInput) -> NonIsoWitness:
    """Run the construction end to end and audit the outcome.

    Raises :class:`ChainError` for invalid chains, :class:`NotFound` or
    :class:`NoMovement` when a search stage fails, and propagates
    :class:`MergeFailed` from the adjustment stage.
    """
    R = task.realization
    fp = R.group
    if len(fp.factors) != 2:
        raise ChainError("the construction needs exactly two free factors")
    chain = tuple(task.chain)
    if not chain:
        raise ChainError("the chain must not be empty")
    for element in chain:
        if R.sign(element) != 1:
            raise ChainError(
                f"chain element {fp.format(element)} is not positive")
    for u, v in zip(chain, chain[1:]):
        if R.sign(fp.multiply(fp.invert(u), v)) != 1:
            raise ChainError("the chain is not strictly increasing")

    f1 = chain[0]
    f0, conjugator = smallest_conjugate(R, chain)
    t1 = R.realize(f1).critical_point()
    t0 = R.realize(f0).critical_point()

    fprime = find_push_word(R, f1, f0, task.search_radius)
    pushed, points = normalize_push(R, fprime, t1, t0)
    if not pushed.letters:
        for w in fp.ball(task.search_radius):
            if w.letters and R.realize(w)(t1) < t0:
                candidate, candidate_points = normalize_push(R, w, t1, t0)
                if candidate.letters:
                    pushed, points = candidate, candidate_points
                    break
        else:
            raise NotFound("push: no ball word survives normalization")
    fprime = pushed

    f_m = fprime.letters[0]          # the last-applied syllable
    t_m = points[-1]
    side = next(f.name for f in fp.factors if f.name != f_m.factor)
    probe, t_dprime, t_tprime = choose_probe(R, side, t_m)

    f_m_word = fp.normal_form((f_m,))
    f_m_map = R.letter_map(f_m)
    t_m1 = f_m_map(t_m)
    t_m2 = f_m_map(t_m1)
    t_m3 = f_m_map(t_m2)
    if not t_m3 < t_m2 < t_m1 < t_m:
        raise NotFound("push: landmark images failed to keep descending")
    t_prime = (t_m + t0) / 2
    probe_map = R.realize(probe)
    tau1, tau2 = build_tau_pair(t_prime, t_dprime, t_tprime,
                                t_m, t_m1, t_m3,
                                probe_map=probe_map, t_m2=t_m2)

    w_plus = fp.conjugate(f1, fp.multiply(probe, fprime))
    w_minus = fp.conjugate(f1, fp.multiply(f_m_word, fprime))
    wrapper = _fresh_generator_name(fp)
    margin = min(t0 - t_prime, t_m1 - t_m2, t_m2 - t_m3,
                 t_dprime - t_tprime, t_m - t_dprime)
    eps = min(Fraction(1, 16), margin / 4)
    merge_radius = task.audit_radius + 1

    def settle(tau, want_above, provenance, seed):
        wanted = "greater" if want_above else "less"
        for attempt in range(16):
            try:
                combined, adjusted = _adjust(
                    R, tau, want_above=want_above, probe_map=probe_map,
                    t_m=t_m, t_m2=t_m2, t0=t0, radius=merge_radius,
                    eps=eps, seed=seed + attempt,
                    always_perturb=attempt > 0, wrapper=wrapper)
            except MergeFailed:
                continue
            oracle = DecoratedOracle(fp, combined, side, wrapper, provenance)
            if any(oracle.sign(element) != 1 for element in chain):
                continue
            if compare(oracle, w_plus, w_minus) != wanted:
                continue
            audit = check_biinvariance(oracle, task.audit_radius)
            if not audit.ok:
                continue
            return oracle, adjusted, audit
        raise NotFound(
            f"adjustment: no seed settled the {provenance} order")

    order1, tau1_adj, audit1 = settle(tau1, True, "tau-raised", task.seed)
    order2, tau2_adj, audit2 = settle(tau2, False, "tau-lowered",
                                      task.seed + 17)

    disagreement = fp.multiply(fp.invert(w_plus), w_minus)
    ball_differences = []
    for w in fp.ball(3):
        signs = (R.sign(w), order1.sign(w), order2.sign(w))
        if len(set(signs)) > 1:
            ball_differences.append((w,) + signs)

    return NonIsoWitness(
        order1=order1, order2=order2, tau1=tau1_adj, tau2=tau2_adj,
        f0=f0, conjugator=conjugator, fprime=fprime, probe=probe,
        probe_points=(t_dprime, t_tprime),
        landmarks=points + (t_m1, t_m2, t_m3),
        witness_pair=(w_plus, w_minus),
        verdicts=(compare(order1, w_plus, w_minus),
                  compare(order2, w_plus, w_minus)),
        audits=(audit1, audit2),
        disagreement_word=disagreement,
        ball_differences=tuple(ball_differences))
