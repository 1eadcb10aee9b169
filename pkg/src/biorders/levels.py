"""A one-parameter family of bi-invariant orders on the rank-two free group.

Each order in the family compares words through a cascade of three
invariants.  First the exponent sum of ``a`` (a homomorphism onto the
integers); for words where it vanishes, a weighted exponent sum of ``b``
where each occurrence is scaled by ``alpha`` raised to the height -- the
``a``-exponent accumulated to its left; and for words where both vanish, a
residual bi-invariant order on the remaining subgroup (the Magnus-expansion
order by default).

Varying the weight ``alpha`` over positive rationals sweeps out a family of
distinct orders.  *Windows* carve the family by four sign conditions on the
words ``b`` and ``a b a^-1``; membership of a level order in a window is
equivalent to a pair of strict rational inequalities on ``alpha``, which
makes windows the right instrument for exhibiting orders that no small
symmetry of the group can carry onto one another (:func:`separation_evidence`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .magnus import magnus_sign
from .oracles import OrderOracle, cone_saturate, pullback
from .words import FreeProduct, Word, enumerate_autwords


class NotInKernel(ValueError):
    """Raised when the weighted sum is asked for a word outside the kernel."""


def exponent_sum(w: Word, gen: str) -> int:
    """The total exponent of ``gen`` in ``w`` (a homomorphism to Z)."""
    return sum(l.elem for l in w.letters if l.factor == gen)


def weighted_sum(w: Word, alpha) -> Fraction:
    """The height-weighted ``b``-exponent sum of a word with zero ``a`` sum.

    Reading left to right, an occurrence ``b^k`` found after a net
    ``a``-exponent ``h`` contributes ``k * alpha**h``.  On the kernel of the
    ``a``-exponent sum this is a homomorphism to the rationals, and
    conjugation scales it by a positive power of ``alpha``, so its sign is a
    conjugation invariant.
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("the weight must be positive")
    if exponent_sum(w, "a") != 0:
        raise NotInKernel(
            "weighted sum is only defined when the a-exponents cancel")
    height = 0
    total = Fraction(0)
    for letter in w.letters:
        if letter.factor == "a":
            height += letter.elem
        else:
            total += letter.elem * alpha ** height
    return total


def level_values(w: Word, alpha):
    """The cascade invariants ``(a-sum, weighted b-sum or None)``."""
    first = exponent_sum(w, "a")
    if first != 0:
        return first, None
    return first, weighted_sum(w, alpha)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class LevelOracle(OrderOracle):
    """The order deciding by ``a``-sum, then weighted ``b``-sum, then residue.

    ``residual`` decides words where both homomorphisms vanish; it defaults
    to the Magnus-expansion sign and must itself be the sign map of a
    bi-invariant order for the cascade to be one.
    """

    def __init__(self, group: FreeProduct, alpha, residual=None):
        alpha = Fraction(alpha)
        super().__init__(group, f"level-{alpha}")
        if sorted(group.by_name) != ["a", "b"]:
            raise ValueError("level orders live on the free group on a, b")
        if alpha <= 0:
            raise ValueError("the weight must be positive")
        self.alpha = alpha
        self.residual = residual or (lambda w: magnus_sign(group, w))

    def _sign(self, w):
        first, second = level_values(w, self.alpha)
        if first:
            return _sign(first)
        if second:
            return _sign(second)
        return self.residual(w)


# ----------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class Window:
    """Four positive integers ``k, l, m, n`` with ``1 < k/l < m/n``.

    A window names the set of orders satisfying the four sign conditions of
    :func:`window_relations`; for a level order with weight ``alpha`` these
    conditions hold exactly when ``k/l < alpha < m/n``.
    """

    k: int
    l: int
    m: int
    n: int

    def __post_init__(self):
        if min(self.k, self.l, self.m, self.n) < 1:
            raise ValueError("window parameters must be positive integers")
        if not Fraction(1) < self.lower < self.upper:
            raise ValueError(
                "window parameters must satisfy 1 < k/l < m/n")

    @property
    def lower(self) -> Fraction:
        return Fraction(self.k, self.l)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.m, self.n)

    def contains_weight(self, alpha) -> bool:
        return self.lower < Fraction(alpha) < self.upper


def window_relations(oracle: OrderOracle, window: Window,
                     printed_form: bool = False) -> tuple:
    """The four defining comparisons of window membership, each labelled.

    With ``c = a b a^-1``, the conditions are ``1 < b``, ``b < a``,
    ``c^n < b^m`` and ``b^k < c^l``.  The lower condition is sometimes
    quoted with ``k`` and ``l`` exchanged; pass ``printed_form=True`` to
    evaluate that variant (for a level order it only asserts
    ``alpha > l/k``, a bound below one, so every weight above one passes
    it vacuously and the variant cannot separate windows).
    """
    fp = oracle.group
    b = fp.generator("b", 1)
    a = fp.generator("a", 1)
    c = fp.conjugate(b, a)
    k, l = (window.l, window.k) if printed_form else (window.k, window.l)
    checks = (
        ("1 < b", fp.identity, b),
        ("b < a", b, a),
        (f"(a b a^-1)^{window.n} < b^{window.m}",
         fp.power(c, window.n), fp.power(b, window.m)),
        (f"b^{k} < (a b a^-1)^{l}", fp.power(b, k), fp.power(c, l)),
    )
    return tuple(
        (label, oracle.sign(fp.multiply(fp.invert(u), v)) == 1)
        for label, u, v in checks)


def in_window(oracle: OrderOracle, window: Window,
              printed_form: bool = False) -> bool:
    """Whether the order satisfies all four window conditions."""
    return all(ok for _, ok in window_relations(oracle, window, printed_form))


# ----------------------------------------------------------------------
# separation evidence


@dataclass(frozen=True)
class SeparationReport:
    """Evidence that two orders are genuinely far apart.

    ``memberships`` records that each order lies in its own window and
    outside the other's.  ``escapes`` lists automorphism words whose
    pullback dragged an order into the other window -- empty on success.
    ``certificate`` shows the windows are mutually exclusive for *every*
    bi-invariant order: assuming the characteristic comparisons of both at
    once derives a contradiction.
    """

    alpha: Fraction
    beta: Fraction
    first_window: Window
    second_window: Window
    memberships: tuple
    automorphisms_checked: int
    escapes: tuple
    certificate: object

    @property
    def ok(self) -> bool:
        expected = (("alpha in first", True), ("alpha in second", False),
                    ("beta in second", True), ("beta in first", False))
        return (self.memberships == expected and not self.escapes
                and self.certificate.contradictory)


def separation_evidence(fp: FreeProduct, alpha, beta,
                        first_window: Window, second_window: Window,
                        aut_len: int = 3,
                        saturate_bound: int = 24) -> SeparationReport:
    """Separate the level orders of two weights by windows.

    Requires the interleaving ``1 < k1/l1 < alpha < m1/n1 <= k2/l2 < beta <
    m2/n2``.  Verifies the four membership facts, pulls each order back
    along every automorphism word up to ``aut_len`` Nielsen moves and
    checks none lands in the other window, and saturates the combined
    characteristic comparisons of the two windows into a contradiction
    certificate.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    chain = (Fraction(1), first_window.lower, alpha, first_window.upper,
             second_window.lower, beta, second_window.upper)
    for left, right in zip(chain, chain[1:]):
        if left > right or (left == right and left in (alpha, beta)):
            raise ValueError(
                "weights and windows must interleave: 1 < k1/l1 < alpha "
                "< m1/n1 <= k2/l2 < beta < m2/n2")

    first = LevelOracle(fp, alpha)
    second = LevelOracle(fp, beta)
    memberships = (
        ("alpha in first", in_window(first, first_window)),
        ("alpha in second", in_window(first, second_window)),
        ("beta in second", in_window(second, second_window)),
        ("beta in first", in_window(second, first_window)),
    )

    escapes = []
    count = 0
    for moves in enumerate_autwords(aut_len):
        count += 1
        if in_window(pullback(second, moves), first_window):
            escapes.append((moves, "beta pulled into first window"))
        if in_window(pullback(first, moves), second_window):
            escapes.append((moves, "alpha pulled into second window"))

    b = fp.generator("b", 1)
    a = fp.generator("a", 1)
    c = fp.conjugate(b, a)
    seeds = (
        b,
        fp.multiply(fp.power(b, first_window.m),
                    fp.power(fp.invert(c), first_window.n)),
        fp.multiply(fp.power(c, second_window.l),
                    fp.power(fp.invert(b), second_window.k)),
    )
    certificate = cone_saturate(fp, seeds, saturate_bound)

    return SeparationReport(alpha, beta, first_window, second_window,
                            memberships, count, tuple(escapes), certificate)
