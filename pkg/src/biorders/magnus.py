"""Sign computations in the Magnus embedding of a rank-two free group.

The free group on ``a, b`` embeds into the ring of formal power series in
two noncommuting variables ``A, B`` by sending ``a`` to ``1 + A`` and ``b``
to ``1 + B``.  Ordering monomials by degree first and then lexicographically
with ``A < B``, every nontrivial group element has a well-defined *leading*
term beyond the constant ``1``, and declaring an element positive when that
leading coefficient is positive yields a total order on the free group that
is invariant under multiplication on both sides.

This module implements just enough of the series ring to read off leading
coefficients:

* monomials are packed into integers -- a sentinel high bit followed by one
  bit per variable (``A`` is ``0``, ``B`` is ``1``) -- so that the
  degree-lexicographic order *is* the integer order and concatenation is a
  shift-and-or;
* series are truncated at a degree cap and stored sparsely as
  ``{monomial: coefficient}`` with integer coefficients (group elements
  always have integral expansions);
* :func:`magnus_sign` starts with a very low cap and doubles it until a
  leading term appears, which keeps the common case (nonzero exponent sum,
  decided in degree one) cheap while still handling deep commutators.

Truncation is sound for sign purposes: the truncated product agrees with
the full product in every degree up to the cap, so the first nonzero term
found below the cap is the true leading term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .words import FreeProduct, Word, ZFactor


class CapExceeded(RuntimeError):
    """Raised when no leading term is found below the largest degree cap."""


EMPTY_MONOMIAL = 1  # the packed empty word: just the sentinel bit


def monomial_degree(m: int) -> int:
    return m.bit_length() - 1


def monomial_concat(m1: int, m2: int) -> int:
    d2 = m2.bit_length() - 1
    return (m1 << d2) | (m2 ^ (1 << d2))


def format_monomial(m: int) -> str:
    """Render a packed monomial as a juxtaposed variable string, e.g. ``ABB``."""
    if m == EMPTY_MONOMIAL:
        return "1"
    return "".join("B" if c == "1" else "A" for c in bin(m)[3:])


@dataclass(frozen=True, eq=True)
class TruncSeries:
    """A series truncated beyond ``cap``: exact in every degree <= cap.

    ``terms`` maps packed monomials to nonzero integer coefficients; treat
    it as read-only.
    """

    cap: int
    terms: dict

    def coefficient(self, m: int) -> int:
        return self.terms.get(m, 0)


@lru_cache(maxsize=None)
def _letter_series(bit: int, k: int, cap: int) -> tuple:
    """The expansion of ``(1 + X)**k`` through degree ``cap``.

    Entries are ``(degree, packed_bits_without_sentinel, coefficient)`` in
    increasing degree; for negative ``k`` the binomial coefficients continue
    via ``C(k, j) = (-1)**j * C(j - k - 1, j)``.
    """
    out = []
    for j in range(cap + 1):
        if 0 <= k < j:
            break
        c = math.comb(k, j) if k >= 0 else (-1) ** j * math.comb(j - k - 1, j)
        out.append((j, ((1 << j) - 1) if bit else 0, c))
    return tuple(out)


def _magnus_bits(fp: FreeProduct) -> dict:
    gens = fp.gen_names()
    if len(gens) != 2 or not all(isinstance(f, ZFactor) for f in fp.factors):
        raise ValueError("the Magnus expansion is defined for a rank-two free group")
    return {gens[0]: 0, gens[1]: 1}


def expand(fp: FreeProduct, w: Word, cap: int) -> TruncSeries:
    """The Magnus expansion of ``w``, exact through degree ``cap``."""
    bits = _magnus_bits(fp)
    acc = {EMPTY_MONOMIAL: 1}
    for letter in w.letters:
        fac = fp.by_name[letter.factor]
        for gen, k in fac.tokens(letter.elem):
            series = _letter_series(bits[gen], k, cap)
            nxt: dict = {}
            for m1, c1 in acc.items():
                room = cap - (m1.bit_length() - 1)
                for d2, stripped, c2 in series:
                    if d2 > room:
                        break
                    m = (m1 << d2) | stripped
                    nxt[m] = nxt.get(m, 0) + c1 * c2
            acc = {m: c for m, c in nxt.items() if c}
    return TruncSeries(cap, acc)


def mul_series(s1: TruncSeries, s2: TruncSeries) -> TruncSeries:
    """Truncated product, exact through the smaller of the two caps."""
    cap = min(s1.cap, s2.cap)
    out: dict = {}
    for m1, c1 in s1.terms.items():
        d1 = m1.bit_length() - 1
        if d1 > cap:
            continue
        for m2, c2 in s2.terms.items():
            d2 = m2.bit_length() - 1
            if d1 + d2 > cap:
                continue
            m = (m1 << d2) | (m2 ^ (1 << d2))
            out[m] = out.get(m, 0) + c1 * c2
    return TruncSeries(cap, {m: c for m, c in out.items() if c})


def series_sign(s: TruncSeries):
    """Sign of the leading non-constant coefficient, or ``None`` if none.

    ``None`` means every term of positive degree up to the cap vanished --
    the element is either trivial or its leading term lies deeper.
    """
    leading = None
    for m in s.terms:
        if m != EMPTY_MONOMIAL and (leading is None or m < leading):
            leading = m
    if leading is None:
        return None
    return 1 if s.terms[leading] > 0 else -1


_CAPS = (1, 2, 4, 8, 16, 32, 64)


def magnus_sign(fp: FreeProduct, w: Word, max_cap: int = 64) -> int:
    """The order sign of ``w``: +1 positive, -1 negative, 0 for the identity.

    The degree cap escalates from 1 until a leading term appears; elements
    with nonzero exponent sum are decided immediately, deeper elements cost
    a few more passes.
    """
    if w.is_identity:
        return 0
    for cap in _CAPS:
        if cap > max_cap:
            break
        sg = series_sign(expand(fp, w, cap))
        if sg is not None:
            return sg
    raise CapExceeded(
        f"no nonzero term of {fp.format(w)!r} in degrees 1..{max_cap}")


def format_series(s: TruncSeries) -> str:
    """Human-readable rendering, e.g. ``1 + AB - BA``."""
    if not s.terms:
        return "0"
    parts = []
    for i, m in enumerate(sorted(s.terms)):
        c = s.terms[m]
        body = format_monomial(m) if m != EMPTY_MONOMIAL else ""
        if not body:
            chunk = str(abs(c))
        elif abs(c) == 1:
            chunk = body
        else:
            chunk = f"{abs(c)} {body}"
        if i == 0:
            parts.append(chunk if c > 0 else f"-{chunk}")
        else:
            parts.append(("+ " if c > 0 else "- ") + chunk)
    return " ".join(parts)
