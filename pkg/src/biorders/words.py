"""Words in free products of orderable building blocks.

Everything else in this package is built on top of a small combinatorial
group theory layer: free products ``G = A_1 * ... * A_k`` whose factors are
infinite cyclic groups, rank-two abelian groups, or finite-rank free groups.
Group elements are kept in *normal form* -- alternating sequences of
non-identity elements drawn from distinct neighbouring factors -- so that
equality of group elements is literal equality of tuples and words can be
used as dictionary keys.

A :class:`Word` is a tuple of :class:`Letter` values in product order:
``letters[0]`` is the leftmost symbol, which *acts last* when the word is
interpreted as a composition of maps.  Each letter records the *name* of its
factor rather than a positional index, so words remain meaningful when
realizations of several groups are combined side by side.

The :class:`FreeProduct` context object owns the factors and implements the
group operations (multiplication with cancellation, inversion, powers,
conjugation), word enumeration (balls of bounded syllable-free length,
suffixes, subwords), and a round-tripping text format.  Two text forms are
accepted on input:

* the canonical form produced by :meth:`FreeProduct.format`, e.g.
  ``a^1 b^-2 a^3`` (whitespace-separated ``gen^exp`` tokens, ``e`` for the
  identity), and
* a compact form for single-character generators where case encodes the sign,
  e.g. ``aB`` for ``a^1 b^-1`` -- convenient on a command line.

The module also knows about the elementary Nielsen automorphisms of a rank
two free group (inverting a generator, swapping the generators, and the
transvection ``a -> ab``), which are used elsewhere to pull orderings back
along automorphisms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple


class WordSyntaxError(ValueError):
    """Raised when a textual word cannot be parsed."""


class Letter(NamedTuple):
    """One syllable of a normal form: a non-identity element of one factor.

    ``factor`` is the *name* of the factor (not its position), and ``elem``
    is the factor's own representation of the element, which is always
    hashable.
    """

    factor: str
    elem: object


@dataclass(frozen=True)
class Word:
    """A group element in normal form, as a tuple of letters in product order."""

    letters: tuple

    @property
    def is_identity(self) -> bool:
        return not self.letters


def _int_key(k: int) -> tuple:
    """Total order on nonzero integers: 1 < -1 < 2 < -2 < ..."""
    return (abs(k), 0 if k > 0 else 1)


class Factor:
    """Shared behaviour of free-product factors.

    Concrete factors provide the group operations on their own element
    representation.  ``mul`` returns ``None`` for the identity, which is how
    cancellation is signalled to the normal-form routine; elements stored in
    letters are never the identity.
    """

    name: str

    def gen_names(self) -> tuple:
        raise NotImplementedError

    def gen_pow(self, gen: str, k: int):
        """The element ``gen**k``, or ``None`` when ``k == 0``."""
        raise NotImplementedError

    def mul(self, e, f):
        raise NotImplementedError

    def inv(self, e):
        raise NotImplementedError

    def size(self, e) -> int:
        """Word length of ``e`` with respect to the factor's generators."""
        raise NotImplementedError

    def elem_key(self, e) -> tuple:
        """A deterministic sort key; total on the factor's elements."""
        raise NotImplementedError

    def tokens(self, e) -> list:
        """``[(gen, exp), ...]`` rendering of ``e``, exponents nonzero."""
        raise NotImplementedError

    def unit_letters(self, e) -> list:
        """``e`` written as a product of single generators, left to right."""
        raise NotImplementedError

    def tail_partials(self, e) -> list:
        """Partial products of ``unit_letters`` growing from the right end.

        The result lists the non-trivial right tails of ``e`` in increasing
        length, e.g. for ``a^3`` it is ``[a, a^2, a^3]``.  Tails of an
        element in normal form never collapse to the identity.
        """
        out = []
        acc = None
        for u in reversed(self.unit_letters(e)):
            acc = u if acc is None else self.mul(u, acc)
            assert acc is not None
            out.append(acc)
        return out

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"{type(self).__name__}({self.name!r})"


class ZFactor(Factor):
    """An infinite cyclic factor; elements are nonzero integer exponents."""

    def __init__(self, gen: str):
        self.name = gen
        self._gen = gen

    def gen_names(self):
        return (self._gen,)

    def gen_pow(self, gen, k):
        if gen != self._gen:
            raise KeyError(gen)
        return k if k else None

    def mul(self, e, f):
        s = e + f
        return s if s else None

    def inv(self, e):
        return -e

    def size(self, e):
        return abs(e)

    def elem_key(self, e):
        return _int_key(e)

    def tokens(self, e):
        return [(self._gen, e)]

    def unit_letters(self, e):
        step = 1 if e > 0 else -1
        return [step] * abs(e)


class ZLexFactor(Factor):
    """A rank-two abelian factor ``<u, v | uv = vu>``.

    Elements are pairs ``(m, n)`` standing for ``u^m v^n``; the name records
    the generator pair, e.g. ``"u.v"``.  (The factor itself is just the
    group; the lexicographic ordering that motivates the name lives in the
    realization layer.)
    """

    def __init__(self, first: str, second: str):
        if first == second:
            raise ValueError("generators of a rank-two factor must differ")
        self._gens = (first, second)
        self.name = f"{first}.{second}"

    def gen_names(self):
        return self._gens

    def gen_pow(self, gen, k):
        if gen == self._gens[0]:
            pair = (k, 0)
        elif gen == self._gens[1]:
            pair = (0, k)
        else:
            raise KeyError(gen)
        return pair if k else None

    def mul(self, e, f):
        pair = (e[0] + f[0], e[1] + f[1])
        return pair if pair != (0, 0) else None

    def inv(self, e):
        return (-e[0], -e[1])

    def size(self, e):
        return abs(e[0]) + abs(e[1])

    def elem_key(self, e):
        return (self.size(e), _int_key(e[0]) if e[0] else (0, 0),
                _int_key(e[1]) if e[1] else (0, 0))

    def tokens(self, e):
        m, n = e
        out = []
        if m:
            out.append((self._gens[0], m))
        if n:
            out.append((self._gens[1], n))
        return out

    def unit_letters(self, e):
        m, n = e
        out = [((1, 0) if m > 0 else (-1, 0))] * abs(m)
        out += [((0, 1) if n > 0 else (0, -1))] * abs(n)
        return out


class FreeFactor(Factor):
    """A finitely generated free factor.

    Elements are reduced tuples of ``(generator_index, exponent)`` pairs with
    nonzero exponents and distinct neighbouring indices.
    """

    def __init__(self, *gens: str):
        if len(set(gens)) != len(gens) or not gens:
            raise ValueError("free factor needs distinct generators")
        self._gens = tuple(gens)
        self.name = ".".join(gens)

    def gen_names(self):
        return self._gens

    def gen_pow(self, gen, k):
        idx = self._gens.index(gen)
        return ((idx, k),) if k else None

    def mul(self, e, f):
        left = list(e)
        i = 0
        while left and i < len(f):
            gi, ki = left[-1]
            gj, kj = f[i]
            if gi != gj:
                break
            left.pop()
            i += 1
            s = ki + kj
            if s:
                left.append((gi, s))
                break
        out = tuple(left) + tuple(f[i:])
        return out if out else None

    def inv(self, e):
        return tuple((g, -k) for g, k in reversed(e))

    def size(self, e):
        return sum(abs(k) for _, k in e)

    def elem_key(self, e):
        return (self.size(e), tuple((g,) + _int_key(k) for g, k in e))

    def tokens(self, e):
        return [(self._gens[g], k) for g, k in e]

    def unit_letters(self, e):
        out = []
        for g, k in e:
            step = 1 if k > 0 else -1
            out.extend(((g, step),) for _ in range(abs(k)))
        return out


class FreeProduct:
    """A free product of factors, with words kept in normal form.

    The context object is the owner of all word-level operations; words are
    passive data.  Balls, spheres and unit generators are cached, so reusing
    one :class:`FreeProduct` across a computation is cheap.
    """

    def __init__(self, *factors: Factor):
        if not factors:
            raise ValueError("free product needs at least one factor")
        names = [f.name for f in factors]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate factor names in {names}")
        self.factors = tuple(factors)
        self.by_name = {f.name: f for f in factors}
        self._factor_index = {f.name: i for i, f in enumerate(factors)}
        self._gen_to_factor: dict = {}
        for fac in factors:
            for gen in fac.gen_names():
                if gen in self._gen_to_factor:
                    raise ValueError(f"duplicate generator name {gen!r}")
                if gen == "e" or "^" in gen or any(c.isspace() for c in gen):
                    raise ValueError(f"unusable generator name {gen!r}")
                self._gen_to_factor[gen] = fac
        self.identity = Word(())
        self._spheres: list = [{(): self.identity}]
        self._seen: set = {()}
        self._ball_cache: dict = {}

    # ------------------------------------------------------------------
    # basic group operations

    def gen_names(self) -> tuple:
        return tuple(self._gen_to_factor)

    def generator(self, gen: str, k: int = 1) -> Word:
        """The word ``gen**k``."""
        fac = self._gen_to_factor.get(gen)
        if fac is None:
            raise KeyError(gen)
        elem = fac.gen_pow(gen, k)
        return Word((Letter(fac.name, elem),)) if elem is not None else self.identity

    def normal_form(self, letters: Iterable[Letter]) -> Word:
        """Reduce a letter sequence to normal form by merging and cancelling."""
        stack: list = []
        for letter in letters:
            if letter.elem is None:
                continue
            if stack and stack[-1].factor == letter.factor:
                merged = self.by_name[letter.factor].mul(stack[-1].elem, letter.elem)
                stack.pop()
                if merged is not None:
                    stack.append(Letter(letter.factor, merged))
            else:
                stack.append(letter)
        return Word(tuple(stack))

    def multiply(self, u: Word, v: Word) -> Word:
        return self.normal_form(u.letters + v.letters)

    def invert(self, w: Word) -> Word:
        return Word(tuple(
            Letter(l.factor, self.by_name[l.factor].inv(l.elem))
            for l in reversed(w.letters)))

    def power(self, w: Word, k: int) -> Word:
        if k < 0:
            w, k = self.invert(w), -k
        out = self.identity
        for _ in range(k):
            out = self.multiply(out, w)
        return out

    def conjugate(self, g: Word, h: Word) -> Word:
        """The conjugate ``h g h^-1`` (so conjugation acts on the left)."""
        return self.multiply(self.multiply(h, g), self.invert(h))

    def size(self, w: Word) -> int:
        """Word length with respect to the generators of all factors."""
        return sum(self.by_name[l.factor].size(l.elem) for l in w.letters)

    def in_factors(self, w: Word, names: Iterable[str]) -> bool:
        """Whether every letter of ``w`` lies in one of the named factors."""
        allowed = set(names)
        return all(l.factor in allowed for l in w.letters)

    # ------------------------------------------------------------------
    # enumeration

    def word_key(self, w: Word) -> tuple:
        """Deterministic total order: by length, then letterwise."""
        return (self.size(w), tuple(
            (self._factor_index[l.factor],
             self.by_name[l.factor].elem_key(l.elem))
            for l in w.letters))

    def unit_words(self) -> tuple:
        """All one-generator words ``g`` and ``g^-1``, in a fixed order."""
        out = []
        for fac in self.factors:
            for gen in fac.gen_names():
                out.append(self.generator(gen, 1))
                out.append(self.generator(gen, -1))
        return tuple(out)

    def _grow_spheres(self, radius: int) -> None:
        units = self.unit_words()
        while len(self._spheres) <= radius:
            frontier = {}
            for w in self._spheres[-1].values():
                for u in units:
                    v = self.multiply(w, u)
                    if v.letters not in self._seen:
                        self._seen.add(v.letters)
                        frontier[v.letters] = v
            self._spheres.append(frontier)

    def ball(self, radius: int) -> tuple:
        """All words of length at most ``radius``, sorted by :meth:`word_key`."""
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        if radius not in self._ball_cache:
            self._grow_spheres(radius)
            words = [w for sphere in self._spheres[:radius + 1]
                     for w in sphere.values()]
            self._ball_cache[radius] = tuple(sorted(words, key=self.word_key))
        return self._ball_cache[radius]

    def unit_letters(self, w: Word) -> list:
        """The letters of ``w`` split into single-generator pieces."""
        out = []
        for letter in w.letters:
            fac = self.by_name[letter.factor]
            out.extend(Letter(letter.factor, u)
                       for u in fac.unit_letters(letter.elem))
        return out

    def suffixes(self, w: Word) -> list:
        """All right tails of ``w``, shortest first, splitting letters.

        The tails are taken at every generator boundary, so for ``a^2 b^-1``
        the result is ``[e, b^-1, a b^-1, a^2 b^-1]``.  Right tails act
        first when the word is read as a composition of maps.
        """
        out = [self.identity]
        rest: tuple = ()
        for letter in reversed(w.letters):
            fac = self.by_name[letter.factor]
            for part in fac.tail_partials(letter.elem):
                out.append(Word((Letter(letter.factor, part),) + rest))
            rest = (letter,) + rest
        return out

    def subwords(self, w: Word) -> list:
        """All contiguous subwords of ``w`` at generator granularity.

        The result is deduplicated and sorted by :meth:`word_key`; it always
        contains the identity, every suffix and every prefix.
        """
        units = self.unit_letters(w)
        seen = {}
        for i in range(len(units) + 1):
            for j in range(i, len(units) + 1):
                sub = self.normal_form(units[i:j])
                seen[sub.letters] = sub
        return sorted(seen.values(), key=self.word_key)

    # ------------------------------------------------------------------
    # text round trip

    def parse(self, text: str) -> Word:
        """Parse either the canonical or the compact textual form."""
        s = text.strip()
        if s in ("", "e"):
            return self.identity
        if s in self._gen_to_factor:
            return self.generator(s)
        letters = []
        if "^" in s or any(c.isspace() for c in s):
            for tok in s.split():
                if tok == "e":
                    continue
                name, sep, expstr = tok.partition("^")
                if sep:
                    try:
                        k = int(expstr)
                    except ValueError:
                        raise WordSyntaxError(
                            f"bad exponent in token {tok!r}") from None
                else:
                    k = 1
                fac = self._gen_to_factor.get(name)
                if fac is None:
                    raise WordSyntaxError(f"unknown generator {name!r}")
                if k:
                    letters.append(Letter(fac.name, fac.gen_pow(name, k)))
        else:
            for c in s:
                name = c.lower()
                fac = self._gen_to_factor.get(name)
                if fac is None:
                    raise WordSyntaxError(
                        f"unknown generator {name!r} in compact word {s!r}")
                letters.append(Letter(
                    fac.name, fac.gen_pow(name, 1 if c.islower() else -1)))
        return self.normal_form(letters)

    def format(self, w: Word) -> str:
        """Render ``w`` in the canonical ``gen^exp`` form (``e`` if trivial)."""
        if w.is_identity:
            return "e"
        parts = []
        for letter in w.letters:
            fac = self.by_name[letter.factor]
            parts.extend(f"{g}^{k}" for g, k in fac.tokens(letter.elem))
        return " ".join(parts)


def free_group(*gens: str) -> FreeProduct:
    """The free group on the given generators, as a free product of lines."""
    return FreeProduct(*(ZFactor(g) for g in gens))


# ----------------------------------------------------------------------
# Nielsen automorphisms of a rank-two free group

NIELSEN_MOVES = ("inv_a", "inv_a^-1", "swap", "swap^-1", "mult", "mult^-1")


def _move_images(fp: FreeProduct, move: str) -> dict:
    a, b = fp.gen_names()
    wa, wb = fp.generator(a), fp.generator(b)
    if move in ("inv_a", "inv_a^-1"):
        return {a: fp.invert(wa), b: wb}
    if move in ("swap", "swap^-1"):
        return {a: wb, b: wa}
    if move == "mult":
        return {a: fp.multiply(wa, wb), b: wb}
    if move == "mult^-1":
        return {a: fp.multiply(wa, fp.invert(wb)), b: wb}
    raise ValueError(f"unknown Nielsen move {move!r}")


def apply_aut(fp: FreeProduct, moves: Iterable[str], w: Word) -> Word:
    """Apply a composition of Nielsen moves to ``w``.

    ``moves`` is read as a product of automorphisms: the first entry acts
    last, matching how words act as compositions of maps.
    """
    if len(fp.gen_names()) != 2:
        raise ValueError("Nielsen moves are defined for two generators")
    for move in reversed(tuple(moves)):
        images = _move_images(fp, move)
        out = fp.identity
        for letter in w.letters:
            fac = fp.by_name[letter.factor]
            for g, k in fac.tokens(letter.elem):
                out = fp.multiply(out, fp.power(images[g], k))
        w = out
    return w


def enumerate_autwords(max_len: int) -> list:
    """All Nielsen-move sequences of length at most ``max_len``."""
    out: list = [()]
    for length in range(1, max_len + 1):
        out.extend(itertools.product(NIELSEN_MOVES, repeat=length))
    return out
