"""Graded spaces, sparse vectors over basis words, and Koszul-signed operators.

Conventions used throughout the package:

* a tensor word over a graded space is a tuple of generator names; the empty
  tuple is the (explicit) empty word;
* the sign rule is (phi (x) psi)(m (x) m') = (-1)^{|psi||m|} phi(m) (x) psi(m');
  every sign in the package is computed from explicit degree crossings at the
  point of use, never cached;
* a degree-shifted copy of a space keeps the generator names and lowers each
  degree by one (sigma has degree -1, its inverse omega degree +1).
"""

from __future__ import annotations

import itertools
from typing import (Any, Callable, Dict, Iterable, Iterator, List, Optional,
                    Sequence, Tuple)

from .rings import Ring

Word = Tuple[str, ...]


class Grading:
    """The grading group: the integers, or a cyclic group of even order."""

    def __init__(self, modulus: Optional[int] = None):
        if modulus is not None:
            if modulus < 2 or modulus % 2 != 0:
                raise ValueError("cyclic grading modulus must be even and >= 2")
        self.modulus = modulus

    def normalize(self, d: int) -> int:
        return d if self.modulus is None else d % self.modulus

    def parity(self, d: int) -> int:
        # well defined for cyclic gradings because the modulus is even
        return d % 2

    def equal(self, a: int, b: int) -> bool:
        return self.normalize(a) == self.normalize(b)

    def describe(self) -> str:
        return "Z" if self.modulus is None else "Z/%d" % self.modulus

    def __eq__(self, other):
        return isinstance(other, Grading) and self.modulus == other.modulus

    def __hash__(self):
        return hash(("grading", self.modulus))


class GradedSpace:
    """A free graded module on named generators."""

    def __init__(self, ring: Ring, grading: Grading,
                 generators: Sequence[Tuple[str, int]]):
        names = [n for n, _ in generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        self.ring = ring
        self.grading = grading
        self.gens: Dict[str, int] = {n: grading.normalize(d)
                                     for n, d in generators}
        self.names: Tuple[str, ...] = tuple(names)

    def degree(self, name: str) -> int:
        return self.gens[name]

    def parity(self, name: str) -> int:
        return self.grading.parity(self.gens[name])

    def shifted(self) -> "GradedSpace":
        """The suspension: same names, every degree lowered by one."""
        return GradedSpace(self.ring, self.grading,
                           [(n, d - 1) for n, d in self.gens.items()])

    def word_degree(self, word: Word) -> int:
        return self.grading.normalize(sum(self.gens[x] for x in word))

    def word_parity(self, word: Word) -> int:
        return sum(self.gens[x] for x in word) % 2

    def words(self, max_len: int, min_len: int = 0) -> Iterator[Word]:
        for ln in range(min_len, max_len + 1):
            for w in itertools.product(self.names, repeat=ln):
                yield w


class Vector:
    """A sparse linear combination of hashable basis words."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Optional[Dict[Any, Any]] = None):
        self.ring = ring
        self.terms: Dict[Any, Any] = {}
        if terms:
            for w, c in terms.items():
                self.add_term(w, c)

    @classmethod
    def zero(cls, ring: Ring) -> "Vector":
        return cls(ring)

    @classmethod
    def basis(cls, ring: Ring, word: Any, coeff: Any = None) -> "Vector":
        v = cls(ring)
        v.add_term(word, ring.one if coeff is None else coeff)
        return v

    def add_term(self, word: Any, coeff: Any) -> None:
        c = self.ring.add(self.terms.get(word, self.ring.zero), coeff)
        if self.ring.is_zero(c):
            self.terms.pop(word, None)
        else:
            self.terms[word] = c

    def __add__(self, other: "Vector") -> "Vector":
        out = Vector(self.ring, dict(self.terms))
        for w, c in other.terms.items():
            out.add_term(w, c)
        return out

    def __sub__(self, other: "Vector") -> "Vector":
        out = Vector(self.ring, dict(self.terms))
        for w, c in other.terms.items():
            out.add_term(w, self.ring.neg(c))
        return out

    def __neg__(self) -> "Vector":
        return Vector(self.ring, {w: self.ring.neg(c)
                                  for w, c in self.terms.items()})

    def scaled(self, c: Any) -> "Vector":
        out = Vector(self.ring)
        for w, k in self.terms.items():
            out.add_term(w, self.ring.mul(c, k))
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Vector) and self.terms == other.terms

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: repr(t[0])))

    def map_words(self, fn: Callable[[Any], Any]) -> "Vector":
        out = Vector(self.ring)
        for w, c in self.terms.items():
            out.add_term(fn(w), c)
        return out

    def bind(self, fn: Callable[[Any], "Vector"]) -> "Vector":
        """Apply a word -> Vector map linearly."""
        out = Vector(self.ring)
        for w, c in self.terms.items():
            piece = fn(w)
            if piece is None:
                continue
            for w2, c2 in piece.terms.items():
                out.add_term(w2, self.ring.mul(c, c2))
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join("%r*%r" % (c, w) for w, c in sorted(
            self.terms.items(), key=lambda t: repr(t[0])))


def sign(parity: int) -> int:
    return -1 if parity % 2 else 1


class MultiOp:
    """A family of multilinear operations of a common degree.

    The table maps input words (tuples of generator names, the length is the
    arity) to Vectors of output words.  Arities up to ``arity_cap`` are
    meaningful; missing entries are zero; arities beyond the cap are zero by
    declaration.
    """

    def __init__(self, ring: Ring, degree: int, arity_cap: int,
                 table: Optional[Dict[Word, Vector]] = None):
        self.ring = ring
        self.degree = degree
        self.arity_cap = arity_cap
        self.table: Dict[Word, Vector] = {}
        if table:
            for w, v in table.items():
                self.set(w, v)

    def set(self, word: Word, value: Vector) -> None:
        if len(word) > self.arity_cap:
            raise ValueError("arity %d beyond cap %d" % (len(word),
                                                         self.arity_cap))
        if value.is_zero():
            self.table.pop(word, None)
        else:
            self.table[word] = value

    def apply(self, word: Word) -> Vector:
        v = self.table.get(tuple(word))
        return v if v is not None else Vector.zero(self.ring)

    def __call__(self, word: Word) -> Vector:
        return self.apply(word)

    def apply_vector(self, vec: Vector) -> Vector:
        return vec.bind(lambda w: self.apply(w))

    def arities(self) -> List[int]:
        return sorted({len(w) for w in self.table})

    def support_min(self) -> Optional[int]:
        ar = self.arities()
        return ar[0] if ar else None

    def plus(self, other: "MultiOp") -> "MultiOp":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        out = MultiOp(self.ring, self.degree,
                      max(self.arity_cap, other.arity_cap), dict(self.table))
        for w, v in other.table.items():
            out.set(w, out.apply(w) + v)
        return out

    def negated(self) -> "MultiOp":
        return MultiOp(self.ring, self.degree, self.arity_cap,
                       {w: -v for w, v in self.table.items()})

    def __eq__(self, other):
        return (isinstance(other, MultiOp) and self.degree == other.degree
                and self.table == other.table)


def koszul_apply(ops: Sequence[Tuple[int, Callable[[Word], Vector]]],
                 blocks: Sequence[Word],
                 block_parity: Callable[[Word], int],
                 ring: Ring) -> Vector:
    """Apply a tensor product of operations slotwise with Koszul signs.

    ``ops`` is a list of (degree, word -> Vector) pairs, one per block; the
    sign is (-1)^{sum_k |op_k| * (|block_1| + ... + |block_{k-1}|)}.  The
    output words of all slots are concatenated.
    """
    if len(ops) != len(blocks):
        raise ValueError("ops/blocks length mismatch")
    s = 0
    prefix_parity = 0
    for (deg, _), block in zip(ops, blocks):
        s += deg * prefix_parity
        prefix_parity = (prefix_parity + block_parity(block)) % 2
    out = Vector.basis(ring, (), ring.from_int(sign(s)))
    for (_, fn), block in zip(ops, blocks):
        piece = fn(block)
        nxt = Vector(ring)
        for w1, c1 in out.terms.items():
            for w2, c2 in piece.terms.items():
                nxt.add_term(w1 + w2, ring.mul(c1, c2))
        out = nxt
    return out


def sandwich(op: MultiOp, word: Word,
              letter_parity: Callable[[str], int],
              min_arity: int = 0) -> Vector:
    """The coderivation 1^(x) (x) op (x) 1^(x) evaluated on a word.

    Sums over every contiguous block (including empty blocks at each of the
    len+1 positions when the family has an arity-0 entry); the sign is the
    parity of the operator times the parity of the crossed prefix.
    """
    ring = op.ring
    n = len(word)
    out = Vector.zero(ring)
    for i in range(n + 1):
        pref_par = sum(letter_parity(x) for x in word[:i]) % 2
        s = ring.from_int(sign(op.degree * pref_par))
        top = min(op.arity_cap, n - i)
        for ln in range(max(min_arity, 0), top + 1):
            block = word[i:i + ln]
            if ln == 0 and i == n + 1:
                continue
            mid = op.apply(block)
            if mid.is_zero():
                continue
            for w2, c2 in mid.terms.items():
                out.add_term(word[:i] + w2 + word[i + ln:], ring.mul(s, c2))
    return out


def sandwich_vector(op: MultiOp, vec: Vector,
                     letter_parity: Callable[[str], int]) -> Vector:
    return vec.bind(lambda w: sandwich(op, w, letter_parity))


def compositions(word: Word, max_block: int,
                 max_blocks: Optional[int] = None) -> Iterator[Tuple[Word, ...]]:
    """All ordered splittings of a word into nonempty blocks of bounded size."""
    n = len(word)
    if n == 0:
        yield ()
        return

    def rec(start: int, acc: List[Word]):
        if start == n:
            yield tuple(acc)
            return
        if max_blocks is not None and len(acc) >= max_blocks:
            return
        for ln in range(1, min(max_block, n - start) + 1):
            acc.append(word[start:start + ln])
            yield from rec(start + ln, acc)
            acc.pop()

    yield from rec(0, [])


def geometric_extend(op: MultiOp, word: Word,
                     block_parity: Callable[[Word], int]) -> Vector:
    """The geometric series (op_.)^(x) on a word: sum over splittings into
    nonempty blocks of the slotwise application.  The empty word maps to
    itself.  Families with an arity-0 entry are refused (the series would not
    terminate)."""
    ring = op.ring
    if 0 in op.arities():
        raise ValueError("geometric series of a family with an arity-0 part")
    if not word:
        return Vector.basis(ring, ())
    out = Vector.zero(ring)
    for split in compositions(word, op.arity_cap):
        piece = koszul_apply([(op.degree, op.apply)] * len(split), split,
                             block_parity, ring)
        out = out + piece
    return out


def comultiply(word: Word, ring: Ring, reduced: bool = False) -> Vector:
    """Deconcatenation on the tensor coalgebra; basis words are pairs.

    The full coproduct has len+1 splittings; the reduced one drops the two
    with an empty side.
    """
    n = len(word)
    out = Vector.zero(ring)
    lo, hi = (1, n - 1) if reduced else (0, n)
    for i in range(lo, hi + 1):
        out.add_term((word[:i], word[i:]), ring.one)
    return out
