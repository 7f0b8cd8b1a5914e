"""Graded tensor algebra and free Lie algebra oracles.

Words live over a fixed ordered generator set with integer degrees (default
1).  The right group action on words carries the loop-grading sign
convention: a crossing of two letters contributes the Koszul sign of their
degrees *shifted up by one*.  Under this convention the projector elements
act as iterated graded brackets on degree-1 generators, and as the classical
(sign-twisted) bracket on even-degree generators, which is what all the rank
oracles below rely on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import ConventionFault, InvalidInput
from .fincat import GroupRingElement, SetMap, bracket_element, w_element
from .homalg import Echelon, rank_of

ONE = Fraction(1)

Word = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class GradedGenerators:
    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise InvalidInput("generator names must be distinct")
        if any(d < 0 for d in self.degrees):
            raise InvalidInput("degrees must be nonnegative")

    @staticmethod
    def of(names: Iterable[str], degree: int = 1) -> "GradedGenerators":
        names = tuple(names)
        return GradedGenerators(names, tuple(degree for _ in names))

    def __len__(self) -> int:
        return len(self.names)

    def words(self, weight: int) -> Iterator[Word]:
        return itertools.product(range(len(self.names)), repeat=weight)

    def word_degree(self, word: Word) -> int:
        return sum(self.degrees[g] for g in word)


class TensorElement:
    """Homogeneous-weight element of the tensor algebra, in canonical form."""

    __slots__ = ("generators", "weight", "terms")

    def __init__(
        self,
        generators: GradedGenerators,
        weight: int,
        terms: dict[Word, Fraction] | None = None,
    ) -> None:
        self.generators = generators
        self.weight = weight
        self.terms: dict[Word, Fraction] = {}
        for w, c in (terms or {}).items():
            if len(w) != weight:
                raise InvalidInput("word length differs from the declared weight")
            if c:
                self.terms[w] = Fraction(c)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if self.weight != other.weight or self.generators != other.generators:
            raise InvalidInput("mismatched tensor components")
        terms = dict(self.terms)
        for w, c in other.terms.items():
            v = terms.get(w, Fraction(0)) + c
            if v:
                terms[w] = v
            else:
                terms.pop(w, None)
        return TensorElement(self.generators, self.weight, terms)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction | int) -> "TensorElement":
        c = Fraction(c)
        return TensorElement(
            self.generators, self.weight, {w: c * v for w, v in self.terms.items()}
        )

    def concat(self, other: "TensorElement") -> "TensorElement":
        terms: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = terms.get(w, Fraction(0)) + c1 * c2
                if v:
                    terms[w] = v
        return TensorElement(self.generators, self.weight + other.weight, terms)

    def degree(self) -> int:
        """Total degree; defined for elements homogeneous in degree."""
        degs = {self.generators.word_degree(w) for w in self.terms}
        if len(degs) > 1:
            raise InvalidInput("element is not degree-homogeneous")
        return degs.pop() if degs else 0

    def is_zero(self) -> bool:
        return not self.terms

    def as_vector(self, basis_index: dict[Word, int]) -> dict[int, Fraction]:
        return {basis_index[w]: c for w, c in self.terms.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (
            self.generators == other.generators
            and self.weight == other.weight
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        names = self.generators.names
        bits = []
        for w, c in sorted(self.terms.items()):
            bits.append(f"({c})" + "".join(names[g] for g in w))
        return " + ".join(bits) if bits else "0"


def generator(gens: GradedGenerators, index: int) -> TensorElement:
    return TensorElement(gens, 1, {(index,): ONE})


def word_element(gens: GradedGenerators, word: Sequence[int]) -> TensorElement:
    return TensorElement(gens, len(word), {tuple(word): ONE})


# ---------------------------------------------------------------------------
# the signed right action

def _shifted_sign(images: tuple[int, ...], degrees: tuple[int, ...]) -> int:
    """Koszul sign of the coordinate pullback, degrees shifted by one."""
    exp = 0
    for a, b in itertools.combinations(range(len(images)), 2):
        if images[a] > images[b]:
            exp += (degrees[images[a] - 1] + 1) * (degrees[images[b] - 1] + 1)
    return -1 if exp % 2 else 1


def right_action(g: GroupRingElement, t: TensorElement) -> TensorElement:
    """The signed right action of a group-ring element on a tensor element.

    For degree-1 generators the action of w_n computes the n-fold iterated
    graded bracket [[...[v_1, v_2]...], v_n].
    """
    if g.n != t.weight:
        raise InvalidInput("group ring size differs from the tensor weight")
    degs = t.generators.degrees
    out: dict[Word, Fraction] = {}
    for word, coeff in t.terms.items():
        word_degrees = tuple(degs[i] for i in word)
        for perm, c in g.terms.items():
            sign = _shifted_sign(perm.images, word_degrees)
            new = tuple(word[j - 1] for j in perm.images)
            v = out.get(new, Fraction(0)) + coeff * c * sign
            if v:
                out[new] = v
            else:
                out.pop(new, None)
    return TensorElement(t.generators, t.weight, out)


def bracket(a: TensorElement, b: TensorElement) -> TensorElement:
    """Graded bracket [a, b] = ab - (-1)^{|a||b|} ba."""
    sign = Fraction((-1) ** (a.degree() * b.degree() + 1))
    return a.concat(b) + b.concat(a).scale(sign)


def bracket_via_group_ring(a: TensorElement, b: TensorElement) -> TensorElement:
    """The same bracket as the right action of the block-rotation element."""
    return right_action(bracket_element(a.weight, b.weight), a.concat(b))


# ---------------------------------------------------------------------------
# derivations

def derivation_d(t: TensorElement) -> TensorElement:
    """Degree-one derivation v -> v(x)v, extended with alternating signs.

    Defined for degree-1 generators;  sends weight n to weight n+1.
    """
    if any(d != 1 for d in t.generators.degrees):
        raise InvalidInput("the squaring derivation requires degree-1 generators")
    out: dict[Word, Fraction] = {}
    for word, coeff in t.terms.items():
        for k in range(len(word)):
            new = word[: k + 1] + word[k:]
            c = coeff * Fraction((-1) ** k)
            v = out.get(new, Fraction(0)) + c
            if v:
                out[new] = v
            else:
                out.pop(new, None)
    return TensorElement(t.generators, t.weight + 1, out)


def lie_submodule_echelon(gens: GradedGenerators, n: int) -> tuple[Echelon, dict[Word, int]]:
    index = {w: i for i, w in enumerate(gens.words(n))}
    ech = Echelon()
    w_n = w_element(n)
    for word in gens.words(n):
        img = right_action(w_n, word_element(gens, word))
        ech.add(img.as_vector(index))
    return ech, index


def in_lie_submodule(t: TensorElement) -> bool:
    """Rank-based membership test for the weight-n bracket component."""
    ech, index = lie_submodule_echelon(t.generators, t.weight)
    return ech.contains(t.as_vector(index))


def degree_derivation(t: TensorElement) -> TensorElement:
    """Multiplication by the weight on bracket elements; equals the w-action there."""
    if not in_lie_submodule(t):
        raise InvalidInput("input is not in the bracket component of its weight")
    out = t.scale(t.weight)
    if right_action(w_element(t.weight), t) != out:
        raise ConventionFault("weight derivation disagrees with the projector action")
    return out


def adjoint(x: TensorElement, y: TensorElement) -> TensorElement:
    return bracket(x, y)


def quillen_rho(t: TensorElement) -> TensorElement:
    """(1/n) ad_{x_1} ad_{x_2} ... ad_{x_{n-1}} (x_n) per word; left-inverse
    to the inclusion of the bracket component."""
    if t.weight == 0:
        return TensorElement(t.generators, 0)
    out = TensorElement(t.generators, t.weight)
    for word, coeff in t.terms.items():
        acc = word_element(t.generators, (word[-1],))
        for g in reversed(word[:-1]):
            acc = bracket(word_element(t.generators, (g,)), acc)
        out = out + acc.scale(coeff * Fraction(1, t.weight))
    return out


# ---------------------------------------------------------------------------
# rank oracles

def lie_rank(n: int, num_generators: int, degree: int = 1) -> int:
    """Rank of the weight-n projector on the tensor space, checked two ways.

    (a) matrix rank of the action, (b) trace of the action divided by n;
    these agree because the square of the projector element is n times
    itself.  Disagreement aborts: it would mean a broken sign convention.
    """
    gens = GradedGenerators.of([f"g{i}" for i in range(num_generators)], degree)
    index = {w: i for i, w in enumerate(gens.words(n))}
    w_n = w_element(n)
    vectors = []
    trace = Fraction(0)
    for word in gens.words(n):
        img = right_action(w_n, word_element(gens, word))
        vectors.append(img.as_vector(index))
        trace += img.terms.get(word, Fraction(0))
    matrix_rank = rank_of(vectors)
    if trace % n:
        raise ConventionFault("projector trace is not divisible by the weight")
    trace_rank = int(trace / n)
    if matrix_rank != trace_rank:
        raise ConventionFault(
            f"rank oracle mismatch at weight {n}: matrix {matrix_rank}, trace {trace_rank}"
        )
    return matrix_rank


def moebius(n: int) -> int:
    if n == 1:
        return 1
    out, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    if m > 1:
        out = -out
    return out


def witt_rank(n: int, m: int) -> int:
    """Classical necklace count (1/n) sum_{d|n} mu(d) m^{n/d}."""
    total = sum(moebius(d) * m ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def lyndon_words(n: int, m: int) -> list[Word]:
    """Lyndon words of length n over m letters (Duval's generation)."""
    out: list[Word] = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == n:
            out.append(tuple(w))
        period = len(w)
        while len(w) < n:
            w.append(w[len(w) % period])
        while w and w[-1] == m - 1:
            w.pop()
    return out


def lyndon_count(n: int, m: int) -> int:
    return len(lyndon_words(n, m))
