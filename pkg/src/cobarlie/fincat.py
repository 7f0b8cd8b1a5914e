"""The category of finite sets with all maps, linearized over Q.

Objects are [n] = {1, ..., n}; a morphism is a formal rational combination of
set maps.  Composition is written ab = a o b (apply the right factor first),
so a right-multiplication realization R satisfies R_b o R_a = R_{ab}.  The
cycle written (1 2 ... k) is implemented as the map sending 1 -> k and
j -> j - 1 otherwise; together with left-to-right expansion of products this
is the unique reading under which the projector elements act as iterated
brackets (see w_element's oracle in the tests).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Iterator

from .errors import ConventionFault, InvalidInput

ONE = Fraction(1)


@dataclass(frozen=True, slots=True)
class SetMap:
    """A set map [m] -> [n], stored by its tuple of images (1-based)."""

    domain_size: int
    codomain_size: int
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.domain_size < 0 or self.codomain_size < 1:
            raise InvalidInput("sizes must be positive")
        if len(self.images) != self.domain_size:
            raise InvalidInput("image tuple length must equal the domain size")
        if any(not 1 <= j <= self.codomain_size for j in self.images):
            raise InvalidInput("image entry out of range")

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    def compose(self, other: "SetMap") -> "SetMap":
        """self o other."""
        if other.codomain_size != self.domain_size:
            raise InvalidInput("sizes do not match under composition")
        return SetMap(
            other.domain_size,
            self.codomain_size,
            tuple(self.images[j - 1] for j in other.images),
        )

    def disjoint_union(self, other: "SetMap") -> "SetMap":
        """Block sum; self occupies the low indices on both sides."""
        shifted = tuple(j + self.codomain_size for j in other.images)
        return SetMap(
            self.domain_size + other.domain_size,
            self.codomain_size + other.codomain_size,
            self.images + shifted,
        )

    def is_bijection(self) -> bool:
        return (
            self.domain_size == self.codomain_size
            and len(set(self.images)) == self.domain_size
        )

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.codomain_size

    def sign(self) -> int:
        """Signature, for bijections."""
        if not self.is_bijection():
            raise InvalidInput("sign of a non-bijection")
        inv = 0
        im = self.images
        for a, b in itertools.combinations(range(self.domain_size), 2):
            if im[a] > im[b]:
                inv += 1
        return -1 if inv % 2 else 1

    @staticmethod
    def identity(n: int) -> "SetMap":
        return SetMap(n, n, tuple(range(1, n + 1)))

    def __repr__(self) -> str:
        return f"[{self.domain_size}->{self.codomain_size}:{','.join(map(str, self.images))}]"


def transposition(n: int, a: int, b: int) -> SetMap:
    images = list(range(1, n + 1))
    images[a - 1], images[b - 1] = b, a
    return SetMap(n, n, tuple(images))


def forward_cycle(n: int, k: int) -> SetMap:
    """The cycle on {1..k} inside [n] sending 1 -> k and j -> j-1 otherwise."""
    if not 1 <= k <= n:
        raise InvalidInput("cycle length out of range")
    images = [k] + list(range(1, k)) + list(range(k + 1, n + 1))
    return SetMap(n, n, tuple(images))


def block_rotation(p: int, q: int) -> SetMap:
    """The permutation of [p+q] whose pullback swaps a length-p and a length-q block."""
    images = tuple(range(p + 1, p + q + 1)) + tuple(range(1, p + 1))
    return SetMap(p + q, p + q, images)


class DMorphism:
    """Formal rational combination of set maps with one shared (dom, cod)."""

    __slots__ = ("domain_size", "codomain_size", "terms")

    def __init__(
        self,
        domain_size: int,
        codomain_size: int,
        terms: dict[SetMap, Fraction] | None = None,
    ) -> None:
        self.domain_size = domain_size
        self.codomain_size = codomain_size
        self.terms: dict[SetMap, Fraction] = {}
        for f, c in (terms or {}).items():
            if f.domain_size != domain_size or f.codomain_size != codomain_size:
                raise InvalidInput("term does not match the declared sizes")
            if c:
                self.terms[f] = Fraction(c)

    # -- vector space structure -------------------------------------------

    def __add__(self, other: "DMorphism") -> "DMorphism":
        if (self.domain_size, self.codomain_size) != (
            other.domain_size,
            other.codomain_size,
        ):
            raise InvalidInput("mismatched hom-sets")
        terms = dict(self.terms)
        for f, c in other.terms.items():
            w = terms.get(f, Fraction(0)) + c
            if w:
                terms[f] = w
            else:
                terms.pop(f, None)
        return DMorphism(self.domain_size, self.codomain_size, terms)

    def __sub__(self, other: "DMorphism") -> "DMorphism":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction | int) -> "DMorphism":
        c = Fraction(c)
        return DMorphism(
            self.domain_size,
            self.codomain_size,
            {f: c * v for f, v in self.terms.items()},
        )

    def __neg__(self) -> "DMorphism":
        return self.scale(-1)

    # -- category structure -------------------------------------------------

    def compose(self, other: "DMorphism") -> "DMorphism":
        """self o other, extended bilinearly."""
        if other.codomain_size != self.domain_size:
            raise InvalidInput("sizes do not match under composition")
        terms: dict[SetMap, Fraction] = {}
        for f, a in self.terms.items():
            for g, b in other.terms.items():
                h = f.compose(g)
                w = terms.get(h, Fraction(0)) + a * b
                if w:
                    terms[h] = w
                else:
                    terms.pop(h, None)
        return DMorphism(other.domain_size, self.codomain_size, terms)

    def disjoint_union(self, other: "DMorphism") -> "DMorphism":
        terms: dict[SetMap, Fraction] = {}
        for f, a in self.terms.items():
            for g, b in other.terms.items():
                h = f.disjoint_union(g)
                w = terms.get(h, Fraction(0)) + a * b
                if w:
                    terms[h] = w
        return DMorphism(
            self.domain_size + other.domain_size,
            self.codomain_size + other.codomain_size,
            terms,
        )

    # -- comparisons ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DMorphism):
            return NotImplemented
        return (
            self.domain_size == other.domain_size
            and self.codomain_size == other.codomain_size
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash(
            (self.domain_size, self.codomain_size, frozenset(self.terms.items()))
        )

    def __repr__(self) -> str:
        if not self.terms:
            return f"0:[{self.domain_size}->{self.codomain_size}]"
        bits = [f"({c})*{f!r}" for f, c in sorted(self.terms.items(), key=lambda t: t[0].images)]
        return " + ".join(bits)

    @staticmethod
    def identity(n: int) -> "DMorphism":
        return DMorphism(n, n, {SetMap.identity(n): ONE})

    @staticmethod
    def of(f: SetMap, coeff: Fraction | int = 1) -> "DMorphism":
        return DMorphism(f.domain_size, f.codomain_size, {f: Fraction(coeff)})


class GroupRingElement:
    """Element of Q[Sigma_n], embedded in the endomorphisms of [n].

    Multiplication is composition "apply right factor first", matching
    DMorphism.compose under as_dmorphism.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[SetMap, Fraction] | None = None) -> None:
        self.n = n
        self.terms: dict[SetMap, Fraction] = {}
        for g, c in (terms or {}).items():
            if not g.is_bijection() or g.domain_size != n:
                raise InvalidInput("group ring term is not a permutation of [n]")
            if c:
                self.terms[g] = Fraction(c)

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        if self.n != other.n:
            raise InvalidInput("mismatched symmetric groups")
        terms = dict(self.terms)
        for g, c in other.terms.items():
            w = terms.get(g, Fraction(0)) + c
            if w:
                terms[g] = w
            else:
                terms.pop(g, None)
        return GroupRingElement(self.n, terms)

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction | int) -> "GroupRingElement":
        c = Fraction(c)
        return GroupRingElement(self.n, {g: c * v for g, v in self.terms.items()})

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        if self.n != other.n:
            raise InvalidInput("mismatched symmetric groups")
        terms: dict[SetMap, Fraction] = {}
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                k = g.compose(h)
                w = terms.get(k, Fraction(0)) + a * b
                if w:
                    terms[k] = w
                else:
                    terms.pop(k, None)
        return GroupRingElement(self.n, terms)

    def sign_twist(self) -> "GroupRingElement":
        """Image under the algebra automorphism g -> sign(g) g."""
        return GroupRingElement(
            self.n, {g: Fraction(g.sign()) * c for g, c in self.terms.items()}
        )

    def as_dmorphism(self) -> DMorphism:
        return DMorphism(self.n, self.n, dict(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"GroupRing({self.n}; {len(self.terms)} terms)"

    @staticmethod
    def one(n: int) -> "GroupRingElement":
        return GroupRingElement(n, {SetMap.identity(n): ONE})

    @staticmethod
    def of(g: SetMap, coeff: Fraction | int = 1) -> "GroupRingElement":
        return GroupRingElement(g.domain_size, {g: Fraction(coeff)})


def ring_multiply(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    return a * b


# ---------------------------------------------------------------------------
# the named morphisms

def delta(i: int, n: int) -> SetMap:
    """Coordinate duplication [n+1] -> [n]: j -> j for j <= i, j -> j-1 above.

    Values clamp at n, which only matters for the declared-but-degenerate
    edge index i = n + 1 (it coincides with i = n); the alternating sum
    below uses i <= n, where the map duplicates the value i.
    """
    if n < 1 or not 1 <= i <= n + 1:
        raise InvalidInput("delta index out of range")
    return SetMap(
        n + 1, n, tuple(min(j, n) if j <= i else j - 1 for j in range(1, n + 2))
    )


def cobar_differential(n: int) -> DMorphism:
    """The alternating sum of the duplications, an element of Hom([n+1], [n])."""
    if n < 1:
        raise InvalidInput("n must be at least 1")
    out = DMorphism(n + 1, n)
    for i in range(1, n + 1):
        out = out + DMorphism.of(delta(i, n), Fraction((-1) ** (i - 1)))
    return out


@lru_cache(maxsize=None)
def s_element(n: int, flip_sign: bool = False) -> GroupRingElement:
    """Product (1 - c_2)(1 - c_3)...(1 - c_n) of cycle factors; s_1 = 1.

    flip_sign is a mutation hook used only for fault-injection testing.
    """
    if n < 1:
        raise InvalidInput("n must be at least 1")
    factors = []
    for k in range(2, n + 1):
        coeff = Fraction(1) if flip_sign else Fraction(-1)
        factors.append(
            GroupRingElement.one(n) + GroupRingElement.of(forward_cycle(n, k), coeff)
        )
    if not factors:
        return GroupRingElement.one(n)
    return reduce(lambda a, b: a * b, factors)


@lru_cache(maxsize=None)
def w_element(n: int, flip_sign: bool = False) -> GroupRingElement:
    """The sign twist of s_n: the product of (1 + (-1)^k c_k); w_1 = 1."""
    if n < 1:
        raise InvalidInput("n must be at least 1")
    factors = []
    for k in range(2, n + 1):
        coeff = Fraction((-1) ** (k - 1 if flip_sign else k))
        factors.append(
            GroupRingElement.one(n) + GroupRingElement.of(forward_cycle(n, k), coeff)
        )
    if not factors:
        return GroupRingElement.one(n)
    return reduce(lambda a, b: a * b, factors)


def bracket_element(p: int, q: int) -> GroupRingElement:
    """1 - (-1)^{pq} r, with r the rotation whose pullback sends a(x)b to b(x)a."""
    if p < 1 or q < 1:
        raise InvalidInput("block sizes must be positive")
    rot = GroupRingElement.of(block_rotation(p, q), Fraction((-1) ** (p * q + 1)))
    return GroupRingElement.one(p + q) + rot


@lru_cache(maxsize=None)
def phi(n: int) -> DMorphism:
    """The morphism closing the projector columns under the differential.

    Returns phi_n in Hom([n+1], [n]) with  w_n o f_n = phi_n o w_{n+1},
    constructed as (1/(n+1)) * (w_n o f_n) and verified by exact expansion
    before being returned.
    """
    w_n = w_element(n).as_dmorphism()
    f_n = cobar_differential(n)
    out = w_n.compose(f_n).scale(Fraction(1, n + 1))
    lhs = w_n.compose(f_n)
    rhs = out.compose(w_element(n + 1).as_dmorphism())
    if lhs != rhs:
        raise ConventionFault(f"phi({n}) fails its defining diagram")
    return out


@lru_cache(maxsize=None)
def psi(p: int, q: int) -> GroupRingElement:
    """The group-ring element closing projector columns under the bracket.

    Returns psi_{p,q} in Q[Sigma_{p+q}] with
    (w_p ]I[ w_q) o B_{p,q} = psi_{p,q} o w_{p+q}, constructed as
    (1/(p+q)) * (w_p ]I[ w_q) * B_{p,q} and verified by exact expansion.
    """
    side = GroupRingElement(
        p + q,
        w_element(p)
        .as_dmorphism()
        .disjoint_union(w_element(q).as_dmorphism())
        .terms,
    )
    out = (side * bracket_element(p, q)).scale(Fraction(1, p + q))
    lhs = side * bracket_element(p, q)
    rhs = out * w_element(p + q)
    if lhs != rhs:
        raise ConventionFault(f"psi({p},{q}) fails its defining diagram")
    return out


# ---------------------------------------------------------------------------
# tensor realization

@dataclass(frozen=True, slots=True)
class Generators:
    """Ordered graded symbols realizing [n] -> tensor powers of their span."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise InvalidInput("generator names must be distinct")
        if len(self.degrees) != len(self.names):
            raise InvalidInput("one degree per name")
        if any(d < 0 for d in self.degrees):
            raise InvalidInput("degrees must be nonnegative")

    @staticmethod
    def of(names: Iterable[str], degree: int = 1) -> "Generators":
        names = tuple(names)
        return Generators(names, tuple(degree for _ in names))

    def words(self, length: int) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(len(self.names)), repeat=length)


Tensor = dict[tuple[int, ...], Fraction]


def _pullback_sign(images: tuple[int, ...], word_degrees: tuple[int, ...]) -> int:
    """Sign of the wiring diagram of a pullback: one Koszul factor per crossing."""
    exp = 0
    for a, b in itertools.combinations(range(len(images)), 2):
        if images[a] > images[b]:
            exp += word_degrees[images[a] - 1] * word_degrees[images[b] - 1]
    return -1 if exp % 2 else 1


class Realization:
    """The contravariant tensor realization of a morphism on graded symbols.

    A set map f: [a] -> [b] sends a length-b word to its pullback of
    coordinates, with the Koszul sign collected from the crossings of the
    wiring diagram; the realization of a combination is the combination of
    realizations.  Restricted to permutations this is the signed action on
    graded words; on monotone maps it is sign-free.
    """

    def __init__(self, morphism: DMorphism, generators: Generators) -> None:
        self.morphism = morphism
        self.generators = generators

    def __call__(self, element: Tensor) -> Tensor:
        out: Tensor = {}
        degs = self.generators.degrees
        for word, coeff in element.items():
            if len(word) != self.morphism.codomain_size:
                raise InvalidInput("word length must match the codomain size")
            word_degrees = tuple(degs[g] for g in word)
            for f, c in self.morphism.terms.items():
                sign = _pullback_sign(f.images, word_degrees)
                new = tuple(word[j - 1] for j in f.images)
                w = out.get(new, Fraction(0)) + coeff * c * sign
                if w:
                    out[new] = w
                else:
                    out.pop(new, None)
        return out

    def matrix_on_words(self) -> dict[tuple[int, ...], Tensor]:
        """Column dictionary of the realization on the full word basis."""
        cols = {}
        for word in self.generators.words(self.morphism.codomain_size):
            cols[word] = self({word: ONE})
        return cols


def realize(morphism: DMorphism, generators: Generators) -> Realization:
    return Realization(morphism, generators)
