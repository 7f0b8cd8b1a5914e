"""Finite pointed reduced simplicial sets and their chain-level machinery.

A simplex is a pair (eta, cell): a nondegenerate cell together with the
monotone surjection eta that degenerates it, stored as the tuple of vertex
images.  Faces precompose eta with a coface and fall back to the stored
boundary of the cell when surjectivity fails; degeneracies precompose with a
codegeneracy.  Powers of a space are handled by one tuple-space type whose
cells are jointly nondegenerate tuples, so the coordinate-permutation action
and the coordinate-duplication maps are basis-level operations.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Hashable, Iterable, Sequence

from .errors import BudgetExceeded, ConventionFault, InvalidInput
from .fincat import DMorphism, SetMap
from .homalg import ChainComplex, Matrix, Vector

ONE = Fraction(1)


# ---------------------------------------------------------------------------
# monotone surjections as vertex-image tuples

def identity_eta(k: int) -> tuple[int, ...]:
    return tuple(range(k + 1))


def constant_eta(q: int) -> tuple[int, ...]:
    return (0,) * (q + 1)


def is_surjective_eta(eta: tuple[int, ...], k: int) -> bool:
    return len(set(eta)) == k + 1


def compose_eta(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    """outer o inner on vertex tuples."""
    return tuple(outer[v] for v in inner)


@lru_cache(maxsize=None)
def monotone_surjections(q: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All nondecreasing surjections [q] -> [k], as vertex-image tuples."""
    if k > q or k < 0:
        return ()
    out = []
    for jumps in itertools.combinations(range(1, q + 1), k):
        eta = [0] * (q + 1)
        for t in range(1, q + 1):
            eta[t] = eta[t - 1] + (1 if t in jumps else 0)
        out.append(tuple(eta))
    return tuple(out)


@dataclass(frozen=True, slots=True)
class Simplex:
    """A simplex of a space: a degeneracy word over a nondegenerate cell."""

    eta: tuple[int, ...]
    cell: Hashable

    @property
    def dim(self) -> int:
        return len(self.eta) - 1

    def is_degenerate(self) -> bool:
        return len(set(self.eta)) != len(self.eta)


def strip_common(etas: Sequence[tuple[int, ...]]) -> tuple[tuple[int, ...], list[tuple[int, ...]]]:
    """Factor out the maximal degeneracy shared by all coordinates.

    Returns (eta_common, reduced) with etas[j] == reduced[j] o eta_common
    and the reduced tuple having no common flat position.
    """
    q = len(etas[0]) - 1
    flats = set(range(q))
    for eta in etas:
        flats &= {i for i in range(q) if eta[i] == eta[i + 1]}
        if not flats:
            return identity_eta(q), list(etas)
    keeps = [t for t in range(q + 1) if t == 0 or (t - 1) not in flats]
    keepset = set(keeps)
    common = []
    r = -1
    for t in range(q + 1):
        if t in keepset:
            r += 1
        common.append(r)
    reduced = [tuple(eta[k] for k in keeps) for eta in etas]
    return tuple(common), reduced


# ---------------------------------------------------------------------------
# spaces

class Space:
    """Interface: finitely many nondegenerate cells, one vertex, no 1-cells."""

    basepoint: Hashable

    def cell_dim(self, cell: Hashable) -> int:
        raise NotImplementedError

    def cells(self, dim: int) -> list[Hashable]:
        raise NotImplementedError

    def cell_faces(self, cell: Hashable) -> list[Simplex]:
        raise NotImplementedError

    def is_basepoint_cell(self, cell: Hashable) -> bool:
        raise NotImplementedError

    def name(self) -> str:
        raise NotImplementedError

    # -- generic simplex calculus ------------------------------------------

    def simplices(self, q: int) -> list[Simplex]:
        """All q-simplices, degenerate ones included."""
        out = []
        for k in range(q + 1):
            for cell in self.cells(k):
                for eta in monotone_surjections(q, k):
                    out.append(Simplex(eta, cell))
        return out

    def nondegenerate(self, q: int) -> list[Simplex]:
        return [Simplex(identity_eta(q), cell) for cell in self.cells(q)]

    def face(self, s: Simplex, i: int) -> Simplex:
        eta = s.eta[:i] + s.eta[i + 1 :]
        k = self.cell_dim(s.cell)
        if is_surjective_eta(eta, k):
            return Simplex(eta, s.cell)
        v = s.eta[i]
        reduced = tuple(x if x < v else x - 1 for x in eta)
        fv = self.cell_faces(s.cell)[v]
        return Simplex(compose_eta(fv.eta, reduced), fv.cell)

    def degeneracy(self, s: Simplex, i: int) -> Simplex:
        eta = s.eta[: i + 1] + s.eta[i:]
        return Simplex(eta, s.cell)

    def basepoint_simplex(self, q: int) -> Simplex:
        return Simplex(constant_eta(q), self.basepoint)

    def is_basepoint_simplex(self, s: Simplex) -> bool:
        return self.is_basepoint_cell(s.cell)

    def max_cell_dim(self) -> int:
        raise NotImplementedError

    def min_cell_dim(self) -> int:
        """Smallest dimension of a non-basepoint cell (>= 2 when reduced)."""
        for d in range(1, self.max_cell_dim() + 1):
            if any(not self.is_basepoint_cell(c) for c in self.cells(d)):
                return d
        return self.max_cell_dim()

    def connectivity(self) -> int:
        return self.min_cell_dim() - 1

    def validate(self, max_dim: int | None = None) -> None:
        """Reducedness plus the simplicial identities on iterated faces."""
        if len(self.cells(0)) != 1:
            raise InvalidInput("space must have exactly one vertex")
        if self.cells(1):
            raise InvalidInput("space must be reduced: no nondegenerate 1-cells")
        top = max_dim if max_dim is not None else self.max_cell_dim()
        for k in range(2, top + 1):
            for cell in self.cells(k):
                s = Simplex(identity_eta(k), cell)
                faces = self.cell_faces(cell)
                if len(faces) != k + 1:
                    raise InvalidInput(f"cell {cell!r} must carry {k + 1} faces")
                if any(f.dim != k - 1 for f in faces):
                    raise InvalidInput(f"faces of {cell!r} have the wrong dimension")
                for i in range(k):
                    for j in range(i + 1, k + 1):
                        left = self.face(self.face(s, j), i)
                        right = self.face(self.face(s, i), j - 1)
                        if left != right:
                            raise ConventionFault(
                                f"simplicial identity fails on {cell!r}: d_{i} d_{j}"
                            )


class CellSpace(Space):
    """Space given by explicit nondegenerate cells and their faces."""

    def __init__(
        self,
        name: str,
        cell_dims: dict[Hashable, int],
        faces: dict[Hashable, list[Simplex]],
        basepoint: Hashable = "*",
    ) -> None:
        self._name = name
        self._dims = dict(cell_dims)
        self._faces = {c: list(fs) for c, fs in faces.items()}
        self.basepoint = basepoint
        self._by_dim: dict[int, list[Hashable]] = {}
        for c, d in sorted(self._dims.items(), key=lambda t: (t[1], str(t[0]))):
            self._by_dim.setdefault(d, []).append(c)
        self.validate()

    def name(self) -> str:
        return self._name

    def cell_dim(self, cell: Hashable) -> int:
        return self._dims[cell]

    def cells(self, dim: int) -> list[Hashable]:
        return self._by_dim.get(dim, [])

    def cell_faces(self, cell: Hashable) -> list[Simplex]:
        return self._faces[cell]

    def is_basepoint_cell(self, cell: Hashable) -> bool:
        return cell == self.basepoint

    def max_cell_dim(self) -> int:
        return max(self._dims.values())


class TupleSpace(Space):
    """Product of spaces; cells are jointly nondegenerate simplex tuples."""

    def __init__(self, factors: Sequence[Space]) -> None:
        if not factors:
            raise InvalidInput("a product needs at least one factor")
        self.factors = list(factors)
        self.basepoint = tuple(
            Simplex(identity_eta(0), sp.basepoint) for sp in self.factors
        )
        self._cells_cache: dict[int, list[Hashable]] = {}

    def name(self) -> str:
        return " x ".join(sp.name() for sp in self.factors)

    @property
    def arity(self) -> int:
        return len(self.factors)

    def cell_dim(self, cell: Hashable) -> int:
        return cell[0].dim

    def cells(self, dim: int) -> list[Hashable]:
        if dim not in self._cells_cache:
            pools = [sp.simplices(dim) for sp in self.factors]
            found = []
            for combo in itertools.product(*pools):
                etas = [s.eta for s in combo]
                flats = set(range(dim))
                for eta in etas:
                    flats &= {i for i in range(dim) if eta[i] == eta[i + 1]}
                    if not flats:
                        break
                if not flats:
                    found.append(tuple(combo))
            self._cells_cache[dim] = found
        return self._cells_cache[dim]

    def cell_faces(self, cell: Hashable) -> list[Simplex]:
        d = self.cell_dim(cell)
        out = []
        for i in range(d + 1):
            comps = [sp.face(s, i) for sp, s in zip(self.factors, cell)]
            common, reduced = strip_common([c.eta for c in comps])
            core = tuple(
                Simplex(r, c.cell) for r, c in zip(reduced, comps)
            )
            out.append(Simplex(common, core))
        return out

    def is_basepoint_cell(self, cell: Hashable) -> bool:
        return all(
            sp.is_basepoint_cell(s.cell) for sp, s in zip(self.factors, cell)
        )

    def in_fat_wedge(self, cell: Hashable) -> bool:
        """Some coordinate is a (possibly degenerate) basepoint simplex."""
        return any(
            sp.is_basepoint_cell(s.cell) for sp, s in zip(self.factors, cell)
        )

    def max_cell_dim(self) -> int:
        return sum(sp.max_cell_dim() for sp in self.factors)

    def min_cell_dim(self) -> int:
        return min(sp.min_cell_dim() for sp in self.factors)

    def validate(self, max_dim: int | None = None) -> None:
        top = max_dim if max_dim is not None else min(4, self.max_cell_dim())
        super().validate(top)


def power(space: Space, n: int) -> TupleSpace:
    if n < 1:
        raise InvalidInput("power exponent must be positive")
    return TupleSpace([space] * n)


def product(a: Space, b: Space) -> TupleSpace:
    return TupleSpace([a, b])


# ---------------------------------------------------------------------------
# model library

def point() -> CellSpace:
    return CellSpace("pt", {"*": 0}, {"*": []})


def sphere(k: int) -> CellSpace:
    """Minimal model: one vertex and one k-cell, all faces at the basepoint."""
    if k < 2:
        raise InvalidInput("sphere dimension must be at least 2 to stay reduced")
    faces = {
        "*": [],
        "e": [Simplex(constant_eta(k - 1), "*")] * (k + 1),
    }
    return CellSpace(f"S{k}", {"*": 0, "e": k}, faces)


def wedge(a: CellSpace, b: CellSpace) -> CellSpace:
    """Glue two cell spaces at their basepoints."""
    dims: dict[Hashable, int] = {"*": 0}
    faces: dict[Hashable, list[Simplex]] = {"*": []}

    def relabel(side: str, sp: CellSpace, cell: Hashable) -> Hashable:
        return "*" if sp.is_basepoint_cell(cell) else f"{side}:{cell}"

    for side, sp in (("l", a), ("r", b)):
        for d in range(1, sp.max_cell_dim() + 1):
            for cell in sp.cells(d):
                cid = relabel(side, sp, cell)
                dims[cid] = d
                faces[cid] = [
                    Simplex(f.eta, relabel(side, sp, f.cell))
                    for f in sp.cell_faces(cell)
                ]
    return CellSpace(f"{a.name()} v {b.name()}", dims, faces)


# ---------------------------------------------------------------------------
# chain complexes

def _basis_key(s: Simplex):
    if isinstance(s.cell, tuple):
        return (s.eta, tuple(_basis_key(c) for c in s.cell))
    return (s.eta, str(s.cell))


def count_relative_basis(space: Space, n: int, q: int) -> int:
    """Exact size of the relative basis of the n-th power in degree q.

    A coordinate is a pair (cell of dim k, k-subset of jump positions); the
    tuple is jointly nondegenerate iff the jump sets cover all q positions,
    so inclusion-exclusion over missed positions counts the basis without
    enumerating it.
    """
    if q == 0:
        return 0  # the only vertex is the basepoint, which the fat wedge kills
    cell_dims = [
        space.cell_dim(c)
        for k in range(q + 1)
        for c in space.cells(k)
        if not space.is_basepoint_cell(c)
    ]

    def per_coordinate(positions: int) -> int:
        return sum(comb(positions, k) for k in cell_dims if k <= positions)

    total = 0
    for m in range(q + 1):
        total += (-1) ** m * comb(q, m) * per_coordinate(q - m) ** n
    return total


def relative_chains(
    space: Space, n: int, q_max: int, budget: int | None = None
) -> ChainComplex:
    """Normalized chains of the n-th power relative to the fat wedge.

    Basis in degree q: jointly nondegenerate coordinate tuples with no
    basepoint coordinate; the boundary is the alternating face sum with
    degenerate and fat-wedge faces struck out.
    """
    pw = power(space, n)
    bases: dict[int, list[Hashable]] = {}
    for q in range(q_max + 1):
        if budget is not None and count_relative_basis(space, n, q) > budget:
            raise BudgetExceeded(
                f"relative basis of {space.name()}^{n} at degree {q} exceeds {budget}"
            )
        cells = [c for c in pw.cells(q) if not pw.in_fat_wedge(c)]
        cells.sort(key=lambda c: _basis_key(Simplex(identity_eta(q), c)))
        bases[q] = cells
    index = {q: {c: i for i, c in enumerate(bases[q])} for q in bases}
    boundary: dict[int, Matrix] = {}
    for q in range(1, q_max + 1):
        cols: list[Vector] = []
        for cell in bases[q]:
            v: Vector = {}
            faces = pw.cell_faces(cell)
            for i, f in enumerate(faces):
                if f.is_degenerate():
                    continue
                j = index[q - 1].get(f.cell)
                if j is None:
                    continue  # fat wedge face
                c = v.get(j, Fraction(0)) + Fraction((-1) ** i)
                if c:
                    v[j] = c
                else:
                    v.pop(j, None)
            cols.append(v)
        boundary[q] = Matrix(len(bases[q - 1]), cols)
    return ChainComplex(bases, boundary)


def normalized_chains(space: Space, q_max: int) -> ChainComplex:
    """Absolute normalized chains (basepoint simplices kept)."""
    bases = {
        q: sorted(space.cells(q), key=lambda c: _basis_key(Simplex(identity_eta(q), c)))
        for q in range(q_max + 1)
    }
    index = {q: {c: i for i, c in enumerate(bases[q])} for q in bases}
    boundary: dict[int, Matrix] = {}
    for q in range(1, q_max + 1):
        cols: list[Vector] = []
        for cell in bases[q]:
            v: Vector = {}
            s = Simplex(identity_eta(q), cell)
            for i in range(q + 1):
                f = space.face(s, i)
                if f.is_degenerate():
                    continue
                j = index[q - 1][f.cell]
                c = v.get(j, Fraction(0)) + Fraction((-1) ** i)
                if c:
                    v[j] = c
                else:
                    v.pop(j, None)
            cols.append(v)
        boundary[q] = Matrix(len(bases[q - 1]), cols)
    return ChainComplex(bases, boundary)


def full_chains(space: Space, q_max: int) -> tuple[ChainComplex, dict[int, dict[int, set[int]]]]:
    """Unnormalized simplicial chains plus the skeletal filtration by core dim."""
    bases = {q: space.simplices(q) for q in range(q_max + 1)}
    for q in bases:
        bases[q].sort(key=_basis_key)
    index = {q: {s: i for i, s in enumerate(bases[q])} for q in bases}
    boundary: dict[int, Matrix] = {}
    for q in range(1, q_max + 1):
        cols: list[Vector] = []
        for s in bases[q]:
            v: Vector = {}
            for i in range(q + 1):
                f = space.face(s, i)
                j = index[q - 1][f]
                c = v.get(j, Fraction(0)) + Fraction((-1) ** i)
                if c:
                    v[j] = c
                else:
                    v.pop(j, None)
            cols.append(v)
        boundary[q] = Matrix(len(bases[q - 1]), cols)
    cx = ChainComplex({q: list(b) for q, b in bases.items()}, boundary)
    top = space.max_cell_dim()
    filtration: dict[int, dict[int, set[int]]] = {}
    for p in range(top + 1):
        filtration[p] = {
            q: {
                i
                for i, s in enumerate(bases[q])
                if space.cell_dim(s.cell) <= p
            }
            for q in range(q_max + 1)
        }
    return cx, filtration


# ---------------------------------------------------------------------------
# induced maps

def _normalize_tuple(pw: TupleSpace, comps: Sequence[Simplex]) -> Simplex:
    common, reduced = strip_common([c.eta for c in comps])
    core = tuple(Simplex(r, c.cell) for r, c in zip(reduced, comps))
    return Simplex(common, core)


def induced_map(
    f: SetMap,
    space: Space,
    source: ChainComplex,
    target: ChainComplex,
    q_range: Iterable[int],
) -> dict[int, Matrix]:
    """Chains of the pullback-of-coordinates map X^n -> X^m for f: [m] -> [n].

    Only surjective maps are accepted: they are the ones guaranteed to carry
    the fat wedge into the fat wedge.
    """
    if not f.is_surjective():
        raise InvalidInput("induced maps are only defined for surjective set maps")
    m = f.domain_size
    pw_m = power(space, m)
    out: dict[int, Matrix] = {}
    for q in q_range:
        cols: list[Vector] = []
        tgt_index = target.index.get(q, {})
        for cell in source.bases.get(q, []):
            comps = [
                Simplex(cell[j - 1].eta, cell[j - 1].cell) for j in f.images
            ]
            s = _normalize_tuple(pw_m, comps)
            v: Vector = {}
            if not s.is_degenerate():
                j = tgt_index.get(s.cell)
                if j is not None:
                    v[j] = ONE
            cols.append(v)
        out[q] = Matrix(len(target.bases.get(q, [])), cols)
    return out


def induced_dmorphism_map(
    morphism: DMorphism,
    space: Space,
    source: ChainComplex,
    target: ChainComplex,
    q_range: Iterable[int],
) -> dict[int, Matrix]:
    """Linear combination of induced maps, one per term of the morphism."""
    q_range = list(q_range)
    out = {
        q: Matrix.zero(len(target.bases.get(q, [])), len(source.bases.get(q, [])))
        for q in q_range
    }
    for f, c in morphism.terms.items():
        part = induced_map(f, space, source, target, q_range)
        out = {q: out[q].add(part[q], c) for q in q_range}
    return out


# ---------------------------------------------------------------------------
# the Eilenberg-Zilber shuffle map

def shuffles(a: int, b: int):
    """Yield (jumps_left, jumps_right, sign) over all (a, b)-shuffles."""
    steps = range(a + b)
    for left in itertools.combinations(steps, a):
        leftset = set(left)
        right = tuple(s for s in steps if s not in leftset)
        inv = sum(1 for s in right for t in left if t > s)
        yield left, right, -1 if inv % 2 else 1


def _eta_from_jumps(total: int, jumps: Sequence[int]) -> tuple[int, ...]:
    jumpset = set(jumps)
    eta = [0] * (total + 1)
    for t in range(1, total + 1):
        eta[t] = eta[t - 1] + (1 if (t - 1) in jumpset else 0)
    return tuple(eta)


def ez_on_cells(x: Sequence[Simplex], y: Sequence[Simplex]) -> list[tuple[int, tuple[Simplex, ...]]]:
    """Shuffle expansion of a pair of coordinate tuples into the joint power.

    x and y are jointly nondegenerate coordinate tuples of degrees a and b;
    the output terms are jointly nondegenerate (a+b)-tuples with signs.
    """
    a = x[0].dim if x else 0
    b = y[0].dim if y else 0
    out = []
    for left, right, sign in shuffles(a, b):
        u = _eta_from_jumps(a + b, left)
        v = _eta_from_jumps(a + b, right)
        comps = tuple(
            [Simplex(compose_eta(s.eta, u), s.cell) for s in x]
            + [Simplex(compose_eta(s.eta, v), s.cell) for s in y]
        )
        out.append((sign, comps))
    return out


def ez_shuffle(
    space: Space,
    p: int,
    q: int,
    source_p: ChainComplex,
    source_q: ChainComplex,
    target: ChainComplex,
    deg_pairs: Iterable[tuple[int, int]],
) -> dict[tuple[int, int], dict[tuple[Hashable, Hashable], Vector]]:
    """The shuffle chain map C(X^p) (x) C(X^q) -> C(X^{p+q}) on basis pairs.

    Returns, per (a, b) degree pair, the image vector of each basis pair in
    the degree-(a+b) basis of the target complex.  Degenerate terms are
    dropped (they vanish in normalized chains); fat-wedge coordinates cannot
    appear when the inputs are relative basis elements.
    """
    out: dict[tuple[int, int], dict[tuple[Hashable, Hashable], Vector]] = {}
    for a, b in deg_pairs:
        table: dict[tuple[Hashable, Hashable], Vector] = {}
        tgt_index = target.index.get(a + b, {})
        for xa in source_p.bases.get(a, []):
            for yb in source_q.bases.get(b, []):
                v: Vector = {}
                for sign, comps in ez_on_cells(xa, yb):
                    s = Simplex(identity_eta(a + b), comps)
                    # shuffled tuples are jointly nondegenerate by construction
                    j = tgt_index.get(comps)
                    if j is None:
                        continue
                    c = v.get(j, Fraction(0)) + Fraction(sign)
                    if c:
                        v[j] = c
                    else:
                        v.pop(j, None)
                table[(xa, yb)] = v
        out[(a, b)] = table
    return out


def ez_multi(parts: Sequence[tuple[Simplex, ...]]) -> list[tuple[int, tuple[Simplex, ...]]]:
    """Iterated shuffle of several coordinate tuples (left-associated)."""
    acc: list[tuple[int, tuple[Simplex, ...]]] = [(1, tuple(parts[0]))]
    for nxt in parts[1:]:
        new = []
        for sign, comps in acc:
            for s2, merged in ez_on_cells(comps, nxt):
                new.append((sign * s2, merged))
        acc = new
    return acc


# ---------------------------------------------------------------------------
# expressions and JSON

_SPHERE_RE = re.compile(r"^S(\d+)$")


def space_from_expression(expr: str) -> Space:
    """Parse expressions like "S2", "S2 v S2", "S2 x S3" (x binds tighter)."""
    tokens = expr.replace("(", " ( ").replace(")", " ) ").split()
    if not tokens:
        raise InvalidInput("empty space expression")
    pos = 0

    def atom() -> Space:
        nonlocal pos
        if pos >= len(tokens):
            raise InvalidInput(f"unexpected end of expression {expr!r}")
        tok = tokens[pos]
        if tok == "(":
            pos += 1
            sp = wedge_expr()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise InvalidInput(f"missing closing parenthesis in {expr!r}")
            pos += 1
            return sp
        m = _SPHERE_RE.match(tok)
        if m:
            pos += 1
            return sphere(int(m.group(1)))
        if tok == "pt":
            pos += 1
            return point()
        raise InvalidInput(f"unknown space token {tok!r}")

    def product_expr() -> Space:
        nonlocal pos
        sp = atom()
        factors = [sp]
        while pos < len(tokens) and tokens[pos] == "x":
            pos += 1
            factors.append(atom())
        return factors[0] if len(factors) == 1 else TupleSpace(factors)

    def wedge_expr() -> Space:
        nonlocal pos
        sp = product_expr()
        while pos < len(tokens) and tokens[pos] == "v":
            pos += 1
            rhs = product_expr()
            if not isinstance(sp, CellSpace) or not isinstance(rhs, CellSpace):
                raise InvalidInput("wedge is only supported between cell models")
            sp = wedge(sp, rhs)
        return sp

    out = wedge_expr()
    if pos != len(tokens):
        raise InvalidInput(f"trailing tokens in space expression {expr!r}")
    return out


def space_from_json(data: dict) -> CellSpace:
    """Load {"vertices": 1, "cells": [{"id", "dim", "faces": [...]}, ...]}.

    A face entry {"degeneracies": [i1, ..., ik], "cell": c} stands for
    s_{i1} s_{i2} ... s_{ik} applied to the nondegenerate cell c.
    """
    if data.get("vertices") != 1:
        raise InvalidInput("space JSON must declare exactly one vertex")
    dims: dict[Hashable, int] = {"*": 0}
    face_specs: dict[Hashable, list[dict]] = {}
    for entry in data.get("cells", []):
        cid, dim = entry["id"], int(entry["dim"])
        if cid == "*" or dim < 2:
            raise InvalidInput("cells must have dimension at least 2 and id != '*'")
        dims[cid] = dim
        face_specs[cid] = entry["faces"]
    faces: dict[Hashable, list[Simplex]] = {"*": []}
    for cid, specs in face_specs.items():
        k = dims[cid]
        built = []
        for spec in specs:
            target = spec["cell"]
            if target not in dims:
                raise InvalidInput(f"face of {cid!r} points to unknown cell {target!r}")
            core = dims[target]
            eta = identity_eta(core)
            for idx in reversed([int(i) for i in spec.get("degeneracies", [])]):
                eta = eta[: idx + 1] + eta[idx:]
            if len(eta) != k:
                raise InvalidInput(f"face of {cid!r} has the wrong total dimension")
            built.append(Simplex(eta, target))
        faces[cid] = built
    return CellSpace(data.get("name", "json-space"), dims, faces)


def space_to_json(space: CellSpace) -> dict:
    cells = []
    for d in range(2, space.max_cell_dim() + 1):
        for cid in space.cells(d):
            entries = []
            for f in space.cell_faces(cid):
                degens: list[int] = []
                eta = list(f.eta)
                # peel degeneracies outermost-first
                while len(eta) > len(set(eta)):
                    i = next(t for t in range(len(eta) - 1) if eta[t] == eta[t + 1])
                    degens.append(i)
                    eta = eta[:i] + eta[i + 1 :]
                entries.append({"degeneracies": degens, "cell": f.cell})
            cells.append({"id": cid, "dim": d, "faces": entries})
    return {"name": space.name(), "vertices": 1, "cells": cells}


def load_space(text: str) -> Space:
    """Space from an expression string or a JSON document."""
    text = text.strip()
    if text.startswith("{"):
        return space_from_json(json.loads(text))
    return space_from_expression(text)
