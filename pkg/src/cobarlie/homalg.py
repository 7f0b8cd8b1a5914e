"""Exact sparse linear algebra over Q and the chain-complex machinery built on it.

Everything is exact: vectors are dicts mapping index -> Fraction, elimination
is fraction-free (integer rows normalized by gcd), and all homology output is
a rank plus explicit representative cycles.  No floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Hashable, Iterable, Sequence

from .errors import ConventionFault

Vector = dict[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# vectors

def vec_add(a: Vector, b: Vector, coeff: Fraction = ONE) -> Vector:
    out = dict(a)
    for i, v in b.items():
        w = out.get(i, ZERO) + coeff * v
        if w:
            out[i] = w
        else:
            out.pop(i, None)
    return out


def vec_scale(a: Vector, c: Fraction) -> Vector:
    if not c:
        return {}
    return {i: c * v for i, v in a.items()}


def vec_is_zero(a: Vector) -> bool:
    return not any(a.values())


def _int_row(v: Vector) -> dict[int, int]:
    """Clear denominators and divide by the content, keeping exactness."""
    entries = {i: x for i, x in v.items() if x}
    if not entries:
        return {}
    den = 1
    for x in entries.values():
        den = den * x.denominator // gcd(den, x.denominator)
    row = {i: int(x * den) for i, x in entries.items()}
    g = 0
    for x in row.values():
        g = gcd(g, x)
    if g > 1:
        row = {i: x // g for i, x in row.items()}
    return row


class Echelon:
    """Incremental sparse echelon form over Q with optional augmentation.

    Rows are stored with integer entries; each stored row is pivoted on its
    smallest nonnegative column, so forward reduction of a new row strictly
    advances and membership tests are complete.  Updates cross-multiply and
    divide by the row content, so no rounding ever occurs.  Negative indices
    are augmentation columns: they are carried along but never pivoted on,
    which turns the same engine into a solver and a kernel extractor.
    """

    def __init__(self) -> None:
        self.rows: dict[int, dict[int, int]] = {}  # pivot column -> row

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce_int(self, row: dict[int, int]) -> dict[int, int]:
        while True:
            mains = [c for c in row if c >= 0]
            if not mains:
                return row
            c = min(mains)
            piv = self.rows.get(c)
            if piv is None:
                g = 0
                for x in row.values():
                    g = gcd(g, x)
                if g > 1:
                    row = {i: x // g for i, x in row.items()}
                return row
            a, b = piv[c], row[c]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new: dict[int, int] = {}
            for k in set(row) | set(piv):
                x = ma * row.get(k, 0) - mb * piv.get(k, 0)
                if x:
                    new[k] = x
            row = new

    def residual(self, v: Vector) -> dict[int, int]:
        return self._reduce_int(_int_row(v))

    def add(self, v: Vector) -> dict[int, int] | None:
        """Insert v; return the stored residual row, or None if dependent."""
        row = self.residual(v)
        mains = [c for c in row if c >= 0]
        if not mains:
            return None
        self.rows[min(mains)] = row
        return row

    def contains(self, v: Vector) -> bool:
        return all(c < 0 for c in self.residual(v))

    def reduce_tracked(self, v: Vector) -> Vector:
        """Reduce v with exact rational arithmetic, keeping augmentations."""
        row: Vector = {i: x for i, x in v.items() if x}
        while True:
            mains = [c for c in row if c >= 0]
            if not mains:
                return row
            c = min(mains)
            piv = self.rows.get(c)
            if piv is None:
                return row
            factor = row[c] / piv[c]
            for k, x in piv.items():
                w = row.get(k, ZERO) - factor * x
                if w:
                    row[k] = w
                else:
                    row.pop(k, None)
        # unreachable


def rank_of(vectors: Iterable[Vector]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def independent_subset(vectors: Sequence[Vector]) -> list[int]:
    """Indices of a greedy maximal independent subfamily (deterministic)."""
    ech = Echelon()
    out = []
    for k, v in enumerate(vectors):
        if ech.add(v) is not None:
            out.append(k)
    return out


def kernel_basis(columns: Sequence[Vector]) -> list[Vector]:
    """Kernel of the matrix whose j-th column is columns[j].

    Returned vectors live in the domain (indexed by column position).
    """
    ech = Echelon()
    kernel: list[Vector] = []
    for j, col in enumerate(columns):
        aug = dict(col)
        aug[-1 - j] = ONE
        row = ech.add(aug)
        if row is None:
            red = ech.reduce_tracked(aug)
            kernel.append({-1 - c: x for c, x in red.items() if c < 0})
    return kernel


class Solver:
    """Reusable exact solver for one fixed column family."""

    def __init__(self, columns: Sequence[Vector]):
        self.ech = Echelon()
        for j, col in enumerate(columns):
            aug = dict(col)
            aug[-1 - j] = ONE
            self.ech.add(aug)

    def solve(self, target: Vector) -> Vector | None:
        red = self.ech.reduce_tracked(dict(target))
        if any(c >= 0 for c in red):
            return None
        # red = target - sum_j x_j (col_j + e_{-1-j})  with zero main part
        return {-1 - c: -x for c, x in red.items() if x}

    def contains(self, target: Vector) -> bool:
        return all(c < 0 for c in self.ech.residual(target))


def solve(columns: Sequence[Vector], target: Vector) -> Vector | None:
    """Exact x with sum_j x[j] * columns[j] == target, or None."""
    return Solver(columns).solve(target)


# ---------------------------------------------------------------------------
# matrices as column lists

class Matrix:
    """Sparse matrix over Q: columns[j] maps row index -> Fraction."""

    __slots__ = ("nrows", "columns")

    def __init__(self, nrows: int, columns: Sequence[Vector]):
        self.nrows = nrows
        self.columns = tuple(dict(c) for c in columns)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        for j, c in v.items():
            if not c:
                continue
            for i, a in self.columns[j].items():
                w = out.get(i, ZERO) + c * a
                if w:
                    out[i] = w
                else:
                    out.pop(i, None)
        return out

    def compose(self, other: "Matrix") -> "Matrix":
        """self o other (apply other first)."""
        return Matrix(self.nrows, [self.apply(c) for c in other.columns])

    def add(self, other: "Matrix", coeff: Fraction = ONE) -> "Matrix":
        assert self.nrows == other.nrows and self.ncols == other.ncols
        return Matrix(
            self.nrows,
            [vec_add(a, b, coeff) for a, b in zip(self.columns, other.columns)],
        )

    def scale(self, c: Fraction) -> "Matrix":
        return Matrix(self.nrows, [vec_scale(col, c) for col in self.columns])

    def is_zero(self) -> bool:
        return all(vec_is_zero(c) for c in self.columns)

    def rank(self) -> int:
        return rank_of(self.columns)

    def trace(self) -> Fraction:
        return sum((col.get(j, ZERO) for j, col in enumerate(self.columns)), ZERO)

    def transpose(self) -> "Matrix":
        cols: list[Vector] = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, a in col.items():
                cols[i][j] = a
        return Matrix(self.ncols, cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.nrows != other.nrows or self.ncols != other.ncols:
            return False
        return all(
            vec_is_zero(vec_add(a, b, Fraction(-1)))
            for a, b in zip(self.columns, other.columns)
        )

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols})"

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(n, [{i: ONE} for i in range(n)])

    @staticmethod
    def zero(nrows: int, ncols: int) -> "Matrix":
        return Matrix(nrows, [{} for _ in range(ncols)])


# ---------------------------------------------------------------------------
# chain complexes

class ChainComplex:
    """Nonnegatively graded complex with labelled bases and exact boundaries.

    bases[q] is the ordered label list of C_q; boundary[q]: C_q -> C_{q-1}.
    Degrees not listed are zero.  dd == 0 is checked on construction.
    """

    def __init__(
        self,
        bases: dict[int, list[Hashable]],
        boundary: dict[int, Matrix],
        check: bool = True,
    ) -> None:
        self.bases = {q: list(b) for q, b in bases.items() if b}
        self.boundary = {q: m for q, m in boundary.items() if q in self.bases}
        self.index = {
            q: {lab: i for i, lab in enumerate(b)} for q, b in self.bases.items()
        }
        if check:
            self.check_dd()

    def dim(self, q: int) -> int:
        return len(self.bases.get(q, []))

    def degrees(self) -> list[int]:
        return sorted(self.bases)

    def d(self, q: int) -> Matrix:
        if q in self.boundary:
            return self.boundary[q]
        return Matrix.zero(self.dim(q - 1), self.dim(q))

    def check_dd(self) -> None:
        for q in self.degrees():
            if self.dim(q - 2):
                if not self.d(q - 1).compose(self.d(q)).is_zero():
                    raise ConventionFault(f"dd != 0 at degree {q}")

    def chain_ranks(self) -> dict[int, int]:
        return {q: self.dim(q) for q in self.degrees()}


@dataclass
class HomologyData:
    """Rank plus representative cycles for one degree of a complex."""

    q: int
    rank: int
    representatives: list[Vector]
    _image_cols: list[Vector] = field(repr=False, default_factory=list)
    _solver: "Solver | None" = field(repr=False, default=None, compare=False)

    def class_coordinates(self, cycle: Vector) -> Vector | None:
        """Coordinates of [cycle] in the representative basis (None: not in span)."""
        if not hasattr(self, "_solver") or self._solver is None:
            self._solver = Solver(list(self._image_cols) + self.representatives)
        sol = self._solver.solve(cycle)
        if sol is None:
            return None
        k = len(self._image_cols)
        return {j - k: c for j, c in sol.items() if j >= k and c}


def homology(complex_: ChainComplex, q: int) -> HomologyData:
    """Homology at degree q, with representatives completing the image."""
    d_q = complex_.d(q)
    ker = kernel_basis(d_q.columns) if complex_.dim(q) else []
    img = [c for c in complex_.d(q + 1).columns if c]
    ech = Echelon()
    for v in img:
        ech.add(v)
    reps = [v for v in ker if ech.add(v) is not None]
    return HomologyData(q, len(reps), reps, img)


def homology_ranks(complex_: ChainComplex, q_range: Iterable[int]) -> dict[int, int]:
    return {q: homology(complex_, q).rank for q in q_range}


# ---------------------------------------------------------------------------
# idempotent image summands

@dataclass
class Summand:
    """Image of an idempotent chain map, with inclusion and projection."""

    complex: ChainComplex
    inclusion: dict[int, Matrix]   # summand basis -> ambient coordinates
    projection: dict[int, Matrix]  # ambient -> summand coordinates


def image_summand(complex_: ChainComplex, e: dict[int, Matrix]) -> Summand:
    """Split off im(e) for an exact idempotent chain map e.

    Raises ConventionFault unless e is idempotent, commutes with the
    boundary, and inclusion o projection == e holds degreewise.
    """
    for q, m in e.items():
        if not m.compose(m).add(m, Fraction(-1)).is_zero():
            raise ConventionFault(f"not idempotent at degree {q}")
    for q in complex_.degrees():
        if q in e and q - 1 in e and complex_.dim(q - 1):
            left = e[q - 1].compose(complex_.d(q))
            right = complex_.d(q).compose(e[q])
            if not left.add(right, Fraction(-1)).is_zero():
                raise ConventionFault(f"not a chain map at degree {q}")

    bases: dict[int, list[Hashable]] = {}
    incl: dict[int, Matrix] = {}
    proj: dict[int, Matrix] = {}
    for q in complex_.degrees():
        m = e.get(q, Matrix.zero(complex_.dim(q), complex_.dim(q)))
        picked = independent_subset(m.columns)
        cols = [m.columns[j] for j in picked]
        bases[q] = [("im", q, j) for j in picked]
        incl[q] = Matrix(complex_.dim(q), cols)
        solver = Solver(cols)
        pcols = []
        for j in range(complex_.dim(q)):
            sol = solver.solve(m.columns[j])
            if sol is None:
                raise ConventionFault("image column not in span")
            pcols.append(sol)
        proj[q] = Matrix(len(cols), pcols)

    boundary: dict[int, Matrix] = {}
    for q in complex_.degrees():
        if not bases.get(q) or not bases.get(q - 1):
            continue
        amb = complex_.d(q).compose(incl[q])
        boundary[q] = proj[q - 1].compose(amb)
        back = incl[q - 1].compose(boundary[q])
        if not back.add(amb, Fraction(-1)).is_zero():
            raise ConventionFault(f"boundary leaves the summand at degree {q}")

    sub = ChainComplex(bases, boundary)
    for q in complex_.degrees():
        m = e.get(q, Matrix.zero(complex_.dim(q), complex_.dim(q)))
        if complex_.dim(q):
            if not incl[q].compose(proj[q]).add(m, Fraction(-1)).is_zero():
                raise ConventionFault("inclusion o projection != e")
            complement = m.add(Matrix.identity(m.ncols), Fraction(-1))
            if incl[q].rank() + complement.rank() != m.ncols:
                raise ConventionFault("summand ranks do not split the ambient space")
    return Summand(sub, incl, proj)


# ---------------------------------------------------------------------------
# bigraded complexes and totalization

class BigradedComplex:
    """Columns of chain complexes with chain maps between adjacent columns.

    columns[n] is a ChainComplex in the internal degree q; external[n] holds
    the chain maps column n -> column n+1, one matrix per q.  Totalization
    uses t = q - n and twists the external differential by (-1)^q.
    """

    def __init__(
        self,
        columns: dict[int, ChainComplex],
        external: dict[int, dict[int, Matrix]],
    ) -> None:
        self.columns = dict(columns)
        self.external = {n: dict(m) for n, m in external.items()}
        self._check()

    def _check(self) -> None:
        for n, maps in self.external.items():
            src = self.columns[n]
            dst = self.columns.get(n + 1)
            if dst is None:
                continue
            for q, m in maps.items():
                if q - 1 in maps and src.dim(q) and dst.dim(q - 1):
                    left = dst.d(q).compose(m)
                    right = maps[q - 1].compose(src.d(q))
                    if not left.add(right, Fraction(-1)).is_zero():
                        raise ConventionFault(
                            f"external map not a chain map at column {n}, degree {q}"
                        )
            nxt = self.external.get(n + 1, {})
            for q, m in maps.items():
                if q in nxt and self.columns.get(n + 2) is not None and m.ncols:
                    if not nxt[q].compose(m).is_zero():
                        raise ConventionFault(
                            f"external differential does not square to zero at column {n}"
                        )


def total_complex(
    big: BigradedComplex,
) -> tuple[ChainComplex, dict[tuple[int, int], int]]:
    """Totalize with t = q - n; returns the complex and an (n, q) -> offset table."""
    blocks: dict[int, list[tuple[int, int]]] = {}
    for n, col in sorted(big.columns.items()):
        for q in col.degrees():
            if col.dim(q):
                blocks.setdefault(q - n, []).append((n, q))
    offsets: dict[tuple[int, int], int] = {}
    bases: dict[int, list[Hashable]] = {}
    for t, bl in sorted(blocks.items()):
        labels: list[Hashable] = []
        for n, q in bl:
            offsets[(n, q)] = len(labels)
            labels.extend((n, q, lab) for lab in big.columns[n].bases[q])
        bases[t] = labels

    boundary: dict[int, Matrix] = {}
    for t in sorted(blocks):
        if t - 1 not in bases:
            continue
        cols: list[Vector] = []
        for n, q in blocks[t]:
            col_cx = big.columns[n]
            d_int = col_cx.d(q)
            ext = big.external.get(n, {}).get(q)
            for j in range(col_cx.dim(q)):
                v: Vector = {}
                if (n, q - 1) in offsets:
                    off = offsets[(n, q - 1)]
                    for i, a in d_int.columns[j].items():
                        v[off + i] = a
                if ext is not None and (n + 1, q) in offsets:
                    off = offsets[(n + 1, q)]
                    sign = Fraction(-1) if q % 2 else ONE
                    for i, a in ext.columns[j].items():
                        w = v.get(off + i, ZERO) + sign * a
                        if w:
                            v[off + i] = w
                        else:
                            v.pop(off + i, None)
                cols.append(v)
        boundary[t] = Matrix(len(bases[t - 1]), cols)
    return ChainComplex(bases, boundary), offsets


# ---------------------------------------------------------------------------
# filtered complexes and the P/Q construction

class FilteredComplex:
    """Chain complex with an increasing filtration given by basis subsets.

    filtration[p][q] is the set of basis positions of C_q spanning level p.
    Structural hypotheses (increasing, exhaustive, bounded below, closed
    under the boundary) are enforced here; graded acyclicity off the
    diagonal is checked by lemma_PQ, not assumed.
    """

    def __init__(
        self, complex_: ChainComplex, filtration: dict[int, dict[int, set[int]]]
    ):
        self.complex = complex_
        self.levels = sorted(filtration)
        self.filtration = {
            p: {q: set(s) for q, s in f.items()} for p, f in filtration.items()
        }
        self._check_structure()

    def level(self, p: int, q: int) -> set[int]:
        if not self.levels or p < self.levels[0]:
            return set()
        p = min(p, self.levels[-1])
        while p not in self.filtration and p > self.levels[0]:
            p -= 1
        return self.filtration.get(p, {}).get(q, set())

    def _check_structure(self) -> None:
        cx = self.complex
        for i in range(len(self.levels) - 1):
            a, b = self.levels[i], self.levels[i + 1]
            for q in cx.degrees():
                if not self.level(a, q) <= self.level(b, q):
                    raise ConventionFault("filtration is not increasing")
        top = self.levels[-1]
        for q in cx.degrees():
            if self.level(top, q) != set(range(cx.dim(q))):
                raise ConventionFault("filtration is not exhaustive")
        for p in self.levels:
            for q in cx.degrees():
                d = cx.d(q)
                for j in self.level(p, q):
                    if any(i not in self.level(p, q - 1) for i in d.columns[j]):
                        raise ConventionFault("filtration level is not a subcomplex")


@dataclass
class LemmaPQResult:
    P: dict[int, list[Vector]]                   # basis of P_n inside C_n
    Q: dict[int, list[Vector]]                   # spanning set of Q_n inside C_n
    pq_ranks: dict[int, int]                     # ranks of (P/Q)_n
    graded_homology: dict[tuple[int, int], int]  # (p, q) -> dim H_q(gr_p)
    certificates: dict[str, bool]


def graded_piece(fc: FilteredComplex, p: int) -> ChainComplex:
    """The complex F_p / F_{p-1} on the complementary basis positions."""
    cx = fc.complex
    bases: dict[int, list[Hashable]] = {}
    positions: dict[int, list[int]] = {}
    for q in cx.degrees():
        pos = sorted(fc.level(p, q) - fc.level(p - 1, q))
        positions[q] = pos
        bases[q] = [cx.bases[q][i] for i in pos]
    boundary: dict[int, Matrix] = {}
    for q in cx.degrees():
        if not bases.get(q) or not bases.get(q - 1):
            continue
        lut = {i: k for k, i in enumerate(positions[q - 1])}
        cols = []
        for j in positions[q]:
            col = cx.d(q).columns[j]
            cols.append({lut[i]: a for i, a in col.items() if i in lut})
        boundary[q] = Matrix(len(bases[q - 1]), cols)
    return ChainComplex(bases, boundary, check=False)


def lemma_PQ(fc: FilteredComplex) -> LemmaPQResult:
    """Subcomplexes Q <= P <= A with P -> A and P -> P/Q certified quasi-isos.

    Hypothesis (v), vanishing of H_q(gr_p) for q != p, is verified by rank
    inside the represented window; failure reports the offending (p, q).
    """
    cx = fc.complex
    degrees = cx.degrees()
    window = degrees[:-1] if len(degrees) > 1 else degrees
    graded: dict[tuple[int, int], int] = {}
    for p in fc.levels:
        piece = graded_piece(fc, p)
        for q in window:
            r = homology(piece, q).rank
            graded[(p, q)] = r
            if q != p and r:
                raise ConventionFault(
                    f"graded acyclicity fails: H_{q}(gr_{p}) has rank {r}"
                )

    # P_n = ker( F_n A_n -> gr_n A_{n-1} )
    P: dict[int, list[Vector]] = {}
    for n in degrees:
        members = sorted(fc.level(n, n))
        lower = fc.level(n - 1, n - 1)
        cols = []
        for j in members:
            col = cx.d(n).columns[j] if cx.dim(n - 1) else {}
            cols.append({i: a for i, a in col.items() if i not in lower})
        ker = kernel_basis(cols)
        P[n] = [{members[i]: c for i, c in k.items()} for k in ker]

    # Q_n = d(F_n A_{n+1}) + F_{n-1} A_n
    Q: dict[int, list[Vector]] = {}
    for n in degrees:
        span: list[Vector] = []
        for j in sorted(fc.level(n, n + 1)):
            if cx.dim(n + 1):
                col = cx.d(n + 1).columns[j]
                if col:
                    span.append(dict(col))
        for i in sorted(fc.level(n - 1, n)):
            span.append({i: ONE})
        Q[n] = span

    certs: dict[str, bool] = {}
    ok = True
    for n in degrees:
        ech = Echelon()
        for v in P[n]:
            ech.add(v)
        ok = ok and all(ech.contains(v) for v in Q[n])
    certs["Q_subset_P"] = ok
    if not ok:
        raise ConventionFault("Q is not contained in P")

    pq_ranks: dict[int, int] = {}
    for n in degrees:
        ech = Echelon()
        for v in Q[n]:
            ech.add(v)
        base = ech.rank
        for v in P[n]:
            ech.add(v)
        pq_ranks[n] = ech.rank - base

    certs["pq_matches_graded_homology"] = all(
        pq_ranks[n] == graded.get((n, n), 0) for n in window
    )

    p_cx = span_subcomplex(cx, P)
    certs["P_to_A_quasi_iso"] = _induced_iso(cx, p_cx, P, window)
    pq_cx = _quotient_complex(cx, P, Q)
    h_p = {n: homology(p_cx, n).rank for n in window}
    h_pq = {n: homology(pq_cx, n).rank for n in window}
    certs["P_to_PQ_quasi_iso"] = h_pq == h_p
    return LemmaPQResult(P, Q, pq_ranks, graded, certs)


def span_subcomplex(cx: ChainComplex, span: dict[int, list[Vector]]) -> ChainComplex:
    """Subcomplex generated by spanning vectors, in chosen-span coordinates."""
    bases: dict[int, list[Hashable]] = {}
    chosen: dict[int, list[Vector]] = {}
    for n, vs in span.items():
        idx = independent_subset(vs)
        chosen[n] = [vs[i] for i in idx]
        bases[n] = [("p", n, i) for i in idx]
    boundary: dict[int, Matrix] = {}
    for n in sorted(bases):
        if not bases.get(n) or not bases.get(n - 1):
            continue
        solver = Solver(chosen[n - 1])
        cols = []
        for v in chosen[n]:
            sol = solver.solve(cx.d(n).apply(v))
            if sol is None:
                raise ConventionFault("span is not a subcomplex")
            cols.append(sol)
        boundary[n] = Matrix(len(bases[n - 1]), cols)
    return ChainComplex(bases, boundary)


def _quotient_complex(
    cx: ChainComplex, P: dict[int, list[Vector]], Q: dict[int, list[Vector]]
) -> ChainComplex:
    """P/Q presented on representatives chosen inside P."""
    reps: dict[int, list[Vector]] = {}
    bases: dict[int, list[Hashable]] = {}
    for n in sorted(P):
        ech = Echelon()
        for v in Q.get(n, []):
            ech.add(v)
        reps[n] = [v for v in P[n] if ech.add(v) is not None]
        bases[n] = [("pq", n, i) for i in range(len(reps[n]))]
    boundary: dict[int, Matrix] = {}
    for n in sorted(bases):
        if not bases.get(n) or not bases.get(n - 1):
            continue
        k = len(Q.get(n - 1, []))
        solver = Solver(list(Q.get(n - 1, [])) + reps[n - 1])
        cols = []
        for v in reps[n]:
            sol = solver.solve(cx.d(n).apply(v))
            if sol is None:
                raise ConventionFault("boundary leaves P")
            cols.append({j - k: c for j, c in sol.items() if j >= k and c})
        boundary[n] = Matrix(len(bases[n - 1]), cols)
    return ChainComplex(bases, boundary)


def _induced_iso(
    amb: ChainComplex,
    sub: ChainComplex,
    span: dict[int, list[Vector]],
    window: Iterable[int],
) -> bool:
    """Does the inclusion of the span induce isomorphisms on homology?"""
    chosen = {n: [span[n][i] for i in independent_subset(span[n])] for n in span}
    for n in window:
        ha = homology(amb, n)
        hs = homology(sub, n)
        if ha.rank != hs.rank:
            return False
        coords = []
        for rep in hs.representatives:
            ambient: Vector = {}
            for j, c in rep.items():
                ambient = vec_add(ambient, chosen[n][j], c)
            cc = ha.class_coordinates(ambient)
            if cc is None:
                return False
            coords.append(cc)
        if rank_of(coords) != ha.rank:
            return False
    return True


def span_intersection_rank(a: Sequence[Vector], b: Sequence[Vector]) -> int:
    """dim(span a  intersect  span b) = rk a + rk b - rk(a u b)."""
    return rank_of(a) + rank_of(b) - rank_of(list(a) + list(b))


def run_tasks(fns: Sequence[Callable[[], object]], max_workers: int = 1) -> list[object]:
    """Run independent pure computations, optionally on a small thread pool."""
    if max_workers <= 1 or len(fns) <= 1:
        return [f() for f in fns]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=min(max_workers, len(fns))) as pool:
        futures = [pool.submit(f) for f in fns]
        return [f.result() for f in futures]
