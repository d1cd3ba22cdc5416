"""Sparse exact linear algebra over the scalar field.

Matrices are dict-of-rows with no stored zeros.  Everything here is exact;
elimination picks the "lightest" available pivot to keep fractions small.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .scalars import Scalar

Vector = dict  # {index: Scalar}, no zeros


def _weight(s: Scalar) -> int:
    return len(s._num) + 4 * (len(s._den) - 1)


def vec_add(a: Vector, b: Vector) -> Vector:
    out = dict(a)
    for k, x in b.items():
        y = out.get(k)
        if y is None:
            out[k] = x
        else:
            y = y + x
            if y:
                out[k] = y
            else:
                del out[k]
    return out


def vec_scale(a: Vector, c: Scalar) -> Vector:
    if not c:
        return {}
    if c.is_one():
        return dict(a)
    return {k: x * c for k, x in a.items()}


def vec_axpy(acc: Vector, c: Scalar, b: Vector) -> None:
    """acc += c * b, in place."""
    one = c.is_one()
    for k, x in b.items():
        t = x if one else c * x
        y = acc.get(k)
        if y is None:
            acc[k] = t
        else:
            y = y + t
            if y:
                acc[k] = y
            else:
                del acc[k]


class SparseMatrix:
    """A sparse matrix with :class:`Scalar` entries."""

    __slots__ = ("nrows", "ncols", "rows", "L")

    def __init__(self, nrows: int, ncols: int, rows: Mapping[int, Mapping[int, Scalar]] | None = None, L: int = 1):
        self.nrows = nrows
        self.ncols = ncols
        self.L = L
        self.rows: dict[int, dict[int, Scalar]] = {}
        if rows:
            for i, r in rows.items():
                rr = {j: x for j, x in r.items() if x}
                if rr:
                    self.rows[i] = rr

    # -- constructors ------------------------------------------------------
    @classmethod
    def identity(cls, n: int, L: int) -> "SparseMatrix":
        one = Scalar.one(L)
        return cls(n, n, {i: {i: one} for i in range(n)}, L)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, L: int) -> "SparseMatrix":
        return cls(nrows, ncols, None, L)

    @classmethod
    def diagonal(cls, entries: Iterable[Scalar], L: int) -> "SparseMatrix":
        entries = list(entries)
        return cls(len(entries), len(entries), {i: {i: x} for i, x in enumerate(entries)}, L)

    @classmethod
    def from_columns(cls, nrows: int, columns: list[Vector], L: int) -> "SparseMatrix":
        m = cls(nrows, len(columns), None, L)
        for j, col in enumerate(columns):
            for i, x in col.items():
                if x:
                    m.rows.setdefault(i, {})[j] = x
        return m

    @classmethod
    def permutation(cls, perm: list[int], L: int) -> "SparseMatrix":
        """Matrix sending basis vector j to basis vector perm[j]."""
        one = Scalar.one(L)
        return cls(len(perm), len(perm), {perm[j]: {j: one} for j in range(len(perm))}, L)

    # -- access --------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def get(self, i: int, j: int) -> Scalar:
        x = self.rows.get(i, {}).get(j)
        return x if x is not None else Scalar.zero(self.L)

    def column(self, j: int) -> Vector:
        return {i: r[j] for i, r in self.rows.items() if j in r}

    def columns(self) -> list[Vector]:
        cols: list[Vector] = [{} for _ in range(self.ncols)]
        for i, r in self.rows.items():
            for j, x in r.items():
                cols[j][i] = x
        return cols

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def entries(self):
        for i in sorted(self.rows):
            r = self.rows[i]
            for j in sorted(r):
                yield i, j, r[j]

    # -- algebra ------------------------------------------------------------------
    def apply(self, vec: Vector) -> Vector:
        """Matrix times column vector."""
        out: Vector = {}
        for i, r in self.rows.items():
            acc = None
            for j, x in r.items():
                y = vec.get(j)
                if y is not None:
                    t = x * y
                    acc = t if acc is None else acc + t
            if acc is not None and acc:
                out[i] = acc
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out: dict[int, dict[int, Scalar]] = {}
        orows = other.rows
        for i, r in self.rows.items():
            acc: dict[int, Scalar] = {}
            for k, x in r.items():
                ok = orows.get(k)
                if ok:
                    vec_axpy(acc, x, ok)
            if acc:
                out[i] = acc
        m = SparseMatrix(self.nrows, other.ncols, None, self.L)
        m.rows = out
        return m

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        m = SparseMatrix(self.nrows, self.ncols, None, self.L)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            acc = rows.setdefault(i, {})
            vec_axpy(acc, Scalar.one(self.L), r)
            if not acc:
                del rows[i]
        m.rows = rows
        return m

    def __neg__(self) -> "SparseMatrix":
        m = SparseMatrix(self.nrows, self.ncols, None, self.L)
        m.rows = {i: {j: -x for j, x in r.items()} for i, r in self.rows.items()}
        return m

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c: Scalar) -> "SparseMatrix":
        m = SparseMatrix(self.nrows, self.ncols, None, self.L)
        if c:
            m.rows = {i: vec_scale(r, c) for i, r in self.rows.items()}
        return m

    def transpose(self) -> "SparseMatrix":
        m = SparseMatrix(self.ncols, self.nrows, None, self.L)
        for i, r in self.rows.items():
            for j, x in r.items():
                m.rows.setdefault(j, {})[i] = x
        return m

    T = property(transpose)

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        """Tensor product; index (i, k) -> i * other.nrows + k."""
        m = SparseMatrix(self.nrows * other.nrows, self.ncols * other.ncols, None, self.L)
        for i, r in self.rows.items():
            for k, s in other.rows.items():
                row = {}
                for j, x in r.items():
                    for l, y in s.items():
                        row[j * other.ncols + l] = x * y
                m.rows[i * other.nrows + k] = row
        return m

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self.rows.keys() != other.rows.keys():
            return False
        for i, r in self.rows.items():
            s = other.rows[i]
            if r.keys() != s.keys():
                return False
            for j, x in r.items():
                if x != s[j]:
                    return False
        return True

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.rows

    def is_diagonal(self) -> bool:
        return all(r.keys() <= {i} for i, r in self.rows.items())

    def is_scalar(self, c: Scalar) -> bool:
        return self == SparseMatrix.identity(self.nrows, self.L).scale(c)

    def inverse(self) -> "SparseMatrix":
        if self.nrows != self.ncols:
            raise ValueError("only square matrices are invertible")
        out = SparseMatrix(self.nrows, self.ncols, None, self.L)
        for rows, cols in self._components():
            if len(rows) != len(cols):
                raise ZeroDivisionError("singular matrix")
            block = [[self.rows.get(i, {}).get(j) or Scalar.zero(self.L) for j in cols] for i in rows]
            inv = _dense_inverse(block, self.L)
            for a, j in enumerate(cols):
                for b, i in enumerate(rows):
                    x = inv[a][b]
                    if x:
                        out.rows.setdefault(j, {})[i] = x
        return out

    def _components(self):
        """Connected components of the bipartite row/column nonzero graph."""
        parent: dict = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for i in range(self.nrows):
            parent[("r", i)] = ("r", i)
        for j in range(self.ncols):
            parent[("c", j)] = ("c", j)
        for i, r in self.rows.items():
            for j in r:
                union(("r", i), ("c", j))
        groups: dict = {}
        for key in parent:
            groups.setdefault(find(key), ([], []))
            groups[find(key)][0 if key[0] == "r" else 1].append(key[1])
        return [(sorted(r), sorted(c)) for r, c in groups.values()]

    def to_json(self) -> dict:
        return {
            "shape": [self.nrows, self.ncols],
            "entries": [[i, j, x.to_json()] for i, j, x in self.entries()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SparseMatrix":
        nrows, ncols = data["shape"]
        m = cls(nrows, ncols)
        L = 1
        for i, j, x in data["entries"]:
            s = Scalar.from_json(x)
            L = s.L
            m.rows.setdefault(int(i), {})[int(j)] = s
        m.L = L
        return m

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def pretty(self) -> str:
        lines = []
        for i in range(self.nrows):
            lines.append("  ".join(self.get(i, j).to_text() for j in range(self.ncols)))
        return "\n".join(lines)


def _dense_inverse(block: list[list[Scalar]], L: int) -> list[list[Scalar]]:
    n = len(block)
    if n == 1:
        return [[block[0][0].inverse()]]
    one, zero = Scalar.one(L), Scalar.zero(L)
    m = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(block)]
    for col in range(n):
        cands = [r for r in range(col, n) if m[r][col]]
        if not cands:
            raise ZeroDivisionError("singular matrix")
        piv = min(cands, key=lambda r: _weight(m[r][col]))
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv if x else x for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y if y else x for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def row_reduce(rows: list[Vector]) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form of a list of sparse row vectors.

    Returns (nonzero reduced rows, pivot columns).
    """
    work = [dict(r) for r in rows if r]
    pivots: list[int] = []
    done: list[Vector] = []
    while work:
        # choose the lightest pivot among all remaining entries
        best = None
        for ri, r in enumerate(work):
            for j, x in r.items():
                w = (_weight(x), len(r), j)
                if best is None or w < best[0]:
                    best = (w, ri, j)
        _, ri, j = best
        prow = work.pop(ri)
        inv = prow[j].inverse()
        prow = vec_scale(prow, inv)
        for r in work:
            f = r.get(j)
            if f is not None:
                vec_axpy(r, -f, prow)
        for r in done:
            f = r.get(j)
            if f is not None:
                vec_axpy(r, -f, prow)
        done.append(prow)
        pivots.append(j)
        work = [r for r in work if r]
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    return [done[k] for k in order], [pivots[k] for k in order]


def rank(rows: list[Vector]) -> int:
    return len(row_reduce(rows)[0])


def kernel(rows: list[Vector], ncols: int, L: int, columns: Iterable[int] | None = None) -> list[Vector]:
    """Basis of {x : r . x = 0 for all rows r}, x supported on ``columns``.

    Free variables are taken in increasing column order; each basis vector has
    a 1 in its free column.
    """
    cols = sorted(columns) if columns is not None else list(range(ncols))
    reduced, pivots = row_reduce(rows)
    pset = set(pivots)
    one = Scalar.one(L)
    basis = []
    for f in cols:
        if f in pset:
            continue
        vec = {f: one}
        for r, p in zip(reduced, pivots):
            x = r.get(f)
            if x is not None:
                vec[p] = -x
        basis.append(vec)
    return basis


class EchelonBasis:
    """Incrementally maintained linearly independent set with coordinate solve."""

    def __init__(self, L: int):
        self.L = L
        self.vectors: list[Vector] = []
        self._reduced: list[tuple[int, Vector, Vector]] = []  # (pivot, reduced vec, combination)

    def _reduce(self, vec: Vector):
        v = dict(vec)
        comb: Vector = {}
        for p, r, c in self._reduced:
            f = v.get(p)
            if f is not None:
                vec_axpy(v, -f, r)
                vec_axpy(comb, -f, c)
        return v, comb

    def add(self, vec: Vector) -> bool:
        """Append vec if independent; returns whether it was added."""
        v, comb = self._reduce(vec)
        if not v:
            return False
        k = len(self.vectors)
        comb = vec_add(comb, {k: Scalar.one(self.L)})
        p = min(v, key=lambda j: (_weight(v[j]), j))
        inv = v[p].inverse()
        v = vec_scale(v, inv)
        comb = vec_scale(comb, inv)
        # keep earlier rows reduced against the new pivot
        new_rows = []
        for q, r, c in self._reduced:
            f = r.get(p)
            if f is not None:
                r = dict(r)
                c = dict(c)
                vec_axpy(r, -f, v)
                vec_axpy(c, -f, comb)
            new_rows.append((q, r, c))
        new_rows.append((p, v, comb))
        self._reduced = new_rows
        self.vectors.append(dict(vec))
        return True

    def coordinates(self, vec: Vector) -> Vector:
        """Coefficients c with vec = sum c_k vectors[k]; raises if not in the span."""
        v = dict(vec)
        coords: Vector = {}
        for p, r, c in self._reduced:
            f = v.get(p)
            if f is not None:
                vec_axpy(v, -f, r)
                vec_axpy(coords, f, c)
        if v:
            raise ValueError("vector is not in the span")
        return coords

    def __len__(self):
        return len(self.vectors)
