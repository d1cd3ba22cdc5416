"""Half-ribbon tangle diagrams as slice stacks, and their evaluation as exact
operators between tensor products of modules.

A boundary object is a row of intervals, each with a label, a direction and
a shading.  A diagram is a source object plus a list of slices, each holding a
single generator at a strand offset:

    id            nothing happens
    cap@i         joins intervals i, i+1 (same label and shading, opposite directions)
    cup@i         creates two intervals at position i
    x+@i, x-@i    positive / negative crossing of intervals i, i+1
    h+(n)@i       positive half-twist of intervals i..i+n-1 (reverses them, flips shading)
    h-(n)@i       its inverse
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .halftwist import (
    RibbonChoice,
    braiding,
    grouplike_g,
    grouplike_inverse,
    half_twist,
    half_twist_inverse,
    ribbon_scalar,
)
from .linalg import SparseMatrix
from .modules import Module, dual, tensor_many, twist
from .scalars import Scalar

__all__ = [
    "Interval",
    "BoundaryObject",
    "Slice",
    "Diagram",
    "DiagramError",
    "BoundaryError",
    "UnsupportedGenerator",
    "EvaluationResult",
    "compose",
    "tensor_diag",
    "identity",
    "evaluate",
    "writhe",
    "components",
    "link_invariant",
    "rev_permutation",
    "braid_closure",
    "Functor",
    "writhe_fraction",
]


class DiagramError(ValueError):
    pass


class BoundaryError(DiagramError):
    def __init__(self, message: str, slice_index: int | None = None, interval: int | None = None):
        super().__init__(message)
        self.slice_index = slice_index
        self.interval = interval


class UnsupportedGenerator(DiagramError):
    pass


@dataclass(frozen=True)
class Interval:
    label: str
    up: bool = True
    shaded: bool = False

    def flipped_shading(self) -> "Interval":
        return Interval(self.label, self.up, not self.shaded)

    def reversed(self) -> "Interval":
        return Interval(self.label, not self.up, self.shaded)

    @property
    def token(self) -> str:
        if self.shaded:
            return f"{self.label}#{'^' if self.up else 'v'}"
        return f"{self.label}^" if self.up else f"{self.label}_v"


BoundaryObject = tuple  # tuple[Interval, ...]

_KINDS = {"id", "cap", "cup", "x+", "x-", "h+", "h-"}


@dataclass(frozen=True)
class Slice:
    kind: str
    pos: int = 0
    n: int = 2  # strands touched by a half-twist
    cup_left: Interval | None = None  # left end of a cup

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DiagramError(f"unknown generator {self.kind!r}")
        if self.kind in ("h+", "h-") and self.n < 1:
            raise DiagramError("half-twist needs at least one strand")
        if self.kind == "cup" and self.cup_left is None:
            object.__setattr__(self, "cup_left", Interval("V", True, False))

    @property
    def width_in(self) -> int:
        return {"id": 0, "cap": 2, "cup": 0, "x+": 2, "x-": 2}.get(self.kind, self.n)

    def shifted(self, k: int) -> "Slice":
        return Slice(self.kind, self.pos + k, self.n, self.cup_left)

    def apply(self, obj: BoundaryObject, index: int | None = None) -> BoundaryObject:
        """The boundary object above this slice, with full boundary checks."""
        i, k = self.pos, self.kind
        if k == "id":
            return obj
        if k == "cup":
            if not 0 <= i <= len(obj):
                raise BoundaryError(f"cup@{i} outside an object of width {len(obj)}", index, i)
            left = self.cup_left
            return obj[:i] + (left, left.reversed()) + obj[i:]
        w = self.width_in
        if i < 0 or i + w > len(obj):
            raise BoundaryError(f"{self.text()} needs intervals {i}..{i + w - 1} but the object has width {len(obj)}", index, max(i, 0))
        if k == "cap":
            a, b = obj[i], obj[i + 1]
            if a.label != b.label:
                raise BoundaryError(f"cap@{i} joins different labels {a.label} and {b.label}", index, i)
            if a.shaded != b.shaded:
                raise BoundaryError(f"cap@{i} joins intervals of different shading", index, i)
            if a.up == b.up:
                raise BoundaryError(f"cap@{i} joins two intervals with the same direction", index, i)
            return obj[:i] + obj[i + 2:]
        if k in ("x+", "x-"):
            return obj[:i] + (obj[i + 1], obj[i]) + obj[i + 2:]
        mid = tuple(x.flipped_shading() for x in reversed(obj[i:i + w]))
        return obj[:i] + mid + obj[i + w:]

    def text(self) -> str:
        if self.kind == "id":
            return "id"
        if self.kind in ("h+", "h-"):
            return f"{self.kind}({self.n})@{self.pos}"
        if self.kind == "cup" and self.cup_left != Interval("V", True, False):
            return f"cup({self.cup_left.token})@{self.pos}"
        return f"{self.kind}@{self.pos}"


@dataclass(frozen=True)
class Diagram:
    source: BoundaryObject
    slices: tuple = ()
    objects: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        src = tuple(self.source)
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "slices", tuple(self.slices))
        objs = [src]
        for k, s in enumerate(self.slices):
            objs.append(s.apply(objs[-1], k))
        object.__setattr__(self, "objects", tuple(objs))

    @property
    def target(self) -> BoundaryObject:
        return self.objects[-1]

    @property
    def is_closed(self) -> bool:
        return not self.source and not self.target

    def labels(self) -> set:
        return {iv.label for obj in self.objects for iv in obj}

    def has_half_twists(self) -> bool:
        return any(s.kind in ("h+", "h-") for s in self.slices)

    def has_shading(self) -> bool:
        return any(iv.shaded for obj in self.objects for iv in obj)


def identity(obj: Sequence[Interval]) -> Diagram:
    return Diagram(tuple(obj), ())


def compose(d1: Diagram, d2: Diagram) -> Diagram:
    """d2 stacked on top of d1."""
    t, s = d1.target, d2.source
    for k in range(max(len(t), len(s))):
        a = t[k] if k < len(t) else None
        b = s[k] if k < len(s) else None
        if a != b:
            raise BoundaryError(
                f"cannot stack: interval {k} is {a.token if a else 'missing'} below "
                f"but {b.token if b else 'missing'} above",
                None,
                k,
            )
    return Diagram(d1.source, d1.slices + d2.slices)


def tensor_diag(d1: Diagram, d2: Diagram) -> Diagram:
    """Side-by-side juxtaposition: d1's slices run first, then d2's shifted right."""
    shift = len(d1.target)
    slices = list(d1.slices) + [s.shifted(shift) for s in d2.slices]
    return Diagram(d1.source + d2.source, tuple(slices))


# ---------------------------------------------------------------------------
# writhe and components


def _crossing_sign(a: Interval, b: Interval, positive: bool) -> int:
    s = 1 if positive else -1
    return s if a.up == b.up else -s


def writhe_fraction(d: Diagram) -> Fraction:
    """Signed crossing count plus 1/2 per strand per half-twist (framing)."""
    total = Fraction(0)
    for s, obj in zip(d.slices, d.objects):
        if s.kind in ("x+", "x-"):
            total += _crossing_sign(obj[s.pos], obj[s.pos + 1], s.kind == "x+")
        elif s.kind in ("h+", "h-"):
            pos = s.kind == "h+"
            strands = obj[s.pos:s.pos + s.n]
            for a in range(len(strands)):
                for b in range(a + 1, len(strands)):
                    total += _crossing_sign(strands[a], strands[b], pos)
            total += Fraction(len(strands), 2) * (1 if pos else -1)
    return total


def writhe(d: Diagram) -> int:
    if not d.is_closed:
        raise DiagramError("writhe is only defined for closed diagrams")
    w = writhe_fraction(d)
    if w.denominator != 1:
        raise DiagramError(f"half-twists do not pair up: writhe {w}")
    return int(w)


def components(d: Diagram) -> int:
    """Number of closed components (strands joined through caps and cups)."""
    parent: list[int] = []

    def new():
        parent.append(len(parent))
        return len(parent) - 1

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    ids = [new() for _ in d.source]
    for s in d.slices:
        i = s.pos
        if s.kind == "cup":
            c = new()
            ids = ids[:i] + [c, c] + ids[i:]
        elif s.kind == "cap":
            a, b = find(ids[i]), find(ids[i + 1])
            if a != b:
                parent[a] = b
            ids = ids[:i] + ids[i + 2:]
        elif s.kind in ("x+", "x-"):
            ids = ids[:i] + [ids[i + 1], ids[i]] + ids[i + 2:]
        elif s.kind in ("h+", "h-"):
            ids = ids[:i] + ids[i:i + s.n][::-1] + ids[i + s.n:]
    return len({find(x) for x in range(len(parent))})


# ---------------------------------------------------------------------------
# evaluation

_CACHE_LOCK = threading.Lock()
_TENSOR_CACHE: dict = {}


def interval_module(base: Module, iv: Interval) -> Module:
    """The module attached to an interval: V, V*, V^X or (V*)^X."""
    cache = base.__dict__.setdefault("_interval_modules", {})
    key = (iv.up, iv.shaded)
    mod = cache.get(key)
    if mod is None:
        m = base if iv.up else dual(base, "left")
        if iv.shaded:
            m = twist(m)
        mod = cache.setdefault(key, m)
    return mod


def _tensor_of(mods: Sequence[Module]) -> Module:
    if len(mods) == 1:
        return mods[0]
    key = tuple(id(m) for m in mods)
    hit = _TENSOR_CACHE.get(key)
    if hit is None:
        with _CACHE_LOCK:
            hit = _TENSOR_CACHE.setdefault(key, (tuple(mods), tensor_many(list(mods))))
    return hit[1]


def rev_permutation(dims: Sequence[int]) -> list[int]:
    """Index map of x1 (x) ... (x) xn -> xn (x) ... (x) x1."""
    n = len(dims)
    out = []
    rdims = list(reversed(dims))
    total = 1
    for x in dims:
        total *= x
    for flat in range(total):
        idx = []
        r = flat
        for dm in reversed(dims):
            idx.append(r % dm)
            r //= dm
        # idx is reversed multi-index, i.e. exactly the reversed tuple's digits
        f = 0
        for k in range(n):
            f = f * rdims[k] + idx[k]
        out.append(f)
    return out


@dataclass(frozen=True, eq=False)
class EvaluationResult:
    operator: SparseMatrix | None
    scalar: Scalar | None
    ribbon: RibbonChoice
    writhe: int | None
    source_dims: tuple
    target_dims: tuple


class _LocalOp:
    def __init__(self, dims_in, dims_out, matrix):
        self.width_in = len(dims_in)
        self.width_out = len(dims_out)
        self.dims_in = tuple(dims_in)
        self.dims_out = tuple(dims_out)
        self.matrix = matrix
        self._cols = None


def _flat(idx, dims) -> int:
    f = 0
    for x, dm in zip(idx, dims):
        f = f * dm + x
    return f


def _unflat(f: int, dims) -> tuple:
    out = []
    for dm in reversed(dims):
        out.append(f % dm)
        f //= dm
    return tuple(reversed(out))


class Functor:
    """Evaluates diagrams for a fixed label registry and ribbon choice."""

    def __init__(self, reps: Mapping[str, Module], choice: RibbonChoice):
        self.reps = dict(reps)
        self.choice = choice
        self._local: dict = {}

    def module(self, iv: Interval) -> Module:
        if iv.label not in self.reps:
            raise DiagramError(f"unknown label {iv.label!r}")
        if iv.shaded and not self.choice.is_half_ribbon:
            raise UnsupportedGenerator(f"shaded intervals need the half-ribbon choice X^-2, not {self.choice.label}")
        return interval_module(self.reps[iv.label], iv)

    def _g(self, label: str) -> SparseMatrix:
        return grouplike_g(self.choice, self.reps[label])

    def _ginv(self, label: str) -> SparseMatrix:
        return grouplike_inverse(self.choice, self.reps[label])

    def local(self, s: Slice, obj: BoundaryObject) -> _LocalOp:
        """The operator of a single generator on the intervals it touches."""
        k = s.kind
        if k == "cup":
            ins: tuple = ()
            outs = (s.cup_left, s.cup_left.reversed())
        else:
            ins = obj[s.pos:s.pos + s.width_in]
            outs = Slice(k, 0, s.n, s.cup_left).apply(ins)
        key = (k, s.n, ins, outs)
        op = self._local.get(key)
        if op is None:
            op = self._local[key] = self._build_local(k, s.n, ins, outs)
        return op

    def _build_local(self, k, n, ins, outs) -> _LocalOp:
        mods_in = [self.module(iv) for iv in ins]
        mods_out = [self.module(iv) for iv in outs]
        dims_in = [m.dim for m in mods_in]
        dims_out = [m.dim for m in mods_out]
        L = next(iter(self.reps.values())).L
        if k in ("cap", "cup"):
            return _LocalOp(dims_in, dims_out, self._cap_cup(k, ins if k == "cap" else outs, L))
        if k == "x+":
            M, N = mods_in
            return _LocalOp(dims_in, dims_out, braiding(M, N).sigma)
        if k == "x-":
            M, N = mods_in
            return _LocalOp(dims_in, dims_out, braiding(N, M).sigma.inverse())
        if k in ("h+", "h-"):
            if not self.choice.is_half_ribbon:
                raise UnsupportedGenerator(f"half-twists need the half-ribbon choice X^-2, not {self.choice.label}")
            if k == "h+":
                T = _tensor_of(mods_in)
                mat = SparseMatrix.permutation(rev_permutation(dims_in), L) @ half_twist(T)
            else:
                T = _tensor_of(mods_out)
                mat = half_twist_inverse(T) @ SparseMatrix.permutation(rev_permutation(dims_in), L)
            return _LocalOp(dims_in, dims_out, mat)
        raise DiagramError(f"no local operator for {k}")

    def _cap_cup(self, k, pair, L) -> SparseMatrix:
        a, b = pair
        label = a.label
        n = self.reps[label].dim
        one = Scalar.one(L)
        rows: dict = {}
        shaded = a.shaded
        left_up = a.up
        if k == "cap":
            # matrix 1 x n^2 indexed by (left, right)
            use_g = (left_up and not shaded) or (not left_up and shaded)
            if use_g:
                G = self._g(label)
                # up,down unshaded: v (x) f -> f(g v); down,up shaded: f (x) v -> f(g v)
                for i, j, x in G.entries():
                    # f = e^i, v = e_j
                    col = j * n + i if left_up else i * n + j
                    rows.setdefault(0, {})[col] = x
            else:
                for i in range(n):
                    rows.setdefault(0, {})[i * n + i] = one
            return SparseMatrix(1, n * n, rows, L)
        # cups: n^2 x 1
        use_ginv = (not left_up and not shaded) or (left_up and shaded)
        if use_ginv:
            Gi = self._ginv(label)
            for kk, i, x in Gi.entries():
                # down,up unshaded: e^i (x) g^-1 e_i ; up,down shaded: g^-1 v_i (x) v^i
                r = i * n + kk if not left_up else kk * n + i
                rows.setdefault(r, {})[0] = x
        else:
            for i in range(n):
                rows[i * n + i] = {0: one}
        return SparseMatrix(n * n, 1, rows, L)

    def dims(self, obj: BoundaryObject) -> tuple:
        return tuple(self.module(iv).dim for iv in obj)

    def evaluate(self, d: Diagram) -> EvaluationResult:
        src_dims = self.dims(d.source)
        tgt_dims = self.dims(d.target)
        total = 1
        for x in src_dims:
            total *= x
        L = next(iter(self.reps.values())).L
        one = Scalar.one(L)
        cols = []
        for flat in range(total):
            vec = {_unflat(flat, src_dims): one}
            for s, obj in zip(d.slices, d.objects):
                vec = self._apply_slice(s, obj, vec)
                if not vec:
                    break
            cols.append({_flat(idx, tgt_dims): x for idx, x in vec.items()})
        ntgt = 1
        for x in tgt_dims:
            ntgt *= x
        mat = SparseMatrix.from_columns(ntgt, cols, L)
        w = writhe(d) if d.is_closed else None
        scalar = mat.get(0, 0) if d.is_closed else None
        return EvaluationResult(mat, scalar, self.choice, w, src_dims, tgt_dims)

    def _apply_slice(self, s: Slice, obj: BoundaryObject, vec: dict) -> dict:
        if s.kind == "id":
            return vec
        op = self.local(s, obj)
        i, w = s.pos, op.width_in
        cols = _op_columns(op)
        out: dict = {}
        for idx, x in vec.items():
            col = cols[_flat(idx[i:i + w], op.dims_in)]
            if not col:
                continue
            head, tail = idx[:i], idx[i + w:]
            for r, y in col:
                key = head + r + tail
                z = out.get(key)
                t = x * y
                if z is None:
                    out[key] = t
                else:
                    z = z + t
                    if z:
                        out[key] = z
                    else:
                        del out[key]
        return out


def _op_columns(op: _LocalOp):
    if op._cols is not None:
        return op._cols
    cols = [[] for _ in range(op.matrix.ncols)]
    for r, c, x in op.matrix.entries():
        cols[c].append((_unflat(r, op.dims_out), x))
    op._cols = cols
    return cols


def evaluate(d: Diagram, choice: RibbonChoice, reps: Mapping[str, Module]) -> EvaluationResult:
    return Functor(reps, choice).evaluate(d)


def link_invariant(d: Diagram, choice: RibbonChoice, reps: Mapping[str, Module], normalize: bool = True) -> Scalar:
    """F(L), or theta(V)^{w(L)} F(L) when normalized (single-label closed diagrams)."""
    if not d.is_closed:
        raise DiagramError("link invariants need a closed diagram")
    labels = d.labels()
    if len(labels) > 1:
        raise UnsupportedGenerator("only single-label links are supported for invariants")
    res = evaluate(d, choice, reps)
    value = res.scalar
    if not normalize or not labels:
        return value
    V = reps[next(iter(labels))]
    if V.highest_weight is None:
        raise DiagramError("normalization needs an irreducible label")
    theta = ribbon_scalar(choice, V.datum, V.highest_weight)
    return value * theta ** res.writhe


def braid_closure(n: int, word: Sequence[int], label: str = "V") -> Diagram:
    """Trace closure of a braid on n upward strands.

    ``word`` lists signed 1-based generators: 2 is s2, -1 is s1^-1.  Strands
    return on the right, nested, so closing uses the quantum trace.
    """
    up = Interval(label, True, False)
    slices = [Slice("cup", k, cup_left=up) for k in range(n)]
    for g in word:
        if g == 0 or abs(g) >= n:
            raise DiagramError(f"generator s{abs(g)} out of range for {n} strands")
        slices.append(Slice("x+" if g > 0 else "x-", abs(g) - 1))
    slices.extend(Slice("cap", k) for k in range(n - 1, -1, -1))
    return Diagram((), slices)
