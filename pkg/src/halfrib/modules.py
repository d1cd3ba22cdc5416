"""Finite-dimensional type-1 modules with exact generator matrices.

Conventions (nodes 0-based, K_i acting on a weight-mu vector by q_i^{mu_i}):

    Delta(E_i) = E_i (x) K_i + 1 (x) E_i
    Delta(F_i) = F_i (x) 1 + K_i^{-1} (x) F_i
    S(E_i) = -E_i K_i^{-1},  S(F_i) = -K_i F_i,  S(K) = K^{-1}

The left dual carries x acting as the transpose of S(x); the right dual uses
S^{-1}.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .linalg import EchelonBasis, SparseMatrix, Vector, kernel, vec_axpy
from .rootdata import RootDatum, Weight
from .scalars import Scalar, q_power, qint

__all__ = [
    "Module",
    "ModuleError",
    "Intertwiner",
    "Summand",
    "fundamental",
    "irrep",
    "tensor",
    "tensor_many",
    "dual",
    "trivial",
    "twist",
    "singular_vectors",
    "hom_space",
    "decompose",
    "apply_word",
]


class ModuleError(ValueError):
    pass


def label_text(label) -> str:
    kind = label[0]
    if kind == "fundamental":
        return f"V(w{label[1] + 1})"
    if kind == "irrep":
        return "V(" + ",".join(map(str, label[1])) + ")"
    if kind == "tensor":
        return f"{label_text(label[1])} (x) {label_text(label[2])}"
    if kind == "dual":
        inner = label_text(label[1])
        return f"({inner})*" if label[2] == "left" else f"*({inner})"
    if kind == "twist":
        return f"{label_text(label[1])}^X"
    if kind == "trivial":
        return "1"
    return str(label)


@dataclass(eq=False)
class Module:
    """A module given by weights of basis vectors and E_i, F_i matrices."""

    datum: RootDatum
    weights: tuple
    E: tuple
    F: tuple
    label: tuple
    highest_weight: Weight | None = None
    words: tuple | None = None  # irreps: F-words producing each basis vector from the top
    factors: tuple | None = None  # tensor products: the two factor modules
    _weight_index: dict = field(default=None, repr=False)

    def __post_init__(self):
        idx: dict = {}
        for k, w in enumerate(self.weights):
            idx.setdefault(w, []).append(k)
        self._weight_index = {w: tuple(v) for w, v in idx.items()}

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def L(self) -> int:
        return self.datum.L

    @property
    def name(self) -> str:
        return label_text(self.label)

    def weight_space(self, mu: Weight) -> tuple:
        return self._weight_index.get(tuple(mu), ())

    def distinct_weights(self) -> list:
        """Weights sorted from the top down (by height, then lexicographically)."""
        d = self.datum
        return sorted(self._weight_index, key=lambda w: (-d.rho_check_pairing(w), tuple(-x for x in w)))

    # -- Cartan part -----------------------------------------------------------
    def K(self, i: int, power: int = 1) -> SparseMatrix:
        di = self.datum.d[i]
        return SparseMatrix.diagonal((q_power(power * di * w[i], self.L) for w in self.weights), self.L)

    def K_weight(self, mu: Weight, power: int = 1) -> SparseMatrix:
        """K_mu acting by q^{(wt, mu)}."""
        d = self.datum
        return SparseMatrix.diagonal((q_power(power * d.form(w, mu), self.L) for w in self.weights), self.L)

    def identity(self) -> SparseMatrix:
        return SparseMatrix.identity(self.dim, self.L)

    def basis_vector(self, k: int) -> Vector:
        return {k: Scalar.one(self.L)}

    # -- checks ------------------------------------------------------------------
    def relation_failures(self) -> list[str]:
        """All defining relations as exact matrix identities; returns failures."""
        d = self.datum
        out = []
        for i in d.nodes:
            a = d.simple_root(i)
            for name, mats, sign in (("E", self.E, 1), ("F", self.F, -1)):
                for r, c, _ in mats[i].entries():
                    want = tuple(x + sign * y for x, y in zip(self.weights[c], a))
                    if self.weights[r] != want:
                        out.append(f"{name}{i} does not shift weight {self.weights[c]} correctly")
                        break
        for i in d.nodes:
            for j in d.nodes:
                comm = self.E[i] @ self.F[j] - self.F[j] @ self.E[i]
                if i == j:
                    qi = q_power(d.d[i], self.L)
                    rhs = (self.K(i) - self.K(i, -1)).scale((qi - qi.inverse()).inverse())
                else:
                    rhs = SparseMatrix.zeros(self.dim, self.dim, self.L)
                if comm != rhs:
                    out.append(f"[E{i},F{j}] relation fails")
        for i in d.nodes:
            for j in d.nodes:
                if i == j:
                    continue
                m = 1 - d.cartan[i][j]
                for name, mats in (("E", self.E), ("F", self.F)):
                    total = SparseMatrix.zeros(self.dim, self.dim, self.L)
                    for k in range(m + 1):
                        coeff = _qbinom(m, k, self.L, d.d[i])
                        if k % 2:
                            coeff = -coeff
                        term = _mpow(mats[i], m - k, self) @ mats[j] @ _mpow(mats[i], k, self)
                        total = total + term.scale(coeff)
                    if not total.is_zero():
                        out.append(f"Serre relation for {name}{i},{name}{j} fails")
        return out

    def same_action(self, other: "Module") -> bool:
        return (
            self.weights == other.weights
            and all(a == b for a, b in zip(self.E, other.E))
            and all(a == b for a, b in zip(self.F, other.F))
        )

    def to_json(self) -> dict:
        return {
            "type": self.datum.name,
            "label": self.name,
            "dim": self.dim,
            "weights": [list(w) for w in self.weights],
            "E": [m.to_json() for m in self.E],
            "F": [m.to_json() for m in self.F],
        }

    def __repr__(self):
        return f"Module({self.name}, dim={self.dim})"


def _mpow(m: SparseMatrix, k: int, mod: Module) -> SparseMatrix:
    out = mod.identity()
    for _ in range(k):
        out = out @ m
    return out


def _qbinom(m: int, k: int, L: int, d: int = 1) -> Scalar:
    num = Scalar.one(L)
    for t in range(k):
        num = num * qint(m - t, L, d) / qint(t + 1, L, d)
    return num


@dataclass(frozen=True, eq=False)
class Intertwiner:
    source: Module
    target: Module
    matrix: SparseMatrix

    def commutes(self) -> bool:
        m = self.matrix
        s, t = self.source, self.target
        for i in s.datum.nodes:
            if m @ s.E[i] != t.E[i] @ m or m @ s.F[i] != t.F[i] @ m:
                return False
        return all(
            s.weights[c] == t.weights[r] for r, c, _ in m.entries()
        )


# ---------------------------------------------------------------------------
# constructions


def trivial(d: RootDatum) -> Module:
    z = SparseMatrix.zeros(1, 1, d.L)
    return Module(d, (d.zero,), (z,) * d.rank, (z,) * d.rank, ("trivial",), highest_weight=d.zero, words=((),))


def fundamental(d: RootDatum, k: int) -> Module:
    """Wedge power realization of the k-th fundamental module (type A only)."""
    if d.kind != "A":
        raise ModuleError(f"explicit fundamental modules are only available in type A, not {d.name}")
    if not 0 <= k < d.rank:
        raise ModuleError(f"node {k} out of range for {d.name}")
    n = d.rank + 1
    subsets = list(itertools.combinations(range(n), k + 1))
    index = {s: t for t, s in enumerate(subsets)}

    def eps(j):
        return tuple((1 if i == j else 0) - (1 if i == j - 1 else 0) for i in d.nodes)

    weights = tuple(tuple(map(sum, zip(*(eps(j) for j in s)))) for s in subsets)
    one = Scalar.one(d.L)
    E, F = [], []
    for i in d.nodes:
        e_rows: dict = {}
        f_rows: dict = {}
        for s in subsets:
            if i + 1 in s and i not in s:
                t = tuple(sorted((set(s) - {i + 1}) | {i}))
                e_rows.setdefault(index[t], {})[index[s]] = one
            if i in s and i + 1 not in s:
                t = tuple(sorted((set(s) - {i}) | {i + 1}))
                f_rows.setdefault(index[t], {})[index[s]] = one
        E.append(SparseMatrix(len(subsets), len(subsets), e_rows, d.L))
        F.append(SparseMatrix(len(subsets), len(subsets), f_rows, d.L))
    return Module(d, weights, tuple(E), tuple(F), ("fundamental", k), highest_weight=d.fundamental(k))


def tensor(M: Module, N: Module) -> Module:
    if M.datum is not N.datum and M.datum != N.datum:
        raise ModuleError("tensor factors have different root data")
    d = M.datum
    weights = tuple(d.add(a, b) for a in M.weights for b in N.weights)
    E, F = [], []
    for i in d.nodes:
        E.append(M.E[i].kron(N.K(i)) + M.identity().kron(N.E[i]))
        F.append(M.F[i].kron(N.identity()) + M.K(i, -1).kron(N.F[i]))
    return Module(d, weights, tuple(E), tuple(F), ("tensor", M.label, N.label), factors=(M, N))


def tensor_many(mods: Sequence[Module]) -> Module:
    if not mods:
        raise ModuleError("empty tensor product")
    out = mods[0]
    for m in mods[1:]:
        out = tensor(out, m)
    return out


def dual(M: Module, side: str = "left") -> Module:
    """Left dual: x acts by S(x)^T.  Right dual: by S^{-1}(x)^T."""
    d = M.datum
    weights = tuple(d.neg(w) for w in M.weights)
    E, F = [], []
    for i in d.nodes:
        if side == "left":
            e = -(M.K(i, -1) @ M.E[i].transpose())
            f = -(M.F[i].transpose() @ M.K(i))
        elif side == "right":
            e = -(M.E[i].transpose() @ M.K(i, -1))
            f = -(M.K(i) @ M.F[i].transpose())
        else:
            raise ModuleError(f"unknown dual side {side!r}")
        E.append(e)
        F.append(f)
    if M.label == ("trivial",):
        return trivial(d)
    # ({}^*V)^* = V on the nose
    if side == "left" and M.label[0] == "dual" and M.label[2] == "right":
        inner_label = M.label[1]
    elif side == "right" and M.label[0] == "dual" and M.label[2] == "left":
        inner_label = M.label[1]
    else:
        inner_label = None
    label = inner_label if inner_label is not None else ("dual", M.label, side)
    return Module(d, weights, tuple(E), tuple(F), label)


def twist(M: Module) -> Module:
    """M with the action pulled back along E_i -> -F_theta(i), F_i -> -E_theta(i)."""
    d = M.datum
    theta = d.theta
    E = tuple(-M.F[theta[i]] for i in d.nodes)
    F = tuple(-M.E[theta[i]] for i in d.nodes)
    return Module(d, tuple(d.w0(w) for w in M.weights), E, F, ("twist", M.label))


def apply_word(M: Module, word: Sequence[int], vec: Vector, generator: str = "F") -> Vector:
    mats = M.F if generator == "F" else M.E
    for i in word:
        vec = mats[i].apply(vec)
        if not vec:
            break
    return vec


# ---------------------------------------------------------------------------
# irreducibles

_IRREP_LOCK = threading.Lock()
_IRREP_MEMO: dict = {}
_CACHE_VERSION = "1"


def _cache_path(d: RootDatum, lam: Weight):
    root = os.environ.get("HALFRIB_CACHE_DIR")
    if not root:
        return None
    key = json.dumps({"v": _CACHE_VERSION, "type": d.name, "weight": list(lam)}, sort_keys=True)
    digest = hashlib.sha256(key.encode()).hexdigest()[:32]
    return os.path.join(root, f"irrep-{digest}.json")


def _load_cached(d: RootDatum, lam: Weight):
    path = _cache_path(d, lam)
    if not path or not os.path.exists(path):
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        E = tuple(SparseMatrix.from_json(m) for m in data["E"])
        F = tuple(SparseMatrix.from_json(m) for m in data["F"])
        for m in E + F:
            m.L = d.L
        return Module(
            d,
            tuple(tuple(w) for w in data["weights"]),
            E,
            F,
            ("irrep", tuple(lam)),
            highest_weight=tuple(lam),
            words=tuple(tuple(w) for w in data["words"]),
        )
    except (OSError, KeyError, ValueError):
        return None


def _store_cached(mod: Module) -> None:
    path = _cache_path(mod.datum, mod.highest_weight)
    if not path:
        return
    data = mod.to_json()
    data["words"] = [list(w) for w in mod.words]
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + f".tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True)
    os.replace(tmp, path)


def irrep(d: RootDatum, lam: Weight) -> Module:
    """The irreducible module of highest weight lam (memoized per process)."""
    lam = tuple(int(x) for x in lam)
    if len(lam) != d.rank:
        raise ModuleError(f"weight {lam} has the wrong length for {d.name}")
    if not d.is_dominant(lam):
        raise ModuleError(f"weight {lam} is not dominant")
    key = (d.kind, d.rank, lam)
    mod = _IRREP_MEMO.get(key)
    if mod is not None:
        return mod
    mod = _load_cached(d, lam)
    if mod is None:
        mod = _build_irrep(d, lam)
        _store_cached(mod)
    with _IRREP_LOCK:
        return _IRREP_MEMO.setdefault(key, mod)


def _build_irrep(d: RootDatum, lam: Weight) -> Module:
    if not any(lam):
        return trivial(d)
    factors = [fundamental(d, i) for i in d.nodes for _ in range(lam[i])]
    amb = tensor_many(factors)
    top = amb.basis_vector(0)
    assert amb.weights[0] == lam
    vecs, words, wts = _generate(amb, top, lam)
    expected = d.weyl_dimension(lam)
    if len(vecs) != expected:
        raise AssertionError(f"irrep {lam} of {d.name}: built dim {len(vecs)}, Weyl dimension {expected}")
    E, F = _restricted_action(amb, vecs, wts)
    return Module(d, tuple(wts), E, F, ("irrep", lam), highest_weight=lam, words=tuple(words))


def _generate(amb: Module, top: Vector, lam: Weight):
    """Breadth-first F-orbit of ``top`` with exact independence checks."""
    d = amb.datum
    spaces: dict = {lam: EchelonBasis(amb.L)}
    spaces[lam].add(top)
    vecs, words, wts = [top], [()], [lam]
    level = [0]
    while level:
        nxt = []
        for k in level:
            for i in d.nodes:
                w = amb.F[i].apply(vecs[k])
                if not w:
                    continue
                mu = d.sub(wts[k], d.simple_root(i))
                space = spaces.setdefault(mu, EchelonBasis(amb.L))
                if space.add(w):
                    vecs.append(w)
                    words.append(words[k] + (i,))
                    wts.append(mu)
                    nxt.append(len(vecs) - 1)
        level = nxt
    return vecs, words, wts


def _restricted_action(amb: Module, vecs: list, wts: list):
    d = amb.datum
    n = len(vecs)
    spaces: dict = {}
    members: dict = {}
    for k, (v, mu) in enumerate(zip(vecs, wts)):
        spaces.setdefault(mu, EchelonBasis(amb.L)).add(v)
        members.setdefault(mu, []).append(k)
    E, F = [], []
    for i in d.nodes:
        a = d.simple_root(i)
        for mats, out, sign in ((amb.E, E, 1), (amb.F, F, -1)):
            rows: dict = {}
            for k, v in enumerate(vecs):
                img = mats[i].apply(v)
                if not img:
                    continue
                mu = tuple(x + sign * y for x, y in zip(wts[k], a))
                if mu not in spaces:
                    raise AssertionError("generated span is not stable under the action")
                coords = spaces[mu].coordinates(img)
                for t, c in coords.items():
                    rows.setdefault(members[mu][t], {})[k] = c
            out.append(SparseMatrix(n, n, rows, amb.L))
    return tuple(E), tuple(F)


# ---------------------------------------------------------------------------
# singular vectors, Hom spaces, decompositions


def singular_vectors(M: Module) -> list[tuple[Weight, Vector]]:
    """Basis of the joint kernel of the E_i, weight space by weight space."""
    d = M.datum
    out = []
    for mu in M.distinct_weights():
        cols = M.weight_space(mu)
        rows = []
        for i in d.nodes:
            target = d.add(mu, d.simple_root(i))
            for r in M.weight_space(target):
                row = M.E[i].rows.get(r)
                if row:
                    rows.append(row)
        for vec in kernel(rows, M.dim, M.L, cols):
            out.append((mu, vec))
    return out


def hom_space(M: Module, N: Module) -> list[Intertwiner]:
    """Basis of the intertwiners M -> N."""
    if M.datum != N.datum:
        raise ModuleError("Hom between modules over different root data")
    d = M.datum
    unknowns: dict = {}
    for mu in M.distinct_weights():
        for c in M.weight_space(mu):
            for r in N.weight_space(mu):
                unknowns[(r, c)] = len(unknowns)
    if not unknowns:
        return []
    one = Scalar.one(M.L)
    equations = []
    for i in d.nodes:
        for Mm, Nm in ((M.E[i], N.E[i]), (M.F[i], N.F[i])):
            eqs: dict = {}
            # (Phi Mm)[r, c] - (Nm Phi)[r, c] = 0
            for (r, k), u in unknowns.items():
                for c, x in Mm.rows.get(k, {}).items():
                    vec_axpy(eqs.setdefault((r, c), {}), x, {u: one})
            nt = Nm.transpose()
            for (k, c), u in unknowns.items():
                for r, x in nt.rows.get(k, {}).items():
                    vec_axpy(eqs.setdefault((r, c), {}), -x, {u: one})
            equations.extend(e for e in eqs.values() if e)
    sols = kernel(equations, len(unknowns), M.L)
    inv = {u: rc for rc, u in unknowns.items()}
    out = []
    for s in sols:
        rows: dict = {}
        for u, x in s.items():
            r, c = inv[u]
            rows.setdefault(r, {})[c] = x
        out.append(Intertwiner(M, N, SparseMatrix(N.dim, M.dim, rows, M.L)))
    return out


@dataclass(frozen=True, eq=False)
class Summand:
    """An embedded copy of irrep(weight) inside a module, as matrix columns."""

    weight: Weight
    embedding: SparseMatrix  # M.dim x irrep.dim, a module map


def decompose(M: Module) -> list[Summand]:
    """Split M into highest-weight summands generated by its singular vectors."""
    d = M.datum
    out = []
    total = 0
    for mu, s in singular_vectors(M):
        if not d.is_dominant(mu):
            raise AssertionError(f"singular vector of non-dominant weight {mu}")
        V = irrep(d, mu)
        cols = [apply_word(M, w, s) for w in V.words]
        out.append(Summand(mu, SparseMatrix.from_columns(M.dim, cols, M.L)))
        total += V.dim
    if total != M.dim:
        raise AssertionError(f"summands cover {total} of {M.dim} dimensions")
    return out


def change_of_basis(M: Module, summands: list[Summand]) -> SparseMatrix:
    """Columns: all summand embeddings side by side (invertible)."""
    cols = []
    for s in summands:
        cols.extend(s.embedding.columns())
    return SparseMatrix.from_columns(M.dim, cols, M.L)


def block_operator(M: Module, summands: list[Summand], blocks: list[SparseMatrix]) -> SparseMatrix:
    """The operator acting on each summand by the given irrep matrices."""
    P = change_of_basis(M, summands)
    n = M.dim
    rows: dict = {}
    off = 0
    for blk in blocks:
        for r, c, x in blk.entries():
            rows.setdefault(off + r, {})[off + c] = x
        off += blk.nrows
    B = SparseMatrix(n, n, rows, M.L)
    return P @ B @ P.inverse()


def scalar_on_summands(M: Module, fn) -> SparseMatrix:
    """Operator acting on the summand of highest weight nu by the scalar fn(nu)."""
    summands = decompose(M)
    blocks = [SparseMatrix.identity(s.embedding.ncols, M.L).scale(fn(s.weight)) for s in summands]
    return block_operator(M, summands, blocks)


def reorder(M: Module, perm: list[int], label=None) -> Module:
    """Module with basis vector j of M becoming basis vector perm[j]."""
    P = SparseMatrix.permutation(perm, M.L)
    Pi = P.transpose()
    weights = [None] * M.dim
    for j, p in enumerate(perm):
        weights[p] = M.weights[j]
    return Module(
        M.datum,
        tuple(weights),
        tuple(P @ e @ Pi for e in M.E),
        tuple(P @ f @ Pi for f in M.F),
        label if label is not None else M.label,
    )
