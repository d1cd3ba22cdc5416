"""Cartan data, weights and characters of P/Q for finite simple types.

Weights are integer vectors in the fundamental-weight basis.  Nodes are
0-based throughout.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, lcm

from .scalars import GaussianRational, Scalar, coefficient, q_power

__all__ = ["RootDatum", "Weight", "Character", "build_root_datum", "form", "order2_characters"]


class RootDatumError(ValueError):
    pass


Weight = tuple  # tuple[int, ...] in fundamental-weight coordinates


def _cartan(kind: str, rank: int) -> list[list[int]]:
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    chain = lambda: [(i, i + 1) for i in range(rank - 1)]
    if kind == "A" and rank >= 1:
        edges = chain()
    elif kind in "BC" and rank >= 2:
        edges = chain()
    elif kind == "D" and rank >= 4:
        edges = [(i, i + 1) for i in range(rank - 2)] + [(rank - 3, rank - 1)]
    elif kind == "G" and rank == 2:
        edges = [(0, 1)]
    else:
        raise RootDatumError(f"unsupported or non-finite type {kind}{rank}")
    for i, j in edges:
        a[i][j] = a[j][i] = -1
    # a[i][j] = <alpha_i^vee, alpha_j>, Bourbaki numbering
    if kind == "B":
        a[rank - 1][rank - 2] = -2
    elif kind == "C":
        a[rank - 2][rank - 1] = -2
    elif kind == "G":
        a[0][1] = -3
    return a


def _symmetrizer(a: list[list[int]]) -> list[int]:
    n = len(a)
    d = [Fraction(0)] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if a[i][j] and not d[j]:
                # d_i a_ij = d_j a_ji
                d[j] = d[i] * a[i][j] / a[j][i]
                stack.append(j)
    scale = lcm(*(x.denominator for x in d))
    d = [x * scale for x in d]
    g = 0
    for x in d:
        g = gcd(g, int(x))
    return [int(x) // g for x in d]


def _inverse(a: list[list[int]]) -> list[list[Fraction]]:
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col])
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _smith_invariants(a: list[list[int]]) -> tuple[int, ...]:
    """Nontrivial invariant factors of the integer matrix a."""
    m = [row[:] for row in a]
    n = len(m)
    out = []
    for t in range(n):
        while True:
            entries = [(abs(m[i][j]), i, j) for i in range(t, n) for j in range(t, n) if m[i][j]]
            if not entries:
                return tuple(x for x in out if x != 1)
            _, pi, pj = min(entries)
            m[t], m[pi] = m[pi], m[t]
            for row in m:
                row[t], row[pj] = row[pj], row[t]
            p = m[t][t]
            done = True
            for i in range(t + 1, n):
                f = m[i][t] // p
                m[i] = [x - f * y for x, y in zip(m[i], m[t])]
                if m[i][t]:
                    done = False
            for j in range(t + 1, n):
                f = m[t][j] // p
                for row in m:
                    row[j] -= f * row[t]
                if m[t][j]:
                    done = False
            if done:
                bad = [(i, j) for i in range(t + 1, n) for j in range(t + 1, n) if m[i][j] % p]
                if not bad:
                    out.append(abs(p))
                    break
                i, _ = bad[0]
                m[t] = [x + y for x, y in zip(m[t], m[i])]
    return tuple(x for x in out if x != 1)


@dataclass(frozen=True)
class RootDatum:
    kind: str
    rank: int
    cartan: tuple
    d: tuple
    fw_form: tuple  # (omega_i, omega_j) as Fractions
    longest_word: tuple
    theta: tuple
    pq: tuple  # invariant factors of P/Q
    L: int
    fw_in_roots: tuple = field(repr=False)  # omega_i = sum_k fw_in_roots[i][k] alpha_k

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def nodes(self) -> range:
        return range(self.rank)

    # -- lattice data -------------------------------------------------------
    def simple_root(self, i: int) -> Weight:
        # alpha_i = sum_j <alpha_j^vee, alpha_i> omega_j
        return tuple(self.cartan[j][i] for j in self.nodes)

    def fundamental(self, i: int) -> Weight:
        return tuple(int(j == i) for j in self.nodes)

    @property
    def rho(self) -> Weight:
        return (1,) * self.rank

    @property
    def zero(self) -> Weight:
        return (0,) * self.rank

    def add(self, a: Weight, b: Weight) -> Weight:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Weight, b: Weight) -> Weight:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: Weight) -> Weight:
        return tuple(-x for x in a)

    def is_dominant(self, lam: Weight) -> bool:
        return all(x >= 0 for x in lam)

    def rho_check_pairing(self, lam: Weight) -> Fraction:
        """<lambda, rho^vee>; rho^vee pairs to 1 with every simple root."""
        return sum((Fraction(lam[i]) * sum(self.fw_in_roots[i]) for i in self.nodes), Fraction(0))

    def two_rho_check(self, lam: Weight) -> int:
        x = 2 * self.rho_check_pairing(lam)
        assert x.denominator == 1
        return int(x)

    @property
    def rho_check_pairings(self) -> tuple:
        return tuple(self.rho_check_pairing(self.fundamental(i)) for i in self.nodes)

    def reflect(self, i: int, lam: Weight) -> Weight:
        a = self.simple_root(i)
        return tuple(x - lam[i] * y for x, y in zip(lam, a))

    def apply_word(self, word, lam: Weight) -> Weight:
        for i in reversed(word):
            lam = self.reflect(i, lam)
        return lam

    def w0(self, lam: Weight) -> Weight:
        return self.apply_word(self.longest_word, lam)

    def theta_weight(self, lam: Weight) -> Weight:
        out = [0] * self.rank
        for i in self.nodes:
            out[self.theta[i]] = lam[i]
        return tuple(out)

    def pq_class(self, lam: Weight) -> tuple:
        """Coordinates of lambda in P/Q for type A (a single residue mod n+1)."""
        if self.kind == "A":
            n = self.rank + 1
            return (sum((i + 1) * x for i, x in enumerate(lam)) % n,)
        raise NotImplementedError("P/Q coordinates are only tabulated for type A")

    def in_root_lattice(self, lam: Weight) -> bool:
        return all(
            sum(Fraction(lam[i]) * self.fw_in_roots[i][k] for i in self.nodes).denominator == 1
            for k in self.nodes
        )

    # -- roots ---------------------------------------------------------------
    @cached_property
    def positive_roots(self) -> tuple:
        """Positive roots in simple-root coordinates."""
        simple = [tuple(int(k == i) for k in self.nodes) for i in self.nodes]
        seen = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for beta in frontier:
                lam = self.root_to_weight(beta)
                for i in self.nodes:
                    gamma = tuple(b - (lam[i] if k == i else 0) for k, b in enumerate(beta))
                    if all(x >= 0 for x in gamma) and any(gamma) and gamma not in seen:
                        seen.add(gamma)
                        nxt.append(gamma)
            frontier = nxt
        return tuple(sorted(seen, key=lambda r: (sum(r), r)))

    def root_to_weight(self, beta) -> Weight:
        out = [0] * self.rank
        for k, c in enumerate(beta):
            if c:
                a = self.simple_root(k)
                for j in self.nodes:
                    out[j] += c * a[j]
        return tuple(out)

    # -- form and q-exponents -------------------------------------------------
    def form(self, lam: Weight, mu: Weight) -> Fraction:
        return sum(
            (Fraction(lam[i] * mu[j]) * self.fw_form[i][j] for i in self.nodes for j in self.nodes if lam[i] and mu[j]),
            Fraction(0),
        )

    def j_exponent(self, lam: Weight) -> Fraction:
        """(lambda, lambda)/2 + (lambda, rho)."""
        return self.form(lam, lam) / 2 + self.form(lam, self.rho)

    def casimir_exponent(self, lam: Weight) -> Fraction:
        """(lambda, lambda) + 2(lambda, rho)."""
        return 2 * self.j_exponent(lam)

    def q(self, r) -> Scalar:
        return q_power(r, self.L)

    def weyl_dimension(self, lam: Weight) -> int:
        num = Fraction(1)
        lr = self.add(lam, self.rho)
        for beta in self.positive_roots:
            b = self.root_to_weight(beta)
            num *= self.form(lr, b) / self.form(self.rho, b)
        assert num.denominator == 1
        return int(num)

    # -- serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        frac = lambda x: [x.numerator, x.denominator]
        return {
            "type": self.kind,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "d": list(self.d),
            "fw_form": [[frac(x) for x in r] for r in self.fw_form],
            "rho": list(self.rho),
            "rho_check_pairings": [frac(x) for x in self.rho_check_pairings],
            "longest_word": list(self.longest_word),
            "theta": list(self.theta),
            "pq": list(self.pq),
            "L": self.L,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _longest_word(kind: str, rank: int, cartan) -> tuple:
    if kind == "A":
        # s_1 (s_2 s_1) (s_3 s_2 s_1) ...
        return tuple(i for k in range(rank) for i in range(k, -1, -1))
    # generic: walk rho down to -rho through simple reflections
    lam = [1] * rank
    word = []
    while True:
        i = next((i for i in range(rank) if lam[i] > 0), None)
        if i is None:
            break
        c = lam[i]
        lam = [x - c * cartan[j][i] for j, x in enumerate(lam)]
        word.append(i)
    return tuple(reversed(word))


@lru_cache(maxsize=None)
def build_root_datum(kind: str, rank: int) -> RootDatum:
    kind = kind.upper()
    cartan = _cartan(kind, rank)
    d = _symmetrizer(cartan)
    for i in range(rank):
        for j in range(rank):
            if d[i] * cartan[i][j] != d[j] * cartan[j][i]:
                raise RootDatumError("Cartan matrix is not symmetrizable")
    inv = _inverse(cartan)
    # omega_j = sum_k (A^{-1})_{kj} alpha_k ; (omega_i, omega_j) = (A^{-1})_{ji} d_j
    fw_in_roots = tuple(tuple(inv[k][j] for k in range(rank)) for j in range(rank))
    fw_form = tuple(tuple(inv[j][i] * d[j] for j in range(rank)) for i in range(rank))
    word = _longest_word(kind, rank, cartan)
    den = lcm(*(x.denominator for row in fw_form for x in row))
    L = 2 * den
    # theta from w0(alpha_i) = -alpha_theta(i)
    tmp = RootDatum(kind, rank, tuple(map(tuple, cartan)), tuple(d), fw_form, word, tuple(range(rank)), (), L, fw_in_roots)
    theta = []
    for i in range(rank):
        img = tmp.w0(tmp.simple_root(i))
        neg = tuple(-x for x in img)
        j = next((j for j in range(rank) if tmp.simple_root(j) == neg), None)
        if j is None:
            raise RootDatumError("longest word failed the w0(alpha_i) = -alpha_theta(i) check")
        theta.append(j)
    pq = _smith_invariants([list(r) for r in cartan])
    datum = RootDatum(kind, rank, tmp.cartan, tuple(d), fw_form, word, tuple(theta), pq, L, fw_in_roots)
    if len(word) != len(datum.positive_roots):
        raise RootDatumError("longest word length does not match the number of positive roots")
    return datum


def form(d: RootDatum, lam: Weight, mu: Weight) -> Fraction:
    return d.form(lam, mu)


@dataclass(frozen=True)
class Character:
    """A character of P/Q, given by its values on the fundamental weights."""

    values: tuple  # coefficients (roots of unity), one per fundamental weight

    def __call__(self, lam: Weight):
        out = coefficient(1)
        for c, k in zip(self.values, lam):
            if k:
                out = out * _cpow(c, k)
        return out

    def scalar(self, lam: Weight, L: int) -> Scalar:
        return Scalar.const(self(lam), L)

    def is_trivial(self) -> bool:
        return all(c == 1 for c in self.values)

    def order(self) -> int:
        for n in range(1, 13):
            if all(_cpow(c, n) == 1 for c in self.values):
                return n
        raise ValueError("character of unexpectedly large order")

    def __mul__(self, other: "Character") -> "Character":
        return Character(tuple(a * b for a, b in zip(self.values, other.values)))

    def __pow__(self, n: int) -> "Character":
        return Character(tuple(_cpow(c, n) for c in self.values))

    def label(self) -> str:
        def txt(c):
            if isinstance(c, GaussianRational):
                return "i" if c.im == 1 else "-i"
            return str(int(c))
        return "(" + ",".join(txt(c) for c in self.values) + ")"


def _cpow(c, n: int):
    if n < 0:
        c = 1 / c
        n = -n
    out = coefficient(1)
    for _ in range(n):
        out = out * c
    return out


def _is_character(d: RootDatum, values) -> bool:
    ch = Character(tuple(values))
    return all(ch(d.simple_root(j)) == 1 for j in d.nodes)


def order2_characters(d: RootDatum) -> list[Character]:
    """All characters of P/Q with values in {+1, -1}; the trivial one first."""
    out = []
    for signs in itertools.product((1, -1), repeat=d.rank):
        vals = tuple(coefficient(s) for s in signs)
        if _is_character(d, vals):
            out.append(Character(vals))
    return out


def gaussian_characters(d: RootDatum) -> list[Character]:
    """All characters of P/Q with values among the fourth roots of unity."""
    roots = [coefficient(1), coefficient(-1), GaussianRational(0, 1), GaussianRational(0, -1)]
    out = []
    for vals in itertools.product(roots, repeat=d.rank):
        if _is_character(d, vals):
            out.append(Character(tuple(vals)))
    return out


def rho_check_character(d: RootDatum) -> Character:
    """lambda -> (-1)^{<2 lambda, rho^vee>}, a character of P/Q of order <= 2."""
    return Character(tuple(coefficient((-1) ** d.two_rho_check(d.fundamental(i))) for i in d.nodes))
