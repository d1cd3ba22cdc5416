"""Temperley-Lieb diagrams and a Kauffman bracket state sum, used as an
independent oracle for the sl2 link invariants of the tangle functor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import Scalar, q_power
from .tangles import Diagram, DiagramError

__all__ = [
    "PlanarDiagram",
    "SkeinElement",
    "tl_compose",
    "loop_value",
    "kauffman_bracket",
    "kauffman_bracket_by_composition",
    "differential_test",
    "MAX_CROSSINGS",
]

MAX_CROSSINGS = 16
L_SKEIN = 4  # q = v^4, so A = q^{1/2} = v^2 is available


def loop_value(L: int = L_SKEIN) -> Scalar:
    q = q_power(1, L)
    return -q - q.inverse()


@dataclass(frozen=True)
class PlanarDiagram:
    """A non-crossing perfect matching of n_bottom + n_top boundary points.

    Points 0..n_bottom-1 sit on the bottom edge left to right, points
    n_bottom..n_bottom+n_top-1 on the top edge left to right.
    """

    n_bottom: int
    n_top: int
    match: tuple
    loops: int = 0

    def __post_init__(self):
        n = self.n_bottom + self.n_top
        if len(self.match) != n or n % 2:
            raise ValueError("matching has the wrong size")
        for p, r in enumerate(self.match):
            if self.match[r] != p or r == p:
                raise ValueError("not a perfect matching")
        # around the boundary: bottom left to right, then top right to left
        pos = {p: p for p in range(self.n_bottom)}
        for k in range(self.n_top):
            pos[self.n_bottom + k] = n - 1 - k
        for p, r in enumerate(self.match):
            a, b = sorted((pos[p], pos[r]))
            for p2, r2 in enumerate(self.match):
                c, d = sorted((pos[p2], pos[r2]))
                if a < c < b < d:
                    raise ValueError("matching is not planar")

    @classmethod
    def identity(cls, n: int) -> "PlanarDiagram":
        return cls(n, n, tuple(list(range(n, 2 * n)) + list(range(n))))

    @classmethod
    def cap(cls, n: int, i: int) -> "PlanarDiagram":
        """n bottom points to n-2 top points, joining bottom i and i+1."""
        m = [0] * (2 * n - 2)
        top = n
        for p in range(n):
            if p == i:
                m[p], m[p + 1] = p + 1, p
            elif p == i + 1:
                continue
            else:
                t = top + (p if p < i else p - 2)
                m[p], m[t] = t, p
        return cls(n, n - 2, tuple(m))

    @classmethod
    def cup(cls, n: int, i: int) -> "PlanarDiagram":
        """n bottom points to n+2 top points, a new arc at top i, i+1."""
        return _cup(n, i)

    @classmethod
    def e(cls, n: int, i: int) -> "PlanarDiagram":
        return _compose_raw(cls.cap(n, i), cls.cup(n - 2, i))

    def without_loops(self) -> "PlanarDiagram":
        return PlanarDiagram(self.n_bottom, self.n_top, self.match, 0)

    def rotate180(self) -> "PlanarDiagram":
        """Rotate the picture by a half turn: bottom becomes top, left becomes right."""
        nb, nt = self.n_bottom, self.n_top
        # new bottom k  <- old top (nt-1-k); new top k <- old bottom (nb-1-k)
        old_to_new = {}
        for k in range(nt):
            old_to_new[nb + (nt - 1 - k)] = k
        for k in range(nb):
            old_to_new[nb - 1 - k] = nt + k
        m = [0] * (nb + nt)
        for p, r in enumerate(self.match):
            m[old_to_new[p]] = old_to_new[r]
        return PlanarDiagram(nt, nb, tuple(m), self.loops)


def _cup(n: int, i: int) -> PlanarDiagram:
    m = [0] * (2 * n + 2)
    top = n
    m[top + i], m[top + i + 1] = top + i + 1, top + i
    for p in range(n):
        t = top + (p if p < i else p + 2)
        m[p], m[t] = t, p
    return PlanarDiagram(n, n + 2, tuple(m))


def _compose_raw(lower: PlanarDiagram, upper: PlanarDiagram) -> PlanarDiagram:
    """upper stacked on lower; closed loops are counted in ``loops``."""
    if lower.n_top != upper.n_bottom:
        raise ValueError(f"width mismatch: {lower.n_top} vs {upper.n_bottom}")
    nb, k, nt = lower.n_bottom, lower.n_top, upper.n_top
    # outer points: lower bottom 0..nb-1 -> new 0..nb-1, upper top -> new nb..
    def walk(side, p):
        # side 'L' point p of lower, or 'U' point p of upper; follow until an outer point
        while True:
            if side == "L":
                r = lower.match[p]
                if r < nb:
                    return ("L", r)
                side, p = "U", r - nb  # middle point j = r - nb is upper bottom j
            else:
                r = upper.match[p]
                if r >= k:
                    return ("U", r)
                side, p = "L", nb + r

    def new_index(pt):
        side, p = pt
        return p if side == "L" else nb + (p - k)

    m = [0] * (nb + nt)
    for p in range(nb):
        m[p] = new_index(walk("L", p))
    for p in range(k, k + nt):
        m[nb + p - k] = new_index(walk("U", p))
    # loops: middle points not reached from outside
    seen = set()
    for p in range(nb):
        _mark(lower, upper, "L", p, seen, nb, k)
    for p in range(k, k + nt):
        _mark(lower, upper, "U", p, seen, nb, k)
    loops = 0
    for j in range(k):
        if j in seen:
            continue
        loops += 1
        # traverse the loop through middle point j
        start = j
        cur = j
        while True:
            seen.add(cur)
            r = upper.match[cur]  # upper bottom point cur -> partner (must be bottom)
            seen.add(r)
            nxt = lower.match[nb + r] - nb
            if nxt == start:
                break
            cur = nxt
    return PlanarDiagram(nb, nt, tuple(m), lower.loops + upper.loops + loops)


def _mark(lower, upper, side, p, seen, nb, k):
    while True:
        if side == "L":
            r = lower.match[p]
            if r < nb:
                return
            seen.add(r - nb)
            side, p = "U", r - nb
        else:
            r = upper.match[p]
            if r >= k:
                return
            seen.add(r)
            side, p = "L", nb + r


class SkeinElement:
    """A formal combination of loop-free planar diagrams with scalar coefficients."""

    def __init__(self, terms: Mapping[PlanarDiagram, Scalar] | None = None, L: int = L_SKEIN):
        self.L = L
        self.terms: dict = {}
        delta = loop_value(L)
        for p, c in (terms or {}).items():
            if p.loops:
                c = c * delta ** p.loops
                p = p.without_loops()
            self._add(p, c)

    def _add(self, p, c):
        x = self.terms.get(p)
        x = c if x is None else x + c
        if x:
            self.terms[p] = x
        else:
            self.terms.pop(p, None)

    @classmethod
    def of(cls, p: PlanarDiagram, c: Scalar | None = None, L: int = L_SKEIN) -> "SkeinElement":
        return cls({p: c if c is not None else Scalar.one(L)}, L)

    def __add__(self, other: "SkeinElement") -> "SkeinElement":
        out = SkeinElement(self.terms, self.L)
        for p, c in other.terms.items():
            out._add(p, c)
        return out

    def scale(self, c: Scalar) -> "SkeinElement":
        return SkeinElement({p: x * c for p, x in self.terms.items()}, self.L)

    def __eq__(self, other):
        if not isinstance(other, SkeinElement):
            return NotImplemented
        return self.terms.keys() == other.terms.keys() and all(self.terms[p] == other.terms[p] for p in self.terms)

    __hash__ = None

    def scalar(self) -> Scalar:
        """The coefficient of the empty diagram (for width-0 elements)."""
        empty = PlanarDiagram(0, 0, ())
        return self.terms.get(empty, Scalar.zero(self.L))

    def __repr__(self):
        return f"SkeinElement({len(self.terms)} terms)"


def tl_compose(lower: SkeinElement, upper: SkeinElement) -> SkeinElement:
    """``upper`` stacked on ``lower``, closed loops replaced by -q - q^-1."""
    out: dict = {}
    for p1, c1 in lower.terms.items():
        for p2, c2 in upper.terms.items():
            p = _compose_raw(p1, p2)
            c = c1 * c2
            out[p] = out[p] + c if p in out else c
    return SkeinElement(out, lower.L)


# ---------------------------------------------------------------------------
# the bracket


def _tl_slices(d: Diagram):
    """The diagram as unoriented TL steps; crossings kept as ('x', sign, i)."""
    if not d.is_closed:
        raise DiagramError("the bracket needs a closed diagram")
    steps = []
    for s in d.slices:
        if s.kind in ("h+", "h-"):
            raise DiagramError("the bracket takes crossings only, not half-twists")
        if s.kind == "id":
            continue
        if s.kind in ("x+", "x-"):
            steps.append(("x", 1 if s.kind == "x+" else -1, s.pos))
        else:
            steps.append((s.kind, 0, s.pos))
    return steps


def _smoothing_coeffs(A: Scalar, sign: int):
    """(coefficient of the vertical smoothing, coefficient of the cap-cup smoothing)."""
    Ai = A.inverse()
    return (A, Ai) if sign > 0 else (Ai, A)


def kauffman_bracket(d: Diagram, A: Scalar | None = None) -> Scalar:
    """Exhaustive state sum over all 2^c smoothings; loops count -A^2 - A^-2."""
    A = A if A is not None else q_power(Fraction(1, 2), L_SKEIN)
    steps = _tl_slices(d)
    crossings = [k for k, s in enumerate(steps) if s[0] == "x"]
    if len(crossings) > MAX_CROSSINGS:
        raise DiagramError(f"{len(crossings)} crossings exceed the state-sum cap of {MAX_CROSSINGS}")
    delta = -(A * A) - (A * A).inverse()
    total = Scalar.zero(A.L)
    for state in itertools.product((0, 1), repeat=len(crossings)):
        choice = dict(zip(crossings, state))
        coeff = Scalar.one(A.L)
        for k in crossings:
            pair = _smoothing_coeffs(A, steps[k][1])
            coeff = coeff * pair[choice[k]]
        loops = _count_loops(steps, choice)
        total = total + coeff * delta ** loops
    return total


def _count_loops(steps, choice) -> int:
    parent: list[int] = []

    def new():
        parent.append(len(parent))
        return len(parent) - 1

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def join(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    ids: list[int] = []
    for k, (kind, _, i) in enumerate(steps):
        if kind == "cup":
            c = new()
            ids = ids[:i] + [c, c] + ids[i:]
        elif kind == "cap":
            join(ids[i], ids[i + 1])
            ids = ids[:i] + ids[i + 2:]
        elif choice[k] == 1:
            # cap-cup smoothing
            join(ids[i], ids[i + 1])
            c = new()
            ids = ids[:i] + [c, c] + ids[i + 2:]
        # vertical smoothing: strands pass straight through
    return len({find(x) for x in range(len(parent))})


def kauffman_bracket_by_composition(d: Diagram, A: Scalar | None = None) -> Scalar:
    """Same bracket computed by stacking TL elements slice by slice."""
    A = A if A is not None else q_power(Fraction(1, 2), L_SKEIN)
    L = A.L
    steps = _tl_slices(d)
    state = SkeinElement.of(PlanarDiagram(0, 0, ()), L=L)
    width = 0
    delta = -(A * A) - (A * A).inverse()
    for kind, sign, i in steps:
        if kind == "cup":
            step = SkeinElement.of(PlanarDiagram.cup(width, i), L=L)
            width += 2
        elif kind == "cap":
            step = SkeinElement.of(PlanarDiagram.cap(width, i), L=L)
            width -= 2
        else:
            a, b = _smoothing_coeffs(A, sign)
            step = SkeinElement.of(PlanarDiagram.identity(width), a, L) + SkeinElement.of(PlanarDiagram.e(width, i), b, L)
        state = _tl_compose_delta(state, step, delta)
    return state.scalar()


def _tl_compose_delta(lower: SkeinElement, upper: SkeinElement, delta: Scalar) -> SkeinElement:
    out = SkeinElement(L=lower.L)
    for p1, c1 in lower.terms.items():
        for p2, c2 in upper.terms.items():
            p = _compose_raw(p1, p2)
            out._add(p.without_loops(), c1 * c2 * delta ** p.loops)
    return out


def fs_point() -> int:
    """FS indicator of the single point in TL with the trivial pivotal structure.

    The cup is the self-duality of the point; rotating it by a half turn gives
    the dual map, and the indicator is the sign relating the two.
    """
    cup = PlanarDiagram.cup(0, 0)
    rotated = PlanarDiagram.cap(2, 0).rotate180()
    ident = PlanarDiagram.identity(1)
    if rotated == cup and ident.rotate180() == ident:
        return 1
    return -1


# ---------------------------------------------------------------------------
# differential test against the functor


@dataclass
class Calibration:
    mode: str
    candidates: list  # (A, kappa, overall) triples reproducing every calibration link
    classes: list  # candidates grouped by identical predictions
    determined: bool
    notes: list

    def predict(self, d: Diagram, cls: int = 0) -> Scalar:
        A, kappa, overall = self.classes[cls][0]
        return _model(self.mode, d, A, kappa, overall)


def _model(mode: str, d: Diagram, A: Scalar, kappa: Scalar, overall: Scalar) -> Scalar:
    from .tangles import writhe

    w = writhe(d)
    b = kauffman_bracket(d, A)
    if mode == "framed":
        return overall * kappa ** w * b
    return overall * (-(A ** 3)) ** (-w) * b


def _equivalent(mode, c1, c2) -> bool:
    A1, k1, o1 = c1
    A2, k2, o2 = c2
    if o1 != o2:
        return False
    if mode == "normalized":
        # the sign of A cancels between the bracket and the writhe factor
        return A1 == A2 or A1 == -A2
    return (A1 == A2 and k1 == k2) or (A1 == -A2 and k1 == -k2)


def calibrate(pairs: Sequence[tuple], mode: str = "normalized", A_options: Iterable[Scalar] | None = None) -> Calibration:
    """Fit the bracket to functor values on calibration links.

    ``pairs`` holds (diagram, functor value, writhe).  In "framed" mode the
    functor value is unnormalized and the model is overall * kappa^w * <L>_A.
    In "normalized" mode it is the writhe-normalized invariant and the model is
    overall * (-A^3)^-w * <L>_A.  A ranges over square roots of q.
    """
    if mode not in ("framed", "normalized"):
        raise ValueError(f"unknown calibration mode {mode!r}")
    L = L_SKEIN
    if A_options is None:
        h = q_power(Fraction(1, 2), L)
        A_options = [h, -h]
    cands = []
    for A in A_options:
        brackets = [kauffman_bracket(d, A) for d, _, _ in pairs]
        ref = next(((f, b) for (_, f, w), b in zip(pairs, brackets) if w == 0 and b), None)
        if ref is None:
            continue
        overall = ref[0] / ref[1]
        kappas = _kappa_candidates(pairs, brackets, overall, L) if mode == "framed" else [-(A ** 3)]
        for k in kappas:
            if mode == "normalized":
                ok = all(overall * (-(A ** 3)) ** (-w) * b == f for (_, f, w), b in zip(pairs, brackets))
            else:
                ok = all(overall * k ** w * b == f for (_, f, w), b in zip(pairs, brackets))
            if ok:
                cands.append((A, k, overall))
    classes: list = []
    for c in cands:
        for cl in classes:
            if _equivalent(mode, cl[0], c):
                cl.append(c)
                break
        else:
            classes.append([c])
    notes = []
    if not cands:
        notes.append("no (A, kappa) reproduces the calibration links")
    elif len(classes) > 1:
        notes.append(f"calibration underdetermined: {len(classes)} inequivalent (A, kappa) classes survive")
    return Calibration(mode, cands, classes, len(classes) == 1, notes)


def _kappa_candidates(pairs, brackets, overall, L):
    """Monomials +-v^e with kappa^w matching the first writhed calibration link."""
    from .scalars import v_power

    constraints = [(f, w, b) for (_, f, w), b in zip(pairs, brackets) if w != 0 and b]
    if not constraints:
        return [Scalar.one(L)]
    f, w, b = constraints[0]
    ratio = f / (b * overall)
    mono = ratio.monomial_terms()
    if mono is None or mono[0] % w:
        return []
    base = v_power(mono[0] // w, L)
    return [k for k in (base, -base) if k ** w == ratio]


def differential_test(
    calibration_links: Sequence[tuple],
    held_out: Sequence[tuple],
    functor_value,
    mode: str = "normalized",
) -> dict:
    """Calibrate on named links, then demand exact agreement on held-out ones.

    Each link is (name, Diagram).  ``functor_value(diagram, normalize)`` gives
    the functor value under X^-2, writhe-normalized when ``normalize`` is true.
    """
    from .tangles import writhe

    norm = mode == "normalized"
    pairs = [(d, functor_value(d, norm), writhe(d)) for _, d in calibration_links]
    cal = calibrate(pairs, mode)
    report = {
        "mode": mode,
        "calibration": [name for name, _ in calibration_links],
        "candidates": [{"A": A.to_text(), "kappa": k.to_text(), "overall": o.to_text()} for A, k, o in cal.candidates],
        "equivalence_classes": len(cal.classes),
        "determined": cal.determined,
        "notes": list(cal.notes),
        "held_out": {},
        "all_match": False,
    }
    if not cal.determined:
        return report
    for name, d in held_out:
        f = functor_value(d, norm)
        b = cal.predict(d)
        report["held_out"][name] = {"functor": f.to_text(), "bracket": b.to_text(), "match": b == f}
    report["all_match"] = all(r["match"] for r in report["held_out"].values())
    return report
