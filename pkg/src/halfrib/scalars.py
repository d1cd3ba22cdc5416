"""Exact scalars: the field Q(i)(v) where v is a formal L-th root of q.

Every coefficient in the package lives here.  A :class:`Scalar` is a reduced
fraction of Laurent polynomials in ``v`` with Gaussian-rational coefficients.
The canonical form is

* denominator has lowest exponent 0 and leading coefficient 1,
* numerator and denominator are coprime,

so equality of canonical forms is equality of field elements (after lifting
both operands to a common root order).
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

from gmpy2 import mpq

__all__ = [
    "GaussianRational",
    "LaurentPoly",
    "Scalar",
    "ExponentError",
    "PoleError",
    "q_power",
    "v_power",
    "qint",
    "qfactorial",
    "eval_numeric",
    "field_arith",
    "coefficient",
]


class ExponentError(ValueError):
    """A rational power of q is not an integral power of v."""


class PoleError(ZeroDivisionError):
    """The denominator vanishes at the requested sample point."""


# --------------------------------------------------------------------------
# Coefficients
# --------------------------------------------------------------------------

_ZERO = mpq(0)
_ONE = mpq(1)


class GaussianRational:
    """a + b*i with rational a, b and b != 0.

    Purely real coefficients are plain ``mpq`` values; arithmetic here returns
    ``mpq`` whenever the imaginary part cancels.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = mpq(re)
        self.im = mpq(im)

    @staticmethod
    def make(re, im):
        im = mpq(im)
        if im == 0:
            return mpq(re)
        return GaussianRational(re, im)

    def _parts(self, other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        return mpq(other), _ZERO

    def __add__(self, other):
        a, b = self._parts(other)
        return GaussianRational.make(self.re + a, self.im + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._parts(other)
        return GaussianRational.make(self.re - a, self.im - b)

    def __rsub__(self, other):
        a, b = self._parts(other)
        return GaussianRational.make(a - self.re, b - self.im)

    def __mul__(self, other):
        a, b = self._parts(other)
        return GaussianRational.make(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        return GaussianRational.make(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.inverse()
        return GaussianRational.make(self.re / other, self.im / other)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return False

    def __ne__(self, other):
        return not self == other

    def __bool__(self):
        return True

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


Coeff = Union[mpq, GaussianRational]

I = GaussianRational(0, 1)


def coefficient(x) -> Coeff:
    """Coerce ints, Fractions, mpq, complex-with-rational-parts to a coefficient."""
    if isinstance(x, GaussianRational):
        return GaussianRational.make(x.re, x.im)
    if isinstance(x, complex):
        return GaussianRational.make(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _cinv(c):
    if isinstance(c, GaussianRational):
        return c.inverse()
    return _ONE / c


def _coeff_parts(c):
    if isinstance(c, GaussianRational):
        return c.re, c.im
    return c, _ZERO


# --------------------------------------------------------------------------
# Sparse polynomial helpers.  A polynomial is a dict {exponent: coeff} with no
# zero coefficients.  Dense lists are only used inside the gcd.
# --------------------------------------------------------------------------


def _padd(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        if s is None:
            out[e] = c
        else:
            s = s + c
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def _pneg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}


def _pmul(a: dict, b: dict) -> dict:
    if len(a) == 1:
        (ea, ca), = a.items()
        if ca == 1:
            return {ea + e: c for e, c in b.items()}
        return {ea + e: ca * c for e, c in b.items()}
    if len(b) == 1:
        return _pmul(b, a)
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e)
            out[e] = ca * cb if s is None else s + ca * cb
    return {e: c for e, c in out.items() if c}


def _pscale(a: dict, c) -> dict:
    if c == 1:
        return a
    return {e: x * c for e, x in a.items()}


def _pshift(a: dict, k: int) -> dict:
    if k == 0:
        return a
    return {e + k: c for e, c in a.items()}


def _normalize_low(a: dict) -> tuple[int, dict]:
    """Split off the lowest power of v: returns (k, a / v^k)."""
    k = min(a)
    return k, _pshift(a, -k)


def _to_dense(a: dict, step: int) -> list:
    deg = max(a) // step
    out = [_ZERO] * (deg + 1)
    for e, c in a.items():
        out[e // step] = c
    return out


def _from_dense(a: list, step: int) -> dict:
    return {i * step: c for i, c in enumerate(a) if c}


def _dtrim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _dmonic(a: list) -> list:
    inv = _cinv(a[-1])
    if inv == 1:
        return a
    return [c * inv for c in a]


def _drem(a: list, b: list) -> list:
    """Remainder of a by monic b."""
    a = list(a)
    nb = len(b)
    for i in range(len(a) - 1, nb - 2, -1):
        c = a[i]
        if not c:
            continue
        off = i - nb + 1
        for j in range(nb):
            if b[j]:
                a[off + j] = a[off + j] - c * b[j]
    return _dtrim(a[: nb - 1])


def _ddivexact(a: list, b: list) -> list:
    """Quotient a / b; b need not be monic; remainder must vanish."""
    a = list(a)
    nb = len(b)
    inv = _cinv(b[-1])
    q = [_ZERO] * (len(a) - nb + 1)
    for i in range(len(a) - 1, nb - 2, -1):
        c = a[i]
        if not c:
            continue
        c = c * inv
        off = i - nb + 1
        q[off] = c
        for j in range(nb):
            if b[j]:
                a[off + j] = a[off + j] - c * b[j]
    if any(a[: nb - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


def _exp_step(*polys: dict) -> int:
    g = 0
    for p in polys:
        for e in p:
            g = gcd(g, e)
            if g == 1:
                return 1
    return g or 1


def _pgcd(a: dict, b: dict) -> dict:
    """Monic gcd of two polynomials with nonnegative exponents, lowest exponent 0."""
    if len(b) == 1 or len(a) == 1:
        return {0: _ONE}
    if a == b:
        return _from_dense(_dmonic(_to_dense(a, 1)), 1)
    step = _exp_step(a, b)
    x = _to_dense(a, step)
    y = _dmonic(_to_dense(b, step))
    if len(x) < len(y):
        x, y = y, _dmonic(x)
    while len(y) > 1:
        r = _drem(x, y)
        if not r:
            return _from_dense(y, step)
        x, y = y, _dmonic(r)
    return {0: _ONE}


def _pdivexact(a: dict, b: dict) -> dict:
    """a / b for b with lowest exponent 0; a may be Laurent."""
    if len(b) == 1:
        return _pscale(a, _cinv(b[0]))
    k, a0 = _normalize_low(a)
    step = _exp_step(a0, b)
    q = _ddivexact(_to_dense(a0, step), _to_dense(b, step))
    return _pshift(_from_dense(q, step), k)


def _lift(a: dict, factor: int) -> dict:
    if factor == 1:
        return a
    return {e * factor: c for e, c in a.items()}


# --------------------------------------------------------------------------
# Public types
# --------------------------------------------------------------------------


class LaurentPoly:
    """Read-only view of a Laurent polynomial in v (v^L = q)."""

    __slots__ = ("L", "terms")

    def __init__(self, L: int, terms: Mapping[int, object]):
        if L <= 0:
            raise ValueError("root order must be positive")
        self.L = L
        self.terms = tuple(sorted((e, coefficient(c)) for e, c in terms.items() if c))

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and (self.L, self.terms) == (other.L, other.terms)

    def __hash__(self):
        return hash((self.L, self.terms))

    def __repr__(self):
        return f"LaurentPoly(L={self.L}, {dict(self.terms)})"


_POLY_ONE = {0: _ONE}


class Scalar:
    """Element of Q(i)(v) in canonical reduced form.  Immutable."""

    __slots__ = ("L", "_num", "_den", "_hash")

    def __init__(self, num: Mapping[int, object] | int = 0, den: Mapping[int, object] | None = None, L: int = 1):
        if isinstance(num, Mapping):
            n = {int(e): coefficient(c) for e, c in num.items()}
            n = {e: c for e, c in n.items() if c}
        else:
            c = coefficient(num)
            n = {0: c} if c else {}
        if den is None:
            d = dict(_POLY_ONE)
        else:
            d = {int(e): coefficient(c) for e, c in den.items()}
            d = {e: c for e, c in d.items() if c}
        if L <= 0:
            raise ValueError("root order must be positive")
        self.L = L
        self._hash = None
        self._num, self._den = _canonical(n, d)

    @classmethod
    def _raw(cls, num: dict, den: dict, L: int) -> "Scalar":
        s = object.__new__(cls)
        s.L = L
        s._num = num
        s._den = den
        s._hash = None
        return s

    @classmethod
    def _reduced(cls, num: dict, den: dict, L: int) -> "Scalar":
        n, d = _canonical(num, den)
        return cls._raw(n, d, L)

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, L: int = 1) -> "Scalar":
        return cls._raw({}, _POLY_ONE, L)

    @classmethod
    def one(cls, L: int = 1) -> "Scalar":
        return cls._raw({0: _ONE}, _POLY_ONE, L)

    @classmethod
    def monomial(cls, exp: int, L: int, coeff=1) -> "Scalar":
        c = coefficient(coeff)
        return cls._raw({exp: c} if c else {}, _POLY_ONE, L)

    @classmethod
    def const(cls, c, L: int = 1) -> "Scalar":
        return cls.monomial(0, L, c)

    # -- accessors ---------------------------------------------------------
    @property
    def numerator(self) -> LaurentPoly:
        return LaurentPoly(self.L, self._num)

    @property
    def denominator(self) -> LaurentPoly:
        return LaurentPoly(self.L, self._den)

    def is_zero(self) -> bool:
        return not self._num

    def __bool__(self):
        return bool(self._num)

    def is_one(self) -> bool:
        return len(self._den) == 1 and self._num == {0: _ONE}

    def is_laurent(self) -> bool:
        return len(self._den) == 1

    def monomial_terms(self):
        """(exponent, coeff) if this is c*v^e, else None."""
        if len(self._den) == 1 and len(self._num) == 1:
            (e, c), = self._num.items()
            return e, c
        return None

    # -- root-order lifting ------------------------------------------------
    def lift(self, L: int) -> "Scalar":
        if L == self.L:
            return self
        if L % self.L:
            raise ExponentError(f"cannot lift root order {self.L} to {L}")
        f = L // self.L
        return Scalar._raw(_lift(self._num, f), _lift(self._den, f), L)

    def _common(self, other):
        if isinstance(other, Scalar):
            if other.L == self.L:
                return self, other
            L = self.L * other.L // gcd(self.L, other.L)
            return self.lift(L), other.lift(L)
        return self, Scalar.const(other, self.L)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        if not b._num:
            return a
        if not a._num:
            return b
        if len(a._den) == 1 and len(b._den) == 1:
            return Scalar._raw(_padd(a._num, b._num), _POLY_ONE, a.L)
        if a._den == b._den:
            return Scalar._reduced(_padd(a._num, b._num), a._den, a.L)
        n = _padd(_pmul(a._num, b._den), _pmul(b._num, a._den))
        return Scalar._reduced(n, _pmul(a._den, b._den), a.L)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(_pneg(self._num), self._den, self.L)

    def __sub__(self, other):
        a, b = self._common(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        if not a._num or not b._num:
            return Scalar.zero(a.L)
        if len(a._den) == 1 and len(b._den) == 1:
            return Scalar._raw(_pmul(a._num, b._num), _POLY_ONE, a.L)
        # cross-cancel so the product is already reduced
        ka, na = _normalize_low(a._num)
        kb, nb = _normalize_low(b._num)
        g1 = _pgcd(na, b._den)
        g2 = _pgcd(nb, a._den)
        if len(g1) > 1:
            na, bd = _pdivexact(na, g1), _pdivexact(b._den, g1)
        else:
            bd = b._den
        if len(g2) > 1:
            nb, ad = _pdivexact(nb, g2), _pdivexact(a._den, g2)
        else:
            ad = a._den
        num = _pshift(_pmul(na, nb), ka + kb)
        den = _pmul(ad, bd)
        lead = den[max(den)]
        if lead != 1:
            inv = _cinv(lead)
            num, den = _pscale(num, inv), _pscale(den, inv)
        return Scalar._raw(num, den, a.L)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self._num:
            raise ZeroDivisionError("division by zero scalar")
        k, n0 = _normalize_low(self._num)
        lead = n0[max(n0)]
        inv = _cinv(lead)
        num = _pshift(_pscale(self._den, inv), -k)
        den = _pscale(n0, inv)
        return Scalar._raw(num, den if len(den) > 1 else _POLY_ONE, self.L)

    def __truediv__(self, other):
        a, b = self._common(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Scalar.one(self.L)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            a, b = self._common(other)
            return a._num == b._num and a._den == b._den
        if isinstance(other, (int, Fraction, complex, GaussianRational)) or type(other) is type(_ONE):
            c = coefficient(other)
            if not c:
                return not self._num
            return len(self._den) == 1 and self._num == {0: c}
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def _reduced_root(self):
        g = self.L
        for p in (self._num, self._den):
            for e in p:
                g = gcd(g, e)
        return g

    def __hash__(self):
        if self._hash is None:
            g = self._reduced_root()
            self._hash = hash((
                self.L // g,
                tuple(sorted((e // g, c) for e, c in self._num.items())),
                tuple(sorted((e // g, c) for e, c in self._den.items())),
            ))
        return self._hash

    # -- numerics and output -----------------------------------------------
    def __complex__(self):
        return eval_numeric(self, 1.0)

    def to_json(self) -> dict:
        def terms(p):
            out = []
            for e in sorted(p):
                re, im = _coeff_parts(p[e])
                out.append([e, [int(re.numerator), int(re.denominator), int(im.numerator), int(im.denominator)]])
            return out

        return {"L": self.L, "num": terms(self._num), "den": terms(self._den)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Scalar":
        def terms(rows):
            out = {}
            for e, (rn, rd, imn, imd) in rows:
                out[int(e)] = GaussianRational.make(mpq(rn, rd), mpq(imn, imd))
            return out

        return cls(terms(data["num"]), terms(data["den"]), int(data["L"]))

    def to_text(self, var: str = "q") -> str:
        """Human-readable form, e.g. ``-q - q^-1``.

        Exponents are printed in q when they are all multiples of L, otherwise
        in v (v^L = q).
        """
        exps = list(self._num) + list(self._den)
        if all(e % self.L == 0 for e in exps):
            scale, name = self.L, var
        else:
            scale, name = 1, "v"
        num = _poly_text(self._num, scale, name)
        if len(self._den) == 1:
            return num
        den = _poly_text(self._den, scale, name)
        return f"({num}) / ({den})"

    def __repr__(self):
        return f"Scalar[{self.to_text()}; L={self.L}]"

    __str__ = to_text


def _canonical(n: dict, d: dict) -> tuple[dict, dict]:
    if not d:
        raise ZeroDivisionError("zero denominator")
    if not n:
        return {}, _POLY_ONE
    kd, d0 = _normalize_low(d)
    if kd:
        n = _pshift(n, -kd)
    if len(d0) == 1:
        c = d0[0]
        return (_pscale(n, _cinv(c)) if c != 1 else n), _POLY_ONE
    kn, n0 = _normalize_low(n)
    g = _pgcd(n0, d0)
    if len(g) > 1:
        n0 = _pdivexact(n0, g)
        d0 = _pdivexact(d0, g)
        if len(d0) == 1:
            return _pshift(_pscale(n0, _cinv(d0[0])), kn), _POLY_ONE
    lead = d0[max(d0)]
    if lead != 1:
        inv = _cinv(lead)
        n0, d0 = _pscale(n0, inv), _pscale(d0, inv)
    return _pshift(n0, kn), d0


def _coeff_text(c) -> str:
    if isinstance(c, GaussianRational):
        re, im = c.re, c.im
        s = f"{re}" if re else ""
        if im:
            mag = "" if abs(im) == 1 else f"{abs(im)}"
            sign = "-" if im < 0 else ("+" if s else "")
            s = f"{s}{sign}{mag}i"
        return f"({s})"
    return f"{c}"


def _poly_text(p: dict, scale: int, name: str) -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        exp = e // scale
        if exp == 0:
            mono = ""
        elif exp == 1:
            mono = name
        else:
            mono = f"{name}^{exp}"
        negative = not isinstance(c, GaussianRational) and c < 0
        mag = -c if negative else c
        if mono:
            ctext = "" if mag == 1 else _coeff_text(mag) + " "
            body = f"{ctext}{mono}"
        else:
            body = _coeff_text(mag)
        if not parts:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append(("- " if negative else "+ ") + body)
    return " ".join(parts)


# --------------------------------------------------------------------------
# Operations
# --------------------------------------------------------------------------


def v_power(exp: int, L: int) -> Scalar:
    return Scalar.monomial(exp, L)


def q_power(r, L: int) -> Scalar:
    """q^r as the monomial v^(r*L); raises ExponentError if r*L is not integral."""
    r = Fraction(r)
    e = r * L
    if e.denominator != 1:
        raise ExponentError(f"q^{r} is not an integral power of v when L={L}")
    return Scalar.monomial(int(e), L)


def qint(n: int, L: int, d: int = 1) -> Scalar:
    """Quantum integer [n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})."""
    if n == 0:
        return Scalar.zero(L)
    sign = 1 if n > 0 else -1
    n = abs(n)
    step = 2 * d * L
    terms = {d * L * (n - 1) - step * k: _ONE for k in range(n)}
    s = Scalar._raw(terms, _POLY_ONE, L)
    return s if sign > 0 else -s


def qfactorial(n: int, L: int, d: int = 1) -> Scalar:
    out = Scalar.one(L)
    for k in range(2, n + 1):
        out = out * qint(k, L, d)
    return out


def field_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def _peval(p: dict, z: complex) -> complex:
    total = 0j
    for e, c in p.items():
        total += complex(c) * z ** e
    return total


def eval_numeric(s: Scalar, sample: complex) -> complex:
    """Substitute v = sample."""
    z = complex(sample)
    if z == 0:
        raise PoleError("v = 0 is a pole of every nonconstant Laurent term")
    den = _peval(s._den, z)
    num = _peval(s._num, z)
    scale = max(1.0, sum(abs(complex(c)) * abs(z) ** e for e, c in s._den.items()))
    if abs(den) <= 1e-12 * scale:
        raise PoleError(f"denominator vanishes at v = {sample}")
    return num / den


def sum_scalars(items: Iterable[Scalar], L: int) -> Scalar:
    out = Scalar.zero(L)
    for x in items:
        out = out + x
    return out


def root_of_unity_phase(c) -> float:
    return cmath.phase(complex(c))
