"""Exact scalars: cyclotomic numbers graded by integer powers of pi.

Every number that appears in a germ or a character table is a finite sum

    sum_k  c_k * pi^k,        c_k in Q(zeta_L),

with the cyclotomic coefficients stored in the power basis of the L-th
cyclotomic field modulo the L-th cyclotomic polynomial.  Levels are kept
at multiples of 4 so that i = zeta_4 is always representable and needs no
special casing.  pi is a formal graded symbol; nothing in this module ever
evaluates it numerically except the display helper at the very bottom.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache


class ScalarError(ValueError):
    """Raised for structurally invalid scalar operations."""


# ----------------------------------------------------------------------
# dense polynomial helpers over Fraction (ascending coefficients)
# ----------------------------------------------------------------------

def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return _poly_trim(out)


def _poly_sub(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, a in enumerate(p):
        out[i] += a
    for i, b in enumerate(q):
        out[i] -= b
    return _poly_trim(out)


def _poly_divmod(p, d):
    """Exact division with remainder; d must be nonzero."""
    p = list(p)
    q = [Fraction(0)] * max(len(p) - len(d) + 1, 0)
    lead = d[-1]
    while len(p) >= len(d) and _poly_trim(p):
        shift = len(p) - len(d)
        c = p[-1] / lead
        q[shift] = c
        for i, b in enumerate(d):
            p[shift + i] -= c * b
        _poly_trim(p)
    return _poly_trim(q), _poly_trim(p)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients of the n-th cyclotomic polynomial, ascending."""
    p = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(p, cyclotomic_polynomial(d))
            assert not r, "cyclotomic division must be exact"
            p = q
    return tuple(p)


def _euler_phi(n):
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def _reduce_mod_cyclotomic(coeffs, level):
    """Reduce dict {exponent: Fraction} modulo Phi_level; keys below phi(level)."""
    phi = _euler_phi(level)
    deg = max(coeffs, default=-1)
    dense = [Fraction(0)] * (deg + 1)
    for e, c in coeffs.items():
        dense[e % level if e >= level else e] += c  # callers pre-reduce mod level
    mod = list(cyclotomic_polynomial(level))
    _, rem = _poly_divmod(dense, mod)
    out = {e: c for e, c in enumerate(rem) if c != 0}
    assert all(e < phi for e in out)
    return out


class CyclotomicNumber:
    """Element of Q(zeta_L) in the power basis mod the cyclotomic polynomial.

    The level L is always a multiple of 4.  Values are immutable; equality
    promotes both operands to the lcm level and compares reduced forms.
    """

    __slots__ = ("level", "coeffs")

    def __init__(self, level, coeffs):
        if level % 4 != 0 or level <= 0:
            raise ScalarError(f"cyclotomic level must be a positive multiple of 4, got {level}")
        phi = _euler_phi(level)
        clean = {}
        for e, c in coeffs.items():
            c = Fraction(c)
            if c != 0:
                if not (0 <= e < phi):
                    raise ScalarError(f"exponent {e} out of range for level {level}")
                clean[e] = c
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_rational(q, level=4):
        return CyclotomicNumber(level, {0: Fraction(q)})

    @staticmethod
    def zeta(level, exponent=1):
        """zeta_level ^ exponent, reduced."""
        if level % 4 != 0:
            raise ScalarError("level must be a multiple of 4")
        return CyclotomicNumber(level, _reduce_mod_cyclotomic({exponent % level: Fraction(1)}, level))

    @staticmethod
    def root_of_unity(p, q):
        """e^{2 pi i p / q} at the minimal admissible level lcm(4, q)."""
        if q <= 0:
            raise ScalarError("root-of-unity denominator must be positive")
        level = 4 * q // math.gcd(4, q)
        return CyclotomicNumber.zeta(level, (level // q) * (p % q)).demote()

    # -- level handling ---------------------------------------------------

    def promote(self, new_level):
        """Embed into Q(zeta_{new_level}); the current level must divide it."""
        if new_level % self.level != 0:
            raise ScalarError(f"cannot promote level {self.level} to non-multiple {new_level}")
        if new_level % 4 != 0:
            raise ScalarError("target level must be a multiple of 4")
        if new_level == self.level:
            return self
        step = new_level // self.level
        raw = {e * step: c for e, c in self.coeffs.items()}
        return CyclotomicNumber(new_level, _reduce_mod_cyclotomic(raw, new_level))

    def demote(self):
        """Canonical form: the smallest level (multiple of 4) containing the value."""
        if not self.coeffs:
            return CyclotomicNumber(4, {}) if self.level != 4 else self
        for m in sorted(d for d in range(4, self.level) if self.level % d == 0 and d % 4 == 0):
            down = self._try_demote(m)
            if down is not None:
                return down
        return self

    def _try_demote(self, m):
        # Solve promote(b, level) == self for b in Q(zeta_m) by Gaussian elimination.
        phi_m = _euler_phi(m)
        phi_l = _euler_phi(self.level)
        step = self.level // m
        cols = []
        for j in range(phi_m):
            red = _reduce_mod_cyclotomic({j * step: Fraction(1)}, self.level)
            cols.append([red.get(e, Fraction(0)) for e in range(phi_l)])
        rhs = [self.coeffs.get(e, Fraction(0)) for e in range(phi_l)]
        # augmented matrix, rows indexed by basis exponents of the big field
        mat = [[cols[j][r] for j in range(phi_m)] + [rhs[r]] for r in range(phi_l)]
        pivots = []
        row = 0
        for col in range(phi_m):
            piv = next((r for r in range(row, phi_l) if mat[r][col] != 0), None)
            if piv is None:
                continue
            mat[row], mat[piv] = mat[piv], mat[row]
            inv = 1 / mat[row][col]
            mat[row] = [x * inv for x in mat[row]]
            for r in range(phi_l):
                if r != row and mat[r][col] != 0:
                    f = mat[r][col]
                    mat[r] = [x - f * y for x, y in zip(mat[r], mat[row])]
            pivots.append(col)
            row += 1
        sol = {c: Fraction(0) for c in range(phi_m)}
        for r, col in enumerate(pivots):
            sol[col] = mat[r][phi_m]
        for r in range(row, phi_l):
            if mat[r][phi_m] != 0:
                return None  # inconsistent: value not in the subfield
        return CyclotomicNumber(m, {e: c for e, c in sol.items() if c != 0})

    @staticmethod
    def _common(a, b):
        lvl = a.level * b.level // math.gcd(a.level, b.level)
        return a.promote(lvl), b.promote(lvl)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        a, b = CyclotomicNumber._common(self, other)
        out = dict(a.coeffs)
        for e, c in b.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return CyclotomicNumber(a.level, out).demote()

    def __neg__(self):
        return CyclotomicNumber(self.level, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        a, b = CyclotomicNumber._common(self, other)
        raw = {}
        for e1, c1 in a.coeffs.items():
            for e2, c2 in b.coeffs.items():
                raw[e1 + e2] = raw.get(e1 + e2, Fraction(0)) + c1 * c2
        dense = [Fraction(0)] * (max(raw, default=-1) + 1)
        for e, c in raw.items():
            dense[e] = c
        _, rem = _poly_divmod(dense, list(cyclotomic_polynomial(a.level)))
        return CyclotomicNumber(a.level, {e: c for e, c in enumerate(rem) if c != 0}).demote()

    def inverse(self):
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if not self.coeffs:
            raise ScalarError("division by zero cyclotomic number")
        mod = list(cyclotomic_polynomial(self.level))
        deg = max(self.coeffs)
        f = [self.coeffs.get(e, Fraction(0)) for e in range(deg + 1)]
        # extended gcd of f and the cyclotomic polynomial
        r0, r1 = list(mod), list(f)
        s0, s1 = [], [Fraction(1)]
        while _poly_trim(list(r1)):
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if len(r0) != 1:
            raise ScalarError("element is a zero divisor; cannot invert")
        c = r0[0]
        inv = {e: v / c for e, v in enumerate(s0) if v != 0}
        return CyclotomicNumber(self.level, _reduce_mod_cyclotomic(inv, self.level)).demote()

    def conjugate(self):
        """Complex conjugation zeta -> zeta^{-1} (a field automorphism)."""
        raw = {}
        for e, c in self.coeffs.items():
            raw[(-e) % self.level] = raw.get((-e) % self.level, Fraction(0)) + c
        return CyclotomicNumber(self.level, _reduce_mod_cyclotomic(raw, self.level)).demote()

    # -- predicates and views -----------------------------------------

    def is_zero(self):
        return not self.coeffs

    def is_rational(self):
        d = self.demote()
        return d.level == 4 and set(d.coeffs) <= {0}

    def rational_value(self):
        d = self.demote()
        if not d.is_rational():
            raise ScalarError(f"not a rational number: {self!r}")
        return d.coeffs.get(0, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = CyclotomicNumber._common(self, other)
        return a.coeffs == b.coeffs

    __hash__ = None

    def complex_value(self):
        return sum(float(c) * cmath.exp(2j * cmath.pi * e / self.level)
                   for e, c in self.coeffs.items()) if self.coeffs else 0j

    def __repr__(self):
        d = self.demote()
        if not d.coeffs:
            return "0"
        parts = [f"{c}*z{d.level}^{e}" if e else f"{c}" for e, c in sorted(d.coeffs.items())]
        return " + ".join(parts)


class ExactScalar:
    """Finite sum of cyclotomic numbers weighted by integer powers of pi."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        clean = {}
        for k, c in terms.items():
            if not isinstance(c, CyclotomicNumber):
                c = CyclotomicNumber.from_rational(c)
            if not c.is_zero():
                clean[int(k)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("ExactScalar is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero():
        return ExactScalar({})

    @staticmethod
    def one():
        return ExactScalar({0: CyclotomicNumber.from_rational(1)})

    @staticmethod
    def from_rational(q):
        return ExactScalar({0: CyclotomicNumber.from_rational(Fraction(q))})

    @staticmethod
    def i():
        return ExactScalar({0: CyclotomicNumber.zeta(4, 1)})

    @staticmethod
    def pi_power(k, coeff=1):
        return ExactScalar({k: CyclotomicNumber.from_rational(Fraction(coeff))})

    @staticmethod
    def root_of_unity(p, q):
        return ExactScalar({0: CyclotomicNumber.root_of_unity(p, q)})

    @staticmethod
    def from_cyclotomic(c):
        return ExactScalar({0: c})

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return ExactScalar(out)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                p = c1 * c2
                out[k] = out[k] + p if k in out else p
        return ExactScalar(out)

    __rmul__ = __mul__

    def inverse(self):
        if len(self.terms) != 1:
            raise ScalarError(
                f"scalar is not invertible: needs exactly one pi-term, has {len(self.terms)} "
                f"(pi-grades {sorted(self.terms)})")
        (k, c), = self.terms.items()
        return ExactScalar({-k: c.inverse()})

    def __truediv__(self, other):
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def conjugate(self):
        return ExactScalar({k: c.conjugate() for k, c in self.terms.items()})

    # -- predicates ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_rational(self):
        return set(self.terms) <= {0} and all(c.is_rational() for c in self.terms.values())

    def rational_value(self):
        if self.is_zero():
            return Fraction(0)
        if not self.is_rational():
            raise ScalarError(f"not rational: {self}")
        return self.terms[0].rational_value()

    def is_integer(self):
        return self.is_rational() and self.rational_value().denominator == 1

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # -- text form ---------------------------------------------------

    def to_text(self):
        """Canonical text form, e.g. ``(1/2*z12^3)*pi^-1 + (2)*pi^0``."""
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k].demote()
            for e in sorted(c.coeffs):
                q = c.coeffs[e]
                body = f"{q}" if e == 0 else f"{q}*z{c.level}^{e}"
                parts.append(f"({body})*pi^{k}")
        return " + ".join(parts)

    _TERM_RE = re.compile(
        r"^\((?P<rat>-?\d+(?:/\d+)?)(?:\*z(?P<lvl>\d+)\^(?P<exp>\d+))?\)\*pi\^(?P<pik>-?\d+)$")

    @staticmethod
    def from_text(text):
        text = text.strip()
        if text == "0":
            return ExactScalar.zero()
        total = ExactScalar.zero()
        for raw in text.split(" + "):
            m = ExactScalar._TERM_RE.match(raw.strip())
            if not m:
                raise ScalarError(f"unparseable scalar term: {raw!r}")
            q = Fraction(m.group("rat"))
            k = int(m.group("pik"))
            if m.group("lvl") is None:
                cyc = CyclotomicNumber.from_rational(q)
            else:
                cyc = CyclotomicNumber.zeta(int(m.group("lvl")), int(m.group("exp"))) * \
                    CyclotomicNumber.from_rational(q)
            total = total + ExactScalar({k: cyc})
        return total

    def complex_value(self):
        return sum(c.complex_value() * math.pi ** k for k, c in self.terms.items()) if self.terms else 0j

    def __repr__(self):
        return self.to_text()


def _coerce(x):
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactScalar.from_rational(x)
    if isinstance(x, CyclotomicNumber):
        return ExactScalar.from_cyclotomic(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to ExactScalar")


def approx_display(a, digits=4):
    """Decimal rendering for reports only; never fed back into computation."""
    z = a.complex_value()
    re_s = f"{z.real:.{digits}f}".rstrip("0").rstrip(".") or "0"
    if abs(z.imag) < 10 ** (-digits - 6) * max(1.0, abs(z.real)):
        return re_s
    im_s = f"{abs(z.imag):.{digits}f}".rstrip("0").rstrip(".") or "0"
    sign = "+" if z.imag >= 0 else "-"
    return f"{re_s}{sign}{im_s}i"


# frequently used constants
ONE = ExactScalar.one()
ZERO = ExactScalar.zero()
I = ExactScalar.i()
TWO_PI = ExactScalar.pi_power(1, 2)
