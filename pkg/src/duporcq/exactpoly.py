"""Exact arithmetic kernel: Gaussian rationals and sparse multivariate polynomials.

Every symbolic claim in this package reduces to arithmetic in this module.
Coefficients are Gaussian rationals (pairs of Fractions); polynomials are
sparse exponent dicts over a fixed ordered variable tuple.  The canonical term
order is lexicographic on exponent tuples with the first variable most
significant; serialization, leading coefficients, and gcd normalization all
refer to that order.

Pinned conventions:
  * resultant(p, q, x) is the Sylvester determinant with p's coefficient rows
    first, so resultant(x - a, x - b, x) == a - b;
  * gcd output is normalized to leading coefficient 1 (0 when both inputs 0);
  * multivariate gcd runs by recursive content/primitive-part reduction with a
    subresultant polynomial remainder sequence in the main variable;
  * to_str renders rationals as a/b and the imaginary unit as the literal i,
    terms in descending canonical order (stable for golden-file tests).
"""

from __future__ import annotations

from fractions import Fraction


class NotDivisible(ArithmeticError):
    """Exact polynomial division left a remainder."""


class ZeroDegree(ValueError):
    """Resultant input is constant in the elimination variable."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not a rational scalar: {x!r}")


class GaussRational:
    """Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = as_gauss(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        if isinstance(other, MPoly):
            return NotImplemented
        other = as_gauss(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, MPoly):
            return NotImplemented
        return self + (-as_gauss(other))

    def __rsub__(self, other):
        return as_gauss(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, MPoly):
            return NotImplemented
        other = as_gauss(other)
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussRational":
        n = self.norm2()
        if not n:
            raise ZeroDivisionError("inverse of 0")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * as_gauss(other).inverse()

    def __rtruediv__(self, other):
        return as_gauss(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = GaussRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_real(self) -> bool:
        return not self.im

    def as_fraction(self) -> Fraction:
        if self.im:
            raise ValueError(f"not real: {self}")
        return self.re

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        if self.im == 1:
            imp = "i"
        elif self.im == -1:
            imp = "-i"
        else:
            imp = f"{self.im}i"
        if not self.re:
            return imp
        return f"{self.re}+{imp}" if self.im > 0 else f"{self.re}{imp}"

    __repr__ = __str__


def as_gauss(x) -> GaussRational:
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRational(x)
    raise TypeError(f"cannot coerce {x!r} to GaussRational")


I = GaussRational(0, 1)
_ONE = GaussRational(1)


class MPoly:
    """Sparse multivariate polynomial over GaussRational.

    terms maps exponent tuples (one slot per variable) to nonzero
    coefficients.  Values are immutable by convention; all operations
    return fresh instances.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms):
        self.vars = tuple(vars)
        self.terms = terms

    @classmethod
    def zero(cls, vars) -> "MPoly":
        return cls(vars, {})

    @classmethod
    def const(cls, vars, c) -> "MPoly":
        c = as_gauss(c)
        z = (0,) * len(vars)
        return cls(vars, {z: c} if c else {})

    @classmethod
    def variable(cls, vars, name) -> "MPoly":
        i = tuple(vars).index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(vars)))
        return cls(vars, {exp: _ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return (self - self.const(self.vars, as_gauss(other))).is_zero()
        return self.vars == other.vars and self.terms == other.terms

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise ValueError("variable tuples differ")
            return other
        return MPoly.const(self.vars, as_gauss(other))

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for exp, c in b.items():
            s = out.get(exp)
            s = c if s is None else s + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MPoly(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                c = c1 * c2
                s = out.get(exp)
                s = c if s is None else s + c
                if s:
                    out[exp] = s
                else:
                    out.pop(exp, None)
        return MPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def evaluate(self, assignment: dict) -> "MPoly":
        """Partial exact evaluation; bound variables get exponent 0."""
        idx = {}
        for name, val in assignment.items():
            idx[self.vars.index(name)] = as_gauss(val)
        out: dict = {}
        for exp, c in self.terms.items():
            val = c
            new = list(exp)
            for i, s in idx.items():
                k = exp[i]
                if k:
                    val = val * s ** k
                    new[i] = 0
            if not val:
                continue
            key = tuple(new)
            acc = out.get(key)
            acc = val if acc is None else acc + val
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return MPoly(self.vars, out)

    def scalar(self) -> GaussRational:
        if not self.terms:
            return GaussRational(0)
        if len(self.terms) == 1:
            (exp, c), = self.terms.items()
            if not any(exp):
                return c
        raise ValueError("polynomial is not constant")

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> int:
        i = self.vars.index(var)
        if not self.terms:
            return 0
        return max(e[i] for e in self.terms)

    def coeff_list(self, var: str) -> list:
        """Coefficients as polynomials (var slot zeroed), ascending powers."""
        i = self.vars.index(var)
        d = self.degree_in(var)
        buckets: list[dict] = [dict() for _ in range(d + 1)]
        for exp, c in self.terms.items():
            k = exp[i]
            e2 = exp[:i] + (0,) + exp[i + 1:]
            buckets[k][e2] = c
        return [MPoly(self.vars, b) for b in buckets]

    def coeff_block(self, block: dict) -> "MPoly":
        """Coefficient of the monomial given by block (exact match on those vars)."""
        idxs = [(self.vars.index(k), v) for k, v in block.items()]
        out = {}
        for exp, c in self.terms.items():
            if all(exp[i] == v for i, v in idxs):
                e2 = list(exp)
                for i, _ in idxs:
                    e2[i] = 0
                out[tuple(e2)] = c
        return MPoly(self.vars, out)

    def leading_exponent(self) -> tuple:
        return max(self.terms)

    def leading_coefficient(self) -> GaussRational:
        return self.terms[max(self.terms)]

    def monic(self) -> "MPoly":
        if not self.terms:
            return self
        inv = self.leading_coefficient().inverse()
        return MPoly(self.vars, {e: c * inv for e, c in self.terms.items()})

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        """Exact division; raises NotDivisible if self is not a multiple."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        dexp = divisor.leading_exponent()
        dlc = divisor.terms[dexp]
        rem = dict(self.terms)
        q: dict = {}
        while rem:
            rexp = max(rem)
            qexp = tuple(a - b for a, b in zip(rexp, dexp))
            if any(k < 0 for k in qexp):
                raise NotDivisible(f"remainder with leading term {rexp}")
            qc = rem[rexp] / dlc
            q[qexp] = qc
            for e2, c2 in divisor.terms.items():
                exp = tuple(a + b for a, b in zip(qexp, e2))
                s = rem.get(exp, _ZERO_G) - qc * c2
                if s:
                    rem[exp] = s
                else:
                    rem.pop(exp, None)
        return MPoly(self.vars, q)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v
                for v, k in zip(self.vars, exp) if k
            )
            cs = str(c)
            if not mono:
                parts.append(f"({cs})" if (c.re and c.im) else cs)
            elif c == _ONE:
                parts.append(mono)
            elif c == GaussRational(-1):
                parts.append(f"-{mono}")
            elif c.re and c.im:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        s = self.to_str()
        return s if len(s) <= 120 else f"<MPoly {len(self.terms)} terms, deg {self.degree()}>"


_ZERO_G = GaussRational(0)


def generators(names):
    """Variable polynomials for a fresh ring with the given variable order."""
    names = tuple(names)
    return [MPoly.variable(names, n) for n in names]


def _shift(p: MPoly, var_idx: int, k: int) -> MPoly:
    if k == 0 or p.is_zero():
        return p
    out = {}
    for exp, c in p.terms.items():
        e2 = exp[:var_idx] + (exp[var_idx] + k,) + exp[var_idx + 1:]
        out[e2] = c
    return MPoly(p.vars, out)


def _from_coeff_list(coeffs: list, var: str) -> MPoly:
    if not coeffs:
        raise ValueError("empty coefficient list")
    vars = coeffs[0].vars
    i = vars.index(var)
    out = MPoly.zero(vars)
    for k, c in enumerate(coeffs):
        if not c.is_zero():
            out = out + _shift(c, i, k)
    return out


def _prem(a: MPoly, b: MPoly, var: str) -> MPoly:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, in var."""
    la = a.coeff_list(var)
    lb = b.coeff_list(var)
    m, n = len(la) - 1, len(lb) - 1
    if m < n:
        raise ValueError("pseudo-division needs deg a >= deg b")
    lbn = lb[n]
    r = list(la)
    for k in range(m, n - 1, -1):
        top = r[k]
        r = [lbn * c for c in r]
        if not top.is_zero():
            for j in range(n + 1):
                r[k - n + j] = r[k - n + j] - top * lb[j]
        r = r[:k]
    if not r:
        return MPoly.zero(a.vars)
    return _from_coeff_list(r, var)


def _content(p: MPoly, var: str) -> MPoly:
    c = MPoly.zero(p.vars)
    for coeff in p.coeff_list(var):
        if not coeff.is_zero():
            c = _gcd_impl(c, coeff)
    return c


def _gcd_impl(p: MPoly, q: MPoly) -> MPoly:
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    main = None
    for v in p.vars:
        if p.degree_in(v) or q.degree_in(v):
            main = v
            break
    if main is None:
        return MPoly.const(p.vars, 1)
    dp, dq = p.degree_in(main), q.degree_in(main)
    if dp == 0 or dq == 0:
        xfree, other = (p, q) if dp == 0 else (q, p)
        return _gcd_impl(xfree, _content(other, main))
    a, b = (p, q) if dp >= dq else (q, p)
    ca, cb = _content(a, main), _content(b, main)
    a = a.exact_div(ca)
    b = b.exact_div(cb)
    one = MPoly.const(p.vars, 1)
    g = h = one
    while True:
        d = a.degree_in(main) - b.degree_in(main)
        r = _prem(a, b, main)
        if r.is_zero():
            break
        if r.degree_in(main) == 0:
            b = one
            break
        beta = g * h ** d
        a, b = b, r.exact_div(beta)
        g = a.coeff_list(main)[-1]
        if d == 1:
            h = g
        elif d > 1:
            h = (g ** d).exact_div(h ** (d - 1))
    if b.degree_in(main) > 0:
        b = b.exact_div(_content(b, main))
    else:
        b = one
    return _gcd_impl(ca, cb) * b


def gcd(p: MPoly, q: MPoly) -> MPoly:
    """GCD normalized to leading coefficient 1 (canonical order); gcd(0,0)=0."""
    return _gcd_impl(p, q).monic()


def det(rows) -> MPoly:
    """Fraction-free (Bareiss) determinant of a square matrix of MPoly."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    vars = m[0][0].vars
    sign = 1
    prev = None
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return MPoly.zero(vars)
        pk = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pk - m[i][k] * m[k][j]
                m[i][j] = num if prev is None else num.exact_div(prev)
        prev = pk
    r = m[n - 1][n - 1]
    return -r if sign < 0 else r


def resultant(p: MPoly, q: MPoly, var: str) -> MPoly:
    """Sylvester resultant eliminating var; p's coefficient rows first."""
    m, n = p.degree_in(var), q.degree_in(var)
    if m == 0 or n == 0:
        raise ZeroDegree(f"input constant in {var}")
    pc = list(reversed(p.coeff_list(var)))
    qc = list(reversed(q.coeff_list(var)))
    size = m + n
    zero = MPoly.zero(p.vars)
    rows = []
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (m - 1 - i))
    return det(rows)
