"""Polynomials and truncated Laurent series in t^{-1} over GF(q).

Everything is exponent-valued: |x| = q^deg(x) is reported as ``deg(x)``.
A truncated series remembers the lowest power it knows (``t^-prec``) and
every operation recomputes that bound instead of inventing coefficients.
"""
import re
from dataclasses import dataclass
from functools import total_ordering

from .errors import (InsufficientPrecision, NotEnoughCoefficients,
                     ReducibleBase, ZeroArgument)


@total_ordering
class _MinusInfinity:
    """Degree of the zero polynomial; below every integer."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __lt__(self, other):
        return other is not self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf-degree")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "-inf"


NEG_INF = _MinusInfinity()


class Poly:
    """Polynomial with coefficient codes in ascending powers of t."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        c = [int(x) for x in coeffs]
        if field.prime:
            c = [x % field.p for x in c]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, field, e, c=1):
        return cls(field, [0] * e + [c])

    @classmethod
    def t(cls, field):
        return cls(field, [0, 1])

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, o):
        F = self.field
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(F, [F.add(self.coeff(i), o.coeff(i)) for i in range(n)])

    def __sub__(self, o):
        F = self.field
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(F, [F.sub(self.coeff(i), o.coeff(i)) for i in range(n)])

    def __neg__(self):
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, o):
        F = self.field
        if isinstance(o, int):
            return Poly(F, [F.mul(c, o) for c in self.coeffs])
        if not self.coeffs or not o.coeffs:
            return Poly(F)
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out)

    def __pow__(self, e):
        out = Poly(self.field, [1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def divmod(self, o):
        F = self.field
        if o.is_zero():
            raise ZeroArgument("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return Poly(F), self
        quo = [0] * (dq + 1)
        il = F.inv(o.lead())
        for sh in range(dq, -1, -1):
            c = F.mul(rem[sh + len(o.coeffs) - 1], il)
            quo[sh] = c
            if c:
                for i, b in enumerate(o.coeffs):
                    rem[sh + i] = F.sub(rem[sh + i], F.mul(c, b))
        return Poly(F, quo), Poly(F, rem)

    def __floordiv__(self, o):
        return self.divmod(o)[0]

    def __mod__(self, o):
        return self.divmod(o)[1]

    def monic(self):
        if self.is_zero():
            return self
        il = self.field.inv(self.lead())
        return self * il

    def __eq__(self, o):
        return isinstance(o, Poly) and self.field == o.field and self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"Poly({to_text(self)})"


def _all_monic(field, d):
    q = field.q
    for low in range(q ** d):
        c = []
        for _ in range(d):
            c.append(low % q)
            low //= q
        yield Poly(field, c + [1])


def is_irreducible(p):
    d = p.deg
    if d is NEG_INF or d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for f in _all_monic(p.field, k):
            if (p % f).is_zero():
                return False
    return True


# --- text formats ------------------------------------------------------------

def to_text(p):
    if p.is_zero():
        return "0"
    terms = []
    for e in range(p.deg, -1, -1):
        c = p.coeffs[e]
        if not c:
            continue
        if e == 0:
            terms.append(str(c))
        elif e == 1:
            terms.append(f"{c}*t")
        else:
            terms.append(f"{c}*t^{e}")
    return " + ".join(terms)


def to_compact(p):
    if p.is_zero():
        return "-1:[]"
    return f"{p.deg}:[" + ",".join(str(c) for c in reversed(p.coeffs)) + "]"


_TERM = re.compile(r"^(\d+)?\s*\*?\s*(t(?:\^(\d+))?)?$")


def parse_poly(field, text):
    """Accepts either text form: ``"2*t^3 + t + 1"`` or ``"3:[2,0,1,1]"``."""
    text = text.strip()
    m = re.fullmatch(r"(-?\d+)\s*:\s*\[(.*)\]", text)
    if m:
        body = m.group(2).strip()
        vals = [int(x) for x in body.split(",")] if body else []
        if len(vals) != int(m.group(1)) + 1 and vals:
            raise ValueError(f"degree {m.group(1)} does not match {len(vals)} coefficients")
        return Poly(field, list(reversed(vals)))
    coeffs = {}
    for term in text.replace("-", "+-").split("+"):
        term = term.strip()
        if not term:
            continue
        if term.startswith("-"):
            raise ValueError("use element codes, not negative coefficients")
        tm = _TERM.match(term)
        if not tm or (tm.group(1) is None and tm.group(2) is None):
            raise ValueError(f"cannot parse term {term!r}")
        c = int(tm.group(1)) if tm.group(1) is not None else 1
        e = 0 if tm.group(2) is None else (int(tm.group(3)) if tm.group(3) else 1)
        coeffs[e] = field.add(coeffs.get(e, 0), field(c).code)
    if not coeffs:
        return Poly(field)
    return Poly(field, [coeffs.get(i, 0) for i in range(max(coeffs) + 1)])


# --- truncated Laurent series -----------------------------------------------

class LaurentTrunc:
    """sum_{e=-prec}^{h} c_e t^e with everything below t^-prec unknown.

    ``coeffs[i]`` is the coefficient of ``t^(h-i)``.  After normalisation the
    top stored coefficient is nonzero; a series that vanishes on its whole
    stored range has no coefficients and ``zero_on_range`` set.
    """

    __slots__ = ("field", "h", "coeffs", "prec")

    def __init__(self, field, h, coeffs, prec):
        c = [int(x) for x in coeffs]
        low = h - len(c) + 1
        if low > -prec:  # pad known zeros down to the precision bound
            c += [0] * (low + prec)
        elif low < -prec:  # drop anything claimed below the bound
            c = c[: h + prec + 1] if h >= -prec else []
        while c and c[0] == 0:
            c.pop(0)
            h -= 1
        if not c:
            h = -prec - 1
        self.field, self.h, self.coeffs, self.prec = field, h, tuple(c), prec

    @classmethod
    def from_seq(cls, field, seq):
        """Theta = sum_{i>=1} s_i t^{-i}, precision len(seq)."""
        return cls(field, -1, list(seq), len(seq))

    @classmethod
    def from_poly(cls, poly, prec):
        c = list(reversed(poly.coeffs))
        return cls(poly.field, max(poly.deg, 0) if not poly.is_zero() else 0, c or [0], prec)

    @property
    def zero_on_range(self):
        return not self.coeffs

    def coeff(self, e):
        if e < -self.prec:
            raise InsufficientPrecision(f"t^{e} lies below precision t^-{self.prec}", -e)
        if e > self.h:
            return 0
        return self.coeffs[self.h - e]

    def __add__(self, o):
        F = self.field
        prec = min(self.prec, o.prec)
        top = max(self.h, o.h, -prec)
        return LaurentTrunc(F, top, [F.add(self.coeff(e) if e <= self.h else 0,
                                           o.coeff(e) if e <= o.h else 0)
                                     for e in range(top, -prec - 1, -1)], prec)

    def __eq__(self, o):
        return (isinstance(o, LaurentTrunc) and self.field == o.field and self.prec == o.prec
                and self.h == o.h and self.coeffs == o.coeffs)

    def __repr__(self):
        return f"LaurentTrunc(h={self.h}, prec={self.prec}, {list(self.coeffs)})"


def abs_value(x):
    """deg(x); |x| = q^deg(x)."""
    if isinstance(x, Poly):
        return x.deg
    if x.zero_on_range:
        raise InsufficientPrecision(
            f"series vanishes down to t^-{x.prec}; its degree is below the stored window", x.prec + 1)
    return x.h


def frac(x):
    F = x.field
    if x.h < 0:
        return x
    return LaurentTrunc(F, -1, [x.coeff(e) for e in range(-1, -x.prec - 1, -1)], x.prec)


def mul_poly_series(N, theta):
    F = theta.field
    if N.is_zero():
        return LaurentTrunc(F, 0, [], theta.prec)
    d = N.deg
    prec = theta.prec - d
    if prec < 1:
        raise InsufficientPrecision(
            f"product with a degree-{d} polynomial needs prec > {d}, have {theta.prec}", d + 1)
    top = max(theta.h + d, -prec)
    out = []
    for e in range(top, -prec - 1, -1):
        acc = 0
        for j, a in enumerate(N.coeffs):
            if a and e - j <= theta.h:
                acc = F.add(acc, F.mul(a, theta.coeff(e - j)))
        out.append(acc)
    return LaurentTrunc(F, top, out, prec)


@dataclass(frozen=True)
class BasePExpansion:
    digits: tuple
    base: Poly

    def reassemble(self):
        out = Poly(self.base.field)
        pw = Poly(self.base.field, [1])
        for dg in self.digits:
            out = out + dg * pw
            pw = pw * self.base
        return out


def _check_base(p):
    if not is_irreducible(p):
        raise ReducibleBase(f"{to_text(p)} is not irreducible over GF({p.field})")


def base_p_expand(N, p):
    _check_base(p)
    digits = []
    cur = N
    while not cur.is_zero():
        cur, r = cur.divmod(p)
        digits.append(r)
    if not digits:
        digits = [Poly(N.field)]
    return BasePExpansion(tuple(digits), p)


def padic_norm_exp(N, p):
    """e with |N|_p = q^-e."""
    if N.is_zero():
        raise ZeroArgument("p-adic norm of zero is not an exponent")
    exp = base_p_expand(N, p)
    i = next(j for j, dg in enumerate(exp.digits) if not dg.is_zero())
    return p.deg * i


def _series_inverse(g, n, F):
    """Power series inverse of g (ascending in x) to x^n inclusive."""
    inv0 = F.inv(g[0])
    out = [inv0] + [0] * n
    for j in range(1, n + 1):
        acc = 0
        for i in range(1, min(j, len(g) - 1) + 1):
            acc = F.add(acc, F.mul(g[i], out[j - i]))
        out[j] = F.mul(F.neg(acc), inv0)
    return out


def substitute(b, p, prec_t):
    """sum_i b_i p(t)^{-i} as a series in t^{-1}, exact down to t^-prec_t.

    ``b[0]`` is b_1.  Only i with i*deg(p) <= prec_t contribute.
    """
    F = p.field
    m = p.deg
    if m is NEG_INF or m < 1:
        raise ValueError("substitution needs deg p >= 1")
    need = prec_t // m
    if len(b) < need:
        raise NotEnoughCoefficients(f"need {need} coefficients b_1..b_{need}, got {len(b)}", need)
    # p^-1 = x^m / g(x) with x = t^-1 and g(x) = c_m + c_{m-1} x + ... + c_0 x^m
    g = list(reversed(p.coeffs))
    ginv = _series_inverse(g, max(prec_t - m, 0), F)
    pinv = [0] * m + ginv  # coefficient of x^j, j = 0..prec_t
    pinv = pinv[: prec_t + 1]
    total = [0] * (prec_t + 1)
    cur = [1] + [0] * prec_t
    for i in range(1, need + 1):
        nxt = [0] * (prec_t + 1)
        for a, ca in enumerate(cur):
            if ca:
                for j in range(0, prec_t + 1 - a):
                    if pinv[j]:
                        nxt[a + j] = F.add(nxt[a + j], F.mul(ca, pinv[j]))
        cur = nxt
        bi = int(b[i - 1])
        if bi:
            total = [F.add(x, F.mul(bi, y)) for x, y in zip(total, cur)]
    return LaurentTrunc(F, 0, total, prec_t)


def series_to_text(x):
    return f"h={x.h} prec={x.prec}\n" + " ".join(str(c) for c in x.coeffs) + "\n"


def parse_series(field, text):
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    m = re.fullmatch(r"\s*h=(-?\d+)\s+prec=(\d+)\s*", lines[0])
    if not m:
        raise ValueError("series header must read 'h=<top> prec=<prec>'")
    body = " ".join(lines[1:]).replace(",", " ").split()
    return LaurentTrunc(field, int(m.group(1)), [int(x) for x in body], int(m.group(2)))
