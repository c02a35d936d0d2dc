"""Exact arithmetic in GF(p) and GF(p^k).

Elements are integer codes in [0, q): the base-p digits of the code are the
coefficients of the polynomial representative, lowest degree first.  The hot
paths in the rest of the package work on raw codes through the ``GF`` methods
(scalar) or the ``v*`` methods (numpy arrays); ``Fe`` is the friendly wrapper.
"""
from functools import lru_cache

import numpy as np

from .errors import (DegreeMismatch, DivisionByZero, FieldMismatch, NotPrime,
                     ReducibleModulus)

MAX_Q = 1 << 16
_TABLE_Q = 256  # full q*q tables below this size


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over GF(p), ascending coefficient lists -------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, b, p):
    """Remainder of a by monic-or-not b over GF(p)."""
    a = _trim(list(a))
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _code_to_poly(c, p):
    out = []
    while c:
        out.append(c % p)
        c //= p
    return out


def _poly_to_code(a, p):
    c = 0
    for x in reversed(a):
        c = c * p + x
    return c


def is_irreducible(poly, p):
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim(list(poly))
    k = len(poly) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for low in range(p ** d):
            f = _code_to_poly(low, p)
            f = f + [0] * (d - len(f)) + [1]
            if not _pmod(poly, f, p):
                return False
    return True


def smallest_irreducible(p, k):
    """Lowest-code monic irreducible of degree k (lexicographic on codes)."""
    for low in range(p ** k):
        f = _code_to_poly(low, p)
        f = f + [0] * (k - len(f)) + [1]
        if is_irreducible(f, p):
            return f
    raise ReducibleModulus(f"no irreducible of degree {k} over GF({p})")


class GF:
    """A finite field GF(p^k).  Immutable once built; use ``field_make``."""

    def __init__(self, p, k=1, modulus=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if k < 1:
            raise DegreeMismatch("extension degree must be >= 1")
        q = p ** k
        if q > MAX_Q:
            raise ValueError(f"q={q} exceeds supported size {MAX_Q}")
        if k == 1:
            if modulus is not None and len(_trim(list(modulus))) not in (0, 2):
                raise DegreeMismatch("prime fields take no modulus")
            modulus = None
        else:
            if modulus is None:
                modulus = smallest_irreducible(p, k)
            elif isinstance(modulus, int):
                modulus = _code_to_poly(modulus, p)
            modulus = _trim([c % p for c in modulus])
            if len(modulus) - 1 != k:
                raise DegreeMismatch(f"modulus has degree {len(modulus) - 1}, expected {k}")
            if modulus[-1] != 1:
                raise ReducibleModulus("modulus must be monic")
            if not is_irreducible(modulus, p):
                raise ReducibleModulus(f"modulus {modulus} is reducible over GF({p})")
        self.p, self.k, self.q = p, k, q
        self.modulus = tuple(modulus) if modulus else None
        self.modulus_code = _poly_to_code(modulus, p) if modulus else None
        self.prime = k == 1
        if not self.prime:
            self._build_tables()
        else:
            self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        self._np_inv = np.array(self._inv if self.prime else self._inv_list, dtype=np.int64)

    # construction helpers -------------------------------------------------
    def _slow_mul(self, a, b):
        pa, pb = _code_to_poly(a, self.p), _code_to_poly(b, self.p)
        return _poly_to_code(_pmod(_pmul(pa, pb, self.p), self.modulus, self.p), self.p)

    def _build_tables(self):
        p, q = self.p, self.q
        n = q - 1
        factors = _prime_factors(n)
        gen = None
        for g in range(2, q):
            x = 1
            powers = [1]
            for _ in range(n - 1):
                x = self._slow_mul(x, g)
                powers.append(x)
            if len(set(powers)) == n:
                gen = g
                break
        assert gen is not None, factors
        exp = powers + powers  # doubled to skip a modulo
        log = [0] * q
        for i, x in enumerate(powers):
            log[x] = i
        self._exp, self._log, self.generator = exp, log, gen
        self._inv_list = [0] + [exp[(n - log[a]) % n] for a in range(1, q)]
        self._neg_list = [_poly_to_code([(-c) % p for c in _code_to_poly(a, p)], p) for a in range(q)]
        self._np_exp = np.array(exp, dtype=np.int64)
        self._np_log = np.array(log, dtype=np.int64)
        self._np_neg = np.array(self._neg_list, dtype=np.int64)
        if q <= _TABLE_Q:
            codes = np.arange(q)
            digits = [(codes // p ** i) % p for i in range(self.k)]
            add = np.zeros((q, q), dtype=np.int64)
            for i in range(self.k):
                add += ((digits[i][:, None] + digits[i][None, :]) % p) * p ** i
            mul = np.zeros((q, q), dtype=np.int64)
            nz = codes[1:]
            mul[1:, 1:] = self._np_exp[self._np_log[nz][:, None] + self._np_log[nz][None, :]]
            self._np_add, self._np_mul = add, mul
            self._add_tab = add.tolist()
            self._mul_tab = mul.tolist()
        else:
            self._np_add = self._np_mul = None
            self._add_tab = self._mul_tab = None

    # scalar arithmetic on codes ---------------------------------------------
    def add(self, a, b):
        if self.prime:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_tab is not None:
            return self._add_tab[a][b]
        return self._digit_add(a, b)

    def _digit_add(self, a, b, sign=1):
        p, out, scale = self.p, 0, 1
        while a or b:
            out += ((a % p + sign * (b % p)) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a):
        if self.prime:
            return (-a) % self.p
        return self._neg_list[a]

    def sub(self, a, b):
        if self.prime:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_tab is not None:
            return self._add_tab[a][self._neg_list[b]]
        return self._digit_add(a, b, -1)

    def mul(self, a, b):
        if self.prime:
            return a * b % self.p
        if self._mul_tab is not None:
            return self._mul_tab[a][b]
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._inv[a] if self.prime else self._inv_list[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def inv_euclid(self, a):
        """Inverse by the extended Euclidean algorithm on representatives."""
        if a == 0:
            raise DivisionByZero("inverse of zero")
        p = self.p
        if self.prime:
            r0, r1, s0, s1 = p, a, 0, 1
            while r1:
                t = r0 // r1
                r0, r1, s0, s1 = r1, r0 - t * r1, s1, s0 - t * s1
            return s0 * pow(r0, p - 2, p) % p
        r0, r1 = list(self.modulus), _code_to_poly(a, p)
        s0, s1 = [], [1]
        while r1:
            # r0 = t*r1 + rem
            t, rem = [0] * max(len(r0) - len(r1) + 1, 1), list(r0)
            il = pow(r1[-1], p - 2, p)
            while len(rem) >= len(r1) and rem:
                c = rem[-1] * il % p
                sh = len(rem) - len(r1)
                t[sh] = c
                for i, x in enumerate(r1):
                    rem[sh + i] = (rem[sh + i] - c * x) % p
                _trim(rem)
            ts1 = _pmul(_trim(t), s1, p)
            n = max(len(s0), len(ts1))
            s_new = _trim([((s0[i] if i < len(s0) else 0) - (ts1[i] if i < len(ts1) else 0)) % p
                           for i in range(n)])
            r0, r1, s0, s1 = r1, rem, s1, s_new
        c = pow(r0[0], p - 2, p)  # r0 is a nonzero constant
        return _poly_to_code([x * c % p for x in s0], p)

    # vectorised arithmetic on int64 arrays ----------------------------------
    def vadd(self, a, b):
        if self.prime:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._np_add is not None:
            return self._np_add[a, b]
        return self._vdigit(a, b, 1)

    def vsub(self, a, b):
        if self.prime:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        if self._np_add is not None:
            return self._np_add[a, self._np_neg[b]]
        return self._vdigit(a, b, -1)

    def _vdigit(self, a, b, sign):
        p, out, scale = self.p, np.zeros(np.broadcast(a, b).shape, dtype=np.int64), 1
        for _ in range(self.k):
            out += ((a // scale % p + sign * (b // scale % p)) % p) * scale
            scale *= p
        return out

    def vneg(self, a):
        if self.prime:
            return (-a) % self.p
        return self._np_neg[a]

    def vmul(self, a, b):
        if self.prime:
            return a * b % self.p
        if self._np_mul is not None:
            return self._np_mul[a, b]
        out = self._np_exp[self._np_log[a] + self._np_log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self._np_inv[a]

    def vdiv(self, a, b):
        return self.vmul(a, self.vinv(b))

    # misc -------------------------------------------------------------------
    def sign(self, parity):
        """(-1)^parity as a code."""
        return 1 if parity % 2 == 0 else self.neg(1)

    def __call__(self, x):
        if isinstance(x, Fe):
            if x.field != self:
                raise FieldMismatch("element belongs to another field")
            return x
        x = int(x)
        if self.prime:
            return Fe(self, x % self.p)
        if not 0 <= x < self.q:
            raise ValueError(f"code {x} out of range for q={self.q}")
        return Fe(self, x)

    def elements(self):
        return [Fe(self, c) for c in range(self.q)]

    def __str__(self):
        if self.prime:
            return f"{self.p}^1"
        return f"{self.p}^{self.k}/{self.modulus_code}"

    def __repr__(self):
        return f"GF({self})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))


class Fe:
    __slots__ = ("field", "code")

    def __init__(self, field, code):
        self.field = field
        self.code = code

    def _other(self, b):
        if isinstance(b, Fe):
            if b.field != self.field:
                raise FieldMismatch("operands from different fields")
            return b.code
        return self.field(b).code

    def __add__(self, b):
        return Fe(self.field, self.field.add(self.code, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return Fe(self.field, self.field.sub(self.code, self._other(b)))

    def __rsub__(self, b):
        return Fe(self.field, self.field.sub(self._other(b), self.code))

    def __mul__(self, b):
        return Fe(self.field, self.field.mul(self.code, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return Fe(self.field, self.field.div(self.code, self._other(b)))

    def __rtruediv__(self, b):
        return Fe(self.field, self.field.div(self._other(b), self.code))

    def __neg__(self):
        return Fe(self.field, self.field.neg(self.code))

    def __pow__(self, e):
        return Fe(self.field, self.field.pow(self.code, e))

    def inv(self):
        return Fe(self.field, self.field.inv(self.code))

    def __eq__(self, b):
        if isinstance(b, Fe):
            return self.field == b.field and self.code == b.code
        if isinstance(b, int):
            return self.code == self.field(b).code
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    __index__ = __int__

    def __repr__(self):
        return f"Fe({self.code} in GF({self.field}))"


@lru_cache(maxsize=None)
def _cached_field(p, k, modulus):
    return GF(p, k, modulus)


def field_make(p, k=1, modulus=None):
    """Build (or fetch the cached) field GF(p^k)."""
    if isinstance(modulus, list):
        modulus = tuple(modulus)
    f = _cached_field(p, k, modulus)
    if modulus is None and k > 1:
        return _cached_field(p, k, f.modulus)
    return f


def parse_field(text):
    """Parse ``"p^k"`` or ``"p^k/code"`` (also accepts a bare ``"p"``)."""
    text = text.strip()
    mod = None
    if "/" in text:
        text, m = text.split("/", 1)
        mod = int(m)
    if "^" in text:
        ps, ks = text.split("^", 1)
        p, k = int(ps), int(ks)
    else:
        p, k = int(text), 1
    if mod is not None and k > 1:
        mod = tuple(_code_to_poly(mod, p))
    elif k == 1:
        mod = None
    return field_make(p, k, mod)


def fe_arith(op, a, b=None):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "inv":
        return a.inv()
    if op == "neg":
        return -a
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown op {op!r}")


def fe_sign(field, parity):
    return Fe(field, field.sign(parity))
