"""Littlewood-type quality exponents over F_q((1/t)) and their number-wall counterparts.

Every quality value is carried as an integer exponent e with

    f(|N|) * |N| * |N|_p * |<N Theta>| = q^-e

where f enters only through b(k) = floor(log_q f(q^k)), computed exactly.
A window check, a two-sided audit between windows and Diophantine solutions,
and the substitution Theta(t) -> Theta(p(t)) with its exponent scaling are
built on top.
"""
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import InsufficientPrecision, InsufficientPrefix, ReducibleBase
from .polylaurent import (NEG_INF, LaurentTrunc, Poly, frac, is_irreducible,
                          mul_poly_series, substitute, to_text)
from .wall import wall_frame

# Window size that counts as a violation: l + b(m+n).  This is the length the
# Hankel kernel argument needs; a looser reading uses l + b(m+n) - 1.
THRESHOLD_NOTE = ("violation when a zero diagonal of length >= l + b(m+n) starts at row m, "
                  "column m+n+1 (kernel convention; the looser reading uses l + b(m+n) - 1)")


# --- growth functions ---------------------------------------------------------

def _floor_log(x, q):
    """floor(log_q x) for a positive rational x, by integer comparison."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of a non-positive value")
    b = 0
    if x >= 1:
        while q ** (b + 1) <= x:
            b += 1
    else:
        while Fraction(q) ** b > x:
            b -= 1
    return b


@dataclass(frozen=True)
class GrowthFn:
    """f evaluated on |N| = q^k.

    kinds: "constant" (f = c), "log_sq" (f(q^k) = k^2, and 1 at k = 0),
    "log_mul_loglog" (f(q^k) = max(1, k log_q k)), "table" (explicit values,
    last value repeated beyond the table).
    """
    kind: str = "constant"
    c: Fraction = Fraction(1)
    table: tuple = ()

    def value(self, k, q):
        """f(q^k) as an exact rational, or None when it is irrational."""
        if self.kind == "constant":
            return Fraction(self.c)
        if self.kind == "log_sq":
            return Fraction(max(k * k, 1))
        if self.kind == "table":
            return Fraction(self.table[min(k, len(self.table) - 1)])
        if self.kind == "log_mul_loglog":
            if k <= 1:
                return Fraction(1)
            b = _floor_log(k, q)
            if q ** b == k:
                return Fraction(max(k * b, 1))
            return None
        raise ValueError(f"unknown growth kind {self.kind!r}")

    def b(self, k, q):
        if self.kind == "log_mul_loglog":
            # q^b <= k log_q k  <=>  q^(q^b) <= k^k
            if k <= 1:
                return 0
            kk, b = k ** k, 0
            if kk < q:
                return 0
            while q ** (q ** (b + 1)) <= kk:
                b += 1
            return b
        return _floor_log(self.value(k, q), q)

    def check_monotone(self, kmax, q):
        vals = [self.b(k, q) for k in range(kmax + 1)]
        if any(y < x for x, y in zip(vals, vals[1:])):
            raise ValueError(f"growth function {self.describe()} decreases below q^{kmax}")
        return True

    def describe(self):
        if self.kind == "constant":
            return f"const:{self.c}"
        if self.kind == "table":
            return "table:" + ",".join(str(x) for x in self.table)
        return {"log_sq": "log2", "log_mul_loglog": "loglog"}[self.kind]


ONE = GrowthFn()


def parse_growth(text):
    text = text.strip()
    if text.startswith("const:"):
        c = Fraction(text[6:])
        if c <= 0:
            raise ValueError("growth constant must be positive")
        return GrowthFn("constant", c)
    if text in ("log2", "log_sq"):
        return GrowthFn("log_sq")
    if text in ("loglog", "log_mul_loglog"):
        return GrowthFn("log_mul_loglog")
    if text.startswith("table:"):
        vals = tuple(Fraction(x) for x in text[6:].split(",") if x)
        if not vals or min(vals) <= 0:
            raise ValueError("growth table needs positive values")
        return GrowthFn("table", table=vals)
    raise ValueError(f"unknown growth spec {text!r} (use const:C, log2, loglog or table:v0,v1,...)")


# --- single quality evaluation -----------------------------------------------

@dataclass
class DioWitness:
    N: Poly
    k: int                    # power of p split out of N
    exponent: int             # value is q^-exponent (a lower bound when not exact)
    ledger: dict = dc_field(default_factory=dict)
    precision_used: int = 0
    exact: bool = True        # False: <N Theta> vanished down to the floor

    def to_json(self):
        return {"N": to_text(self.N), "k": self.k, "exponent": self.exponent,
                "exact": self.exact, "ledger": dict(self.ledger),
                "precision_used": self.precision_used}


def _split_power(N, p):
    k = 0
    while True:
        quo, rem = N.divmod(p)
        if not rem.is_zero():
            return k
        N, k = quo, k + 1


def dio_exponent(theta, N, p, f=ONE, k=None, floor=None):
    """Exponent ledger of f(|N|) |N| |N|_p |<N Theta>|.

    ``k`` fixes how many factors of p are split out of N; by default the full
    p-adic valuation is used, which gives the true p-adic norm.  ``floor``
    caps how many fractional coefficients are inspected.
    """
    F = theta.field
    if N.is_zero():
        raise ValueError("N must be nonzero")
    if k is None:
        k = _split_power(N, p)
    q, dN, m = F.q, N.deg, p.deg
    prod = mul_poly_series(N, theta)
    fr = frac(prod)
    avail = prod.prec if floor is None else min(prod.prec, floor)
    j = 1
    while j <= avail and fr.coeff(-j) == 0:
        j += 1
    exact = j <= avail
    b = f.b(dN, q)
    ledger = {"growth": -b, "abs": -dN, "padic": m * k, "frac": j}
    return DioWitness(N, k, sum(ledger.values()), ledger, theta.prec, exact)


# --- truncated infimum ----------------------------------------------------------

def _monic_block(F, d):
    """All monic polynomials of degree d as an (q^d, d+1) code array, ascending."""
    q = F.q
    idx = np.arange(q ** d, dtype=np.int64)
    cols = [(idx // q ** j) % q for j in range(d)]
    cols.append(np.ones_like(idx))
    return np.stack(cols, axis=1)


def _divisible(F, A, p):
    """Rows of A (ascending coefficients) divisible by p."""
    pc = np.array(Poly(F, p.coeffs).monic().coeffs, dtype=np.int64)
    m = len(pc) - 1
    R = A.copy()
    for i in range(R.shape[1] - 1, m - 1, -1):
        c = R[:, i:i + 1]
        R[:, i - m:i + 1] = F.vsub(R[:, i - m:i + 1], F.vmul(c, pc[None, :]))
    return ~np.any(R[:, :m] != 0, axis=1)


@dataclass
class InfReport:
    l_star: int
    exact: bool
    witness: DioWitness
    bounds: dict
    candidates: int
    unresolved: int

    def to_json(self):
        return {"l_star": self.l_star, "exact": self.exact, "witness": self.witness.to_json(),
                "bounds": dict(self.bounds), "candidates": self.candidates,
                "unresolved": self.unresolved}


def truncated_inf(theta, D, K, p, f=ONE, coprime=True):
    """Largest exponent over N = M p^k, M monic, deg M <= D, 0 <= k <= K.

    With ``coprime`` the M divisible by p are skipped and every value is a true
    quality value.  Without it M ranges over all monic polynomials and the value
    is |M| |<Theta M p^k>| weighted by f(|N|), the form in which the exponent
    scales exactly under Theta(t) -> Theta(p(t)) on finite ranges.
    """
    F, q, m = theta.field, theta.field.q, p.deg
    if m is NEG_INF or m < 1:
        raise ValueError("p must have degree >= 1")
    best = None   # (exponent, resolved, d, row, k)
    total = unresolved = 0
    pk = Poly(F, [1])
    for k in range(K + 1):
        tk = mul_poly_series(pk, theta)
        need = tk.prec - D
        if need < 1:
            raise InsufficientPrecision(
                f"D={D}, K={K} with deg p={m} needs prec > {D + m * k}, have {theta.prec}",
                D + m * k + 1)
        x = np.array([tk.coeff(-i) for i in range(1, tk.prec + 1)], dtype=np.int64)
        for d in range(D + 1):
            A = _monic_block(F, d)
            if coprime:
                A = A[~_divisible(F, A, p)] if d >= m else A
            if len(A) == 0:
                continue
            I = tk.prec - d
            Z = np.zeros((len(A), I), dtype=np.int64)
            for j in range(d + 1):
                Z = F.vadd(Z, F.vmul(A[:, j:j + 1], x[j:j + I][None, :]))
            nz = Z != 0
            resolved = nz.any(axis=1)
            first = np.where(resolved, nz.argmax(axis=1) + 1, I + 1)
            base = -f.b(d + m * k, q) - d
            ex = base + first
            total += len(A)
            unresolved += int((~resolved).sum())
            i = int(np.argmax(ex))
            key = (int(ex[i]), bool(resolved[i]))
            if best is None or key[0] > best[0]:
                best = (key[0], key[1], d, A[i].copy(), k)
        pk = pk * p
    e, res, d, row, k = best
    N = Poly(F, [int(c) for c in row]) * (p ** k)
    w = dio_exponent(theta, N, p, f, k=k)
    if w.exponent != e:
        raise AssertionError(f"vectorised scan gave {e}, ledger gives {w.exponent} for {to_text(N)}")
    return InfReport(e, unresolved == 0, w,
                     {"D": D, "K": K, "prec": theta.prec, "p": to_text(p), "coprime": coprime,
                      "growth": f.describe()},
                     total, unresolved)


# --- window side -----------------------------------------------------------------

def _seq_codes(S):
    if isinstance(S, LaurentTrunc):
        if S.h >= 0:
            raise ValueError("Theta must be a pure fraction (no polynomial part)")
        return S.field, [S.coeff(-i) for i in range(1, S.prec + 1)]
    return S.field, list(S.values)


def _diag_run(W, m, c):
    j = 0
    while W.support(m + j, c + j) and W[m + j, c + j] == 0:
        j += 1
    return j


def _diag_open(W, m, c, j):
    """True when the run from (m, c) stopped at the wall edge, not at a nonzero."""
    return not W.support(m + j, c + j)


def window_check(S, l, f=ONE, addressing="column", wall=None):
    """Scan windows for zero diagonals long enough to violate the quality bound q^-l."""
    F, s = _seq_codes(S)
    W = wall if wall is not None else wall_frame(s, F, provenance=False)
    q = F.q
    violations, potential = [], []
    for w in W.windows:
        m0, c0 = w.m, w.n
        n = c0 - m0 - 1
        key = m0 + n if addressing == "column" else m0 + c0
        T = l + f.b(key, q)
        run = _diag_run(W, m0, c0)
        rec = {"m": m0, "n": n, "column": c0, "size": run, "threshold": T, "status": w.status}
        if run >= T:
            violations.append(rec)
        elif not w.size_known and _diag_open(W, m0, c0, run):
            potential.append(rec)
    violations.sort(key=lambda x: (x["m"], x["n"]))
    known = [w.l for w in W.windows if w.size_known]
    complete = [w.l for w in W.windows if w.status == "complete"]
    return {
        "verdict": "violation" if violations else "pass",
        "first": violations[0] if violations else None,
        "violations": violations,
        "potential": potential,
        "max_complete": max(complete, default=0),
        "max_known": max(known, default=0),
        "l": l, "growth": f.describe(), "addressing": addressing,
        "convention": THRESHOLD_NOTE, "r": W.r,
    }


# --- two-sided audit ----------------------------------------------------------------

def _kernel(F, H):
    """Basis of the right kernel of H (list of rows of codes) over F."""
    rows = [list(r) for r in H]
    ncol = len(rows[0]) if rows else 0
    piv_cols, r = [], 0
    for c in range(ncol):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                fct = rows[i][c]
                rows[i] = [F.sub(a, F.mul(fct, b)) for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncol) if c not in piv_cols]
    basis = []
    for fc in free:
        v = [0] * ncol
        v[fc] = 1
        for i, pc in enumerate(piv_cols):
            v[pc] = F.neg(rows[i][fc])
        basis.append(v)
    return basis


def _span(F, basis, cap):
    """Up to ``cap`` nonzero vectors of the span (all of them when it is small)."""
    q = F.q
    out = []
    for idx in range(1, min(q ** len(basis), cap + 1)):
        coef, x = [], idx
        for _ in basis:
            coef.append(x % q)
            x //= q
        v = [0] * len(basis[0])
        for c, b in zip(coef, basis):
            if c:
                v = [F.add(a, F.mul(c, y)) for a, y in zip(v, b)]
        out.append(v)
    return out


def equivalence_audit(S, l, f=ONE, D=4, brute=None, span_cap=729):
    """Check on a finite prefix that kernel solutions and zero diagonals coincide.

    For every deg d <= D and shift n >= 0 whose diagonal fits in the wall:
      - the Hankel system of L + d equations (L = l + b(d+n)) in d+1 unknowns has a
        nonzero kernel exactly when the L diagonal cells from (d, d+n+1) are zero;
      - every kernel vector gives N = M t^n with exponent >= l+1 by the ledger;
      - every exact-degree, t-coprime M that the ledger calls a solution lies in
        the kernel (brute-force over all monic M when q^D is small).
    """
    F, s = _seq_codes(S)
    r, q = len(s), F.q
    theta = LaurentTrunc.from_seq(F, s)
    W = wall_frame(s, F, provenance=False)
    if brute is None:
        brute = q ** D <= 256
    t = Poly.t(F)
    L0 = l + f.b(D, q)
    if 2 * D + 2 * L0 - 1 > r:
        raise InsufficientPrefix(
            f"degree {D} with window length {L0} needs a prefix of {2 * D + 2 * L0 - 1}, have {r}")
    checked = kernel_hits = diag_hits = verified = zero_witnesses = 0
    mismatches = []
    for d in range(D + 1):
        n = 0
        while True:
            L = l + f.b(d + n, q)
            if L < 1:
                L = 1
            if n + 2 * d + 2 * L - 1 > r:
                break
            checked += 1
            diag = all(W[d + i, n + d + 1 + i] == 0 for i in range(L))
            H = [[s[i + j + n - 1] for j in range(d + 1)] for i in range(1, L + d + 1)]
            basis = _kernel(F, H)
            kernel_hits += bool(basis)
            diag_hits += diag
            if bool(basis) != diag:
                mismatches.append({"d": d, "n": n, "L": L, "kernel_dim": len(basis), "diagonal": diag})
            for v in _span(F, basis, span_cap) if basis else ():
                N = Poly(F, v) * (t ** n)
                w = dio_exponent(theta, N, t, f)
                verified += 1
                zero_witnesses += not w.exact
                if w.exponent < l + 1:
                    mismatches.append({"d": d, "n": n, "kernel_vector": v, "exponent": w.exponent})
            if brute:
                kset = {tuple(v) for v in (_span(F, basis, q ** len(basis)) if basis else ())}
                for A in _monic_block(F, d):
                    if d > 0 and A[0] == 0:
                        continue
                    N = Poly(F, [int(x) for x in A]) * (t ** n)
                    w = dio_exponent(theta, N, t, f)
                    sol = w.exponent >= l + 1
                    if sol != (tuple(int(x) for x in A) in kset):
                        mismatches.append({"d": d, "n": n, "M": [int(x) for x in A],
                                           "exponent": w.exponent, "in_kernel": not sol})
            n += 1
    open_windows = sum(1 for w in W.windows if not w.size_known)
    return {
        "verdict": "match" if not mismatches else "mismatch",
        "pairs": checked, "kernel_nonzero": kernel_hits, "diagonals_zero": diag_hits,
        "kernel_vectors_verified": verified, "exact_zero_witnesses": zero_witnesses,
        "open_windows": open_windows, "mismatches": mismatches[:20],
        "mismatch_count": len(mismatches), "l": l, "D": D, "r": r,
        "growth": f.describe(), "convention": THRESHOLD_NOTE, "brute": brute,
    }


# --- transference ---------------------------------------------------------------------

def transfer(b, p, D, K, prec_t, f=ONE):
    """Compare truncated infima of Theta(t) and Theta(p(t)) on matched ranges.

    Base range: deg M <= D, k <= K with p = t.  Transferred range: deg M <= m(D+1)-1,
    k <= K with the given p, which is the image of the base range under the
    base-p digit decomposition.  Precision: n = floor(prec_t/m) coefficients on
    the base side and m*n on the transferred side.
    """
    F = p.field
    if not is_irreducible(p):
        raise ReducibleBase(f"{to_text(p)} is not irreducible over GF({F})")
    m = p.deg
    nb = prec_t // m
    b = [int(x) for x in b]
    base = LaurentTrunc.from_seq(F, b[:nb])
    if base.prec < nb:
        raise InsufficientPrecision(f"need {nb} coefficients, have {len(b)}", nb)
    lifted = substitute(b[:nb], p, m * nb)
    r0 = truncated_inf(base, D, K, Poly.t(F), f, coprime=False)
    r1 = truncated_inf(lifted, m * (D + 1) - 1, K, p, f, coprime=False)
    if r0.exact and r1.exact:
        verdict = "match" if r1.l_star == m * r0.l_star else "mismatch"
    else:
        verdict = "inconclusive"
    return {
        "verdict": verdict, "m": m, "l_base": r0.l_star, "l_trans": r1.l_star,
        "base": r0.to_json(), "transferred": r1.to_json(),
        "bounds": {"D": D, "K": K, "D_trans": m * (D + 1) - 1, "prec_base": nb, "prec_trans": m * nb},
    }
