"""Number walls: determinant oracle, frame-constraint engine, windows, blades.

Indexing follows the usual convention: the sequence is 1-indexed, row 0 is the
sequence itself (W[0, n] = s_n), row -1 is all ones and row -2 all zeros.  Row
m of a length-r wall spans columns m+1 .. r-m, so the deepest row is
floor((r-1)/2).

Storage is a dense int64 array with row index m+2 and column index n+1
(columns -1 .. r+2); cells outside the triangle hold 0 and are masked by
``in_support``.

Window geometry used by the engine (top-left zero at row m0, column n0, side l):

    A_k = W[m0-1,   n0-1+k]   top inner edge, from the top-left corner
    B_k = W[m0-1+k, n0-1]     left inner edge, from the top-left corner
    C_k = W[m0+l-k, n0+l]     right inner edge, from the bottom-right corner
    D_k = W[m0+l,   n0+l-k]   bottom inner edge, from the bottom-right corner

with E, F, G, H the outer-frame cells adjacent to A, B, C, D, and ratios
P, Q, R, S the common ratios of A, B, C, D in those directions.
"""
import json
from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np
from scipy import ndimage

from .errors import (DivisionByZero, InternalInconsistency,
                     NonGeometricEdge, NonSquareZeroRegion, NotComplete,
                     OutOfSupport, TooShort)

# provenance codes
SEED, CROSS, INSIDE, FC_INNER, FC_OUTER = 0, 1, 2, 3, 4
PROVENANCE_NAMES = {SEED: "seed", CROSS: "cross", INSIDE: "window",
                    FC_INNER: "inner-frame", FC_OUTER: "outer-frame"}

# field operations charged per cell on each path
_OPS = {CROSS: 4, FC_INNER: 4, FC_OUTER: 17}


def depth_of(r):
    return (r - 1) // 2


class OpCounter:
    def __init__(self):
        self.ops = 0

    def add(self, n):
        self.ops += int(n)


# --- determinant oracle --------------------------------------------------------

def _det(F, M, counter=None):
    """Determinant by Gaussian elimination with pivot search (exact in a field)."""
    M = [row[:] for row in M]
    n = len(M)
    det = 1
    ops = 0
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            if counter is not None:
                counter.add(ops)
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = F.neg(det)
        pc = M[c][c]
        det = F.mul(det, pc)
        inv = F.inv(pc)
        ops += 2
        rowc = M[c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = F.mul(M[i][c], inv)
                rowi = M[i]
                for j in range(c + 1, n):
                    if rowc[j]:
                        rowi[j] = F.sub(rowi[j], F.mul(f, rowc[j]))
                ops += 1 + 2 * (n - c - 1)
    if counter is not None:
        counter.add(ops)
    return det


def _codes(S):
    return list(S.values) if hasattr(S, "values") else [int(x) for x in S]


def toeplitz_det(S, n, m, field=None, counter=None):
    """det T_S(n, m), T[i][j] = s_{n-i+j}, for the 1-indexed sequence S."""
    F = field or S.field
    s = _codes(S)
    if m == -1:
        return 1
    if m < -1:
        return 0
    if n - m < 1 or n + m > len(s):
        raise OutOfSupport(f"T({n},{m}) needs s_{n - m}..s_{n + m}; sequence has length {len(s)}")
    M = [[s[n - i + j - 1] for j in range(m + 1)] for i in range(m + 1)]
    return _det(F, M, counter)


def hankel_det(S, n, m, field=None):
    """det H_S(n, m), H[i][j] = s_{n+i+j}."""
    F = field or S.field
    s = _codes(S)
    if n < 1 or n + 2 * m > len(s):
        raise OutOfSupport(f"H({n},{m}) needs s_{n}..s_{n + 2 * m}")
    M = [[s[n + i + j - 1] for j in range(m + 1)] for i in range(m + 1)]
    return _det(F, M)


# --- the Wall object -------------------------------------------------------------

@dataclass
class WindowRec:
    m: int                # top row
    n: int                # left-most visible column of the top row
    l: int                # side length if known, else the visible lower bound
    status: str           # complete, closed-incomplete, right-open, left-open, both-open
    width: int = 0        # visible extent of the top row
    height: int = 0       # visible number of rows
    ratios: tuple = None  # (P, Q, R, S) codes for complete windows

    @property
    def size_known(self):
        return self.status in ("complete", "closed-incomplete")

    def to_json(self):
        return {"l": self.l, "n": self.n, "m": self.m, "status": self.status,
                "ratios": list(self.ratios) if self.ratios is not None else None}


class Wall:
    def __init__(self, field, seq, array, provenance=None, registry=None, ops=0):
        self.field = field
        self.seq = tuple(int(x) for x in seq)
        self.r = len(self.seq)
        self.depth = depth_of(self.r)
        self.array = array
        self.provenance = provenance
        self.registry = registry   # engine's window tops: rows of (m, n, width, bounded)
        self.ops = ops
        self._windows = None

    def __getitem__(self, mn):
        m, n = mn
        if not self.support(m, n):
            raise OutOfSupport(f"({m},{n}) lies outside the wall of length {self.r}")
        return int(self.array[m + 2, n + 1])

    def support(self, m, n):
        return -2 <= m <= self.depth and m + 1 <= n <= self.r - m

    def get(self, m, n, default=None):
        return self[m, n] if self.support(m, n) else default

    def cells(self):
        for m in range(-2, self.depth + 1):
            for n in range(m + 1, self.r - m + 1):
                yield m, n

    def support_mask(self):
        R, C = self.array.shape
        m = np.arange(R)[:, None] - 2
        n = np.arange(C)[None, :] - 1
        return (n >= m + 1) & (n <= self.r - m)

    def same_entries(self, other):
        return self.r == other.r and np.array_equal(self.array * self.support_mask(),
                                                    other.array * other.support_mask())

    @property
    def windows(self):
        if self._windows is None:
            self._windows = detect_windows(self)
        return self._windows

    # exports -------------------------------------------------------------------
    def to_csv(self):
        lines = ["m,n,value"]
        for m, n in self.cells():
            lines.append(f"{m},{n},{self[m, n]}")
        return "\n".join(lines) + "\n"

    def windows_json(self):
        return json.dumps([w.to_json() for w in self.windows], sort_keys=True)

    def to_ppm(self):
        q = self.field.q
        R, C = self.array.shape
        img = np.full((R, C, 3), 255, dtype=np.uint8)
        mask = self.support_mask()
        vals = self.array
        grey = np.rint(255 * (1 - vals / q)).astype(np.uint8)
        for ch in range(3):
            img[..., ch] = np.where(mask, grey, 255)
        zero = mask & (vals == 0)
        img[zero] = (255, 0, 0)
        return f"P6\n{C} {R}\n255\n".encode() + img.tobytes()


def _empty_array(r, N=None, q=None):
    D = depth_of(r)
    shape = (D + 3, r + 4) if N is None else (N, D + 3, r + 4)
    dtype = np.int64 if q is None else (np.uint8 if q <= 256 else np.int32)
    A = np.zeros(shape, dtype=dtype)
    A[..., 1, :] = 1
    return A


def wall_naive(S, field=None, counter=None):
    F = field or S.field
    s = _codes(S)
    r = len(s)
    A = _empty_array(r)
    for m in range(0, depth_of(r) + 1):
        for n in range(m + 1, r - m + 1):
            A[m + 2, n + 1] = toeplitz_det(s, n, m, F, counter)
    return Wall(F, s, A)


# --- frame-constraint engine (vectorised over a batch of sequences) -------------

def _runs(z):
    """For a boolean (N, W) array: start and end index of the run through each cell."""
    N, W = z.shape
    idx = np.broadcast_to(np.arange(W), (N, W))
    prev = np.zeros_like(z)
    prev[:, 1:] = z[:, :-1]
    nxt = np.zeros_like(z)
    nxt[:, :-1] = z[:, 1:]
    start = np.maximum.accumulate(np.where(z & ~prev, idx, -1), axis=1)
    end = np.minimum.accumulate(np.where(z & ~nxt, idx, W)[:, ::-1], axis=1)[:, ::-1]
    return start, end


def frame_batch(F, S, provenance=False, counter=None, registry=None):
    """Walls of every row of the (N, r) code array S in O(N r^2) field ops.

    Returns the (N, depth+3, r+4) array (and the provenance array if asked).
    If ``registry`` is a list, one (k, 5) array of window tops
    (batch, m, n, width, bounded) is appended to it per row.
    """
    S = np.asarray(S, dtype=np.int64)
    N, r = S.shape
    D = depth_of(r)
    A = _empty_array(r, N, F.q)  # compact storage; slices are widened before arithmetic
    A[:, 2, 2:r + 2] = S
    P = np.zeros(A.shape, dtype=np.uint8) if provenance else None
    C = r + 4
    col_top = np.full((N, C), -99, dtype=np.int64)
    col_n0 = np.zeros((N, C), dtype=np.int64)
    col_l = np.zeros((N, C), dtype=np.int64)
    ops = 0

    def W(b, m, n):
        return A[b, m + 2, n + 1].astype(np.int64)

    def register(m):
        lo, hi = m + 1, r - m
        if hi < lo:
            return
        row = A[:, m + 2, lo + 1:hi + 2]
        up = A[:, m + 1, lo + 1:hi + 2]
        z = row == 0
        top = z & (up != 0)
        if not top.any():
            return
        start, end = _runs(z)
        b, j = np.nonzero(top)
        a = start[b, j] + lo
        e = end[b, j] + lo
        width = e - a + 1
        bounded = (a > lo) & (e < hi)
        ci = j + lo + 1
        col_top[b, ci] = m
        col_n0[b, ci] = a
        col_l[b, ci] = np.where(bounded, width, -1)
        if registry is not None:
            first = j + lo == a
            registry.append(np.stack([b[first], np.full(int(first.sum()), m), a[first],
                                      width[first], bounded[first]], axis=1))

    register(0)
    for m in range(1, D + 1):
        lo, hi = m + 1, r - m
        ns = np.arange(lo, hi + 1)
        ci = ns + 1
        up2 = A[:, m, ci].astype(np.int64)
        up1 = A[:, m + 1, ci].astype(np.int64)
        out = np.zeros((N, len(ns)), dtype=np.int64)
        prov = np.zeros((N, len(ns)), dtype=np.uint8)

        cross = up2 != 0
        b, j = np.nonzero(cross)
        if len(b):
            c = ci[j]
            u1 = up1[b, j]
            num = F.vsub(F.vmul(u1, u1), F.vmul(W(b, m - 1, c - 2), W(b, m - 1, c)))
            out[b, j] = F.vdiv(num, up2[b, j])
            prov[b, j] = CROSS
            ops += _OPS[CROSS] * len(b)

        below = ~cross
        if below.any():
            top = col_top[:, ci]
            l = col_l[:, ci]
            n0 = col_n0[:, ci]
            inner = below & (up1 == 0)
            fc2 = inner & (l >= 0) & (m - top == l)
            inside = inner & ~fc2
            if (inside & (l >= 0) & (m - top > l)).any():
                raise InternalInconsistency(f"row {m}: zero cell below a closed window")
            prov[inside] = INSIDE
            b, j = np.nonzero(fc2)
            if len(b):
                t, ll, a0 = top[b, j], l[b, j], n0[b, j]
                k = a0 + ll - ns[j]
                Ak = W(b, t - 1, a0 - 1 + k)
                Bk = W(b, t - 1 + k, a0 - 1)
                Ck = W(b, t + ll - k, a0 + ll)
                try:
                    val = F.vdiv(F.vmul(Bk, Ck), Ak)
                except DivisionByZero:
                    raise InternalInconsistency(f"row {m}: zero on an inner frame") from None
                odd = (ll * k) % 2 == 1
                out[b, j] = np.where(odd, F.vneg(val), val)
                prov[b, j] = FC_INNER
                ops += _OPS[FC_INNER] * len(b)
            outer = below & (up1 != 0)
            b, j = np.nonzero(outer)
            if len(b):
                t, ll, a0 = top[b, j], l[b, j], n0[b, j]
                if (ll < 0).any() or (m - 1 - t != ll).any():
                    raise InternalInconsistency(f"row {m}: outer frame under an unsized window")
                k = a0 + ll - ns[j]
                A0 = W(b, t - 1, a0 - 1)
                Ak = W(b, t - 1, a0 - 1 + k)
                Bk = W(b, t - 1 + k, a0 - 1)
                Ck = W(b, t + ll - k, a0 + ll)
                Dk = up1[b, j]
                # ratios from pairs that are always inside the triangle
                Pr = F.vdiv(W(b, t - 1, a0), A0)
                Qr = F.vdiv(W(b, t, a0 - 1), A0)
                Rr = F.vdiv(W(b, t - 1, a0 + ll), W(b, t, a0 + ll))
                Sr = F.vdiv(Dk, W(b, t + ll, ns[j] + 1))
                Ek = W(b, t - 2, a0 - 1 + k)
                Fk = W(b, t - 1 + k, a0 - 2)
                Gk = W(b, t + ll - k, a0 + ll + 1)
                try:
                    x = F.vdiv(F.vmul(Qr, Ek), Ak)
                    y = F.vsub(F.vdiv(F.vmul(Pr, Fk), Bk), F.vdiv(F.vmul(Sr, Gk), Ck))
                    y = np.where(k % 2 == 1, F.vneg(y), y)
                    val = F.vdiv(F.vmul(F.vadd(x, y), Dk), Rr)
                except DivisionByZero:
                    raise InternalInconsistency(f"row {m}: zero on an inner frame") from None
                out[b, j] = val
                prov[b, j] = FC_OUTER
                ops += _OPS[FC_OUTER] * len(b)

        A[:, m + 2, ci] = out
        if P is not None:
            P[:, m + 2, ci] = prov
        register(m)
    if counter is not None:
        counter.add(ops)
    return (A, P) if provenance else A


def wall_frame(S, field=None, counter=None, provenance=True):
    F = field or S.field
    s = _codes(S)
    if not s:
        raise TooShort("empty sequence")
    reg = []
    c = OpCounter()
    out = frame_batch(F, np.array([s], dtype=np.int64), provenance=provenance, counter=c, registry=reg)
    A, P = out if provenance else (out, None)
    if counter is not None:
        counter.add(c.ops)
    tops = np.concatenate(reg)[:, 1:] if reg else np.zeros((0, 4), dtype=np.int64)
    return Wall(F, s, A[0], None if P is None else P[0], tops, c.ops)


# --- incremental extension (scalar) ---------------------------------------------

def _cell(F, A, r, m, n):
    """Value and provenance of W[m, n] from rows above, walking the geometry."""
    def W(i, j):
        return int(A[i + 2, j + 1])

    def sup(i, j):
        return i + 1 <= j <= r - i

    up2, up1 = W(m - 2, n), W(m - 1, n)
    if up2:
        num = F.sub(F.mul(up1, up1), F.mul(W(m - 1, n - 1), W(m - 1, n + 1)))
        return F.div(num, up2), CROSS
    t = m - 2
    while t - 1 >= 0 and W(t - 1, n) == 0:
        t -= 1
    a = n
    while sup(t, a - 1) and W(t, a - 1) == 0:
        a -= 1
    e = n
    while sup(t, e + 1) and W(t, e + 1) == 0:
        e += 1
    bounded = sup(t, a - 1) and sup(t, e + 1)
    l = e - a + 1
    if up1 == 0:
        if not bounded or m - t < l:
            return 0, INSIDE
        if m - t > l:
            raise InternalInconsistency(f"({m},{n}) sits below a closed window")
        k = a + l - n
        val = F.div(F.mul(W(t - 1 + k, a - 1), W(t + l - k, a + l)), W(t - 1, a - 1 + k))
        return (F.neg(val) if (l * k) % 2 else val), FC_INNER
    if not bounded or m - 1 - t != l:
        raise InternalInconsistency(f"({m},{n}) needs the outer frame of an unsized window")
    k = a + l - n
    A0 = W(t - 1, a - 1)
    Pr, Qr = F.div(W(t - 1, a), A0), F.div(W(t, a - 1), A0)
    Rr, Sr = F.div(W(t - 1, a + l), W(t, a + l)), F.div(up1, W(m - 1, n + 1))
    x = F.div(F.mul(Qr, W(t - 2, a - 1 + k)), W(t - 1, a - 1 + k))
    y = F.sub(F.div(F.mul(Pr, W(t - 1 + k, a - 2)), W(t - 1 + k, a - 1)),
              F.div(F.mul(Sr, W(t + l - k, a + l + 1)), W(t + l - k, a + l)))
    if k % 2:
        y = F.neg(y)
    return F.div(F.mul(F.add(x, y), up1), Rr), FC_OUTER


def extend_diagonal(W, s_next, report=None):
    """Wall of S + (s_next,), computing only the new diagonal.

    If ``report`` is a list it receives (m, n, "free"|"determined") for each new
    cell; a cell is determined exactly when its above-left neighbour on the
    previous diagonal is zero.
    """
    F = W.field
    r = W.r + 1
    A = _empty_array(r)
    R0, C0 = W.array.shape
    A[2:R0, :C0] = W.array[2:, :]
    Pv = np.zeros(A.shape, dtype=np.uint8)
    if W.provenance is not None:
        Pv[:R0, :C0] = W.provenance
    A[2, r + 1] = int(s_next) % F.q if F.prime else int(s_next)
    if report is not None:
        report.append((0, r, "free"))
    for m in range(1, depth_of(r) + 1):
        n = r - m
        v, pv = _cell(F, A, r, m, n)
        A[m + 2, n + 1] = v
        Pv[m + 2, n + 1] = pv
        if report is not None:
            report.append((m, n, "determined" if A[m + 1, n] == 0 else "free"))
    return Wall(F, W.seq + (int(A[2, r + 1]),), A, Pv)


def wall_incremental(S, field=None):
    F = field or S.field
    s = _codes(S)
    W = Wall(F, s[:1], _empty_array(1))
    W.array[2, 2] = s[0]
    for x in s[1:]:
        W = extend_diagonal(W, x)
    return W


# --- windows -------------------------------------------------------------------

def detect_windows(W):
    """Classify every zero region of rows 0..depth; raise if one is not a clipped square."""
    r, D = W.r, W.depth
    if D < 0:
        return []
    mask = W.support_mask()
    zero = (W.array == 0) & mask
    zero[:2, :] = False
    labels, count = ndimage.label(zero)
    out = []
    for lab, sl in enumerate(ndimage.find_objects(labels), start=1):
        rs, cs = sl
        a, b = rs.start - 2, rs.stop - 3          # rows
        c, d = cs.start - 1, cs.stop - 2          # columns
        region = labels[sl] == lab
        if not np.array_equal(region, mask[sl]):
            raise NonSquareZeroRegion(f"zero region at row {a}, columns {c}..{d} is not a clipped square")
        w, h = d - c + 1, b - a + 1
        left_b = W.support(a, c - 1)
        right_b = W.support(a, d + 1)
        bottom_b = any(W.support(b + 1, x) for x in range(c, d + 1))
        if left_b and right_b:
            L = w
            if h > L or (bottom_b and h != L):
                raise NonSquareZeroRegion(f"zero region at ({a},{c}) is {h} tall and {w} wide")
        elif bottom_b:
            L = h
            if w > L:
                raise NonSquareZeroRegion(f"zero region at ({a},{c}) is {h} tall and {w} wide")
        else:
            L = None
        if L is not None:
            ring = all(W.support(a - 1, x) and W.support(a + L, x) for x in range(c - 1, c + L + 1)) and \
                all(W.support(y, c - 1) and W.support(y, c + L) for y in range(a - 1, a + L + 1))
            status = "complete" if ring and h == L else "closed-incomplete"
            rec = WindowRec(a, c, L, status, w, h)
            if status == "complete":
                rec.ratios = frame_ratios(W, rec)
        else:
            status = "right-open" if left_b else ("left-open" if right_b else "both-open")
            rec = WindowRec(a, c, max(w, h), status, w, h)
        out.append(rec)
    out.sort(key=lambda x: (x.m, x.n))
    return out


def inner_frame(W, win):
    m, n, l = win.m, win.n, win.l
    A = [W[m - 1, n - 1 + k] for k in range(l + 2)]
    B = [W[m - 1 + k, n - 1] for k in range(l + 2)]
    C = [W[m + l - k, n + l] for k in range(l + 2)]
    D = [W[m + l, n + l - k] for k in range(l + 2)]
    return A, B, C, D


def frame_ratios(W, win):
    if win.status != "complete":
        raise NotComplete(f"window at ({win.m},{win.n}) is {win.status}")
    F = W.field
    edges = inner_frame(W, win)
    ratios = []
    for name, e in zip("ABCD", edges):
        if any(x == 0 for x in e):
            raise NonGeometricEdge(f"zero on inner edge {name} of window ({win.m},{win.n})")
        rho = F.div(e[1], e[0])
        if any(F.div(e[i + 1], e[i]) != rho for i in range(len(e) - 1)):
            raise NonGeometricEdge(f"edge {name} of window ({win.m},{win.n}) is not geometric")
        ratios.append(rho)
    P, Q, R, S = ratios
    if F.div(F.mul(P, S), F.mul(Q, R)) != F.sign(win.l):
        raise NonGeometricEdge(f"PS/QR != (-1)^l at window ({win.m},{win.n})")
    return tuple(ratios)


# --- blades --------------------------------------------------------------------

class BladeShape(Enum):
    """Zero pattern (top-left, top-right, bottom) of a right-side blade."""
    FULL = (False, False, False)       # X X / X
    TR_ZERO = (False, True, False)     # X 0 / X
    TL_ZERO = (True, False, False)     # 0 X / X
    B_ZERO = (False, False, True)      # X X / 0
    TOP_ZERO = (True, True, False)     # 0 0 / X
    TL_B_ZERO = (True, False, True)    # 0 X / 0
    ZERO = (True, True, True)          # 0 0 / 0

    @classmethod
    def of(cls, tl, tr, b):
        key = (tl == 0, tr == 0, b == 0)
        try:
            return cls(key)
        except ValueError:
            raise InternalInconsistency("blade X0/0 cannot occur in a number wall") from None

    @property
    def picture(self):
        tl, tr, b = ("0" if z else "X" for z in self.value)
        return f"{tl}{tr}/{b}"


def blade_cells(W):
    if W.r < 1:
        raise TooShort("blades need r >= 1")
    d, r = W.depth, W.r
    right = (W[d - 1, r - d], W[d - 1, r - d + 1], W[d, r - d])
    left = (W[d - 1, d + 1], W[d - 1, d], W[d, d + 1])
    return right, left


def blades(W):
    right, left = blade_cells(W)
    return BladeShape.of(*right), BladeShape.of(*left)


def right_blade_array(A, r):
    """Right-side blade patterns of a batch of length-r walls (N, 3) bools."""
    d = depth_of(r)
    tl = A[:, d + 1, r - d + 1]
    tr = A[:, d + 1, r - d + 2]
    bt = A[:, d + 2, r - d + 1]
    return np.stack([tl == 0, tr == 0, bt == 0], axis=1)


def reflect_check(S, field=None):
    F = field or S.field
    s = _codes(S)
    if len(s) <= 1:
        return True
    W1 = wall_frame(s, F)
    W2 = wall_frame(s[::-1], F)
    r = len(s)
    for m in range(0, W1.depth + 1):
        for n in range(m + 1, r - m + 1):
            if W2[m, n] != W1[m, r + 1 - n]:
                return False
    return True
