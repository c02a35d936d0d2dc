"""Exhaustive counts over sequence spaces, compared with closed-form counts.

A wall "has a window containing" a portion when the portion lies inside the
square that the window is forced to occupy.  For a window cut by the edge of
the finite wall that square is the smallest one consistent with what is
visible: known size when both sides are closed, visible height when the bottom
is closed, max(visible width, visible height) otherwise.  The portion's top
row must lie in the wall (its generating entries are inside the sequence).
"""
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import (NoSeedWithBlade, OutOfRegime, OverlappingPortions,
                     SpaceTooLarge, UnsupportedShapePair)
from .ffield import field_make
from .wall import (BladeShape, depth_of, detect_windows, frame_batch, right_blade_array,
                   wall_frame)

DEFAULT_BUDGET = 1 << 26
CHUNK = 1 << 15

NONZERO_BLADES = [BladeShape.FULL, BladeShape.TR_ZERO, BladeShape.TL_ZERO,
                  BladeShape.B_ZERO, BladeShape.TOP_ZERO, BladeShape.TL_B_ZERO]
TARGET_BLADES = [BladeShape.FULL, BladeShape.TR_ZERO, BladeShape.B_ZERO]


def budget():
    env = os.environ.get("NW_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _guard(n, what):
    if n > budget():
        raise SpaceTooLarge(f"{what} needs {n} wall builds, budget is {budget()} (set NW_BUDGET)")


@dataclass(frozen=True)
class SquarePortion:
    l: int
    n: int   # column of the top-left cell
    m: int   # row of the top-left cell

    def __post_init__(self):
        if self.l < 1 or self.m < 0:
            raise ValueError(f"bad portion {self}")

    def cells(self):
        return {(a, b) for a in range(self.m, self.m + self.l) for b in range(self.n, self.n + self.l)}

    def hat_interval(self):
        """Sequence indices generating the portion's top row."""
        return self.n - self.m, self.n + self.m + self.l - 1

    def top_in_wall(self, r):
        lo, hi = self.hat_interval()
        return lo >= 1 and hi <= r

    def to_json(self):
        return {"l": self.l, "n": self.n, "m": self.m}


@dataclass
class CensusReport:
    experiment: str
    parameters: dict
    formula_value: object          # int, or a string "bound C*q^e"
    enumerated_value: int
    verdict: str                   # match, bounded, mismatch, finding
    stats: dict = dc_field(default_factory=dict)

    def to_json(self):
        return {"experiment": self.experiment, "parameters": self.parameters,
                "formula_value": self.formula_value, "enumerated_value": self.enumerated_value,
                "verdict": self.verdict, "stats": self.stats}


# --- sequence spaces and zero-run maps ------------------------------------------

def all_sequences(q, r, prefix=()):
    """All sequences of length r starting with ``prefix``, lexicographic order."""
    k = r - len(prefix)
    idx = np.arange(q ** k, dtype=np.int64)
    cols = [np.full_like(idx, int(x)) for x in prefix]
    cols += [(idx // q ** (k - 1 - j)) % q for j in range(k)]
    if not cols:
        return np.zeros((1, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


class RunMaps:
    """Per-cell zero-run lengths (up, down, left, right) for a batch of walls.

    Arrays are indexed [batch, m+2, n+1] like the wall arrays.
    """

    def __init__(self, A, r):
        self.r = r
        self.D = depth_of(r)
        N, R, C = A.shape
        m = np.arange(R)[:, None] - 2
        n = np.arange(C)[None, :] - 1
        sup = (n >= m + 1) & (n <= r - m) & (m >= 0)
        Z = (A == 0) & sup[None]
        self.Z = Z
        U = np.zeros(A.shape, dtype=np.int16)
        Dn = np.zeros(A.shape, dtype=np.int16)
        Lr = np.zeros(A.shape, dtype=np.int16)
        Rr = np.zeros(A.shape, dtype=np.int16)
        for i in range(2, R):
            U[:, i] = Z[:, i] * (U[:, i - 1] + 1)
        for i in range(R - 1, 1, -1):
            Dn[:, i] = Z[:, i] * ((Dn[:, i + 1] if i + 1 < R else 0) + 1)
        for j in range(1, C):
            Lr[:, :, j] = Z[:, :, j] * (Lr[:, :, j - 1] + 1)
        for j in range(C - 2, -1, -1):
            Rr[:, :, j] = Z[:, :, j] * (Rr[:, :, j + 1] + 1)
        self.U, self.Dn, self.Lr, self.Rr = U, Dn, Lr, Rr

    def max_window_bound(self):
        """Per wall, the largest window size lower bound (0 when zero-free)."""
        h = self.Lr + self.Rr - 1
        v = self.U + self.Dn - 1
        b = np.maximum(h, v) * self.Z
        return b.reshape(b.shape[0], -1).max(axis=1)

    def contains(self, n, m, width, height=None):
        """Walls with a window whose forced square contains the width x height block at (m, n)."""
        height = width if height is None else height
        r, D = self.r, self.D
        if not (m >= 0 and n >= m + 1 and n + width - 1 <= r - m and m <= D):
            raise OutOfRegime(f"top row of the block at ({m},{n}) width {width} leaves the wall")
        N = self.Z.shape[0]
        b = np.arange(N)
        ok = self.Rr[:, m + 2, n + 1] >= width
        m0 = m - self.U[:, m + 2, n + 1].astype(np.int64) + 1
        m0 = np.where(ok, m0, m)
        c0 = n - self.Lr[b, m0 + 2, n + 1].astype(np.int64) + 1
        d = n + self.Rr[b, m0 + 2, n + 1].astype(np.int64) - 1
        w = d - c0 + 1
        lb = c0 - 1 >= m0 + 1
        rb = d + 1 <= r - m0
        cc = np.clip((r + 1) // 2, c0, d)
        h = self.Dn[b, m0 + 2, np.clip(cc + 1, 0, self.Z.shape[2] - 1)].astype(np.int64)
        low = m0 + h
        bottom = (low <= D) & (cc >= low + 1) & (cc <= r - low)
        L = np.where(lb & rb, w, np.where(bottom, h, np.maximum(w, h)))
        return ok & (m + height <= m0 + L)


def _chunks(q, r, chunk=CHUNK):
    """Fixed-prefix partitions of F_q^r, each at most ``chunk`` sequences."""
    k = 0
    while q ** (r - k) > chunk and k < r:
        k += 1
    return [tuple(int(x) for x in row) for row in all_sequences(q, k)] if k else [()]


def _sweep_part(args):
    spec, r, prefix, fn, fargs = args
    F = field_make(*spec)
    S = all_sequences(F.q, r, prefix)
    A = frame_batch(F, S)
    return fn(F, S, A, r, *fargs)


def sweep(F, r, fn, fargs=(), jobs=1):
    """Sum ``fn(F, S, A, r, *fargs)`` (a numpy vector) over all of F_q^r."""
    _guard(F.q ** r, f"sweep of F_{F.q}^{r}")
    spec = (F.p, F.k, F.modulus) if F.k > 1 else (F.p, 1, None)
    tasks = [(spec, r, pre, fn, fargs) for pre in _chunks(F.q, r)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_sweep_part, tasks))
    else:
        parts = [_sweep_part(t) for t in tasks]
    total = parts[0].astype(np.int64)
    for p in parts[1:]:
        total = total + p
    return total


def _count_blocks(F, S, A, r, blocks):
    """blocks: list of tuples of (n, m, width, height); count walls containing all of them."""
    M = RunMaps(A.astype(np.int64), r)
    out = np.zeros(len(blocks), dtype=np.int64)
    for i, group in enumerate(blocks):
        ok = np.ones(len(S), dtype=bool)
        for n, m, wdt, hgt in group:
            ok &= M.contains(n, m, wdt, hgt)
        out[i] = int(ok.sum())
    return out


# --- single square portions --------------------------------------------------------

def portion_admissible(r, P):
    return r >= 2 * P.m + 1 + P.l and P.top_in_wall(r)


def enumerate_portions(F, r, portions, jobs=1):
    for P in portions:
        if not portion_admissible(r, P):
            raise OutOfRegime(f"portion {P} is not admissible at length {r}")
    blocks = [((P.n, P.m, P.l, P.l),) for P in portions]
    return [int(x) for x in sweep(F, r, _count_blocks, (blocks,), jobs)]


def enumerate_portion(F, r, P, jobs=1):
    return enumerate_portions(F, r, [P], jobs)[0]


def admissible_portions(r):
    out = []
    for m in range(depth_of(r) + 1):
        for l in range(1, r - 2 * m):
            for n in range(m + 1, r - m - l + 2):
                P = SquarePortion(l, n, m)
                if portion_admissible(r, P):
                    out.append(P)
    return out


def contain_full(F, r, portions=None, jobs=1):
    portions = admissible_portions(r) if portions is None else portions
    counts = enumerate_portions(F, r, portions, jobs)
    reps = []
    for P, c in zip(portions, counts):
        f = F.q ** (r - P.l)
        reps.append(CensusReport("contain-full", {"q": F.q, "r": r, "portion": P.to_json()},
                                 f, c, "match" if c == f else "mismatch"))
    for rep in reps:
        rep.stats = {"walls": F.q ** r}
    return reps


# --- rectangles ---------------------------------------------------------------------

def rect_shape(l, d):
    """(width, height): l is the longer side, d > 0 is wide, d < 0 is tall."""
    return (l, l - d) if d >= 0 else (l + d, l)


def formula_rect(q, r, l, d, n, m):
    """Count of length-r sequences with a window containing the l/d rectangle at (m, n)."""
    if d < 0:
        if not (m - n <= d):
            raise OutOfRegime(f"tall rectangle needs m - n <= d, got m={m}, n={n}, d={d}")
        val = Fraction(q) ** (r - l - 2 * m - 1) / (q + 1) * (
            (-d + 1) * q ** (2 * m + 2) - (-d - 1) * q ** (2 * m + 1) - d * (q - 1))
    else:
        dd = min(d, m)
        val = Fraction(q) ** (r - l - 2 * m) / (q + 1) ** 2 * (
            (dd + 1) * q ** (2 * m + 2) + 2 * q ** (2 * m + 1) - (dd - 1) * q ** (2 * m)
            - q ** (2 * dd) + 1)
    if val.denominator != 1:
        raise OutOfRegime(f"rectangle formula is not integral ({val}) at q={q}, r={r}, l={l}, d={d}, m={m}")
    return int(val)


def rect_admissible(r, l, d, n, m):
    w, h = rect_shape(l, d)
    if w < 1 or h < 1 or m < 0:
        return False
    D = depth_of(r)

    def sup(a, b):
        return 0 <= a <= D and a + 1 <= b <= r - a
    if not all(sup(m, b) for b in range(n, n + w)):
        return False
    if r < 2 * m + 1 + w:
        return False
    if d < 0 and not (m - n <= d):
        return False
    # one of the longest sides lies fully in the wall
    if d > 0:
        return True
    left = all(sup(a, n) for a in range(m, m + h))
    right = all(sup(a, n + w - 1) for a in range(m, m + h))
    return left or right


def rect_cases(r, dmax=2):
    out = []
    for m in range(depth_of(r) + 1):
        for l in range(1, r + 1):
            for d in range(-dmax, dmax + 1):
                if d == 0:
                    continue
                for n in range(m + 1, r - m + 1):
                    if rect_admissible(r, l, d, n, m):
                        out.append((l, d, n, m))
    return out


def rect_census(F, r, cases=None, jobs=1):
    cases = rect_cases(r) if cases is None else cases
    blocks = [((n, m) + rect_shape(l, d),) for l, d, n, m in cases]
    counts = sweep(F, r, _count_blocks, (blocks,), jobs)
    reps = []
    for (l, d, n, m), c in zip(cases, counts):
        f = formula_rect(F.q, r, l, d, n, m)
        regime = "tall" if d < 0 else ("wide" if d <= m else "wide-reduced")
        reps.append(CensusReport("rect", {"q": F.q, "r": r, "l": l, "d": d, "n": n, "m": m,
                                          "regime": regime},
                                 f, int(c), "match" if f == c else "mismatch",
                                 {"walls": F.q ** r,
                                  "ratio_to_d_q^(r-l)": str(Fraction(int(c), abs(d) * F.q ** (r - l)))}))
    return reps


# --- blade transition counts --------------------------------------------------------

def q_formula(B1, B2, m, q):
    if B1 == BladeShape.ZERO or B1 not in NONZERO_BLADES:
        raise UnsupportedShapePair(f"source blade {B1} must be nonzero")
    if B2 not in TARGET_BLADES:
        raise UnsupportedShapePair(f"target blade {B2} is outside the three-shape codomain")
    if m == 0:
        return int(B1 == B2)
    Fq = Fraction(q)
    X, TR, TL, B, TOP, TLB = (BladeShape.FULL, BladeShape.TR_ZERO, BladeShape.TL_ZERO,
                              BladeShape.B_ZERO, BladeShape.TOP_ZERO, BladeShape.TL_B_ZERO)
    c = Fq / (q + 1)

    def g(e):
        return Fq ** e

    if B2 == X:
        if B1 in (TOP, TLB):
            v = q * (q - 1) if m == 1 else c * (q - 1) ** 2 * (g(2 * m - 2) - 1)
        elif B1 == TL:
            v = q * (q - 2) if m == 1 else c * (q - 1) * (g(2 * m - 1) - g(2 * m - 2) + 2)
        elif B1 == X:
            v = Fraction(q - 1, q + 1) * (g(2 * m) - g(2 * m - 1) - 2)
        else:  # TR, B
            v = Fraction((q - 1) ** 2, q + 1) * (g(2 * m - 1) + 1)
    elif B2 == TR:
        if B1 in (X, B):
            v = Fraction(q - 1, q + 1) * (g(2 * m - 1) + 1)
        elif B1 == TR:
            v = c * (q - 1) * (g(2 * m - 2) - 1)
        elif B1 in (TL, TLB):
            v = q if m == 1 else c * (q - 1) * (g(2 * m - 2) - 1)
        else:  # TOP
            v = 0 if m == 1 else c * q * (q - 1) * (g(2 * m - 3) + 1)
    else:  # B2 == B
        if B1 in (X, TR):
            v = Fraction(q - 1, q + 1) * (g(2 * m - 1) + 1)
        elif B1 in (TL, TOP):
            v = q if m == 1 else c * (q - 1) * (g(2 * m - 2) - 1)
        elif B1 == B:
            v = c * (q - 1) * (g(2 * m - 2) - 1)
        else:  # TLB
            v = 0 if m == 1 else c * q * (q - 1) * (g(2 * m - 3) + 1)
    v = Fraction(v)
    if v.denominator != 1:
        raise ArithmeticError(f"Q({B1.name},{B2.name},{m}) = {v} at q={q} is not an integer")
    return int(v)


# Two-step transition labels (each row sums to q^2).
def tree_labels(B1, q):
    X, TR, TL, B, TOP, TLB, Z = (BladeShape.FULL, BladeShape.TR_ZERO, BladeShape.TL_ZERO,
                                 BladeShape.B_ZERO, BladeShape.TOP_ZERO, BladeShape.TL_B_ZERO,
                                 BladeShape.ZERO)
    table = {
        X: {X: (q - 1) * (q - 2), TR: q - 1, TL: q - 1, B: q - 1, Z: 1},
        TR: {X: (q - 1) ** 2, B: q - 1, TOP: q - 1, Z: 1},
        B: {X: (q - 1) ** 2, TR: q - 1, TLB: q - 1, Z: 1},
        TL: {X: q * (q - 2), TR: q, B: q},
        TOP: {X: q * (q - 1), B: q},
        TLB: {X: q * (q - 1), TR: q},
    }
    row = table[B1]
    return {s: row.get(s, 0) for s in BladeShape}


# labels carrying a factor (q - 2); a q = 2 discrepancy is tolerated only there
Q_MINUS_2_LABELS = {(BladeShape.FULL, BladeShape.FULL), (BladeShape.TL_ZERO, BladeShape.FULL)}


def find_seeds(F, B1, count=20, lengths=range(3, 16, 2), seed=0):
    """Odd-length sequences whose wall has right-side blade B1 (deterministic search)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    found = []
    seen = set()
    for L in lengths:
        tries = min(F.q ** L, 4096)
        if F.q ** L <= 4096:
            S = all_sequences(F.q, L)
        else:
            S = rng.integers(0, F.q, size=(tries, L))
        A = frame_batch(F, S)
        sh = right_blade_array(A, L)
        want = np.array(B1.value)
        hit = np.nonzero((sh == want).all(axis=1))[0]
        for i in hit:
            key = tuple(int(x) for x in S[i])
            if key not in seen:
                seen.add(key)
                found.append(key)
                if len(found) >= count:
                    return found
    if not found:
        raise NoSeedWithBlade(f"no seed with blade {B1.picture} found over GF({F})")
    return found


def _extension_blades(F, seed, k):
    """Right-side blade shape of seed + every length-k extension, as an array of shape indices."""
    S = np.concatenate([np.tile(np.array(seed, dtype=np.int64), (F.q ** k, 1)),
                        all_sequences(F.q, k)], axis=1)
    _guard(len(S), "extension enumeration")
    r = S.shape[1]
    A = frame_batch(F, S)
    sh = right_blade_array(A, r)
    return sh


def _shape_counts(sh):
    out = {}
    for s in BladeShape:
        out[s] = int((sh == np.array(s.value)).all(axis=1).sum())
    return out


def q_enumerate(F, B1, B2, m, seeds=None, nseeds=20):
    """Counts for every seed (they must agree for the map to be well defined)."""
    if B2 not in TARGET_BLADES:
        raise UnsupportedShapePair(f"target blade {B2} is outside the three-shape codomain")
    seeds = find_seeds(F, B1, nseeds) if seeds is None else seeds
    if m == 0:
        return [int(B1 == B2)] * len(seeds)
    return [_shape_counts(_extension_blades(F, s, 2 * m))[B2] for s in seeds]


def q_table(F, mmax=3, nseeds=20):
    reps = []
    q = F.q
    for B1 in NONZERO_BLADES:
        seeds = find_seeds(F, B1, nseeds)
        per_m = {}
        for m in range(1, mmax + 1):
            per_m[m] = [_shape_counts(_extension_blades(F, s, 2 * m)) for s in seeds]
        for B2 in TARGET_BLADES:
            for m in range(0, mmax + 1):
                f = q_formula(B1, B2, m, q)
                vals = [int(B1 == B2)] * len(seeds) if m == 0 else [c[B2] for c in per_m[m]]
                well = len(set(vals)) == 1
                e = vals[0]
                verdict = "match" if well and e == f else "mismatch"
                reps.append(CensusReport("q-table", {"q": q, "B1": B1.picture, "B2": B2.picture, "m": m,
                                                     "seeds": len(seeds)},
                                         f, e, verdict, {"well_defined": well,
                                                         "distinct_counts": sorted(set(vals))}))
    return reps


def tree_diagrams(F, nseeds=20):
    reps = []
    q = F.q
    for B1 in NONZERO_BLADES:
        seeds = find_seeds(F, B1, nseeds)
        want = tree_labels(B1, q)
        rows = [_shape_counts(_extension_blades(F, s, 2)) for s in seeds]
        same = all(r == rows[0] for r in rows)
        got = rows[0]
        ok = same and all(got[s] == want[s] for s in BladeShape)
        reps.append(CensusReport("tree-diagrams", {"q": q, "B1": B1.picture, "seeds": len(seeds)},
                                 {s.picture: want[s] for s in BladeShape},
                                 {s.picture: got[s] for s in BladeShape},
                                 "match" if ok else "mismatch", {"seed_independent": same}))
    return reps


# --- two windows ----------------------------------------------------------------------

def overlapping(P1, P2):
    return bool(P1.cells() & P2.cells())


def hat_cones_disjoint(P1, P2):
    a1, b1 = P1.hat_interval()
    a2, b2 = P2.hat_interval()
    return b1 < a2 or b2 < a1


def bounding_block(P1, P2):
    """(n, m, width, height) of the smallest rectangle holding both portions."""
    top, left = min(P1.m, P2.m), min(P1.n, P2.n)
    bottom = max(P1.m + P1.l, P2.m + P2.l)
    right = max(P1.n + P1.l, P2.n + P2.l)
    return left, top, right - left, bottom - top


def two_window_census(F, r, pairs, C=1, jobs=1):
    """Count walls with windows containing both portions of each pair.

    The compared count allows one window to hold both.  Walls where that
    happens are the walls whose window holds the bounding rectangle; they are
    also reported separately, with the count of walls where the two portions
    sit in distinct windows.
    """
    blocks, meta = [], []
    for P1, P2 in pairs:
        for P in (P1, P2):
            if not portion_admissible(r, P):
                raise OutOfRegime(f"portion {P} is not admissible at length {r}")
        if overlapping(P1, P2):
            raise OverlappingPortions(f"{P1} and {P2} overlap; count their bounding rectangle instead")
        n, m, w, h = bounding_block(P1, P2)
        blocks.append(((P1.n, P1.m, P1.l, P1.l), (P2.n, P2.m, P2.l, P2.l)))
        # a block wider than its row can never sit in a window
        blocks.append(((n, m, w, h),) if 2 * m + w <= r else ())
        meta.append((P1, P2))
    counts = sweep(F, r, _count_blocks, (blocks,), jobs)
    reps = []
    for k, (P1, P2) in enumerate(meta):
        c = int(counts[2 * k])
        shared = int(counts[2 * k + 1]) if blocks[2 * k + 1] else 0
        e = r - P1.l - P2.l
        base = F.q ** e if e >= 0 else Fraction(1, F.q ** (-e))
        case1 = hat_cones_disjoint(P1, P2)
        if case1:
            verdict = "match" if c == base else "mismatch"
            fval = int(base) if e >= 0 else str(base)
        else:
            verdict = "bounded" if c <= C * base else "mismatch"
            fval = f"bound {C}*{F.q}^{e}"
        reps.append(CensusReport("two-window", {"q": F.q, "r": r, "P1": P1.to_json(), "P2": P2.to_json(),
                                                "case": "disjoint-hat-cones" if case1 else "intersecting",
                                                "C": C},
                                 fval, c, verdict,
                                 {"ratio": str(Fraction(c) / base), "shared_window": shared,
                                  "distinct_windows": c - shared,
                                  "ratio_distinct": str(Fraction(c - shared) / base)}))
    return reps


def random_pairs(r, count, rng):
    """Random admissible non-overlapping portion pairs at length r."""
    ps = admissible_portions(r)
    out = []
    guard = 0
    while len(out) < count and guard < 100 * count:
        guard += 1
        i, j = rng.integers(0, len(ps), size=2)
        P1, P2 = ps[i], ps[j]
        if i == j or overlapping(P1, P2):
            continue
        out.append((P1, P2))
    return out


def overlap_redirect(F, r, P1, P2, jobs=1):
    """Overlapping portions share one window, which contains their bounding rectangle."""
    left, top, w, h = bounding_block(P1, P2)
    l, d = max(w, h), (w - h if w >= h else -(h - w))
    both = [((P1.n, P1.m, P1.l, P1.l), (P2.n, P2.m, P2.l, P2.l)), ((left, top, w, h),)]
    c_both, c_rect = (int(x) for x in sweep(F, r, _count_blocks, (both,), jobs))
    try:
        f = formula_rect(F.q, r, l, d, left, top) if d else F.q ** (r - l)
    except OutOfRegime:
        f = None
    ok = c_both == c_rect and (f is None or f == c_rect)
    return CensusReport("two-window-overlap", {"q": F.q, "r": r, "P1": P1.to_json(), "P2": P2.to_json(),
                                               "rectangle": {"l": l, "d": d, "n": left, "m": top}},
                        f, c_both, "match" if ok else "mismatch", {"rectangle_count": c_rect})


# --- continuing a zero blade ---------------------------------------------------------

def window_continue(F, k, i, m, l):
    """Extensions of zero-blade seeds of length 2k+i to length 2k+2m+l+1 containing (l, m+k+2, m+k).

    The count q^(2m+1-i) is expected for seeds whose zero-blade window stays
    clear of the portion.  "Clear" is read as: the window's forced square,
    grown by its one-cell frame ring, does not meet the portion.  Seeds failing
    that test are counted separately.
    """
    L0 = 2 * k + i
    R = 2 * k + 2 * m + l + 1
    P = SquarePortion(l, m + k + 2, m + k)
    _guard(F.q ** R, "window-continue")
    seeds = all_sequences(F.q, L0)
    zero = right_blade_array(frame_batch(F, seeds), L0).all(axis=1)
    want = F.q ** (2 * m + 1 - i)
    E = all_sequences(F.q, R - L0)
    clear, touching = {}, {}
    cells = P.cells()
    for si in np.nonzero(zero)[0]:
        W = wall_frame([int(x) for x in seeds[si]], F)
        r0, r1, c0, c1 = _blade_box(W)
        hit = any(r0 - 1 <= a <= r1 + 1 and c0 - 1 <= b <= c1 + 1 for a, b in cells)
        S = np.concatenate([np.tile(seeds[si], (len(E), 1)), E], axis=1)
        c = int(RunMaps(frame_batch(F, S).astype(np.int64), R).contains(P.n, P.m, P.l).sum())
        tally = touching if hit else clear
        tally[c] = tally.get(c, 0) + 1
    if not clear:
        verdict = "no-seeds"
    else:
        verdict = "match" if set(clear) == {want} else "mismatch"
    return CensusReport("window-continue", {"q": F.q, "k": k, "i": i, "m": m, "l": l,
                                            "portion": P.to_json()},
                        want, min(clear, default=0) if verdict != "mismatch" else
                        next(c for c in sorted(clear) if c != want), verdict,
                        {"clear_seeds": sum(clear.values()),
                         "clear_histogram": {str(a): b for a, b in sorted(clear.items())},
                         "touching_seeds": sum(touching.values()),
                         "touching_histogram": {str(a): b for a, b in sorted(touching.items())}})


def certain_box(W, win):
    """(top, bottom, left, right) of the square a window is forced to occupy."""
    m0, c0 = win.m, win.n
    d = c0 + win.width - 1
    lb, rb = W.support(m0, c0 - 1), W.support(m0, d + 1)
    if win.size_known:
        L = win.l
        a = c0 if lb else d - L + 1
        return m0, m0 + L - 1, a, a + L - 1
    L = max(win.width, win.height)
    if lb:
        return m0, m0 + L - 1, c0, c0 + L - 1
    if rb:
        return m0, m0 + L - 1, d - L + 1, d
    return m0, m0 + L - 1, c0, d


def _blade_box(W):
    D = W.depth
    for win in detect_windows(W):
        box = certain_box(W, win)
        if box[0] <= D <= box[1] and box[2] <= W.r - D <= box[3]:
            return box
    raise AssertionError("zero blade outside every window")


# --- minimal unavoidable window ----------------------------------------------------------

def _max_bounds(F, S):
    A = frame_batch(F, S)
    return RunMaps(A.astype(np.int64), S.shape[1]).max_window_bound()


def min_window_search(F, r_max, target, chunk=1 << 14, prune=True, walls_budget=None):
    """Depth-first search for a length-r_max sequence with every window smaller than ``target``.

    A prefix is abandoned once its wall has a window whose size lower bound
    reaches ``target``; extensions keep that window, so no witness is lost.
    Returns {"result": "witness", "sequence": ...} or {"result": "exhausted", ...}.
    """
    q = F.q
    cap = walls_budget or budget()
    built = 0
    survivors_by_len = {}
    max_floor = {}
    stack = [np.zeros((1, 0), dtype=np.int64)]
    while stack:
        P = stack.pop()
        r = P.shape[1] + 1
        S = np.concatenate([np.repeat(P, q, axis=0),
                            np.tile(np.arange(q, dtype=np.int64), len(P))[:, None]], axis=1)
        built += len(S)
        if built > cap:
            raise SpaceTooLarge(f"search exceeded {cap} wall builds")
        bnd = _max_bounds(F, S)
        keep = S[bnd < target] if prune else S
        max_floor[r] = max(max_floor.get(r, 0), int(bnd.min()) if len(bnd) else 0)
        survivors_by_len[r] = survivors_by_len.get(r, 0) + int((bnd < target).sum())
        if r == r_max:
            good = keep[_max_bounds(F, keep) < target] if not prune and len(keep) else keep
            if len(good):
                return {"result": "witness", "q": q, "target": target, "r_max": r_max,
                        "sequence": [int(x) for x in good[0]], "walls_built": built}
            continue
        for start in range(((len(keep) - 1) // chunk) * chunk, -1, -chunk):
            part = keep[start:start + chunk]
            if len(part):
                stack.append(part)
    dead = min((r for r, c in survivors_by_len.items() if c == 0), default=None)
    return {"result": "exhausted", "q": q, "target": target, "r_max": r_max,
            "first_length_without_survivors": dead,
            "survivors_by_length": {str(k): v for k, v in sorted(survivors_by_len.items())},
            "walls_built": built}


def survivors_unpruned(F, r, target):
    """Number of length-r sequences whose wall has every window below ``target`` (full sweep)."""
    def fn(F, S, A, r, target):
        return np.array([int((RunMaps(A.astype(np.int64), r).max_window_bound() < target).sum())])
    return int(sweep(F, r, fn, (target,))[0])


def survivors_pruned(F, r, target):
    """Same count through the pruned level-by-level extension."""
    q = F.q
    P = np.zeros((1, 0), dtype=np.int64)
    for _ in range(r):
        S = np.concatenate([np.repeat(P, q, axis=0),
                            np.tile(np.arange(q, dtype=np.int64), len(P))[:, None]], axis=1)
        P = S[_max_bounds(F, S) < target]
        if len(P) == 0:
            return 0
    return len(P)
