"""Build a few walls, list their windows and write PPM pictures.

    python3 notebooks/wall_tour.py [outdir]
"""
import sys
from pathlib import Path

from numberwall import field_make, literal, pf_seq, wall_frame

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)

F5 = field_make(5)
W = wall_frame(literal(F5, [1, 1, 3, 2, 1, 0, 0, 0, 2, 0, 2, 0]))
print(f"GF(5) example, r={W.r}, depth={W.depth}")
for w in W.windows:
    print(f"  window at row {w.m}, column {w.n}: size {w.l}, {w.status}, ratios {w.ratios}")
(out / "gf5_example.ppm").write_bytes(W.to_ppm())

F3 = field_make(3)
W = wall_frame(pf_seq(F3, 1, 3 ** 5))
sizes = {}
for w in W.windows:
    if w.status == "complete":
        sizes[w.l] = sizes.get(w.l, 0) + 1
print(f"paper-folding over GF(3), r={W.r}: complete window sizes {dict(sorted(sizes.items()))}")
(out / "paperfolding_gf3.ppm").write_bytes(W.to_ppm())
