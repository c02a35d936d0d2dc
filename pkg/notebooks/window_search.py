"""Longest binary sequences whose walls avoid 3x3 windows.

    python3 notebooks/window_search.py [r_max]
"""
import sys

from numberwall import census as cz
from numberwall import field_make

r_max = int(sys.argv[1]) if len(sys.argv) > 1 else 30
rep = cz.min_window_search(field_make(2), r_max, 3)
print(rep["result"], rep.get("sequence") or rep.get("first_length_without_survivors"))
if "survivors_by_length" in rep:
    print(rep["survivors_by_length"])
