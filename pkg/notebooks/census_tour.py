"""Enumerated counts next to their closed forms, at small lengths.

    python3 notebooks/census_tour.py
"""
from fractions import Fraction

from numberwall import census as cz
from numberwall import field_make

F2, F3 = field_make(2), field_make(3)

print("square portions, q=3 r=7")
for rep in cz.contain_full(F3, 7)[:6]:
    print(f"  {rep.parameters['portion']}: {rep.enumerated_value} (q^(r-l) = {rep.formula_value})")

print("rectangles, q=2 r=10")
for rep in cz.rect_census(F2, 10)[::40]:
    p = rep.parameters
    print(f"  l={p['l']} d={p['d']} at ({p['m']},{p['n']}) {p['regime']}: "
          f"{rep.enumerated_value} vs {rep.formula_value}")

print("blade transitions, q=3 m=1")
for rep in cz.q_table(F3, mmax=1, nseeds=10):
    if rep.parameters["m"] == 1:
        p = rep.parameters
        print(f"  {p['B1']} -> {p['B2']}: {rep.enumerated_value}")

print("two windows, stacked pairs over GF(2)")
for l in (1, 2, 3):
    P1, P2 = cz.SquarePortion(l, l + 1, 0), cz.SquarePortion(l, l + 1, l)
    (rep,) = cz.two_window_census(F2, 3 * l + 3, [(P1, P2)], C=10)
    print(f"  l={l}: ratio {Fraction(rep.stats['ratio'])}, "
          f"shared {rep.stats['shared_window']}, distinct {rep.stats['distinct_windows']}")
