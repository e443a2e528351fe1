"""Torsion of the Carlitz module over F_3 and the ramification it produces.

Run with: python3 demos/carlitz_torsion.py
"""

from dkf import DrinfeldModule, PolyA, PrimePlace, break_report, carlitz_local, fq_from_order, torsion_poly

F = fq_from_order(3)
t = PolyA.t(F)
C = DrinfeldModule.carlitz(F)
place = PrimePlace.finite(t)

# The t^2-torsion polynomial and where its roots sit in K_(t).
f = torsion_poly(C, t**2)
print("phi_{t^2}(X) =", f)
for v, n in f.newton_polygon(place).root_valuations():
    print(f"  {n} roots of valuation {v}")

# The extension cut out by those roots is totally ramified; its breaks are integers.
rep = break_report(carlitz_local(F, t, 2))
print("group order:", rep.group_order)
print("lower breaks:", ", ".join(str(b) for b in rep.lower_breaks))
print("upper breaks:", ", ".join(str(b) for b in rep.upper_breaks))
print("largest upper break:", rep.maximal_break)
