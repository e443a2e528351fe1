"""Compare the computed break of a Carlitz level with the bounds that predict it.

Run with: python3 demos/break_bounds.py
"""

from dkf import cprime, mythm_break_bound, mythm_e_bound, obvious_e_bound

q, r = 2, 2
print(f"q={q}, r={r}: C' = {cprime(q, r)}")
for N in range(1, 5):
    print(f"  N={N}: e <= {mythm_e_bound(q, r, N)}, break <= {mythm_break_bound(q, r, N)}")
print("ramification index bound for a degree-1 prime, from the group order alone:", obvious_e_bound(q, r, 1))
