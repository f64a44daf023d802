"""Favard decay for unrectifiable products vs stabilization above dimension 1.

At the cuff length where the limit set has dimension exactly 1/2, the
product of two copies in the unit square is a purely unrectifiable set of
dimension 1: the average projected length of its covers decays as the
covers refine, as it does for the classical quarter-corner Cantor square,
while a covered line segment keeps a stable positive shadow.  Above
dimension 1/2 per factor the projections stabilize instead: almost every
direction keeps positive length.
"""

from cuffdim import build_pants, favard_estimate, four_corner_cover, product_cover, segment_cover
from cuffdim.projlab import lambda_grid, project_lengths
from cuffdim.thermo import solve_locus_symmetric

GRID = 128

a_half = solve_locus_symmetric(0.5, tol=1e-3)
pants_half = build_pants((a_half,) * 3)
print(f"dimension-1/2 pants: a = b = c = {a_half:.6f}\n")

print(f"{'depth':>5} {'product':>9} {'4-corner':>9} {'segment':>9}")
for n in range(2, 7):
    f_omega = favard_estimate(product_cover(pants_half, n), grid=GRID)
    f_fc = favard_estimate(four_corner_cover(n), grid=GRID)
    f_seg = favard_estimate(segment_cover(n), grid=GRID)
    print(f"{n:5d} {f_omega:9.4f} {f_fc:9.4f} {f_seg:9.4f}")

a_07 = solve_locus_symmetric(0.7, tol=1e-3)
pants_07 = build_pants((a_07,) * 3)
lams = lambda_grid(GRID)
l4 = project_lengths(product_cover(pants_07, 4), lams)
l6 = project_lengths(product_cover(pants_07, 6), lams)
frac = float((l6 >= 0.8 * l4).mean())
print(f"\ndimension-0.7 pants (a = {a_07:.4f}): depth-6 projected length keeps")
print(f">= 80% of its depth-4 value on {100 * frac:.1f}% of directions")
