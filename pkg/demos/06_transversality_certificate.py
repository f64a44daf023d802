"""Numerically certify transversality of the planar direction family.

The projections P_t(x) = x1 cos t + x2 sin t form the canonical
transversal family: the normalized difference quotient T satisfies
(dT/dt)^2 = 1 - T^2, so whenever |T| <= C the gradient is at least
sqrt(1 - C^2), and any C up to 1/sqrt(2) certifies.  The certifier
estimates the derivative bounds on a grid, finds the largest working
constant from a fixed candidate ladder, and rejects a parameter-blind
control family.
"""

import json

from cuffdim import constant_family, direction_family, transversality_certify

report = transversality_certify(direction_family(), lam_grid=256)
print("direction family:")
print(json.dumps(report.as_dict(), indent=2, sort_keys=True))

neg = transversality_certify(constant_family(), lam_grid=256)
print(f"\nconstant control family certified: {neg.certified} (expected False)")
