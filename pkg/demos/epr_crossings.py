"""Locate and display the EPR criterion crossings.

The SPDC conditional-variance product dips below the 1/4 entanglement
bound only inside a finite window of the geometry parameter P; this
script finds both crossings and prints the product on a coarse grid so
the window is visible in the terminal.
"""

import numpy as np

from spdc_ng import Params, epr_product, find_epr_crossings

lo, hi = find_epr_crossings()
print(f"EPR product crosses 1/4 at P = {lo:.4f} and P = {hi:.4f}\n")

print(f"{'P':>8} {'product':>10}  verdict")
for p in np.geomspace(0.1, 5.0, 15):
    r = epr_product(Params(p=p))
    verdict = "entangled" if r.entangled_flag else "non-Gaussianity witness"
    print(f"{p:8.3f} {r.product:10.5f}  {verdict}")
