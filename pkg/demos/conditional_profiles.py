"""Origin-conditional cross sections vs their Gaussian stand-ins.

Writes the far-field conditional density at P = 2 together with the two
width-matched Gaussian models (alpha at the 1/e and 1/e^2 matching
levels) to conditional_profiles.csv — the same dataset `spdc-ng figure
1c` produces — and prints a crude ASCII rendering of the central region.
"""

import numpy as np

from spdc_ng import Params, conditional_of, make_density

params = Params(p=2.0)
spdc = conditional_of(make_density("far_field", "spdc", "joint", params), 0.0)
models = {a: conditional_of(
    make_density("far_field", "gaussian", "joint", params, alpha=a), 0.0)
    for a in (0.45, 0.72)}

xs = np.linspace(-2.5, 2.5, 41)
rows = [(x, spdc(x), models[0.45](x), models[0.72](x)) for x in xs]

with open("conditional_profiles.csv", "w", newline="") as fh:
    fh.write("coord,spdc,gauss_a0.45,gauss_a0.72\n")
    for row in rows:
        fh.write(",".join(repr(float(v)) for v in row) + "\n")

peak = max(r[1] for r in rows)
for x, v, *_ in rows:
    bar = "#" * int(60 * v / peak)
    print(f"{x:6.2f} {v:8.4f} {bar}")
print("\nwrote conditional_profiles.csv")
