"""
Null multiplicity
=================

Repeating a root in the variety flattens the pattern around the null: the
notch widens and deepens at the price of one degree of freedom per repeat.
"""

# %%
from idealsdp.experiments import run_example2

res = run_example2(write=False)
for name, rep in res.reports.items():
    m = rep.metrics
    notch = m.notch_depths_db[0][1]
    print(f"{name:>6}: notch (+-1 deg) {notch:7.1f} dB  passband ripple {m.ripple_db:.3f} dB")

# %%
# Pattern samples next to the null at -13 degrees.
import numpy as np

for name in ("mult1", "mult3"):
    rep = res[name]
    near = np.abs(rep.grid.angles + 13.0) <= 1.0
    print(name, np.round(rep.pattern_db[near] - 10 * np.log10(rep.metrics.peak), 1))
