"""
Choosing a satellite subset by weighted GDOP
============================================

Weight each satellite by its contribution to the geometry, then keep the
heaviest ones until the subset's GDOP is within 5% of the full set's.
"""

# %%
import itertools

import numpy as np

from gnss_energy.gdop import SelectionConfig, gdop, optimize_weights, relative_gap, select_subset

rng = np.random.default_rng(7)
el = np.arcsin(rng.uniform(np.sin(np.radians(10)), 1.0, 8))
az = rng.uniform(0, 2 * np.pi, 8)
a = np.column_stack([np.cos(el) * np.sin(az), np.cos(el) * np.cos(az), np.sin(el), np.ones(8)])

print(f"full-set GDOP with 8 satellites: {gdop(a):.3f}")

# %%
# Weights start uniform and move along the projected gradient of
# trace((A^T W A)^-1), keeping sum(w) equal to the satellite count.
w = optimize_weights(a)
for k in np.argsort(-w):
    print(f"sat {k}  elevation {np.degrees(el[k]):5.1f} deg  weight {w[k]:.3f}")

# %%
# Greedy selection from the top-weighted satellites.
res = select_subset(a)
print(f"\nselected {sorted(res.selected_indices)}: GDOP {res.subset_gdop:.3f}, gap {res.relative_gap:.1%}")

# %%
# How does that compare with trying every subset?
for k in range(4, 9):
    best = min(gdop(a[list(c)]) for c in itertools.combinations(range(8), k))
    print(f"best {k}-subset GDOP {best:.3f}  gap {relative_gap(gdop(a), best):.1%}")

# %%
# With a known height one extra virtual row makes three satellites enough.
aided = select_subset(a, SelectionConfig(altitude_aided=True), up=np.array([0.0, 0.0, 1.0]))
print(f"\naltitude aided: {len(aided.selected_indices)} satellites, gap {aided.relative_gap:.1%}")
