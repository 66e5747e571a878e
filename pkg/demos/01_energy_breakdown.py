"""
Where the receiver's energy goes
================================

Break the amortized receiver power into its procedures and see how it
scales with the number of tracked satellites and the update rate.
"""

# %%
# The published profile of a software-defined receiver ships as ``NAMURU``.
from gnss_energy.energy import NAMURU, OperatingPoint, acquisition_energy, energy_saving, total_power

breakdown = total_power(NAMURU, OperatingPoint(N=8, f=1.0))
for name, mw in breakdown.as_dict().items():
    print(f"{name:>12s} {mw:8.2f} mW")

# %%
# Tracking dominates and grows linearly in N*f, so every satellite dropped
# from the tracked set saves a fixed slice of power.
print("\n N  total mW")
for n in range(4, 13):
    print(f"{n:2d}  {total_power(NAMURU, OperatingPoint(n)).total:8.2f}")

# %%
# Tracking 5 of 7 visible satellites at 1 Hz:
full = total_power(NAMURU, OperatingPoint(7)).total
selective = total_power(NAMURU, OperatingPoint(5)).total
print(f"\nsaving 7 -> 5 satellites: {energy_saving(full, selective):.1%}")

# %%
# Losing every satellite costs a reacquisition, charged as one lump.
print(f"reacquisition: {acquisition_energy(NAMURU):.4f} J")
