"""
Order-of-magnitude device numbers
=================================

How far does one electron travel before it can pay for a collision, how
many generations fit in a register, and how much work does the bias
supply extract?  Everything follows from the bias voltage, the dopant
gap, and the lattice spacing.
"""

from sectorsim import physical_scales

# %%
# A reference operating point: 2 V bias, 0.5 eV dopant gap, micron
# lattice, ten dopant electrons in reach of the cascade.

report = physical_scales(bias_voltage_v=2.0, gap_energy_ev=0.5,
                         lattice_m=1e-6, n_dopants=10)
print("mean free path / lattice:", report.l_over_a)
print("mean free path:          ", report.mean_free_path_m, "m")
print("generations:             ", report.generations)
print("cascade electrons:       ", report.cascade_electrons)
print("work drawn from bias:    ", report.work_ev, "eV")

# %%
# Sweeping the bias: a hotter diode shortens the free path and deepens
# the cascade until the register runs out of dopants.

print("\nbias  l/a     generations  electrons  work (eV)")
for bias in (0.5, 1.0, 2.0, 4.0, 8.0):
    rep = physical_scales(bias, 0.5, 1e-6, 1000)
    print(f"{bias:<5.1f} {rep.l_over_a:<7.3f} {rep.generations:<12.1f}"
          f" {rep.cascade_electrons:<10.1f} {rep.work_ev:<.2f}")
