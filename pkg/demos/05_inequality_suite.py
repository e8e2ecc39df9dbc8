"""Numerical evidence for the inequalities behind the dimension bounds.

Runs the same certified checks the test suite relies on: the negative
majorant and its crossover masses, the lattice sum staying below pi with
a rigorous truncation tail, agreement between the direct sum and its
resummed form, and randomized trials of the orthonormal-family density
bound and the trace inequality.
"""
import math

import numpy as np

from bardina import inequalities as ineq
from bardina.spectral import SpectralField, make_grid, random_field

print(f"majorant at m=1:        {ineq.psi_big(1.0):+.6f}  (negative)")
print(f"peak of the comparison: x = {ineq.phi_argmax():.4f}")
m1, m2 = ineq.crossover_masses()
print(f"crossover masses:       {m1:.5f}, {m2:.5f}\n")

print("lattice sum F(m) with certified tail, margin below pi:")
print("    m      F_direct     tail        margin")
for m in (0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0):
    res = ineq.lattice_F(m)
    print(f"  {m:5.2f}   {res.F_direct:.6f}   {res.tail_bound:.2e}   {res.margin():.6f}")

res = ineq.lattice_F(4.0, radius=10_000)
print(f"\nlarge-mass asymptote: F(4) - (pi - 1/16) = "
      f"{res.F_direct - (math.pi - 1.0 / 16.0):+.3e}")
for m in (1.0, 2.0, 4.0):
    gap = abs(ineq.lattice_F(m).F_direct - ineq.poisson_F(m))
    print(f"direct vs resummed at m={m:g}: {gap:.3e} (tail bound "
          f"{ineq.lattice_F(m).tail_bound:.3e})")

print("\nrandomized orthonormal-family trials:")
total = bad = 0
for n in (1, 4, 16):
    for m in (0.25, 1.0, 4.0):
        r = ineq.rho_l2_check(n=n, m=m, trials=40, seed=3)
        total += r.trials
        bad += r.violations
print(f"  {total} trials, {bad} violations of the density bound")

grid = make_grid(64)
rng = np.random.default_rng(np.random.Philox(9))
worst = -math.inf
for _ in range(25):
    raw = random_field(grid, rng, amplitude=1.0, band=10).to_samples()
    v = SpectralField(grid, np.fft.fft2(raw * raw) / grid.n**2)
    r = ineq.trace_k2_check(v, m=1.0)
    worst = max(worst, r.lhs - r.rhs)
print(f"  trace inequality slack over 25 potentials: worst lhs-rhs = {worst:.4g}")
