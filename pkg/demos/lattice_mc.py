"""Brownian-bridge reweighting for a free particle against the analytic ratio.

Run with ``python3 demos/lattice_mc.py``; set ``GUP_THREADS`` to change the
worker count (the numbers do not change).
"""
from gupkernel.classical import Boundary, HarmonicPotential
from gupkernel.lattice import SliceConfig, euclidean_mc_kernel, free_ratio_prediction
from gupkernel.params import GupParams
from gupkernel.spectral import HermiteBasis, spectral_kernel

p = GupParams(0.0, 1e-4)
free = Boundary.euclidean(0.1, 0.3, 1.0)
for n in (16, 32, 64):
    est = euclidean_mc_kernel(free, SliceConfig.for_boundary(free, n, p), p, None, 100_000, 42)
    pred = free_ratio_prediction(free, p)
    print(f"free  N={n:3d}  {est.mean.real:.6f} +/- {est.std_error:.6f}   analytic {pred.real:.6f}")

ho = Boundary.euclidean(0.1, 0.3, 1.0, 1.0)
sp = spectral_kernel(p, HermiteBasis(n_max=120), ho).meta
pred = 1 + p.beta * sp["slope_beta"] / sp["undeformed"]
est = euclidean_mc_kernel(ho, SliceConfig.for_boundary(ho, 16, p), p, HarmonicPotential(1.0, 1.0),
                          100_000, 42)
print(f"osc   N= 16  {est.mean.real:.6f} +/- {est.std_error:.6f}   spectral {pred.real:.6f}")
