"""Compare the three Euclidean oscillator kernel routes at a few endpoints.

Run with ``python3 demos/kernel_routes.py``.
"""
from gupkernel.classical import Boundary
from gupkernel.kernels import ho_kernel_semiclassical
from gupkernel.params import GupParams
from gupkernel.spectral import HermiteBasis, spectral_kernel, tilde_kernel

p = GupParams(1e-3, 1e-4)
basis = HermiteBasis(n_max=120)

print(f"{'q0':>6} {'qf':>6} {'tau':>5}  {'semiclassical':>24} {'spectral':>24} {'tilde':>24}")
for q0, qf, tau in [(0.0, 0.0, 1.0), (0.2, 0.5, 1.0), (-0.4, 0.7, 0.6), (0.3, -0.1, 1.5)]:
    b = Boundary.euclidean(q0, qf, tau, 1.0)
    sc = ho_kernel_semiclassical(b, p).amplitude
    sp = spectral_kernel(p, basis, b).amplitude
    tk = tilde_kernel(p, basis, b).amplitude
    print(f"{q0:6.2f} {qf:6.2f} {tau:5.2f}  {sc:24.12f} {sp:24.12f} {tk:24.12f}")
