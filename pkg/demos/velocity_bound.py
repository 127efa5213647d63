"""Maximum free-particle speed across the beta / alpha**2 ratio.

Run with ``python3 demos/velocity_bound.py``.
"""
import numpy as np

from gupkernel.errors import GupError
from gupkernel.params import GupParams, max_free_velocity

alpha = 0.01
for ratio in np.linspace(3.0, 8.0, 11):
    p = GupParams(alpha, ratio * alpha**2)
    try:
        print(f"beta/alpha^2 = {ratio:4.1f}   vmax = {max_free_velocity(p):10.4f}")
    except GupError as exc:
        print(f"beta/alpha^2 = {ratio:4.1f}   {type(exc).__name__}: {exc}")
