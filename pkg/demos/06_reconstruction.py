"""Physical-space reconstruction: eigenprofiles and the convolution form.

Run:  python demos/06_reconstruction.py
"""

import numpy as np

from logkdv.halfline import (
    HalfLineGrid,
    HalfLineState,
    evolve_dissipative,
    gaussian_weight,
    initial_gaussian_bump,
    modulation_integrate,
)
from logkdv.hermite import RealGrid, hermite_function
from logkdv.jacobi import find_eigenvalues, shoot
from logkdv.reconstruct import (
    convolution_synthesize,
    eigenpair_residual,
    eigenvector_assemble,
    synthesize,
)

# --- coefficient synthesis ------------------------------------------------------
grid = RealGrid.uniform(x_max=16.0, num=3201)
c = np.zeros(3)
c[0] = np.exp(0.5) * (2 * np.pi) ** 0.25
wave = synthesize(c, grid)
print("scaled mode 0 reproduces exp(1/2 - x^2/4):",
      np.abs(wave - np.exp(0.5 - grid.nodes**2 / 4)).max())

# --- eigenprofile at the first eigenvalue ----------------------------------------
z1 = float(find_eigenvalues(z_max=4.0, n_max=2000, tol=1e-10).eigenvalues[0])
prof = eigenvector_assemble(z1, shoot(z1, 500), grid)
print(f"\nz1 = {z1:.6f},  c1 = sqrt(2)/z1 = {prof.c1:.6f}")
print("series tail estimates: odd", prof.tail_odd, " even", prof.tail_even)
report = eigenpair_residual(z1, prof, grid)
print("raw residuals (odd eq, even eq):",
      report.raw_odd_equation, report.raw_even_equation)
print("band-limited residuals:",
      report.projected_odd_equation, report.projected_even_equation)
print("(the odd equation keeps an order-one truncation edge in the raw norm: "
      "the even series lies outside the strong operator domain)")

# algebraic versus Gaussian decay: the profile escapes the basis envelope
u0 = hermite_function(0, grid.nodes)
for xv in (0.0, 4.0, 8.0, 11.0):
    j = np.argmin(np.abs(grid.nodes - xv))
    print(f"  |y_even/u_0| at x={xv:5.1f}: {abs(prof.y_even[j]) / u0[j]:.4g}")

# --- convolution representation and scattering -----------------------------------
zgrid = HalfLineGrid(extent=40.0, spacing=0.02)
w0 = initial_gaussian_bump(zgrid)
flow = evolve_dissipative(w0, T=6.0, dt=1e-3, sample_every=1500)
a0 = -zgrid.integrate(gaussian_weight(zgrid) * w0.w)
mod = modulation_integrate(flow, a0, 0.0)
xgrid = RealGrid.uniform(x_max=20.0, num=2001)
u1 = xgrid.nodes * hermite_function(0, xgrid.nodes)
print("\nscattering: || u(t) - b(t) u_1 ||_L2 along the flow")
for k in range(flow.ts.size):
    state = HalfLineState(flow.states[k], flow.ts[k], zgrid)
    u = convolution_synthesize(state, mod.a[k], mod.b[k], xgrid)
    print(f"  t={flow.ts[k]:4.1f}:  {xgrid.norm(u - mod.b[k] * u1):.6f}")
