"""Rebuild a rank-two Drinfeld module from a rank-one module and a lattice.

Run with: python3 demos/tate_reconstruction.py
"""

from dkf import exp_series, functional_equation_defect, reconstruct_phi, stable_model
from dkf.tate import TateDatum

datum = TateDatum.from_text("q=2; phi_t = t + tau; place = t; gamma = t^-1")
precision, layers = 30, 8

series = exp_series(datum, layers, precision)
phi = reconstruct_phi(datum, precision, layers, series=series)
print("reconstructed phi_t =", phi)

# e(psi_t z) = phi_t(e(z)) should hold to the working precision.
print("functional equation holds to t-adic order", functional_equation_defect(datum, phi, series))

red = stable_model(phi, datum.place)
print("reduction:", red.kind, "with rank", red.r_psi, "for the good part")
