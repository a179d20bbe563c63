"""Split a curvature tensor into scalar, Ricci-type, and Weyl parts.

Run from the repository root:

    python3 demos/01_weyl_decomposition.py
"""

import numpy as np

from weylgeom import (
    InnerProduct,
    complex_space_form_act,
    max_abs,
    r0,
    random_act,
    ricci_scalar,
    standard_phi,
    weyl_decompose,
)

# The sphere generator has no conformal content: its Weyl part is zero
# and everything lives in the scalar trace term.
g = InnerProduct.euclidean(5)
sphere = r0(g)
rho, tau = ricci_scalar(sphere)
print("sphere generator, m=5")
print(f"  scalar curvature        {tau:.6f}   (expect m(m-1) = 20)")
dec = weyl_decompose(sphere)
print(f"  |Weyl part|             {max_abs(dec.w):.3e}")
print(f"  reconstruction residual {dec.reconstruction_residual():.3e}")

# A complex space form keeps a genuinely conformal piece. At m = 8 the
# trace terms absorb 3/7 of the sphere generator, leaving
# W = -3/7 r0 + a_phi.
act = complex_space_form_act(1.0, 1.0, standard_phi(8))
dec = weyl_decompose(act)
g8 = InnerProduct.euclidean(8)
expected = -3.0 / 7.0 * r0(g8).components + (act.components - r0(g8).components)
print("\ncomplex space form, m=8")
print(f"  |W - (-3/7 r0 + a_phi)| {max_abs(dec.w.components - expected):.3e}")
print(f"  Weyl part Ricci trace   {max_abs(ricci_scalar(dec.w)[0]):.3e}")

# Random tensors exercise the full decomposition: the three parts always
# reassemble the input.
for seed in range(3):
    a = random_act(seed, 6)
    dec = weyl_decompose(a)
    print(f"\nrandom act seed={seed}, m=6")
    print(f"  tau = {dec.tau:+.6f}, reconstruction {dec.reconstruction_residual():.3e}")
