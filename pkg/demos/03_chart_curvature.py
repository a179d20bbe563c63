"""Curvature of coordinate charts, checked against closed forms.

Run from the repository root:

    python3 demos/03_chart_curvature.py
"""

import dataclasses

import numpy as np

from weylgeom import (
    InnerProduct,
    complex_space_form_act,
    default_probe_points,
    fubini_study_chart,
    hyperbolic_chart,
    max_abs,
    orthonormal_frame,
    r0,
    riemann_at,
    second_bianchi_residual,
    sphere_chart,
    standard_phi,
    transform_tensor,
)

# Constant curvature charts must reproduce +-r0 once the curvature is
# pulled into an orthonormal frame.
u = np.full(3, 0.05)
for chart, sign in [(sphere_chart(3, 1.0), +1.0), (hyperbolic_chart(3), -1.0)]:
    a, g = riemann_at(chart, u)
    pulled = transform_tensor(a, orthonormal_frame(g))
    dev = max_abs(pulled.components - sign * r0(InnerProduct.euclidean(3)).components)
    print(f"{chart.name:18s} deviation from {sign:+.0f} * r0: {dev:.3e}")

# The projective chart evaluates to the complex space form generator at
# the origin, where its metric is the identity.
fs = fubini_study_chart(2)
a, g = riemann_at(fs, np.zeros(4))
oracle = complex_space_form_act(1.0, 1.0, standard_phi(4))
print(f"{fs.name:18s} deviation from r0 + a_phi: "
      f"{max_abs(a.components - oracle.components):.3e}")

# Charts carry analytic metric derivatives when available; stripping
# them switches the pipeline to finite differences. Both modes satisfy
# the second Bianchi identity, at different noise floors.
chart = sphere_chart(3, 1.0)
fd = dataclasses.replace(chart, d_metric=None, d2_metric=None)
for label, c in [("analytic", chart), ("finite difference", fd)]:
    worst = max(second_bianchi_residual(c, p) for p in default_probe_points(c, count=3))
    print(f"second Bianchi, {label:18s} worst residual {worst:.3e}")
