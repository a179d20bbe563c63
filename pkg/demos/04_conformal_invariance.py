"""Conformal rescaling leaves the (1,3) Weyl tensor untouched.

Run from the repository root:

    python3 demos/04_conformal_invariance.py
"""

import numpy as np

from weylgeom import (
    conformal_rescale,
    default_probe_points,
    flat_chart,
    fubini_study_chart,
    max_abs,
    riemann_at,
    sphere_chart,
    weyl_decompose,
)


def weyl13(chart, u):
    a, g = riemann_at(chart, u)
    w = weyl_decompose(a).w.components
    return np.einsum("ia,ajkl->ijkl", np.linalg.inv(g.g), w)


# Multiply each metric by a position-dependent positive factor. The
# full curvature changes; the index-raised Weyl tensor does not.
alpha = lambda u: float(np.exp(0.3 * u[0]))

for chart in (flat_chart(4), sphere_chart(4, 1.0), fubini_study_chart(2)):
    rescaled = conformal_rescale(chart, alpha)
    u = default_probe_points(chart, count=1)[0]
    a_base, _ = riemann_at(chart, u)
    a_resc, _ = riemann_at(rescaled, u)
    curv_change = max_abs(a_base.components - a_resc.components)
    weyl_change = max_abs(weyl13(chart, u) - weyl13(rescaled, u))
    print(f"{chart.name:22s} curvature moved {curv_change:.3e}, "
          f"(1,3) Weyl moved {weyl_change:.3e}")

# A flat chart stays conformally flat under any rescaling: the rescaled
# metric is curved, but its Weyl part vanishes identically.
resc = conformal_rescale(flat_chart(4), alpha)
u = default_probe_points(resc, count=1)[0]
a, g = riemann_at(resc, u)
print(f"\nrescaled flat chart: |R| = {max_abs(a):.3e}, "
      f"|W| = {max_abs(weyl_decompose(a).w):.3e}")
