"""Classify geometries by their conformal Jacobi structure.

Run from the repository root:

    python3 demos/05_classification.py
"""

import numpy as np

from weylgeom import (
    InnerProduct,
    CurvatureTensor,
    classify_act,
    classify_chart,
    complex_hyperbolic_chart,
    complex_space_form_act,
    default_probe_points,
    fubini_study_chart,
    perturbed_flat_chart,
    r0,
    random_act,
    sphere_chart,
    standard_phi,
)

# Algebraic inputs: one verdict per tensor.
g5 = InnerProduct.euclidean(5)
fixtures = [
    ("space form          ", CurvatureTensor(2.0 * r0(g5).components, g5)),
    ("complex space form  ", complex_space_form_act(1.0, 1.0, standard_phi(8))),
    ("random act          ", random_act(7, 6)),
]
for label, act in fixtures:
    v = classify_act(act)
    extra = ""
    if v.lambda1 is not None:
        extra = f"  lambda0={v.lambda0:+.6f} lambda1={v.lambda1:+.6f}"
    print(f"{label} -> {v.kind.value}{extra}")
    for w in v.warnings:
        print(f"    note: {w}")

# Chart inputs: verdicts per probe point plus a summary. The projective
# chart is recognized structurally, with the Hermitian structure
# recovered and checked for consistency across points.
print()
for chart in (
    sphere_chart(4, 1.0),
    fubini_study_chart(4),
    complex_hyperbolic_chart(2),
    perturbed_flat_chart(6, 0.1, 42),
):
    rep = classify_chart(chart, default_probe_points(chart, count=3))
    summary = rep.summary
    print(f"{chart.name}")
    print(f"  kinds        {summary['kinds']}")
    print(f"  lambda1 sign {summary['lambda1_signs']}")
    if summary["phi_pair_consistency"] is not None:
        print(f"  phi spread   {summary['phi_pair_consistency']:.3e}")
