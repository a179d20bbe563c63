"""Model charts and algebraic fixtures used as oracles and baselines.

Chart models: flat space, the round sphere (stereographic), hyperbolic
space (conformal ball), the complex projective model in inhomogeneous
coordinates, its negative curvature dual, and a seeded perturbed flat
chart as a negative control.  All charts carry analytic first and
second metric derivatives, so the tight tolerance tiers apply; the
curvature pipeline still exercises its finite difference path when a
chart is rebuilt without callbacks.

Complex models use interleaved realification: z_j = u_{2j-1} + i u_{2j}
(one based), with the standard block structure as the complex unit.
The projective metric is normalized so g(0) is the identity and the
curvature at the origin equals R0 + A_Phi for the standard Phi, which
pins holomorphic sectional curvature 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chart_geometry import Ball, Box, MetricChart
from .curvature_algebra import complex_space_form_act, random_act
from .tensor_core import CurvatureTensor, HermitianStructure, InnerProduct

__all__ = [
    "standard_phi",
    "flat_chart",
    "sphere_chart",
    "hyperbolic_chart",
    "fubini_study_chart",
    "complex_hyperbolic_chart",
    "perturbed_flat_chart",
    "polynomial_metric_chart",
    "ModelSpec",
    "build_model",
    "CHART_MODELS",
    "ALGEBRAIC_MODELS",
]


def standard_phi(m: int) -> HermitianStructure:
    """Block diagonal complex unit: 2x2 rotation blocks [[0, -1], [1, 0]]."""
    if m % 2 != 0:
        raise ValueError(f"even dimension required, got m={m}")
    phi = np.zeros((m, m))
    for j in range(m // 2):
        phi[2 * j, 2 * j + 1] = -1.0
        phi[2 * j + 1, 2 * j] = 1.0
    return HermitianStructure(phi)


def flat_chart(m: int) -> MetricChart:
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    eye = np.eye(m)
    zeros1 = np.zeros((m, m, m))
    zeros2 = np.zeros((m, m, m, m))
    return MetricChart(
        dim=m,
        metric_at=lambda u: eye,
        domain=Box(-5.0 * np.ones(m), 5.0 * np.ones(m)),
        d_metric=lambda u: zeros1,
        d2_metric=lambda u: zeros2,
        name=f"flat(m={m})",
    )


def _conformal_chart(m: int, phi0, dphi0, d2phi0, domain, name: str) -> MetricChart:
    """Chart for g = phi0(|u|^2) * identity with scalar derivatives
    supplied as functions of the point."""
    eye = np.eye(m)

    def metric(u):
        return phi0(u) * eye

    def d1(u):
        return np.einsum("a,ij->aij", dphi0(u), eye)

    def d2(u):
        return np.einsum("ab,ij->abij", d2phi0(u), eye)

    return MetricChart(dim=m, metric_at=metric, domain=domain, d_metric=d1, d2_metric=d2, name=name)


def sphere_chart(m: int, r: float = 1.0) -> MetricChart:
    """Round sphere of radius r in stereographic coordinates:
    g = 4 r^4 / (r^2 + |u|^2)^2 * identity, sectional curvature 1/r^2."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    c = 4.0 * r**4

    def phi0(u):
        return c / (r**2 + u @ u) ** 2

    def dphi0(u):
        return -4.0 * c * u / (r**2 + u @ u) ** 3

    def d2phi0(u):
        q = r**2 + u @ u
        return -4.0 * c * np.eye(m) / q**3 + 24.0 * c * np.outer(u, u) / q**4

    return _conformal_chart(
        m, phi0, dphi0, d2phi0, Box(-3.0 * np.ones(m), 3.0 * np.ones(m)), f"sphere(m={m},r={r})"
    )


def hyperbolic_chart(m: int) -> MetricChart:
    """Hyperbolic space on the unit ball: g = 4 / (1 - |u|^2)^2 * identity,
    sectional curvature -1."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")

    def phi0(u):
        return 4.0 / (1.0 - u @ u) ** 2

    def dphi0(u):
        return 16.0 * u / (1.0 - u @ u) ** 3

    def d2phi0(u):
        q = 1.0 - u @ u
        return 16.0 * np.eye(m) / q**3 + 96.0 * np.outer(u, u) / q**4

    return _conformal_chart(m, phi0, dphi0, d2phi0, Ball(1.0, margin=0.1), f"hyperbolic(m={m})")


def _projective_family(n: int, sign: float, domain, name: str) -> MetricChart:
    """Shared construction for the projective model and its dual.

    g = [(1 + sign s) I - sign P] / (1 + sign s)^2 with s = |u|^2 and
    P = u u^T + (J u)(J u)^T; sign +1 gives the positive model, -1 the
    negative dual.
    """
    m = 2 * n
    jmat = standard_phi(m).matrix
    eye = np.eye(m)

    def parts(u):
        s = float(u @ u)
        v = jmat @ u
        p = np.outer(u, u) + np.outer(v, v)
        return s, v, p

    def metric(u):
        s, _, p = parts(u)
        q = 1.0 + sign * s
        return (q * eye - sign * p) / q**2

    def dp(u, a, v):
        ea = eye[a]
        ja = jmat[:, a]
        return np.outer(ea, u) + np.outer(u, ea) + np.outer(ja, v) + np.outer(v, ja)

    def d1(u):
        s, v, p = parts(u)
        q = 1.0 + sign * s
        out = np.empty((m, m, m))
        for a in range(m):
            dq = sign * 2.0 * u[a]
            out[a] = -dq / q**2 * eye + 2.0 * dq * sign / q**3 * p - sign / q**2 * dp(u, a, v)
        return out

    def d2(u):
        s, v, p = parts(u)
        q = 1.0 + sign * s
        out = np.empty((m, m, m, m))
        for a in range(m):
            dqa = sign * 2.0 * u[a]
            dpa = dp(u, a, v)
            for b in range(m):
                dqb = sign * 2.0 * u[b]
                dqab = sign * 2.0 * eye[a, b]
                dpb = dp(u, b, v)
                d2p = (
                    np.outer(eye[a], eye[b])
                    + np.outer(eye[b], eye[a])
                    + np.outer(jmat[:, a], jmat[:, b])
                    + np.outer(jmat[:, b], jmat[:, a])
                )
                term_eye = (-dqab / q**2 + 2.0 * dqa * dqb / q**3) * eye
                term_p = (
                    2.0 * sign * (dqab / q**3 - 3.0 * dqa * dqb / q**4) * p
                    + 2.0 * sign * dqa / q**3 * dpb
                )
                term_dp = 2.0 * sign * dqb / q**3 * dpa - sign / q**2 * d2p
                out[a, b] = term_eye + term_p + term_dp
        return out

    return MetricChart(dim=m, metric_at=metric, domain=domain, d_metric=d1, d2_metric=d2, name=name)


def fubini_study_chart(n: int) -> MetricChart:
    """Complex projective model in inhomogeneous coordinates, m = 2n."""
    if n < 2:
        raise ValueError(f"need complex dimension n >= 2, got {n}")
    m = 2 * n
    return _projective_family(
        n, +1.0, Box(-3.0 * np.ones(m), 3.0 * np.ones(m)), f"fubini_study(n={n})"
    )


def complex_hyperbolic_chart(n: int) -> MetricChart:
    """Negative curvature dual of the projective model, on the unit ball."""
    if n < 2:
        raise ValueError(f"need complex dimension n >= 2, got {n}")
    return _projective_family(n, -1.0, Ball(1.0, margin=0.1), f"complex_hyperbolic(n={n})")


def perturbed_flat_chart(m: int, eps: float, seed: int) -> MetricChart:
    """Flat metric plus a seeded quadratic symmetric perturbation.

    g(u) = I + eps * (C0 + sum_a u_a C1[a] / sqrt(m)
           + sum_ab u_a u_b C2[a, b] / m), all C symmetric with entries
    uniform in [-1, 1].  Positivity is checked on a deterministic point
    sample at construction; generic draws break eigenvalue constancy of
    the conformal part, which is the point of the model.
    """
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    rng = np.random.default_rng(seed)

    def sym(a):
        return 0.5 * (a + a.T)

    c0 = sym(rng.uniform(-1.0, 1.0, size=(m, m)))
    c1 = np.array([sym(rng.uniform(-1.0, 1.0, size=(m, m))) for _ in range(m)]) / np.sqrt(m)
    c2_raw = np.array(
        [[sym(rng.uniform(-1.0, 1.0, size=(m, m))) for _ in range(m)] for _ in range(m)]
    )
    c2 = 0.5 * (c2_raw + np.transpose(c2_raw, (1, 0, 2, 3))) / m
    eye = np.eye(m)

    def metric(u):
        quad = np.einsum("a,b,abij->ij", u, u, c2)
        return eye + eps * (c0 + np.einsum("a,aij->ij", u, c1) + quad)

    def d1(u):
        return eps * (c1 + 2.0 * np.einsum("b,abij->aij", u, c2))

    def d2(u):
        return eps * 2.0 * c2

    chart = MetricChart(
        dim=m,
        metric_at=metric,
        domain=Box(-0.5 * np.ones(m), 0.5 * np.ones(m)),
        d_metric=d1,
        d2_metric=d2,
        name=f"perturbed_flat(m={m},eps={eps},seed={seed})",
    )
    for p in chart.probe_points(16, seed=0):
        chart.metric(p)  # raises DomainError on SPD violation
    for corner in (chart.domain.lo, chart.domain.hi):
        chart.metric(corner)
    return chart


def polynomial_metric_chart(
    constant: np.ndarray,
    linear: np.ndarray | None = None,
    quadratic: np.ndarray | None = None,
    extent: float = 0.5,
    name: str = "polynomial",
) -> MetricChart:
    """Metric patch from explicit polynomial coefficient arrays.

    g(u) = constant + sum_a u_a linear[a] + sum_ab u_a u_b quadratic[a, b].
    This is the machine readable external metric format accepted by the
    command line front end.
    """
    g0 = np.asarray(constant, dtype=float)
    m = g0.shape[0]
    if g0.shape != (m, m):
        raise ValueError(f"constant term must be square, got {g0.shape}")
    lin = np.zeros((m, m, m)) if linear is None else np.asarray(linear, dtype=float)
    quad = np.zeros((m, m, m, m)) if quadratic is None else np.asarray(quadratic, dtype=float)
    if lin.shape != (m, m, m) or quad.shape != (m, m, m, m):
        raise ValueError("coefficient array shapes must be (m,m,m) and (m,m,m,m)")
    quad = 0.5 * (quad + np.transpose(quad, (1, 0, 2, 3)))

    def metric(u):
        return g0 + np.einsum("a,aij->ij", u, lin) + np.einsum("a,b,abij->ij", u, u, quad)

    def d1(u):
        return lin + 2.0 * np.einsum("b,abij->aij", u, quad)

    def d2(u):
        return 2.0 * quad

    chart = MetricChart(
        dim=m,
        metric_at=metric,
        domain=Box(-extent * np.ones(m), extent * np.ones(m)),
        d_metric=d1,
        d2_metric=d2,
        name=name,
    )
    for p in chart.probe_points(8, seed=0):
        chart.metric(p)
    return chart


@dataclass(frozen=True)
class ModelSpec:
    """Named model with parameters; kind is chart or algebraic."""

    name: str
    params: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        if self.name in CHART_MODELS:
            return "chart"
        if self.name in ALGEBRAIC_MODELS:
            return "algebraic"
        raise ValueError(f"unknown model name {self.name!r}")


def _algebraic_space_form(m: int, lambda0: float = 1.0) -> CurvatureTensor:
    from .curvature_algebra import r0

    g = InnerProduct.euclidean(m)
    return CurvatureTensor(lambda0 * r0(g).components, g)


def _algebraic_complex_space_form(n: int, lambda0: float = 1.0, lambda1: float = 1.0) -> CurvatureTensor:
    m = 2 * n
    return complex_space_form_act(lambda0, lambda1, standard_phi(m), InnerProduct.euclidean(m))


CHART_MODELS = {
    "flat": (flat_chart, {"m"}),
    "sphere": (sphere_chart, {"m", "r"}),
    "hyperbolic": (hyperbolic_chart, {"m"}),
    "fubini_study": (fubini_study_chart, {"n"}),
    "complex_hyperbolic": (complex_hyperbolic_chart, {"n"}),
    "perturbed_flat": (perturbed_flat_chart, {"m", "eps", "seed"}),
    "polynomial": (polynomial_metric_chart, {"constant", "linear", "quadratic", "extent"}),
}

ALGEBRAIC_MODELS = {
    "space_form": (_algebraic_space_form, {"m", "lambda0"}),
    "complex_space_form": (_algebraic_complex_space_form, {"n", "lambda0", "lambda1"}),
    "random": (random_act, {"seed", "m", "k"}),
}


def build_model(spec: ModelSpec):
    """Instantiate a model spec; returns a MetricChart or a CurvatureTensor."""
    kind = spec.kind
    table = CHART_MODELS if kind == "chart" else ALGEBRAIC_MODELS
    builder, allowed = table[spec.name]
    unknown = set(spec.params) - allowed
    if unknown:
        raise ValueError(f"model {spec.name!r} got unknown parameters {sorted(unknown)}")
    params = dict(spec.params)
    if spec.name == "polynomial":
        for key in ("constant", "linear", "quadratic"):
            if key in params:
                params[key] = np.asarray(params[key], dtype=float)
    if spec.name == "random" and "k" in params and params["k"] is None:
        del params["k"]
    return builder(**params)
