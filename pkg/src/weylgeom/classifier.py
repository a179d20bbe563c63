"""Eigenvalue structure classification of Weyl curvature.

Decision tree over the reduced conformal Jacobi spectrum at a point,
given that the spectrum is direction independent:

  one cluster                -> conformally flat (the trace identity
                                forces the lone eigenvalue to zero, so
                                the Weyl norm is asserted small);
  two clusters, sizes
  (1, m-2), m even           -> conformally complex space form; the
                                eigenvalues pin (lambda0, lambda1), the
                                linear relation 3*lambda1 +
                                (m-1)*lambda0 = 0 is checked, and the
                                Hermitian structure is reconstructed
                                from the curvature components;
  anything else              -> other Osserman structure.

Direction dependent spectra short circuit to NotConformallyOsserman.

Reconstruction of Phi from B ~ A_Phi uses two component identities in
an orthonormal frame: B_pqqp = 3 Phi_pq^2 fixes a pivot entry up to
the (physically meaningless) global sign, B_pqql = -3 Phi_pq Phi_ql
fills the pivot column, and the polarized Jacobi operator propagates
the remaining columns: for a != q,

  Phi e_a = (2/3) Jpol(e_q, e_a) Phi e_q,
  [Jpol(x1, x2)]_{zy} = (B[y,x1,x2,z] + B[y,x2,x1,z]) / 2,

which is sign coherent with the pivot column.  The result is validated
against B and the almost complex identities before being returned.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .chart_geometry import MetricChart, riemann_at
from .curvature_algebra import r0, a_phi, weyl_decompose
from .spectral import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_SAMPLES,
    OssermanReport,
    SpectralProfile,
    osserman_test,
    reduced_jacobi,
    spectral_profile,
    structured_directions,
)
from .tensor_core import (
    CurvatureTensor,
    HermitianStructure,
    InnerProduct,
    max_abs,
    orthonormal_frame,
    transform_tensor,
)

__all__ = [
    "VerdictKind",
    "Verdict",
    "ToleranceConfig",
    "ClassifyConfig",
    "ChartReport",
    "Eq2aCheck",
    "DegenerateInputError",
    "ReconstructionFailedError",
    "check_eq2a",
    "recover_phi",
    "consensus_profile",
    "classify_point",
    "classify_act",
    "parity_consistency",
    "classify_chart",
]


class VerdictKind(str, Enum):
    CONFORMALLY_FLAT = "ConformallyFlat"
    CONFORMALLY_COMPLEX_SPACE_FORM = "ConformallyComplexSpaceForm"
    OSSERMAN_OTHER = "OssermanOther"
    NOT_CONFORMALLY_OSSERMAN = "NotConformallyOsserman"


class DegenerateInputError(ValueError):
    """Candidate tensor has no usable pivot component (lambda1 ~ 0)."""


class ReconstructionFailedError(ValueError):
    """Candidate tensor is not of the A_Phi form to tolerance."""


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds for one classification pass.

    spec_tol bounds the direction-to-direction spectrum drift accepted
    as constant; flat_tol bounds the Weyl norm accepted as zero;
    cluster_tol merges eigenvalues; degeneracy_tol guards the pivot in
    Phi recovery; eq2a_tol and recon_tol gate the structural checks of
    a complex space form verdict.
    """

    spec_tol: float
    flat_tol: float
    eq2a_tol: float
    recon_tol: float
    cluster_tol: float = DEFAULT_CLUSTER_TOL
    degeneracy_tol: float = 1e-3

    @classmethod
    def algebraic(cls) -> "ToleranceConfig":
        return cls(spec_tol=1e-6, flat_tol=1e-9, eq2a_tol=1e-8, recon_tol=1e-8)

    @classmethod
    def chart(cls) -> "ToleranceConfig":
        """Looser tiers matched to the finite difference noise floor."""
        return cls(spec_tol=1e-4, flat_tol=1e-5, eq2a_tol=1e-4, recon_tol=1e-6)


@dataclass(frozen=True)
class Eq2aCheck:
    passed: bool
    residual: float


def check_eq2a(lambda0: float, lambda1: float, m: int, tol: float = 1e-8) -> Eq2aCheck:
    """Relative residual of 3*lambda1 + (m-1)*lambda0 = 0."""
    if lambda1 == 0.0:
        raise ValueError("relation check needs lambda1 != 0")
    residual = abs(3.0 * lambda1 + (m - 1) * lambda0) / abs(lambda1)
    return Eq2aCheck(passed=residual <= tol, residual=residual)


def _require_euclidean(a: CurvatureTensor) -> None:
    if not a.metric.is_euclidean():
        raise ValueError("orthonormal frame required; transform the tensor first")


def recover_phi(
    b: CurvatureTensor,
    degeneracy_tol: float = 1e-3,
    recon_tol: float = 1e-8,
) -> HermitianStructure:
    """Reconstruct Phi from a tensor of the form a_phi(Phi).

    The global sign of Phi is not observable (a_phi is even), so the
    canonical representative with a positive pivot entry is returned.
    Raises DegenerateInputError when every pivot component is below the
    degeneracy threshold and ReconstructionFailedError when the
    validated residuals exceed recon_tol.
    """
    _require_euclidean(b)
    m = b.dim
    if m % 2 != 0:
        raise ValueError(f"even dimension required, got m={m}")
    c = b.components
    scale = max(1.0, b.max_abs())

    # Pivot: diag[p, q] = B_pqqp = 3 Phi_pq^2, maximal over p != q.
    diag = np.einsum("pqqp->pq", c).copy()
    np.fill_diagonal(diag, 0.0)
    p, q = np.unravel_index(np.argmax(np.abs(diag)), diag.shape)
    pivot = diag[p, q]
    if abs(pivot) <= degeneracy_tol * scale:
        raise DegenerateInputError(
            f"no pivot above {degeneracy_tol:.1e} * scale; tensor is degenerate"
        )
    if pivot < 0.0:
        raise ReconstructionFailedError(
            f"pivot component B[{p},{q},{q},{p}] = {pivot:.3e} is negative; "
            "tensor cannot be of the a_phi form"
        )

    phi = np.zeros((m, m))
    phi_pq = np.sqrt(pivot / 3.0)
    # Column q from B_pqql = -3 Phi_pq Phi_ql = 3 Phi_pq Phi_lq.
    phi[:, q] = c[p, q, q, :] / (3.0 * phi_pq)
    # Remaining columns by polarized Jacobi propagation; c[y, q, a, z]
    # and c[y, a, q, z] reordered to [a, z, y].
    jpol = 0.5 * (np.einsum("yaz->azy", c[:, q]) + np.einsum("yaz->azy", c[:, :, q]))
    cols = (2.0 / 3.0) * np.einsum("azy,y->za", jpol, phi[:, q])
    keep = np.arange(m) != q
    phi[:, keep] = cols[:, keep]

    square = max_abs(phi @ phi + np.eye(m))
    skew = max_abs(phi + phi.T)
    recon = max_abs(a_phi(phi, b.metric).components - c)
    if max(square, skew, recon / scale) > recon_tol:
        raise ReconstructionFailedError(
            f"validation residuals square={square:.3e} skew={skew:.3e} "
            f"reconstruction={recon:.3e} exceed {recon_tol:.1e}"
        )
    return HermitianStructure(phi)


@dataclass(frozen=True)
class Verdict:
    """Classification outcome at one point.

    lambda0, lambda1 and phi are populated only for complex space form
    verdicts; diagnostics carries the measured residuals that justify
    (or disqualify) the structural claims.
    """

    kind: VerdictKind
    m: int
    profile: SpectralProfile
    lambda0: float | None = None
    lambda1: float | None = None
    phi: HermitianStructure | None = None
    diagnostics: dict = field(default_factory=dict)
    warnings: tuple[str, ...] = ()


def consensus_profile(
    w: CurvatureTensor, cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> tuple[SpectralProfile, np.ndarray]:
    """Modal spectral profile over the structured direction set.

    Profiles are grouped by their multiplicity signature; the winner is
    the most frequent signature, ties broken by the earliest direction
    in the deterministic enumeration.  Returns the representative
    profile and the direction it came from.
    """
    _require_euclidean(w)
    dirs = structured_directions(w.dim)
    profiles = [
        spectral_profile(reduced_jacobi(w, x), cluster_tol=cluster_tol) for x in dirs
    ]
    signatures = [pr.multiplicities for pr in profiles]
    counts = Counter(signatures)
    top = max(counts.values())
    winners = {sig for sig, n in counts.items() if n == top}
    for x, pr, sig in zip(dirs, profiles, signatures):
        if sig in winners:
            return pr, x
    raise AssertionError("unreachable: at least one profile exists")


def parity_consistency(m: int, profile: SpectralProfile, verdict: Verdict) -> list[str]:
    """Warnings when the cluster structure contradicts the parity laws.

    Odd m forces a single eigenvalue; m = 2 mod 4 forces a simple
    eigenvalue whenever there are at least two.  A warning flags a
    numerical clustering failure, not new geometry.
    """
    if verdict.kind is VerdictKind.NOT_CONFORMALLY_OSSERMAN:
        return []
    mults = profile.multiplicities
    out = []
    if m % 2 == 1 and len(mults) > 1:
        out.append(
            f"parity: odd m={m} admits only one reduced eigenvalue, "
            f"observed {len(mults)} clusters {mults}"
        )
    if m % 4 == 2 and len(mults) >= 2 and 1 not in mults:
        out.append(
            f"parity: m={m} = 2 mod 4 requires a simple eigenvalue among "
            f"multiple clusters, observed multiplicities {mults}"
        )
    return out


def _classify_constant(
    w: CurvatureTensor,
    profile: SpectralProfile,
    m: int,
    tol: ToleranceConfig,
    diagnostics: dict,
) -> Verdict:
    """Tree below the Osserman gate; assumes a direction independent
    spectrum and fills in the structural branches."""
    weyl_max = diagnostics["weyl_max"]
    clusters = profile.clusters
    mults = profile.multiplicities
    warnings: list[str] = []

    if len(clusters) == 1:
        gap = tol.cluster_tol * max(1.0, max(abs(v) for v in profile.values))
        if profile.spread > 0.5 * gap:
            warnings.append(
                "near-degenerate: intra-cluster spread "
                f"{profile.spread:.3e} within a factor 2 of the clustering "
                f"threshold {gap:.3e}; an eigenvalue split below the "
                "clustering resolution cannot be excluded"
            )
        # The zero trace pins a merged cluster at eigenvalue 0, and
        # polarization bounds the components by three times the largest
        # reduced eigenvalue, hence by 3 * spread.  Anything larger is
        # inconsistent with a single-eigenvalue profile.
        if weyl_max <= max(tol.flat_tol, 3.0 * profile.spread):
            return Verdict(
                kind=VerdictKind.CONFORMALLY_FLAT,
                m=m,
                profile=profile,
                diagnostics=diagnostics,
                warnings=tuple(warnings),
            )
        warnings.append(
            f"single eigenvalue but Weyl norm {weyl_max:.3e} exceeds "
            f"{tol.flat_tol:.1e}; inconsistent with the trace identity"
        )
        return Verdict(
            kind=VerdictKind.OSSERMAN_OTHER,
            m=m,
            profile=profile,
            diagnostics=diagnostics,
            warnings=tuple(warnings),
        )

    if sorted(mults) == sorted([1, m - 2]) and m % 2 == 0:
        single_idx = mults.index(1)
        bulk_idx = 1 - single_idx
        single_val = clusters[single_idx][0]
        lambda0 = clusters[bulk_idx][0]
        lambda1 = (single_val - lambda0) / 3.0
        eq2a = check_eq2a(lambda0, lambda1, m, tol=tol.eq2a_tol)
        diagnostics["eq2a_residual"] = eq2a.residual
        if not eq2a.passed:
            warnings.append(
                f"eigenvalue relation residual {eq2a.residual:.3e} exceeds "
                f"{tol.eq2a_tol:.1e}; not a conformal complex space form"
            )
            return Verdict(
                kind=VerdictKind.OSSERMAN_OTHER,
                m=m,
                profile=profile,
                diagnostics=diagnostics,
                warnings=tuple(warnings),
            )
        candidate = CurvatureTensor(
            (w.components - lambda0 * r0(w.metric).components) / lambda1, w.metric
        )
        try:
            phi = recover_phi(
                candidate,
                degeneracy_tol=tol.degeneracy_tol,
                recon_tol=tol.recon_tol,
            )
        except (DegenerateInputError, ReconstructionFailedError) as exc:
            warnings.append(f"Hermitian structure recovery failed: {exc}")
            return Verdict(
                kind=VerdictKind.OSSERMAN_OTHER,
                m=m,
                profile=profile,
                diagnostics=diagnostics,
                warnings=tuple(warnings),
            )
        model = lambda0 * r0(w.metric).components + lambda1 * a_phi(phi, w.metric).components
        diagnostics["reconstruction_residual"] = max_abs(w.components - model) / max(
            1.0, weyl_max
        )
        if m < 8:
            warnings.append(
                f"below theorem threshold m>=8: the rigidity statement is not "
                f"claimed at m={m}; structural verdict is numerical only"
            )
        return Verdict(
            kind=VerdictKind.CONFORMALLY_COMPLEX_SPACE_FORM,
            m=m,
            profile=profile,
            lambda0=lambda0,
            lambda1=lambda1,
            phi=phi,
            diagnostics=diagnostics,
            warnings=tuple(warnings),
        )

    return Verdict(
        kind=VerdictKind.OSSERMAN_OTHER,
        m=m,
        profile=profile,
        diagnostics=diagnostics,
        warnings=tuple(warnings),
    )


def classify_point(
    w: CurvatureTensor,
    profile: SpectralProfile,
    osserman: OssermanReport,
    m: int,
    tol: ToleranceConfig | None = None,
) -> Verdict:
    """Decision tree over an orthonormal-frame Weyl tensor at a point."""
    tol = tol or ToleranceConfig.algebraic()
    _require_euclidean(w)
    if w.dim != m or profile.dim != m:
        raise ValueError(
            f"inconsistent inputs: tensor dim {w.dim}, profile dim {profile.dim}, m={m}"
        )
    diagnostics = {
        "weyl_max": w.max_abs(),
        "osserman_distance": osserman.max_profile_distance,
        "profile_spread": profile.spread,
    }
    if not osserman.is_constant:
        return Verdict(
            kind=VerdictKind.NOT_CONFORMALLY_OSSERMAN,
            m=m,
            profile=profile,
            diagnostics=diagnostics,
        )
    verdict = _classify_constant(w, profile, m, tol, diagnostics)
    extra = parity_consistency(m, profile, verdict)
    if extra:
        verdict = replace(verdict, warnings=verdict.warnings + tuple(extra))
    return verdict


def classify_act(
    a: CurvatureTensor,
    tol: ToleranceConfig | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> Verdict:
    """Full pipeline for a single algebraic curvature tensor.

    Transforms to an orthonormal frame if needed, extracts the Weyl
    part, and classifies its reduced Jacobi structure.
    """
    tol = tol or ToleranceConfig.algebraic()
    if not a.metric.is_euclidean():
        a = transform_tensor(a, orthonormal_frame(a.metric))
    dec = weyl_decompose(a)
    w = dec.w
    profile, _ = consensus_profile(w, cluster_tol=tol.cluster_tol)
    report = osserman_test(w, samples=samples, seed=seed, spec_tol=tol.spec_tol)
    return classify_point(w, profile, report, a.dim, tol=tol)


@dataclass(frozen=True)
class ClassifyConfig:
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    tol: ToleranceConfig = field(default_factory=ToleranceConfig.chart)


@dataclass(frozen=True)
class ChartReport:
    points: np.ndarray
    verdicts: tuple[Verdict, ...]
    summary: dict


def _phi_pair_consistency(verdicts: tuple[Verdict, ...]) -> float | None:
    """Worst pairwise distance between recovered structures, modulo the
    global sign; None unless at least two points carry a Phi."""
    phis = [v.phi.matrix for v in verdicts if v.phi is not None]
    if len(phis) < 2:
        return None
    worst = 0.0
    for i in range(len(phis)):
        for j in range(i + 1, len(phis)):
            d = min(max_abs(phis[i] - phis[j]), max_abs(phis[i] + phis[j]))
            worst = max(worst, d)
    return worst


def classify_chart(
    chart: MetricChart,
    points: np.ndarray,
    config: ClassifyConfig | None = None,
) -> ChartReport:
    """Classify the Weyl structure of a chart at each given point."""
    config = config or ClassifyConfig()
    points = np.atleast_2d(np.asarray(points, dtype=float))
    verdicts = []
    for u in points:
        r, g = riemann_at(chart, u)
        a_on = transform_tensor(r, orthonormal_frame(g))
        verdicts.append(
            classify_act(a_on, tol=config.tol, samples=config.samples, seed=config.seed)
        )
    verdicts = tuple(verdicts)
    counts = Counter(v.kind.value for v in verdicts)
    signs = Counter(
        "positive" if v.lambda1 > 0 else "negative"
        for v in verdicts
        if v.lambda1 is not None
    )
    summary = {
        "kinds": dict(sorted(counts.items())),
        "lambda1_signs": dict(sorted(signs.items())),
        "phi_pair_consistency": _phi_pair_consistency(verdicts),
        "warning_count": sum(len(v.warnings) for v in verdicts),
    }
    return ChartReport(points=points, verdicts=verdicts, summary=summary)
