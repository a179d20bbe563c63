"""Canonical curvature tensors and the conformal (Weyl) decomposition.

The decomposition splits any algebraic curvature tensor ``A`` as

    A = W + c1 * tau * R0 + c2 * L,
    c1 = -1 / ((m - 1) (m - 2)),   c2 = 1 / (m - 2),

where ``R0`` is the constant curvature tensor of the metric, ``L`` is
built from the Ricci form, ``tau`` is the scalar curvature, and ``W``
is the trace free conformal part.  Ricci contraction is always carried
out in an orthonormal frame; for a general metric the tensor is
converted first and the result is mapped back, so a single index
convention covers every code path.

Two generator families produce exact algebraic curvature tensors:

    A_Psi(x, y, z, w) = g(Psi x, w) g(Psi y, z) - g(Psi x, z) g(Psi y, w)

for a g-self-adjoint Psi, and

    A_Phi(x, y, z, w) = g(Phi x, w) g(Phi y, z) - g(Phi x, z) g(Phi y, w)
                        - 2 g(Phi x, y) g(Phi z, w)

for a g-skew-adjoint Phi.  ``A_Id`` reproduces ``R0``, and
``L = A_{Id+rho} - A_Id - A_rho`` with rho the Ricci operator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .tensor_core import (
    CurvatureTensor,
    HermitianStructure,
    InnerProduct,
    SelfAdjointEndo,
    max_abs,
    orthonormal_frame,
    self_adjoint_residual,
    skew_adjoint_residual,
    symmetry_residual,
    transform_tensor,
)

__all__ = [
    "CurvatureDecomposition",
    "r0",
    "ricci_scalar",
    "l_tensor",
    "weyl_decompose",
    "a_psi",
    "a_phi",
    "draw_act_generators",
    "sum_psi_generators",
    "random_act",
    "complex_space_form_act",
    "weyl_constants",
]

_ADJOINT_TOL = 1e-8
_ACT_CHECK_TOL = 1e-6


def weyl_constants(m: int) -> tuple[float, float]:
    """The pair (c1, c2) of decomposition constants for dimension m."""
    if m < 3:
        raise ValueError(f"decomposition constants are undefined for m={m}; need m >= 3")
    return -1.0 / ((m - 1) * (m - 2)), 1.0 / (m - 2)


@dataclass(frozen=True)
class CurvatureDecomposition:
    """Result of the conformal decomposition of a curvature tensor.

    Attributes
    ----------
    r : CurvatureTensor
        The input tensor.
    ricci : (m, m) array
        Covariant Ricci form in the same frame as ``r``.
    tau : float
        Scalar curvature.
    l : CurvatureTensor
        Ricci part built from the Ricci form.
    w : CurvatureTensor
        Conformal part; trace free in the Jacobi sense.
    c1, c2 : float
        Dimension constants used in the reconstruction.
    """

    r: CurvatureTensor
    ricci: np.ndarray
    tau: float
    l: CurvatureTensor
    w: CurvatureTensor
    c1: float
    c2: float

    @property
    def dim(self) -> int:
        return self.r.dim

    def reconstruction_residual(self) -> float:
        """Max-norm of R - (W + c1 tau R0 + c2 L); roundoff level by construction."""
        g = self.r.metric
        rebuilt = (
            self.w.components
            + self.c1 * self.tau * r0(g).components
            + self.c2 * self.l.components
        )
        return max_abs(self.r.components - rebuilt)


def r0(g: InnerProduct) -> CurvatureTensor:
    """Constant curvature tensor: (R0)_ijkl = g_jk g_il - g_ik g_jl."""
    gm = g.g
    comps = np.einsum("jk,il->ijkl", gm, gm) - np.einsum("ik,jl->ijkl", gm, gm)
    return CurvatureTensor(comps, g)


def _to_orthonormal(a: CurvatureTensor) -> tuple[CurvatureTensor, np.ndarray | None]:
    """Return the tensor in an orthonormal frame plus the transform used."""
    if a.metric.is_euclidean():
        return a, None
    b = orthonormal_frame(a.metric)
    return transform_tensor(a, b), b


def ricci_scalar(a: CurvatureTensor, strict: bool = True) -> tuple[np.ndarray, float]:
    """Ricci form and scalar curvature of a curvature tensor.

    Contraction rho_ij = sum_k A_ikkj is evaluated in an orthonormal
    frame and transported back to the tensor's own frame.  The returned
    form is symmetrized; tau is its orthonormal trace.

    With ``strict`` the input must pass the curvature symmetry check to
    a loose tolerance; pass ``strict=False`` to measure diagnostics on
    deliberately broken tensors.
    """
    if strict:
        res = symmetry_residual(a)
        if res > _ACT_CHECK_TOL * max(1.0, a.max_abs()):
            raise ValueError(
                f"symmetry residual {res:.3e} too large for Ricci contraction; "
                "pass strict=False to override"
            )
    a_on, b = _to_orthonormal(a)
    rho_on = np.einsum("ikkj->ij", a_on.components)
    rho_on = 0.5 * (rho_on + rho_on.T)
    tau = float(np.trace(rho_on))
    if b is None:
        return rho_on, tau
    # Covariant transport back: rho_on = B^T rho B.
    binv = np.linalg.inv(b)
    rho = binv.T @ rho_on @ binv
    return 0.5 * (rho + rho.T), tau


def l_tensor(rho: np.ndarray, g: InnerProduct) -> CurvatureTensor:
    """Ricci part of the decomposition, from the covariant Ricci form.

    L_ijkl = rho_jk g_il - rho_ik g_jl + g_jk rho_il - g_ik rho_jl.
    """
    rho = np.asarray(rho, dtype=float)
    if max_abs(rho - rho.T) > 1e-8 * max(1.0, max_abs(rho)):
        raise ValueError("Ricci form must be symmetric")
    gm = g.g
    comps = (
        np.einsum("jk,il->ijkl", rho, gm)
        - np.einsum("ik,jl->ijkl", rho, gm)
        + np.einsum("jk,il->ijkl", gm, rho)
        - np.einsum("ik,jl->ijkl", gm, rho)
    )
    return CurvatureTensor(comps, g)


def weyl_decompose(a: CurvatureTensor, strict: bool = True) -> CurvatureDecomposition:
    """Split a curvature tensor into conformal, scalar and Ricci parts.

    Requires m >= 3 for the constants; conformal classification is
    meaningful from m = 4 up.  The reconstruction identity
    R = W + c1 tau R0 + c2 L holds to roundoff by construction.
    """
    m = a.dim
    c1, c2 = weyl_constants(m)
    rho, tau = ricci_scalar(a, strict=strict)
    ell = l_tensor(rho, a.metric)
    w_comps = a.components - c1 * tau * r0(a.metric).components - c2 * ell.components
    w = CurvatureTensor(w_comps, a.metric)
    return CurvatureDecomposition(r=a, ricci=rho, tau=tau, l=ell, w=w, c1=c1, c2=c2)


def a_psi(psi: SelfAdjointEndo | np.ndarray, g: InnerProduct) -> CurvatureTensor:
    """Curvature generator of a self-adjoint endomorphism."""
    mat = psi.matrix if isinstance(psi, SelfAdjointEndo) else np.asarray(psi, dtype=float)
    res = self_adjoint_residual(mat, g)
    if res > _ADJOINT_TOL * max(1.0, max_abs(mat)):
        raise ValueError(f"endomorphism is not g-self-adjoint (residual {res:.3e})")
    # E_li = g(Psi e_i, e_l); E is symmetric exactly when Psi is g-self-adjoint.
    e = g.g @ mat
    comps = np.einsum("li,kj->ijkl", e, e) - np.einsum("ki,lj->ijkl", e, e)
    return CurvatureTensor(comps, g)


def a_phi(phi: HermitianStructure | np.ndarray, g: InnerProduct) -> CurvatureTensor:
    """Curvature generator of a skew-adjoint endomorphism.

    For a Hermitian almost complex structure this is the complex space
    form building block; the output is invariant under Phi -> -Phi.
    """
    mat = phi.matrix if isinstance(phi, HermitianStructure) else np.asarray(phi, dtype=float)
    res = skew_adjoint_residual(mat, g)
    if res > _ADJOINT_TOL * max(1.0, max_abs(mat)):
        raise ValueError(f"endomorphism is not g-skew-adjoint (residual {res:.3e})")
    f = g.g @ mat
    comps = (
        np.einsum("li,kj->ijkl", f, f)
        - np.einsum("ki,lj->ijkl", f, f)
        - 2.0 * np.einsum("ji,lk->ijkl", f, f)
    )
    return CurvatureTensor(comps, g)


def draw_act_generators(seed: int, m: int, k: int) -> tuple[list[np.ndarray], np.ndarray]:
    """Deterministic draw of k symmetric generators and coefficients.

    Entries are uniform in [-1, 1], symmetrized; exposed separately so
    the summation path is testable with handpicked generators.
    """
    if k < 1:
        raise ValueError(f"need at least one generator, got k={k}")
    rng = np.random.default_rng(seed)
    psis = []
    for _ in range(k):
        raw = rng.uniform(-1.0, 1.0, size=(m, m))
        psis.append(0.5 * (raw + raw.T))
    coeffs = rng.uniform(-1.0, 1.0, size=k)
    return psis, coeffs


def sum_psi_generators(
    psis: list[np.ndarray], coeffs: np.ndarray, g: InnerProduct
) -> CurvatureTensor:
    """Weighted sum of self-adjoint generators; exact ACT by construction."""
    if len(psis) != len(coeffs):
        raise ValueError("generator and coefficient counts differ")
    total = np.zeros((g.dim,) * 4)
    for psi, c in zip(psis, coeffs):
        total = total + float(c) * a_psi(psi, g).components
    return CurvatureTensor(total, g)


def random_act(seed: int, m: int, k: int | None = None) -> CurvatureTensor:
    """Random algebraic curvature tensor, deterministic in the seed.

    Sums k generator tensors with random coefficients in the Euclidean
    frame; k defaults to m.  Generic draws land far from any Osserman
    eigenstructure, which makes them useful negative controls.
    """
    if k is None:
        k = m
    psis, coeffs = draw_act_generators(seed, m, k)
    return sum_psi_generators(psis, coeffs, InnerProduct.euclidean(m))


def complex_space_form_act(
    lambda0: float,
    lambda1: float,
    phi: HermitianStructure,
    g: InnerProduct | None = None,
) -> CurvatureTensor:
    """Curvature tensor lambda0 R0 + lambda1 A_Phi of a complex space form.

    lambda1 = 0 is allowed but degenerates to a real space form; a
    warning flags that case since the complex structure then carries no
    information.
    """
    if g is None:
        g = InnerProduct.euclidean(phi.dim)
    if g.dim % 2 != 0:
        raise ValueError("complex space forms need even dimension")
    phi.validate(g)
    if lambda1 == 0.0:
        warnings.warn("degenerate: space form (lambda1 = 0)", stacklevel=2)
        return CurvatureTensor(lambda0 * r0(g).components, g)
    comps = lambda0 * r0(g).components + lambda1 * a_phi(phi, g).components
    return CurvatureTensor(comps, g)
