"""Covariance kernels, Gram-matrix assembly, and spectral diagnostics.

Three kernel families are supported:

* ``linear``   k(x, x') = x^T diag(cov) x'
* ``rbf``      k(x, x') = amplitude^2 * exp(-||x - x'||^2 / (2 * lengthscale^2))
* ``ard_rbf``  isotropic RBF with one positive lengthscale per input dimension

Gram matrices are assembled symmetrically (one triangle computed, then
mirrored) so G == G.T holds exactly, not merely to rounding.  Spectral
summaries report the extreme eigenvalues, condition number, kernel row sums,
and the admissible-step-size bound of the associated ridged linear system,
optionally after row-sum (Jacobi) normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericError

#: eigenvalues below -PSD_RTOL * lambda_max fail the PSD check outright
PSD_RTOL = 1e-8


@dataclass(frozen=True)
class KernelSpec:
    """Immutable description of a covariance kernel.

    Parameters
    ----------
    kind : {"linear", "rbf", "ard_rbf"}
    amplitude : float
        Signal scale of the RBF families; k(x, x) = amplitude**2.
    lengthscale : float or ndarray
        Scalar for ``rbf``; a positive vector (one entry per input
        dimension) for ``ard_rbf``.
    linear_covariance : ndarray, optional
        Positive diagonal of the linear kernel's covariance, length d.
    """

    kind: str
    amplitude: float = 1.0
    lengthscale: object = 1.0
    linear_covariance: object = None

    def __post_init__(self):
        if self.kind not in ("linear", "rbf", "ard_rbf"):
            raise InvalidInputError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "linear":
            cov = np.atleast_1d(np.asarray(self.linear_covariance, dtype=float))
            if cov.ndim != 1 or not np.all(np.isfinite(cov)) or np.any(cov <= 0):
                raise InvalidInputError("linear kernel needs a positive diagonal covariance")
            object.__setattr__(self, "linear_covariance", cov)
            return
        if not (np.isfinite(self.amplitude) and self.amplitude > 0):
            raise InvalidInputError("amplitude must be positive")
        if self.kind == "rbf":
            ls = float(self.lengthscale)
            if not (np.isfinite(ls) and ls > 0):
                raise InvalidInputError("lengthscale must be positive")
            object.__setattr__(self, "lengthscale", ls)
        else:
            ls = np.atleast_1d(np.asarray(self.lengthscale, dtype=float))
            if ls.ndim != 1 or not np.all(np.isfinite(ls)) or np.any(ls <= 0):
                raise InvalidInputError("ard_rbf needs positive per-dimension lengthscales")
            object.__setattr__(self, "lengthscale", ls)

    # -- convenience constructors -------------------------------------------------
    @staticmethod
    def linear(cov_diag) -> "KernelSpec":
        return KernelSpec(kind="linear", linear_covariance=cov_diag)

    @staticmethod
    def rbf(amplitude: float = 1.0, lengthscale: float = 1.0) -> "KernelSpec":
        return KernelSpec(kind="rbf", amplitude=amplitude, lengthscale=lengthscale)

    @staticmethod
    def ard_rbf(amplitude: float, lengthscales) -> "KernelSpec":
        return KernelSpec(kind="ard_rbf", amplitude=amplitude, lengthscale=lengthscales)

    @property
    def strictly_positive(self) -> bool:
        """True when k(x, x') > 0 for all inputs (the RBF families)."""
        return self.kind in ("rbf", "ard_rbf")

    def diag_value(self, x: np.ndarray) -> float:
        """k(x, x) for a single point."""
        x = np.asarray(x, dtype=float)
        if self.kind == "linear":
            return float(np.dot(x * self.linear_covariance, x))
        return float(self.amplitude) ** 2


def _check_features(X: np.ndarray, d_expected: int | None = None) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] < 1:
        raise InvalidInputError("feature matrix must be (n, d) with n >= 1")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("feature matrix contains non-finite entries")
    if d_expected is not None and X.shape[1] != d_expected:
        raise InvalidInputError(f"expected {d_expected} feature columns, got {X.shape[1]}")
    return X


def _scaled(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    """Rescale columns so the RBF families reduce to the unit-lengthscale form."""
    if spec.kind == "rbf":
        return X / spec.lengthscale
    return X / np.asarray(spec.lengthscale)[None, :]


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric matrix of pairwise kernel values over a point set."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise InvalidInputError("Gram matrix must be square")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("Gram matrix contains non-finite entries")
        if not np.array_equal(v, v.T):
            raise InvalidInputError("Gram matrix must be exactly symmetric")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def row_sums(self) -> np.ndarray:
        return self.values.sum(axis=1)


def _mirror_upper(G: np.ndarray, diag: np.ndarray) -> np.ndarray:
    """Copy the strict upper triangle onto the lower one and set the diagonal."""
    upper = np.triu(G, 1)
    out = upper + upper.T
    np.fill_diagonal(out, diag)
    return out


def gram(spec: KernelSpec, X: np.ndarray) -> GramMatrix:
    """Pairwise kernel matrix of the rows of ``X``.

    The result is exactly symmetric and its diagonal equals k(x, x) for the
    requested kernel kind.
    """
    X = _check_features(X)
    n = X.shape[0]
    if spec.kind == "linear":
        cov = spec.linear_covariance
        if X.shape[1] != cov.shape[0]:
            raise InvalidInputError("feature dimension does not match linear covariance")
        G = (X * cov[None, :]) @ X.T
        diag = np.einsum("ij,j,ij->i", X, cov, X)
        return GramMatrix(_mirror_upper(G, diag))
    Xs = _scaled(spec, X)
    sq = np.einsum("ij,ij->i", Xs, Xs)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (Xs @ Xs.T)
    np.maximum(d2, 0.0, out=d2)
    amp2 = float(spec.amplitude) ** 2
    G = amp2 * np.exp(-0.5 * d2)
    diag = np.full(n, amp2)
    return GramMatrix(_mirror_upper(G, diag))


def cross_vector(spec: KernelSpec, X: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Vector of k(x_i, x) for each row x_i of ``X`` against a single query."""
    X = _check_features(X)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != X.shape[1]:
        raise InvalidInputError(f"query has {x.shape[0]} entries, features have {X.shape[1]}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("query contains non-finite entries")
    if spec.kind == "linear":
        if X.shape[1] != spec.linear_covariance.shape[0]:
            raise InvalidInputError("feature dimension does not match linear covariance")
        return (X * spec.linear_covariance[None, :]) @ x
    Xs = _scaled(spec, X)
    xs = _scaled(spec, x[None, :])[0]
    d2 = np.einsum("ij,ij->i", Xs, Xs) + xs @ xs - 2.0 * (Xs @ xs)
    np.maximum(d2, 0.0, out=d2)
    return float(spec.amplitude) ** 2 * np.exp(-0.5 * d2)


@dataclass(frozen=True)
class SpectralSummary:
    """Extreme eigenvalues and solver diagnostics of a (ridged) Gram system.

    In the plain mode, ``lam_max``/``lam_min`` are the extreme eigenvalues of
    G itself, ``cond`` is (lam_max + noise)/(lam_min + noise), and
    ``step_bound`` is 2/(lam_max + noise).  In the normalized mode the
    eigenvalues are those of D^{-1}(G + noise*I) with D = diag(row sums), the
    ridge is folded in, ``cond`` = lam_max/lam_min and ``step_bound`` =
    2/lam_max.
    """

    lam_max: float
    lam_min: float
    cond: float
    row_sums: np.ndarray
    step_bound: float
    noise_var: float
    preconditioned: bool


def spectral_summary(G: GramMatrix, noise_var: float, preconditioned: bool = False) -> SpectralSummary:
    """Eigenvalue summary of G + noise*I, optionally row-sum normalized.

    The normalized spectrum is computed on D^{-1/2}(G + noise*I)D^{-1/2},
    which is similar to D^{-1}(G + noise*I) and keeps the eigensolver in the
    symmetric regime.
    """
    if not noise_var > 0:
        raise InvalidInputError("noise variance must be positive")
    A = G.values
    n = G.n
    s = G.row_sums()
    if preconditioned:
        if np.any(A <= 0):
            raise InvalidInputError("normalized spectra require a strictly positive kernel")
        dinv = 1.0 / np.sqrt(s)
        B = dinv[:, None] * (A + noise_var * np.eye(n)) * dinv[None, :]
        try:
            eigs = np.linalg.eigvalsh(B)
        except np.linalg.LinAlgError as exc:
            raise NumericError(
                f"eigensolver failed on normalized system (n={n}, "
                f"row sums in [{s.min():.3e}, {s.max():.3e}])"
            ) from exc
        lam_min, lam_max = float(eigs[0]), float(eigs[-1])
        return SpectralSummary(
            lam_max=lam_max,
            lam_min=lam_min,
            cond=lam_max / lam_min,
            row_sums=s,
            step_bound=2.0 / lam_max,
            noise_var=float(noise_var),
            preconditioned=True,
        )
    try:
        eigs = np.linalg.eigvalsh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"eigensolver failed (n={n}, max |entry| {np.abs(A).max():.3e})"
        ) from exc
    lam_min, lam_max = float(eigs[0]), float(eigs[-1])
    if lam_min < -PSD_RTOL * max(lam_max, 0.0):
        raise NumericError(
            f"Gram matrix is not PSD: lam_min={lam_min:.3e} vs lam_max={lam_max:.3e}"
        )
    return SpectralSummary(
        lam_max=lam_max,
        lam_min=lam_min,
        cond=(lam_max + noise_var) / (lam_min + noise_var),
        row_sums=s,
        step_bound=2.0 / (lam_max + noise_var),
        noise_var=float(noise_var),
        preconditioned=False,
    )
