"""Dense complex linear-algebra kernels.

Matrices are plain :class:`numpy.ndarray` objects. Composite indices of a
bipartite space are A-major: the pair ``(a, b)`` maps to ``a * dB + b``,
which is the layout produced by :func:`numpy.kron`.
"""

import numpy as np

from sepkit.errors import ConvergenceError, DimensionError, NotHermitianError

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9


def kron(a, b):
    """Kronecker product ``a ⊗ b``."""
    return np.kron(np.asarray(a), np.asarray(b))


def dagger(a):
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def hs_inner(a, b):
    """Hilbert-Schmidt inner product ``Tr(a† b)``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def singular_values(a):
    """All ``min(rows, cols)`` singular values, sorted nonincreasing.

    Nothing is truncated; tiny values are returned as computed.
    """
    try:
        return np.linalg.svd(np.asarray(a), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc


def trace_norm(a):
    """Sum of singular values (Ky Fan / nuclear norm)."""
    return float(np.sum(singular_values(a)))


def hermiticity_defect(a):
    """Largest entrywise ``|A - A†|``."""
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def hermitian_eigenvalues(a, tol=HERMITIAN_TOL):
    """Real spectrum of a Hermitian matrix, ascending."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max |A - A†| = {defect:.3e})")
    try:
        return np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver did not converge: {exc}") from exc


def _as_bipartite(rho, d_a, d_b):
    rho = np.asarray(rho)
    n = d_a * d_b
    if rho.shape != (n, n):
        raise DimensionError(f"expected a {n}x{n} matrix for dims ({d_a}, {d_b}), got {rho.shape}")
    return rho.reshape(d_a, d_b, d_a, d_b)


def partial_transpose(rho, d_a, d_b):
    """Transpose on subsystem B: ``(ρ^τ)_{(i,j),(k,l)} = ρ_{(i,l),(k,j)}``."""
    r4 = _as_bipartite(rho, d_a, d_b)
    return r4.transpose(0, 3, 2, 1).reshape(d_a * d_b, d_a * d_b)


def realign(rho, d_a, d_b):
    """Realigned matrix of shape ``(dA², dB²)``.

    Row ``(i, k)`` pairs two A indices, column ``(j, l)`` two B indices, and
    the entry is ``ρ_{(i,j),(k,l)}``.
    """
    r4 = _as_bipartite(rho, d_a, d_b)
    return r4.transpose(0, 2, 1, 3).reshape(d_a * d_a, d_b * d_b)


def partial_trace(rho, d_a, d_b, keep="A"):
    """Reduced state on subsystem ``keep`` (``"A"`` or ``"B"``)."""
    r4 = _as_bipartite(rho, d_a, d_b)
    if keep == "A":
        return np.einsum("ijkj->ik", r4)
    if keep == "B":
        return np.einsum("ijil->jl", r4)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
