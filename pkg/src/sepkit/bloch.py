"""Bloch coefficients ``(r, s, T)`` of bipartite states.

Two conventions are supported:

``PLAIN``
    ``ρ = I/(dA dB) + Σ r_i G_i⊗I/dB + Σ s_j I⊗G_j/dA + Σ t_ij G_i⊗G_j``
``HATTED``
    ``ρ = (I + Σ r̂_i G_i⊗I + Σ ŝ_j I⊗G_j + Σ t̂_ij G_i⊗G_j) / (dA dB)``

so that ``r̂ = dA r``, ``ŝ = dB s`` and ``T̂ = dA dB T``. Coefficients are
extracted with the daggered inner product and normalized by ``κ``:
``t_ij = Tr((G_i⊗G_j)† ρ) / (κA κB)``, which makes decomposition and
reconstruction exact inverses for non-Hermitian bases too.
"""

import enum
from dataclasses import dataclass

import numpy as np

from sepkit.errors import DimensionError, NotHermitianError
from sepkit.linalg import HERMITIAN_TOL, hermiticity_defect
from sepkit.states import DensityMatrix


class Convention(enum.Enum):
    PLAIN = "plain"
    HATTED = "hatted"


def coefficient_matrix(mat, basis_a, basis_b):
    """Full ``dA² x dB²`` matrix ``C_ij = Tr((G_i^A ⊗ G_j^B)† ρ)``."""
    d_a, d_b = basis_a.dim, basis_b.dim
    mat = np.asarray(mat)
    if mat.shape != (d_a * d_b, d_a * d_b):
        raise DimensionError(f"state of shape {mat.shape} does not match bases of dims ({d_a}, {d_b})")
    r4 = mat.reshape(d_a, d_b, d_a, d_b)
    return np.einsum("iac,jbe,abce->ij", basis_a.ops.conj(), basis_b.ops.conj(), r4, optimize=True)


@dataclass(frozen=True, eq=False)
class BlochVector:
    """Single-system Bloch vector, ``ρ = I/d + Σ v_i G_i``."""

    basis: object
    v: np.ndarray

    @property
    def norm_sq(self):
        return float(np.sum(np.abs(self.v) ** 2))

    @property
    def max_norm_sq(self):
        """Pure-state value ``(d - 1) / (κ d)``."""
        d = self.basis.dim
        return (d - 1) / (self.basis.kappa * d)


def bloch_vector(rho, basis):
    """Coefficients ``v_i = Tr(G_i† ρ) / κ`` for ``i = 1 .. d² - 1``."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho)
    if mat.shape != (basis.dim, basis.dim):
        raise DimensionError(f"state of shape {mat.shape} does not match basis dimension {basis.dim}")
    v = np.einsum("iab,ab->i", basis.traceless.conj(), mat) / basis.kappa
    return BlochVector(basis, v)


@dataclass(frozen=True, eq=False)
class BlochDecomposition:
    basis_a: object
    basis_b: object
    convention: Convention
    r: np.ndarray
    s: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        na, nb = self.basis_a.dim**2 - 1, self.basis_b.dim**2 - 1
        r = np.asarray(self.r, dtype=complex)
        s = np.asarray(self.s, dtype=complex)
        t = np.asarray(self.t, dtype=complex)
        if r.shape != (na,) or s.shape != (nb,) or t.shape != (na, nb):
            raise DimensionError(
                f"coefficient shapes {r.shape}, {s.shape}, {t.shape} do not match bases "
                f"(expected ({na},), ({nb},), ({na}, {nb}))"
            )
        for name, arr in (("r", r), ("s", s), ("t", t)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dims(self):
        return (self.basis_a.dim, self.basis_b.dim)

    def to_dict(self):
        def pairs(a):
            return np.stack([a.real, a.imag], axis=-1).tolist()

        return {
            "convention": self.convention.value,
            "basisA": self.basis_a.descriptor,
            "basisB": self.basis_b.descriptor,
            "kappaA": self.basis_a.kappa,
            "kappaB": self.basis_b.kappa,
            "r": pairs(self.r),
            "s": pairs(self.s),
            "T": pairs(self.t),
        }


def _scales(d_a, d_b, convention):
    if convention is Convention.PLAIN:
        return 1.0, 1.0, 1.0
    return float(d_a), float(d_b), float(d_a * d_b)


def decompose(rho, basis_a, basis_b, convention=Convention.PLAIN):
    """Bloch coefficients of ``rho`` in the given bases and convention."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho)
    d_a, d_b = basis_a.dim, basis_b.dim
    if isinstance(rho, DensityMatrix) and rho.dims != (d_a, d_b):
        raise DimensionError(f"state dims {rho.dims} do not match bases ({d_a}, {d_b})")
    ka, kb = basis_a.kappa, basis_b.kappa
    c = coefficient_matrix(mat, basis_a, basis_b)
    r = c[1:, 0] / (ka * np.sqrt(kb / d_b))
    s = c[0, 1:] / (kb * np.sqrt(ka / d_a))
    t = c[1:, 1:] / (ka * kb)
    fr, fs, ft = _scales(d_a, d_b, convention)
    return BlochDecomposition(basis_a, basis_b, convention, fr * r, fs * s, ft * t)


def convert(dec, target):
    """Same state, coefficients rescaled to ``target`` convention."""
    if dec.convention is target:
        return dec
    d_a, d_b = dec.dims
    fr, fs, ft = _scales(d_a, d_b, Convention.HATTED)
    if target is Convention.PLAIN:
        fr, fs, ft = 1 / fr, 1 / fs, 1 / ft
    return BlochDecomposition(dec.basis_a, dec.basis_b, target, fr * dec.r, fs * dec.s, ft * dec.t)


def reconstruct(dec, tol=HERMITIAN_TOL):
    """Assemble the matrix described by ``dec``.

    No positivity check is made; wrap the result in :class:`DensityMatrix`
    when a validated state is needed.
    """
    plain = convert(dec, Convention.PLAIN)
    ga, gb = dec.basis_a.traceless, dec.basis_b.traceless
    d_a, d_b = dec.dims
    ia, ib = np.eye(d_a), np.eye(d_b)
    op_a = np.einsum("i,iab->ab", plain.r, ga)
    op_b = np.einsum("j,jab->ab", plain.s, gb)
    corr = np.einsum("ij,iac,jbe->abce", plain.t, ga, gb).reshape(d_a * d_b, d_a * d_b)
    mat = np.eye(d_a * d_b) / (d_a * d_b) + np.kron(op_a, ib) / d_b + np.kron(ia, op_b) / d_a + corr
    defect = hermiticity_defect(mat)
    if defect > tol:
        raise NotHermitianError(f"assembled matrix is not Hermitian (max |A - A†| = {defect:.3e})")
    return mat
