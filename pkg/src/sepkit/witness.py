"""Entanglement witnesses from the trace-norm duality.

``||M||_tr = max_O Re Tr(O† M)`` over isometries ``O`` of the same shape as
``M``. For a fixed ``O`` the map ``ρ ↦ bound - Re Tr(O† M(ρ))`` is affine in
``ρ`` and nonnegative on separable states, so it equals ``Tr(W_O ρ)`` for a
Hermitian ``W_O = Σ w_ij G_i^A ⊗ G_j^B``.

The coefficients are obtained by writing every entry of ``M`` as a multiple
of the full coefficient ``C_ij = Tr((G_i⊗G_j) ρ)``. Padded blocks contribute
through ``C_00``, ``C_0j`` and ``C_i0``; with ``K`` collecting those weights
against ``Re O``, ``w = -K`` except ``w_00``, which also carries the bound.
"""

from dataclasses import dataclass

import numpy as np

from sepkit.bloch import Convention
from sepkit.criteria import TensorParams, separable_bound
from sepkit.errors import ConvergenceError, DimensionError, NotHermitianError
from sepkit.linalg import HERMITIAN_TOL, hermiticity_defect

ISOMETRY_TOL = 1e-10
EXPECTATION_IMAG_TOL = 1e-9
REAL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Isometry:
    """Matrix with orthonormal columns (tall) or orthonormal rows (wide)."""

    o: np.ndarray

    def __post_init__(self):
        o = np.array(self.o)
        if o.ndim != 2:
            raise DimensionError(f"isometry must be a matrix, got shape {o.shape}")
        rows, cols = o.shape
        gram = o.conj().T @ o if rows >= cols else o @ o.conj().T
        err = float(np.max(np.abs(gram - np.eye(min(rows, cols)))))
        if err > ISOMETRY_TOL:
            raise ValueError(f"matrix is not an isometry (max |O†O - I| = {err:.3e})")
        o.setflags(write=False)
        object.__setattr__(self, "o", o)

    @property
    def shape(self):
        return self.o.shape

    def __neg__(self):
        return Isometry(-self.o)


def optimal_isometry(m):
    """``O = U V†`` from the thin SVD ``m = U Σ V†``; attains ``Re Tr(O† m) = ||m||_tr``.

    Real input gives a real ``O``. ``-O`` attains the minimum.
    """
    m = np.asarray(m)
    try:
        u, _, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    return Isometry(u @ vh)


def duality_value(o, m):
    """``Re Tr(O† m)``."""
    o = o.o if isinstance(o, Isometry) else np.asarray(o)
    return float(np.vdot(o, m).real)


def random_isometry(rows, cols, rng, real=False):
    """Isometry from the QR factor of a Gaussian matrix."""
    k = max(rows, cols)
    g = rng.standard_normal((k, min(rows, cols)))
    if not real:
        g = g + 1j * rng.standard_normal(g.shape)
    q, _ = np.linalg.qr(g)
    return Isometry(q if rows >= cols else q.conj().T)


def _block_weights(d_a, d_b, kappa_a, kappa_b, convention):
    """Factors turning ``C`` blocks into ``M`` blocks: top-left, top row, left column, core."""
    ka, kb = kappa_a, kappa_b
    if convention is Convention.PLAIN:
        w = 1 / (ka * kb)
        return w, w, w, w
    return (
        np.sqrt(d_a * d_b / (ka * kb)),
        d_b * np.sqrt(d_a / ka) / kb,
        d_a * np.sqrt(d_b / kb) / ka,
        d_a * d_b / (ka * kb),
    )


@dataclass(frozen=True, eq=False)
class Witness:
    coeffs: np.ndarray
    basis_a: object
    basis_b: object
    params: TensorParams
    operator: np.ndarray
    bound: float

    def to_dict(self):
        return {
            "basisA": self.basis_a.descriptor,
            "basisB": self.basis_b.descriptor,
            "kappaA": self.basis_a.kappa,
            "kappaB": self.basis_b.kappa,
            "x": self.params.x,
            "y": self.params.y,
            "n": self.params.n,
            "convention": self.params.convention.value,
            "bound": self.bound,
            "coeffs": {"re": self.coeffs.real.tolist(), "im": self.coeffs.imag.tolist()},
            "operator": {"re": self.operator.real.tolist(), "im": self.operator.imag.tolist()},
        }

    def to_text(self):
        """Operator matrix, one row per line, ``re+imj`` tokens."""
        return "\n".join(" ".join(f"{z.real:.15g}{z.imag:+.15g}j" for z in row) for row in self.operator) + "\n"


def build_witness(o, basis_a, basis_b, params):
    """Witness ``W_O`` with ``Tr(W_O ρ) = bound - Re Tr(O† M(ρ))`` for every state ``ρ``.

    ``o`` is normally an :class:`Isometry`; any matrix of the tensor's shape
    is accepted, since the identity above holds regardless (only isometries
    yield genuine witnesses).
    """
    for label, basis in (("A", basis_a), ("B", basis_b)):
        if not basis.hermitian:
            raise NotHermitianError(
                f"witness construction needs a Hermitian basis on subsystem {label}; "
                f"{basis.descriptor} is not. Use the Gell-Mann basis rescaled to kappa={basis.kappa:g} instead."
            )
    o = o.o if isinstance(o, Isometry) else np.asarray(o)
    d_a, d_b = basis_a.dim, basis_b.dim
    ka, kb = basis_a.kappa, basis_b.kappa
    x, y, n = params.x, params.y, params.n
    shape = (d_a * d_a + n - 1, d_b * d_b + n - 1)
    if o.shape != shape:
        raise DimensionError(f"isometry shape {o.shape} does not match tensor shape {shape}")
    oc = np.real(o)
    w00, w0j, wi0, wij = _block_weights(d_a, d_b, ka, kb, params.convention)
    k = np.zeros((d_a * d_a, d_b * d_b))
    k[0, 0] = w00 * x * y * oc[:n, :n].sum()
    k[0, 1:] = w0j * x * oc[:n, n:].sum(axis=0)
    k[1:, 0] = wi0 * y * oc[n:, :n].sum(axis=1)
    k[1:, 1:] = wij * oc[n:, n:]
    bound = separable_bound(d_a, d_b, ka, kb, params)
    coeffs = -k.astype(complex)
    # I_A ⊗ I_B = sqrt(dA dB / (κA κB)) G_0 ⊗ G_0
    coeffs[0, 0] += bound * np.sqrt(d_a * d_b / (ka * kb))
    operator = np.einsum("ij,iac,jbe->abce", coeffs, basis_a.ops, basis_b.ops).reshape(d_a * d_b, d_a * d_b)
    defect = hermiticity_defect(operator)
    if defect > HERMITIAN_TOL:
        raise NotHermitianError(f"assembled witness is not Hermitian (max |W - W†| = {defect:.3e})")
    return Witness(coeffs, basis_a, basis_b, params, operator, bound)


def expectation(w, rho):
    """``Re Tr(W ρ)``; a non-negligible imaginary part is an error."""
    if rho.mat.shape != w.operator.shape:
        raise DimensionError(f"state shape {rho.mat.shape} does not match witness shape {w.operator.shape}")
    val = np.sum(w.operator * rho.mat.T)
    if abs(val.imag) > EXPECTATION_IMAG_TOL:
        raise ValueError(f"witness expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def optimal_witness(criterion, rho):
    """Witness from the isometry that is optimal for ``criterion`` at ``rho``."""
    m = criterion.tensor(rho).m
    # Hermitian bases give a real tensor up to rounding; keep O real.
    if np.max(np.abs(m.imag), initial=0.0) <= REAL_TOL * max(1.0, np.max(np.abs(m))):
        m = m.real
    return build_witness(optimal_isometry(m), criterion.basis_a, criterion.basis_b, criterion.params)

