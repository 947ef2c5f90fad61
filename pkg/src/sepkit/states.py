"""Bipartite density matrices, the standard test families, and random ensembles.

Random constructors take either an integer seed or a
:class:`numpy.random.Generator`. Ensembles draw sample ``i`` of a run seeded
with ``seed`` from :func:`sample_rng`, i.e. the PCG64 stream whose
:class:`~numpy.random.SeedSequence` has entropy ``seed`` and spawn key
``(i,)``. Streams are therefore independent of how many samples precede them.
"""

from dataclasses import dataclass

import numpy as np

from sepkit.errors import DimensionError, StateError
from sepkit.linalg import HERMITIAN_TOL, PSD_TOL, hermiticity_defect, partial_trace

TRACE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix on ``C^dA ⊗ C^dB`` (A-major indices).

    A single-system state is represented with ``d_b = 1``.
    """

    d_a: int
    d_b: int
    mat: np.ndarray

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        n = self.d_a * self.d_b
        if self.d_a < 1 or self.d_b < 1:
            raise DimensionError(f"subsystem dimensions must be positive, got ({self.d_a}, {self.d_b})")
        if mat.shape != (n, n):
            raise DimensionError(f"expected a {n}x{n} matrix for dims ({self.d_a}, {self.d_b}), got {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise StateError("matrix has non-finite entries")
        defect = hermiticity_defect(mat)
        if defect > HERMITIAN_TOL:
            raise StateError(f"matrix is not Hermitian (max |A - A†| = {defect:.3e})")
        tr = np.trace(mat)
        if abs(tr - 1) > TRACE_TOL:
            raise StateError(f"trace is {tr.real:.12g}, expected 1")
        low = float(np.linalg.eigvalsh(mat)[0])
        if low < -PSD_TOL:
            raise StateError(f"matrix is not positive semidefinite (min eigenvalue {low:.3e})")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dims(self):
        return (self.d_a, self.d_b)

    def reduced(self, keep="A"):
        """Partial trace, as a single-system state."""
        red = partial_trace(self.mat, self.d_a, self.d_b, keep=keep)
        return DensityMatrix(red.shape[0], 1, red)

    def to_dict(self):
        return {
            "dA": self.d_a,
            "dB": self.d_b,
            "re": self.mat.real.tolist(),
            "im": self.mat.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        try:
            d_a, d_b = int(data["dA"]), int(data["dB"])
            mat = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise StateError(f"malformed state record: {exc}") from exc
        return cls(d_a, d_b, mat)


def _ket(d, *entries):
    v = np.zeros(d, dtype=complex)
    for index, amp in entries:
        v[index] = amp
    return v


def maximally_entangled(d):
    """``|ψ+><ψ+|`` with ``|ψ+> = Σ_i |ii> / sqrt(d)``."""
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * d + np.arange(d)] = 1 / np.sqrt(d)
    return DensityMatrix(d, d, np.outer(psi, psi.conj()))


def isotropic(d, p, allow_out_of_range=False):
    """``(1 - p) I / d² + p |ψ+><ψ+|``, separable iff ``p <= 1/(d+1)``.

    ``p`` outside ``[0, 1]`` is rejected unless ``allow_out_of_range`` is set,
    in which case the PSD check of :class:`DensityMatrix` still applies.
    """
    if not allow_out_of_range and not 0 <= p <= 1:
        raise ValueError(f"isotropic weight p must lie in [0, 1], got {p}")
    n = d * d
    mat = (1 - p) / n * np.eye(n) + p * maximally_entangled(d).mat
    return DensityMatrix(d, d, mat)


def flip_operator(d):
    """Swap ``F`` with ``F_{(i,j),(k,l)} = δ_il δ_jk``."""
    f = np.zeros((d, d, d, d))
    i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    f[i, j, j, i] = 1.0
    return f.reshape(d * d, d * d)


def werner(d, p):
    """``[(d - p) I + (dp - 1) F] / (d³ - d)`` for ``p`` in ``[-1, 1]``; ``p = Tr(ρF)``."""
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    if not -1 <= p <= 1:
        raise ValueError(f"Werner parameter p must lie in [-1, 1], got {p}")
    mat = ((d - p) * np.eye(d * d) + (d * p - 1) * flip_operator(d)) / (d**3 - d)
    return DensityMatrix(d, d, mat)


def tiles_vectors():
    """The five product vectors of the 3x3 tiles construction, as printed (normalized)."""
    e = np.eye(3)
    s2 = np.sqrt(2)
    return [
        np.kron(e[0], (e[0] - e[1]) / s2),
        np.kron((e[0] - e[1]) / s2, e[2]),
        np.kron(e[2], (e[1] - e[2]) / s2),
        np.kron((e[1] - e[2]) / s2, e[0]),
        np.kron(e[0] + e[1] + e[2], e[0] + e[1] + e[2]) / 3,
    ]


def tiles_state():
    """PPT entangled 3x3 state ``(I - Σ_i |ψ_i><ψ_i|) / 4``."""
    proj = sum(np.outer(v, v.conj()) for v in tiles_vectors())
    return DensityMatrix(3, 3, (np.eye(9) - proj) / 4)


def mix_with_white_noise(rho, p):
    """``(1 - p) I / (dA dB) + p ρ``."""
    if not 0 <= p <= 1:
        raise ValueError(f"mixing weight p must lie in [0, 1], got {p}")
    n = rho.d_a * rho.d_b
    return DensityMatrix(rho.d_a, rho.d_b, (1 - p) / n * np.eye(n) + p * rho.mat)


def tiles_family(p):
    """The noisy tiles state ``σ_p``."""
    return mix_with_white_noise(tiles_state(), p)


def sample_rng(seed, index):
    """Generator for sample ``index`` of the ensemble seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(index,))))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed)))


def _gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_density(d_a, d_b=1, seed=0):
    """Ginibre-ensemble state ``G G† / Tr(G G†)`` on ``C^dA ⊗ C^dB``."""
    rng = _rng(seed)
    n = d_a * d_b
    g = _gaussian(rng, (n, n))
    w = g @ g.conj().T
    w = (w + w.conj().T) / 2
    return DensityMatrix(d_a, d_b, w / np.trace(w).real)


def random_pure(d, seed=0):
    """Normalized complex Gaussian vector."""
    v = _gaussian(_rng(seed), d)
    return v / np.linalg.norm(v)


def random_pure_product(d_a, d_b, seed=0):
    """``|φ><φ| ⊗ |ψ><ψ|`` with Gaussian-random factors."""
    rng = _rng(seed)
    v = np.kron(random_pure(d_a, rng), random_pure(d_b, rng))
    return DensityMatrix(d_a, d_b, np.outer(v, v.conj()))


def random_separable(d_a, d_b, k, seed=0):
    """Convex mixture of ``k`` pure product states with Dirichlet(1, ..., 1) weights."""
    if k < 1:
        raise ValueError(f"need at least one product term, got k={k}")
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(k))
    mat = np.zeros((d_a * d_b, d_a * d_b), dtype=complex)
    for w in weights:
        v = np.kron(random_pure(d_a, rng), random_pure(d_b, rng))
        mat += w * np.outer(v, v.conj())
    return DensityMatrix(d_a, d_b, mat)


def random_unitary(d, seed=0):
    """Haar unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(_gaussian(_rng(seed), (d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))
