"""Traceless orthogonal operator bases ``{G_i}`` with ``Tr(G_i† G_j) = κ δ_ij``.

Every basis stores ``d²`` operators with ``G_0 = sqrt(κ/d) I`` first; the
remaining ``d² - 1`` operators are traceless.
"""

from dataclasses import dataclass

import numpy as np

ORTHOGONALITY_TOL = 1e-10
STRUCTURE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """An orthogonal operator basis on a ``dim``-dimensional space.

    ``ops`` has shape ``(dim², dim, dim)``. ``name`` is a short descriptor
    used in reports (``"gm"``, ``"hw"``, ``"custom"``).
    """

    dim: int
    kappa: float
    ops: np.ndarray
    hermitian: bool
    name: str = "custom"

    def __post_init__(self):
        ops = np.array(self.ops, dtype=complex)
        if ops.shape != (self.dim**2, self.dim, self.dim):
            raise ValueError(f"expected ops of shape {(self.dim**2, self.dim, self.dim)}, got {ops.shape}")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        ops.setflags(write=False)
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "kappa", float(self.kappa))

    @property
    def traceless(self):
        """The ``d² - 1`` operators ``G_1 .. G_{d²-1}``."""
        return self.ops[1:]

    @property
    def descriptor(self):
        return f"{self.name}(d={self.dim},kappa={self.kappa:g})"


def gell_mann_basis(d):
    """Generalized Gell-Mann matrices, ``κ = 2``.

    Order after ``G_0 = sqrt(2/d) I``: the symmetric matrices
    ``|j><k| + |k><j|``, then the antisymmetric ``-i|j><k| + i|k><j|``
    (both over ``j < k`` lexicographically), then the ``d - 1`` diagonal ones.
    """
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    ops = [np.sqrt(2.0 / d) * np.eye(d, dtype=complex)]
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1.0
        ops.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        ops.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        ops.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag).astype(complex))
    return OperatorBasis(dim=d, kappa=2.0, ops=np.array(ops), hermitian=True, name="gm")


def weyl_operator(d, l, m):
    """``W(l, m) = Σ_k exp(2πi k l / d) |k><(k + m) mod d|``."""
    w = np.zeros((d, d), dtype=complex)
    k = np.arange(d)
    w[k, (k + m) % d] = np.exp(2j * np.pi * k * l / d)
    return w


def heisenberg_weyl_basis(d):
    """Heisenberg-Weyl operators ``W(l, m)``, row-major in ``(l, m)``; ``κ = d``.

    ``W(0, 0) = I`` comes first and equals ``sqrt(κ/d) I``. The operators are
    unitary but not Hermitian.
    """
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    ops = np.array([weyl_operator(d, l, m) for l in range(d) for m in range(d)])
    return OperatorBasis(dim=d, kappa=float(d), ops=ops, hermitian=False, name="hw")


def rescale_basis(basis, kappa_new):
    """Multiply every operator by ``sqrt(kappa_new / κ)``."""
    if not kappa_new > 0:
        raise ValueError(f"kappa must be positive, got {kappa_new}")
    factor = np.sqrt(kappa_new / basis.kappa)
    return OperatorBasis(
        dim=basis.dim,
        kappa=kappa_new,
        ops=basis.ops * factor,
        hermitian=basis.hermitian,
        name=basis.name,
    )


def conjugate_basis(basis, unitary):
    """Rotated basis ``U G_i U†``; orthogonality and ``G_0`` are preserved."""
    u = np.asarray(unitary)
    ops = np.einsum("ab,ibc,dc->iad", u, basis.ops, u.conj())
    return OperatorBasis(dim=basis.dim, kappa=basis.kappa, ops=ops, hermitian=basis.hermitian, name=basis.name)


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple
    magnitude: float

    def __str__(self):
        return f"{self.kind} at {self.indices}: {self.magnitude:.3e}"


def validate_basis(basis, tol=ORTHOGONALITY_TOL, structure_tol=STRUCTURE_TOL):
    """Every violated basis assumption, with its magnitude. Empty means valid.

    Checks the Gram matrix ``Tr(G_i† G_j)`` against ``κ δ_ij``, tracelessness
    of ``G_1 ..``, the form of ``G_0``, and the Hermitian flag.
    """
    d, kappa, ops = basis.dim, basis.kappa, basis.ops
    found = []
    flat = ops.reshape(len(ops), -1)
    gram = flat.conj() @ flat.T
    deviation = np.abs(gram - kappa * np.eye(len(ops)))
    for i, j in zip(*np.nonzero(deviation > tol)):
        found.append(Violation("orthogonality", (int(i), int(j)), float(deviation[i, j])))
    traces = np.abs(np.einsum("ikk->i", ops[1:]))
    for i in np.nonzero(traces > structure_tol)[0]:
        found.append(Violation("trace", (int(i) + 1,), float(traces[i])))
    g0_err = float(np.max(np.abs(ops[0] - np.sqrt(kappa / d) * np.eye(d))))
    if g0_err > structure_tol:
        found.append(Violation("identity_element", (0,), g0_err))
    if basis.hermitian:
        herm = np.max(np.abs(ops - ops.conj().transpose(0, 2, 1)), axis=(1, 2))
        for i in np.nonzero(herm > structure_tol)[0]:
            found.append(Violation("hermiticity", (int(i),), float(herm[i])))
    return found


def basis_by_name(name, d, kappa=None):
    """Look up ``"gm"`` or ``"hw"``, optionally rescaled to ``kappa``."""
    builders = {"gm": gell_mann_basis, "hw": heisenberg_weyl_basis}
    try:
        basis = builders[name](d)
    except KeyError:
        raise ValueError(f"unknown basis {name!r}; expected one of {sorted(builders)}") from None
    if kappa is not None and kappa != basis.kappa:
        basis = rescale_basis(basis, kappa)
    return basis
