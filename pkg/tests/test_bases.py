import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepkit.bases import (
    OperatorBasis,
    basis_by_name,
    conjugate_basis,
    gell_mann_basis,
    heisenberg_weyl_basis,
    rescale_basis,
    validate_basis,
    weyl_operator,
)
from sepkit.states import random_unitary

PAULI = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def _gram(basis):
    flat = basis.ops.reshape(len(basis.ops), -1)
    return flat.conj() @ flat.T


def test_gell_mann_qubit_is_pauli():
    b = gell_mann_basis(2)
    np.testing.assert_allclose(b.ops[0], np.eye(2), atol=1e-15)
    for got, want in zip(b.traceless, PAULI):
        np.testing.assert_allclose(got, want, atol=1e-15)


def test_gell_mann_qutrit_literal_matrices():
    b = gell_mann_basis(3)
    assert b.ops.shape == (9, 3, 3)
    lam1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    lam5 = np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]])
    lam8 = np.diag([1, 1, -2]) / np.sqrt(3)
    np.testing.assert_allclose(b.ops[1], lam1, atol=1e-15)
    np.testing.assert_allclose(b.ops[5], lam5, atol=1e-15)
    np.testing.assert_allclose(b.ops[8], lam8, atol=1e-15)
    np.testing.assert_allclose(b.ops[0], np.sqrt(2 / 3) * np.eye(3), atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_gell_mann_properties(d):
    b = gell_mann_basis(d)
    assert b.kappa == 2.0
    assert b.hermitian
    np.testing.assert_allclose(_gram(b), 2 * np.eye(d * d), atol=1e-12)
    np.testing.assert_allclose(np.einsum("ikk->i", b.traceless), 0, atol=1e-15)
    assert validate_basis(b) == []


def test_weyl_operator_qubit():
    np.testing.assert_allclose(weyl_operator(2, 0, 1), PAULI[0], atol=1e-15)
    np.testing.assert_allclose(weyl_operator(2, 1, 0), PAULI[2], atol=1e-15)
    # W(1,1) = Z X = i Y
    np.testing.assert_allclose(weyl_operator(2, 1, 1), 1j * PAULI[1], atol=1e-15)


def test_weyl_operator_qutrit_entries():
    w = np.exp(2j * np.pi / 3)
    np.testing.assert_allclose(weyl_operator(3, 1, 1), [[0, 1, 0], [0, 0, w], [w**2, 0, 0]], atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_heisenberg_weyl_properties(d):
    b = heisenberg_weyl_basis(d)
    assert b.kappa == d
    assert not b.hermitian
    np.testing.assert_allclose(_gram(b), d * np.eye(d * d), atol=1e-12)
    for g in b.ops:
        np.testing.assert_allclose(g @ g.conj().T, np.eye(d), atol=1e-12)
    assert validate_basis(b) == []


def test_heisenberg_weyl_is_not_orthogonal_without_dagger():
    ops = heisenberg_weyl_basis(3).ops
    flat = ops.reshape(9, -1)
    undaggered = flat @ flat.T
    assert np.max(np.abs(undaggered - 3 * np.eye(9))) > 1


@pytest.mark.parametrize("builder", [gell_mann_basis, heisenberg_weyl_basis])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_completeness(builder, d):
    b = builder(d)
    # Σ_i (G_i)_{ab} conj(G_i)_{ce} = κ δ_ac δ_be
    s = np.einsum("iab,ice->abce", b.ops, b.ops.conj())
    ident = np.einsum("ac,be->abce", np.eye(d), np.eye(d))
    np.testing.assert_allclose(s, b.kappa * ident, atol=1e-12)


def test_rescale_basis():
    b = rescale_basis(gell_mann_basis(3), 1.0)
    assert b.kappa == 1.0
    np.testing.assert_allclose(_gram(b), np.eye(9), atol=1e-12)
    np.testing.assert_allclose(b.ops[0], np.eye(3) / np.sqrt(3), atol=1e-15)
    assert validate_basis(b) == []
    with pytest.raises(ValueError):
        rescale_basis(b, 0)


def test_conjugate_basis_stays_valid():
    u = random_unitary(3, seed=9)
    b = conjugate_basis(gell_mann_basis(3), u)
    assert validate_basis(b) == []
    np.testing.assert_allclose(b.ops[2], u @ gell_mann_basis(3).ops[2] @ u.conj().T, atol=1e-14)


def test_validate_reports_scaled_operator():
    ops = gell_mann_basis(3).ops.copy()
    ops[4] *= 1.1
    bad = OperatorBasis(3, 2.0, ops, True, "gm")
    kinds = {(v.kind, v.indices) for v in validate_basis(bad)}
    assert ("orthogonality", (4, 4)) in kinds
    mag = [v.magnitude for v in validate_basis(bad) if v.indices == (4, 4)][0]
    assert mag == pytest.approx(2 * (1.21 - 1), rel=1e-10)


def test_validate_reports_trace_identity_and_hermiticity():
    ops = gell_mann_basis(2).ops.copy()
    ops[3] = ops[3] + 0.1 * np.eye(2)
    ops[0] = 2 * ops[0]
    ops[1] = ops[1] * 1j
    kinds = {v.kind for v in validate_basis(OperatorBasis(2, 2.0, ops, True))}
    assert {"trace", "identity_element", "hermiticity", "orthogonality"} <= kinds


def test_hw_marked_hermitian_is_flagged():
    b = heisenberg_weyl_basis(3)
    fake = OperatorBasis(3, b.kappa, b.ops, True, "hw")
    assert any(v.kind == "hermiticity" for v in validate_basis(fake))


def test_basis_constructor_checks():
    with pytest.raises(ValueError):
        OperatorBasis(2, 2.0, np.zeros((3, 2, 2)), True)
    with pytest.raises(ValueError):
        OperatorBasis(2, -1.0, np.zeros((4, 2, 2)), True)
    with pytest.raises(ValueError):
        gell_mann_basis(1)
    with pytest.raises(ValueError):
        heisenberg_weyl_basis(1)


def test_ops_are_read_only():
    b = gell_mann_basis(2)
    with pytest.raises(ValueError):
        b.ops[0, 0, 0] = 5


def test_basis_by_name():
    assert basis_by_name("hw", 3).kappa == 3
    assert basis_by_name("gm", 3, kappa=3).kappa == 3
    assert basis_by_name("gm", 4).descriptor == "gm(d=4,kappa=2)"
    with pytest.raises(ValueError):
        basis_by_name("pauli", 2)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.floats(0.1, 10.0), st.integers(0, 2**32 - 1))
def test_rescaled_rotated_bases_are_valid(d, kappa, seed):
    b = conjugate_basis(rescale_basis(gell_mann_basis(d), kappa), random_unitary(d, seed=seed))
    assert validate_basis(b, tol=1e-9) == []
