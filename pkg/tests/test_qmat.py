import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonideal_fidelity import qmat
from nonideal_fidelity.errors import DimensionMismatch, NonHermitianInput, NotPositiveSemidefinite

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def hermitian_from(values, dim):
    re = np.array(values[: dim * dim]).reshape(dim, dim)
    im = np.array(values[dim * dim :]).reshape(dim, dim)
    g = re + 1j * im
    return 0.5 * (g + g.conj().T)


@pytest.mark.parametrize(
    "m, expected",
    [
        (np.eye(2), [1.0, 1.0]),
        (np.diag([0.25, 0.75]), [0.25, 0.75]),
        (np.diag([0.75, 0.25]), [0.25, 0.75]),
        # Pauli x: lambda^2 - 1 = 0.
        ([[0, 1], [1, 0]], [-1.0, 1.0]),
        # Pauli y: lambda^2 - 1 = 0.
        ([[0, -1j], [1j, 0]], [-1.0, 1.0]),
        # [[2, 1], [1, 2]]: (2 - lambda)^2 - 1 = 0.
        ([[2, 1], [1, 2]], [1.0, 3.0]),
        (np.eye(4), [1.0, 1.0, 1.0, 1.0]),
        (np.diag([3.0, -1.0, 2.0, 0.5]), [-1.0, 0.5, 2.0, 3.0]),
    ],
)
def test_hermitian_eigen_known_spectra(m, expected):
    vals, vecs = qmat.hermitian_eigen(m)
    np.testing.assert_allclose(vals, expected, atol=1e-14)
    np.testing.assert_allclose(vecs @ np.diag(vals) @ vecs.conj().T, m, atol=1e-14)


@pytest.mark.parametrize("dim", [2, 4])
def test_hermitian_eigen_random_matches_numpy(rng, dim):
    for _ in range(300):
        h = hermitian_from(rng.normal(size=2 * dim * dim), dim)
        vals, vecs = qmat.hermitian_eigen(h)
        assert np.all(np.diff(vals) >= 0)
        np.testing.assert_allclose(vals, np.linalg.eigvalsh(h), atol=1e-12)
        assert qmat.max_abs(vecs @ np.diag(vals) @ vecs.conj().T - h) <= 1e-12
        assert qmat.max_abs(vecs.conj().T @ vecs - np.eye(dim)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(st.lists(finite, min_size=32, max_size=32))
def test_hermitian_eigen_4x4_property(values):
    h = hermitian_from(values, 4)
    vals, vecs = qmat.hermitian_eigen(h)
    scale = max(1.0, np.abs(h).max())
    assert qmat.max_abs(vecs @ np.diag(vals) @ vecs.conj().T - h) <= 1e-12 * scale
    assert qmat.max_abs(vecs.conj().T @ vecs - np.eye(4)) <= 1e-12


def test_degenerate_4x4_with_repeated_eigenvalue():
    u = np.linalg.qr(np.arange(16).reshape(4, 4) + 1j * np.eye(4))[0]
    h = u @ np.diag([0.5, 0.5, 0.0, 0.0]) @ u.conj().T
    h = 0.5 * (h + h.conj().T)
    vals, vecs = qmat.hermitian_eigen(h)
    np.testing.assert_allclose(vals, [0, 0, 0.5, 0.5], atol=1e-14)
    assert qmat.max_abs(vecs @ np.diag(vals) @ vecs.conj().T - h) <= 1e-13


def test_hermitian_eigen_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        qmat.hermitian_eigen([[0, 1], [0, 0]])


@pytest.mark.parametrize("bad", [np.eye(3), np.ones((2, 4)), np.zeros(4)])
def test_dimension_checks(bad):
    with pytest.raises(DimensionMismatch):
        qmat.hermitian_eigen(bad)


def test_matrix_sqrt_examples():
    np.testing.assert_allclose(qmat.matrix_sqrt_psd(np.eye(2)), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(qmat.matrix_sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-15)


def test_matrix_sqrt_random_psd_reconstructs():
    rng = np.random.default_rng(7)
    for dim in (2, 4):
        for _ in range(1000 // 2):
            g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            m = g @ g.conj().T
            s = qmat.matrix_sqrt_psd(m)
            assert qmat.hermiticity_error(s) <= 1e-12
            assert np.linalg.eigvalsh(s).min() >= -1e-12
            assert qmat.max_abs(s @ s - m) <= 1e-10


def test_matrix_sqrt_clamps_roundoff_negatives():
    s = qmat.matrix_sqrt_psd(np.diag([1.0, -1e-12]))
    np.testing.assert_allclose(s, np.diag([1.0, 0.0]), atol=1e-15)


def test_matrix_sqrt_rejects_indefinite():
    with pytest.raises(NotPositiveSemidefinite):
        qmat.matrix_sqrt_psd(np.diag([1.0, -1e-6]))


def test_matrix_sqrt_of_rank_one_projector_is_exact():
    v = np.array([0.6, 0.8j])
    p = np.outer(v, v.conj())
    np.testing.assert_allclose(qmat.matrix_sqrt_psd(p), p, atol=1e-15)


def test_tensor_product_ordering():
    np.testing.assert_array_equal(qmat.tensor_product(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(
        qmat.tensor_product(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0])
    )
    a = np.array([[1, 2j], [3, 4]])
    b = np.array([[5, 6], [7j, 8]])
    out = qmat.tensor_product(a, b)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    assert out[2 * i + k, 2 * j + l] == a[i, j] * b[k, l]


def test_tensor_product_of_projectors_is_projector_on_product_ket():
    up = np.array([1, 0])
    plus = np.array([1, 0])
    joint_ket = np.array([up[i] * plus[k] for i in range(2) for k in range(2)])
    out = qmat.tensor_product(np.outer(up, up), np.outer(plus, plus))
    np.testing.assert_array_equal(out, np.outer(joint_ket, joint_ket))


def test_tensor_product_rejects_joint_inputs():
    with pytest.raises(DimensionMismatch):
        qmat.tensor_product(np.eye(4), np.eye(2))


def partial_trace_loop(m):
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            out[i, j] = sum(m[2 * i + k, 2 * j + k] for k in range(2))
    return out


def test_partial_trace_examples(rng):
    np.testing.assert_array_equal(qmat.partial_trace_apparatus(np.eye(4)), np.diag([2, 2]))
    for _ in range(100):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        np.testing.assert_allclose(qmat.partial_trace_apparatus(m), partial_trace_loop(m), atol=1e-15)
        assert abs(np.trace(qmat.partial_trace_apparatus(m)) - np.trace(m)) <= 1e-12


def test_partial_trace_inverts_tensor_product(rng):
    for _ in range(200):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q = g @ g.conj().T
        h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        a = h @ h.conj().T
        a /= np.trace(a)
        assert qmat.max_abs(qmat.partial_trace_apparatus(qmat.tensor_product(q, a)) - q) <= 1e-12


def test_partial_trace_rejects_qubit_input():
    with pytest.raises(DimensionMismatch):
        qmat.partial_trace_apparatus(np.eye(2))
