import numpy as np
import pytest

from opalg import examples as ex
from opalg.cb import (
    FEASIBLE,
    INFEASIBLE,
    affine_from_equations,
    choi,
    inverse_map,
    is_complete_isometry,
    is_completely_contractive,
    is_symmetric_space,
    min_opnorm_affine,
)
from opalg.linalg import (
    LinearMapOnSubspace,
    amplify,
    contains,
    hs_norm,
    op_norm,
    orthonormalize,
    random_unitary,
)

from .oracles import min_opnorm_grid

unit = ex.matrix_unit


def full_matrix_space(n):
    return orthonormalize([unit(n, i, j) for i in range(1, n + 1) for j in range(1, n + 1)])


def transpose_map(space):
    return LinearMapOnSubspace(space, tuple(b.T for b in space.basis), space.shape)


def test_choi_identity():
    full = full_matrix_space(2)
    phi = LinearMapOnSubspace(full, tuple(full.basis), (2, 2))
    c = choi(phi)
    psi = np.array([1, 0, 0, 1.0])
    assert np.allclose(c, np.outer(psi, psi))
    assert np.linalg.eigvalsh(c).min() >= -1e-12


def test_choi_transpose_spectrum():
    full = full_matrix_space(2)
    c = choi(transpose_map(full))
    assert np.allclose(sorted(np.linalg.eigvalsh(c)), [-1.0, 1.0, 1.0, 1.0])


def test_choi_zero_map():
    full = full_matrix_space(2)
    phi = LinearMapOnSubspace(full, tuple(np.zeros((2, 2), complex) for _ in range(4)), (2, 2))
    assert np.allclose(choi(phi), 0.0)


def test_choi_requires_full_domain(car_pair):
    with pytest.raises(ValueError):
        choi(LinearMapOnSubspace(car_pair.space, tuple(car_pair.basis), (4, 4)))


def test_identity_maps_feasible(car_pair):
    for space in (car_pair.space, full_matrix_space(2)):
        phi = LinearMapOnSubspace(space, tuple(space.basis), space.shape)
        out = is_completely_contractive(phi)
        assert out.status == FEASIBLE
        assert out.witness is not None and out.residual <= 1e-7


def test_transpose_full_m2_infeasible():
    out = is_completely_contractive(transpose_map(full_matrix_space(2)))
    assert out.status == INFEASIBLE
    # the witness is an amplified element whose image doubles the norm
    assert out.residual >= 1.0 - 1e-6


def test_transpose_witness_ratio():
    full = full_matrix_space(2)
    phi = transpose_map(full)
    out = is_completely_contractive(phi)
    x = out.witness
    level = x.shape[0] // 2
    image = amplify(phi, level, x)
    ratio = op_norm(image) / op_norm(x)
    assert ratio >= 2.0 - 1e-6


def test_transpose_on_car_pair_feasible_both_ways(car_pair):
    out = is_complete_isometry(transpose_map(car_pair.space))
    assert out.status == FEASIBLE


def test_conjugation_with_sign_feasible(car_pair):
    # x -> -(theta^* x theta) equals the transpose on the algebra
    theta = ex.car_pair_symmetry_unitary()
    images = tuple(-(theta.conj().T @ b @ theta) for b in car_pair.basis)
    phi = LinearMapOnSubspace(car_pair.space, images, (4, 4))
    out = is_complete_isometry(phi)
    assert out.status == FEASIBLE
    for b, im in zip(car_pair.basis, images):
        assert np.allclose(im, b.T)


def test_complete_isometry_rejects_noninjective(car_pair):
    images = (np.zeros((4, 4), complex),) * car_pair.dim
    phi = LinearMapOnSubspace(car_pair.space, images, (4, 4))
    with pytest.raises(ValueError):
        is_complete_isometry(phi)


def test_inverse_map_roundtrip(rng, car_pair):
    q = random_unitary(4, rng)
    images = tuple(q @ b @ q.conj().T for b in car_pair.basis)
    phi = LinearMapOnSubspace(car_pair.space, images, (4, 4))
    inv = inverse_map(phi)
    for b in car_pair.basis:
        assert hs_norm(inv.apply(phi.apply(b)) - b) <= 1e-9


def test_unitary_conjugation_isometry(rng, car_pair):
    q = random_unitary(4, rng)
    images = tuple(q @ b @ q.conj().T for b in car_pair.basis)
    phi = LinearMapOnSubspace(car_pair.space, images, (4, 4))
    out = is_complete_isometry(phi)
    assert out.status == FEASIBLE


def test_monotone_under_restriction(rng):
    # a feasible map stays feasible on a random subspace of its domain
    q = random_unitary(3, rng)
    full = full_matrix_space(3)
    phi = LinearMapOnSubspace(full, tuple(q @ b @ q.conj().T for b in full.basis), (3, 3))
    assert is_completely_contractive(phi).status == FEASIBLE
    picks = [full.basis[i] + 0.5 * full.basis[(i + 3) % 9] for i in range(3)]
    sub = orthonormalize(picks)
    sub_phi = LinearMapOnSubspace(sub, tuple(q @ b @ q.conj().T for b in sub.basis), (3, 3))
    assert is_completely_contractive(sub_phi).status == FEASIBLE


def test_feasible_outcome_bounds_amplifications(rng, car_pair):
    phi = transpose_map(car_pair.space)
    out = is_complete_isometry(phi)
    assert out.status == FEASIBLE
    d = car_pair.dim
    for level in (1, 2, 3):
        c = rng.standard_normal((level, level, d)) + 1j * rng.standard_normal((level, level, d))
        x = np.zeros((4 * level, 4 * level), complex)
        for u in range(level):
            for v in range(level):
                x[4 * u : 4 * u + 4, 4 * v : 4 * v + 4] = sum(
                    cc * b for cc, b in zip(c[u, v], car_pair.basis)
                )
        y = amplify(phi, level, x)
        assert op_norm(y) <= (1.0 + 1e-7) * op_norm(x) + 1e-9


def test_choi_psd_iff_completely_positive(rng):
    full = full_matrix_space(2)
    # sums of conjugations are completely positive
    ks = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(2)]
    cp_images = tuple(sum(k @ b @ k.conj().T for k in ks) for b in full.basis)
    cp = LinearMapOnSubspace(full, cp_images, (2, 2))
    assert np.linalg.eigvalsh(choi(cp)).min() >= -1e-10
    # transpose composites are not
    tp_images = tuple(sum(k @ b.T @ k.conj().T for k in ks) for b in full.basis)
    tp = LinearMapOnSubspace(full, tp_images, (2, 2))
    assert np.linalg.eigvalsh(choi(tp)).min() < -1e-6


def test_symmetric_space_cases(car_pair):
    assert is_symmetric_space(car_pair.space).status == FEASIBLE
    assert is_symmetric_space(full_matrix_space(2)).status == INFEASIBLE
    sym_mats = orthonormalize([unit(2, 1, 1), unit(2, 1, 2) + unit(2, 2, 1)])
    assert is_symmetric_space(sym_mats).status == FEASIBLE


def test_symmetric_space_needs_square():
    space = orthonormalize([unit(2, 1, 1, 3)])
    with pytest.raises(ValueError):
        is_symmetric_space(space)


def test_min_opnorm_pinned_point(car_pair, pq):
    env_space = orthonormalize(
        [unit(4, i, j) for i in (1, 2, 3) for j in (2, 3, 4)]
    )
    # pin w = pq exactly: identity equations on all coordinates
    eqs = np.eye(env_space.dim, dtype=complex)
    rhs = env_space.coeffs(pq)
    aset = affine_from_equations(env_space, eqs, rhs)
    res = min_opnorm_affine(aset)
    assert res.status == "OK"
    assert res.min_norm == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(res.argmin, pq)


def test_min_opnorm_free_direction():
    space = orthonormalize([unit(2, 1, 2)])
    aset = affine_from_equations(space, np.zeros((1, 1), complex), np.zeros(1, complex))
    res = min_opnorm_affine(aset)
    assert res.status == "OK" and res.min_norm == pytest.approx(0.0, abs=1e-9)
    assert np.allclose(res.argmin, 0.0)


def test_min_opnorm_inconsistent():
    space = orthonormalize([unit(2, 1, 2)])
    aset = affine_from_equations(space, np.zeros((1, 1), complex), np.ones(1, complex))
    assert min_opnorm_affine(aset).status == "INCONSISTENT"


def test_min_opnorm_matches_grid_oracle():
    # one-complex-parameter affine family with an interior minimum
    space = orthonormalize([unit(2, 1, 1), unit(2, 1, 2), unit(2, 2, 1)])
    # constrain the e11 coefficient to one, leave e12 free, kill e21
    eqs = np.array([[1.0, 0, 0], [0, 0, 1.0]], complex)
    rhs = np.array([1.0, 0.0], complex)
    aset = affine_from_equations(space, eqs, rhs)
    res = min_opnorm_affine(aset)
    oracle = min_opnorm_grid(aset.particular, aset.directions)
    assert res.status == "OK"
    assert res.min_norm == pytest.approx(oracle, abs=5e-4)
    # the argmin satisfies the constraints
    assert abs(space.coeffs(res.argmin)[0] - 1.0) <= 1e-7
    assert abs(space.coeffs(res.argmin)[2]) <= 1e-7
