import numpy as np
import pytest

from opalg import examples as ex
from opalg.algebra import verify_algebra
from opalg.linalg import contains, hs_norm, op_norm, orthonormalize
from opalg.reversibility import (
    TARGET_PRODUCT,
    TARGET_REVERSED,
    block_pairing_report,
    certify_reversal_element,
    decide_reversible,
    pairing_consistency,
    solve_pairing,
    transpose_double,
    _solve_pairing_table,
)
from opalg.tro import block_decompose, generate_tro, injective_envelope

from .oracles import pairing_system_bruteforce

unit = ex.matrix_unit


def test_pairing_car_pair(car_pair, pq):
    env = injective_envelope(car_pair.space)
    z = solve_pairing(car_pair, env.envelope, TARGET_PRODUCT)
    assert z.status == "UNIQUE_IN_BALL"
    assert z.affine_dim == 0
    assert hs_norm(z.element - pq) <= 1e-7
    assert z.op_norm == pytest.approx(1.0, abs=1e-9)
    w = solve_pairing(car_pair, env.envelope, TARGET_REVERSED)
    assert w.status == "UNIQUE_IN_BALL"
    assert hs_norm(w.element + pq) <= 1e-7


def test_pairing_strict_upper_reversed_inconsistent():
    A = ex.strict_upper(3)
    env = injective_envelope(A.space)
    sol = solve_pairing(A, env.envelope, TARGET_REVERSED)
    assert sol.status == "NONE" and sol.inconsistent
    # independent oracle over the handwritten corner basis
    corner = [unit(3, 1, 2), unit(3, 1, 3), unit(3, 2, 2), unit(3, 2, 3)]
    residual, _ = pairing_system_bruteforce(list(A.basis), corner, reversed_product=True)
    assert residual > 0.5


def test_pairing_strict_upper_product_found():
    A = ex.strict_upper(3)
    env = injective_envelope(A.space)
    sol = solve_pairing(A, env.envelope, TARGET_PRODUCT)
    assert sol.status == "UNIQUE_IN_BALL"
    assert hs_norm(sol.element - unit(3, 2, 2)) <= 1e-9
    corner = [unit(3, 1, 2), unit(3, 1, 3), unit(3, 2, 2), unit(3, 2, 3)]
    residual, v = pairing_system_bruteforce(list(A.basis), corner, reversed_product=False)
    assert residual <= 1e-12
    assert hs_norm(v - unit(3, 2, 2)) <= 1e-9


def test_pairing_oracle_agreement_car(car_pair, pq):
    env = injective_envelope(car_pair.space)
    residual, v = pairing_system_bruteforce(
        list(car_pair.basis), list(env.envelope.basis), reversed_product=True
    )
    assert residual <= 1e-12
    assert hs_norm(v + pq) <= 1e-9


def test_pairing_ambient_mismatch(car_pair):
    other = generate_tro(orthonormalize([unit(2, 1, 2)]))
    with pytest.raises(ValueError):
        solve_pairing(car_pair, other, TARGET_PRODUCT)


def test_decide_reversible_verdicts(car_pair):
    assert decide_reversible(car_pair).reversible == "YES"
    assert decide_reversible(ex.strict_upper(3)).reversible == "NO"
    verdict = decide_reversible(ex.diagonal_algebra(3))
    assert verdict.reversible == "YES"


def test_commutative_pairings_coincide():
    A = ex.diagonal_algebra(3)
    env = injective_envelope(A.space)
    z = solve_pairing(A, env.envelope, TARGET_PRODUCT)
    w = solve_pairing(A, env.envelope, TARGET_REVERSED)
    assert z.element is not None and w.element is not None
    assert hs_norm(z.element - w.element) <= 1e-9


def test_certify_reversal_element(car_pair):
    assert certify_reversal_element(car_pair, -np.eye(4, dtype=complex))
    assert not certify_reversal_element(ex.upper_triangular(2), unit(2, 2, 2))
    with pytest.raises(ValueError):
        certify_reversal_element(car_pair, 3.0 * np.eye(4, dtype=complex))


def test_certify_isometry_example():
    for s in (np.eye(1, dtype=complex), 1j * np.eye(1, dtype=complex),
              np.array([[0, 1], [-1, 0]], complex)):
        A = ex.isometry_algebra(s)
        w = ex.isometry_reversal_element(s)
        assert op_norm(w) <= 1.0 + 1e-12
        assert certify_reversal_element(A, w)


def test_certify_commutative_with_solved_pairing():
    A = ex.diagonal_algebra(2)
    env = injective_envelope(A.space)
    z = solve_pairing(A, env.envelope, TARGET_PRODUCT)
    # the certificate takes the middle element, the adjoint of the ball element
    assert certify_reversal_element(A, z.element.conj().T)


def test_pairing_consistency_car(car_pair, pq):
    rep = pairing_consistency(car_pair, pq, -pq)
    assert all(rep.derived_commutative.values())
    assert rep.interchange_ok
    assert not rep.z_equals_w
    assert not rep.commutative
    assert rep.consistent


def test_pairing_consistency_commutative():
    A = ex.diagonal_algebra(2)
    env = injective_envelope(A.space)
    z = solve_pairing(A, env.envelope, TARGET_PRODUCT).element
    w = solve_pairing(A, env.envelope, TARGET_REVERSED).element
    rep = pairing_consistency(A, z, w)
    assert rep.z_equals_w and rep.commutative and rep.consistent


def test_jordan_identity_car(car_pair, pq):
    # both pairings square every element to zero here
    for a in car_pair.basis:
        assert hs_norm(a @ pq.conj().T @ a) <= 1e-9
        assert hs_norm(a @ (-pq).conj().T @ a) <= 1e-9
        assert hs_norm(a @ a) <= 1e-9


def test_transpose_double_shapes(car_pair):
    dbl = transpose_double(car_pair)
    assert dbl.space.dim == 3
    assert dbl.space.shape == (8, 8)
    assert not dbl.matches_concrete  # (xy)^T differs from (yx)^T here
    comm = transpose_double(ex.diagonal_algebra(2))
    assert comm.matches_concrete
    zero = transpose_double(verify_algebra([unit(2, 1, 2)]))
    assert all(hs_norm(p) <= 1e-12 for row in zero.products for p in row)


def test_transpose_double_pairing_found_for_reversible(car_pair):
    # a reversible algebra keeps an operator algebra product on the double
    for A in (car_pair, ex.diagonal_algebra(2)):
        dbl = transpose_double(A)
        w = generate_tro(dbl.space)
        basis = list(dbl.reps)
        mu = [[dbl.products[i][j] for j in range(A.dim)] for i in range(A.dim)]
        sol = _solve_pairing_table(basis, mu, w, A.tol)
        assert sol.status != "NONE"


def test_block_pairing_reports():
    diag = ex.diagonal_algebra(2)
    rep = block_pairing_report(diag)
    assert rep.block_shapes == ((1, 1), (1, 1))
    assert rep.ok and all(rep.left_commutative) and all(rep.right_commutative)

    nil = verify_algebra([unit(2, 1, 2)])
    rep2 = block_pairing_report(nil)
    assert len(rep2.block_shapes) == 1 and rep2.ok

    band = verify_algebra([unit(3, i, j) for i in (1, 2) for j in (1, 2, 3)])
    rep3 = block_pairing_report(band)
    assert rep3.block_shapes == ((2, 3),)
    assert rep3.ok
    bs = block_decompose(generate_tro(band.space))
    zk = bs.left_projections[0] @ bs.right_projections[0]
    assert np.allclose(zk, np.diag([1.0, 1.0, 0.0]))


def test_reversal_uniqueness_sampling(car_pair):
    env = injective_envelope(car_pair.space)
    sol = solve_pairing(car_pair, env.envelope, TARGET_REVERSED)
    # the full solution set is a point, so uniqueness in the ball is automatic
    assert sol.affine_dim == 0 and sol.status == "UNIQUE_IN_BALL"


def test_pairing_not_unique_in_larger_tro():
    # a square-zero algebra solved inside the full matrix TRO has a large
    # solution set, and small perturbations stay inside the ball
    nil = verify_algebra([unit(2, 1, 2)])
    full = generate_tro(orthonormalize([unit(2, i, j) for i in (1, 2) for j in (1, 2)]))
    sol = solve_pairing(nil, full, TARGET_REVERSED)
    assert sol.status == "FOUND"
    assert sol.affine_dim == 6
    assert sol.op_norm <= 1e-9


def test_corner_family_discrimination():
    # A = span{a e13 + b e24, c e12 + d e34, e14}: the two generator products
    # are (ad) e14 and (cb) e14.  Ratio -1 is the anticommuting point, +1 the
    # commutative one; everything else must be refused.
    def family(a, b, c, d):
        x = a * unit(4, 1, 3) + b * unit(4, 2, 4)
        y = c * unit(4, 1, 2) + d * unit(4, 3, 4)
        return verify_algebra([x, y, unit(4, 1, 4)])

    assert decide_reversible(family(1, 1, 1, -1)).reversible == "YES"  # anticommuting
    assert decide_reversible(family(1, 1, 1, 1)).reversible == "YES"   # commutative
    assert decide_reversible(family(1, 2, 1, 1)).reversible == "NO"
    rng = np.random.default_rng(5)
    for _ in range(4):
        a, b, c, d = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        verdict = decide_reversible(family(a, b, c, d))
        ratio = (a * d) / (c * b)
        if abs(ratio - 1) > 1e-6 and abs(ratio + 1) > 1e-6:
            assert verdict.reversible == "NO"


def test_shift_family_certificates_verify():
    # these are not anticommuting for n >= 3 yet still reversible; check the
    # solved certificate by direct multiplication
    for n in (3, 4):
        A = ex.shift_family(n)
        env = injective_envelope(A.space)
        assert env.status == "EXACT"
        sol = solve_pairing(A, env.envelope, TARGET_REVERSED)
        assert sol.status == "UNIQUE_IN_BALL"
        w = sol.element
        worst = max(
            hs_norm(bi @ w.conj().T @ bj - bj @ bi)
            for bi in A.basis
            for bj in A.basis
        )
        assert worst <= 1e-12
        assert contains(env.envelope.space, w)


def test_verdicts_invariant_under_conjugation(rng, car_pair):
    from opalg.linalg import random_unitary

    pq = np.diag([0, 1.0, 1.0, 0]).astype(complex)
    for base, expect in ((car_pair, "YES"), (ex.strict_upper(3), "NO")):
        for _ in range(3):
            q = random_unitary(base.ambient, rng)
            B = verify_algebra([q @ b @ q.conj().T for b in base.basis])
            env = injective_envelope(B.space)
            assert env.status == "EXACT"
            assert decide_reversible(B).reversible == expect
            if expect == "YES":
                z = solve_pairing(B, env.envelope, TARGET_PRODUCT)
                assert hs_norm(z.element - q @ pq @ q.conj().T) <= 1e-6


def test_car_three_generated_algebra_refuted():
    # the generated algebra of three anticommutation generators: both
    # refutations carry their own certificates (inconsistent system inside an
    # exact envelope; explicit norm-expanding amplified element)
    from opalg.cb import INFEASIBLE, is_symmetric_space

    _, A3 = ex.car_generators(3)
    env = injective_envelope(A3.space)
    assert env.status == "EXACT"
    sol = solve_pairing(A3, env.envelope, TARGET_REVERSED)
    assert sol.status == "NONE" and sol.inconsistent
    assert decide_reversible(A3).reversible == "NO"
    assert is_symmetric_space(A3.space).status == INFEASIBLE


def test_family_n3_pairings():
    A = ex.anticommuting_family(3)
    env = injective_envelope(A.space)
    p, q = np.diag([1.0] * 7 + [0.0]).astype(complex), np.diag([0.0] + [1.0] * 7).astype(complex)
    z = solve_pairing(A, env.envelope, TARGET_PRODUCT)
    w = solve_pairing(A, env.envelope, TARGET_REVERSED)
    assert hs_norm(z.element - p @ q) <= 1e-7
    assert hs_norm(w.element + p @ q) <= 1e-7
    assert decide_reversible(A).reversible == "YES"
