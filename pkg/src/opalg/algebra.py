"""Predicates and structure theory for algebras of complex matrices.

A :class:`MatrixAlgebra` is a subspace of some M_n certified closed under
the matrix product.  On top of that sit the commutativity variants,
annihilator and faithfulness tests, the Jacobson radical (trace-form kernel,
valid in characteristic zero), and the split of a 3-commutative algebra into
a unital commutative ideal plus a nilpotent ideal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Subspace,
    ToleranceConfig,
    as_matrix,
    contains,
    hs_norm,
    null_space,
    orthonormalize,
    product_stack,
)

__all__ = [
    "MatrixAlgebra",
    "NotAnAlgebraError",
    "NotThreeCommutativeError",
    "WedderburnSplit",
    "verify_algebra",
    "structure_constants",
    "is_commutative",
    "is_anticommuting",
    "is_three_commutative",
    "commutator_subspace",
    "annihilators",
    "is_left_faithful",
    "is_right_faithful",
    "is_idempotent_algebra",
    "is_c_faithful",
    "radical",
    "is_nilpotent_span",
    "quotient_structure",
    "abstract_radical_coeffs",
    "wedderburn_split",
]


class NotAnAlgebraError(ValueError):
    """A span that fails to be closed under the matrix product."""

    def __init__(self, message: str, worst_pair=None, residual: float = 0.0):
        super().__init__(message)
        self.worst_pair = worst_pair
        self.residual = residual


class NotThreeCommutativeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MatrixAlgebra:
    """Subspace of M_n closed under the product, with its closure residual."""

    space: Subspace
    closure_residual: float
    tol: ToleranceConfig

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def ambient(self) -> int:
        return self.space.ambient_rows

    @property
    def basis(self) -> tuple:
        return self.space.basis


def verify_algebra(space_or_mats, tol: ToleranceConfig | None = None) -> MatrixAlgebra:
    """Certify closure under the product, or raise with the worst violating pair.

    Residuals are relative: |p - proj(p)| / max(1, |p|) per product p.
    """
    tol = tol or DEFAULT_TOL
    if isinstance(space_or_mats, Subspace):
        space = space_or_mats
    else:
        space = orthonormalize(space_or_mats, tol)
    if space.ambient_rows != space.ambient_cols:
        raise ValueError("an algebra needs a square ambient space")
    d = space.dim
    worst = 0.0
    worst_pair = None
    if d:
        prods = product_stack(space.stack, space.stack)
        flat = prods.reshape(d * d, -1)
        basis_flat = space.stack.reshape(d, -1)
        res = np.linalg.norm(flat - (flat @ basis_flat.conj().T) @ basis_flat, axis=1)
        rel = res / np.maximum(1.0, np.linalg.norm(flat, axis=1))
        k = int(np.argmax(rel))
        worst = float(rel[k])
        worst_pair = divmod(k, d)
    if worst > tol.eq_tol:
        raise NotAnAlgebraError(
            f"span is not closed under the product: basis pair {worst_pair} "
            f"has projection residual {worst:.3e}",
            worst_pair=worst_pair,
            residual=worst,
        )
    return MatrixAlgebra(space, worst, tol)


def structure_constants(A: MatrixAlgebra) -> np.ndarray:
    """Coefficients c[i, j, :] of b_i b_j against the orthonormal basis."""
    d = A.dim
    table = np.zeros((d, d, d), complex)
    for i, bi in enumerate(A.basis):
        for j, bj in enumerate(A.basis):
            table[i, j] = A.space.coeffs(bi @ bj)
    return table


def _pair_residual(A: MatrixAlgebra, sign: float) -> float:
    worst = 0.0
    for bi in A.basis:
        for bj in A.basis:
            m = bi @ bj + sign * (bj @ bi)
            worst = max(worst, hs_norm(m) / max(1.0, hs_norm(bi @ bj)))
    return worst


def is_commutative(A: MatrixAlgebra, tol: ToleranceConfig | None = None) -> bool:
    tol = tol or A.tol
    return _pair_residual(A, -1.0) <= tol.eq_tol


def is_anticommuting(A: MatrixAlgebra, tol: ToleranceConfig | None = None) -> bool:
    """xy = -yx for all pairs; in particular every element squares to zero."""
    tol = tol or A.tol
    return _pair_residual(A, +1.0) <= tol.eq_tol


def is_three_commutative(A: MatrixAlgebra, tol: ToleranceConfig | None = None) -> bool:
    """Every triple product of basis elements is permutation invariant.

    Triple invariance over a spanning set forces permutation invariance of
    all products of length >= 3, because an adjacent transposition always
    sits inside some window of three consecutive factors.
    """
    tol = tol or A.tol
    basis = A.basis
    d = len(basis)
    for i, j, k in itertools.combinations_with_replacement(range(d), 3):
        ref = None
        for p, q, r in set(itertools.permutations((i, j, k))):
            m = basis[p] @ basis[q] @ basis[r]
            if ref is None:
                ref = m
                scale = max(1.0, hs_norm(ref))
            elif hs_norm(m - ref) > tol.eq_tol * scale:
                return False
    return True


def commutator_subspace(A: MatrixAlgebra, tol: ToleranceConfig | None = None) -> Subspace:
    """Span of the commutators b_i b_j - b_j b_i.

    Commutators that vanish under the equality tolerance are dropped before
    spanning, so a commutative algebra yields the zero subspace rather than
    a span of rounding noise.
    """
    tol = tol or A.tol
    mats = []
    for i, bi in enumerate(A.basis):
        for bj in A.basis[i + 1 :]:
            c = bi @ bj - bj @ bi
            if hs_norm(c) > tol.eq_tol * max(1.0, hs_norm(bi @ bj)):
                mats.append(c)
    return orthonormalize(mats, tol, shape=A.space.shape)


def _kernel_of_action(mats, acting, tol: ToleranceConfig, side: str, shape) -> Subspace:
    """Coefficient-space kernel of x -> (x a)_a or (a x)_a over span(mats)."""
    d = len(mats)
    if d == 0:
        return orthonormalize([], tol, shape=shape)
    if not acting:
        return orthonormalize(list(mats), tol, shape=shape)
    blocks = []
    for a in acting:
        cols = [(m @ a if side == "left" else a @ m).ravel() for m in mats]
        blocks.append(np.stack(cols, axis=1))
    big = np.vstack(blocks)
    kernel = null_space(big, tol.eq_tol, min_scale=1.0)
    mats_out = [np.einsum("k,kij->ij", c, np.stack(mats)) for c in kernel]
    return orthonormalize(mats_out, tol, shape=shape)


def annihilators(A: MatrixAlgebra, tol: ToleranceConfig | None = None):
    """(left, right) annihilators: {a in A : aA = 0} and {a in A : Aa = 0}."""
    tol = tol or A.tol
    basis = list(A.basis)
    shape = A.space.shape
    left = _kernel_of_action(basis, basis, tol, "left", shape)
    right = _kernel_of_action(basis, basis, tol, "right", shape)
    return left, right


def is_left_faithful(A: MatrixAlgebra, tol: ToleranceConfig | None = None) -> bool:
    return annihilators(A, tol)[0].dim == 0


def is_right_faithful(A: MatrixAlgebra, tol: ToleranceConfig | None = None) -> bool:
    return annihilators(A, tol)[1].dim == 0


def is_idempotent_algebra(A: MatrixAlgebra, tol: ToleranceConfig | None = None) -> bool:
    """True when the span of pairwise products is all of A."""
    tol = tol or A.tol
    prods = [bi @ bj for bi in A.basis for bj in A.basis]
    return orthonormalize(prods, tol, shape=A.space.shape).dim == A.dim


def is_c_faithful(A: MatrixAlgebra, tol: ToleranceConfig | None = None) -> bool:
    """The commutator ideal acts faithfully on A from at least one side."""
    tol = tol or A.tol
    J = commutator_subspace(A, tol)
    if J.dim == 0:
        return True
    basis = list(A.basis)
    shape = A.space.shape
    left_kernel = _kernel_of_action(list(J.basis), basis, tol, "left", shape)
    right_kernel = _kernel_of_action(list(J.basis), basis, tol, "right", shape)
    return left_kernel.dim == 0 or right_kernel.dim == 0


def is_nilpotent_span(mats, tol: ToleranceConfig | None = None, max_power: int | None = None) -> bool:
    """Does the algebra spanned by mats (assumed product-closed) vanish at some power?"""
    tol = tol or DEFAULT_TOL
    mats = [as_matrix(m) for m in mats]
    if not mats:
        return True
    gens = orthonormalize(mats, tol)
    cur = gens
    limit = max_power or (gens.dim + 2)
    for _ in range(limit):
        if cur.dim == 0:
            return True
        # products of unit-norm factors: anything below eq_tol is zero
        prods = [
            p
            for p in (x @ g for x in cur.basis for g in gens.basis)
            if hs_norm(p) > tol.eq_tol
        ]
        nxt = orthonormalize(prods, tol, shape=gens.shape)
        if nxt.dim >= cur.dim:
            return nxt.dim == 0
        cur = nxt
    return cur.dim == 0


def radical(A: MatrixAlgebra, tol: ToleranceConfig | None = None) -> Subspace:
    """Jacobson radical via the kernel of the bilinear trace form.

    For a faithfully represented finite dimensional algebra over the complex
    numbers, {x in A : trace(x b) = 0 for all b in A} is the largest
    nilpotent ideal.  The result is cross-checked to be a nilpotent ideal
    whose quotient has zero radical.
    """
    tol = tol or A.tol
    d = A.dim
    if d == 0:
        return A.space
    basis = list(A.basis)
    gram = np.zeros((d, d), complex)
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            gram[i, j] = np.trace(bi @ bj)
    # x = sum c_i b_i is in the kernel iff gram.T @ c = 0
    kernel = null_space(gram.T, tol.eq_tol, min_scale=1.0)
    rad_mats = [np.einsum("k,kij->ij", c, A.space.stack) for c in kernel]
    rad = orthonormalize(rad_mats, tol, shape=A.space.shape)

    for r in rad.basis:
        for b in basis:
            if not contains(rad, b @ r, tol) or not contains(rad, r @ b, tol):
                raise ArithmeticError("radical cross-check failed: trace-form kernel is not an ideal")
    if not is_nilpotent_span(list(rad.basis), tol):
        raise ArithmeticError("radical cross-check failed: trace-form kernel is not nilpotent")
    if rad.dim < d:
        _, table = quotient_structure(A, rad, tol)
        if len(abstract_radical_coeffs(table, tol)) != 0:
            raise ArithmeticError("radical cross-check failed: quotient still has a radical")
    return rad


def quotient_structure(A: MatrixAlgebra, ideal: Subspace, tol: ToleranceConfig | None = None):
    """Quotient A/ideal as representatives plus a structure-constant table.

    Representatives are an orthonormal basis of the complement of the ideal
    inside A; the table gives the product of two representatives in
    complement coordinates (the ideal component is discarded).
    """
    tol = tol or A.tol
    d = A.dim
    ideal_coeffs = np.stack([A.space.coeffs(m) for m in ideal.basis]) if ideal.dim else np.zeros((0, d), complex)
    proj = ideal_coeffs.conj().T @ ideal_coeffs if ideal.dim else np.zeros((d, d), complex)
    comp = np.eye(d, dtype=complex) - proj
    _, s, vh = np.linalg.svd(comp)
    rank = int(np.sum(s > 0.5))  # eigenvalues of a projector are 0 or 1
    reps_coeffs = vh[:rank].conj()
    reps = [A.space.from_coeffs(c) for c in reps_coeffs]
    m = len(reps)
    table = np.zeros((m, m, m), complex)
    for i, qi in enumerate(reps):
        for j, qj in enumerate(reps):
            c = A.space.coeffs(qi @ qj)
            table[i, j] = reps_coeffs.conj() @ c
    return reps, table


def abstract_radical_coeffs(table: np.ndarray, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Radical of an abstract algebra given by structure constants.

    Uses the trace form of left multiplication on the unitization, which is
    a faithful representation, so the same characteristic-zero criterion as
    in :func:`radical` applies.  Returns coefficient vectors.
    """
    tol = tol or DEFAULT_TOL
    m = table.shape[0]
    if m == 0:
        return np.zeros((0, 0), complex)
    # left multiplication on C 1 + span(q_1..q_m); coordinates (1, q_1..q_m)
    left = np.zeros((m, m + 1, m + 1), complex)
    for i in range(m):
        left[i, 1:, 0] = np.eye(m, dtype=complex)[i]  # q_i * 1 = q_i
        left[i, 1:, 1:] = table[i].T  # q_i * q_j in column j
    gram = np.einsum("iab,jba->ij", left, left)
    return null_space(gram.T, tol.eq_tol, min_scale=1.0)


@dataclass(frozen=True, eq=False)
class WedderburnSplit:
    """A = C + K with C a unital commutative ideal and K a nilpotent ideal."""

    radical_only: bool
    unital_part: MatrixAlgebra | None
    nilpotent_part: MatrixAlgebra | None
    idempotent: np.ndarray | None
    residual: float


def _lift_idempotent(e: np.ndarray, tol: ToleranceConfig, max_steps: int = 100) -> np.ndarray:
    for _ in range(max_steps):
        e2 = e @ e
        if hs_norm(e2 - e) <= tol.eq_tol:
            return e
        e = 3.0 * e2 - 2.0 * e2 @ e
    raise ArithmeticError("idempotent lifting did not converge")


def wedderburn_split(A: MatrixAlgebra, tol: ToleranceConfig | None = None) -> WedderburnSplit:
    """Split a 3-commutative algebra into unital commutative plus nilpotent ideals.

    Requires 3-commutativity (which makes the lifted idempotent central).
    Returns ``radical_only=True`` when the algebra is nilpotent.
    """
    tol = tol or A.tol
    if not is_three_commutative(A, tol):
        raise NotThreeCommutativeError("the splitting requires a 3-commutative algebra")
    rad = radical(A, tol)
    if rad.dim == A.dim:
        return WedderburnSplit(True, None, None, None, 0.0)
    reps, table = quotient_structure(A, rad, tol)
    m = len(reps)
    # identity of the semisimple quotient: u with u q_i = q_i u = q_i for all i
    rows = []
    rhs = []
    eye = np.eye(m, dtype=complex)
    for i in range(m):
        rows.append(table[:, i, :].T)  # columns indexed by u-coefficients
        rhs.append(eye[i])
        rows.append(table[i, :, :].T)
        rhs.append(eye[i])
    big = np.vstack(rows)
    target = np.concatenate(rhs)
    u, *_ = np.linalg.lstsq(big, target, rcond=None)
    if hs_norm(big @ u - target) > tol.eq_tol * max(1.0, hs_norm(target)):
        raise ArithmeticError("semisimple quotient has no identity; split aborted")
    seed = sum(c * q for c, q in zip(u, reps))
    f = _lift_idempotent(seed, tol)
    if not contains(A.space, f, tol):
        raise ArithmeticError("lifted idempotent escaped the algebra")

    # basis elements have unit norm, so anything below eq_tol is a true zero
    c_mats = [m for m in (f @ b @ f for b in A.basis) if hs_norm(m) > tol.eq_tol]
    k_mats = [m for m in (b - f @ b for b in A.basis) if hs_norm(m) > tol.eq_tol]
    c_space = orthonormalize(c_mats, tol, shape=A.space.shape)
    k_space = orthonormalize(k_mats, tol, shape=A.space.shape)
    residual = 0.0
    for b in A.basis:
        residual = max(residual, hs_norm(f @ b - b @ f) / max(1.0, hs_norm(b)))
    for c in c_space.basis:
        for k in k_space.basis:
            residual = max(residual, hs_norm(c @ k), hs_norm(k @ c))
    direct = orthonormalize(list(c_space.basis) + list(k_space.basis), tol, shape=A.space.shape)
    if direct.dim != c_space.dim + k_space.dim or direct.dim != A.dim:
        raise ArithmeticError("split does not decompose the algebra as a direct sum")
    if not is_nilpotent_span(list(k_space.basis), tol):
        raise ArithmeticError("nilpotent summand fails to be nilpotent")
    C = verify_algebra(c_space, tol)
    K = verify_algebra(k_space, tol)
    return WedderburnSplit(False, C, K, f, residual)
