"""Completely bounded norm certification via positive semidefinite feasibility.

A map phi defined on a subspace S of M_{m,n} is completely contractive
exactly when it extends to a 2x2 block map on M_{m+n} that is completely
positive and fixes the two identity corners.  That extension problem is a
feasibility question for the Choi matrix: positive semidefinite, subject to
linear constraints pinning its action on the corners and on S.  The solver
is alternating projections (Dykstra) between the PSD cone and the affine
constraint set; an explicit ``u x v`` conjugation certificate and a direct
search for norm-expanding amplified elements provide fast exits on the
feasible and infeasible sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    LinearMapOnSubspace,
    Subspace,
    ToleranceConfig,
    as_matrix,
    hs_norm,
    null_space,
    op_norm,
    orthonormalize,
)

__all__ = [
    "FEASIBLE",
    "INFEASIBLE",
    "UNDECIDED",
    "FeasibilityOutcome",
    "choi",
    "is_completely_contractive",
    "is_complete_isometry",
    "is_symmetric_space",
    "inverse_map",
    "AffineMatrixSet",
    "MinNormResult",
    "affine_from_equations",
    "min_opnorm_affine",
]

FEASIBLE = "FEASIBLE"
INFEASIBLE = "INFEASIBLE"
UNDECIDED = "UNDECIDED"


@dataclass(frozen=True, eq=False)
class FeasibilityOutcome:
    """Outcome of a contractivity question.

    FEASIBLE carries a PSD Choi witness and its constraint residual.
    INFEASIBLE carries an amplified element whose image norm exceeds its own;
    residual then records the excess ratio minus one.
    """

    status: str
    witness: np.ndarray | None
    residual: float
    notes: str = ""


def choi(phi: LinearMapOnSubspace, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Choi matrix sum_ij e_ij (x) phi(e_ij) for a map defined on all of M_n."""
    tol = tol or DEFAULT_TOL
    m, n = phi.domain.shape
    if m != n or phi.domain.dim != n * n:
        raise ValueError("the Choi matrix needs a map defined on a full matrix space")
    kr, kc = phi.codomain_shape
    out = np.zeros((n * kr, n * kc), complex)
    unit = np.zeros((n, n), complex)
    for i in range(n):
        for j in range(n):
            unit[i, j] = 1.0
            out[i * kr : (i + 1) * kr, j * kc : (j + 1) * kc] = phi.apply(unit, tol)
            unit[i, j] = 0.0
    return out


# ---------------------------------------------------------------------------
# Paulsen-system feasibility program


def _corner_embed(x, m, n, where) -> np.ndarray:
    out = np.zeros((m + n, m + n), complex)
    if where == "11":
        out[:m, :m] = x
    elif where == "22":
        out[m:, m:] = x
    elif where == "12":
        out[:m, m:] = x
    else:
        out[m:, :m] = x
    return out


def _paulsen_constraints(phi: LinearMapOnSubspace):
    """Hermitian, HS-orthonormal pinned directions and their target images."""
    m, n = phi.domain.shape
    kr, kc = phi.codomain_shape
    gs, targets = [], []
    gs.append(_corner_embed(np.eye(m), m, n, "11") / np.sqrt(m))
    targets.append(_corner_embed(np.eye(kr), kr, kc, "11") / np.sqrt(m))
    gs.append(_corner_embed(np.eye(n), m, n, "22") / np.sqrt(n))
    targets.append(_corner_embed(np.eye(kc), kr, kc, "22") / np.sqrt(n))
    for s, ts in zip(phi.domain.basis, phi.images):
        up = _corner_embed(s, m, n, "12")
        dn = _corner_embed(s.conj().T, m, n, "21")
        t_up = _corner_embed(ts, kr, kc, "12")
        t_dn = _corner_embed(ts.conj().T, kr, kc, "21")
        gs.append((up + dn) / np.sqrt(2))
        targets.append((t_up + t_dn) / np.sqrt(2))
        gs.append((1j * up - 1j * dn) / np.sqrt(2))
        targets.append((1j * t_up - 1j * t_dn) / np.sqrt(2))
    return np.stack(gs), np.stack(targets)


def _pinned_values(c4, gs) -> np.ndarray:
    # block combination sum_ij g_ij C_ij per pinned direction
    return np.einsum("gij,iujv->guv", gs, c4)


def _affine_project(c4, gs, targets) -> np.ndarray:
    viol = _pinned_values(c4, gs) - targets
    return c4 - np.einsum("gij,guv->iujv", gs.conj(), viol)


def _psd_project(c: np.ndarray) -> np.ndarray:
    h = (c + c.conj().T) / 2.0
    w, v = np.linalg.eigh(h)
    w = np.clip(w, 0.0, None)
    out = (v * w) @ v.conj().T
    return (out + out.conj().T) / 2.0


def _constraint_residual(c4, gs, targets) -> float:
    viol = _pinned_values(c4, gs) - targets
    return float(np.sqrt(np.einsum("guv,guv->", viol, viol.conj()).real))


def _dykstra_feasibility(gs, targets, ni, no, tol, max_iter):
    """Dykstra between the PSD cone and the pinned affine set.

    Returns (status, point, residual) with status FEASIBLE, or UNDECIDED on
    stall / iteration cap.
    """
    shape4 = (ni, no, ni, no)
    c4 = np.einsum("gij,guv->iujv", gs.conj(), targets)  # least-norm affine point
    q = np.zeros(shape4, complex)
    best = np.inf
    best_point = None
    window = 250
    last_improvement = 0
    for it in range(max_iter):
        y4 = _affine_project(c4, gs, targets)
        y = y4.reshape(ni * no, ni * no)
        # the affine iterate satisfies the constraints exactly; it certifies
        # feasibility as soon as it is (almost) positive semidefinite
        ymin = float(np.linalg.eigvalsh((y + y.conj().T) / 2.0).min())
        if ymin >= -min(tol.psd_tol, tol.sdp_tol):
            return FEASIBLE, _psd_project(y), max(0.0, -ymin)
        z = _psd_project((y4 + q).reshape(ni * no, ni * no))
        z4 = z.reshape(shape4)
        q = y4 + q - z4
        res = _constraint_residual(z4, gs, targets)
        if res < best * (1.0 - 1e-4):
            best, best_point, last_improvement = res, z, it
        if res <= tol.sdp_tol:
            return FEASIBLE, z, res
        if it - last_improvement > window and best > 10.0 * tol.sdp_tol:
            return UNDECIDED, best_point, best
        c4 = z4
    return UNDECIDED, best_point, best


# ---------------------------------------------------------------------------
# fast feasibility certificate: phi(x) = u x v with contractions u, v


def _polar_unitary(m: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def _fit_conjugation_pair(phi: LinearMapOnSubspace, tol: ToleranceConfig, seed: int):
    """Search for contractions u, v with phi(x) = u x v on the domain basis.

    Tries unitary pairs first (alternating polar factors, which solves the
    Procrustes step exactly), then an unconstrained alternating
    least-squares whose factors happen to balance into contractions.
    """
    m, n = phi.domain.shape
    kr, kc = phi.codomain_shape
    basis = list(phi.domain.basis)
    images = [as_matrix(t) for t in phi.images]
    if not basis:
        return np.zeros((kr, m), complex), np.zeros((n, kc), complex)
    scale = max(1.0, np.sqrt(sum(hs_norm(t) ** 2 for t in images)))
    rng = np.random.default_rng(seed)

    def fit_of(u, v):
        return np.sqrt(sum(hs_norm(u @ s @ v - t) ** 2 for s, t in zip(basis, images)))

    if m == kr and n == kc:
        starts = [np.eye(n, dtype=complex)]
        for _ in range(6):
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            starts.append(_polar_unitary(g))
        for v in starts:
            u = np.eye(m, dtype=complex)
            for _ in range(120):
                u = _polar_unitary(sum(t @ (s @ v).conj().T for s, t in zip(basis, images)))
                v = _polar_unitary(sum((u @ s).conj().T @ t for s, t in zip(basis, images)))
                if fit_of(u, v) <= 1e-11 * scale:
                    return u, v

    for trial in range(6):
        v = (
            np.eye(n, kc, dtype=complex)
            if trial == 0
            else rng.standard_normal((n, kc)) + 1j * rng.standard_normal((n, kc))
        )
        u = np.zeros((kr, m), complex)
        for _ in range(60):
            a = np.hstack([s @ v for s in basis])
            b = np.hstack(images)
            u = np.linalg.lstsq(a.T, b.T, rcond=None)[0].T
            a2 = np.vstack([u @ s for s in basis])
            b2 = np.vstack(images)
            v = np.linalg.lstsq(a2, b2, rcond=None)[0]
            fit = fit_of(u, v)
            if fit <= 1e-11 * scale:
                break
        else:
            continue
        nu, nv = op_norm(u), op_norm(v)
        if nu == 0 or nv == 0:
            return u, v
        if nu * nv <= 1.0 + tol.eq_tol:
            t = np.sqrt(nv / nu)
            return u * t, v / t
    return None


def _conjugation_choi(phi: LinearMapOnSubspace, u, v) -> np.ndarray:
    """Choi matrix of the unital 2x2 completion of x -> u x v."""
    m, n = phi.domain.shape
    kr, kc = phi.codomain_shape
    ni, no = m + n, kr + kc
    pad1 = np.eye(kr) - u @ u.conj().T
    pad2 = np.eye(kc) - v.conj().T @ v
    r = np.zeros((no, ni), complex)
    r[:kr, :m] = u
    r[kr:, m:] = v.conj().T
    out = np.zeros((ni * no, ni * no), complex)
    unit = np.zeros((ni, ni), complex)
    for i in range(ni):
        for j in range(ni):
            unit[i, j] = 1.0
            img = r @ unit @ r.conj().T
            if i == j:
                if i < m:
                    img[:kr, :kr] += pad1 / m
                else:
                    img[kr:, kr:] += pad2 / n
            out[i * no : (i + 1) * no, j * no : (j + 1) * no] = img
            unit[i, j] = 0.0
    return out


# ---------------------------------------------------------------------------
# violation search


def _apply_from_coeffs(phi, coeffs):
    stack = phi.image_stack
    return np.einsum("k,kij->ij", coeffs, stack)


def _ratio(phi, level, coeffs):
    """coeffs: (level, level, dim) block coefficients; returns (ratio, X, Y)."""
    m, n = phi.domain.shape
    kr, kc = phi.codomain_shape
    dstack = phi.domain.stack
    x = np.zeros((level * m, level * n), complex)
    y = np.zeros((level * kr, level * kc), complex)
    for u in range(level):
        for v in range(level):
            x[u * m : (u + 1) * m, v * n : (v + 1) * n] = np.einsum("k,kij->ij", coeffs[u, v], dstack)
            y[u * kr : (u + 1) * kr, v * kc : (v + 1) * kc] = _apply_from_coeffs(phi, coeffs[u, v])
    nx = op_norm(x)
    if nx == 0.0:
        return 0.0, x, y
    return op_norm(y) / nx, x, y


def _polish(phi, level, coeffs, steps=6):
    best = _ratio(phi, level, coeffs)
    kr, kc = phi.codomain_shape
    istack = phi.image_stack
    for _ in range(steps):
        _, _, y = _ratio(phi, level, coeffs)
        uu, ss, vv = np.linalg.svd(y)
        if ss.size == 0 or ss[0] == 0:
            break
        grad = np.outer(uu[:, 0], vv[0].conj())
        w = np.empty_like(coeffs)
        for u in range(level):
            for v in range(level):
                block = grad[u * kr : (u + 1) * kr, v * kc : (v + 1) * kc]
                w[u, v] = np.einsum("kij,ij->k", istack.conj(), block)
        norm = np.linalg.norm(w)
        if norm == 0:
            break
        coeffs = w.conj() / norm
        cand = _ratio(phi, level, coeffs)
        if cand[0] > best[0]:
            best = cand
    return best


def _violation_search(phi: LinearMapOnSubspace, tol: ToleranceConfig, seed: int):
    d = phi.domain.dim
    if d == 0:
        return None
    m, n = phi.domain.shape
    kr, kc = phi.codomain_shape
    rng = np.random.default_rng(seed)
    best_ratio, best_x = 0.0, None

    def consider(ratio_x):
        nonlocal best_ratio, best_x
        ratio, x, _ = ratio_x
        if ratio > best_ratio:
            best_ratio, best_x = ratio, x

    for i in range(d):
        c = np.zeros((1, 1, d), complex)
        c[0, 0, i] = 1.0
        consider(_ratio(phi, 1, c))
    for _ in range(12):
        c = rng.standard_normal((1, 1, d)) + 1j * rng.standard_normal((1, 1, d))
        consider(_polish(phi, 1, c, steps=4))
    top = min(max(kr, kc, 2), 4)
    for level in range(2, top + 1):
        if m == n and level == m:
            # blockwise projection of the transpose pattern e_vu at block (u, v)
            c = np.zeros((level, level, d), complex)
            unit = np.zeros((m, n), complex)
            for u in range(level):
                for v in range(level):
                    unit[v, u] = 1.0
                    c[u, v] = phi.domain.coeffs(unit)
                    unit[v, u] = 0.0
            consider(_polish(phi, level, c))
        for _ in range(12):
            c = rng.standard_normal((level, level, d)) + 1j * rng.standard_normal((level, level, d))
            consider(_polish(phi, level, c))
    if best_ratio > 1.0 + tol.sdp_tol:
        return best_ratio, best_x
    return None


# ---------------------------------------------------------------------------
# public decisions


def is_completely_contractive(
    phi: LinearMapOnSubspace, tol: ToleranceConfig | None = None, seed: int = 0
) -> FeasibilityOutcome:
    """Decide whether phi has completely bounded norm at most one.

    Tries an explicit conjugation certificate, then a search for violating
    amplified elements, then the Dykstra feasibility program.  UNDECIDED is
    returned when neither a certificate nor a violation appears within the
    iteration budget.
    """
    tol = tol or DEFAULT_TOL
    gs, targets = _paulsen_constraints(phi)
    m, n = phi.domain.shape
    kr, kc = phi.codomain_shape
    ni, no = m + n, kr + kc

    pair = _fit_conjugation_pair(phi, tol, seed)
    if pair is not None:
        witness = _conjugation_choi(phi, *pair)
        w4 = witness.reshape(ni, no, ni, no)
        res = _constraint_residual(w4, gs, targets)
        eigs = np.linalg.eigvalsh((witness + witness.conj().T) / 2.0)
        if res <= tol.sdp_tol and (eigs.size == 0 or eigs.min() >= -tol.psd_tol):
            return FeasibilityOutcome(FEASIBLE, witness, res, "conjugation certificate")

    found = _violation_search(phi, tol, seed)
    if found is not None:
        ratio, x = found
        return FeasibilityOutcome(INFEASIBLE, x, ratio - 1.0, f"amplified norm ratio {ratio:.6g}")

    status, point, res = _dykstra_feasibility(gs, targets, ni, no, tol, tol.max_iter)
    if status == FEASIBLE:
        return FeasibilityOutcome(FEASIBLE, point, res, "alternating projections")
    return FeasibilityOutcome(UNDECIDED, point, res, "feasibility iteration stalled or hit its cap")


def inverse_map(phi: LinearMapOnSubspace, tol: ToleranceConfig | None = None) -> LinearMapOnSubspace:
    """Inverse of an injective map, defined on the span of its images."""
    tol = tol or DEFAULT_TOL
    d = phi.domain.dim
    image_space = orthonormalize(list(phi.images), tol, shape=phi.codomain_shape)
    if image_space.dim != d:
        raise ValueError("map is not injective on its domain")
    rows = np.stack([t.ravel() for t in phi.images])
    preimages = []
    for f in image_space.basis:
        alpha, *_ = np.linalg.lstsq(rows.T, f.ravel(), rcond=None)
        preimages.append(np.einsum("k,kij->ij", alpha, phi.domain.stack))
    return LinearMapOnSubspace(image_space, tuple(preimages), phi.domain.shape)


def is_complete_isometry(
    phi: LinearMapOnSubspace, tol: ToleranceConfig | None = None, seed: int = 0
) -> FeasibilityOutcome:
    """Complete contractivity of phi and of its inverse on the image."""
    tol = tol or DEFAULT_TOL
    inv = inverse_map(phi, tol)
    fwd = is_completely_contractive(phi, tol, seed)
    if fwd.status == INFEASIBLE:
        return FeasibilityOutcome(INFEASIBLE, fwd.witness, fwd.residual, "forward: " + fwd.notes)
    bwd = is_completely_contractive(inv, tol, seed + 1)
    if bwd.status == INFEASIBLE:
        return FeasibilityOutcome(INFEASIBLE, bwd.witness, bwd.residual, "inverse: " + bwd.notes)
    if FEASIBLE == fwd.status == bwd.status:
        return FeasibilityOutcome(FEASIBLE, fwd.witness, max(fwd.residual, bwd.residual), "both directions")
    return FeasibilityOutcome(UNDECIDED, None, max(fwd.residual, bwd.residual), "one direction undecided")


def is_symmetric_space(
    space: Subspace, tol: ToleranceConfig | None = None, seed: int = 0
) -> FeasibilityOutcome:
    """Does entrywise transposition preserve all matrix norms on this subspace?"""
    tol = tol or DEFAULT_TOL
    if space.ambient_rows != space.ambient_cols:
        raise ValueError("symmetry is defined for subspaces of a square matrix space")
    if space.dim == 0:
        return FeasibilityOutcome(FEASIBLE, None, 0.0, "zero subspace")
    transpose = LinearMapOnSubspace(space, tuple(b.T for b in space.basis), space.shape)
    return is_complete_isometry(transpose, tol, seed)


# ---------------------------------------------------------------------------
# operator-norm minimization over an affine set of matrices


@dataclass(frozen=True, eq=False)
class AffineMatrixSet:
    """particular + real span of directions; residual is the relative
    inconsistency of the defining equations."""

    particular: np.ndarray
    directions: tuple
    residual: float


@dataclass(frozen=True, eq=False)
class MinNormResult:
    status: str  # "OK" | "INCONSISTENT"
    min_norm: float
    argmin: np.ndarray | None
    certified: bool


def affine_from_equations(space: Subspace, eq_matrix, rhs, tol: ToleranceConfig | None = None) -> AffineMatrixSet:
    """Solution set of complex-linear equations on coefficients over a subspace."""
    tol = tol or DEFAULT_TOL
    eq_matrix = np.asarray(eq_matrix, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex).ravel()
    if eq_matrix.shape != (rhs.size, space.dim):
        raise ValueError("equation matrix must be (n_equations, subspace dim)")
    if eq_matrix.size == 0:
        sol = np.zeros(space.dim, complex)
        raw = 0.0
    else:
        sol, *_ = np.linalg.lstsq(eq_matrix, rhs, rcond=None)
        raw = float(np.linalg.norm(eq_matrix @ sol - rhs))
    residual = raw / max(1.0, float(np.linalg.norm(rhs)))
    if eq_matrix.size == 0:
        null = np.eye(space.dim, dtype=complex)
    else:
        null = null_space(eq_matrix, tol.eq_tol, min_scale=1.0)
    particular = space.from_coeffs(sol)
    directions = []
    for c in null:
        base = space.from_coeffs(c)
        directions.extend([base, 1j * base])
    return AffineMatrixSet(particular, tuple(directions), residual)


def _project_affine_block(w, particular, dstack):
    if dstack is None:
        return particular
    delta = w - particular
    coeff = np.einsum("kij,ij->k", dstack.conj(), delta).real
    return particular + np.einsum("k,kij->ij", coeff, dstack)


def _opnorm_feasible(t, particular, dstack, tol, max_iter, start=None):
    """Is there w in the affine set with operator norm at most t?

    Returns (verdict, w, ambiguous): verdict None means the run hit its cap
    without either converging or clearly stalling.
    """
    m, n = particular.shape
    big = np.zeros((m + n, m + n), complex)
    w0 = start if start is not None else particular
    big[:m, m:] = w0
    big[m:, :m] = w0.conj().T
    big[:m, :m] = t * np.eye(m)
    big[m:, m:] = t * np.eye(n)
    q = np.zeros_like(big)
    best = np.inf
    best_w = None
    last_improvement = 0
    window = 200
    for it in range(max_iter):
        w_proj = _project_affine_block(big[:m, m:], particular, dstack)
        y = np.zeros_like(big)
        y[:m, :m] = t * np.eye(m)
        y[m:, m:] = t * np.eye(n)
        y[:m, m:] = w_proj
        y[m:, :m] = w_proj.conj().T
        z = _psd_project(y + q)
        q = y + q - z
        w_z = _project_affine_block(z[:m, m:], particular, dstack)
        res = np.sqrt(
            hs_norm(z[:m, :m] - t * np.eye(m)) ** 2
            + hs_norm(z[m:, m:] - t * np.eye(n)) ** 2
            + 2.0 * hs_norm(z[:m, m:] - w_z) ** 2
        )
        if res <= tol.sdp_tol:
            return True, w_z, False
        if res < best * (1.0 - 1e-4):
            best, best_w, last_improvement = res, w_z, it
        if it - last_improvement > window and best > 10.0 * tol.sdp_tol:
            return False, best_w, False
        big = z
    return False, best_w, True


def min_opnorm_affine(aset: AffineMatrixSet, tol: ToleranceConfig | None = None) -> MinNormResult:
    """Minimize the operator norm over an affine set of matrices.

    INCONSISTENT when the defining equations had no solution.  With a
    zero-dimensional solution set the answer is exact; otherwise a bisection
    on t over PSD feasibility of [[t I, w], [w*, t I]] runs to sdp_tol.
    """
    tol = tol or DEFAULT_TOL
    if aset.residual > tol.eq_tol:
        return MinNormResult("INCONSISTENT", np.inf, None, True)
    w0 = aset.particular
    if not aset.directions:
        return MinNormResult("OK", op_norm(w0), w0, True)
    dstack = np.stack(aset.directions)
    hi = op_norm(w0)
    lo = 0.0
    best_w = w0
    certified = True
    if hi <= tol.sdp_tol:
        return MinNormResult("OK", hi, w0, True)
    per_call = max(2000, tol.max_iter // 10)
    steps = 0
    while hi - lo > tol.sdp_tol and steps < 80:
        steps += 1
        t = 0.5 * (lo + hi)
        ok, w, ambiguous = _opnorm_feasible(t, aset.particular, dstack, tol, per_call, start=best_w)
        if ok:
            best_w = w
            hi = min(t, op_norm(w))
        else:
            lo = t
            if ambiguous:
                certified = False
    return MinNormResult("OK", op_norm(best_w), best_w, certified)
