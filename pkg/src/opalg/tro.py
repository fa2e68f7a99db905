"""Ternary rings of operators: generation, block form, envelopes.

A TRO is a subspace W with W W* W inside W.  Finite dimensional TROs are
unitarily equivalent to direct sums of rectangular matrix blocks; the block
form is read off from the center of the *-algebra generated by W W*.  The
injective envelope of a subspace is its generated TRO whenever that TRO is
simple; otherwise candidates are produced by deleting blocks and certifying
that the compression still embeds the input completely isometrically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import cb
from .algebra import MatrixAlgebra, verify_algebra
from .linalg import (
    DEFAULT_TOL,
    LinearMapOnSubspace,
    Subspace,
    ToleranceConfig,
    as_matrix,
    contains,
    hs_norm,
    identity_map,
    max_projection_residual,
    null_space,
    op_norm,
    orthonormalize,
    product_stack,
    sqrt_psd,
)

__all__ = [
    "TROSpace",
    "BlockStructure",
    "EnvelopeResult",
    "DegenerateDecompositionError",
    "generate_tro",
    "linking_algebra",
    "support_projections",
    "block_decompose",
    "is_simple_tro",
    "injective_envelope",
    "multiplicative_embed",
]


class DegenerateDecompositionError(ArithmeticError):
    """Raised when repeated random center samples fail to separate blocks."""


@dataclass(frozen=True, eq=False)
class TROSpace:
    space: Subspace
    closure_residual: float

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> tuple:
        return self.space.basis


def _ternary_products(w_stack: np.ndarray, tol: ToleranceConfig, shape) -> np.ndarray:
    """A stack spanning W W* W, computed through the pair space W W*."""
    adj = w_stack.conj().transpose(0, 2, 1)
    pair = orthonormalize(product_stack(w_stack, adj), tol, shape=(shape[0], shape[0]))
    return product_stack(pair.stack, w_stack)


def generate_tro(space: Subspace, tol: ToleranceConfig | None = None) -> TROSpace:
    """Smallest TRO containing the subspace: closure under (x, y, z) -> x y* z."""
    tol = tol or DEFAULT_TOL
    shape = space.shape
    cur = orthonormalize(space.stack, tol, shape=shape)
    for _ in range(shape[0] * shape[1] + 2):
        if cur.dim == 0:
            break
        triples = _ternary_products(cur.stack, tol, shape)
        nxt = orthonormalize(np.concatenate([cur.stack, triples]), tol, shape=shape)
        if nxt.dim == cur.dim:
            cur = nxt
            break
        cur = nxt
    if cur.dim == 0:
        return TROSpace(cur, 0.0)
    worst = max_projection_residual(cur, _ternary_products(cur.stack, tol, shape))
    return TROSpace(cur, worst)


def linking_algebra(space: Subspace, tol: ToleranceConfig | None = None) -> MatrixAlgebra:
    """The *-algebra generated by the products a b* (acting on the row side)."""
    tol = tol or DEFAULT_TOL
    m = space.ambient_rows
    seeds = product_stack(space.stack, space.stack.conj().transpose(0, 2, 1))
    closed = orthonormalize(seeds, tol, shape=(m, m))
    for _ in range(m * m + 2):
        if closed.dim == 0:
            break
        w = closed.stack
        extra = np.concatenate([product_stack(w, w), w.conj().transpose(0, 2, 1)])
        nxt = orthonormalize(np.concatenate([w, extra]), tol, shape=(m, m))
        if nxt.dim == closed.dim:
            closed = nxt
            break
        closed = nxt
    if closed.dim == 0:
        return MatrixAlgebra(closed, 0.0, tol)
    alg = verify_algebra(closed, tol)
    star_res = max_projection_residual(alg.space, alg.space.stack.conj().transpose(0, 2, 1))
    if star_res > tol.eq_tol:
        raise ArithmeticError("linking algebra failed to close under adjoints")
    return alg


def _range_projection(columns, tol):
    """Orthogonal projection onto the joint column space of the given matrices."""
    if not columns:
        return None
    stacked = np.hstack(columns)
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    rank = int(np.sum(s > tol.eq_tol * s[0])) if s.size and s[0] > 0 else 0
    basis = u[:, :rank]
    return basis @ basis.conj().T


def support_projections(w: TROSpace, tol: ToleranceConfig | None = None):
    """(p, q): projections onto the joint column and row spaces, with p x q = x."""
    tol = tol or DEFAULT_TOL
    m, n = w.space.shape
    if w.dim == 0:
        return np.zeros((m, m), complex), np.zeros((n, n), complex)
    p = _range_projection(list(w.basis), tol)
    q = _range_projection([x.conj().T for x in w.basis], tol)
    for x in w.basis:
        if hs_norm(p @ x @ q - x) > 10 * tol.eq_tol * max(1.0, hs_norm(x)):
            raise ArithmeticError("support projections do not reproduce the space")
    return p, q


@dataclass(frozen=True, eq=False)
class BlockStructure:
    """Rectangular block form of a TRO.

    ``left_unitary* . w . right_unitary`` is supported on diagonal rectangular
    blocks of the listed (rows, cols) shapes; the projections are the block
    supports in the original frame.
    """

    blocks: tuple
    left_unitary: np.ndarray
    right_unitary: np.ndarray
    row_offsets: tuple
    col_offsets: tuple
    left_projections: tuple
    right_projections: tuple


def _cluster(values, gap):
    order = np.argsort(values)
    groups = [[order[0]]]
    for idx in order[1:]:
        if values[idx] - values[groups[-1][-1]] <= gap:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return groups


def block_decompose(w: TROSpace, tol: ToleranceConfig | None = None, seed: int = 0) -> BlockStructure:
    """Unitaries putting the TRO into diagonal rectangular block form.

    Minimal central projections of the left linking algebra are separated by
    the spectrum of one random Hermitian center element; a fresh element is
    drawn when eigenvalues collide (up to ten retries).
    """
    tol = tol or DEFAULT_TOL
    m, n = w.space.shape
    if w.dim == 0:
        return BlockStructure((), np.eye(m, dtype=complex), np.eye(n, dtype=complex), (), (), (), ())
    link = linking_algebra(w.space, tol)
    p, q = support_projections(w, tol)
    # center of the linking algebra, solved as a commutation system in coefficients
    d = link.dim
    rows = []
    for b in link.basis:
        cols = [(x @ b - b @ x).ravel() for x in link.basis]
        rows.append(np.stack(cols, axis=1))
    big = np.vstack(rows)
    center_coeffs = null_space(big, tol.eq_tol, min_scale=1.0)
    center = [np.einsum("k,kij->ij", c, link.space.stack) for c in center_coeffs]
    r = len(center)
    if r == 0:
        raise ArithmeticError("linking algebra has an empty center")

    rng = np.random.default_rng(seed)
    last_error = None
    for _ in range(10):
        mu = rng.uniform(1.0, 2.0, r) + 1j * rng.uniform(-0.5, 0.5, r)
        h = sum(c_k * ck for c_k, ck in zip(mu, center))
        h = (h + h.conj().T) / 2.0  # the center is *-closed, so h stays central
        vals, vecs = np.linalg.eigh(h)
        gap = 1e-6 * max(1.0, float(np.abs(vals).max()))
        groups = _cluster(vals, gap)
        projections = []
        for g in groups:
            cols = vecs[:, g]
            proj = cols @ cols.conj().T
            mean = float(np.mean(vals[g]))
            if abs(mean) > gap:
                projections.append(proj)
        if len(projections) != r:
            last_error = f"expected {r} spectral blocks, found {len(projections)}"
            continue
        total = sum(projections)
        if hs_norm(total - p) > 1e-6 * max(1.0, hs_norm(p)):
            last_error = "spectral projections do not sum to the left support"
            continue
        break
    else:
        raise DegenerateDecompositionError(last_error or "no separating center element found")

    lefts, rights = [], []
    for pk in projections:
        qk = _range_projection([(pk @ x).conj().T for x in w.basis], tol)
        if qk is None:
            qk = np.zeros((n, n), complex)
        lefts.append(pk)
        rights.append(qk)
    # deterministic block order: by size, then by first supported row
    def block_key(idx):
        pk = lefts[idx]
        first_row = int(np.argmax(np.abs(np.diag(pk)) > 0.5))
        return (-int(round(np.trace(lefts[idx]).real)), first_row)

    order = sorted(range(len(lefts)), key=block_key)
    lefts = [lefts[i] for i in order]
    rights = [rights[i] for i in order]

    def column_basis(proj):
        u, s, _ = np.linalg.svd(proj)
        rank = int(np.sum(s > 0.5))
        return u[:, :rank]

    left_cols = [column_basis(pk) for pk in lefts]
    right_cols = [column_basis(qk) for qk in rights]
    left_rest = column_basis(np.eye(m) - p)
    right_rest = column_basis(np.eye(n) - q)
    lu = np.hstack(left_cols + [left_rest]) if left_cols else np.hstack([left_rest])
    ru = np.hstack(right_cols + [right_rest]) if right_cols else np.hstack([right_rest])
    if lu.shape != (m, m) or ru.shape != (n, n):
        raise DegenerateDecompositionError("block supports do not fill the ambient space")

    blocks = tuple((lc.shape[1], rc.shape[1]) for lc, rc in zip(left_cols, right_cols))
    row_off, col_off = [], []
    ro = co = 0
    for nk, mk in blocks:
        row_off.append(ro)
        col_off.append(co)
        ro += nk
        co += mk
    # off-block mass must vanish
    for x in w.basis:
        rot = lu.conj().T @ x @ ru
        mask = np.ones_like(rot, dtype=bool)
        for (nk, mk), ro_k, co_k in zip(blocks, row_off, col_off):
            mask[ro_k : ro_k + nk, co_k : co_k + mk] = False
        if np.abs(rot[mask]).max(initial=0.0) > 1e-7 * max(1.0, hs_norm(x)):
            raise DegenerateDecompositionError("rotated space is not supported on its blocks")
    return BlockStructure(
        blocks, lu, ru, tuple(row_off), tuple(col_off), tuple(lefts), tuple(rights)
    )


def is_simple_tro(w: TROSpace, tol: ToleranceConfig | None = None, seed: int = 0) -> bool:
    """A TRO is simple when its block form has exactly one block."""
    return len(block_decompose(w, tol, seed).blocks) == 1


@dataclass(frozen=True, eq=False)
class EnvelopeResult:
    """A TRO envelope candidate for a subspace.

    EXACT means the generated TRO is simple, hence equal to the injective
    envelope.  Otherwise the best block-deletion candidate is returned with
    status CANDIDATE; the embedding maps the input into the envelope and is
    certified completely isometric.
    """

    envelope: TROSpace
    status: str  # "EXACT" | "CANDIDATE"
    deleted_blocks: tuple
    embedding: LinearMapOnSubspace
    blocks: BlockStructure


def injective_envelope(
    space: Subspace, tol: ToleranceConfig | None = None, seed: int = 0
) -> EnvelopeResult:
    """Generated TRO when simple; otherwise a maximal block-deletion candidate.

    Deletion candidates keep a subset of blocks and compress; a candidate is
    accepted only when the compression restricted to the input is a complete
    isometry.  Ties break toward more deletions, then lexicographic subsets.
    """
    tol = tol or DEFAULT_TOL
    w = generate_tro(space, tol)
    bs = block_decompose(w, tol, seed)
    if len(bs.blocks) == 1:
        return EnvelopeResult(w, "EXACT", (), identity_map(space), bs)

    r = len(bs.blocks)
    best = None  # (num_deleted, kept_subset, envelope, embedding)
    for keep_size in range(1, r):  # most deletions first
        for kept in itertools.combinations(range(r), keep_size):
            pl = sum(bs.left_projections[k] for k in kept)
            qr = sum(bs.right_projections[k] for k in kept)
            images = tuple(pl @ x @ qr for x in space.basis)
            emb = LinearMapOnSubspace(space, images, space.shape)
            stacked = np.stack([im.ravel() for im in images]) if images else np.zeros((0, 1))
            if images:
                svals = np.linalg.svd(stacked, compute_uv=False)
                if svals.size == 0 or svals[-1] <= tol.eq_tol * max(1.0, svals[0]):
                    continue  # compression kills part of the input
            outcome = cb.is_complete_isometry(emb, tol, seed)
            if outcome.status != cb.FEASIBLE:
                continue
            compressed = orthonormalize([pl @ x @ qr for x in w.basis], tol, shape=space.shape)
            cand_env = generate_tro(compressed, tol)
            cand = (r - keep_size, kept, cand_env, emb)
            if best is None or cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
                best = cand
        if best is not None:
            break  # found at this deletion count; smaller deletion counts are worse
    if best is None:
        return EnvelopeResult(w, "CANDIDATE", (), identity_map(space), bs)
    deleted = tuple(k for k in range(r) if k not in best[1])
    return EnvelopeResult(best[2], "CANDIDATE", deleted, best[3], bs)


def multiplicative_embed(
    z_space: TROSpace, z, tol: ToleranceConfig | None = None
) -> LinearMapOnSubspace:
    """Embed a TRO so the pairing x z* y becomes the ambient matrix product.

    The image of x is the 2x2 block matrix [[x z*, x (1 - z* z)^(1/2)], [0, 0]].
    This is a ternary morphism, and products of images realize x z* y.
    """
    tol = tol or DEFAULT_TOL
    z = as_matrix(z)
    if not contains(z_space.space, z, tol):
        raise ValueError("pairing element must lie in the TRO")
    if op_norm(z) > 1.0 + tol.eq_tol:
        raise ValueError("pairing element must be a contraction")
    m, n = z_space.space.shape
    defect = sqrt_psd(np.eye(n) - z.conj().T @ z, tol)

    def embed(x):
        out = np.zeros((m + n, m + n), complex)
        out[:m, :m] = x @ z.conj().T
        out[:m, m:] = x @ defect
        return out

    images = tuple(embed(x) for x in z_space.basis)
    phi = LinearMapOnSubspace(z_space.space, images, (m + n, m + n))
    # ternary morphism and multiplicativity against the pairing, on the basis
    for x in z_space.basis:
        for y in z_space.basis:
            px, py = phi.apply(x, tol), phi.apply(y, tol)
            prod = px @ py
            target = phi.apply(z_space.space.project(x @ z.conj().T @ y), tol)
            if hs_norm(prod - target) > 1e-6 * max(1.0, hs_norm(prod)):
                raise ArithmeticError("embedding failed to be multiplicative")
            for v in z_space.basis:
                tern = px @ phi.apply(v, tol).conj().T @ py
                target3 = phi.apply(z_space.space.project(x @ v.conj().T @ y), tol)
                if hs_norm(tern - target3) > 1e-6 * max(1.0, hs_norm(tern)):
                    raise ArithmeticError("embedding failed to be a ternary morphism")
    return phi
