"""Optimization over product vectors and over the PPT state body.

The workhorse is a see-saw iteration for

    min <u,v| X |u,v>   over unit product vectors,

which alternates exact eigensolves of the two conditioned matrices.
Each half-step is a global minimization over one factor, so the
objective is non-increasing; the iteration is run from many seeded
restarts and merged deterministically.

Also here: an exhaustive grid oracle used to cross-check the see-saw on
small instances, a projected-gradient search for PPT states with
negative witness expectation, and an alternating-projection
decomposition attempt W = P + Q^Gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    DENSE_SIDE_CAP,
    DimensionError,
    HermitianOperator,
    ProductVector,
    conditioned_matrix,
)
from .sampling import random_density, random_unit_vector, rng_for
from .structured import IdentityFactor, StructuredOperator

__all__ = [
    "DecompositionResult",
    "MinProdResult",
    "OptimizerConfig",
    "PPTSearchResult",
    "PPTViolation",
    "attempt_decomposition",
    "collect_zero_products",
    "decomposition_search",
    "find_ppt_violation",
    "grid_oracle_minprod",
    "max_product_expectation",
    "min_product_expectation",
    "ppt_violation_search",
    "spanning_rank",
]


@dataclass(frozen=True)
class OptimizerConfig:
    """Shared knobs for the iterative searches.

    tol_converge is the relative objective change per sweep that counts
    as converged; tol_zero is the magnitude below which an expectation
    is treated as an exact zero (weak-optimality threshold).
    """

    restarts: int = 64
    seed: int = 0
    tol_converge: float = 1e-12
    tol_zero: float = 1e-7
    max_sweeps: int = 1000
    track_history: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.tol_converge <= 0 or self.tol_zero <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")


@dataclass(frozen=True)
class MinProdResult:
    """Best product-expectation value found and where it was attained.

    ``converged`` reports whether the winning restart met the sweep
    tolerance before hitting max_sweeps; a cap-limited restart is never
    silently promoted.  For max_product_expectation the same container
    is returned with maximization semantics (value is the max, argmin
    holds the argmax).
    """

    value: float
    argmin: ProductVector
    converged: bool
    restarts_used: int
    history: tuple = ()


# ---------------------------------------------------------------------------
# bipartite kernels: dense matrices and split structured operators
# ---------------------------------------------------------------------------


class _DenseKernel:
    def __init__(self, X):
        if len(X.dims) != 2:
            raise DimensionError(
                f"see-saw needs a bipartite operator, got dims {X.dims}; "
                "regroup with with_dims first"
            )
        self.d_a, self.d_b = X.dims
        self.op = X

    def cond_a(self, u):
        return conditioned_matrix(self.op, "A", u)

    def cond_b(self, v):
        return conditioned_matrix(self.op, "B", v)

    def negated(self):
        return _DenseKernel(-self.op)


class _StructuredKernel:
    """Structured operator split as (left half) (x) (right half).

    Every term's factor list must hit the bipartition boundary exactly;
    per-term dense blocks for both halves are then precomputed, so each
    conditioned matrix costs one quadratic form and one weighted sum.
    A single factor covering the whole space is allowed on a balanced
    bipartition when it supplies its conditioned matrix in closed form
    (``bridge_cond``).
    """

    def __init__(self, S, dims=None, _blocks=None):
        total = S.total_dim
        if dims is None:
            root = math.isqrt(total)
            if root * root != total:
                raise DimensionError(
                    "cannot infer a bipartition; pass dims=(d_left, d_right)"
                )
            dims = (root, root)
        d_a, d_b = dims
        if d_a * d_b != total:
            raise DimensionError(f"bipartition {dims} does not tile {total}")
        if max(d_a, d_b) > DENSE_SIDE_CAP:
            raise DimensionError(
                f"see-saw halves {dims} exceed dense cap {DENSE_SIDE_CAP}"
            )
        self.d_a, self.d_b = d_a, d_b
        if _blocks is not None:
            self._blocks = _blocks
            return
        blocks = []
        for coeff, factors in S.terms:
            if (
                len(factors) == 1
                and factors[0].dim == total
                and d_a == d_b
                and hasattr(factors[0], "bridge_cond")
            ):
                blocks.append(("bridge", coeff, factors[0]))
                continue
            left, right, cum = [], [], 1
            for f in factors:
                (left if cum < d_a else right).append(f)
                cum *= f.dim
                if len(right) == 0 and cum > d_a:
                    raise DimensionError(
                        "a term factor straddles the see-saw bipartition"
                    )
            blocks.append(
                ("split", coeff, _chain_dense(left, d_a), _chain_dense(right, d_b))
            )
        self._blocks = tuple(blocks)

    def cond_a(self, u):
        M = np.zeros((self.d_b, self.d_b), dtype=np.complex128)
        for blk in self._blocks:
            if blk[0] == "split":
                _, coeff, L, R = blk
                M += (coeff * np.vdot(u, L @ u).real) * R
            else:
                M += blk[1] * blk[2].bridge_cond(u)
        return (M + M.conj().T) / 2.0

    def cond_b(self, v):
        M = np.zeros((self.d_a, self.d_a), dtype=np.complex128)
        for blk in self._blocks:
            if blk[0] == "split":
                _, coeff, L, R = blk
                M += (coeff * np.vdot(v, R @ v).real) * L
            else:
                M += blk[1] * blk[2].bridge_cond(v)
        return (M + M.conj().T) / 2.0

    def negated(self):
        neg = tuple((blk[0], -blk[1]) + blk[2:] for blk in self._blocks)
        return _StructuredKernel.__new__(_StructuredKernel)._init_neg(
            self.d_a, self.d_b, neg
        )

    def _init_neg(self, d_a, d_b, blocks):
        self.d_a, self.d_b, self._blocks = d_a, d_b, blocks
        return self


def _chain_dense(factors, expected_dim):
    out = np.array([[1.0 + 0j]])
    for f in factors:
        out = np.kron(out, np.eye(f.dim) if isinstance(f, IdentityFactor) else f.dense())
    if out.shape[0] != expected_dim:
        raise DimensionError(
            f"half factors multiply to {out.shape[0]}, expected {expected_dim}"
        )
    return out


def _make_kernel(X, dims=None):
    if isinstance(X, HermitianOperator):
        if dims is not None:
            X = X.with_dims(dims)
        return _DenseKernel(X)
    if isinstance(X, StructuredOperator):
        return _StructuredKernel(X, dims)
    raise TypeError(f"unsupported operand type {type(X).__name__}")


# ---------------------------------------------------------------------------
# see-saw
# ---------------------------------------------------------------------------


@dataclass
class _Restart:
    value: float
    u: np.ndarray
    v: np.ndarray
    converged: bool
    index: int
    history: tuple = ()


def _ground_pair(M):
    vals, vecs = np.linalg.eigh(M)
    return float(vals[0]), vecs[:, 0]


def _expect(kernel, u, v):
    return float(np.vdot(v, kernel.cond_a(u) @ v).real)


def _seesaw_restart(kernel, cfg, index):
    rng = rng_for(cfg.seed, index)
    u = random_unit_vector(rng, kernel.d_a)
    v = random_unit_vector(rng, kernel.d_b)
    value = _expect(kernel, u, v)
    history = [value]
    converged = False
    prev_sweep = value
    for _ in range(cfg.max_sweeps):
        for half in ("A", "B"):
            lam, vec = _ground_pair(kernel.cond_a(u) if half == "A" else kernel.cond_b(v))
            if lam > value + 1e-9 * (1.0 + abs(value)):
                raise RuntimeError(
                    "see-saw objective increased; conditioned matrix is inconsistent"
                )
            if half == "A":
                v = vec
            else:
                u = vec
            value = lam
            history.append(value)
        if abs(prev_sweep - value) <= cfg.tol_converge * (1.0 + abs(value)):
            converged = True
            break
        prev_sweep = value
    return _Restart(value, u, v, converged, index, tuple(history))


def _seesaw_all(X, cfg, dims=None):
    kernel = _make_kernel(X, dims)
    return [_seesaw_restart(kernel, cfg, k) for k in range(cfg.restarts)]


def min_product_expectation(X, cfg=None, dims=None):
    """Infimum of <u,v|X|u,v> over unit product vectors, via see-saw.

    X may be a bipartite ``HermitianOperator`` or a ``StructuredOperator``
    whose terms split across the bipartition (pass ``dims`` to override
    the inferred split).  Restart k draws its start from a generator
    seeded with (cfg.seed, k); results merge by minimum value with ties
    going to the lowest restart index, so runs are reproducible.
    """
    cfg = cfg or OptimizerConfig()
    runs = _seesaw_all(X, cfg, dims)
    best = min(runs, key=lambda r: (r.value, r.index))
    return MinProdResult(
        value=best.value,
        argmin=ProductVector(best.u, best.v),
        converged=best.converged,
        restarts_used=cfg.restarts,
        history=best.history if cfg.track_history else (),
    )


def max_product_expectation(X, cfg=None, dims=None):
    """sup <u,v|X|u,v>, computed as -min over the negated operator."""
    cfg = cfg or OptimizerConfig()
    if isinstance(X, HermitianOperator):
        neg = -X
    elif isinstance(X, StructuredOperator):
        neg = X.scaled(-1.0)
    else:
        raise TypeError(f"unsupported operand type {type(X).__name__}")
    res = min_product_expectation(neg, cfg, dims)
    return MinProdResult(
        value=-res.value,
        argmin=res.argmin,
        converged=res.converged,
        restarts_used=res.restarts_used,
        history=tuple(-h for h in res.history),
    )


def collect_zero_products(X, cfg=None, dims=None):
    """Distinct product vectors where the expectation of X vanishes.

    Runs every see-saw restart, keeps converged runs with |value| <=
    cfg.tol_zero, and deduplicates by product-vector overlap (two hits
    count as one when |<u,v|u',v'>| >= 1 - 1e-6).
    """
    cfg = cfg or OptimizerConfig()
    kept = []
    for run in sorted(_seesaw_all(X, cfg, dims), key=lambda r: r.index):
        if not run.converged or abs(run.value) > cfg.tol_zero:
            continue
        pv = ProductVector(run.u, run.v)
        if all(pv.overlap(other) < 1.0 - 1e-6 for other in kept):
            kept.append(pv)
    return kept


def spanning_rank(products, dims):
    """Numerical rank of the span of the product kets |u>|v>."""
    if not products:
        return 0
    rows = np.array([pv.kron() for pv in products])
    s = np.linalg.svd(rows, compute_uv=False)
    return int(np.count_nonzero(s > 1e-8 * s[0]))


# ---------------------------------------------------------------------------
# exhaustive grid oracle (test cross-check; O(1/resolution) accuracy)
# ---------------------------------------------------------------------------


def _qubit_grid(resolution):
    theta = np.linspace(0.0, np.pi / 2.0, resolution)
    phi = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    v0 = np.cos(t).ravel().astype(np.complex128)
    v1 = (np.sin(t) * np.exp(1j * p)).ravel()
    return np.stack([v0, v1], axis=1)


def _qutrit_grid(resolution):
    theta = np.linspace(0.0, np.pi / 2.0, resolution)
    phi = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
    t1, t2, p1, p2 = np.meshgrid(theta, theta, phi, phi, indexing="ij")
    v0 = np.cos(t1).ravel().astype(np.complex128)
    v1 = (np.sin(t1) * np.cos(t2)).ravel() * np.exp(1j * p1.ravel())
    v2 = (np.sin(t1) * np.sin(t2)).ravel() * np.exp(1j * p2.ravel())
    return np.stack([v0, v1, v2], axis=1)


def _pair_features(V):
    """Real features [ |v_k|^2 ..., Re/Im(conj(v_k) v_l) for k<l ]."""
    d = V.shape[1]
    cols = [np.abs(V[:, k]) ** 2 for k in range(d)]
    for k in range(d):
        for l in range(k + 1, d):
            t = V[:, k].conj() * V[:, l]
            cols.append(t.real)
            cols.append(t.imag)
    return np.stack(cols, axis=1)


def _matrix_features(M_all):
    """Row features matching _pair_features so that E = fM . fV."""
    d = M_all.shape[1]
    cols = [M_all[:, k, k].real for k in range(d)]
    for k in range(d):
        for l in range(k + 1, d):
            cols.append(2.0 * M_all[:, k, l].real)
            cols.append(-2.0 * M_all[:, k, l].imag)
    return np.stack(cols, axis=1)


def _qubit_v_scan(fU, resolution):
    """Grid minimum over the qubit v grid with the phase reduced exactly.

    At fixed u and v angle t, the expectation is A cos^2 t + B sin^2 t
    + 2 cos t sin t Re(M01 e^{i phi}); over the uniform phase grid the
    last factor reaches min_k cos(phi_k + delta) = -cos(e), with e the
    distance from pi - delta to the nearest grid point, so the phase
    axis never needs enumerating.
    """
    A, B = fU[:, 0], fU[:, 1]
    m_re, m_im = 0.5 * fU[:, 2], -0.5 * fU[:, 3]
    R = np.hypot(m_re, m_im)
    delta = np.arctan2(m_im, m_re)
    h = 2.0 * np.pi / resolution
    d = np.mod(np.pi - delta, h)
    off = 2.0 * R * (-np.cos(np.minimum(d, h - d)))
    theta = np.linspace(0.0, np.pi / 2.0, resolution)
    c2, s2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    cs = np.cos(theta) * np.sin(theta)
    best = np.inf
    chunk = max(1, 2**22 // resolution)
    for lo in range(0, fU.shape[0], chunk):
        block = (
            np.outer(A[lo : lo + chunk], c2)
            + np.outer(B[lo : lo + chunk], s2)
            + np.outer(off[lo : lo + chunk], cs)
        )
        best = min(best, float(block.min()))
    return best


def grid_oracle_minprod(X, resolution=64):
    """Brute-force grid minimum of the product expectation.

    Supports d_A = 2 with d_B in {2, 3}.  The u grid is
    (cos t, e^{i p} sin t); the v grid adds a second angle/phase pair
    for d_B = 3 (resolution^4 points -- large resolutions get slow
    there).  Accuracy is O(1/resolution); resolutions of 64 and up make
    the oracle trustworthy as an independent cross-check.
    """
    if len(X.dims) != 2 or X.dims[0] != 2 or X.dims[1] not in (2, 3):
        raise DimensionError(f"grid oracle supports dims (2,2) or (2,3), got {X.dims}")
    resolution = int(resolution)
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    d_b = X.dims[1]
    U = _qubit_grid(resolution)
    tens = X.entries.reshape(2, d_b, 2, d_b)
    M_all = np.einsum("ai,ijkl,ak->ajl", U.conj(), tens, U, optimize=True)
    fU = _matrix_features(M_all)
    if d_b == 2:
        return _qubit_v_scan(fU, resolution)
    fV = _pair_features(_qutrit_grid(resolution)).T  # (nf, nV)
    best = np.inf
    chunk = max(1, 2**22 // fV.shape[1])  # keep E blocks ~32 MB
    for lo in range(0, fU.shape[0], chunk):
        E = fU[lo : lo + chunk] @ fV
        best = min(best, float(E.min()))
    return best


# ---------------------------------------------------------------------------
# PPT-body search: projected gradient with Dykstra projections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PPTViolation:
    """A PPT state with negative witness expectation.

    The state is a certificate of non-decomposability (and of bound
    entanglement of the state itself); absence of one proves nothing.
    """

    state: HermitianOperator
    value: float


@dataclass(frozen=True)
class PPTSearchResult:
    violation: object  # PPTViolation | None
    best_value: float
    converged: bool
    starts_used: int


def _pt2(arr, dims):
    d_a, d_b = dims
    return (
        arr.reshape(d_a, d_b, d_a, d_b)
        .swapaxes(1, 3)
        .reshape(d_a * d_b, d_a * d_b)
    )


def _psd_clip(arr):
    vals, vecs = np.linalg.eigh((arr + arr.conj().T) / 2.0)
    vals = np.clip(vals, 0.0, None)
    return (vecs * vals) @ vecs.conj().T


def _project_ppt_body(arr, dims, max_cycles=100, tol=1e-12):
    """Dykstra projection onto {rho >= 0} n {rho^Gamma >= 0} n {tr = 1}."""
    d = arr.shape[0]
    projections = (
        _psd_clip,
        lambda m: _pt2(_psd_clip(_pt2(m, dims)), dims),
        lambda m: m + ((1.0 - m.trace().real) / d) * np.eye(d),
    )
    x = (arr + arr.conj().T) / 2.0
    corrections = [np.zeros_like(x) for _ in projections]
    for _ in range(max_cycles):
        shift = 0.0
        for i, proj in enumerate(projections):
            y = proj(x + corrections[i])
            corrections[i] = x + corrections[i] - y
            shift = max(shift, float(np.abs(y - x).max()))
            x = y
        if shift <= tol:
            break
    return x


def ppt_violation_search(W, cfg=None, seeds=()):
    """Minimize tr(W rho) over PPT states by projected gradient.

    The objective is linear and the feasible body convex, so a fixed
    step 1/(2 ||W||_inf) with Dykstra projections converges to the
    global minimum; multiple starts (maximally mixed, caller seeds,
    then random densities up to cfg.restarts) guard against projection
    stalls.  Stops early once a converged start certifies a violation.
    """
    cfg = cfg or OptimizerConfig()
    if len(W.dims) != 2:
        raise DimensionError(f"PPT search needs a bipartite operator, got {W.dims}")
    dims = W.dims
    d = W.side
    w = W.entries
    evals = np.linalg.eigvalsh(w)
    if evals[0] >= -cfg.tol_zero:
        # tr(W rho) >= lambda_min >= -tol_zero for every state: no violation
        return PPTSearchResult(None, float(evals[0]), True, 0)
    step = 1.0 / (2.0 * float(np.abs(evals).max()))
    starts = [np.eye(d) / d]
    starts += [np.array(s.entries) for s in seeds]
    rng = rng_for(cfg.seed, 961)
    while len(starts) < cfg.restarts:
        starts.append(np.array(random_density(rng, dims).entries))
    best_value, best_state, any_converged = np.inf, None, False
    used = 0
    for start in starts:
        used += 1
        rho = _project_ppt_body(start, dims)
        obj = float((w @ rho).trace().real)
        converged = False
        recent = [obj]
        for _ in range(5000):
            rho = _project_ppt_body(rho - step * w, dims)
            obj = float((w @ rho).trace().real)
            recent.append(obj)
            if len(recent) > 10:
                recent.pop(0)
                if abs(recent[0] - recent[-1]) <= 1e-11 * (1.0 + abs(obj)):
                    converged = True
                    break
        if obj < best_value:
            best_value, best_state = obj, rho
        any_converged = any_converged or converged
        if converged and obj < -cfg.tol_zero:
            break
    violation = None
    if best_state is not None and best_value < -cfg.tol_zero:
        final = _project_ppt_body(best_state, dims, max_cycles=300, tol=1e-13)
        value = float((w @ final).trace().real)
        lam_rho = float(np.linalg.eigvalsh(final)[0])
        lam_pt = float(np.linalg.eigvalsh(_pt2(final, dims))[0])
        tr_gap = abs(final.trace().real - 1.0)
        if (
            value < -cfg.tol_zero
            and lam_rho >= -1e-8
            and lam_pt >= -1e-8
            and tr_gap <= 1e-10
        ):
            violation = PPTViolation(HermitianOperator(dims, final), value)
            best_value = value
    return PPTSearchResult(violation, best_value, any_converged, used)


def find_ppt_violation(W, cfg=None, seeds=()):
    """PPTViolation if the search certifies one, else None (inconclusive)."""
    return ppt_violation_search(W, cfg, seeds).violation


# ---------------------------------------------------------------------------
# decomposition attempt: alternating projections on W = P + Q^Gamma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionResult:
    P: object
    Q: object
    residual: float
    success: bool


def decomposition_search(W, residual_tol=1e-7, max_iters=5000):
    """Look for PSD P, Q with P + Q^Gamma = W.

    Alternates the exact projection onto the affine set
    {(P, Q): P + Q^Gamma = W} with eigenvalue clipping onto the PSD
    cones.  Success requires the affine residual ||P + Q^Gamma - W||_F
    <= residual_tol with both blocks PSD; hitting the iteration cap
    with a larger residual is inconclusive, not a proof of
    non-decomposability.
    """
    if len(W.dims) != 2:
        raise DimensionError(f"decomposition needs a bipartite operator, got {W.dims}")
    dims = W.dims
    w = W.entries
    P = _psd_clip(w)
    Q = np.zeros_like(w)
    residual = np.inf
    stall = 0
    for _ in range(max_iters):
        # exact projection onto the affine constraint
        R = (w - P - _pt2(Q, dims)) / 2.0
        P = P + R
        Q = Q + _pt2(R, dims)
        P = _psd_clip(P)
        Q = _psd_clip(Q)
        new_residual = float(np.linalg.norm(P + _pt2(Q, dims) - w))
        if new_residual <= residual_tol:
            residual = new_residual
            break
        stall = stall + 1 if abs(residual - new_residual) <= 1e-13 else 0
        residual = new_residual
        if stall >= 50:
            break
    success = residual <= residual_tol
    return DecompositionResult(
        HermitianOperator(dims, P), HermitianOperator(dims, Q), residual, success
    )


def attempt_decomposition(W, residual_tol=1e-7, max_iters=5000):
    """(P, Q) with W = P + Q^Gamma, or None if the search fails."""
    res = decomposition_search(W, residual_tol, max_iters)
    return (res.P, res.Q) if res.success else None
