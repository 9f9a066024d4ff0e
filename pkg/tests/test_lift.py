"""Four-copy constructions: dense cross-checks at small size, the
expectation identities behind the positivity argument, penalty
bookkeeping, and the promotion of touching vectors."""

import numpy as np
import pytest

from witnesskit.families import bell_state_witness
from witnesskit.lift import (
    MAX_LIFT_TOTAL,
    LiftedWitness,
    asym_penalty_constant,
    lift_state,
    lift_witness,
    negative_direction,
    operator_norm,
    projector_sandwich_gap,
    state_expectation_components,
    symmetric_expectation_gap,
)
from witnesskit.operators import (
    DimensionError,
    HermitianOperator,
    inf_norm,
)
from witnesskit.optimize import OptimizerConfig, min_product_expectation
from witnesskit.sampling import random_density, random_unit_vector, rng_for
from witnesskit.structured import (
    DenseFactor,
    IdentityFactor,
    StructuredOperator,
    SwapFactor,
    build_structural,
)
from witnesskit.witness import NotAWitnessError

CFG = OptimizerConfig(restarts=16, seed=0)


def _dense_witness_lift_reference(W, constant):
    """Independent dense form of the witness lift for small sources."""
    w = W.entries
    n = w.shape[0]
    w4 = np.kron(np.kron(w, w), np.kron(w, w))
    V = SwapFactor(n).dense()
    K = np.kron(V, V)
    Y = 0.5 * (w4 + w4 @ K)
    half = n * n
    S = SwapFactor(half).dense()
    return Y + constant * 0.5 * (np.eye(half * half) - S)


# ---------------------------------------------------------------------------
# operator norm
# ---------------------------------------------------------------------------


def test_operator_norm_zero_operator():
    Z = StructuredOperator((2, 2), [(0.0, (IdentityFactor(4),))])
    assert operator_norm(Z) == 0.0


def test_operator_norm_structural_atoms():
    assert operator_norm(build_structural("swap", 4)) == pytest.approx(1.0, abs=1e-7)
    assert operator_norm(build_structural("sym_projector", 2)) == pytest.approx(
        1.0, abs=1e-7
    )


def test_operator_norm_matches_dense():
    rng = rng_for(55)
    for side in (3, 16):
        X = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
        X = (X + X.conj().T) / 2.0
        S = StructuredOperator((side,), [(1.0, (DenseFactor(X),))])
        ref = float(np.abs(np.linalg.eigvalsh(X)).max())
        assert operator_norm(S) == pytest.approx(ref, rel=1e-6)


# ---------------------------------------------------------------------------
# witness lift
# ---------------------------------------------------------------------------


def test_lift_witness_requires_witness_source():
    with pytest.raises(NotAWitnessError):
        lift_witness(HermitianOperator.identity((2, 2)), cfg=CFG)


def test_lift_witness_budget():
    with pytest.raises(DimensionError):
        lift_witness(HermitianOperator.identity((3, 6)), cfg=CFG)


def test_lift_witness_reference_constant():
    W = bell_state_witness()
    lifted = lift_witness(W, cfg=CFG)
    assert lifted.space == (4, 4, 4, 4)
    assert lifted.source_kind == "witness"
    assert lifted.constant == pytest.approx(162.0 / 4096.0, abs=1e-15)
    assert lifted.y_norm == pytest.approx(81.0 / 4096.0, abs=1e-12)
    assert lifted.constant == pytest.approx(2.0 * inf_norm(W) ** 4, abs=1e-12)
    assert lifted.projector_invariance_gap <= 1e-12
    assert len(lifted.operator.terms) == 4


def test_lift_witness_dense_agreement():
    W = bell_state_witness()
    lifted = lift_witness(W, cfg=CFG)
    ref = _dense_witness_lift_reference(W, lifted.constant)
    np.testing.assert_allclose(lifted.operator.to_dense(), ref, atol=1e-12)


def test_lift_witness_expectation_identity_and_diagonal_floor():
    W = bell_state_witness()
    lifted = lift_witness(W, cfg=CFG)
    assert symmetric_expectation_gap(lifted, n_probes=50, seed=1) <= 1e-10
    rng = rng_for(57)
    for _ in range(200):
        u = random_unit_vector(rng, 16)
        assert lifted.operator.expectation(np.kron(u, u)) >= -1e-10


def test_lift_witness_keeps_negative_direction():
    W = bell_state_witness()
    lifted = lift_witness(W, cfg=CFG)
    vec, val = negative_direction(lifted)
    assert val <= -1e-4
    assert val == pytest.approx(-27.0 / 4096.0, abs=1e-12)
    assert lifted.operator.expectation(vec) == pytest.approx(val, abs=1e-12)


def test_lift_witness_product_floor_nonnegative():
    lifted = lift_witness(bell_state_witness(), cfg=CFG)
    mp = min_product_expectation(lifted.operator, CFG)
    assert mp.value >= -1e-7


def test_lift_witness_scaling_covariance():
    W = bell_state_witness()
    base = lift_witness(W, cfg=CFG)
    scaled = lift_witness(3.0 * W, cfg=CFG)
    assert scaled.constant == pytest.approx(81.0 * base.constant, rel=1e-12)
    assert scaled.y_norm == pytest.approx(81.0 * base.y_norm, rel=1e-12)


def test_lift_witness_constant_override_and_guard():
    W = bell_state_witness()
    lifted = lift_witness(W, C=0.05, cfg=CFG)
    assert lifted.constant == 0.05
    with pytest.raises(ValueError):
        lift_witness(W, C=0.001, cfg=CFG)  # below the symmetric-part norm


def test_lift_inherits_touching_vector():
    # the half swap is itself a weakly optimal witness; its touching
    # vectors promote to exact zeros of the lift
    V = HermitianOperator((2, 2), SwapFactor(2).dense())
    lifted = lift_witness(V, cfg=CFG)
    z = np.zeros(4)
    z[1] = 1.0  # |0>|1>, orthogonal product pair
    zz = np.kron(z, z)
    assert lifted.operator.expectation(np.kron(zz, zz)) == 0.0
    mp = min_product_expectation(lifted.operator, CFG)
    assert mp.value >= -1e-9
    assert mp.value <= 1e-7  # the explicit zero above caps the true minimum


# ---------------------------------------------------------------------------
# state lift
# ---------------------------------------------------------------------------


def _small_state():
    return HermitianOperator((1, 2), np.eye(2) / 2.0)


def test_lift_state_validates_inputs():
    rho = _small_state()
    with pytest.raises(ValueError):
        lift_state(rho, 0.0, 1.0, 1.0, cfg=CFG)
    with pytest.raises(ValueError):
        lift_state(rho, 1.0, -1.0, 1.0, cfg=CFG)
    with pytest.raises(ValueError):
        lift_state(rho, 1.0, 1.0, 0.0, cfg=CFG)
    # diagonal floor cap: gamma may not exceed beta * s^2
    with pytest.raises(ValueError):
        lift_state(rho, 1.0, 1.0, 17.0, cfg=CFG)
    lift_state(rho, 1.0, 1.0, 16.0, cfg=CFG)
    with pytest.raises(ValueError):
        lift_state(HermitianOperator((1, 2), np.eye(2)), 1.0, 1.0, 1.0, cfg=CFG)
    minus = np.diag([1.5, -0.5])
    with pytest.raises(ValueError):
        lift_state(HermitianOperator((1, 2), minus), 1.0, 1.0, 1.0, cfg=CFG)


def test_lift_state_budget():
    rho = HermitianOperator((2, 3), np.eye(6) / 6.0)
    with pytest.raises(DimensionError):
        lift_state(rho, 1.0, 1.0, 1.0, cfg=CFG)


def test_lift_state_dense_structure():
    rho = _small_state()
    lifted = lift_state(rho, 1.0, 1.0, 1.0, cfg=CFG)
    s = 4
    m = s * s
    assert lifted.space == (s, s, s, s)
    assert lifted.params == (1.0, 1.0, 1.0)

    # independent dense reference: symmetrized state block plus the
    # two balance terms, halved with the within-half involution, plus
    # the genuine half-swap penalty
    rho_t = np.kron(rho.entries, rho.entries)
    B = np.kron(rho_t, rho_t)
    P_w = np.zeros((m, m))
    idx = np.arange(s) * (s + 1)
    P_w[idx, idx] = 1.0
    S_half = SwapFactor(m).dense()
    P_x = np.zeros((m * m, m * m))
    jdx = np.arange(m) * (m + 1)
    P_x[jdx, jdx] = 1.0
    A = (
        0.5 * (np.kron(B, P_w) + np.kron(P_w, B))
        + (S_half - P_x)
        + (P_x - np.eye(m * m) / m)
    )
    K = np.kron(SwapFactor(s).dense(), SwapFactor(s).dense())
    Y_ref = 0.5 * (A + A @ K)
    W_ref = Y_ref + lifted.constant * 0.5 * (np.eye(m * m) - S_half)

    np.testing.assert_allclose(lifted.symmetric_part.to_dense(), Y_ref, atol=1e-13)
    np.testing.assert_allclose(lifted.operator.to_dense(), W_ref, atol=1e-13)
    # the S-commutation that the positivity argument leans on
    np.testing.assert_allclose(Y_ref @ S_half, S_half @ Y_ref, atol=1e-13)
    # the full construction is PSD for this source
    assert np.linalg.eigvalsh(W_ref)[0] >= -1e-12
    assert lifted.y_norm == pytest.approx(
        float(np.abs(np.linalg.eigvalsh(Y_ref)).max()), abs=1e-8
    )


def test_lift_state_diagonal_floor():
    lifted = lift_state(_small_state(), 1.0, 1.0, 1.0, cfg=CFG)
    rng = rng_for(59)
    for _ in range(200):
        u = random_unit_vector(rng, 16)
        assert lifted.symmetric_part.expectation(np.kron(u, u)) >= -1e-10
        assert lifted.operator.expectation(np.kron(u, u)) >= -1e-10


def test_lift_state_component_split_is_linear():
    rho = _small_state()
    a = lift_state(rho, 1.0, 1.0, 1.0, cfg=CFG)
    b = lift_state(rho, 2.0, 3.0, 5.0, cfg=CFG)
    rng = rng_for(61)
    for _ in range(20):
        u = random_unit_vector(rng, 16)
        ea, eb, eg = state_expectation_components(a, u)
        whole_a = a.symmetric_part.expectation(np.kron(u, u))
        whole_b = b.symmetric_part.expectation(np.kron(u, u))
        assert whole_a == pytest.approx(ea + eb + eg, abs=1e-10)
        assert whole_b == pytest.approx(2 * ea + 3 * eb + 5 * eg, abs=1e-10)
        # every component stays nonnegative on diagonal vectors
        assert ea >= -1e-12
        assert eb >= -1e-10
        assert eg >= -1e-10


def test_lift_state_component_split_guards():
    witness_lift = lift_witness(bell_state_witness(), cfg=CFG)
    with pytest.raises(ValueError):
        state_expectation_components(witness_lift, np.zeros(16))
    state_lift = lift_state(_small_state(), 1.0, 1.0, 1.0, cfg=CFG)
    with pytest.raises(DimensionError):
        state_expectation_components(state_lift, np.zeros(8))
    with pytest.raises(ValueError):
        symmetric_expectation_gap(state_lift)
    with pytest.raises(ValueError):
        negative_direction(state_lift)


def test_lift_state_product_floor_small():
    lifted = lift_state(_small_state(), 1.0, 1.0, 1.0, cfg=CFG)
    mp = min_product_expectation(
        lifted.operator, OptimizerConfig(restarts=8, seed=0), dims=(16, 16)
    )
    assert mp.value >= -1e-9


def test_lift_state_entangled_source_stays_constructible():
    rng = rng_for(63)
    rho = random_density(rng, (2, 2))
    lifted = lift_state(rho, 1.0, 1.0, 1.0, cfg=CFG)
    assert lifted.space == (16, 16, 16, 16)
    assert lifted.operator.total_dim == MAX_LIFT_TOTAL


def test_penalty_constant_regimes():
    Y = lift_witness(bell_state_witness(), cfg=CFG).symmetric_part
    lo = asym_penalty_constant(Y, regime="witness")
    hi = asym_penalty_constant(Y, regime="gap")
    assert hi == pytest.approx(2.0 * lo, rel=1e-12)
    with pytest.raises(ValueError):
        asym_penalty_constant(Y, regime="loose")
    # an operator that is not half-swap symmetric must be refused
    lopsided = StructuredOperator(
        (2, 2, 2, 2),
        [(1.0, (DenseFactor(np.diag([1.0, 2.0])), IdentityFactor(8)))],
    )
    with pytest.raises(ValueError):
        asym_penalty_constant(lopsided)
    assert projector_sandwich_gap(lopsided) > 1e-3


def test_lifted_witness_invariant_guard():
    base = lift_witness(bell_state_witness(), cfg=CFG)
    with pytest.raises(ValueError):
        LiftedWitness(
            operator=base.operator,
            symmetric_part=base.symmetric_part,
            asym_projector=base.asym_projector,
            constant=base.y_norm / 2.0,
            y_norm=base.y_norm,
            space=base.space,
            source_kind="witness",
            source=base.source,
        )
