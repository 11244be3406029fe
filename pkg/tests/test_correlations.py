import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import oracle_ground, oracle_negativity, oracle_ptrace, oracle_t3
from triq import analytic
from triq.correlations import (
    DensityMatrix,
    classify_regime,
    correlation_report,
    derivative_in_j,
    ground_t3,
    magnetic_susceptibility,
    magnetization,
    mqc_susceptibility,
    negativity,
    one_vs_rest_negativity_pure,
    pair_negativity,
    partial_trace,
    partial_transpose,
    pure_density,
    solve_ground,
    t3,
    t3_squared,
)
from triq.errors import InvalidConfigError
from triq.hamiltonian import CouplingConfig, eigvalsh

GHZ = (np.eye(8)[0] + np.eye(8)[7]) / math.sqrt(2)
W = (np.eye(8)[1] + np.eye(8)[2] + np.eye(8)[4]) / math.sqrt(3)
# regression constant from brute-force enumeration of the W-state partial transpose
W_NEG_A_BC = 2 * math.sqrt(2) / 3

unit_vec = st.lists(st.floats(-1, 1, allow_nan=False), min_size=8, max_size=8).filter(
    lambda v: np.linalg.norm(v) > 1e-3
)


def test_trace_out_product():
    rho = partial_trace(pure_density(np.eye(8)[0]), ("A", "B"))
    assert rho.labels == ("A", "B")
    assert np.allclose(rho.matrix, np.diag([1.0, 0, 0, 0]))


def test_trace_out_ghz():
    rho = partial_trace(pure_density(GHZ), ("A", "B")).matrix
    assert np.allclose(rho, np.diag([0.5, 0, 0, 0.5]))


def test_reduced_ground_state_from_amplitudes():
    gs = analytic.analytic_ground_state_one_param(6.0, 1.0)
    a, g, c = np.array([gs.alpha, gs.gamma, gs.chi]) / gs.k0
    # rho_AB from psi = a|001> + g|010> + a|100> + c|111>: C=1 branch a|00>+c|11>, C=0 branch g|01>+a|10>
    expected = np.zeros((4, 4))
    b1 = np.array([a, 0, 0, c])
    b0 = np.array([0, g, a, 0])
    expected += np.outer(b1, b1) + np.outer(b0, b0)
    got = partial_trace(pure_density(gs.vector), ("A", "B")).matrix
    assert np.allclose(got, expected, atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(unit_vec, st.sampled_from([("A",), ("B",), ("C",), ("A", "B"), ("A", "C"), ("B", "C")]))
def test_partial_trace_against_einsum(v, keep):
    v = np.array(v) / np.linalg.norm(v)
    rho = np.outer(v, v)
    pos = ["ABC".index(q) for q in keep]
    got = partial_trace(pure_density(v), keep)
    assert np.allclose(got.matrix, oracle_ptrace(rho, 3, pos), atol=1e-12)
    assert np.trace(got.matrix) == pytest.approx(1.0, abs=1e-12)


def test_bell_partial_transpose():
    bell = np.zeros(4)
    bell[0] = bell[3] = 1 / math.sqrt(2)
    rho = DensityMatrix(np.outer(bell, bell), ("A", "B"))
    assert min(np.linalg.eigvalsh(partial_transpose(rho, "A"))) == pytest.approx(-0.5)


def test_product_state_is_ppt(rng):
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2))
    ra, rb = a @ a.T, b @ b.T
    rho = np.kron(ra / np.trace(ra), rb / np.trace(rb))
    assert min(np.linalg.eigvalsh(partial_transpose(DensityMatrix(rho, ("A", "B")), "A"))) >= -1e-12
    assert negativity(DensityMatrix(rho, ("A", "B")), "A") <= 1e-10


def test_pair_negativity_matches_min_eigenvalue():
    _, v = oracle_ground(4.0)
    rho_ab = partial_trace(pure_density(v), ("A", "B"))
    n_ab = negativity(rho_ab, "A")
    lam = min(np.linalg.eigvalsh(partial_transpose(rho_ab, "A")))
    assert n_ab == pytest.approx(-2 * lam, abs=1e-12)


def test_ghz_negativities():
    assert negativity(pure_density(GHZ), "A") == pytest.approx(1.0, abs=1e-12)
    assert pair_negativity(pure_density(GHZ), "A", "B") == 0.0
    assert t3(GHZ, "B") == pytest.approx(1.0, abs=1e-12)


def test_w_state_regression():
    assert negativity(pure_density(W), "A") == pytest.approx(W_NEG_A_BC, abs=1e-12)
    assert oracle_negativity(np.outer(W, W), 3, 0) == pytest.approx(W_NEG_A_BC, abs=1e-12)


def test_biseparable_has_no_t3(rng):
    b = rng.normal(size=2)
    ac = rng.normal(size=4)
    b, ac = b / np.linalg.norm(b), ac / np.linalg.norm(ac)
    # psi = |b>_B (x) |phi>_AC in the A,B,C ordering
    psi = np.einsum("j,ik->ijk", b, ac.reshape(2, 2)).reshape(8)
    assert t3(psi, "B") < 1e-7


def test_isotropic_ground_t3():
    state, _, used, _ = solve_ground(CouplingConfig(6.0))
    assert used == "analytic"
    assert t3(state, "B") == pytest.approx(0.5, abs=0.02)


@settings(max_examples=60, deadline=None)
@given(unit_vec, st.sampled_from("ABC"))
def test_t3_against_numpy_oracle(v, central):
    v = np.array(v) / np.linalg.norm(v)
    # compared squared: the root turns a 1e-16 residual into 1e-8
    expected = oracle_t3(np.outer(v, v), "ABC".index(central))
    assert t3(v, central) ** 2 == pytest.approx(expected**2, abs=1e-10)
    # amplitude route and density-matrix route agree
    assert t3_squared(v, central) == pytest.approx(t3_squared(pure_density(v), central), abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(unit_vec, st.sampled_from("ABC"))
def test_one_vs_rest_amplitude_route(v, central):
    v = np.array(v) / np.linalg.norm(v)
    assert one_vs_rest_negativity_pure(v, central) == pytest.approx(
        negativity(pure_density(v), central), abs=1e-10
    )


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=4, max_size=4).filter(lambda v: np.linalg.norm(v) > 1e-3))
def test_monogamy_tetrahedral(amps):
    v = np.zeros(8)
    v[[1, 2, 4, 7]] = amps
    v /= np.linalg.norm(v)
    assert t3_squared(v, "B") >= -1e-10


def test_swap_symmetric_state_permutation_consistency():
    _, v = oracle_ground(3.0, eta=0.6)  # A<->C symmetric for omega = 1
    assert t3(v, "A") == pytest.approx(t3(v, "C"), abs=1e-10)


def test_density_validation():
    with pytest.raises(InvalidConfigError):
        DensityMatrix(np.eye(8))
    with pytest.raises(InvalidConfigError):
        DensityMatrix(np.eye(4) / 4, ("A",))
    assert DensityMatrix(np.eye(8) / 8).is_valid()
    assert not DensityMatrix(np.diag([1.5, -0.5, 0, 0]), ("A", "B")).is_valid()


def test_invalid_central():
    with pytest.raises(InvalidConfigError):
        t3(GHZ, "D")


def test_mqc_susceptibility_signs():
    assert mqc_susceptibility(CouplingConfig(-2.0)) < 0
    assert mqc_susceptibility(CouplingConfig(0.5, eta=0.5)) > 0


def _polyline_slope(fn, j, width):
    xs = np.linspace(j - width, j + width, 41)
    ys = [fn(x) for x in xs]
    return np.polyfit(xs, ys, 3)[-2] + 2 * np.polyfit(xs, ys, 3)[-3] * j + 3 * np.polyfit(xs, ys, 3)[-4] * j**2


def test_mqc_susceptibility_matches_dense_fit():
    chi = mqc_susceptibility(CouplingConfig(-6.0))
    slope = _polyline_slope(lambda x: oracle_t3(np.outer(*[oracle_ground(x)[1]] * 2), 1), -6.0, 0.05)
    assert chi == pytest.approx(slope, rel=0.05)


def test_magnetic_susceptibility_matches_dense_fit():
    chi = magnetic_susceptibility(CouplingConfig(3.0))
    sz = np.array([3.0, 1, 1, -1, 1, -1, -1, -3])
    slope = _polyline_slope(lambda x: float(oracle_ground(x)[1] ** 2 @ sz), 3.0, 0.05)
    assert chi == pytest.approx(slope, rel=0.05)


def test_magnetic_susceptibility_sign_flip_at_zero():
    assert magnetic_susceptibility(CouplingConfig(1e-3)) > 0
    assert magnetic_susceptibility(CouplingConfig(-1e-3)) < 0
    assert np.sign(magnetic_susceptibility(CouplingConfig(-6.0))) == np.sign(mqc_susceptibility(CouplingConfig(-6.0)))


@pytest.mark.parametrize("j", [-3.0, -0.7, 0.4, 1.5, 5.0])
def test_finite_difference_second_order(j):
    cfg = CouplingConfig(j, eta=0.8)
    d = 1e-2
    values = [mqc_susceptibility(cfg, step=d / 2**k, path="numeric-only") for k in range(3)]
    e1, e2 = abs(values[0] - values[1]), abs(values[1] - values[2])
    # halving the step divides the error by about four
    assert e2 <= e1 / 2.5 + 1e-9


def test_one_sided_at_zero():
    value, one_sided = derivative_in_j(lambda x: x**2 + 3 * x, 0.0, 1e-3)
    assert one_sided
    assert value == pytest.approx(3.0, abs=1e-9)
    value, one_sided = derivative_in_j(lambda x: x**3, 1e-5, 1e-3)
    assert not one_sided
    # the step is shrunk to |j|/2; the stencil error on x^3 is exactly step^2
    assert value == pytest.approx(3e-10 + 2.5e-11, rel=1e-9)
    with pytest.raises(InvalidConfigError):
        derivative_in_j(lambda x: x, 1.0, 0.0)


@pytest.mark.parametrize(
    "t3_value,chi,expected",
    [(0.9, -0.05, "nonfrustrated"), (0.3, 0.2, "frustrated"), (0.5, 1e-9, "indeterminate")],
)
def test_classify_regime(t3_value, chi, expected):
    assert classify_regime(t3_value, chi) == expected


def test_classify_with_hint():
    assert classify_regime(0.5, 0.0, j_sign_hint=-1) == "nonfrustrated"


def test_report_paths_agree():
    cfg = CouplingConfig(2.5, eta=0.7)
    a = correlation_report(cfg, "analytic-first")
    n = correlation_report(cfg, "numeric-only")
    assert a.path == "analytic" and n.path == "numeric"
    for key, value in a.to_dict().items():
        if isinstance(value, float):
            assert value == pytest.approx(getattr(n, key), abs=1e-7), key
    assert a.regime == "frustrated"


def test_report_numeric_for_general_omega():
    rep = correlation_report(CouplingConfig(-2.0, eta=1.3, omega=0.5))
    assert rep.path == "numeric"
    assert rep.regime == "nonfrustrated"
    assert all(rep.to_dict()[k] >= 0 for k in ("n_ab", "n_ac", "n_bc", "t3_central_a", "t3_central_b", "t3_central_c"))


def test_report_at_critical_point():
    rep = correlation_report(CouplingConfig(0.0))
    assert "one-sided" in rep.flags
    assert rep.t3_central_b == 0.0


def test_ground_t3_closed_form_matches_numeric():
    for cfg in (CouplingConfig(5.0, eta=0.3), CouplingConfig(4.0, eta=1.5, omega=1.2)):
        assert ground_t3(cfg) == pytest.approx(ground_t3(cfg, path="numeric-only"), abs=1e-7)


def test_magnetization_field_only():
    assert magnetization(np.eye(8)[7]) == -3.0


def test_eigvalsh_shared_solver():
    assert list(eigvalsh(np.diag([2.0, -1.0]))) == [-1.0, 2.0]
