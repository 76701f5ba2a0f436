"""Multi-term and coupled fractional initial value solvers."""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from fracvar.fodesolve import (
    FODE2,
    DivergenceError,
    MultiTermFDE,
    fde_residual,
    find_model,
    model_catalog,
    solve_fode2,
    solve_multiterm,
)
from fracvar.specfun import gamma


def plate_fde(t_end=1.0):
    # manufactured so the exact solution is t^3
    forcing = lambda t: 6.0 * t + 6.0 / math.gamma(2.5) * t**1.5 + t**3
    return MultiTermFDE(
        terms=((1.0, 2.0), (1.0, 1.5)), zero_order_coeff=1.0, forcing=forcing, t_end=t_end
    )


# === construction ===========================================================


def test_terms_are_sorted_and_validated():
    fde = MultiTermFDE(terms=((0.5, 1.0), (1.0, 2.0)), forcing=0.0)
    assert fde.terms == ((1.0, 2.0), (0.5, 1.0))
    assert fde.max_order == 2.0
    with pytest.raises(ValueError):
        MultiTermFDE(terms=(), forcing=0.0)
    with pytest.raises(ValueError):
        MultiTermFDE(terms=((1.0, 0.5), (2.0, 0.5)), forcing=0.0)
    with pytest.raises(ValueError):
        MultiTermFDE(terms=((0.0, 1.5),), forcing=0.0)
    with pytest.raises(ValueError):
        MultiTermFDE(terms=((1.0, -0.5),), forcing=0.0)
    with pytest.raises(ValueError):
        MultiTermFDE(terms=((1.0, 0.5),), forcing=0.0, t_end=0.0)


def test_fode2_validation():
    with pytest.raises(ValueError):
        FODE2(alpha=1.2, rhs=lambda t, x, v: 0.0)
    with pytest.raises(ValueError):
        FODE2(alpha=0.5, rhs=3.0)
    with pytest.raises(ValueError):
        FODE2(alpha=0.5, rhs=lambda t, x, v: 0.0, t_end=-1.0)


def test_grid_guards():
    fde = MultiTermFDE(terms=((1.0, 2.0),), forcing=2.0, t_end=1.0)
    with pytest.raises(ValueError):
        solve_multiterm(fde, 0.3)  # does not divide t_end
    with pytest.raises(ValueError):
        solve_multiterm(fde, 0.25)  # only 4 steps


# === implicit multi-term solver =============================================


def test_classical_second_order_reduction():
    fde = MultiTermFDE(terms=((1.0, 2.0),), forcing=2.0, t_end=1.0)
    rep = solve_multiterm(fde, 2**-10)
    t = rep.solution.times()
    assert np.max(np.abs(rep.solution.values - t**2)) <= 2e-3
    assert rep.max_defect == 0.0
    assert rep.steps == 1024
    assert rep.aux is None


def test_zero_forcing_stays_zero():
    fde = MultiTermFDE(terms=((1.0, 1.5),), zero_order_coeff=1.0, forcing=0.0)
    rep = solve_multiterm(fde, 2**-7)
    assert np.max(np.abs(rep.solution.values)) == 0.0


def test_single_term_power_forcing():
    fde = MultiTermFDE(terms=((1.0, 0.8),), forcing=lambda t: t**2, t_end=1.0)
    rep = solve_multiterm(fde, 2**-10)
    t = rep.solution.times()
    exact = gamma(3) / gamma(3.8) * t**2.8
    assert np.max(np.abs(rep.solution.values - exact)) <= 2e-3


def test_plate_equation_first_order_convergence():
    errs = []
    for h in (2**-9, 2**-10, 2**-11):
        rep = solve_multiterm(plate_fde(), h)
        t = rep.solution.times()
        exact = t**3
        sl = slice(8, None)
        errs.append(np.max(np.abs(rep.solution.values[sl] - exact[sl])) / np.max(np.abs(exact)))
    assert errs == pytest.approx([5.00241e-3, 2.50034e-3, 1.24995e-3], rel=1e-4)
    assert 0.45 <= errs[1] / errs[0] <= 0.55
    assert 0.45 <= errs[2] / errs[1] <= 0.55


def test_solver_defect_is_small():
    rep = solve_multiterm(plate_fde(), 2**-11)
    assert rep.max_defect <= 1e-8


def test_forcing_linearity():
    mk = lambda f: MultiTermFDE(terms=((1.0, 1.5),), zero_order_coeff=0.5, forcing=f)
    h = 2**-8
    s1 = solve_multiterm(mk(lambda t: math.sin(t)), h).solution.values
    s2 = solve_multiterm(mk(lambda t: t**2), h).solution.values
    s12 = solve_multiterm(mk(lambda t: math.sin(t) + t**2), h).solution.values
    assert np.max(np.abs(s12 - s1 - s2)) <= 1e-12


def test_degenerate_diagonal_is_rejected():
    fde = MultiTermFDE(terms=((1.0, 0.5), (-1.0, 1.0)), forcing=1.0, t_end=16.0)
    with pytest.raises(ValueError):
        solve_multiterm(fde, 1.0)


def test_solver_is_deterministic():
    fde = MultiTermFDE(terms=((1.0, 0.8),), forcing=lambda t: t**2, t_end=1.0)
    a = solve_multiterm(fde, 2**-9).solution.values
    b = solve_multiterm(fde, 2**-9).solution.values
    assert np.array_equal(a, b)


# === residual substitution ==================================================


def test_residual_of_computed_solution_is_small():
    fde = plate_fde()
    rep = solve_multiterm(fde, 2**-11)
    res = fde_residual(fde, rep.solution)
    assert np.max(np.abs(res.values)) <= 1e-6


def test_residual_bookkeeping_and_locality():
    fde = plate_fde()
    rep = solve_multiterm(fde, 2**-11)
    res = fde_residual(fde, rep.solution)
    drop = rep.solution.n_pts - res.n_pts
    assert drop == 3  # ceil(2.0) + 1 startup nodes
    assert res.t0 == pytest.approx(rep.solution.t0 + drop * rep.solution.h)

    bumped = rep.solution.values.copy()
    mid = 1024
    bumped[mid] += 1e-3
    res2 = fde_residual(fde, rep.solution.with_values(bumped))
    diff = np.abs(res2.values - res.values)
    j = mid - drop
    assert diff[j] > 1e3  # the defect explodes where the node was moved
    assert np.max(diff[:j]) == 0.0  # earlier residuals never see it


# === explicit coupled solver ================================================


def test_free_fractional_motion():
    fode = FODE2(alpha=0.6, rhs=lambda t, x, v: 0.0, x0=0.0, v0=1.0, t_end=1.0)
    rep = solve_fode2(fode, 2**-10)
    t = rep.solution.times()
    exact = t**0.6 / gamma(1.6)
    sl = slice(8, None)
    rel = np.max(np.abs(rep.solution.values[sl] - exact[sl])) / np.max(np.abs(exact))
    assert rel <= 1e-2
    assert rep.aux is not None  # velocity channel
    assert rep.aux.n_pts == rep.solution.n_pts
    assert rep.max_defect <= 1e-10


def test_initial_values_are_injected():
    fode = FODE2(alpha=0.7, rhs=lambda t, x, v: -x, x0=2.0, v0=-1.0, t_end=1.0)
    rep = solve_fode2(fode, 2**-8)
    assert rep.solution.values[0] == 2.0
    assert rep.aux.values[0] == -1.0


def test_growth_guard_raises():
    fode = FODE2(alpha=0.5, rhs=lambda t, x, v: 40.0 * v, v0=1.0, t_end=4.0)
    with pytest.raises(DivergenceError):
        solve_fode2(fode, 2**-6)


def test_explicit_euler_reduction_at_order_one():
    # alpha = 1 turns the scheme into explicit Euler for x'' = -0.5 x'
    fode = FODE2(alpha=1.0, rhs=lambda t, x, v: -0.5 * v, x0=0.0, v0=1.0, t_end=2.0)
    rep = solve_fode2(fode, 2.0 / 1024)
    t = rep.solution.times()
    exact = (1.0 - np.exp(-0.5 * t)) / 0.5
    assert np.max(np.abs(rep.solution.values - exact)) <= 1e-3


def test_solvers_agree_on_shared_problem():
    # D^0.4 D^0.4 x = t^2 with zero start is also the single-term problem
    # D^0.8 x = t^2
    h = 2**-10
    coupled = solve_fode2(FODE2(alpha=0.4, rhs=lambda t, x, v: t**2, t_end=1.0), h)
    direct = solve_multiterm(
        MultiTermFDE(terms=((1.0, 0.8),), forcing=lambda t: t**2, t_end=1.0), h
    )
    diff = np.max(np.abs(coupled.solution.values - direct.solution.values))
    assert diff <= 1e-2


# === model templates ========================================================


def test_catalog_names_and_kinds():
    names = sorted(m.name for m in model_catalog())
    assert names == ["bagley-torvik", "business-cycle", "friction", "phillips"]
    for model in model_catalog():
        assert set(model.kinds) == {"classical", "fractional"}
        assert set(model.kinds.values()) <= {"multiterm", "fode2"}
    with pytest.raises(KeyError):
        find_model("pendulum")
    with pytest.raises(ValueError):
        find_model("friction").make("quantum")


def test_friction_rhs_assembles_potential_gradient():
    prob = find_model("friction").make(
        "fractional", potential=lambda t, x: 0.5 * x**2, gamma_coef=0.3, m=2.0
    )
    assert prob.rhs(0.0, 1.0, 0.0) == pytest.approx(0.5, abs=1e-6)
    assert prob.rhs(0.0, 0.0, 1.0) == pytest.approx(-0.15, abs=1e-6)


def test_friction_classical_limit_matches_exponential():
    prob = find_model("friction").make("classical")
    assert isinstance(prob, FODE2) and prob.alpha == 1.0
    rep = solve_fode2(prob, 2.0 / 1024)
    t = rep.solution.times()
    exact = (1.0 - np.exp(-0.5 * t)) / 0.5
    assert np.max(np.abs(rep.solution.values - exact)) <= 1e-3


def test_phillips_classical_matches_reference_integrator():
    prob = find_model("phillips").make("classical")
    assert isinstance(prob, MultiTermFDE)
    rep = solve_multiterm(prob, 5.0 / 2048)
    sol = solve_ivp(
        lambda t, y: [y[1], -0.5 * y[1] - 1.0 * y[0] - 0.2],
        (0.0, 5.0),
        [0.0, 0.0],
        t_eval=rep.solution.times(),
        rtol=1e-11,
        atol=1e-12,
    )
    assert np.max(np.abs(rep.solution.values - sol.y[0])) <= 2e-3


def test_business_cycle_classical_equals_half_order_fractional():
    model = find_model("business-cycle")
    classical = model.make("classical")
    half = model.make("fractional", alpha=0.5)
    assert classical.terms == half.terms
    a = solve_multiterm(classical, 2**-8).solution.values
    b = solve_multiterm(half, 2**-8).solution.values
    assert np.array_equal(a, b)


def test_bagley_torvik_template_default_forcing_is_manufactured():
    prob = find_model("bagley-torvik").make("classical")
    rep = solve_multiterm(prob, 2**-9)
    t = rep.solution.times()
    sl = slice(8, None)
    rel = np.max(np.abs(rep.solution.values[sl] - t[sl] ** 3)) / 1.0
    assert rel <= 1e-2
