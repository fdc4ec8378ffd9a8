import math
import time

import numpy as np
import pytest

from liepoint.numverify import (CoverageError, GridSpec, NumericBlowupError, OdeIvp, integrate_range,
                                pde_residual, rk4_error_ratio, rk4_integrate, to_first_order)
from liepoint.optsys import parse_element
from liepoint.reduce import invariants, reduce_system

PARAMS = {"Gr": 1.0, "calpha": 1.0, "Pr": 0.7, "R": 0.1}
GRID = GridSpec((1.0, 2.0), (0.0, 1.0), 21, 21)


def _reduced(rnc, alg, label):
    ans = invariants(alg.element_field(parse_element(alg, label)), rnc)
    return ans, reduce_system(rnc, ans)


def _x4_trajectory(rnc, alg, params=PARAMS, h=1e-3, margin=0.05):
    ans, rs = _reduced(rnc, alg, "X4")
    ode = to_first_order(rs, params)
    traj = integrate_range(ode, 0.0, [0.0, 1.0, 0.0, 1.0, 0.0], h, -margin, 1.0 + margin)
    return ans, rs, ode, traj


def test_rk4_exponential():
    tr = rk4_integrate(OdeIvp(lambda s, y: y, 0.0, [1.0], 0.1, 10))
    assert tr.states[-1, 0] == pytest.approx(math.e, abs=3e-6)


def test_rk4_oscillator():
    tr = rk4_integrate(OdeIvp(lambda s, y: [y[1], -y[0]], 0.0, [0.0, 1.0], math.pi / 200, 100))
    assert tr.states[-1, 0] == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("f, y0, exact", [
    (lambda s, y: y, [1.0], lambda T: [math.exp(T)]),
    (lambda s, y: [y[1], -y[0]], [0.0, 1.0], lambda T: [math.sin(T), math.cos(T)]),
])
def test_rk4_convergence_order(f, y0, exact):
    assert 12 <= rk4_error_ratio(f, y0, exact, 1.0, 0.1) <= 20


def test_rk4_rejects_bad_step_and_blowup():
    with pytest.raises(ValueError):
        OdeIvp(lambda s, y: y, 0.0, [1.0], 0.0, 10)
    with pytest.raises(NumericBlowupError), np.errstate(over="ignore", invalid="ignore"):
        rk4_integrate(OdeIvp(lambda s, y: y * y, 0.0, [1.0], 0.5, 400))


def test_first_order_state(rnc, alg):
    _, rs = _reduced(rnc, alg, "X4")
    ode = to_first_order(rs, PARAMS)
    assert ode.state_names == ("F_u", "F_u'", "F_v", "F_theta", "F_theta'")
    assert {n for n, _ in ode.solved} == {"F_theta''", "F_u''", "F_v'"}


def test_x4_plug_back(rnc, alg):
    t0 = time.perf_counter()
    ans, _, _, traj = _x4_trajectory(rnc, alg)
    report = pde_residual(rnc, ans, traj, GRID, PARAMS)
    assert report.max_residual <= 1e-6
    assert time.perf_counter() - t0 < 5


def test_fd_mode_agrees(rnc, alg):
    ans, _, _, traj = _x4_trajectory(rnc, alg)
    small = GridSpec((1.0, 2.0), (0.0, 1.0), 5, 5)
    report = pde_residual(rnc, ans, traj, small, PARAMS, mode="fd", fd_step=1e-3)
    assert report.max_residual <= 1e-4
    with pytest.raises(ValueError):
        pde_residual(rnc, ans, traj, small, PARAMS, mode="spectral")


def test_constant_state_is_exact(rnc, alg):
    # under X1 the reduced system is autonomous in y; a constant profile with theta = 0 solves it
    ans, rs = _reduced(rnc, alg, "X1")
    ode = to_first_order(rs, PARAMS)
    y0 = [0.0] * len(ode.state_names)
    y0[ode.state_names.index("F_u")] = 0.7
    traj = integrate_range(ode, 0.0, y0, 1e-2, -0.1, 1.2)
    assert pde_residual(rnc, ans, traj, GRID, PARAMS).max_residual == 0.0


def test_mismatched_parameters_scale_with_weights(rnc, alg):
    # a trajectory for the wrong Prandtl number is not a solution; its residual
    # is r^w times a function of s alone, so moving along s = const rescales it
    ans, rs, _, traj = _x4_trajectory(rnc, alg, dict(PARAMS, Pr=1.4))
    at = lambda x, y: pde_residual(rnc, ans, traj, GridSpec((x, x), (y, y), 1, 1), PARAMS).max_abs
    base, moved = at(1.0, 0.5), at(4.0, 1.0)
    w = rs.weights[2]
    assert base[2] > 1e-3
    assert moved[2] == pytest.approx(base[2] * 4.0 ** float(w), rel=1e-6)


def test_coverage_error(rnc, alg):
    ans, _, _, traj = _x4_trajectory(rnc, alg, margin=0.0)
    with pytest.raises(CoverageError):
        traj.interpolate(5.0)


def test_trajectory_csv(rnc, alg, tmp_path):
    _, _, ode, traj = _x4_trajectory(rnc, alg, h=1e-2)
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    rows = path.read_text().splitlines()
    assert rows[0].split(",") == ["s"] + list(ode.state_names)
    assert len(rows) == len(traj.s) + 1
    assert np.allclose([float(v) for v in rows[1].split(",")][1:], traj.states[0])
