"""Frame families against the finite-difference oracle.

The analytic derivatives are the load-bearing output here: every residual
check downstream trusts them.  Central differences at h = 1e-9 s with rates
around 1e6 rad/s resolve them to ~1e-7 relative, well inside the 1e-5 gate;
a separate halving test checks the observed convergence order at the gate
rate scale (1e8 rad/s), where absolute differences are meaningless.
"""

import math
from functools import partial

import numpy as np
import pytest

from holonome.frames import (
    SingularConfiguration,
    check_cyclic,
    connections,
    gram_defect,
    lambda_frame,
    lambda_frame_at,
    two_laser_frame,
    two_qubit_frame,
    two_qubit_frame_at,
)
from holonome.laws import LawsBuilder, constant_laws, random_laws
from holonome.numerics import max_abs
from holonome.paths import op_schedule

FD_H = 1e-9
FD_RTOL = 1e-5

FAMILIES = [
    ("lambda_excited", partial(lambda_frame, ancilla="excited"), ("theta", "phi", "chi", "xi")),
    ("lambda_dark", partial(lambda_frame, ancilla="dark"), ("theta", "phi", "chi", "xi")),
    ("two_laser", two_laser_frame, ("phi", "chi")),
    ("two_qubit", two_qubit_frame, ("theta", "phi", "chi", "xi")),
]


def _segment_midpoints(laws):
    return [0.5 * (t0 + t1) for t0, t1, _ in laws.smooth_segments()]


@pytest.mark.parametrize("name,frame_fn,moving", FAMILIES, ids=[f[0] for f in FAMILIES])
def test_derivatives_match_finite_differences(name, frame_fn, moving):
    rng = np.random.default_rng(sum(name.encode()))
    for _ in range(8):
        laws = random_laws(rng, duration=1e-6, rate_scale=1e6,
                           chi_range=(0.2, math.pi - 0.05), time_dependent=moving)
        for t in _segment_midpoints(laws):
            frame = frame_fn(laws, t)
            fd = (frame_fn(laws, t + FD_H).states - frame_fn(laws, t - FD_H).states) / (2 * FD_H)
            scale = max(1.0, max_abs(frame.derivs))
            assert max_abs(fd - frame.derivs) / scale < FD_RTOL


def test_finite_difference_error_halves_quadratically():
    # observed order ~2 at gate-scale rates, where the oracle itself degrades
    rng = np.random.default_rng(7)
    laws = random_laws(rng, duration=50e-9, rate_scale=1e8,
                       time_dependent=("theta", "phi", "chi", "xi"))
    t = 0.5 * laws.duration

    def fd_err(h):
        fd = (lambda_frame(laws, t + h).states - lambda_frame(laws, t - h).states) / (2 * h)
        return max_abs(fd - lambda_frame(laws, t).derivs)

    ratio = fd_err(1e-12) / fd_err(5e-13)
    assert 3.5 < ratio < 4.5


@pytest.mark.parametrize("name,frame_fn,moving", FAMILIES, ids=[f[0] for f in FAMILIES])
def test_frames_are_orthonormal(name, frame_fn, moving):
    rng = np.random.default_rng(91)
    for _ in range(20):
        laws = random_laws(rng, duration=1.0, rate_scale=1.0,
                           chi_range=(0.2, math.pi - 0.05), time_dependent=moving)
        frame = frame_fn(laws, float(rng.uniform(0.0, 1.0)))
        assert gram_defect(frame) < 1e-14


def test_lambda_states_at_chi_zero():
    # chi = 0 collapses the moving pair onto |0> and -|e>, theta = pi
    laws = constant_laws(1.0, theta=math.pi, xi=0.7)
    frame = lambda_frame(laws, 0.5)
    assert max_abs(frame.states[0] - np.array([0, 1, 0])) < 1e-15
    assert max_abs(frame.states[1] - np.array([1, 0, 0])) < 1e-15
    assert max_abs(frame.states[2] - np.array([0, 0, -1])) < 1e-15


def test_lambda_ancilla_selection():
    laws = constant_laws(1.0)
    assert lambda_frame(laws, 0.0, ancilla="excited").computational == (0, 1)
    assert lambda_frame(laws, 0.0, ancilla="dark").computational == (1, 2)
    with pytest.raises(ValueError):
        lambda_frame(laws, 0.0, ancilla="bright")


def test_ancilla_choice_does_not_change_states():
    laws = constant_laws(1.0, theta=0.9, chi=1.1, xi=0.3)
    a = lambda_frame(laws, 0.2, ancilla="excited")
    b = lambda_frame(laws, 0.2, ancilla="dark")
    assert np.array_equal(a.states, b.states)
    assert np.array_equal(a.derivs, b.derivs)


def test_two_laser_frame_guards_chi():
    laws = constant_laws(1.0, chi=0.0)
    with pytest.raises(SingularConfiguration):
        two_laser_frame(laws, 0.5)
    lambda_frame(laws, 0.5)  # the unguarded frame allows chi = 0


def test_two_qubit_spectators_are_constant():
    rng = np.random.default_rng(13)
    laws = random_laws(rng, duration=1.0, rate_scale=1.0,
                       time_dependent=("theta", "phi", "chi", "xi"))
    frame = two_qubit_frame(laws, 0.4)
    for i in (0, 1, 5):
        assert max_abs(frame.derivs[i]) == 0.0
    assert frame.computational == (0, 1, 2, 3)
    assert frame.ancilla == (4, 5)


def test_connection_closed_form_lambda():
    # <psi_2|i d_t|psi_2> = dphi cos^2(chi/2) sin^2(theta/2) - dxi sin^2(chi/2)
    rng = np.random.default_rng(29)
    for _ in range(10):
        th, ph, ch, xi = rng.uniform(0.1, 3.0, size=4)
        dth, dph, dch, dxi = rng.uniform(-2.0, 2.0, size=4)
        laws = (LawsBuilder(theta=th, phi=ph, chi=ch, xi=xi)
                .run(1.0, theta_rate=dth, phi_rate=dph, chi_rate=dch, xi_rate=dxi)
                .build())
        conn = connections(lambda_frame(laws, 0.0))
        cc2, sc2 = math.cos(ch / 2) ** 2, math.sin(ch / 2) ** 2
        st2 = math.sin(th / 2) ** 2
        assert conn[1] == pytest.approx(dph * cc2 * st2 - dxi * sc2, abs=1e-12)
        assert conn[2] == pytest.approx(dph * sc2 * st2 + dxi * sc2, abs=1e-12)
        assert conn[0] == pytest.approx(-dph * st2, abs=1e-12)


def test_connection_closed_form_two_qubit():
    laws = (LawsBuilder(theta=0.8, phi=0.2, chi=1.3, xi=0.5)
            .run(1.0, xi_rate=1.7, chi_rate=0.9)
            .build())
    conn = connections(two_qubit_frame(laws, 0.0))
    sc2 = math.sin(1.3 / 2) ** 2
    assert conn[3] == pytest.approx(-1.7 * sc2, abs=1e-12)
    assert conn[4] == pytest.approx(1.7 * sc2, abs=1e-12)
    assert max_abs(conn[:3]) < 1e-12 and abs(conn[5]) < 1e-12


def test_check_cyclic_on_closed_and_open_paths():
    laws = op_schedule(math.pi / 3, math.pi).to_laws()
    closed = check_cyclic(partial(lambda_frame, laws, ancilla="dark"), laws.duration)
    assert closed < 1e-9
    half = LawsBuilder(theta=math.pi).run(1.0, chi_rate=1.0).build()
    open_defect = check_cyclic(partial(lambda_frame, half, ancilla="dark"), half.duration)
    assert open_defect > 0.1


def test_frame_at_point_matches_frame_of_laws():
    laws = constant_laws(1.0, theta=0.3, phi=0.1, chi=0.9, xi=0.2)
    p = laws.at(0.6)
    assert np.array_equal(lambda_frame_at(p).states, lambda_frame(laws, 0.6).states)
    assert np.array_equal(two_qubit_frame_at(p).states, two_qubit_frame(laws, 0.6).states)
