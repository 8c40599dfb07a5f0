"""Propagation against closed-form oracles.

The open-system checks lean on three exact solutions of the master equation
at H = 0: ladder decay rho_11(t) = e^{-kappa t} and rho_ee(t) = e^{-2 kappa t},
dephasing rho_01(t) = rho_01(0) e^{-kappa t / 2} and rho_0e decaying twice as
fast.  The 1001-state average has its own closed form for a diagonal gate,
(751 + 250 cos delta) / 1001, derived from the exact grid sums of cos^4,
sin^4 and cos^2 sin^2 over theta_i = 2 pi i / 1000.
"""

import math
from functools import partial

import numpy as np
import pytest

from test_numerics import random_hermitian, taylor_expm

from holonome import evolve
from holonome.analytic import dark_ancilla_samples
from holonome.evolve import (
    GateReport,
    LindbladParams,
    SweepCase,
    average_fidelity,
    gate_leakage,
    haar_average_fidelity,
    kappa_sweep,
    propagate_lindblad,
    propagate_unitary,
    realized_gate,
)
from holonome.frames import lambda_frame
from holonome.laws import constant_laws
from holonome.numerics import NumericalContractError, fidelity_up_to_global_phase, max_abs
from holonome.paths import S_GATE, op_schedule, ossp_schedule, target_su2
from holonome.reverse import reverse_hamiltonian

ZERO_H = lambda t: np.zeros((3, 3), dtype=complex)


def _ket(i, dim=3):
    v = np.zeros(dim, dtype=complex)
    v[i] = 1.0
    return v


def _projector(v):
    return np.outer(v, v.conj())


def test_constant_hamiltonian_matches_taylor_oracle():
    rng = np.random.default_rng(5)
    h = random_hermitian(rng, 3)
    u = propagate_unitary(lambda t: h, 0.8, steps=200)
    assert max_abs(u - taylor_expm(h, 0.8)) < 1e-12


def test_boundaries_do_not_change_constant_evolution():
    rng = np.random.default_rng(6)
    h = random_hermitian(rng, 3)
    a = propagate_unitary(lambda t: h, 1.0, steps=300)
    b = propagate_unitary(lambda t: h, 1.0, steps=300, boundaries=(0.3, 0.7))
    assert max_abs(a - b) < 1e-13


def test_piecewise_split_matches_manual_product():
    laws = op_schedule(math.pi / 3, math.pi).to_laws()
    h_fn = lambda t: reverse_hamiltonian(lambda_frame(laws, t, ancilla="dark"))
    steps = 1200
    u = propagate_unitary(h_fn, laws.duration, steps, boundaries=laws.boundaries[1:-1])
    manual = np.eye(3, dtype=complex)
    for t0, t1, _ in laws.smooth_segments():
        n = max(1, round(steps * (t1 - t0) / laws.duration))
        manual = propagate_unitary(lambda s: h_fn(t0 + s), t1 - t0, n) @ manual
    assert max_abs(u - manual) < 1e-13


@pytest.mark.parametrize("kind,expected_dev", [("op", 1e-6), ("ossp", 1e-10)])
def test_stock_schedules_realize_s_gate(kind, expected_dev):
    sch = op_schedule(math.pi / 3, math.pi) if kind == "op" else ossp_schedule(math.pi / 4)
    laws = sch.to_laws()
    h_fn = lambda t: reverse_hamiltonian(lambda_frame(laws, t, ancilla="dark"))
    u = propagate_unitary(h_fn, laws.duration, 2000, boundaries=laws.boundaries[1:-1])
    gate = realized_gate(u, lambda_frame(laws, 0.0, ancilla="dark"))
    expected = np.diag([np.exp(-1j * math.pi / 4), np.exp(1j * math.pi / 4)])
    assert max_abs(gate - expected) < expected_dev
    assert fidelity_up_to_global_phase(gate, target_su2(S_GATE)) > 1.0 - 1e-9
    assert gate_leakage(gate) < 1e-9


def test_propagate_unitary_validation():
    with pytest.raises(ValueError):
        propagate_unitary(ZERO_H, 1.0, steps=0)
    with pytest.raises(ValueError):
        propagate_unitary(ZERO_H, 0.0)


def test_decay_closed_forms():
    kappa, tau = 0.8, 1.0
    params = LindbladParams(kappa_minus=kappa)
    rho = propagate_lindblad(ZERO_H, _projector(_ket(1)), params, tau, steps=400)
    assert rho[1, 1].real == pytest.approx(math.exp(-kappa * tau), abs=1e-10)
    assert rho[0, 0].real == pytest.approx(1.0 - math.exp(-kappa * tau), abs=1e-10)
    rho_e = propagate_lindblad(ZERO_H, _projector(_ket(2)), params, tau, steps=400)
    assert rho_e[2, 2].real == pytest.approx(math.exp(-2.0 * kappa * tau), abs=1e-10)


def test_dephasing_closed_forms():
    kappa, tau = 0.6, 1.0
    params = LindbladParams(kappa_z=kappa)
    plus01 = (_ket(0) + _ket(1)) / math.sqrt(2.0)
    rho = propagate_lindblad(ZERO_H, _projector(plus01), params, tau, steps=400)
    assert abs(rho[0, 1] - 0.5 * math.exp(-kappa * tau / 2.0)) < 1e-10
    assert rho[0, 0].real == pytest.approx(0.5, abs=1e-12)
    plus0e = (_ket(0) + _ket(2)) / math.sqrt(2.0)
    rho = propagate_lindblad(ZERO_H, _projector(plus0e), params, tau, steps=400)
    assert abs(rho[0, 2] - 0.5 * math.exp(-2.0 * kappa * tau)) < 1e-10


def test_rk4_fourth_order_on_decay():
    params = LindbladParams(kappa_minus=1.0)
    errs = []
    for n in (8, 16):
        rho = propagate_lindblad(ZERO_H, _projector(_ket(1)), params, 1.0, steps=n)
        errs.append(abs(rho[1, 1].real - math.exp(-1.0)))
    assert 12.0 < errs[0] / errs[1] < 22.0


def test_propagate_lindblad_validation():
    params = LindbladParams()
    good = _projector(_ket(0))
    with pytest.raises(ValueError, match="trace"):
        propagate_lindblad(ZERO_H, 0.5 * good, params, 1.0)
    skew = good.copy()
    skew[0, 1] = 1e-3
    with pytest.raises(ValueError, match="Hermitian"):
        propagate_lindblad(ZERO_H, skew, params, 1.0)
    with pytest.raises(ValueError, match="negative"):
        propagate_lindblad(ZERO_H, np.diag([1.5, -0.5, 0.0]).astype(complex), params, 1.0)
    with pytest.raises(ValueError):
        propagate_lindblad(ZERO_H, good, params, -1.0)
    with pytest.raises(ValueError):
        propagate_lindblad(ZERO_H, good, params, 1.0, steps=0)


def test_non_hermitian_samples_rejected():
    bad = lambda t: np.array([[0.0, 1.0, 0], [0, 0, 0], [0, 0, 0]], dtype=complex)
    with pytest.raises(NumericalContractError, match="Hermitian"):
        propagate_lindblad(bad, _projector(_ket(0)), LindbladParams(), 1.0, steps=10)


def test_lindblad_params_validation():
    with pytest.raises(ValueError):
        LindbladParams(kappa_z=-1.0)


def test_gate_report_validates_fidelity():
    eye = np.eye(2, dtype=complex)
    with pytest.raises(ValueError):
        GateReport(eye, eye, fidelity=1.5, leakage=0.0, pulse_area=0.0,
                   duration=1.0, phases=(0.0, 0.0))


def test_realized_gate_and_leakage():
    laws = constant_laws(1.0, theta=math.pi, chi=0.4, xi=0.1)
    frame = lambda_frame(laws, 0.0, ancilla="dark")
    gate = realized_gate(np.eye(3, dtype=complex), frame)
    assert max_abs(gate - np.eye(2)) < 1e-15
    assert gate_leakage(gate) == pytest.approx(0.0, abs=1e-15)
    assert gate_leakage(np.diag([0.7, 0.7])) == pytest.approx(1.0 - 0.49)


def test_haar_average_fidelity_frozen():
    s = np.diag([1.0, 1j])
    z = np.diag([1.0, -1.0]).astype(complex)
    assert haar_average_fidelity(s, s) == pytest.approx(1.0)
    assert haar_average_fidelity(s, z) == pytest.approx(2.0 / 3.0)


# ------------------------------------------------------- average fidelity

def test_average_fidelity_closed_form_for_diagonal_gate():
    """U = diag(1, e^{i delta}) against the identity target gives
    (751 + 250 cos delta) / 1001 exactly on the 1001-state family."""
    w = 1.3
    h_fn = lambda t: np.diag([0.0, w, 0.0]).astype(complex)
    logical = np.eye(3, dtype=complex)[:2]
    got = average_fidelity(h_fn, 1.0, np.eye(2, dtype=complex), LindbladParams(),
                           logical=logical, steps=200)
    assert got == pytest.approx((751.0 + 250.0 * math.cos(w)) / 1001.0, abs=1e-9)


def test_average_fidelity_is_linear_in_the_initial_matrix():
    """Oracle for the three-basis-matrix shortcut: reconstructed family states
    match direct propagation of the pure states through the public API."""
    laws = ossp_schedule(math.pi / 4).to_laws()
    batch = partial(dark_ancilla_samples, laws)
    frame0 = lambda_frame(laws, 0.0, ancilla="dark")
    logical = frame0.states[list(frame0.computational)]
    params = LindbladParams(kappa_z=2e5, kappa_minus=3e5)
    kw = dict(steps=800, boundaries=tuple(laws.boundaries[1:-1]), batch_fn=batch)

    l0, l1 = logical
    plus = (l0 + l1) / math.sqrt(2.0)
    e = {}
    for name, rho0 in (("p00", _projector(l0)), ("p11", _projector(l1)),
                       ("plus", _projector(plus))):
        e[name] = propagate_lindblad(None, rho0, params, laws.duration, **kw)
    e_cross = 2.0 * e["plus"] - e["p00"] - e["p11"]

    target = target_su2(S_GATE)
    fs = []
    thetas = 2.0 * np.pi * np.arange(1001) / 1000.0
    for i in (1, 137, 444, 700, 998):
        th = thetas[i]
        nu0 = math.cos(th) * l0 + math.sin(th) * l1
        direct = propagate_lindblad(None, _projector(nu0), params, laws.duration, **kw)
        rebuilt = (math.cos(th) ** 2 * e["p00"] + math.sin(th) ** 2 * e["p11"]
                   + math.cos(th) * math.sin(th) * e_cross)
        assert max_abs(direct - rebuilt) < 1e-12
    for th in thetas:
        rho = (math.cos(th) ** 2 * e["p00"] + math.sin(th) ** 2 * e["p11"]
               + math.cos(th) * math.sin(th) * e_cross)
        wvec = target @ np.array([math.cos(th), math.sin(th)]) @ logical
        fs.append(float(np.vdot(wvec, rho @ wvec).real))
    manual = math.fsum(fs) / len(fs)
    got = average_fidelity(None, laws.duration, target, params, logical=logical, **kw)
    assert got == pytest.approx(manual, abs=1e-13)


def test_average_fidelity_reaches_one_without_decoherence():
    laws = ossp_schedule(math.pi / 4).to_laws()
    frame0 = lambda_frame(laws, 0.0, ancilla="dark")
    logical = frame0.states[list(frame0.computational)]
    got = average_fidelity(None, laws.duration, target_su2(S_GATE), LindbladParams(),
                           logical=logical, steps=800,
                           boundaries=tuple(laws.boundaries[1:-1]),
                           batch_fn=partial(dark_ancilla_samples, laws))
    assert got > 1.0 - 1e-9


def test_average_fidelity_rejects_bad_logical():
    logical = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError, match="orthonormal"):
        average_fidelity(ZERO_H, 1.0, np.eye(2, dtype=complex), LindbladParams(),
                         logical=logical, steps=10)


# ----------------------------------------------------------------- sweeps

def _ossp_case(name="ossp"):
    laws = ossp_schedule(math.pi / 4).to_laws()
    frame0 = lambda_frame(laws, 0.0, ancilla="dark")
    return SweepCase(
        name=name, h_fn=None, tau=laws.duration,
        boundaries=tuple(laws.boundaries[1:-1]),
        logical=frame0.states[list(frame0.computational)],
        target=target_su2(S_GATE),
        batch_fn=partial(dark_ancilla_samples, laws))


def test_sweep_case_needs_some_hamiltonian():
    case = _ossp_case()
    with pytest.raises(ValueError, match="h_fn or batch_fn"):
        SweepCase(name="none", h_fn=None, tau=case.tau, boundaries=case.boundaries,
                  logical=case.logical, target=case.target)


def test_kappa_sweep_monotone_and_matches_unitary_at_zero():
    case = _ossp_case()
    unit = 2.0 * math.pi * 20e3
    result = kappa_sweep([case], [0.0, 2.0 * unit, 8.0 * unit],
                         steps=600, unitary_steps=2000)
    fids = [row[2][0] for row in result.rows]
    assert fids[0] > 1.0 - 1e-9
    assert fids[0] > fids[1] > fids[2]
    assert result.unitary_match is not None and result.unitary_match < 1e-7
    assert result.trace_drift < 1e-10
    assert result.hermiticity_defect < 1e-12
    assert result.min_eigenvalue > -1e-10


def test_kappa_sweep_accepts_rate_pairs():
    case = _ossp_case()
    kz, km = 3e5, 1e5
    paired = kappa_sweep([case], [(kz, km)], steps=600)
    scalar = average_fidelity(None, case.tau, case.target,
                              LindbladParams(kappa_z=kz, kappa_minus=km),
                              logical=case.logical, steps=600,
                              boundaries=case.boundaries, batch_fn=case.batch_fn)
    assert paired.rows[0][2][0] == pytest.approx(scalar, abs=1e-13)


def test_kappa_sweep_rows_do_not_depend_on_grid_order():
    case = _ossp_case()
    unit = 2.0 * math.pi * 20e3
    grid = [unit, 3.0 * unit, 6.0 * unit]
    fwd = kappa_sweep([case], grid, steps=400)
    rev = kappa_sweep([case], grid[::-1], steps=400)
    for row in fwd.rows:
        match = [r for r in rev.rows if r[0] == row[0]]
        assert match and match[0][2] == row[2]  # bitwise, not approximately


def test_kappa_sweep_rejects_empty_grid():
    with pytest.raises(ValueError, match="empty"):
        kappa_sweep([_ossp_case()], [], steps=100)
