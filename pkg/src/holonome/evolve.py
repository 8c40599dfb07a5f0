"""Closed- and open-system propagation, gate extraction, fidelity sweeps.

Unitary evolution multiplies midpoint-sampled matrix exponentials on a
segment-aligned grid; open evolution integrates the three-level master
equation with classic RK4 and per-step rehermitization.  Gate quality is
scored with the 1001-state average used throughout: equatorial-plane
superpositions cos(theta_i) L0 + sin(theta_i) L1 of a logical pair,
theta_i = 2 pi i / 1000, summed in fixed index order so reports are
bitwise reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .frames import StateFrame
from .numerics import HERMITICITY_TOL, NumericalContractError, dagger, max_abs, unitary_step

HamiltonianFn = Callable[[float], np.ndarray]
BatchHamiltonianFn = Callable[[np.ndarray], np.ndarray]

DEFAULT_UNITARY_STEPS = 20_000
DEFAULT_LINDBLAD_STEPS = 40_000
TRACE_DRIFT_LIMIT = 1e-6
N_FIDELITY_STATES = 1001

# collapse operators on (|0>, |1>, |e>): ladder decay and number-like dephasing
DECAY_OP = np.array([
    [0.0, 1.0, 0.0],
    [0.0, 0.0, np.sqrt(2.0)],
    [0.0, 0.0, 0.0],
], dtype=complex)
DEPHASE_OP = np.diag([0.0, 1.0, 2.0]).astype(complex)

_DECAY_DAG = DECAY_OP.conj().T
_DECAY_NORM = _DECAY_DAG @ DECAY_OP
_DEPHASE_NORM = DEPHASE_OP @ DEPHASE_OP


@dataclass(frozen=True)
class LindbladParams:
    """Dephasing and decay rates, rad/s."""

    kappa_z: float = 0.0
    kappa_minus: float = 0.0

    def __post_init__(self):
        if self.kappa_z < 0.0 or self.kappa_minus < 0.0:
            raise ValueError("decoherence rates must be >= 0")


@dataclass(frozen=True)
class GateReport:
    """Everything a gate run certifies, for serialization."""

    realized: np.ndarray
    target: np.ndarray
    fidelity: float
    leakage: float
    pulse_area: float
    duration: float
    phases: tuple[float, ...]

    def __post_init__(self):
        if not -1e-9 <= self.fidelity <= 1.0 + 1e-9:
            raise ValueError(f"fidelity {self.fidelity} outside [0, 1]")


def _pieces(tau: float, steps: int, boundaries: Sequence[float]) -> list[tuple[float, float, int]]:
    """(start, span, n_steps) per smooth piece, steps split by duration."""
    edges = sorted({0.0, float(tau), *(float(b) for b in boundaries if 0.0 < b < float(tau))})
    out = []
    for t0, t1 in zip(edges[:-1], edges[1:]):
        span = t1 - t0
        if span > 0.0:
            out.append((t0, span, max(1, int(round(steps * span / tau)))))
    return out


def propagate_unitary(h_fn: HamiltonianFn, tau: float, steps: int = DEFAULT_UNITARY_STEPS,
                      *, boundaries: Sequence[float] = ()) -> np.ndarray:
    """Ordered product of exp(-i H(t_mid) dt) over a segment-aligned grid.

    boundaries lists interior times where H(t) kinks or jumps, so no step
    straddles one; zero-duration jumps contribute the identity.  The total
    step count is approximately steps, split per piece by duration.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if tau <= 0.0:
        raise ValueError("tau must be > 0")
    u = None
    for t0, span, n in _pieces(tau, steps, boundaries):
        dt = span / n
        for i in range(n):
            h = h_fn(t0 + (i + 0.5) * dt)
            if u is None:
                u = np.eye(h.shape[0], dtype=complex)
            u = unitary_step(h, dt) @ u
    return u


def realized_gate(u: np.ndarray, frame0: StateFrame,
                  comp_indices: Sequence[int] | None = None) -> np.ndarray:
    """<psi_i(0)| U |psi_j(0)> over the computational states of frame0."""
    comp = tuple(frame0.computational if comp_indices is None else comp_indices)
    states = frame0.states
    return np.array([[np.vdot(states[i], u @ states[j]) for j in comp] for i in comp])


def gate_leakage(gate: np.ndarray) -> float:
    """1 - sum|entries|^2 / dim: population leaving the computational span."""
    d = gate.shape[0]
    return float(1.0 - float(np.sum(np.abs(gate) ** 2)) / d)


def haar_average_fidelity(realized: np.ndarray, target: np.ndarray) -> float:
    """(|tr(target^dag realized)|^2 + d) / (d^2 + d), the Haar-average state
    fidelity between unitaries.  Reported for reference only; the acceptance
    pipeline scores gates with the 1001-state estimator instead."""
    d = realized.shape[0]
    tr = np.trace(target.conj().T @ realized)
    return float((abs(tr) ** 2 + d) / (d * d + d))


def _check_density(rho: np.ndarray) -> None:
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    if abs(np.trace(rho) - 1.0) > 1e-9:
        raise ValueError(f"density matrix trace {np.trace(rho)} != 1")
    if max_abs(rho - dagger(rho)) > 1e-9:
        raise ValueError("density matrix is not Hermitian")
    if float(np.min(np.linalg.eigvalsh(rho))) < -1e-9:
        raise ValueError("density matrix has a negative eigenvalue")


class _SampledHamiltonian:
    """H(t) sampled at RK4 nodes and midpoints of a segment-aligned grid."""

    def __init__(self, h_fn: HamiltonianFn | None, tau: float, steps: int,
                 boundaries: Sequence[float], batch_fn: BatchHamiltonianFn | None = None):
        self.tau = float(tau)
        self.pieces = []
        for t0, span, n in _pieces(tau, steps, boundaries):
            dt = span / n
            t_nodes = t0 + dt * np.arange(n + 1)
            # closing node sampled just inside: laws evaluate right-continuously
            t_nodes[-1] = t0 + span * (1.0 - 1e-12)
            t_mids = t0 + dt * (np.arange(n) + 0.5)
            if batch_fn is not None:
                nodes, mids = batch_fn(t_nodes), batch_fn(t_mids)
            else:
                nodes = np.stack([h_fn(float(t)) for t in t_nodes])
                mids = np.stack([h_fn(float(t)) for t in t_mids])
            for hs in (nodes, mids):
                defect = max_abs(hs - dagger(hs))
                if defect > HERMITICITY_TOL * max(1.0, max_abs(hs)):
                    raise NumericalContractError(
                        f"non-Hermitian Hamiltonian sample, defect {defect:.3e}")
            self.pieces.append((nodes, mids, dt, n))
        self.dim = self.pieces[0][0].shape[-1] if self.pieces else 0


def _lindblad_rhs(h, rhos, kz, km):
    # rhos: (..., d, d); kz/km broadcast against the leading axes
    out = -1j * (h @ rhos - rhos @ h)
    zr = DEPHASE_OP @ rhos
    out += (0.5 * kz) * (2.0 * zr @ DEPHASE_OP - _DEPHASE_NORM @ rhos - rhos @ _DEPHASE_NORM)
    mr = DECAY_OP @ rhos
    out += (0.5 * km) * (2.0 * mr @ _DECAY_DAG - _DECAY_NORM @ rhos - rhos @ _DECAY_NORM)
    return out


def _propagate_rhos(sampled: _SampledHamiltonian, rhos: np.ndarray,
                    kz, km) -> np.ndarray:
    """Classic RK4 over the sampled grid with per-step rehermitization."""
    for nodes, mids, dt, n in sampled.pieces:
        for i in range(n):
            h0, hm, h1 = nodes[i], mids[i], nodes[i + 1]
            k1 = _lindblad_rhs(h0, rhos, kz, km)
            k2 = _lindblad_rhs(hm, rhos + (0.5 * dt) * k1, kz, km)
            k3 = _lindblad_rhs(hm, rhos + (0.5 * dt) * k2, kz, km)
            k4 = _lindblad_rhs(h1, rhos + dt * k3, kz, km)
            rhos = rhos + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            rhos = 0.5 * (rhos + dagger(rhos))
    return rhos


def propagate_lindblad(h_fn: HamiltonianFn, rho0: np.ndarray, params: LindbladParams,
                       tau: float, steps: int = DEFAULT_LINDBLAD_STEPS,
                       *, boundaries: Sequence[float] = (),
                       batch_fn: BatchHamiltonianFn | None = None) -> np.ndarray:
    """Evolve one density matrix under H(t) plus dephasing/decay channels."""
    _check_density(rho0)
    if tau <= 0.0:
        raise ValueError("tau must be > 0")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    sampled = _SampledHamiltonian(h_fn, tau, steps, boundaries, batch_fn)
    rho = _propagate_rhos(sampled, rho0.astype(complex), params.kappa_z, params.kappa_minus)
    drift = abs(np.trace(rho) - np.trace(rho0))
    if drift > TRACE_DRIFT_LIMIT:
        raise NumericalContractError(
            f"trace drifted by {drift:.3e}; increase steps")
    return rho


def _theta_family(n: int = N_FIDELITY_STATES) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / (n - 1)


def _logical_basis_matrices(logical: np.ndarray) -> np.ndarray:
    l0, l1 = logical
    p00 = np.outer(l0, l0.conj())
    p11 = np.outer(l1, l1.conj())
    cross = np.outer(l0, l1.conj()) + np.outer(l1, l0.conj())
    return np.stack([p00, p11, cross])


def _check_logical(logical: np.ndarray) -> np.ndarray:
    logical = np.asarray(logical, dtype=complex)
    if logical.ndim != 2 or logical.shape[0] != 2:
        raise ValueError(f"logical pair must be a (2, dim) array, got {logical.shape}")
    gram = logical @ logical.conj().T
    if max_abs(gram - np.eye(2)) > 1e-9:
        raise ValueError("logical pair is not orthonormal")
    return logical


def _target_images(logical: np.ndarray, target: np.ndarray) -> np.ndarray:
    """target |nu_i(0)> for the whole theta family, shape (n, dim)."""
    thetas = _theta_family()
    coords = np.stack([np.cos(thetas), np.sin(thetas)])       # (2, n)
    return (target @ coords).T @ logical                       # (n, dim)


def _family_coefficients() -> np.ndarray:
    """Expansion of each family state's density matrix over the basis trio.

    Every rho_i(0) is cos^2 P00 + sin^2 P11 + cos sin (cross), so by channel
    linearity the evolved rho_i(tau) is the same combination of the evolved
    basis matrices.
    """
    thetas = _theta_family()
    c, s = np.cos(thetas), np.sin(thetas)
    return np.stack([c * c, s * s, c * s], axis=1)


def average_fidelity(h_fn: HamiltonianFn, tau: float, target: np.ndarray,
                     params: LindbladParams, *, logical: np.ndarray,
                     steps: int = DEFAULT_LINDBLAD_STEPS,
                     boundaries: Sequence[float] = (),
                     batch_fn: BatchHamiltonianFn | None = None) -> float:
    """1001-state average overlap <nu_i(tau)| rho_i(tau) |nu_i(tau)>.

    nu_i(0) = cos(theta_i) L0 + sin(theta_i) L1 over the logical pair rows
    of logical; nu_i(tau) = target nu_i(0).  Linearity of the channel lets
    three basis-matrix propagations cover the whole family exactly.
    """
    logical = _check_logical(logical)
    sampled = _SampledHamiltonian(h_fn, tau, steps, boundaries, batch_fn)
    outs = _propagate_rhos(sampled, _logical_basis_matrices(logical),
                           params.kappa_z, params.kappa_minus)
    drift = float(np.max(np.abs(np.einsum("cdd->c", outs) - np.array([1.0, 1.0, 0.0]))))
    if drift > TRACE_DRIFT_LIMIT:
        raise NumericalContractError(f"trace drifted by {drift:.3e}; increase steps")
    rhos = np.einsum("nc,cde->nde", _family_coefficients(), outs)
    w = _target_images(logical, target)
    f = np.einsum("nd,nde,ne->n", w.conj(), rhos, w).real
    return math.fsum(f) / len(f)


@dataclass(frozen=True)
class SweepCase:
    """One schedule entering a decoherence sweep."""

    name: str
    h_fn: HamiltonianFn | None
    tau: float
    boundaries: tuple[float, ...]
    logical: np.ndarray
    target: np.ndarray
    batch_fn: BatchHamiltonianFn | None = None

    def __post_init__(self):
        if self.h_fn is None and self.batch_fn is None:
            raise ValueError("case needs h_fn or batch_fn")


@dataclass(frozen=True)
class SweepResult:
    """Sweep table plus the numerical-contract diagnostics of the whole run."""

    names: tuple[str, ...]
    rows: tuple[tuple[float, float, tuple[float, ...]], ...]
    trace_drift: float
    hermiticity_defect: float
    min_eigenvalue: float
    unitary_match: float | None


def _normalize_grid(kappa_grid) -> list[tuple[float, float]]:
    pairs = []
    for entry in kappa_grid:
        if np.isscalar(entry):
            pairs.append((float(entry), float(entry)))
        else:
            kz, km = entry
            pairs.append((float(kz), float(km)))
    if not pairs:
        raise ValueError("kappa grid is empty")
    return pairs


def kappa_sweep(cases: Sequence[SweepCase], kappa_grid,
                *, steps: int = DEFAULT_LINDBLAD_STEPS,
                unitary_steps: int = 4 * DEFAULT_UNITARY_STEPS) -> SweepResult:
    """Average fidelity of every case at every decoherence rate.

    Grid entries are either a single kappa (applied to both channels) or a
    (kappa_z, kappa_minus) pair.  All rates propagate in one batched RK4
    pass per case, reusing one set of Hamiltonian samples; diagnostics
    aggregate over every reconstructed family state at every rate.  When the
    grid contains a zero row, the evolved kappa = 0 basis matrices are also
    checked against unitary propagation (unitary_match).
    """
    pairs = _normalize_grid(kappa_grid)
    kz = np.array([p[0] for p in pairs])[:, None, None, None]
    km = np.array([p[1] for p in pairs])[:, None, None, None]

    fids = np.zeros((len(pairs), len(cases)))
    trace_drift = 0.0
    herm_defect = 0.0
    min_eig = np.inf
    unitary_match: float | None = None

    for ci, case in enumerate(cases):
        logical = _check_logical(case.logical)
        sampled = _SampledHamiltonian(case.h_fn, case.tau, steps,
                                      case.boundaries, case.batch_fn)
        basis = _logical_basis_matrices(logical)
        outs = _propagate_rhos(sampled, np.broadcast_to(
            basis, (len(pairs),) + basis.shape).copy(), kz, km)

        ftraces = np.einsum("kcdd->kc", outs)
        trace_drift = max(trace_drift, float(np.max(np.abs(
            ftraces - np.array([1.0, 1.0, 0.0])))))
        if trace_drift > TRACE_DRIFT_LIMIT:
            raise NumericalContractError(
                f"trace drifted by {trace_drift:.3e}; increase steps")

        rhos = np.einsum("nc,kcde->knde", _family_coefficients(), outs)
        herm_defect = max(herm_defect, max_abs(rhos - dagger(rhos)))
        min_eig = min(min_eig, float(np.min(np.linalg.eigvalsh(rhos))))

        w = _target_images(logical, case.target)
        f = np.einsum("nd,knde,ne->kn", w.conj(), rhos, w).real
        for ki in range(len(pairs)):
            fids[ki, ci] = math.fsum(f[ki]) / f.shape[1]

        zero_rows = [ki for ki, p in enumerate(pairs) if p == (0.0, 0.0)]
        if zero_rows:
            u = _case_unitary(case, unitary_steps)
            closed = np.einsum("ab,cbe,de->cad", u, basis, u.conj())
            diff = max(max_abs(outs[ki] - closed) for ki in zero_rows)
            unitary_match = diff if unitary_match is None else max(unitary_match, diff)

    rows = tuple((pairs[ki][0], pairs[ki][1], tuple(float(x) for x in fids[ki]))
                 for ki in range(len(pairs)))
    return SweepResult(tuple(c.name for c in cases), rows, trace_drift,
                       herm_defect, min_eig, unitary_match)


def _case_unitary(case: SweepCase, steps: int) -> np.ndarray:
    h_fn = case.h_fn
    if h_fn is None:
        def h_fn(t: float) -> np.ndarray:
            return case.batch_fn(np.array([t]))[0]
    return propagate_unitary(h_fn, case.tau, steps, boundaries=case.boundaries)
