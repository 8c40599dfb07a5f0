"""Hamiltonian synthesis from a moving frame, plus the checks it must pass.

Given an orthonormal frame psi_1..psi_L (computational) and one or two
trailing ancilla states, the synthesized Hamiltonian transports every
computational projector exactly (von Neumann residual at float precision) and
keeps the computational diagonal at eta times the frame connection.  The free
real rate gamma_rate shifts only the first ancilla's diagonal.

Geometric phases are accumulated by per-segment Simpson quadrature of the
frame connection; zero-duration jump segments contribute analytically.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .frames import FrameFn, StateFrame, connections, gram_defect
from .laws import LawsPoint, PathLaws, SegmentLaws
from .numerics import dagger, max_abs

GRAM_TOL = 1e-10

# a gamma rate is a plain number or a callable evaluated at the frame time
GammaRate = float | Callable[[float], float]


def _rate_at(gamma_rate, t: float) -> float:
    if callable(gamma_rate):
        return float(gamma_rate(t))
    return float(gamma_rate)


def _require_orthonormal(frame: StateFrame) -> None:
    defect = gram_defect(frame)
    if defect > GRAM_TOL:
        raise ValueError(
            f"frame is not orthonormal: Gram defect {defect:.3e} > {GRAM_TOL}")


def _coupling(h: np.ndarray, frame: StateFrame, row: int, col: int) -> None:
    # h += i<psi_row|dpsi_col> |psi_row><psi_col| + H.c., in place
    c = 1j * np.vdot(frame.states[row], frame.derivs[col])
    k = c * np.outer(frame.states[row], frame.states[col].conj())
    h += k + dagger(k)


def _intra_computational(h: np.ndarray, frame: StateFrame) -> None:
    s, d = frame.states, frame.derivs
    for i in frame.computational:
        for j in frame.computational:
            if i != j:
                h += 1j * np.vdot(s[j], d[i]) * np.outer(s[j], s[i].conj())


def _ancilla_diagonal(h: np.ndarray, frame: StateFrame, index: int, rate: float) -> None:
    coeff = 1j * np.vdot(frame.states[index], frame.derivs[index]) - rate
    h += coeff * np.outer(frame.states[index], frame.states[index].conj())


def reverse_hamiltonian(frame: StateFrame, gamma_rate=0.0) -> np.ndarray:
    """Hamiltonian transporting a frame with a single ancilla state.

    Three terms: coupling of every computational state to the ancilla,
    the ancilla diagonal i<psi_a|dpsi_a> - gamma_rate, and the
    intra-computational terms i<psi_j|dpsi_i> (i != j).  gamma_rate may be a
    number or a callable of time.  Output is Hermitian by assembly.
    """
    _require_orthonormal(frame)
    if len(frame.ancilla) != 1:
        raise ValueError(f"expected exactly one ancilla state, got {len(frame.ancilla)}")
    (a,) = frame.ancilla
    h = np.zeros((frame.dim, frame.dim), dtype=complex)
    for i in frame.computational:
        _coupling(h, frame, i, a)
    _ancilla_diagonal(h, frame, a, _rate_at(gamma_rate, frame.time))
    _intra_computational(h, frame)
    return 0.5 * (h + dagger(h))


def reverse_hamiltonian_unconv(frame: StateFrame, gamma_rate=0.0, eta: float = 0.0) -> np.ndarray:
    """Variant whose computational diagonal tracks eta times the connection.

    Adds eta * <psi_j|i d_t|psi_j> |psi_j><psi_j| over computational j, so
    each transported state picks up the unconventional phase (1 - eta) times
    its conventional value.  eta = 0 reduces to reverse_hamiltonian.
    """
    if not np.isfinite(eta):
        raise ValueError("eta must be finite")
    h = reverse_hamiltonian(frame, gamma_rate)
    if eta != 0.0:
        conn = connections(frame)
        for j in frame.computational:
            h += eta * conn[j] * np.outer(frame.states[j], frame.states[j].conj())
    return h


def reverse_hamiltonian_two_ancilla(frame: StateFrame, gamma_rates=(0.0, 0.0)) -> np.ndarray:
    """Hamiltonian transporting a frame with two ancilla states.

    Computational states couple to the first ancilla only; the second enters
    through its own diagonal (shifted by the second gamma rate) and the
    ancilla-ancilla coupling i<psi_a1|dpsi_a2> |psi_a1><psi_a2| + H.c.
    """
    _require_orthonormal(frame)
    if len(frame.ancilla) != 2:
        raise ValueError(f"expected exactly two ancilla states, got {len(frame.ancilla)}")
    a1, a2 = frame.ancilla
    h = np.zeros((frame.dim, frame.dim), dtype=complex)
    for i in frame.computational:
        _coupling(h, frame, i, a1)
    for a, g in zip((a1, a2), gamma_rates):
        _ancilla_diagonal(h, frame, a, _rate_at(g, frame.time))
    _coupling(h, frame, a1, a2)
    _intra_computational(h, frame)
    return 0.5 * (h + dagger(h))


def von_neumann_residual(h: np.ndarray, frame: StateFrame) -> float:
    """max-entry of dP_i/dt + i[H, P_i] over computational projectors P_i."""
    worst = 0.0
    for i in frame.computational:
        s, d = frame.states[i], frame.derivs[i]
        p = np.outer(s, s.conj())
        dp = np.outer(d, s.conj()) + np.outer(s, d.conj())
        worst = max(worst, max_abs(dp + 1j * (h @ p - p @ h)))
    return worst


def parallel_transport_residual(h: np.ndarray, frame: StateFrame, eta: float = 0.0) -> float:
    """max_i |<psi_i|H|psi_i> - eta * <psi_i|i d_t|psi_i>| over computational i."""
    conn = connections(frame)
    worst = 0.0
    for i in frame.computational:
        expect = np.vdot(frame.states[i], h @ frame.states[i])
        worst = max(worst, abs(expect - eta * conn[i]))
    return float(worst)


def _even_steps(total_steps: int, span: float, duration: float) -> int:
    n = int(np.ceil(total_steps * span / duration))
    return max(2, n + (n % 2))


def _simpson_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n + 1, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (h / 3.0)


def geometric_phase(frame_fn: FrameFn, index: int, tau: float, steps: int = 2000,
                    *, boundaries: Sequence[float] = ()) -> float:
    """Simpson quadrature of <psi_index|i d_t|psi_index> over [0, tau].

    Piecewise-smooth connections need their kink times passed as boundaries;
    each piece is integrated on its own uniform grid.  For a cyclic path this
    is the geometric phase of the indexed state.
    """
    if steps < 1000:
        raise ValueError("steps must be >= 1000")
    if tau <= 0.0:
        raise ValueError("tau must be > 0")
    edges = sorted({0.0, float(tau), *(float(b) for b in boundaries if 0.0 < b < tau)})
    total = 0.0
    for t0, t1 in zip(edges[:-1], edges[1:]):
        n = _even_steps(steps, t1 - t0, tau)
        ts = np.linspace(t0, t1, n + 1)
        # laws are right-continuous, so the closing sample must sit just
        # inside the piece or it reads the next segment's rates
        ts[-1] = t1 - (t1 - t0) * 1e-12
        vals = np.array([connections(frame_fn(t))[index] for t in ts])
        total += float(vals @ _simpson_weights(n, (t1 - t0) / n))
    return total


def _segment_point(seg: SegmentLaws, s: float) -> LawsPoint:
    return LawsPoint(
        seg.theta.at(s), seg.phi.at(s), seg.chi.at(s), seg.xi.at(s),
        seg.theta.rate, seg.phi.rate, seg.chi.rate, seg.xi.rate,
    )


def path_phases(laws: PathLaws, frame_at_point: Callable[[LawsPoint], StateFrame],
                steps: int = 2000) -> np.ndarray:
    """Per-state connection integrals over a whole path, one value per state.

    Smooth segments are integrated by Simpson on segment-aligned grids.  A
    jump by delta in one angle contributes delta times the connection taken
    at unit rate in that angle: the connection is linear in the rates and its
    coefficients do not depend on the jumped angle for any frame here, so the
    jump integral collapses to that product.
    """
    if steps < 1000:
        raise ValueError("steps must be >= 1000")
    probe = frame_at_point(laws.at(0.0))
    total = np.zeros(probe.nstates)
    # integrate in segment-local time: global boundary differences can round
    # away short segments whose phase contribution is finite
    for _, _, seg in laws.smooth_segments():
        n = _even_steps(steps, seg.duration, laws.duration)
        w = _simpson_weights(n, seg.duration / n)
        for k, s in enumerate(np.linspace(0.0, seg.duration, n + 1)):
            total += w[k] * connections(frame_at_point(_segment_point(seg, s)))
    zero_rates = {f"d{name}": 0.0 for name in ("theta", "phi", "chi", "xi")}
    for _, seg in laws.jump_segments():
        base = _segment_point(seg, 0.0)._replace(**zero_rates)
        for name, delta in seg.jumps:
            unit = base._replace(**{f"d{name}": 1.0})
            total += delta * connections(frame_at_point(unit))
    return total
