"""Closed-form drive Hamiltonians for the supported frame families.

Hand-derived counterparts of the generic synthesis in reverse: assembled
independently from trig formulas, Hermitian by construction, and used as
cross-checks plus the laboratory pulse view.  The generic constructor is
ground truth; the two-laser family is known to deviate from it in places, so
callers report those deviations instead of asserting them away.

Basis conventions: single-qubit forms act on (|0>, |1>, |e>); the two-qubit
form acts on (|00>, |01>, |10>, |11>, |ee>, |0e>).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import CHI_GUARD, SingularConfiguration
from .laws import PathLaws

PHASE_CONVENTIONS = ("rate", "angle")


@dataclass(frozen=True)
class LaserParams:
    """Two-laser drive parameters on a Lambda system.

    hamiltonian() assembles

        rabi_0e |0><e| + rabi_1e |1><e| + H.c.
        - detuning_0 |0><0| - detuning_1 |1><1| - detuning_e |e><e|

    so positive detunings lower the corresponding diagonal entry, the usual
    rotating-frame sign.
    """

    rabi_0e: complex
    rabi_1e: complex
    detuning_0: float = 0.0
    detuning_1: float = 0.0
    detuning_e: float = 0.0

    def hamiltonian(self) -> np.ndarray:
        h = np.zeros((3, 3), dtype=complex)
        h[0, 2] = self.rabi_0e
        h[1, 2] = self.rabi_1e
        h[2, 0] = np.conjugate(self.rabi_0e)
        h[2, 1] = np.conjugate(self.rabi_1e)
        h[0, 0] = -self.detuning_0
        h[1, 1] = -self.detuning_1
        h[2, 2] = -self.detuning_e
        return h


def gamma_rate_excited_ancilla(laws: PathLaws, t: float) -> float:
    """Ancilla phase rate xi_dot (3 + cos chi)/2 for the excited-ancilla case."""
    p = laws.at(t)
    return 0.5 * p.dxi * (3.0 + np.cos(p.chi))


def hamiltonian_excited_ancilla(laws: PathLaws, t: float) -> np.ndarray:
    """Closed form for the Lambda frame with the excited-dominated ancilla.

    Valid for theta, phi constant, with the gamma rate fixed to
    gamma_rate_excited_ancilla; that choice cancels the logical diagonal and
    leaves a pure two-laser drive with a shared excited-state detuning.
    """
    p = laws.at(t)
    c = 0.5 * (-1j * p.dchi + p.dxi * np.sin(p.chi))
    return LaserParams(
        rabi_0e=c * np.sin(p.theta / 2) * np.exp(-1j * (p.phi + p.xi)),
        rabi_1e=-c * np.cos(p.theta / 2) * np.exp(-1j * p.xi),
        detuning_e=p.dxi * (1.0 + np.cos(p.chi)),
    ).hamiltonian()


def _dark_ancilla_entries(theta, phi, chi, xi, dchi, dxi):
    # scalar or broadcast arrays; returns (coupling e<-perp, half-splitting)
    coup = 0.5 * np.exp(1j * xi) * (1j * dchi - dxi * np.sin(chi) * np.cos(chi))
    split = -0.5 * dxi * np.sin(chi) ** 2
    return coup, split


def hamiltonian_dark_ancilla(laws: PathLaws, t: float, gamma_rate: float = 0.0) -> np.ndarray:
    """Closed form for the Lambda frame with the dark-state ancilla.

    Valid for theta, phi constant.  The drive lives entirely in the
    (perp, |e>) plane, perp = sin(theta/2)e^{-i phi}|0> - cos(theta/2)|1>;
    a nonzero gamma_rate only shifts the decoupled dark state psi_1.
    """
    p = laws.at(t)
    st, ct = np.sin(p.theta / 2), np.cos(p.theta / 2)
    perp = np.array([st * np.exp(-1j * p.phi), -ct, 0.0], dtype=complex)
    e_ket = np.array([0.0, 0.0, 1.0], dtype=complex)
    coup, split = _dark_ancilla_entries(p.theta, p.phi, p.chi, p.xi, p.dchi, p.dxi)

    h = split * (np.outer(e_ket, e_ket) - np.outer(perp, perp.conj()))
    k = coup * np.outer(e_ket, perp.conj())
    h += k + k.conj().T
    if gamma_rate != 0.0:
        psi1 = np.array([ct, st * np.exp(1j * p.phi), 0.0], dtype=complex)
        h -= gamma_rate * np.outer(psi1, psi1.conj())
    return h


def dark_ancilla_samples(laws: PathLaws, ts: np.ndarray) -> np.ndarray:
    """hamiltonian_dark_ancilla on a whole time grid, shape (len(ts), 3, 3).

    Vectorized over the grid for propagation caches; same theta/phi-constant
    requirement, gamma rate fixed at zero.
    """
    pts = [laws.at(float(t)) for t in np.asarray(ts, dtype=float)]
    theta = np.array([p.theta for p in pts])
    phi = np.array([p.phi for p in pts])
    chi = np.array([p.chi for p in pts])
    xi = np.array([p.xi for p in pts])
    dchi = np.array([p.dchi for p in pts])
    dxi = np.array([p.dxi for p in pts])

    st, ct = np.sin(theta / 2), np.cos(theta / 2)
    zero = np.zeros_like(st)
    perp = np.stack([st * np.exp(-1j * phi), -ct.astype(complex), zero], axis=-1)
    coup, split = _dark_ancilla_entries(theta, phi, chi, xi, dchi, dxi)

    n = len(pts)
    h = np.zeros((n, 3, 3), dtype=complex)
    h[:, 2, 2] = split
    h -= split[:, None, None] * (perp[:, :, None] * perp.conj()[:, None, :])
    row = coup[:, None] * perp.conj()
    h[:, 2, :] += row
    h[:, :, 2] += row.conj()
    return h


def _guard_chi(p, t: float) -> None:
    if p.chi <= CHI_GUARD:
        raise SingularConfiguration(
            f"two-laser closed form needs chi > {CHI_GUARD}, got chi={p.chi} at t={t}")


def gamma_rate_two_laser(laws: PathLaws, t: float) -> float:
    """Phase rate removing the bare logical-logical coupling, two-laser case.

    The printed bracket is dimensionless; it is scaled by dphi here so the
    result is a rate, the unique scaling that reproduces the generic
    constructor's diagonal where the form holds.
    """
    p = laws.at(t)
    _guard_chi(p, t)
    csc2 = 1.0 / np.sin(p.chi / 2) ** 2
    brace = 4.0 * (3.0 + np.cos(p.chi)) \
        + np.cos(p.theta) * (11.0 + 4.0 * np.cos(p.chi) + np.cos(2.0 * p.chi)) * csc2
    return p.dphi * brace / 16.0


def two_laser_params(laws: PathLaws, t: float, *, phase: str = "rate") -> LaserParams:
    """Rabi amplitudes and detunings of the two-laser drive at time t.

    phase selects the published convention for the first laser's phase
    factor: "rate" keeps the printed exp(-i(xi + dphi)) with the angular
    rate in the exponent, "angle" substitutes the accumulated angle phi.
    Both are provided because the printed form mixes the two; downstream
    comparisons against the generic constructor report the difference.
    """
    if phase not in PHASE_CONVENTIONS:
        raise ValueError(f"phase must be one of {PHASE_CONVENTIONS}, got {phase!r}")
    p = laws.at(t)
    _guard_chi(p, t)
    cchi, cth = np.cos(p.chi), np.cos(p.theta)
    cot = 1.0 / np.tan(p.chi / 2)
    a = 1.0 - cchi + cth * (3.0 + cchi)
    b = p.dphi * cot
    delta = 0.5 * (1.0 - cchi + cth * (1.0 + cchi)) * p.dphi * cot ** 2
    first_phase = p.xi + (p.dphi if phase == "rate" else p.phi)
    return LaserParams(
        rabi_0e=0.25 * np.exp(-1j * first_phase) * np.sin(p.theta / 2) * (-2j * p.dchi + a * b),
        rabi_1e=0.25 * np.exp(-1j * p.xi) * np.cos(p.theta / 2) * (2j * p.dchi - a * b),
        detuning_0=-(p.dphi * np.sin(p.theta / 2) ** 2 + delta),
        detuning_1=-(-p.dphi * np.cos(p.theta / 2) ** 2 + delta),
    )


def hamiltonian_two_laser(laws: PathLaws, t: float, *, phase: str = "rate") -> np.ndarray:
    """Two-laser drive Hamiltonian assembled from two_laser_params."""
    return two_laser_params(laws, t, phase=phase).hamiltonian()


def gamma_rates_two_qubit(laws: PathLaws, t: float) -> tuple[float, float]:
    """Ancilla phase rates decoupling the spectator states, two-qubit case."""
    return (gamma_rate_excited_ancilla(laws, t), 0.0)


def hamiltonian_two_qubit(laws: PathLaws, t: float) -> np.ndarray:
    """Closed form for the two-qubit frame with the standard gamma rates.

    A single complex drive couples |ee> to the bright state
    b = sin(theta/2)e^{-i phi}|10> - cos(theta/2)|11>, plus an |ee>
    detuning; all other basis states are spectators.  Valid for theta, phi
    constant and gamma rates from gamma_rates_two_qubit.
    """
    p = laws.at(t)
    omega = np.exp(1j * p.xi) * (1j * p.dchi + p.dxi * np.sin(p.chi))
    shift = -p.dxi * (1.0 + np.cos(p.chi))
    bright = np.zeros(6, dtype=complex)
    bright[2] = np.sin(p.theta / 2) * np.exp(-1j * p.phi)
    bright[3] = -np.cos(p.theta / 2)

    h = np.zeros((6, 6), dtype=complex)
    k = np.zeros((6, 6), dtype=complex)
    k[4, :] = 0.5 * omega * bright.conj()
    h += k + k.conj().T
    h[4, 4] += shift
    return h
