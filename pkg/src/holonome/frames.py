"""Parametrized orthonormal state frames and their exact time derivatives.

Two families are built from the path angles (theta, phi, chi, xi):

* a three-level Lambda frame over the basis (|0>, |1>, |e>) whose logical
  subspace is either the first two states (excited-dominated ancilla) or the
  last two (dark-state ancilla), and
* a two-qubit frame over (|00>, |01>, |10>, |11>, |ee>, |0e>) with two
  ancilla states.

Derivatives are assembled analytically by the chain rule over all four angle
rates, so downstream residual checks are limited only by float precision.
Basis ordering and the sign conventions on the |e> components are fixed;
the synthesized Hamiltonians are sign-sensitive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .laws import LawsPoint, PathLaws

# chi guard for the two-laser frame only: its gamma-rate table carries
# csc^2(chi/2), singular at chi = 0.  The plain Lambda frame allows chi = 0.
CHI_GUARD = 1e-6

QUBIT_BASIS = ("0", "1", "e")
TWO_QUBIT_BASIS = ("00", "01", "10", "11", "ee", "0e")


class SingularConfiguration(ValueError):
    """Frame parameters hit a singular point of an associated closed form."""


@dataclass(frozen=True)
class StateFrame:
    """Ordered orthonormal states |psi_i> with matching analytic derivatives.

    states and derivs are (n, dim) complex arrays, one state per row.
    computational/ancilla index the rows; together they cover range(n).
    """

    states: np.ndarray
    derivs: np.ndarray
    computational: tuple[int, ...]
    ancilla: tuple[int, ...]
    time: float = 0.0

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def nstates(self) -> int:
        return self.states.shape[0]


FrameFn = Callable[[float], StateFrame]


def _lambda_states(p: LawsPoint) -> tuple[np.ndarray, np.ndarray]:
    """Three Lambda-frame states and derivatives, rows in frame order."""
    ct, st = np.cos(p.theta / 2), np.sin(p.theta / 2)
    cc, sc = np.cos(p.chi / 2), np.sin(p.chi / 2)
    eip, eix = np.exp(1j * p.phi), np.exp(1j * p.xi)

    # |perp> = sin(theta/2) e^{-i phi}|0> - cos(theta/2)|1>, orthogonal to psi_1
    perp = np.array([st * np.conj(eip), -ct, 0.0], dtype=complex)
    dperp = np.array([
        (p.dtheta / 2 * ct - 1j * p.dphi * st) * np.conj(eip),
        p.dtheta / 2 * st,
        0.0,
    ], dtype=complex)

    e_ket = np.array([0.0, 0.0, 1.0], dtype=complex)

    psi1 = np.array([ct, st * eip, 0.0], dtype=complex)
    dpsi1 = np.array([
        -p.dtheta / 2 * st,
        (p.dtheta / 2 * ct + 1j * p.dphi * st) * eip,
        0.0,
    ], dtype=complex)

    psi2 = cc * perp + sc * eix * e_ket
    dpsi2 = (-p.dchi / 2 * sc) * perp + cc * dperp \
        + (p.dchi / 2 * cc + 1j * p.dxi * sc) * eix * e_ket

    psi3 = sc * np.conj(eix) * perp - cc * e_ket
    dpsi3 = (p.dchi / 2 * cc - 1j * p.dxi * sc) * np.conj(eix) * perp \
        + sc * np.conj(eix) * dperp + (p.dchi / 2 * sc) * e_ket

    return np.array([psi1, psi2, psi3]), np.array([dpsi1, dpsi2, dpsi3])


def lambda_frame_at(p: LawsPoint, *, ancilla: str = "excited", time: float = 0.0) -> StateFrame:
    """Lambda frame from a single laws point (see lambda_frame)."""
    states, derivs = _lambda_states(p)
    if ancilla == "excited":
        comp, anc = (0, 1), (2,)
    elif ancilla == "dark":
        comp, anc = (1, 2), (0,)
    else:
        raise ValueError(f"ancilla must be 'excited' or 'dark', got {ancilla!r}")
    return StateFrame(states, derivs, comp, anc, time)


def lambda_frame(laws: PathLaws, t: float, *, ancilla: str = "excited") -> StateFrame:
    """Three-level Lambda frame at time t.

    ancilla="excited": logical pair (psi_1, psi_2), ancilla psi_3 (the state
    that is -|e> at chi = 0).  ancilla="dark": logical pair (psi_2, psi_3),
    ancilla psi_1 (the dark state untouched by the synthesized drive).
    """
    return lambda_frame_at(laws.at(t), ancilla=ancilla, time=t)


def two_laser_frame_at(p: LawsPoint, *, time: float = 0.0) -> StateFrame:
    """Guarded Lambda frame from a single laws point (see two_laser_frame)."""
    if p.chi <= CHI_GUARD:
        raise SingularConfiguration(
            f"two-laser frame needs chi > {CHI_GUARD}, got chi={p.chi} at t={time}")
    states, derivs = _lambda_states(p)
    return StateFrame(states, derivs, (0, 1), (2,), time)


def two_laser_frame(laws: PathLaws, t: float) -> StateFrame:
    """Lambda frame variant for the two-laser construction (phi, chi moving).

    Identical states to lambda_frame with the excited ancilla, but guarded:
    the associated gamma-rate table carries csc^2(chi/2) and cot^2(chi/2),
    so chi must stay in (CHI_GUARD, pi].
    """
    return two_laser_frame_at(laws.at(t), time=t)


def two_qubit_frame(laws: PathLaws, t: float) -> StateFrame:
    return two_qubit_frame_at(laws.at(t), time=t)


def two_qubit_frame_at(p: LawsPoint, *, time: float = 0.0) -> StateFrame:
    """Six-state two-qubit frame; logical states 0..3, ancillas 4 and 5.

    psi_1 = |00>, psi_2 = |01> and psi_6 = |0e> are constant; psi_3 rotates
    with (theta, phi) inside span{|10>,|11>}; psi_4, psi_5 carry chi, xi and
    couple the bright combination of |10>,|11> to |ee>.
    """
    ct, st = np.cos(p.theta / 2), np.sin(p.theta / 2)
    cc, sc = np.cos(p.chi / 2), np.sin(p.chi / 2)
    eip, eix = np.exp(1j * p.phi), np.exp(1j * p.xi)

    z = np.zeros(6, dtype=complex)

    def ket(i: int) -> np.ndarray:
        v = z.copy()
        v[i] = 1.0
        return v

    k10, k11, kee = ket(2), ket(3), ket(4)

    bright = st * np.conj(eip) * k10 - ct * k11
    dbright = (p.dtheta / 2 * ct - 1j * p.dphi * st) * np.conj(eip) * k10 \
        + p.dtheta / 2 * st * k11

    psi3 = ct * k10 + st * eip * k11
    dpsi3 = -p.dtheta / 2 * st * k10 + (p.dtheta / 2 * ct + 1j * p.dphi * st) * eip * k11

    psi4 = cc * bright + sc * eix * kee
    dpsi4 = (-p.dchi / 2 * sc) * bright + cc * dbright \
        + (p.dchi / 2 * cc + 1j * p.dxi * sc) * eix * kee

    psi5 = sc * np.conj(eix) * bright - cc * kee
    dpsi5 = (p.dchi / 2 * cc - 1j * p.dxi * sc) * np.conj(eix) * bright \
        + sc * np.conj(eix) * dbright + (p.dchi / 2 * sc) * kee

    states = np.array([ket(0), ket(1), psi3, psi4, psi5, ket(5)])
    derivs = np.array([z, z, dpsi3, dpsi4, dpsi5, z])
    return StateFrame(states, derivs, (0, 1, 2, 3), (4, 5), time)


def gram_defect(frame: StateFrame) -> float:
    """Max-entry deviation of the Gram matrix from the identity."""
    g = frame.states @ frame.states.conj().T
    return float(np.max(np.abs(g - np.eye(frame.nstates))))


def connections(frame: StateFrame) -> np.ndarray:
    """<psi_i| i d_t |psi_i> for every state; real for normalized frames."""
    overlaps = np.einsum("ij,ij->i", frame.states.conj(), frame.derivs)
    return np.real(1j * overlaps)


def check_cyclic(frame_fn: FrameFn, tau: float) -> float:
    """max_i ||psi_i(tau) - psi_i(0)||_2 over computational indices."""
    f0, f1 = frame_fn(0.0), frame_fn(tau)
    diffs = [np.linalg.norm(f1.states[i] - f0.states[i]) for i in f0.computational]
    return float(max(diffs))
