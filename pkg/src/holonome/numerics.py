"""Dense complex linear-algebra kernels shared by synthesis and evolution code.

All routines work on small complex matrices (the package never exceeds
dimension 6) in plain numpy, dtype complex128.  Internal units everywhere
are radians, seconds and rad/s; unit conversion happens at the interface.

Residual norms are max-entry norms throughout.
"""

from __future__ import annotations

import numpy as np

# Hermiticity defect allowed on unitary_step input, relative above unit scale.
HERMITICITY_TOL = 1e-10
# Unitarity defect allowed on a single exp(-iH dt) factor.
UNITARITY_TOL = 1e-12


class NumericalContractError(RuntimeError):
    """A numerical guarantee (Hermiticity, unitarity, trace drift) failed."""


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a.swapaxes(-1, -2))


def max_abs(a: np.ndarray) -> float:
    """Max-entry norm, the residual norm used across the package."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[a, b] = ab - ba for square matrices of equal dimension."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"commutator needs equal square matrices, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def hermiticity_defect(h: np.ndarray) -> float:
    return max_abs(h - dagger(h))


def unitarity_defect(u: np.ndarray) -> float:
    return max_abs(dagger(u) @ u - np.eye(u.shape[-1]))


def unitary_step(h: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i h dt) through a Hermitian eigendecomposition.

    The input must be Hermitian within HERMITICITY_TOL (scaled by the matrix
    magnitude above unit scale, so rad/s-sized generators are admissible);
    the returned factor is checked unitary within UNITARITY_TOL.
    """
    h = np.asarray(h, dtype=complex)
    defect = hermiticity_defect(h)
    if defect > HERMITICITY_TOL * max(1.0, max_abs(h)):
        raise NumericalContractError(f"unitary_step: Hermiticity defect {defect:.3e}")
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(-1j * w * dt)) @ dagger(v)
    du = unitarity_defect(u)
    if du > UNITARITY_TOL:
        raise NumericalContractError(f"unitary_step: unitarity defect {du:.3e}")
    return u


def fidelity_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-6) -> float:
    """|tr(u^dagger v)|^2 / d^2, invariant under global phases of either gate.

    Both arguments must be unitary within tol (max-entry defect); realized
    gates coming out of the propagators carry integrator-level defects only.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"fidelity needs equal square matrices, got {u.shape} and {v.shape}")
    for name, m in (("first", u), ("second", v)):
        d = unitarity_defect(m)
        if d > tol:
            raise NumericalContractError(f"fidelity: {name} argument unitarity defect {d:.3e}")
    d = u.shape[0]
    return float(np.abs(np.trace(dagger(u) @ v)) ** 2 / d**2)
