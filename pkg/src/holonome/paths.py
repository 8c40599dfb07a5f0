"""Coordinate-line pulse schedules, their areas, and SU(2) gate targets.

The two stock constructions sweep chi and xi along coordinate lines of the
projective-space sphere at a fixed Rabi magnitude k: the optimized path (OP)
ramps chi up, sweeps xi at constant chi, and ramps chi back; the
orange-slice path (OSSP) ramps chi to pi, jumps xi instantaneously (zero
pulse area there), and ramps back.  Schedules realize the Lambda frame with
theta = pi and phi = 0, so the moving pair lives in span{|0>, |e>} and |1>
is a dark spectator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .laws import AffineLaw, LawsBuilder, PathLaws

DEFAULT_RATE = 2.0 * np.pi * 20.0e6  # square-wave Rabi magnitude, rad/s

THETA_REALIZED = np.pi


@dataclass(frozen=True)
class Segment:
    """One constant-rate piece of a schedule; duration 0 marks a xi jump."""

    duration: float
    chi: AffineLaw
    xi: AffineLaw
    xi_jump: float = 0.0

    def rabi_magnitude(self, s: float = 0.0) -> float:
        """|Omega| at local time s in [0, duration]."""
        chi = self.chi.at(s)
        return float(np.hypot(self.chi.rate, self.xi.rate * np.sin(chi) * np.cos(chi)))

    def area(self) -> float:
        """Integrated |Omega| over the segment, closed form per law type."""
        if self.duration == 0.0:
            return 0.0
        if self.chi.rate != 0.0 and self.xi.rate != 0.0:
            # |Omega(t)| is not constant then; schedules never produce this
            raise ValueError("segment moves chi and xi together; no closed-form area")
        if self.chi.rate != 0.0:
            return abs(self.chi.rate) * self.duration
        return abs(self.xi.rate * np.sin(self.chi.value) * np.cos(self.chi.value)) * self.duration


@dataclass(frozen=True)
class Schedule:
    """Ordered segments plus the rate constant and initial xi offset."""

    segments: tuple[Segment, ...]
    k: float
    xi0: float = 0.0

    def __post_init__(self):
        if self.k <= 0.0:
            raise ValueError("k must be > 0")
        if self.segments:
            first, last = self.segments[0], self.segments[-1]
            if abs(last.chi.end(last.duration) - first.chi.value) > 1e-9:
                raise ValueError("schedule is not cyclic in chi")

    @property
    def duration(self) -> float:
        return float(sum(s.duration for s in self.segments))

    def boundaries(self) -> tuple[float, ...]:
        """Segment join times including 0 and the total duration."""
        edges = np.concatenate([[0.0], np.cumsum([s.duration for s in self.segments])])
        return tuple(float(e) for e in edges)

    def to_laws(self, theta: float = THETA_REALIZED, phi: float = 0.0) -> PathLaws:
        """Angle laws realizing the schedule; theta and phi stay constant.

        The defaults pin the single-qubit working point (perpendicular
        state = |0>); two-qubit paths pass the entangling-axis angles.
        """
        if not self.segments:
            raise ValueError("empty schedule has no laws")
        b = LawsBuilder(theta=theta, phi=phi,
                        chi=self.segments[0].chi.value, xi=self.xi0)
        for s in self.segments:
            if s.duration > 0.0:
                b.run(s.duration, chi_rate=s.chi.rate, xi_rate=s.xi.rate)
            else:
                b.jump(xi=s.xi_jump)
        return b.build()


def op_schedule(chi1: float, xi2: float, xi0: float = 0.0, k: float = DEFAULT_RATE) -> Schedule:
    """Optimized path: chi 0 -> chi1 -> 0 at rate k, xi swept by xi2 at chi1.

    The middle segment's xi rate is fixed so its Rabi magnitude is also k,
    which is undefined at chi1 = pi/2 (sin chi cos chi = 0); that point is
    rejected whenever xi2 != 0.
    """
    if not 0.0 < chi1 <= np.pi:
        raise ValueError(f"chi1 must be in (0, pi], got {chi1}")
    if k <= 0.0:
        raise ValueError("k must be > 0")
    sc = np.sin(chi1) * np.cos(chi1)
    if xi2 != 0.0 and abs(chi1 - np.pi / 2) < 1e-9:
        raise ValueError("chi1 = pi/2 makes the constant-Rabi xi rate undefined")
    t_ramp = chi1 / k
    segs = [Segment(t_ramp, AffineLaw(0.0, k), AffineLaw(xi0))]
    if xi2 != 0.0:
        t_mid = abs(xi2 * sc) / k
        segs.append(Segment(t_mid, AffineLaw(chi1), AffineLaw(xi0, xi2 / t_mid)))
    segs.append(Segment(t_ramp, AffineLaw(chi1, -k), AffineLaw(xi0 + xi2)))
    return Schedule(tuple(segs), k, xi0)


def ossp_schedule(xi2: float, xi0: float = 0.0, k: float = DEFAULT_RATE) -> Schedule:
    """Orange-slice path: chi 0 -> pi -> 0 at rate k with a xi jump at the top."""
    if k <= 0.0:
        raise ValueError("k must be > 0")
    t_ramp = np.pi / k
    return Schedule((
        Segment(t_ramp, AffineLaw(0.0, k), AffineLaw(xi0)),
        Segment(0.0, AffineLaw(np.pi), AffineLaw(xi0), xi_jump=xi2),
        Segment(t_ramp, AffineLaw(np.pi, -k), AffineLaw(xi0 + xi2)),
    ), k, xi0)


def pulse_area(schedule: Schedule) -> float:
    """Total integrated Rabi magnitude of a schedule, in radians."""
    return float(sum(s.area() for s in schedule.segments))


def op_geometric_phase(chi1: float, xi2: float) -> float:
    """Relative phase xi2 (1 - cos chi1) between the two transported states."""
    return xi2 * (1.0 - np.cos(chi1))


def bloch_axis(chi: float, xi: float) -> tuple[float, float, float]:
    """Unit axis (sin chi cos xi, sin chi sin xi, cos chi)."""
    return (float(np.sin(chi) * np.cos(xi)),
            float(np.sin(chi) * np.sin(xi)),
            float(np.cos(chi)))


@dataclass(frozen=True)
class GateTarget:
    """Rotation axis and angle; convention picks the exponent's 1/2 factor."""

    bloch: tuple[float, float, float]
    alpha: float
    convention: str = "half"

    def __post_init__(self):
        norm = float(np.linalg.norm(np.asarray(self.bloch, dtype=float)))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"bloch axis must be unit length, |n| = {norm}")
        if self.convention not in ("half", "full"):
            raise ValueError(f"convention must be 'half' or 'full', got {self.convention!r}")


def target_su2(target: GateTarget) -> np.ndarray:
    """exp(-i ang n.sigma), ang = alpha/2 ("half") or alpha ("full")."""
    nx, ny, nz = target.bloch
    nsigma = np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]], dtype=complex)
    ang = target.alpha * (0.5 if target.convention == "half" else 1.0)
    return np.cos(ang) * np.eye(2, dtype=complex) - 1j * np.sin(ang) * nsigma


S_GATE = GateTarget((0.0, 0.0, 1.0), np.pi / 2)
T_GATE = GateTarget((0.0, 0.0, 1.0), np.pi / 4)

NAMED_TARGETS = {"S": S_GATE, "T": T_GATE}


def named_target(name: str) -> GateTarget:
    try:
        return NAMED_TARGETS[name]
    except KeyError:
        raise ValueError(
            f"unknown gate name {name!r}; valid names: {', '.join(sorted(NAMED_TARGETS))}") from None
