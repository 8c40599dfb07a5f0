"""Piecewise path laws for the frame angles (theta, phi, chi, xi).

A path is a segment grid T_0 < T_1 < ... < T_n with one affine law per angle
per segment; zero-duration segments realize jumps.  Evaluation is
right-continuous at boundaries, so laws.at(T_k) reports the segment that
starts at T_k (post-jump values).  Times in seconds, rates in rad/s.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

ANGLES = ("theta", "phi", "chi", "xi")


@dataclass(frozen=True)
class AffineLaw:
    """angle(t) = value + rate * (t - segment start)."""

    value: float
    rate: float = 0.0

    def at(self, dt: float) -> float:
        return self.value + self.rate * dt

    def end(self, duration: float) -> float:
        return self.value + self.rate * duration


@dataclass(frozen=True)
class SegmentLaws:
    duration: float
    theta: AffineLaw
    phi: AffineLaw
    chi: AffineLaw
    xi: AffineLaw
    # zero-duration segments carry the jump deltas applied at their instant
    jumps: tuple[tuple[str, float], ...] = ()

    def law(self, angle: str) -> AffineLaw:
        return getattr(self, angle)


class LawsPoint(NamedTuple):
    theta: float
    phi: float
    chi: float
    xi: float
    dtheta: float
    dphi: float
    dchi: float
    dxi: float


class PathLaws:
    """Immutable piecewise-affine laws for all four frame angles."""

    def __init__(self, segments: tuple[SegmentLaws, ...]):
        if not segments:
            raise ValueError("PathLaws needs at least one segment")
        if any(s.duration < 0 for s in segments):
            raise ValueError("segment durations must be >= 0")
        self.segments = tuple(segments)
        self.boundaries = np.concatenate([[0.0], np.cumsum([s.duration for s in segments])])

    @property
    def duration(self) -> float:
        return float(self.boundaries[-1])

    def _segment_index(self, t: float) -> int:
        if t < -1e-18 or t > self.duration * (1 + 1e-12) + 1e-18:
            raise ValueError(f"t={t} outside [0, {self.duration}]")
        k = int(np.searchsorted(self.boundaries, t, side="right")) - 1
        return min(max(k, 0), len(self.segments) - 1)

    def at(self, t: float) -> LawsPoint:
        k = self._segment_index(t)
        seg = self.segments[k]
        dt = t - float(self.boundaries[k])
        return LawsPoint(
            seg.theta.at(dt), seg.phi.at(dt), seg.chi.at(dt), seg.xi.at(dt),
            seg.theta.rate, seg.phi.rate, seg.chi.rate, seg.xi.rate,
        )

    def smooth_segments(self) -> Iterator[tuple[float, float, SegmentLaws]]:
        """(t0, t1, laws) for every segment of nonzero duration."""
        for k, seg in enumerate(self.segments):
            if seg.duration > 0.0:
                yield float(self.boundaries[k]), float(self.boundaries[k + 1]), seg

    def jump_segments(self) -> Iterator[tuple[float, SegmentLaws]]:
        """(time, laws) for every zero-duration segment, with pre-jump values."""
        for k, seg in enumerate(self.segments):
            if seg.duration == 0.0:
                yield float(self.boundaries[k]), seg


class LawsBuilder:
    """Accumulates segments left to right, carrying end values forward exactly."""

    def __init__(self, theta: float = 0.0, phi: float = 0.0, chi: float = 0.0, xi: float = 0.0):
        self._cur = {"theta": theta, "phi": phi, "chi": chi, "xi": xi}
        self._segments: list[SegmentLaws] = []

    def run(self, duration: float, *, theta_rate: float = 0.0, phi_rate: float = 0.0,
            chi_rate: float = 0.0, xi_rate: float = 0.0) -> "LawsBuilder":
        if duration < 0:
            raise ValueError("duration must be >= 0")
        rates = {"theta": theta_rate, "phi": phi_rate, "chi": chi_rate, "xi": xi_rate}
        laws = {a: AffineLaw(self._cur[a], rates[a]) for a in ANGLES}
        self._segments.append(SegmentLaws(duration, **laws))
        for a in ANGLES:
            self._cur[a] = laws[a].end(duration)
        return self

    def jump(self, *, theta: float = 0.0, phi: float = 0.0, chi: float = 0.0,
             xi: float = 0.0) -> "LawsBuilder":
        deltas = {"theta": theta, "phi": phi, "chi": chi, "xi": xi}
        laws = {a: AffineLaw(self._cur[a]) for a in ANGLES}
        jumps = tuple((a, d) for a, d in deltas.items() if d != 0.0)
        self._segments.append(SegmentLaws(0.0, jumps=jumps, **laws))
        for a, d in jumps:
            self._cur[a] = self._cur[a] + d
        return self

    def build(self) -> PathLaws:
        return PathLaws(tuple(self._segments))


def constant_laws(duration: float, *, theta: float = 0.0, phi: float = 0.0,
                  chi: float = 0.0, xi: float = 0.0) -> PathLaws:
    return LawsBuilder(theta=theta, phi=phi, chi=chi, xi=xi).run(duration).build()


def random_laws(rng: np.random.Generator, *, nseg: int = 3, duration: float = 50e-9,
                rate_scale: float = 1.0e8, chi_range: tuple[float, float] = (0.05, np.pi),
                time_dependent: tuple[str, ...] = ("chi", "xi")) -> PathLaws:
    """Random piecewise-linear laws for residual fuzzing.

    Angles not listed in time_dependent are held at random constants; listed
    ones start at a random in-range value and move with bounded random rates,
    chi reflected back into chi_range so frame guards stay satisfied.
    """
    lo, hi = chi_range
    start = {
        "theta": rng.uniform(0.0, np.pi),
        "phi": rng.uniform(-np.pi, np.pi),
        "chi": rng.uniform(lo, hi),
        "xi": rng.uniform(-np.pi, np.pi),
    }
    b = LawsBuilder(**start)
    durations = rng.uniform(0.2, 1.0, size=nseg)
    durations *= duration / durations.sum()
    cur_chi = start["chi"]
    for d in durations:
        rates = {a: 0.0 for a in ANGLES}
        for a in time_dependent:
            rates[a] = rng.uniform(-rate_scale, rate_scale)
        if "chi" in time_dependent:
            # clip the chi rate so this segment cannot leave chi_range
            span = rates["chi"] * d
            if cur_chi + span > hi:
                rates["chi"] = (hi - cur_chi) / d
            elif cur_chi + span < lo:
                rates["chi"] = (lo - cur_chi) / d
            cur_chi += rates["chi"] * d
        b.run(float(d), theta_rate=rates["theta"], phi_rate=rates["phi"],
              chi_rate=rates["chi"], xi_rate=rates["xi"])
    return b.build()
