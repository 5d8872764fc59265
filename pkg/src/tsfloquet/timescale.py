"""One period of a T-periodic time scale.

A time scale here is a closed subset of the reals described by an ordered
list of segments: isolated points and closed intervals. Only the window
[t0, t0+T] is stored; the scale repeats with period T, so the graininess
at the right extremity equals the graininess at t0.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Union

from .errors import (
    EndpointNotCovered,
    InvalidSegment,
    NonpositivePeriod,
    OverlappingSegments,
    PointNotInTimeScale,
)


@dataclass(frozen=True)
class Point:
    x: float


@dataclass(frozen=True)
class Interval:
    a: float
    b: float


Segment = Union[Point, Interval]


def _tol(t: float) -> float:
    # membership tolerance; inputs contain pi-valued endpoints typed in decimal
    return 1e-12 * max(1.0, abs(t))


def _start(seg: Segment) -> float:
    return seg.x if isinstance(seg, Point) else seg.a


def _end(seg: Segment) -> float:
    return seg.x if isinstance(seg, Point) else seg.b


@dataclass(frozen=True)
class PeriodicTimeScale:
    """Raw, unvalidated description of one period of a periodic time scale."""

    t0: float
    period: float
    segments: tuple

    def __init__(self, t0, period, segments):
        object.__setattr__(self, "t0", float(t0))
        object.__setattr__(self, "period", float(period))
        object.__setattr__(self, "segments", tuple(segments))


class ValidatedTimeScale:
    """Canonicalized time scale with sigma/mu/classification queries.

    Immutable after construction; safe for concurrent reads.
    """

    def __init__(self, ts: PeriodicTimeScale):
        if not ts.period > 0:
            raise NonpositivePeriod(f"period must be positive, got {ts.period}")
        segs = sorted(ts.segments, key=_start)
        for seg in segs:
            if isinstance(seg, Interval):
                if not seg.a < seg.b:
                    raise InvalidSegment(
                        f"interval [{seg.a}, {seg.b}] must have a < b"
                    )
            elif not isinstance(seg, Point):
                raise InvalidSegment(f"not a segment: {seg!r}")
        for prev, cur in zip(segs, segs[1:]):
            if _start(cur) <= _end(prev) + _tol(_end(prev)):
                raise OverlappingSegments(
                    f"segments {prev} and {cur} overlap or touch"
                )
        if not segs:
            raise EndpointNotCovered("empty segment list")
        t0, t_end = ts.t0, ts.t0 + ts.period
        if abs(_start(segs[0]) - t0) > _tol(t0):
            raise EndpointNotCovered(f"t0={t0} is not the left extremity")
        if abs(_end(segs[-1]) - t_end) > _tol(t_end):
            raise EndpointNotCovered(f"t0+T={t_end} is not the right extremity")
        lo = t0 - _tol(t0)
        hi = t_end + _tol(t_end)
        for seg in segs:
            if _start(seg) < lo or _end(seg) > hi:
                raise EndpointNotCovered(f"segment {seg} outside [t0, t0+T]")

        # snap the extremities exactly
        if isinstance(segs[0], Point):
            segs[0] = Point(t0)
        else:
            segs[0] = Interval(t0, segs[0].b)
        if isinstance(segs[-1], Point):
            segs[-1] = Point(t_end)
        else:
            segs[-1] = Interval(segs[-1].a, t_end)

        self.t0 = t0
        self.period = ts.period
        self.t_end = t_end
        self.segments: tuple = tuple(segs)
        self._starts = [_start(s) for s in segs]

        # right-scattered coordinates in [t0, t0+T) with their graininess
        scattered = []
        for seg, nxt in zip(segs, segs[1:]):
            scattered.append((_end(seg), _start(nxt) - _end(seg)))
        self._scattered = scattered
        self._scattered_coords = [c for c, _ in scattered]

    # -- classification ----------------------------------------------------

    @property
    def is_discrete(self) -> bool:
        return all(isinstance(s, Point) for s in self.segments)

    @property
    def is_continuous(self) -> bool:
        return len(self.segments) == 1 and isinstance(self.segments[0], Interval)

    def dense_intervals(self) -> list:
        """Closed dense subintervals [a, b] of the stored period, ascending."""
        return [(s.a, s.b) for s in self.segments if isinstance(s, Interval)]

    def scattered_with_mu(self) -> list:
        """(t, mu(t)) for every right-scattered t in [t0, t0+T), ascending."""
        return list(self._scattered)

    # -- membership --------------------------------------------------------

    def locate(self, t: float):
        """Return (segment_index, snapped_t) or raise PointNotInTimeScale."""
        if t < self.t0 - _tol(t) or t > self.t_end + _tol(t):
            raise PointNotInTimeScale(f"{t} outside [{self.t0}, {self.t_end}]")
        i = bisect.bisect_right(self._starts, t + _tol(t)) - 1
        if i < 0:
            raise PointNotInTimeScale(f"{t} not in time scale")
        seg = self.segments[i]
        if isinstance(seg, Point):
            if abs(t - seg.x) <= _tol(t):
                return i, seg.x
        else:
            if seg.a - _tol(t) <= t <= seg.b + _tol(t):
                return i, min(max(t, seg.a), seg.b)
        raise PointNotInTimeScale(f"{t} not in time scale")

    def contains(self, t: float) -> bool:
        try:
            self.locate(t)
            return True
        except PointNotInTimeScale:
            return False

    # -- jump operators ----------------------------------------------------

    def mu(self, t: float) -> float:
        """Graininess: gap to the next time-scale point, 0 at dense points.

        mu(t0+T) = mu(t0) by T-periodicity.
        """
        i, t = self.locate(t)
        seg = self.segments[i]
        if t == self.t_end:
            return self.mu(self.t0)
        if isinstance(seg, Interval) and t < seg.b:
            return 0.0
        # a Point, or the right end of an Interval
        return self._starts[i + 1] - t

    def sigma(self, t: float) -> float:
        """Forward jump operator sigma(t) = t + mu(t)."""
        _, t = self.locate(t)
        return t + self.mu(t)

    def scattered_points_in(self, a: float, b: float) -> list:
        """All right-scattered t with a <= t < b, ascending.

        Both endpoints must belong to the time scale.
        """
        _, a = self.locate(a)
        _, b = self.locate(b)
        if a > b:
            raise PointNotInTimeScale(f"need a <= b, got a={a}, b={b}")
        lo = bisect.bisect_left(self._scattered_coords, a)
        hi = bisect.bisect_left(self._scattered_coords, b)
        return self._scattered_coords[lo:hi]


def validate(ts: PeriodicTimeScale) -> ValidatedTimeScale:
    """Check all PeriodicTimeScale invariants and canonicalize the segments."""
    return ValidatedTimeScale(ts)
