"""Ground truth that does not go through the event engine.

``enumerate_events_small`` works from the protocol's own wording (bounce at
an endpoint, escort a neighbour to the shared boundary, then split) and
finds event times by solving the pairwise kinematics directly, using
``fractions.Fraction`` rather than the engine's scalar type.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from dpss.ensemble import Direction, Ensemble, Scalar, scalar


def triangle_trajectory(loc0, dir0, t, perimeter) -> tuple[Scalar, Direction]:
    """Position and heading of a lone UAV bouncing between 0 and P.

    At the instant it touches an endpoint the heading reported is the one it
    arrived with, the same pre-flip convention the stepper uses.
    """
    loc0, t, p = Fraction(scalar(loc0)), Fraction(scalar(t)), Fraction(scalar(perimeter))
    dir0 = Direction.of(dir0)
    if t == 0:
        return scalar(loc0), dir0
    # unfold onto a circle of length 2P: [0, P] outbound, (P, 2P) on the way back
    start = loc0 if dir0 is Direction.RIGHT else 2 * p - loc0
    phase = (start + t * p) % (2 * p)
    if 0 < phase <= p:
        return scalar(phase), Direction.RIGHT
    return scalar((2 * p - phase) % (2 * p)), Direction.LEFT


def _turns(x, h, p, s):
    """Which UAVs change heading right now.

    A UAV turns when it runs into the endpoint ahead of it, or when it is
    together with the neighbour ahead of it and already standing at or past
    the spot they share; past that spot its own segment lies behind it.
    """
    n = len(x)
    out = []
    for i in range(n):
        ahead = i + h[i]
        if ahead < 0 or ahead >= n:
            wall = Fraction(0) if h[i] < 0 else p
            out.append(x[i] == wall)
            continue
        if x[ahead] != x[i]:
            out.append(False)
            continue
        shared = max(i, ahead) * s
        out.append((x[i] - shared) * h[i] >= 0)
    return out


def _time_to_next(x, h, p, s):
    """Smallest positive time until a wall hit, a meeting, or a pair reaching its shared spot."""
    n = len(x)
    times = []
    if h[0] < 0:
        times.append(x[0] / s)
    if h[-1] > 0:
        times.append((p - x[-1]) / s)
    for i in range(n - 1):
        gap = x[i + 1] - x[i]
        closing = h[i] - h[i + 1]  # in units of S per unit time
        if gap > 0 and closing > 0:
            times.append(gap / (closing * s))
        elif gap == 0 and closing == 0:
            shared = (i + 1) * s
            dist = (shared - x[i]) * h[i]
            if dist > 0:
                times.append(dist / s)
    return min((t for t in times if t > 0), default=None)


def enumerate_events_small(ens: Ensemble, horizon) -> list[tuple[Scalar, int, Scalar]]:
    """Every heading change ``(time, uav, location)`` with ``time <= horizon``, for N <= 3."""
    n = ens.n
    if n > 3:
        raise ValueError(f"the small-ensemble oracle handles N <= 3, got {n}")
    p = Fraction(scalar(ens.perimeter))
    s = p / n
    horizon = Fraction(scalar(horizon))
    x = [Fraction(scalar(u.location)) for u in ens.uavs]
    h = [int(u.direction) for u in ens.uavs]
    t = Fraction(0)
    found = []
    while True:
        turning = _turns(x, h, p, s)
        for i, flag in enumerate(turning):
            if flag:
                found.append((scalar(t), i, scalar(x[i])))
                h[i] = -h[i]
        if any(_turns(x, h, p, s)):
            raise RuntimeError(f"oracle: heading changes did not settle at t={t}")
        dt = _time_to_next(x, h, p, s)
        if dt is None:
            raise RuntimeError(f"oracle: no future event from t={t}")
        if t + dt > horizon:
            return found
        x = [xi + hi * s * dt for xi, hi in zip(x, h)]
        t += dt


@dataclass(frozen=True)
class GeneratorConfig:
    n_min: int = 1
    n_max: int = 12
    perimeters: tuple = (1, 2, Fraction(7, 3), 10)
    max_denominator: int = 64
    seed: int = 0
    # chance that a UAV is dropped onto another UAV, or onto a segment boundary
    p_duplicate: float = 0.1
    p_boundary: float = 0.1

    def __post_init__(self):
        if self.max_denominator < 1:
            raise ValueError("max_denominator must be >= 1")
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError(f"empty n-range {self.n_min}..{self.n_max}")
        if not self.perimeters:
            raise ValueError("need at least one perimeter choice")


def random_wf_ensemble(cfg: GeneratorConfig) -> Ensemble:
    """A well-formed ensemble determined entirely by ``cfg`` (seed included)."""
    rng = random.Random(cfg.seed)
    n = rng.randint(cfg.n_min, cfg.n_max)
    p = scalar(rng.choice(cfg.perimeters))
    s = p / n
    boundaries = [k * s for k in range(n + 1) if (k * s).denominator <= cfg.max_denominator]
    locs = []
    for _ in range(n):
        r = rng.random()
        if locs and r < cfg.p_duplicate:
            locs.append(rng.choice(locs))
        elif boundaries and r < cfg.p_duplicate + cfg.p_boundary:
            locs.append(rng.choice(boundaries))
        else:
            q = rng.randint(1, cfg.max_denominator)
            k = rng.randint(0, int(p * q))
            locs.append(Fraction(k, q))
    locs.sort()
    dirs = [rng.choice((Direction.LEFT, Direction.RIGHT)) for _ in range(n)]
    return Ensemble.build(p, zip(locs, dirs))
