"""Monte Carlo statistics of the collectibility over random detectors.

The detector basis of every party B..K is drawn independently from the
Haar measure.  For a qubit party that means the first basis vector points
in a uniformly random Bloch direction: cos(theta) uniform on [-1, 1] and
phi uniform on [0, 2*pi), with the second vector its orthogonal
complement.  Party A never carries detectors here; the Gram formula
maximizes over it exactly, sample by sample.

Estimates come with plain standard errors: sample standard deviation over
sqrt(samples) for means, the binomial formula for detection frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundError, RangeError, ShapeError
from .measures import (
    rescaled,
    separable_bound,
    two_qubit_detect_prob,
    two_qubit_extremes,
    two_qubit_mean,
    vector_collectibility,
)
from .states import StateVector

CHUNK = 200_000

SWEEP_COLUMNS = ("psi", "r_min", "r_mean", "r_max", "p_detect")


@dataclass(frozen=True)
class McConfig:
    samples: int = 10 ** 5
    seed: int = 0

    def __post_init__(self):
        if self.samples < 1:
            raise RangeError(f"samples must be >= 1, got {self.samples}")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
        }


def _random_qubit_pairs(m: int, rng: np.random.Generator
                        ) -> tuple[np.ndarray, np.ndarray]:
    """m Haar-random qubit bases as two (m, 2) arrays of basis vectors."""
    u = rng.uniform(-1.0, 1.0, m)
    ph = rng.uniform(0.0, 2.0 * math.pi, m)
    c = np.sqrt(0.5 * (1.0 + u))
    s = np.sqrt(0.5 * (1.0 - u))
    e = np.exp(1j * ph)
    v1 = np.stack([c.astype(np.complex128), e * s], axis=1)
    v2 = np.stack([s.astype(np.complex128), -e * c], axis=1)
    return v1, v2


def sample_collectibility(state: StateVector, samples: int,
                          rng: np.random.Generator,
                          chunk: int = CHUNK) -> np.ndarray:
    """Collectibility at ``samples`` independent random detector draws.

    Needs qubit parties B..K (``ShapeError`` otherwise).  Evaluation is
    chunked; the draw order (parties B..K per chunk) is fixed, so a given
    generator state yields bit-identical output.
    """
    if samples < 1:
        raise RangeError(f"samples must be >= 1, got {samples}")
    if state.num_parties < 2 or any(d != 2 for d in state.dims[1:]):
        raise ShapeError(
            f"sampling needs qubit parties B..K, got dims {state.dims}")
    t = state.tensor
    k = state.num_parties
    out = np.empty(samples, dtype=np.float64)
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        draws = [_random_qubit_pairs(m, rng) for _ in range(k - 1)]
        f1 = None
        f2 = None
        for v1, v2 in reversed(draws):
            if f1 is None:
                f1 = np.einsum("...b,mb->m...", t, v1.conj())
                f2 = np.einsum("...b,mb->m...", t, v2.conj())
            else:
                f1 = np.einsum("m...b,mb->m...", f1, v1.conj())
                f2 = np.einsum("m...b,mb->m...", f2, v2.conj())
        out[done:done + m] = vector_collectibility(f1, f2)
        done += m
    top = float(np.max(out))
    if top > 0.25 + 1e-12:
        raise BoundError(
            f"sampled value {top!r} exceeds the two-detector bound 1/4")
    return out


def mc_average(state: StateVector, config: McConfig | None = None) -> McEstimate:
    """Mean collectibility over random detectors, with its standard error."""
    config = config or McConfig()
    rng = np.random.default_rng(config.seed)
    y = sample_collectibility(state, config.samples, rng)
    mean = float(np.mean(y))
    stderr = (float(np.std(y, ddof=1)) / math.sqrt(config.samples)
              if config.samples > 1 else 0.0)
    return McEstimate(mean=mean, stderr=stderr, samples=config.samples,
                      seed=config.seed)


def mc_detect_prob(state: StateVector,
                   config: McConfig | None = None) -> McEstimate:
    """Frequency of draws whose value strictly exceeds the product bound."""
    config = config or McConfig()
    rng = np.random.default_rng(config.seed)
    y = sample_collectibility(state, config.samples, rng)
    threshold = separable_bound(2, state.num_parties)
    p = float(np.mean(y > threshold))
    stderr = math.sqrt(p * (1.0 - p) / config.samples)
    return McEstimate(mean=p, stderr=stderr, samples=config.samples,
                      seed=config.seed)


def sweep_two_qubit(points: int) -> np.ndarray:
    """Closed-form sweep over the two-qubit state angle.

    ``points`` uniformly spaced psi values on [0, pi] (at least 2,
    ``RangeError`` otherwise).  Rows hold psi, the rescaled minimum, mean
    and maximum r = (16*Y - 1)/3, and the detection probability; see
    ``SWEEP_COLUMNS`` for the order.
    """
    if points < 2:
        raise RangeError(f"points must be >= 2, got {points}")
    psis = np.linspace(0.0, math.pi, points)
    rows = np.empty((points, 5), dtype=np.float64)
    for i, psi in enumerate(psis):
        ymin, ymax = two_qubit_extremes(psi)
        rows[i] = (psi, rescaled(ymin), rescaled(two_qubit_mean(psi)),
                   rescaled(ymax), two_qubit_detect_prob(psi))
    return rows
