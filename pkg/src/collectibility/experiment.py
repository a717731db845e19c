"""Shot-noise simulation of two interferometric Gram-data measurements.

Both schemes target the squared overlaps |G_ij|^2 of the two party-A
conditionals of a two-qubit state, using two independently prepared
copies and local detectors at one Bloch pair on party B:

* ``hom``: the conditionals interfere on a balanced beamsplitter; the
  double-click (coincidence) probability is
  p_ij(+,+) = (1 - |<phi_i^|phi_j^>|^2)/2 for normalized conditionals,
  so |G_ij|^2 = p_1i * p_2j * (1 - 2*p_ij(+,+)).
* ``swap``: a controlled-swap test; the control parity expectation is
  <sz>_ij = |<phi_i^|phi_j^>|^2 in [0, 1], so
  |G_ij|^2 = p_1i * p_2j * <sz>_ij.

p_1i and p_2j are the detector-outcome marginals of the two copies,
equal to the diagonal Gram entries.  When a conditional norm vanishes
(G_ii below 1e-12) the pair stage involving it is undefined; the forward
model flags it and the reconstruction sets those |G_ij|^2 to zero.

Sampling draws, per stage, the full shot budget: a multinomial over the
outcome marginals for each copy and one binomial per (i, j) pair stage,
in row-major order.  Estimation is plain plug-in with negative overlap
estimates clamped to zero; standard errors come from a nonparametric
bootstrap (1000 count resamples from the empirical frequencies).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateError,
    EmptyCountsError,
    GramError,
    ParamError,
    RangeError,
    ShapeError,
)
from .measures import separable_bound, vector_collectibility
from .states import StateVector, bloch_detectors, conditional_vectors

DEGENERATE_TOL = 1e-12
CONSISTENCY_TOL = 1e-12
BOOTSTRAP_RESAMPLES = 1000
BOOTSTRAP_STREAM_OFFSET = 10 ** 6

SCHEMES = ("hom", "swap")


@dataclass(frozen=True, eq=False)
class SchemeProbabilities:
    """Exact per-stage outcome probabilities of one scheme.

    ``p1`` and ``p2`` are the detector-outcome marginals of the two
    copies.  ``pair_stat`` holds the per-pair interference statistic:
    the coincidence probability for ``hom``, the control parity mean for
    ``swap``; entries touching a degenerate outcome are NaN and flagged
    in ``degenerate``.
    """

    scheme: str
    p1: np.ndarray
    p2: np.ndarray
    pair_stat: np.ndarray
    degenerate: tuple[bool, bool]


@dataclass(frozen=True, eq=False)
class ExperimentCounts:
    """Raw counts of one simulated run, one entry per stage.

    ``counts1``/``counts2`` are outcome counts of the two copies over the
    full shot budget; ``pair_counts[i, j]`` counts coincidences (``hom``)
    or +1 control outcomes (``swap``), NaN where the stage is absent.
    """

    scheme: str
    shots: int
    counts1: np.ndarray
    counts2: np.ndarray
    pair_counts: np.ndarray
    degenerate: tuple[bool, bool]


@dataclass(frozen=True, eq=False)
class GramEstimate:
    """Plug-in reconstruction of the squared overlaps from counts."""

    g2: np.ndarray
    g2_stderr: np.ndarray
    shots: int
    y_estimate: float
    y_stderr: float


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    scheme: str
    shots: int
    seed: int
    exact_y: float
    y_estimate: float
    y_stderr: float
    g2: np.ndarray
    verdict: str
    significance: float

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "shots": self.shots,
            "seed": self.seed,
            "exact_y": self.exact_y,
            "y_estimate": self.y_estimate,
            "y_stderr": self.y_stderr,
            "g2": [[float(v) for v in row] for row in self.g2],
            "verdict": self.verdict,
            "significance": self.significance,
        }


def normalized_overlaps(gram_entries: np.ndarray) -> np.ndarray:
    """|<phi_i^|phi_j^>|^2 matrix of normalized conditionals.

    Raises ``DegenerateError`` when a diagonal entry is below 1e-12.
    """
    g = np.asarray(gram_entries, dtype=np.complex128)
    diag = np.diagonal(g).real
    if np.any(diag < DEGENERATE_TOL):
        raise DegenerateError(
            "a conditional has vanishing norm; normalized overlaps are "
            "undefined")
    return np.abs(g) ** 2 / np.outer(diag, diag)


def _forward(state: StateVector, theta: float, phi: float,
             scheme: str) -> SchemeProbabilities:
    if scheme not in SCHEMES:
        raise ParamError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    if state.dims != (2, 2):
        raise ShapeError(
            f"the measurement schemes are two-qubit only, got dims "
            f"{state.dims}")
    det = bloch_detectors([(theta, phi)])
    c = conditional_vectors(state, det)
    g = c.conj() @ c.T
    g = 0.5 * (g + g.conj().T)
    diag = np.diagonal(g).real.copy()
    degenerate = tuple(bool(d < DEGENERATE_TOL) for d in diag)

    ov = np.full((2, 2), np.nan)
    for i in range(2):
        for j in range(2):
            if not (degenerate[i] or degenerate[j]):
                ov[i, j] = abs(g[i, j]) ** 2 / (diag[i] * diag[j])
    pair_stat = 0.5 * (1.0 - ov) if scheme == "hom" else ov

    probs = SchemeProbabilities(scheme=scheme, p1=diag, p2=diag.copy(),
                                pair_stat=pair_stat, degenerate=degenerate)
    recon = reconstructed_overlaps(probs)
    target = np.abs(g) ** 2
    if np.max(np.abs(recon - target)) > CONSISTENCY_TOL:
        raise GramError(
            "scheme probabilities fail to reproduce the Gram overlaps "
            "within 1e-12")
    return probs


def hom_forward(state: StateVector, theta: float,
                phi: float = 0.0) -> SchemeProbabilities:
    """Exact stage probabilities of the beamsplitter-coincidence scheme."""
    return _forward(state, theta, phi, "hom")


def swap_forward(state: StateVector, theta: float,
                 phi: float = 0.0) -> SchemeProbabilities:
    """Exact stage probabilities of the controlled-swap scheme."""
    return _forward(state, theta, phi, "swap")


def reconstructed_overlaps(probs: SchemeProbabilities) -> np.ndarray:
    """Exact |G_ij|^2 implied by the scheme probabilities.

    Degenerate stages contribute exact zeros.
    """
    stat = np.where(np.isnan(probs.pair_stat), 0.0, probs.pair_stat)
    if probs.scheme == "hom":
        factor = 1.0 - 2.0 * stat
    else:
        factor = stat
    g2 = np.outer(probs.p1, probs.p2) * factor
    for i in range(2):
        for j in range(2):
            if probs.degenerate[i] or probs.degenerate[j]:
                g2[i, j] = 0.0
    return g2


def sample_experiment(probs: SchemeProbabilities, shots: int,
                      rng: np.random.Generator) -> ExperimentCounts:
    """Draw counts for every stage, ``shots`` repetitions each."""
    if shots < 1:
        raise RangeError(f"shots must be >= 1, got {shots}")
    p1 = np.clip(probs.p1, 0.0, 1.0)
    p2 = np.clip(probs.p2, 0.0, 1.0)
    counts1 = rng.multinomial(shots, p1 / p1.sum()).astype(np.float64)
    counts2 = rng.multinomial(shots, p2 / p2.sum()).astype(np.float64)
    pair_counts = np.full((2, 2), np.nan)
    for i in range(2):
        for j in range(2):
            if probs.degenerate[i] or probs.degenerate[j]:
                continue
            stat = float(probs.pair_stat[i, j])
            p = stat if probs.scheme == "hom" else 0.5 * (1.0 + stat)
            pair_counts[i, j] = rng.binomial(shots, min(max(p, 0.0), 1.0))
    return ExperimentCounts(scheme=probs.scheme, shots=shots,
                            counts1=counts1, counts2=counts2,
                            pair_counts=pair_counts,
                            degenerate=probs.degenerate)


def _plugin_y(g11, g22, g12_sq):
    """Plug-in collectibility; noisy inputs may violate Cauchy-Schwarz,
    so the excess is clamped rather than rejected."""
    prod = np.maximum(g11 * g22, 0.0)
    root = np.sqrt(np.maximum(prod - g12_sq, 0.0))
    return 0.25 * (np.sqrt(prod) + root) ** 2


def _g2_from_frequencies(scheme, f1, f2, stat, degenerate):
    """Squared-overlap matrix from stage frequencies; broadcasts over a
    leading replica axis when present."""
    factor = (1.0 - 2.0 * stat) if scheme == "hom" else stat
    g2 = f1[..., :, None] * f2[..., None, :] * factor
    for i in range(2):
        for j in range(2):
            if degenerate[i] or degenerate[j]:
                g2[..., i, j] = 0.0
    return np.maximum(g2, 0.0)


def estimate_gram(counts: ExperimentCounts,
                  rng: np.random.Generator | None = None) -> GramEstimate:
    """Plug-in squared overlaps and collectibility, with bootstrap errors.

    ``rng`` drives the bootstrap resampling only; by default it is a
    fresh generator seeded with the canonical bootstrap stream offset.
    Raises ``EmptyCountsError`` when the record holds no shots.
    """
    if counts.shots < 1:
        raise EmptyCountsError("counts record holds no shots")
    if rng is None:
        rng = np.random.default_rng(BOOTSTRAP_STREAM_OFFSET)
    shots = counts.shots
    f1 = np.asarray(counts.counts1, dtype=np.float64) / shots
    f2 = np.asarray(counts.counts2, dtype=np.float64) / shots
    raw = np.where(np.isnan(counts.pair_counts), 0.0,
                   counts.pair_counts) / shots
    stat = raw if counts.scheme == "hom" else 2.0 * raw - 1.0
    g2 = _g2_from_frequencies(counts.scheme, f1, f2, stat, counts.degenerate)
    y = float(_plugin_y(f1[0], f2[1], g2[0, 1]))

    b = BOOTSTRAP_RESAMPLES
    c1 = rng.multinomial(shots, f1 / f1.sum(), size=b) / shots
    c2 = rng.multinomial(shots, f2 / f2.sum(), size=b) / shots
    raw_b = np.zeros((b, 2, 2))
    for i in range(2):
        for j in range(2):
            if counts.degenerate[i] or counts.degenerate[j]:
                continue
            p = min(max(float(raw[i, j]), 0.0), 1.0)
            raw_b[:, i, j] = rng.binomial(shots, p, size=b) / shots
    stat_b = raw_b if counts.scheme == "hom" else 2.0 * raw_b - 1.0
    g2_b = _g2_from_frequencies(counts.scheme, c1, c2, stat_b,
                                counts.degenerate)
    y_b = _plugin_y(c1[:, 0], c2[:, 1], g2_b[:, 0, 1])
    g2_stderr = np.std(g2_b, axis=0, ddof=1)
    y_stderr = float(np.std(y_b, ddof=1))
    return GramEstimate(g2=g2, g2_stderr=g2_stderr, shots=shots,
                        y_estimate=y, y_stderr=y_stderr)


def run_experiment(state: StateVector, theta: float, phi: float, scheme: str,
                   shots: int, seed: int) -> ExperimentReport:
    """Full pipeline: forward model, one sampled run, reconstruction.

    The count draws use default_rng(seed); the bootstrap uses an
    independent stream at default_rng(seed + 10**6), so the point
    estimate is unaffected by the error-bar computation.
    """
    forward = hom_forward if scheme == "hom" else swap_forward
    if scheme not in SCHEMES:
        raise ParamError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    probs = forward(state, theta, phi)
    counts = sample_experiment(probs, shots, np.random.default_rng(seed))
    est = estimate_gram(
        counts, np.random.default_rng(seed + BOOTSTRAP_STREAM_OFFSET))
    c = conditional_vectors(state, bloch_detectors([(theta, phi)]))
    exact_y = vector_collectibility(c[0], c[1])
    threshold = separable_bound(2, 2)
    label = "Entangled" if est.y_estimate > threshold else "Inconclusive"
    diff = est.y_estimate - threshold
    if est.y_stderr > 0.0:
        significance = diff / est.y_stderr
    else:
        significance = math.copysign(math.inf, diff) if diff != 0.0 else 0.0
    return ExperimentReport(scheme=scheme, shots=shots, seed=seed,
                            exact_y=exact_y, y_estimate=est.y_estimate,
                            y_stderr=est.y_stderr, g2=est.g2, verdict=label,
                            significance=significance)
