"""Detector-set optimization of the collectibility.

Two parameterizations are used behind one interface:

* Fast path (every party except A is a qubit): one Bloch pair
  (theta, phi) per party B..K, party A handled exactly by the Gram
  formula.  2*(K-1) real parameters.
* General path: a full Givens-parameterized unitary per party, including
  A, with the objective evaluated as the plain projection product over
  the first n = min(dims) columns.  dim^2 real parameters per party.

Each restart runs Nelder-Mead from an independently seeded random start;
restart i draws its start from default_rng(seed + i), so results are
reproducible for a fixed config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize as _nm_minimize

from .errors import (
    ConvergenceError,
    ParamError,
    RangeError,
    ScaleError,
    ShapeError,
    SizeError,
)
from .measures import vector_collectibility
from .serialize import detectors_to_json
from .states import (
    DetectorSet,
    LocalBasis,
    StateVector,
    bloch_detectors,
    detector_set,
)

TWO_PI = 2.0 * math.pi

AGREE_TOL = 1e-8


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the multistart search.

    ``tolerance`` is the objective-improvement stopping threshold handed
    to the local search; ``max_iterations`` caps iterations per restart.
    """

    restarts: int = 32
    max_iterations: int = 2000
    tolerance: float = 1e-10
    seed: int = 0
    mode: str = "maximize"

    def __post_init__(self):
        if self.restarts < 1:
            raise RangeError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iterations < 1:
            raise RangeError(
                f"max_iterations must be >= 1, got {self.max_iterations}")
        if not (self.tolerance > 0.0):
            raise RangeError(f"tolerance must be > 0, got {self.tolerance}")
        if self.mode not in ("maximize", "minimize"):
            raise ParamError(f"mode must be 'maximize' or 'minimize', "
                             f"got {self.mode!r}")


@dataclass(frozen=True, eq=False)
class OptimumResult:
    """Best value found, with the detector set that attains it.

    ``restarts_agreeing`` counts restarts whose final value lies within
    1e-8 of the best; ``converged`` is true only when every restart's
    local search reported convergence.
    """

    value: float
    detector_params: np.ndarray
    detectors: DetectorSet
    restarts_agreeing: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "detector_params": [float(x) for x in self.detector_params],
            "restarts_agreeing": self.restarts_agreeing,
            "converged": self.converged,
            "detectors": detectors_to_json(self.detectors),
        }


def unitary_from_params(params, dim: int) -> np.ndarray:
    """Decode ``dim*dim`` real parameters into a unitary matrix.

    Layout: dim*(dim-1)/2 Givens rotation angles, the matching phases,
    then dim diagonal phases.  The columns are the basis vectors; all
    parameters zero gives the identity.  For dim = 2 the parameters
    (t, p, 0, 0) decode to the Bloch basis at (theta, phi) = (2t, p) up
    to per-vector global phases.
    """
    params = np.asarray(params, dtype=np.float64).reshape(-1)
    dim = int(dim)
    if dim < 2:
        raise SizeError(f"need dim >= 2, got {dim}")
    if params.size != dim * dim:
        raise ShapeError(
            f"need {dim * dim} parameters for dim {dim}, got {params.size}")
    npairs = dim * (dim - 1) // 2
    thetas = params[:npairs]
    phis = params[npairs:2 * npairs]
    diag = params[2 * npairs:]
    u = np.diag(np.exp(1j * diag))
    idx = 0
    for i in range(dim - 1):
        for j in range(i + 1, dim):
            c = math.cos(thetas[idx])
            s = math.sin(thetas[idx])
            e = np.exp(1j * phis[idx])
            g = np.eye(dim, dtype=np.complex128)
            g[i, i] = c
            g[j, j] = c
            g[i, j] = -s / e
            g[j, i] = s * e
            u = u @ g
            idx += 1
    return u


def _bloch_pair(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    e = complex(math.cos(phi), math.sin(phi))
    v1 = np.array([c, e * s], dtype=np.complex128)
    v2 = np.array([s, -e * c], dtype=np.complex128)
    return v1, v2


def _canonical_pair(theta: float, phi: float) -> tuple[float, float]:
    """Wrap angles into theta in [0, pi], phi in [0, 2*pi).

    The wrap theta -> 2*pi - theta, phi -> phi + pi maps the second basis
    vector to itself and the first to minus itself, so the objective is
    unchanged exactly.
    """
    theta = theta % TWO_PI
    if theta > math.pi:
        theta = TWO_PI - theta
        phi = phi + math.pi
    return theta, phi % TWO_PI


def _fast_objective(state: StateVector):
    t = state.tensor
    k = state.num_parties

    def y_of(x: np.ndarray) -> float:
        f1 = t
        f2 = t
        for i in range(k - 2, -1, -1):
            v1, v2 = _bloch_pair(x[2 * i], x[2 * i + 1])
            f1 = f1 @ v1.conj()
            f2 = f2 @ v2.conj()
        return vector_collectibility(f1, f2)

    return y_of


def _fast_decode(x: np.ndarray, k: int) -> tuple[np.ndarray, DetectorSet]:
    canon = np.array(x, dtype=np.float64)
    pairs = []
    for i in range(k - 1):
        th, ph = _canonical_pair(float(x[2 * i]), float(x[2 * i + 1]))
        canon[2 * i] = th
        canon[2 * i + 1] = ph
        pairs.append((th, ph))
    return canon, bloch_detectors(pairs)


def _full_objective(state: StateVector):
    t = state.tensor
    dims = state.dims
    n = min(dims)
    offsets = np.cumsum([0] + [d * d for d in dims])

    def y_of(x: np.ndarray) -> float:
        vec = t
        fresh = True
        for p, d in enumerate(dims):
            u = unitary_from_params(x[offsets[p]:offsets[p + 1]], d)
            rows = u.T[:n].conj()
            if fresh:
                vec = np.einsum("a...,ja->j...", vec, rows)
                fresh = False
            else:
                vec = np.einsum("ja...,ja->j...", vec, rows)
        return float(np.prod(np.abs(vec) ** 2))

    return y_of


def _full_decode(x: np.ndarray,
                 dims: tuple[int, ...]) -> tuple[np.ndarray, DetectorSet]:
    offsets = np.cumsum([0] + [d * d for d in dims])
    bases = []
    for p, d in enumerate(dims):
        u = unitary_from_params(x[offsets[p]:offsets[p + 1]], d)
        bases.append(LocalBasis(vectors=u.T[:min(dims)].copy(), party=p))
    return np.array(x, dtype=np.float64), detector_set(bases)


def _optimize(state: StateVector, config: OptimizerConfig) -> OptimumResult:
    k = state.num_parties
    if k < 2:
        raise ShapeError("optimization needs at least two parties")
    fast = all(d == 2 for d in state.dims[1:])
    if fast:
        objective = _fast_objective(state)
        nvars = 2 * (k - 1)
    else:
        objective = _full_objective(state)
        nvars = int(sum(d * d for d in state.dims))
    sign = -1.0 if config.mode == "maximize" else 1.0

    values = []
    points = []
    successes = []
    for r in range(config.restarts):
        rng = np.random.default_rng(config.seed + r)
        if fast:
            x0 = np.empty(nvars)
            x0[0::2] = np.arccos(rng.uniform(-1.0, 1.0, k - 1))
            x0[1::2] = rng.uniform(0.0, TWO_PI, k - 1)
        else:
            x0 = rng.uniform(0.0, TWO_PI, nvars)
        res = _nm_minimize(
            lambda x: sign * objective(x), x0, method="Nelder-Mead",
            options={
                "maxiter": config.max_iterations,
                "maxfev": 4 * config.max_iterations,
                "xatol": 1e-9,
                "fatol": config.tolerance,
            })
        values.append(sign * float(res.fun))
        points.append(np.asarray(res.x, dtype=np.float64))
        successes.append(bool(res.success))

    n_success = sum(successes)
    if n_success == 0:
        raise ConvergenceError(
            f"no restart converged in {config.max_iterations} iterations "
            f"(best value so far {max(values) if config.mode == 'maximize' else min(values)!r})")

    best = 0
    for i in range(1, config.restarts):
        if ((config.mode == "maximize" and values[i] > values[best])
                or (config.mode == "minimize" and values[i] < values[best])):
            best = i
    agree = sum(1 for v in values if abs(v - values[best]) <= AGREE_TOL)

    if fast:
        canon, detectors = _fast_decode(points[best], k)
    else:
        canon, detectors = _full_decode(points[best], state.dims)
    value = float(objective(canon))
    canon.setflags(write=False)
    return OptimumResult(value=value, detector_params=canon,
                         detectors=detectors, restarts_agreeing=agree,
                         converged=(n_success == config.restarts))


def maximize_collectibility(state: StateVector,
                            config: OptimizerConfig | None = None
                            ) -> OptimumResult:
    """Multistart search for the largest collectibility over detector sets."""
    config = replace(config or OptimizerConfig(), mode="maximize")
    return _optimize(state, config)


def minimize_collectibility(state: StateVector,
                            config: OptimizerConfig | None = None
                            ) -> OptimumResult:
    """Multistart search for the smallest collectibility over detector sets."""
    config = replace(config or OptimizerConfig(), mode="minimize")
    return _optimize(state, config)


def _grid_pairs(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """All Bloch pairs on the standard (theta, phi) product grid.

    theta runs over linspace(0, pi, resolution) inclusive; phi over
    resolution points of [0, 2*pi) without the duplicate endpoint.
    Returns arrays of shape (resolution**2, 2).
    """
    theta = np.linspace(0.0, math.pi, resolution)
    phi = np.linspace(0.0, TWO_PI, resolution, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    tt = tt.ravel()
    pp = pp.ravel()
    c = np.cos(tt / 2.0)
    s = np.sin(tt / 2.0)
    e = np.exp(1j * pp)
    v1 = np.stack([c.astype(np.complex128), e * s], axis=1)
    v2 = np.stack([s.astype(np.complex128), -e * c], axis=1)
    return v1, v2


def grid_oracle(state: StateVector, resolution: int,
                budget: int = 10 ** 8) -> float:
    """Brute-force maximum over a dense detector grid on parties B..K.

    Party A is handled exactly by the Gram formula, every other party is
    scanned over a (theta, phi) grid with ``resolution`` points per axis.
    Only qubit parties B..K and at most three parties are supported
    (``SizeError``); grids whose total point count exceeds ``budget``
    raise ``ScaleError``.  The result approaches the true maximum from
    below as the resolution grows.
    """
    k = state.num_parties
    if k not in (2, 3) or any(d != 2 for d in state.dims[1:]):
        raise SizeError(
            "grid_oracle supports 2 or 3 parties with qubit parties B..K")
    if resolution < 2:
        raise RangeError(f"resolution must be >= 2, got {resolution}")
    total = resolution ** (2 * (k - 1))
    if total > budget:
        raise ScaleError(
            f"grid of {total} points exceeds the budget of {budget}")
    v1, v2 = _grid_pairs(resolution)
    t = state.tensor
    if k == 2:
        f1 = v1.conj() @ t.T
        f2 = v2.conj() @ t.T
        return float(np.max(vector_collectibility(f1, f2)))
    best = 0.0
    for b1, b2 in zip(v1, v2):
        tb1 = np.einsum("abc,b->ac", t, b1.conj())
        tb2 = np.einsum("abc,b->ac", t, b2.conj())
        f1 = v1.conj() @ tb1.T
        f2 = v2.conj() @ tb2.T
        m = float(np.max(vector_collectibility(f1, f2)))
        if m > best:
            best = m
    return best
