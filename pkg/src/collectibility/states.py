"""Pure multi-party states, local detector bases, and Haar sampling.

A K-party pure state lives in a tensor product of per-party Hilbert spaces
with dimensions ``dims = (d_A, d_B, ..., d_K)``.  Amplitudes are stored as a
flat complex vector in row-major order with party A most significant, so the
amplitude of basis label ``(i_A, i_B, ..., i_K)`` sits at flat index
``i_A * d_B * ... * d_K + ... + i_K``.

A detector set attaches one orthonormal N-element basis to each covered
party.  Projecting the state onto the j-th detector vector of every party
except A leaves an unnormalized conditional vector in party A's space; those
conditionals feed the Gram-matrix measures in :mod:`collectibility.measures`.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    NormError,
    ParamError,
    RangeError,
    ShapeError,
    SizeError,
    UnknownNameError,
)

NORM_TOL = 1e-9
ORTHO_TOL = 1e-9

TWO_PI = 2.0 * math.pi


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on parties with dimensions ``dims``.

    Attributes
    ----------
    dims:
        Per-party dimensions, party A first.  Every entry is at least 2.
    amplitudes:
        Flat complex vector of length ``prod(dims)``, unit norm, row-major
        with party A most significant.
    """

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    @property
    def num_parties(self) -> int:
        return len(self.dims)

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per party."""
        return self.amplitudes.reshape(self.dims)


@dataclass(frozen=True, eq=False)
class LocalBasis:
    """Orthonormal set of ``n`` vectors in one party's ``dim``-space.

    Vectors are rows of ``vectors`` (shape ``(n, dim)``).  ``n`` may be
    smaller than ``dim``; the rows then span a proper subspace.  ``party``
    is an optional 0-based tag recording which party the basis belongs to.
    """

    vectors: np.ndarray
    party: int | None = None

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.complex128)
        if v.ndim != 2:
            raise ShapeError("basis vectors must form a 2-d array (n, dim)")
        n, dim = v.shape
        if n < 1 or n > dim:
            raise SizeError(f"need 1 <= n <= dim, got n={n}, dim={dim}")
        gram = v.conj() @ v.T
        if not np.allclose(gram, np.eye(n), atol=ORTHO_TOL, rtol=0.0):
            raise NormError("basis vectors are not orthonormal within 1e-9")
        object.__setattr__(self, "vectors", _freeze(v))

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True, eq=False)
class DetectorSet:
    """One ``LocalBasis`` per covered party, all with the same vector count.

    ``parties`` lists the covered parties as strictly increasing 0-based
    indices (A = 0).  The j-th detector vectors of all covered parties
    combine into the product projector used by the measures.
    """

    bases: tuple[LocalBasis, ...]
    parties: tuple[int, ...]
    n: int

    def __post_init__(self):
        if len(self.bases) != len(self.parties) or not self.bases:
            raise ShapeError("need one basis per covered party")
        if any(p < 0 for p in self.parties):
            raise ShapeError("party indices must be nonnegative")
        if any(a >= b for a, b in zip(self.parties, self.parties[1:])):
            raise ShapeError("party indices must be strictly increasing")
        if any(b.n != self.n for b in self.bases):
            raise SizeError("all bases in a detector set must share n")


@dataclass(frozen=True)
class BlochAngles:
    """Polar/azimuthal pair on the qubit Bloch sphere.

    ``theta`` in [0, pi], ``phi`` in [0, 2*pi).
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi) or not math.isfinite(self.theta):
            raise RangeError(f"theta must lie in [0, pi], got {self.theta}")
        if not (0.0 <= self.phi < TWO_PI) or not math.isfinite(self.phi):
            raise RangeError(f"phi must lie in [0, 2*pi), got {self.phi}")


def make_state(amplitudes: Sequence[complex] | np.ndarray,
               dims: Iterable[int]) -> StateVector:
    """Validate and normalize a flat amplitude vector into a ``StateVector``.

    The length must equal ``prod(dims)`` and every dimension must be at
    least 2 (``ShapeError`` otherwise).  Norm deviations up to 1e-9 are
    silently renormalized; anything larger raises ``NormError``.
    """
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise ShapeError(f"every party needs dimension >= 2, got {dims}")
    amps = np.asarray(amplitudes, dtype=np.complex128)
    expected = math.prod(dims)
    if amps.shape != (expected,):
        raise ShapeError(
            f"amplitude vector has shape {amps.shape}, expected ({expected},) "
            f"for dims {dims}")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > NORM_TOL:
        raise NormError(f"state norm {norm!r} deviates from 1 beyond 1e-9")
    return StateVector(dims=dims, amplitudes=_freeze(amps / norm))


def _require_params(name: str, params: tuple, count: int) -> tuple:
    if len(params) != count:
        raise ParamError(f"state '{name}' takes {count} parameter(s), "
                         f"got {len(params)}")
    return params


def named_state(name: str, params: Sequence[float] = ()) -> StateVector:
    """Build one of the recognized reference states.

    ========  ==========================  =============================
    name      params                      state
    ========  ==========================  =============================
    bell      none                        (|00> + |11>)/sqrt(2)
    ghz       K [, N]                     (|0..0> + ... + |N-1..N-1>)/sqrt(N)
    w         none                        (|001> + |010> + |100>)/sqrt(3)
    bs        none                        |0>_A (|00> + |11>)_BC/sqrt(2)
    schmidt   psi in [0, pi]              cos(psi/2)|00> + sin(psi/2)|11>
    sep       K [, N]                     |0>^K on quNits
    ========  ==========================  =============================
    """
    params = tuple(params)
    if name == "bell":
        _require_params(name, params, 0)
        r = 1.0 / math.sqrt(2.0)
        return make_state([r, 0.0, 0.0, r], (2, 2))
    if name == "w":
        _require_params(name, params, 0)
        r = 1.0 / math.sqrt(3.0)
        amps = np.zeros(8, dtype=np.complex128)
        amps[[1, 2, 4]] = r
        return make_state(amps, (2, 2, 2))
    if name == "bs":
        _require_params(name, params, 0)
        r = 1.0 / math.sqrt(2.0)
        amps = np.zeros(8, dtype=np.complex128)
        amps[[0, 3]] = r
        return make_state(amps, (2, 2, 2))
    if name == "schmidt":
        (psi,) = _require_params(name, params, 1)
        psi = float(psi)
        if not (0.0 <= psi <= math.pi):
            raise ParamError(f"schmidt angle must lie in [0, pi], got {psi}")
        return make_state(
            [math.cos(psi / 2.0), 0.0, 0.0, math.sin(psi / 2.0)], (2, 2))
    if name in ("ghz", "sep"):
        if not params:
            raise ParamError(f"state '{name}' needs a party count K")
        if len(params) > 2:
            raise ParamError(f"state '{name}' takes K and optionally N")
        k = int(params[0])
        n = int(params[1]) if len(params) == 2 else 2
        if k != params[0] or n != (params[1] if len(params) == 2 else 2):
            raise ParamError(f"state '{name}' parameters must be integers")
        if k < 2 or n < 2:
            raise ParamError(f"state '{name}' needs K >= 2 and N >= 2, "
                             f"got K={k}, N={n}")
        amps = np.zeros(n ** k, dtype=np.complex128)
        if name == "sep":
            amps[0] = 1.0
        else:
            stride = (n ** k - 1) // (n - 1)  # 1 + n + ... + n**(k-1)
            amps[np.arange(n) * stride] = 1.0 / math.sqrt(n)
        return make_state(amps, (n,) * k)
    raise UnknownNameError(f"unknown state name '{name}'")


def schmidt_angle(state: StateVector) -> float:
    """Canonical two-qubit entanglement angle ``psi`` in [0, pi/2].

    The singular values of the 2x2 amplitude matrix are
    ``cos(psi/2) >= sin(psi/2)``; ``psi`` is invariant under local
    unitaries.  Raises ``ShapeError`` unless ``dims == (2, 2)``.
    """
    if state.dims != (2, 2):
        raise ShapeError(f"schmidt_angle needs dims (2, 2), got {state.dims}")
    s = np.linalg.svd(state.amplitudes.reshape(2, 2), compute_uv=False)
    return float(2.0 * math.atan2(s[1], s[0]))


def bloch_basis(theta: float | BlochAngles, phi: float = 0.0,
                party: int | None = None) -> LocalBasis:
    """Qubit basis pinned to a Bloch direction.

    The first vector is ``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>``;
    the second is its orthogonal complement
    ``sin(theta/2)|0> - e^{i phi} cos(theta/2)|1>``.  So ``(0, 0)`` gives
    ``{|0>, -|1>}``.  Angles outside the canonical ranges raise
    ``RangeError``.
    """
    if isinstance(theta, BlochAngles):
        angles = theta
    else:
        angles = BlochAngles(float(theta), float(phi))
    c = math.cos(angles.theta / 2.0)
    s = math.sin(angles.theta / 2.0)
    e = complex(math.cos(angles.phi), math.sin(angles.phi))
    vectors = np.array([[c, e * s], [s, -e * c]], dtype=np.complex128)
    return LocalBasis(vectors=vectors, party=party)


def computational_basis(dim: int, n: int | None = None,
                        party: int | None = None) -> LocalBasis:
    """First ``n`` computational vectors ``|0>, ..., |n-1>`` in ``dim``-space."""
    n = dim if n is None else n
    return LocalBasis(vectors=np.eye(dim, dtype=np.complex128)[:n],
                      party=party)


def haar_basis(dim: int, rng: np.random.Generator,
               party: int | None = None) -> LocalBasis:
    """Haar-random orthonormal basis of a ``dim``-dimensional space.

    QR decomposition of a complex Ginibre matrix with the R-diagonal phase
    fix, which makes the distribution exactly unitarily invariant.
    """
    if dim < 2:
        raise SizeError(f"need dim >= 2, got {dim}")
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return LocalBasis(vectors=q.T.copy(), party=party)


def haar_state(dims: Iterable[int], rng: np.random.Generator) -> StateVector:
    """Haar-random pure state on parties with the given dimensions."""
    dims = tuple(int(d) for d in dims)
    total = math.prod(dims)
    z = rng.normal(size=total) + 1j * rng.normal(size=total)
    return make_state(z / np.linalg.norm(z), dims)


def detector_set(bases: Sequence[LocalBasis],
                 parties: Sequence[int] | None = None) -> DetectorSet:
    """Assemble a ``DetectorSet``, taking parties from the basis tags if unset."""
    bases = tuple(bases)
    if parties is None:
        if any(b.party is None for b in bases):
            raise ShapeError("untagged bases need an explicit parties list")
        parties = tuple(b.party for b in bases)  # type: ignore[misc]
    else:
        parties = tuple(int(p) for p in parties)
    if not bases:
        raise ShapeError("detector set needs at least one basis")
    return DetectorSet(bases=bases, parties=parties, n=bases[0].n)


def bloch_detectors(angle_pairs: Sequence[tuple[float, float] | BlochAngles],
                    parties: Sequence[int] | None = None) -> DetectorSet:
    """Bloch bases on consecutive parties B, C, ... (or on ``parties``)."""
    pairs = list(angle_pairs)
    if parties is None:
        parties = range(1, len(pairs) + 1)
    bases = []
    for p, pair in zip(parties, pairs):
        if isinstance(pair, BlochAngles):
            bases.append(bloch_basis(pair, party=int(p)))
        else:
            theta, phi = pair
            bases.append(bloch_basis(float(theta), float(phi), party=int(p)))
    return detector_set(bases, parties)


def computational_detectors(state: StateVector,
                            parties: Sequence[int] | None = None,
                            n: int | None = None) -> DetectorSet:
    """Computational bases on ``parties`` (default: every party except A).

    ``n`` defaults to the smallest covered dimension so the same vector
    count applies to every covered party.
    """
    if parties is None:
        parties = tuple(range(1, state.num_parties))
    else:
        parties = tuple(int(p) for p in parties)
    if any(p < 0 or p >= state.num_parties for p in parties):
        raise ShapeError(f"parties {parties} out of range for {state.dims}")
    if n is None:
        n = min(state.dims[p] for p in parties)
    bases = [computational_basis(state.dims[p], n, party=p) for p in parties]
    return detector_set(bases, parties)


def _check_cover_rest(state: StateVector, detectors: DetectorSet) -> None:
    expected = tuple(range(1, state.num_parties))
    if detectors.parties != expected:
        raise ShapeError(
            f"detectors cover parties {detectors.parties}, need exactly "
            f"{expected} (all parties except A)")
    for basis, p in zip(detectors.bases, detectors.parties):
        if basis.dim != state.dims[p]:
            raise ShapeError(
                f"basis on party {p} has dim {basis.dim}, state has "
                f"{state.dims[p]}")


def project_conditional(state: StateVector, detectors: DetectorSet,
                        j: int) -> np.ndarray:
    """Unnormalized conditional vector in party A's space for outcome ``j``.

    ``detectors`` must cover exactly parties B..K; ``j`` is 0-based.  The
    squared norms of the conditionals over all j sum to 1 exactly when the
    detector bases are complete (n equals every covered dimension).
    """
    if not (0 <= j < detectors.n):
        raise RangeError(f"outcome index {j} out of range [0, {detectors.n})")
    return conditional_vectors(state, detectors)[j]


def conditional_vectors(state: StateVector,
                        detectors: DetectorSet) -> np.ndarray:
    """All ``n`` conditional vectors at once, shape ``(n, d_A)``."""
    _check_cover_rest(state, detectors)
    vec = state.tensor
    fresh = True  # the first contraction introduces the outcome axis j
    for basis in reversed(detectors.bases):
        if fresh:
            vec = np.einsum("...b,jb->j...", vec, basis.vectors.conj())
            fresh = False
        else:
            vec = np.einsum("j...b,jb->j...", vec, basis.vectors.conj())
    return vec
