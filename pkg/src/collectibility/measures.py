"""Collectibility measures built on detector-conditioned Gram matrices.

With detector bases fixed on parties B..K, the unnormalized conditionals
phi_j = [<a_j^B| x ... x <a_j^K|] |Psi> live in party A's space and their
Gram matrix G_jk = <phi_j|phi_k> carries everything the measures need.
For two detector vectors per party the collectibility

    Y = (1/4) * (sqrt(G11*G22) + sqrt(G11*G22 - |G12|^2))^2

is the exact maximum over party-A bases of the projection product
prod_j |<chi_j|Psi>|^2, where chi_j is the j-th product detector vector
over all parties.  Bounds: Y <= n^-n for every pure state and
Y <= n^-(n*k) for fully product states, so Y above the product bound
certifies entanglement.

Closed forms for two qubits use the state angle psi (schmidt_angle) and
the detector polar angle theta; the collectibility is independent of the
azimuth.  The rescaled value r = (16*Y - 1)/3 maps the two-qubit range
onto [-1/3, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundError, GramError, RangeError, ShapeError, SizeError
from .states import DetectorSet, StateVector, conditional_vectors

HERMIT_TOL = 1e-12
CS_TOL = 1e-12
PSD_TOL = 1e-12
BOUND_TOL = 1e-9

MEAN_GUARD = 1e-7  # switch to the series expansion this close to psi = pi/2

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Hermitian positive-semidefinite matrix of conditional overlaps."""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class CollectibilityReport:
    """Computed value with its bounds and the resulting verdict.

    ``z_value`` is -ln(value) (+inf when the value is 0).  ``verdict`` is
    "Entangled" exactly when value exceeds ``bound_sep`` strictly, else
    "Inconclusive".  ``path`` records how the value was computed:
    "gram-formula", "full-product", or "closed-form".
    """

    value: float
    z_value: float
    bound_max: float
    bound_sep: float
    verdict: str
    path: str

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "z": self.z_value,
            "bound_max": self.bound_max,
            "bound_sep": self.bound_sep,
            "verdict": self.verdict,
            "path": self.path,
        }


def max_bound(n: int) -> float:
    """Upper bound n^-n on Y for any pure state and n detector vectors."""
    return float(n) ** (-int(n))


def separable_bound(n: int, k: int) -> float:
    """Upper bound n^-(n*k) on Y for fully product states of k parties."""
    return float(n) ** (-int(n) * int(k))


def rescaled(y):
    """Affine map r = (16*Y - 1)/3 sending [1/16, 1/4] onto [0, 1]."""
    return (16.0 * y - 1.0) / 3.0


def gram_from_entries(entries) -> GramMatrix:
    """Validate raw overlap entries into a ``GramMatrix``.

    Hermiticity and positive semidefiniteness are enforced within 1e-12
    (``GramError`` beyond); the returned entries are exactly hermitized.
    """
    e = np.asarray(entries, dtype=np.complex128)
    if e.ndim != 2 or e.shape[0] != e.shape[1] or e.shape[0] < 1:
        raise ShapeError(f"gram entries must be square, got shape {e.shape}")
    if not np.allclose(e, e.conj().T, atol=HERMIT_TOL, rtol=0.0):
        raise GramError("gram entries deviate from hermitian beyond 1e-12")
    e = 0.5 * (e + e.conj().T)
    w = np.linalg.eigvalsh(e)
    if w[0] < -PSD_TOL:
        raise GramError(
            f"gram matrix has negative eigenvalue {w[0]:.3e} beyond 1e-12")
    e.setflags(write=False)
    return GramMatrix(entries=e)


def gram_matrix(state: StateVector, detectors: DetectorSet) -> GramMatrix:
    """Overlap matrix of the detector-conditioned party-A vectors.

    ``detectors`` must cover exactly parties B..K.
    """
    c = conditional_vectors(state, detectors)
    entries = c.conj() @ c.T
    return gram_from_entries(entries)


def projection_product(state: StateVector, detectors: DetectorSet) -> float:
    """prod_j |<chi_j|Psi>|^2 for detectors covering every party."""
    if detectors.parties != tuple(range(state.num_parties)):
        raise ShapeError(
            f"projection_product needs detectors on all parties, got "
            f"{detectors.parties}")
    for basis, p in zip(detectors.bases, detectors.parties):
        if basis.dim != state.dims[p]:
            raise ShapeError(
                f"basis on party {p} has dim {basis.dim}, state has "
                f"{state.dims[p]}")
    vec = state.tensor
    fresh = True
    for basis in detectors.bases:
        if fresh:
            vec = np.einsum("a...,ja->j...", vec, basis.vectors.conj())
            fresh = False
        else:
            vec = np.einsum("ja...,ja->j...", vec, basis.vectors.conj())
    return float(np.prod(np.abs(vec) ** 2))


def gram_defect(f1, f2):
    """G11*G22 - |G12|^2 from the conditional vectors themselves.

    Uses the Lagrange identity (Cauchy-Binet for two rows): the Gram
    determinant equals the sum of squared 2x2 minors of the stacked
    vectors.  Unlike the subtraction of Gram entries this is exactly
    nonnegative and exactly zero for proportional vectors, which matters
    because the square root of the defect enters the collectibility with
    infinite slope at zero, turning 1e-17 subtraction noise into 1e-9
    value errors right at the separability threshold.

    Broadcasts over leading axes; the vector components sit on the last
    axis.
    """
    f1 = np.asarray(f1, dtype=np.complex128)
    f2 = np.asarray(f2, dtype=np.complex128)
    minors = f1[..., :, None] * f2[..., None, :]
    minors = minors - np.swapaxes(minors, -1, -2)
    return 0.5 * np.sum(np.abs(minors) ** 2, axis=(-2, -1))


def vector_collectibility(f1, f2):
    """Collectibility straight from the two conditional vectors.

    Numerically preferred over ``gram_collectibility`` whenever the
    vectors are available; broadcasts over leading axes.
    """
    f1 = np.asarray(f1, dtype=np.complex128)
    f2 = np.asarray(f2, dtype=np.complex128)
    g11 = np.sum(f1.real ** 2 + f1.imag ** 2, axis=-1)
    g22 = np.sum(f2.real ** 2 + f2.imag ** 2, axis=-1)
    y = 0.25 * (np.sqrt(g11 * g22) + np.sqrt(gram_defect(f1, f2))) ** 2
    return float(y) if y.ndim == 0 else y


def gram_collectibility(g11, g22, g12_abs2):
    """Two-detector collectibility from Gram data; broadcasts over arrays.

    Accepts G11, G22 and |G12|^2.  Cauchy-Schwarz violations beyond 1e-12
    raise ``GramError``; smaller negatives are clipped to zero.
    """
    g11 = np.asarray(g11, dtype=np.float64)
    g22 = np.asarray(g22, dtype=np.float64)
    g12_abs2 = np.asarray(g12_abs2, dtype=np.float64)
    if np.any(g11 < -CS_TOL) or np.any(g22 < -CS_TOL) or np.any(g12_abs2 < -CS_TOL):
        raise GramError("negative gram data beyond 1e-12")
    prod = np.maximum(g11, 0.0) * np.maximum(g22, 0.0)
    diff = prod - g12_abs2
    if np.any(diff < -CS_TOL):
        raise GramError(
            f"|G12|^2 exceeds G11*G22 by {float(np.max(-diff)):.3e}, "
            f"beyond 1e-12")
    y = 0.25 * (np.sqrt(prod) + np.sqrt(np.maximum(diff, 0.0))) ** 2
    return float(y) if y.ndim == 0 else y


def verdict(y: float, k: int, n: int,
            path: str = "closed-form") -> CollectibilityReport:
    """Wrap a computed value in a report with bounds and verdict.

    ``k`` is the party count, ``n`` the detector-vector count.  Values
    above n^-n by more than 1e-9 raise ``BoundError``; values inside the
    tolerance band are clamped to the bound.
    """
    k = int(k)
    n = int(n)
    if k < 2 or n < 2:
        raise RangeError(f"need k >= 2 and n >= 2, got k={k}, n={n}")
    y = float(y)
    if not math.isfinite(y) or y < 0.0:
        raise RangeError(f"value must be finite and nonnegative, got {y!r}")
    bmax = max_bound(n)
    bsep = separable_bound(n, k)
    if y > bmax + BOUND_TOL:
        raise BoundError(
            f"value {y!r} exceeds the pure-state bound {bmax!r} beyond 1e-9")
    value = min(y, bmax)
    z = math.inf if value == 0.0 else -math.log(value)
    label = "Entangled" if value > bsep else "Inconclusive"
    return CollectibilityReport(value=value, z_value=z, bound_max=bmax,
                                bound_sep=bsep, verdict=label, path=path)


def collectibility_from_gram(gram: GramMatrix,
                             num_parties: int) -> CollectibilityReport:
    """Exact party-A-maximized collectibility from a 2x2 Gram matrix."""
    if gram.n != 2:
        raise SizeError(
            f"the gram formula needs exactly 2 detector vectors, got {gram.n}")
    e = gram.entries
    y = gram_collectibility(e[0, 0].real, e[1, 1].real, abs(e[0, 1]) ** 2)
    return verdict(y, num_parties, 2, path="gram-formula")


def collectibility(state: StateVector,
                   detectors: DetectorSet) -> CollectibilityReport:
    """Dispatch on detector coverage.

    Detectors on parties B..K use the exact Gram formula (party A
    maximized analytically, n = 2 only); detectors on all parties evaluate
    the plain projection product.
    """
    all_parties = tuple(range(state.num_parties))
    if detectors.parties == all_parties:
        y = projection_product(state, detectors)
        return verdict(y, state.num_parties, detectors.n, path="full-product")
    if detectors.parties == all_parties[1:]:
        if detectors.n != 2:
            raise SizeError(
                f"the gram formula needs exactly 2 detector vectors, got "
                f"{detectors.n}")
        c = conditional_vectors(state, detectors)
        y = vector_collectibility(c[0], c[1])
        return verdict(y, state.num_parties, 2, path="gram-formula")
    raise ShapeError(
        f"detectors must cover parties B..K or all parties, got "
        f"{detectors.parties}")


def _check_angle(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= math.pi) or not math.isfinite(value):
        raise RangeError(f"{name} must lie in [0, pi], got {value!r}")
    return value


def two_qubit_collectibility(psi: float, theta: float) -> float:
    """Closed form for a two-qubit state at equal-polar-angle detectors.

    For the state cos(psi/2)|00> + sin(psi/2)|11> and a party-B basis at
    polar angle theta (any azimuth; the value does not depend on it):

        Y = (2*sin(psi) + sqrt(3 - 2*cos(2*theta)*cos(psi)^2
                                 - cos(2*psi)))^2 / 64
    """
    psi = _check_angle("psi", psi)
    theta = _check_angle("theta", theta)
    radicand = (3.0 - 2.0 * math.cos(2.0 * theta) * math.cos(psi) ** 2
                - math.cos(2.0 * psi))
    return (2.0 * math.sin(psi) + math.sqrt(radicand)) ** 2 / 64.0


def two_qubit_extremes(psi: float) -> tuple[float, float]:
    """(min, max) of the closed form over theta.

    The minimum sin(psi)^2/4 sits at theta = 0, the maximum
    (1 + sin(psi))^2/16 at theta = pi/2.
    """
    psi = _check_angle("psi", psi)
    s = math.sin(psi)
    return s * s / 4.0, (1.0 + s) ** 2 / 16.0


def two_qubit_mean(psi: float) -> float:
    """Average of the closed form over a Haar-random party-B basis.

        mean Y = (4 + 14*sin(psi)^2 + 3*(pi - 2*psi)*tan(psi)) / 96

    continued through psi = pi/2 by its limit 1/4 (series expansion inside
    a 1e-7 guard band, where the tangent blows up numerically).
    """
    psi = _check_angle("psi", psi)
    eps = psi - HALF_PI
    if abs(eps) < MEAN_GUARD:
        return 0.25 - eps * eps / 6.0
    s2 = math.sin(psi) ** 2
    return (4.0 + 14.0 * s2 + 3.0 * (math.pi - 2.0 * psi) * math.tan(psi)) / 96.0


def two_qubit_detect_prob(psi: float) -> float:
    """Probability that a Haar-random party-B basis certifies entanglement.

    Detection means Y > 1/16.  In terms of u = cos(theta), which is
    uniform on [-1, 1] under the Haar measure, the condition reads
    u^2 < 1 - (1 - 2*sin(psi))/cos(psi)^2, giving

        P = sqrt(2*sin(psi) - sin(psi)^2) / |cos(psi)|

    when sin(psi) < 1/2 (psi below pi/6 or above 5*pi/6) and 1 otherwise.
    """
    psi = _check_angle("psi", psi)
    s = math.sin(psi)
    if 2.0 * s >= 1.0:
        return 1.0
    c = abs(math.cos(psi))
    return min(1.0, math.sqrt(2.0 * s - s * s) / c)
