"""Independent reference implementations used only by the tests.

Everything here deliberately avoids the library's evaluation paths
(einsum contractions, closed forms): products are built with np.kron,
maxima with dense grids, averages with quadrature.
"""

import math

import numpy as np
from scipy.integrate import quad


def kron_chain(vectors):
    out = np.ones(1, dtype=np.complex128)
    for v in vectors:
        out = np.kron(out, v)
    return out


def brute_projection_product(state, bases):
    """prod_j |<chi_j|Psi>|^2 with chi_j assembled explicitly via kron.

    ``bases`` is one (n, dim) array per party, in party order A..K.
    """
    total = 1.0
    n = bases[0].shape[0]
    for j in range(n):
        chi = kron_chain([b[j] for b in bases])
        total *= abs(np.vdot(chi, state.amplitudes)) ** 2
    return total


def brute_conditionals(state, bases_bk):
    """Party-A conditional vectors via kron over parties B..K."""
    m = state.amplitudes.reshape(state.dims[0], -1)
    n = bases_bk[0].shape[0]
    out = []
    for j in range(n):
        proj = kron_chain([b[j] for b in bases_bk])
        out.append(m @ proj.conj())
    return np.array(out)


def party_a_grid_max(f1, f2, res=720):
    """Max over a (theta, phi) product grid of party-A bases of
    |<a1|f1>|^2 * |<a2|f2>|^2, with a2 the complement of a1."""
    th = np.linspace(0.0, math.pi, res)
    ph = np.linspace(0.0, 2.0 * math.pi, res, endpoint=False)
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    c = np.cos(tt.ravel() / 2.0)
    s = np.sin(tt.ravel() / 2.0)
    e = np.exp(1j * pp.ravel())
    a1 = np.stack([c.astype(np.complex128), e * s], axis=1)
    a2 = np.stack([s.astype(np.complex128), -e * c], axis=1)
    vals = (np.abs(a1.conj() @ np.asarray(f1)) ** 2
            * np.abs(a2.conj() @ np.asarray(f2)) ** 2)
    return float(vals.max())


def polar_average(pointwise, psi):
    """Average of a (psi, theta) closed form over a Haar-random basis:
    cos(theta) is uniform on [-1, 1]."""
    val, _ = quad(lambda u: pointwise(psi, math.acos(u)), -1.0, 1.0,
                  limit=200)
    return 0.5 * val


def polar_detect_prob(pointwise, psi, n=200_001):
    """Measure of {cos(theta) : pointwise value > 1/16} on a dense grid."""
    u = np.linspace(-1.0, 1.0, n)
    vals = np.fromiter((pointwise(psi, math.acos(x)) for x in u),
                       dtype=np.float64, count=n)
    return float(np.mean(vals > 1.0 / 16.0))
