"""Finite atomic symmetric-measure networks.

A network is a finite state space with strictly positive atom masses ``mu``
and a symmetric nonnegative coupling matrix ``W`` whose entry ``W[i, j]``
is the mass the coupling measure puts on the ordered pair ``(i, j)``.
Diagonal entries are allowed.  Every row sum must be strictly positive so
that the conductance ``c = row_sum(W) / mu`` is finite and positive.

Derived objects: conductance ``c``, stationary measure ``nu = c * mu``
(equal to the row sums of ``W``), the row-stochastic transition matrix
``P[i, j] = W[i, j] / nu[i]``, and the conditional rows
``rho_x[i, j] = W[i, j] / mu[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AsymmetricCoupling,
    DimensionMismatch,
    EmptyTargetSet,
    NonpositiveMass,
    NonpositiveWeight,
    ZeroConductance,
)

SYMMETRY_ATOL = 1e-12
COMMUTE_RTOL = 1e-10


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Network:
    """Validated finite symmetric-measure network.

    Attributes
    ----------
    states : tuple
        Ordered unique state identifiers.
    mu : ndarray, shape (n,)
        Strictly positive base-measure atoms.
    W : ndarray, shape (n, n)
        Exactly symmetric nonnegative coupling atoms; positive row sums.
    boundary : tuple of int, optional
        Indices of an absorbing set attached by the loader, if any.
    """

    states: tuple
    mu: np.ndarray
    W: np.ndarray
    boundary: Optional[tuple] = None

    @property
    def n(self) -> int:
        return len(self.states)

    def index(self, state) -> int:
        """Index of a state identifier."""
        try:
            return self.states.index(state)
        except ValueError:
            raise DimensionMismatch(f"unknown state {state!r}") from None

    def support(self) -> np.ndarray:
        """Boolean adjacency of the coupling support {(i, j): W[i, j] > 0}."""
        return self.W > 0.0


@dataclass(frozen=True)
class DerivedMeasures:
    """Conductance, stationary measure, transition matrix and conditional rows."""

    c: np.ndarray
    nu: np.ndarray
    P: np.ndarray
    rho_x: np.ndarray


@dataclass(frozen=True)
class Irreducibility:
    irreducible: bool
    components: tuple


@dataclass(frozen=True)
class ReweightResult:
    net2: Network
    commutes: bool


def _check_vector(x, n, name) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionMismatch(f"{name} must have shape ({n},), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DimensionMismatch(f"{name} contains non-finite entries")
    return x


def build_network(states: Sequence, mu, W, boundary=None) -> Network:
    """Validate inputs and build a :class:`Network`.

    Symmetry of ``W`` is checked to absolute tolerance 1e-12 and then the
    matrix is stored as the exact average ``(W + W.T) / 2`` so downstream
    identities see exact detailed balance.

    Raises
    ------
    AsymmetricCoupling
        ``W`` differs from its transpose beyond tolerance.
    ZeroConductance
        Some row of ``W`` sums to zero.
    NonpositiveMass
        Some ``mu[i] <= 0``.
    """
    states = tuple(states)
    n = len(states)
    if n < 1:
        raise DimensionMismatch("need at least one state")
    if len(set(states)) != n:
        raise DimensionMismatch("state identifiers must be unique")
    mu = _check_vector(mu, n, "mu")
    W = np.asarray(W, dtype=float)
    if W.shape != (n, n):
        raise DimensionMismatch(f"W must have shape ({n}, {n}), got {W.shape}")
    if not np.all(np.isfinite(W)):
        raise DimensionMismatch("W contains non-finite entries")
    if np.any(W < 0.0):
        raise DimensionMismatch("W contains negative entries")
    gap = np.max(np.abs(W - W.T)) if n else 0.0
    if gap > SYMMETRY_ATOL:
        raise AsymmetricCoupling(f"W deviates from its transpose by {gap:.3e}")
    if np.any(mu <= 0.0):
        raise NonpositiveMass("all mu atoms must be strictly positive")
    W = 0.5 * (W + W.T)
    row = W.sum(axis=1)
    if np.any(row <= 0.0):
        dead = [states[i] for i in np.flatnonzero(row <= 0.0)]
        raise ZeroConductance(f"states with zero coupling mass: {dead}")
    bidx = None
    if boundary is not None:
        bidx = tuple(sorted(int(i) for i in boundary))
        if bidx and not (0 <= bidx[0] and bidx[-1] < n):
            raise DimensionMismatch("boundary indices out of range")
    return Network(states, _readonly(mu), _readonly(W), bidx)


def symmetrize(W_raw, mu, states=None) -> Network:
    """Build the network of the symmetrized coupling ``(W_raw + W_raw.T) / 2``.

    A symmetric input is a fixed point.  Raises :class:`ZeroConductance`
    if the symmetrization leaves a state without mass.
    """
    W_raw = np.asarray(W_raw, dtype=float)
    if W_raw.ndim != 2 or W_raw.shape[0] != W_raw.shape[1]:
        raise DimensionMismatch("W_raw must be square")
    if np.any(W_raw < 0.0) or not np.all(np.isfinite(W_raw)):
        raise DimensionMismatch("W_raw must be nonnegative and finite")
    n = W_raw.shape[0]
    if states is None:
        states = tuple(range(n))
    return build_network(states, mu, 0.5 * (W_raw + W_raw.T))


def derive(net: Network) -> DerivedMeasures:
    """Conductance, stationary measure, transition matrix, conditional rows."""
    nu = net.W.sum(axis=1)
    c = nu / net.mu
    P = net.W / nu[:, None]
    rho_x = net.W / net.mu[:, None]
    return DerivedMeasures(_readonly(c), _readonly(nu), _readonly(P), _readonly(rho_x))


def reweight(net: Network, p) -> ReweightResult:
    """Replace the base measure by ``beta = p * mu``, keeping the coupling.

    ``commutes`` reports whether ``diag(p)`` commutes with the matrix of the
    coupling operator (relative tolerance 1e-10), which is equivalent to the
    measure built from the reweighted operator being symmetric; it holds
    exactly when ``p`` is constant on every connected component.
    """
    p = _check_vector(p, net.n, "p")
    if np.any(p <= 0.0):
        raise NonpositiveWeight("reweighting density must be strictly positive")
    R = derive(net).rho_x
    comm = p[:, None] * R - R * p[None, :]
    scale = max(1.0, float(np.max(np.abs(p[:, None] * R))))
    commutes = bool(np.max(np.abs(comm)) <= COMMUTE_RTOL * scale)
    net2 = build_network(net.states, p * net.mu, net.W, boundary=net.boundary)
    return ReweightResult(net2, commutes)


def components(net: Network) -> list:
    """Connected components of the coupling support, ordered by smallest member."""
    adj = net.support()
    seen = np.zeros(net.n, dtype=bool)
    out = []
    for start in range(net.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.flatnonzero(adj[i]):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        out.append(tuple(sorted(comp)))
    out.sort(key=lambda comp: comp[0])
    return out


def irreducibility(net: Network) -> Irreducibility:
    """Connectivity analysis of the coupling support.

    The measure is irreducible iff the support graph has exactly one
    component; otherwise any component ``A`` splits the support into
    ``(A x A) u (A^c x A^c)``.
    """
    comps = components(net)
    return Irreducibility(len(comps) == 1, tuple(comps))


def attainability(net: Network, x: int, A) -> Optional[int]:
    """Smallest ``n >= 1`` with positive n-step mass from ``x`` into ``A``.

    Returns ``None`` when no walk from ``x`` reaches ``A``.  Walk lengths are
    counted on the coupling support, so the answer is exact for the kernel
    powers (positive mass iff a walk of that exact length exists).
    """
    A = sorted(set(int(i) for i in A))
    if not A:
        raise EmptyTargetSet("target set is empty")
    if not (0 <= x < net.n) or A[0] < 0 or A[-1] >= net.n:
        raise DimensionMismatch("state index out of range")
    adj = net.support().astype(np.int64)
    target = np.zeros(net.n, dtype=bool)
    target[A] = True
    # Unreachable iff A misses the component of x.
    comp = next(c for c in components(net) if x in c)
    if not any(a in comp for a in A):
        return None
    reach = np.zeros(net.n, dtype=np.int64)
    reach[x] = 1
    for n in range(1, 2 * net.n + 1):
        reach = np.minimum(adj.T @ reach, 1)  # states hit in exactly n steps
        if np.any((reach > 0) & target):
            return n
    return None
