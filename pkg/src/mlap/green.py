r"""Killed chains, Green's functions and reproducing kernels.

Formula sheet
-------------
Every Gram entry produced here is reproducible by hand from the following
conventions.  Fix a network with transition matrix ``P`` and stationary
weights ``nu`` (row sums of ``W``), and a nonempty absorbing boundary
whose complement (the interior) reaches it along the coupling support.

* ``P_int``: restriction of ``P`` to interior rows and columns.  It is
  substochastic with spectral radius < 1, so the killed chain is
  transient.
* Green matrix: ``G = (I - P_int)^{-1} = sum_n P_int^n``.
* Green indicator: for ``A`` inside the interior,
  ``G_A = G @ chi_A`` on the interior, extended by zero on the boundary.
  It satisfies ``(Delta G_A)_i = c_i * chi_A(i)`` for interior ``i`` and
  ``<f, G_A>_E = sum_{i in A} f_i nu_i`` for every ``f`` vanishing on the
  boundary.
* Killed pair masses use the full stationary weights restricted to the
  interior: ``rho_n(A x B) = sum_{i in A} nu_i (P_int^n chi_B)_i``.
* Kernels over set families:

  - ``K(A, B)   = sum_n rho_n(A x B) = <chi_A, G chi_B>_{L2(nu)}``
    (boundary required; sets inside the interior),
  - ``k_rho(A, B) = nu(A & B) - W-mass(A x B)`` (the indicator Gram),
  - ``K_nu(A, B)  = nu(A & B)``,
  - ``N_rho(A, B) = ||G_A - G_B||^2_E`` (boundary required); it is
    conditionally negative definite and embeds as squared Hilbert
    distances of the points ``alpha(A) = G_A``.

Worked example: the 3-path with unit masses and unit couplings,
boundary {2}.  Then ``nu = (1, 2, 1)``, ``P_int = [[0, 1], [1/2, 0]]``,
``G = [[2, 2], [1, 2]]``, and
``K({0}, {0}) = nu_0 * G[0, 0] = 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    FamilyTooSmall,
    MissingBoundary,
    SetMeetsBoundary,
    TrappedInterior,
)
from .energy import KernelGram, energy_inner, indicator, indicator_gram, normalize_family
from .net import Network, derive
from .operators import harmonic_basis

KERNEL_IDS = ("K", "k_rho", "K_nu", "N_rho")
RADIUS_MARGIN = 1e-12


@dataclass(frozen=True)
class BoundaryConfig:
    boundary: tuple
    interior: tuple


@dataclass(frozen=True)
class KilledRestriction:
    P_int: np.ndarray
    spectral_radius: float
    config: BoundaryConfig


def boundary_config(net: Network, boundary) -> BoundaryConfig:
    """Validate an absorbing boundary; every interior state must reach it."""
    bidx = sorted(set(int(i) for i in boundary))
    if not bidx:
        raise DimensionMismatch("boundary must be nonempty")
    if bidx[0] < 0 or bidx[-1] >= net.n:
        raise DimensionMismatch("boundary index out of range")
    bset = set(bidx)
    interior = tuple(i for i in range(net.n) if i not in bset)
    adj = net.support()
    ok = np.zeros(net.n, dtype=bool)
    stack = list(bidx)
    ok[bidx] = True
    while stack:
        i = stack.pop()
        for j in np.flatnonzero(adj[i]):
            if not ok[j]:
                ok[j] = True
                stack.append(int(j))
    trapped = [i for i in interior if not ok[i]]
    if trapped:
        raise TrappedInterior(f"interior states cannot reach boundary: {trapped}")
    return BoundaryConfig(tuple(bidx), interior)


def killed_restriction(net: Network, boundary) -> KilledRestriction:
    """Interior restriction of P and its spectral radius (< 1)."""
    cfg = boundary_config(net, boundary)
    d = derive(net)
    idx = list(cfg.interior)
    P_int = d.P[np.ix_(idx, idx)] if idx else np.zeros((0, 0))
    if idx:
        s = np.sqrt(d.nu[idx])
        S = net.W[np.ix_(idx, idx)] / np.outer(s, s)
        radius = float(np.max(np.abs(np.linalg.eigvalsh(S))))
    else:
        radius = 0.0
    if radius >= 1.0 - RADIUS_MARGIN:
        raise TrappedInterior(f"killed chain is not transient: radius {radius}")
    return KilledRestriction(P_int, radius, cfg)


def green_operator(net: Network, boundary, method: str = "solve", tol: float = 1e-12) -> np.ndarray:
    """Green matrix ``(I - P_int)^{-1}`` on the interior.

    ``method`` is "solve" (dense factorization) or "neumann" (partial sums
    accumulated until the geometric tail bound drops below ``tol``); both
    agree entrywise and all entries are nonnegative.
    """
    killed = killed_restriction(net, boundary)
    k = killed.P_int.shape[0]
    if k == 0:
        return np.zeros((0, 0))
    if method == "solve":
        return np.linalg.solve(np.eye(k) - killed.P_int, np.eye(k))
    if method == "neumann":
        G = np.eye(k)
        term = np.eye(k)
        r = killed.spectral_radius
        for _ in range(1000000):
            term = term @ killed.P_int
            G = G + term
            # tail of the series is bounded by ||term|| * r / (1 - r)
            if np.max(np.abs(term)) * r / (1.0 - r) < tol:
                break
        return G
    raise DimensionMismatch(f"method must be 'solve' or 'neumann', got {method!r}")


def green_indicator(net: Network, boundary, A) -> np.ndarray:
    """Green function of a set: zero on the boundary, ``G @ chi_A`` inside."""
    killed = killed_restriction(net, boundary)
    cfg = killed.config
    A = sorted(set(int(i) for i in A))
    if set(A) & set(cfg.boundary):
        raise SetMeetsBoundary("indicator set must lie inside the interior")
    out = np.zeros(net.n)
    if not A:
        return out
    idx = list(cfg.interior)
    chi = np.array([1.0 if i in set(A) else 0.0 for i in idx])
    out[idx] = np.linalg.solve(np.eye(len(idx)) - killed.P_int, chi)
    return out


def _interior_family(net: Network, family, cfg: BoundaryConfig) -> tuple:
    fam = normalize_family(net, family, allow_empty=True)
    bset = set(cfg.boundary)
    for A in fam:
        if set(A) & bset:
            raise SetMeetsBoundary("kernel sets must lie inside the interior")
    return fam


def kernel_gram(net: Network, kernel_id: str, family, boundary=None) -> KernelGram:
    """Gram matrix of one of the four set kernels over a family.

    ``K`` and ``N_rho`` describe the killed chain and require a boundary;
    ``k_rho`` and ``K_nu`` are boundary-free.  ``K``, ``k_rho`` and
    ``K_nu`` Grams are PSD; ``N_rho`` is conditionally negative definite.
    """
    if kernel_id not in KERNEL_IDS:
        raise DimensionMismatch(f"kernel_id must be one of {KERNEL_IDS}")
    if kernel_id == "k_rho":
        return indicator_gram(net, family)
    if kernel_id == "K_nu":
        fam = normalize_family(net, family, allow_empty=True)
        nu = net.W.sum(axis=1)
        m = len(fam)
        gram = np.zeros((m, m))
        for a, A in enumerate(fam):
            for b, B in enumerate(fam[: a + 1]):
                inter = sorted(set(A) & set(B))
                gram[a, b] = gram[b, a] = float(np.sum(nu[inter]))
        return KernelGram("K_nu", fam, gram)
    if boundary is None:
        raise MissingBoundary(f"kernel {kernel_id} requires an absorbing boundary")
    killed = killed_restriction(net, boundary)
    cfg = killed.config
    fam = _interior_family(net, family, cfg)
    idx = list(cfg.interior)
    nu_int = derive(net).nu[idx]
    pos = {state: row for row, state in enumerate(idx)}
    chis = np.zeros((len(fam), len(idx)))
    for a, A in enumerate(fam):
        for i in A:
            chis[a, pos[i]] = 1.0
    if kernel_id == "K":
        G = np.linalg.solve(np.eye(len(idx)) - killed.P_int, chis.T)  # columns G chi_B
        gram = (chis * nu_int) @ G
        gram = 0.5 * (gram + gram.T)
        return KernelGram("K", fam, gram)
    # N_rho: squared energy distances of Green indicators
    greens = [green_indicator(net, boundary, A) for A in fam]
    m = len(fam)
    gram = np.zeros((m, m))
    for a in range(m):
        for b in range(a + 1):
            diff = greens[a] - greens[b]
            gram[a, b] = gram[b, a] = energy_inner(net, diff, diff)
    return KernelGram("N_rho", fam, gram)


def isometry_suite(net: Network, boundary, family) -> dict:
    """Three independent evaluations of the killed-kernel norms.

    For each set ``A`` the report carries the kernel diagonal ``K(A, A)``
    (dense solve), the energy norm of the Green indicator (weak-form
    quadratic), and the L2(nu) norm of ``(I - P_int)^{-1/2} chi_A``
    (eigendecomposition of the symmetrized interior operator), together
    with the worst pairwise gap between ``<G_A, G_B>_E`` and ``K(A, B)``.
    """
    killed = killed_restriction(net, boundary)
    cfg = killed.config
    fam = _interior_family(net, family, cfg)
    idx = list(cfg.interior)
    d = derive(net)
    nu_int = d.nu[idx]
    pos = {state: row for row, state in enumerate(idx)}

    gram = kernel_gram(net, "K", fam, boundary).gram
    greens = [green_indicator(net, boundary, A) for A in fam]

    # (I - P_int)^{-1/2} through the nu-symmetrized conjugate.
    s = np.sqrt(nu_int)
    S = net.W[np.ix_(idx, idx)] / np.outer(s, s)
    evals, evecs = np.linalg.eigh(np.eye(len(idx)) - S)
    inv_sqrt_sym = evecs @ np.diag(1.0 / np.sqrt(evals)) @ evecs.T

    rows = []
    for a, A in enumerate(fam):
        chi = np.zeros(len(idx))
        for i in A:
            chi[pos[i]] = 1.0
        half = inv_sqrt_sym @ (s * chi)  # D^{1/2} (I-P)^{-1/2} chi
        rows.append(
            {
                "set": A,
                "kernel_diag": float(gram[a, a]),
                "green_energy": energy_inner(net, greens[a], greens[a]),
                "l2_half_power": float(half @ half),
            }
        )
    worst_pair = 0.0
    for a in range(len(fam)):
        for b in range(len(fam)):
            inner = energy_inner(net, greens[a], greens[b])
            scale = max(1.0, abs(gram[a, b]))
            worst_pair = max(worst_pair, abs(inner - gram[a, b]) / scale)
    worst_norm = 0.0
    for r in rows:
        scale = max(1.0, abs(r["kernel_diag"]))
        spread = max(r["kernel_diag"], r["green_energy"], r["l2_half_power"]) - min(
            r["kernel_diag"], r["green_energy"], r["l2_half_power"]
        )
        worst_norm = max(worst_norm, spread / scale)
    return {"per_set": rows, "max_norm_spread": worst_norm, "max_pair_gap": worst_pair}


def mu_f_rkhs_norm(net: Network, f, family=None) -> float:
    """Norm of the induced set function in the indicator-kernel space.

    Uses the ``k_rho`` Gram pseudoinverse on the vector of energy pairings
    with the family indicators; for ``f`` in the indicator span of the
    family (modulo constants and harmonics) the value equals the energy
    norm of ``f``.  Raises :class:`FamilyTooSmall` when ``f`` lies outside
    that span.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (net.n,):
        raise DimensionMismatch("f must be a length-n vector")
    if family is None:
        family = [[i] for i in range(net.n)]
    fam = normalize_family(net, family)
    # Span membership is decided directly in vector space, independently of
    # the Gram route being verified.
    cols = [indicator(net, A) for A in fam]
    cols.append(np.ones(net.n))
    for h in harmonic_basis(net):
        cols.append(h)
    M = np.array(cols).T
    coef, *_ = np.linalg.lstsq(M, f, rcond=None)
    defect = float(np.linalg.norm(f - M @ coef))
    if defect > 1e-8 * (1.0 + float(np.linalg.norm(f))):
        raise FamilyTooSmall("f is outside the indicator span of the family")
    gram = indicator_gram(net, fam).gram
    m_vec = np.array([mu_f_value(net, f, A) for A in fam])
    coeffs = np.linalg.pinv(gram, rcond=1e-12) @ m_vec
    return float(np.sqrt(max(float(coeffs @ gram @ coeffs), 0.0)))


def mu_f_value(net: Network, f, A) -> float:
    """Energy pairing of ``f`` with one indicator (the induced set function)."""
    return energy_inner(net, indicator(net, A), f)
