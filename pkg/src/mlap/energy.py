"""Finite-energy Hilbert space: inner products, dipoles, projections.

The energy inner product of two functions on the state space is

    <f, g>_E = 1/2 * sum_ij W[i, j] (f_i - f_j)(g_i - g_j) = f' (D_W - W) g,

a seminorm that vanishes exactly on functions constant per support
component.  Elements are treated modulo constants; the canonical
representative has zero nu-weighted mean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    SingularSystem,
    TrappedInterior,
    UnbalancedSets,
)
from .net import Network, components, derive
from .operators import apply_Delta, apply_P, laplacian_matrix

BALANCE_ATOL = 1e-12
DENSE_SOLVE_LIMIT = 512


@dataclass(frozen=True)
class EnergyElement:
    """Function on states considered modulo constants.

    ``canonical`` is True when ``values`` is the zero-nu-mean representative.
    """

    values: np.ndarray
    canonical: bool


@dataclass(frozen=True)
class DipoleSolution:
    v: EnergyElement
    kind: str  # "mu" | "nu"
    A: tuple
    B: tuple
    residual: float


@dataclass(frozen=True)
class KernelGram:
    """PSD (or conditionally negative definite) Gram over a set family."""

    kernel_id: str
    family: tuple
    gram: np.ndarray
    names: Optional[tuple] = None


def normalize_family(net: Network, family, allow_empty: bool = False) -> tuple:
    """Validate a family of index subsets; duplicates are permitted."""
    out = []
    for A in family:
        idx = tuple(sorted(set(int(i) for i in A)))
        if not idx and not allow_empty:
            raise DimensionMismatch("set family members must be nonempty")
        if idx and (idx[0] < 0 or idx[-1] >= net.n):
            raise DimensionMismatch("set family index out of range")
        out.append(idx)
    return tuple(out)


def indicator(net: Network, A) -> np.ndarray:
    chi = np.zeros(net.n)
    chi[list(A)] = 1.0
    return chi


def canonicalize(net: Network, f) -> EnergyElement:
    """Zero-nu-mean representative of the energy class of ``f``."""
    f = np.asarray(f, dtype=float)
    nu = net.W.sum(axis=1)
    return EnergyElement(f - np.dot(nu, f) / np.sum(nu), True)


def energy_inner(net: Network, f, g) -> float:
    """Energy inner product <f, g>_E; invariant under adding constants."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != (net.n,) or g.shape != (net.n,):
        raise DimensionMismatch("f and g must be length-n vectors")
    return float(f @ laplacian_matrix(net) @ g)


def indicator_gram(net: Network, family) -> KernelGram:
    """Gram of indicator functions: G[a, b] = nu(A & B) - W-mass(A x B).

    The matrix is PSD; diagonal entries equal the coupling mass between a
    set and its complement.
    """
    fam = normalize_family(net, family)
    nu = net.W.sum(axis=1)
    m = len(fam)
    gram = np.zeros((m, m))
    for a, A in enumerate(fam):
        for b, B in enumerate(fam[: a + 1]):
            inter = sorted(set(A) & set(B))
            val = float(np.sum(nu[inter])) - float(net.W[np.ix_(list(A), list(B))].sum())
            gram[a, b] = gram[b, a] = val
    return KernelGram("k_rho", fam, gram)


def royden_project(net: Network, f) -> dict:
    """Split ``f = d + h`` with ``h`` harmonic (constant per component).

    ``h`` carries the per-component nu-means of ``f``; ``d`` has zero
    nu-mean on every component, lies in the indicator span, and is
    energy-orthogonal to ``h``.  Both parts are returned canonicalized.
    """
    f = np.asarray(f, dtype=float)
    nu = net.W.sum(axis=1)
    h = np.zeros(net.n)
    for comp in components(net):
        idx = list(comp)
        h[idx] = np.dot(nu[idx], f[idx]) / np.sum(nu[idx])
    d = f - h
    return {"d": canonicalize(net, d), "h": canonicalize(net, h)}


def _cg(matvec, b, tol=1e-13, maxiter=None):
    """Conjugate gradients for a PSD operator, plain reference loop."""
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rs = float(r @ r)
    bnorm = max(np.sqrt(float(b @ b)), 1e-300)
    maxiter = maxiter or 20 * len(b)
    for _ in range(maxiter):
        if np.sqrt(rs) <= tol * bnorm:
            break
        Ap = matvec(p)
        alpha = rs / float(p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x


def _solve_weak_form(L, b):
    """Solve L v = b for the singular PSD weak form (consistent rhs)."""
    if L.shape[0] <= DENSE_SOLVE_LIMIT:
        v, *_ = np.linalg.lstsq(L, b, rcond=None)
        return v
    return _cg(lambda x: L @ x, b)


def dipole(net: Network, kind: str, A, B, boundary=None) -> DipoleSolution:
    """Solve for the energy element whose Laplacian is an indicator difference.

    kind "mu":  Delta v = chi_A - chi_B       (requires mu(A) = mu(B)),
    kind "nu":  Delta v = c * (chi_A - chi_B) (requires nu(A) = nu(B)).

    Without a boundary the stated mass balance is necessary on a finite
    space (the Laplacian image integrates to zero against mu); the balance
    must also hold per support component, otherwise the system is
    inconsistent.  With a Dirichlet boundary the balance condition is
    dropped and the solve is restricted to the interior with the solution
    pinned to zero on the boundary.
    """
    if kind not in ("mu", "nu"):
        raise DimensionMismatch(f"kind must be 'mu' or 'nu', got {kind!r}")
    A = tuple(sorted(set(int(i) for i in A)))
    B = tuple(sorted(set(int(i) for i in B)))
    d = derive(net)
    chi = indicator(net, A) - indicator(net, B)
    weight = net.mu if kind == "mu" else d.nu
    b = weight * chi
    L = laplacian_matrix(net)

    if boundary is None:
        scale = max(1.0, float(np.sum(np.abs(b))))
        if abs(float(np.sum(b))) > BALANCE_ATOL * scale:
            name = "mu" if kind == "mu" else "nu"
            raise UnbalancedSets(f"{name}(A) != {name}(B); dipole has no solution")
        for comp in components(net):
            if abs(float(np.sum(b[list(comp)]))) > BALANCE_ATOL * scale:
                raise SingularSystem(
                    "sets meet distinct components; system is inconsistent"
                )
        v = _solve_weak_form(L, b)
        elem = canonicalize(net, v)
        target = chi if kind == "mu" else d.c * chi
        res = np.linalg.norm(apply_Delta(net, elem.values) - target)
        residual = float(res / (1.0 + np.linalg.norm(target)))
        return DipoleSolution(elem, kind, A, B, residual)

    bidx = sorted(set(int(i) for i in boundary))
    if not bidx:
        raise DimensionMismatch("boundary must be nonempty")
    interior = [i for i in range(net.n) if i not in set(bidx)]
    _check_interior_reaches_boundary(net, interior, bidx)
    v = np.zeros(net.n)
    if interior:
        Lii = L[np.ix_(interior, interior)]
        try:
            v[interior] = np.linalg.solve(Lii, b[interior])
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(str(exc)) from exc
    target = chi if kind == "mu" else d.c * chi
    res_vec = (apply_Delta(net, v) - target)[interior]
    residual = float(np.linalg.norm(res_vec) / (1.0 + np.linalg.norm(target)))
    return DipoleSolution(EnergyElement(v, False), kind, A, B, residual)


def _check_interior_reaches_boundary(net: Network, interior, bidx):
    """Every interior state must have a support path to the boundary."""
    if not interior:
        return
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


def mu_f(net: Network, f, A) -> float:
    """Induced set function <chi_A, f>_E; its mu-density is Delta f."""
    f = np.asarray(f, dtype=float)
    if f.shape != (net.n,):
        raise DimensionMismatch("f must be a length-n vector")
    return energy_inner(net, indicator(net, A), f)


def norm_bounds_report(net: Network, f) -> dict:
    """Slacks of the Laplacian norm inequalities for one function.

    All three reported slacks are nonnegative up to 1e-12 round-off:

    * ``energy >= 1/2 * ||c^{-1} Delta f||^2_{L2(nu)}``,
    * ``||Delta f||^2_{L2(mu/c)} <= 2 * energy``,
    * ``||f - P f||^2_{L2(nu)}  <= 2 * energy``.
    """
    f = np.asarray(f, dtype=float)
    d = derive(net)
    energy = energy_inner(net, f, f)
    delta = apply_Delta(net, f)
    half_grad = float(np.sum(d.nu * (delta / d.c) ** 2))
    delta_c_inv_mu = float(np.sum((net.mu / d.c) * delta**2))
    defect = float(np.sum(d.nu * (f - apply_P(net, f)) ** 2))
    return {
        "energy": energy,
        "delta_seminorm_nu": half_grad,
        "delta_norm_c_inv_mu": delta_c_inv_mu,
        "one_step_defect_nu": defect,
        "slack_half_bound": energy - 0.5 * half_grad,
        "slack_delta_bound": 2.0 * energy - delta_c_inv_mu,
        "slack_defect_bound": 2.0 * energy - defect,
    }
