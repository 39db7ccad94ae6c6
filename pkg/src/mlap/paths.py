"""Path space sampling and exact dissipation-space evaluators.

The path measure weights a trajectory started in state x by nu_x; its
restriction to finitely many coordinates is evaluated exactly by masked
matrix products.  Monte Carlo sampling is a statistical cross-check only.

Reproducibility contract: path sampling uses the counter-based Philox
generator keyed by the seed, and path ``i`` consumes exactly the uniform
draws ``[i * (m + 1), (i + 1) * (m + 1))`` of the keyed stream (one start
draw plus one draw per step).  Batches are therefore identical for
identical ``(seed, m, count, start_law, net)`` regardless of how path
generation is scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NegativePower
from .net import Network, derive
from .operators import apply_P


@dataclass(frozen=True)
class PathBatch:
    seed: int
    steps: int
    count: int
    start_law: str
    paths: np.ndarray  # (count, steps + 1) state indices


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float
    count: int


def _parse_start_law(net: Network, start_law: str) -> int | None:
    """None for the nu-proportional law, else the fixed start index."""
    if start_law == "nu":
        return None
    if start_law.startswith("state:"):
        return net.index(_coerce_state(net, start_law[len("state:"):]))
    raise DimensionMismatch(f"start_law must be 'nu' or 'state:<id>', got {start_law!r}")


def _coerce_state(net: Network, token: str):
    for s in net.states:
        if str(s) == token:
            return s
    raise DimensionMismatch(f"unknown state {token!r}")


def sample_paths(net: Network, seed: int, m: int, count: int, start_law: str = "nu") -> PathBatch:
    """Sample ``count`` trajectories of ``m`` steps.

    Starts follow ``start_law`` ("nu" for nu-proportional, "state:<id>" for
    a fixed start); each step draws from the transition row of the current
    state by inverse CDF.  The fixed-start law still consumes the start
    uniform so the per-path draw blocks stay aligned.
    """
    if m < 1 or count < 1:
        raise DimensionMismatch("need m >= 1 and count >= 1")
    d = derive(net)
    fixed = _parse_start_law(net, start_law)
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    u = rng.random((count, m + 1))
    cum_rows = np.cumsum(d.P, axis=1)
    paths = np.empty((count, m + 1), dtype=np.int64)
    if fixed is None:
        cum_nu = np.cumsum(d.nu) / np.sum(d.nu)
        paths[:, 0] = np.minimum(
            np.searchsorted(cum_nu, u[:, 0], side="right"), net.n - 1
        )
    else:
        paths[:, 0] = fixed
    for t in range(m):
        rows = cum_rows[paths[:, t]]
        nxt = np.sum(u[:, t + 1, None] >= rows, axis=1)
        paths[:, t + 1] = np.minimum(nxt, net.n - 1)
    return PathBatch(int(seed), int(m), int(count), start_law, paths)


def cylinder_mass(net: Network, sets) -> float:
    """Exact path-measure mass of the cylinder X_0 in A_0, ..., X_k in A_k."""
    sets = list(sets)
    if not sets:
        raise DimensionMismatch("need at least one cylinder set")
    d = derive(net)
    masks = []
    for A in sets:
        chi = np.zeros(net.n)
        chi[list(A)] = 1.0
        masks.append(chi)
    v = d.nu * masks[0]
    for chi in masks[1:]:
        v = (v @ d.P) * chi
    return float(np.sum(v))


def dissipation_norm(net: Network, f) -> dict:
    """Exact split of the energy norm into variance and dissipation parts.

    Returns the two raw integrals and their halved sum:

        total = 1/2 * (variance_term + dissipation_term) = <f, f>_E,

    where ``variance_term`` integrates the one-step conditional variance
    P(f^2) - (P f)^2 against nu and ``dissipation_term`` is
    ``||f - P f||^2_{L2(nu)}``.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (net.n,):
        raise DimensionMismatch("f must be a length-n vector")
    d = derive(net)
    pf = apply_P(net, f)
    var = apply_P(net, f * f) - pf * pf
    variance_term = float(np.sum(d.nu * var))
    dissipation_term = float(np.sum(d.nu * (f - pf) ** 2))
    return {
        "variance_term": variance_term,
        "dissipation_term": dissipation_term,
        "total": 0.5 * (variance_term + dissipation_term),
    }


def mc_energy_estimate(net: Network, f, seed: int, count: int) -> McEstimate:
    """Monte Carlo estimate of the energy norm from single transitions.

    Averages ``(f(X_1) - f(X_0))^2`` over nu-started one-step paths and
    rescales by ``nu(V) / 2``; the estimator mean is the exact energy and
    the standard error decays like count^{-1/2}.
    """
    if count < 100:
        raise DimensionMismatch("need count >= 100")
    f = np.asarray(f, dtype=float)
    if f.shape != (net.n,):
        raise DimensionMismatch("f must be a length-n vector")
    batch = sample_paths(net, seed, 1, count, "nu")
    nu_total = float(np.sum(net.W))
    d2 = (f[batch.paths[:, 1]] - f[batch.paths[:, 0]]) ** 2
    scale = 0.5 * nu_total
    estimate = scale * float(np.mean(d2))
    stderr = scale * float(np.std(d2, ddof=1)) / np.sqrt(count)
    return McEstimate(estimate, stderr, count)


def _distribution_after(net: Network, n: int) -> np.ndarray:
    """Row vector nu P^n computed by explicit multiplication."""
    d = derive(net)
    m = d.nu.copy()
    for _ in range(n):
        m = m @ d.P
    return m


def orthogonality_residual(net: Network, g1, g2, n: int) -> float:
    """Exact dissipation inner product of g1 at time n against the step-n
    martingale increment of g2; zero up to round-off.

    Evaluates ``<g1 o X_n, P(g2) o X_n - g2 o X_{n+1}>`` in the path space
    through the n-step distribution and the joint (X_n, X_{n+1}) law, and
    normalizes by the magnitude of the two terms.
    """
    if n < 0:
        raise NegativePower("time index must be >= 0")
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    if g1.shape != (net.n,) or g2.shape != (net.n,):
        raise DimensionMismatch("g1 and g2 must be length-n vectors")
    d = derive(net)
    m = _distribution_after(net, n)
    pg2 = apply_P(net, g2)
    same_time = float(np.sum(m * g1 * pg2))
    joint = (m * g1) @ d.P @ g2
    scale = 1.0 + abs(same_time) + abs(joint)
    return 0.5 * abs(same_time - float(joint)) / scale


def increment_orthogonality_residual(net: Network, f, n: int) -> float:
    """Companion check: (I - P) f at time n against the same increment."""
    f = np.asarray(f, dtype=float)
    g = f - apply_P(net, f)
    return orthogonality_residual(net, g, f, n)


def variance_invariance(net: Network, f, n: int) -> tuple:
    """Pair of integrated one-step conditional variances at steps 1 and n.

    The step-n value integrates ``P^{n-1}(P(f^2) - (P f)^2)`` against nu;
    stationarity of nu makes the pair equal exactly.
    """
    if n < 1:
        raise NegativePower("step index must be >= 1")
    f = np.asarray(f, dtype=float)
    if f.shape != (net.n,):
        raise DimensionMismatch("f must be a length-n vector")
    d = derive(net)
    pf = apply_P(net, f)
    var1 = apply_P(net, f * f) - pf * pf
    first = float(np.sum(d.nu * var1))
    m = _distribution_after(net, n - 1)
    nth = float(np.sum(m * var1))
    return first, nth
