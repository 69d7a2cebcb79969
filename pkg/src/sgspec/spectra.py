"""Spectra: exact p=2 eigendecomposition, extremal eigenpairs for p > 1,
enumerated 1-Laplacian eigenpairs and Cheeger upper bounds.

The p=2 case reduces to a symmetric matrix pencil and is solved by cyclic
Jacobi rotations. For general p > 1 only the extremes of the Rayleigh
quotient are computed (projected gradient with restarts, then a Newton
polish); every reported pair is re-certified by its eigen-residual. For
p = 1 candidates are the +-1/0 patterns, each decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import cheeger as _cheeger
from .graph import BalanceState, GraphError, SignedGraph, balance_state, components, induced_subgraph
from .operators import apply_p_laplacian, check_eigenpair, EigenPair, one_lap_lambda_range, phi_p, rayleigh

__all__ = [
    "SpectrumP2",
    "spectrum_p2",
    "ExtremalResult",
    "extremal_p",
    "upper_bound_lambda_k",
    "OneLapPair",
    "OneLapEigenSet",
    "one_lap_enumerate",
    "smallest_positive_1lap",
]

GROUP_RTOL = 1e-8
ONE_LAP_CAP = 12


# ---------------------------------------------------------------------------
# p = 2

@dataclass(frozen=True)
class SpectrumP2:
    """Eigenvalues ascending; eigenvector columns orthonormal in the
    mu-inner product; indices grouped by multiplicity."""

    values: np.ndarray
    vectors: np.ndarray
    groups: tuple[tuple[int, ...], ...]

    def multiplicity(self, k: int) -> int:
        for grp in self.groups:
            if k in grp:
                return len(grp)
        raise IndexError(k)


def form_matrix(g: SignedGraph) -> np.ndarray:
    """Symmetric form matrix: L_xx = sum_y w_xy + kappa_x, L_xy = -sigma w_xy."""
    n = g.n
    lmat = np.zeros((n, n))
    for u, v, w, s in g.edges:
        lmat[u, u] += w
        lmat[v, v] += w
        lmat[u, v] -= s * w
        lmat[v, u] -= s * w
    lmat[np.diag_indices(n)] += g.kappa_array()
    return lmat


def _jacobi(a: np.ndarray, rtol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Rotates until the off-diagonal Frobenius norm is <= rtol * ||A||_F.
    Returns (eigenvalues, eigenvector columns), unsorted.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    if norm == 0.0 or n == 1:
        return np.diag(a).copy(), v
    thresh = rtol * norm
    for _ in range(max_sweeps):
        # measure the off-diagonal part directly: subtracting the diagonal
        # mass from the total sum of squares cancels catastrophically and can
        # report zero while entries are still ~sqrt(eps) * ||A||
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= thresh / (n * n):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v


def spectrum_p2(g: SignedGraph) -> SpectrumP2:
    """Full p = 2 spectrum of the pencil (L, D_mu), by Jacobi on the
    symmetrically normalized matrix."""
    mu = g.mu_array()
    dinv = 1.0 / np.sqrt(mu)
    m = dinv[:, None] * form_matrix(g) * dinv[None, :]
    m = 0.5 * (m + m.T)
    vals, vecs = _jacobi(m)
    order = np.argsort(vals)
    vals = vals[order]
    vecs = dinv[:, None] * vecs[:, order]

    groups: list[tuple[int, ...]] = []
    cur = [0]
    for i in range(1, len(vals)):
        if abs(vals[i] - vals[i - 1]) < GROUP_RTOL * max(1.0, abs(vals[i])):
            cur.append(i)
        else:
            groups.append(tuple(cur))
            cur = [i]
    if cur:
        groups.append(tuple(cur))
    return SpectrumP2(values=vals, vectors=vecs, groups=tuple(groups))


# ---------------------------------------------------------------------------
# general p > 1 extremes

@dataclass(frozen=True)
class ExtremalResult:
    p: float
    lambda_min: float
    f_min: np.ndarray
    residual_min: float
    lambda_max: float
    f_max: np.ndarray
    residual_max: float
    converged_min: bool
    converged_max: bool
    trace: tuple[dict, ...] = field(default=())


def _normalize_p(g: SignedGraph, p: float, f: np.ndarray) -> np.ndarray:
    scale = float(np.dot(g.mu_array(), np.abs(f) ** p)) ** (1.0 / p)
    if scale == 0.0:
        raise GraphError("cannot normalize the zero function")
    return f / scale


def _residual(g: SignedGraph, p: float, f: np.ndarray, lam: float) -> float:
    lap = apply_p_laplacian(g, p, f)
    mu = g.mu_array()
    scale = 1.0 + abs(lam) * mu * np.abs(f) ** (p - 1)
    return float(np.max(np.abs(lap - lam * mu * phi_p(f, p)) / scale))


def _newton_polish(g: SignedGraph, p: float, f: np.ndarray, lam: float, iters: int = 50):
    """Newton on (Delta_p f - lam mu Phi_p f, mu-p-norm - 1); keeps the best
    iterate by residual. Second derivatives |t|^(p-2) are clipped away from
    zero arguments for p < 2."""
    n = g.n
    mu = g.mu_array()
    kap = g.kappa_array()
    f = _normalize_p(g, p, f.copy())
    best_f, best_lam = f.copy(), lam
    best_res = _residual(g, p, f, lam)
    for _ in range(iters):
        jac = np.zeros((n + 1, n + 1))
        rhs = np.zeros(n + 1)
        lap = apply_p_laplacian(g, p, f)
        rhs[:n] = -(lap - lam * mu * phi_p(f, p))
        rhs[n] = -(float(np.dot(mu, np.abs(f) ** p)) - 1.0)
        dabs = np.maximum(np.abs(f), 1e-12) ** (p - 2)
        for u, v, w, s in g.edges:
            d = f[u] - s * f[v]
            gpp = (p - 1) * w * max(abs(d), 1e-12) ** (p - 2)
            jac[u, u] += gpp
            jac[v, v] += gpp
            jac[u, v] -= s * gpp
            jac[v, u] -= s * gpp
        diag = (p - 1) * (kap - lam * mu) * dabs
        jac[np.arange(n), np.arange(n)] += diag
        jac[:n, n] = -mu * phi_p(f, p)
        jac[n, :n] = p * mu * phi_p(f, p)
        try:
            step = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        # Damped line search on the residual.
        t = 1.0
        accepted = False
        for _ in range(30):
            f_try = f + t * step[:n]
            lam_try = lam + t * step[n]
            if np.any(f_try != 0):
                r = _residual(g, p, f_try, lam_try)
                if r < best_res:
                    f, lam, best_res = f_try, lam_try, r
                    best_f, best_lam = f.copy(), lam
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            break
    return best_f, best_lam, best_res


def _gradient_run(g, p, f0, sign, max_iter, step0, rng):
    """Projected gradient on the mu-weighted l^p sphere; sign=+1 minimizes."""
    f = _normalize_p(g, p, f0)
    mu = g.mu_array()
    r = rayleigh(g, p, f)
    eta = step0
    for _ in range(max_iter):
        grad = p * (apply_p_laplacian(g, p, f) - r * mu * phi_p(f, p))
        gnorm = float(np.max(np.abs(grad)))
        if gnorm < 1e-14 or eta < 1e-15:
            break
        f_try = f - sign * eta * grad
        if not np.any(f_try):
            eta *= 0.5
            continue
        f_try = _normalize_p(g, p, f_try)
        r_try = rayleigh(g, p, f_try)
        if sign * (r_try - r) < -1e-16:
            f, r = f_try, r_try
            eta *= 1.2
        else:
            eta *= 0.5
    return f, r


def extremal_p(
    g: SignedGraph,
    p: float,
    max_iter: int = 2000,
    step: float = 0.1,
    tol: float = 1e-9,
    restarts: int = 8,
    seed: int = 0,
) -> ExtremalResult:
    """Certified extremes of the p-Rayleigh quotient for p > 1."""
    if p <= 1:
        raise GraphError("extremal_p requires p > 1")
    rng = np.random.default_rng(seed)
    spec2 = spectrum_p2(g)
    trace = []
    results = {}
    for which, sign, warm in (
        ("min", +1, spec2.vectors[:, 0]),
        ("max", -1, spec2.vectors[:, -1]),
    ):
        starts = [warm] + [rng.standard_normal(g.n) for _ in range(restarts)]
        best = None  # (certified, key, lam, f, res)
        for f0 in starts:
            f, r = _gradient_run(g, p, f0, sign, max_iter, step, rng)
            f, lam, res = _newton_polish(g, p, f, r)
            trace.append({"which": which, "lambda": lam, "residual": res})
            certified = res <= tol
            key = sign * lam
            cand = (certified, key, lam, f, res)
            if best is None:
                best = cand
            elif certified and not best[0]:
                best = cand
            elif certified == best[0]:
                if (certified and key < best[1]) or (not certified and res < best[4]):
                    best = cand
        results[which] = best
    cmin, _, lam_min, f_min, res_min = results["min"]
    cmax, _, lam_max, f_max, res_max = results["max"]
    return ExtremalResult(
        p=p,
        lambda_min=lam_min,
        f_min=f_min,
        residual_min=res_min,
        lambda_max=lam_max,
        f_max=f_max,
        residual_max=res_max,
        converged_min=cmin,
        converged_max=cmax,
        trace=tuple(trace),
    )


# ---------------------------------------------------------------------------
# Cheeger upper bound

def upper_bound_lambda_k(g: SignedGraph, p: float, k: int) -> float:
    """Certified upper bound 2^(p-1) h_k on the k-th variational eigenvalue.

    Requires kappa == 0. For p = 2 the exact spectrum is computed and the
    bound is asserted against lambda_k.
    """
    if any(kv != 0 for kv in g.kappa):
        raise GraphError("upper_bound_lambda_k requires kappa == 0 everywhere")
    if p < 1:
        raise GraphError("p must be >= 1")
    h_k = _cheeger.cheeger_k(g, k).value
    bound = 2.0 ** (p - 1) * float(h_k)
    if p == 2:
        lam_k = float(spectrum_p2(g).values[k - 1])
        if lam_k > bound + 1e-9:
            raise GraphError(
                f"certified bound violated: lambda_{k} = {lam_k} > 2 h_{k} = {bound}"
            )
    return bound


# ---------------------------------------------------------------------------
# p = 1 enumeration

@dataclass(frozen=True)
class OneLapPair:
    lam: Fraction
    lam_hi: Fraction
    f: tuple[int, ...]

    @property
    def is_point(self) -> bool:
        return self.lam == self.lam_hi


@dataclass(frozen=True)
class OneLapEigenSet:
    pairs: tuple[OneLapPair, ...]
    values: tuple[Fraction, ...]
    lambda_1: Fraction
    lambda_2: Fraction | None
    smallest_positive: Fraction | None
    patterns_scanned: int
    patterns_solved: int


def _prefilter_lambda_box(g: SignedGraph, f) -> tuple[float, float] | None:
    """Cheap per-vertex necessary condition on lambda; None means infeasible.

    For each support vertex the inclusion pins lambda to an interval of
    achievable normalized flux; the intervals must intersect.
    """
    lo_all, hi_all = -np.inf, np.inf
    adj = g.adjacency()
    for x in range(g.n):
        if f[x] == 0:
            continue
        lo = hi = float(g.kappa[x]) * f[x]  # z_x = sign(f_x) determined
        for y, w, s in adj[x]:
            d = f[x] - s * f[y]
            if d > 0:
                lo += w
                hi += w
            elif d < 0:
                lo -= w
                hi -= w
            else:
                lo -= w
                hi += w
        # lambda * mu_x * sign(f_x) must equal the flux
        sgn = 1 if f[x] > 0 else -1
        a, b = lo * sgn / g.mu[x], hi * sgn / g.mu[x]
        if a > b:
            a, b = b, a
        lo_all = max(lo_all, a)
        hi_all = min(hi_all, b)
        if lo_all > hi_all + 1e-12:
            return None
    return lo_all, hi_all


def one_lap_enumerate(g: SignedGraph, cap: int = ONE_LAP_CAP) -> OneLapEigenSet:
    """All verified 1-Laplacian eigenpairs with {-1,0,+1}-valued functions.

    Enumerates sign patterns up to global negation, prunes with a float
    necessary condition, then decides survivors exactly. Interval-valued
    lambda ranges (possible at this combinatorial granularity) are kept as
    closed rational intervals.
    """
    if g.n > cap:
        raise GraphError(
            f"one_lap_enumerate is capped at n = {cap} vertices (graph has {g.n})"
        )
    pairs: list[OneLapPair] = []
    scanned = solved = 0
    for pattern in product((0, 1, -1), repeat=g.n):
        first = next((t for t in pattern if t != 0), 0)
        if first != 1:  # dedup f ~ -f and skip the zero pattern
            continue
        scanned += 1
        if _prefilter_lambda_box(g, pattern) is None:
            continue
        solved += 1
        for lo, hi in one_lap_lambda_range(g, np.array(pattern, dtype=float)):
            pairs.append(OneLapPair(lam=lo, lam_hi=hi, f=pattern))
    pairs.sort(key=lambda pr: (pr.lam, pr.lam_hi, pr.f))
    values = sorted({pt for pr in pairs for pt in (pr.lam, pr.lam_hi)})
    if not values:
        raise GraphError("no 1-Laplacian eigenpairs found (unexpected)")
    lam1 = values[0]
    positives = [v for v in values if v > 0]
    smallest_pos = positives[0] if positives else None
    bal = balance_state(g).state in (BalanceState.BALANCED, BalanceState.BOTH)
    lam2 = smallest_pos if bal and lam1 == 0 else None
    return OneLapEigenSet(
        pairs=tuple(pairs),
        values=tuple(values),
        lambda_1=lam1,
        lambda_2=lam2,
        smallest_positive=smallest_pos,
        patterns_scanned=scanned,
        patterns_solved=solved,
    )


def smallest_positive_1lap(g: SignedGraph) -> Fraction:
    """Smallest positive 1-Laplacian variational eigenvalue, by components.

    Equals the minimum of h_2 over balanced components and h_1 over
    unbalanced components.
    """
    if any(kv != 0 for kv in g.kappa):
        raise GraphError("smallest_positive_1lap requires kappa == 0 everywhere")
    cands: list[Fraction] = []
    for comp in components(g):
        sub = induced_subgraph(g, comp)
        bal = balance_state(sub).state in (BalanceState.BALANCED, BalanceState.BOTH)
        if bal:
            if sub.n >= 2:
                cands.append(_cheeger.cheeger_k(sub, 2).value)
        else:
            cands.append(_cheeger.cheeger_k(sub, 1).value)
    if not cands:
        raise GraphError("no component admits a positive eigenvalue")
    return min(cands)
