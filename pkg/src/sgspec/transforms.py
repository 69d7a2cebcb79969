"""Eigenpair-preserving graph surgeries and p = 2 interlacing checks.

Removing an edge whose endpoints carry nonzero values compensates the two
endpoint potentials so the given eigenpair survives; removing a vertex where
the function vanishes adds the lost edge weights to the neighbors'
potentials. Both directions interlace the p = 2 spectra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import GraphError, SignedGraph, induced_subgraph
from .operators import phi_p
from .spectra import spectrum_p2

__all__ = [
    "SurgeryResult",
    "remove_edge",
    "remove_node",
    "interlacing_check_p2",
]


@dataclass(frozen=True)
class SurgeryResult:
    graph: SignedGraph
    f: np.ndarray | None
    kind: str
    kappa_changes: dict[str, float]


def remove_edge(
    g: SignedGraph,
    p: float,
    f,
    e: tuple[int, int],
    exact: bool = False,
) -> SurgeryResult:
    """Delete edge e compensating the endpoint potentials.

    With d = w * Phi_p(1 - sigma f(y0)/f(x0)) added to kappa at x0 (and
    symmetrically at y0), any eigenpair (lambda, f) of the original graph
    remains one of the result. Requires p > 1 and f nonzero at both
    endpoints. ``exact=True`` (p = 2 only) keeps the new potentials as
    rationals so surgery chains don't accumulate rounding error.
    """
    if p <= 1:
        raise GraphError("remove_edge requires p > 1")
    f = np.asarray(f, dtype=float)
    x0, y0 = sorted(e)
    hit = [ed for ed in g.edges if (ed[0], ed[1]) == (x0, y0)]
    if not hit:
        raise GraphError(f"edge {{{g.ids[x0]},{g.ids[y0]}}} not in graph")
    _, _, w, s = hit[0]
    if f[x0] == 0.0 or f[y0] == 0.0:
        raise GraphError("remove_edge requires f nonzero at both endpoints")
    if exact:
        if p != 2:
            raise GraphError("exact surgery mode is only available for p = 2")
        fx = Fraction(float(f[x0]))
        fy = Fraction(float(f[y0]))
        wq = Fraction(w)
        dx = wq * (1 - s * fy / fx)
        dy = wq * (1 - s * fx / fy)
    else:
        dx = w * phi_p(1.0 - s * f[y0] / f[x0], p)
        dy = w * phi_p(1.0 - s * f[x0] / f[y0], p)
    kappa = list(g.kappa)
    kappa[x0] = kappa[x0] + dx
    kappa[y0] = kappa[y0] + dy
    new_edges = tuple(ed for ed in g.edges if (ed[0], ed[1]) != (x0, y0))
    gq = SignedGraph(ids=g.ids, mu=g.mu, kappa=tuple(kappa), edges=new_edges)
    return SurgeryResult(
        graph=gq,
        f=f,
        kind="remove_edge",
        kappa_changes={g.ids[x0]: float(dx), g.ids[y0]: float(dy)},
    )


def remove_node(g: SignedGraph, x0: int, f=None) -> SurgeryResult:
    """Delete vertex x0, adding each lost edge weight to the neighbor's
    potential. If f is supplied it must vanish at x0; the restriction is
    then an eigenpair of the result whenever (lambda, f) was one."""
    if not 0 <= x0 < g.n:
        raise GraphError(f"vertex index {x0} out of range")
    if f is not None:
        f = np.asarray(f, dtype=float)
        if f[x0] != 0.0:
            raise GraphError("remove_node transport requires f(x0) = 0")
    changes: dict[str, float] = {}
    kappa = list(g.kappa)
    for y, w, _ in g.neighbors(x0):
        kappa[y] = kappa[y] + w
        changes[g.ids[y]] = changes.get(g.ids[y], 0.0) + w
    keep = [x for x in range(g.n) if x != x0]
    base = SignedGraph(ids=g.ids, mu=g.mu, kappa=tuple(kappa), edges=g.edges)
    gq = induced_subgraph(base, keep)
    f_new = f[keep] if f is not None else None
    return SurgeryResult(graph=gq, f=f_new, kind="remove_node", kappa_changes=changes)


def _interlace_edge(lam: np.ndarray, eta: np.ndarray, shift: int, tol: float):
    """Check eta_{k+shift-1} <= lam_k <= eta_{k+shift} with +-inf padding."""
    n = len(lam)
    checks = []
    for k in range(1, n + 1):
        lo_i = k + shift - 1
        hi_i = k + shift
        lo = eta[lo_i - 1] if 1 <= lo_i <= n else -np.inf
        hi = eta[hi_i - 1] if 1 <= hi_i <= n else np.inf
        ok = (lo <= lam[k - 1] + tol) and (lam[k - 1] <= hi + tol)
        checks.append({"k": k, "lower": lo, "value": lam[k - 1], "upper": hi, "pass": bool(ok)})
    return checks


def interlacing_check_p2(g: SignedGraph, surgery_sequence, tol: float = 1e-9) -> dict:
    """Apply surgeries in order, checking the p = 2 spectral interlacing per step.

    Each step is a dict: {"kind": "remove_edge", "edge": (u, v), "f": ...}
    or {"kind": "remove_node", "node": x, "f": optional}. Edge steps check
    eta_{k-1} <= lambda_k <= eta_k when f(x0) sigma f(y0) < 0 and
    eta_k <= lambda_k <= eta_{k+1} when positive; node steps check
    lambda_k <= eta_k <= lambda_{k+1}. A trailing cumulative check
    lambda_k <= eta_k <= lambda_{k+m} is added when the sequence removes
    m nodes and nothing else.
    """
    cur = g
    lam0 = spectrum_p2(g).values
    steps = []
    all_nodes = True
    nodes_removed = 0
    for step in surgery_sequence:
        lam = spectrum_p2(cur).values
        if step["kind"] == "remove_edge":
            all_nodes = False
            f = np.asarray(step["f"], dtype=float)
            x0, y0 = sorted(step["edge"])
            sig = next(s for u, v, _, s in cur.edges if (u, v) == (x0, y0))
            prod = f[x0] * sig * f[y0]
            if prod == 0.0:
                raise GraphError("interlacing edge case needs f nonzero at both endpoints")
            res = remove_edge(cur, 2.0, f, (x0, y0))
            eta = spectrum_p2(res.graph).values
            shift = 0 if prod < 0 else 1
            checks = _interlace_edge(lam, eta, shift, tol)
            case = "negative-product" if prod < 0 else "positive-product"
        elif step["kind"] == "remove_node":
            nodes_removed += 1
            res = remove_node(cur, step["node"], step.get("f"))
            eta = spectrum_p2(res.graph).values
            checks = []
            for k in range(1, len(eta) + 1):
                ok = (lam[k - 1] <= eta[k - 1] + tol) and (eta[k - 1] <= lam[k] + tol)
                checks.append(
                    {"k": k, "lower": lam[k - 1], "value": eta[k - 1],
                     "upper": lam[k], "pass": bool(ok)}
                )
            case = "node"
        else:
            raise GraphError(f"unknown surgery kind {step['kind']!r}")
        steps.append(
            {"kind": step["kind"], "case": case, "checks": checks,
             "all_pass": all(c["pass"] for c in checks)}
        )
        cur = res.graph

    report = {"steps": steps, "all_pass": all(s["all_pass"] for s in steps)}
    if all_nodes and nodes_removed > 0 and cur.n > 0:
        eta = spectrum_p2(cur).values
        m = nodes_removed
        cum = []
        for k in range(1, len(eta) + 1):
            ok = (lam0[k - 1] <= eta[k - 1] + tol) and (eta[k - 1] <= lam0[k + m - 1] + tol)
            cum.append(
                {"k": k, "lower": lam0[k - 1], "value": eta[k - 1],
                 "upper": lam0[k + m - 1], "pass": bool(ok)}
            )
        report["cumulative_node_check"] = {"m": m, "checks": cum,
                                           "all_pass": all(c["pass"] for c in cum)}
        report["all_pass"] = report["all_pass"] and report["cumulative_node_check"]["all_pass"]
    return report
