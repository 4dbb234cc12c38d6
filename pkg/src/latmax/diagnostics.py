"""Measurement of diminishing-return gaps and the coherence bounds.

Each measurement scans a finite lattice exhaustively and reports the
smallest additive gap making the corresponding inequality hold, along
with the witness configuration of the worst violation. Continuous
lattices only admit sampled lower bounds, flagged as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from latmax.dictionary import (
    Dictionary,
    EnumeratedLattice,
    coherence_lattice,
    coherence_vectors,
    enumerate_lattice,
)
from latmax.lattice import FiniteLattice
from latmax.objectives import TableObjective
from latmax.subspaces import Direction, Subspace, vjoin


@dataclass
class GapReport:
    """Smallest additive gap for one inequality family on one instance."""

    direction: str
    measured_delta: float
    witness: dict | None = None
    exhaustive: bool = True
    excluded_triples: int = 0

    def to_json_dict(self) -> dict:
        return {"direction": self.direction,
                "measured_delta": self.measured_delta,
                "witness": self.witness,
                "exhaustive": self.exhaustive,
                "excluded_triples": self.excluded_triples}


def _values(obj, lat):
    return np.array([obj.value(lat, e) for e in range(lat.n)])


def _leq_matrix(lat):
    return np.array([[lat.leq(i, j) for j in range(lat.n)]
                     for i in range(lat.n)])


def _marginals(lat, vals):
    """marg[i, X] for irreducible index i admissible to X, else NaN."""
    irr = lat.join_irreducibles()
    jt = lat.join_table()
    m = np.full((len(irr), lat.n), np.nan)
    adm = np.zeros((len(irr), lat.n), dtype=bool)
    for i, a in enumerate(irr):
        for x in range(lat.n):
            if lat.is_admissible(a, x):
                adm[i, x] = True
                m[i, x] = vals[jt[a, x]] - vals[x]
    return irr, m, adm


def measure_strong_gap(obj, lat: FiniteLattice) -> GapReport:
    """Worst violation of: one-step gains shrink when both the base and
    the step grow. Scans X <= Y, a admissible to X, b admissible to Y,
    a <= b."""
    vals = _values(obj, lat)
    irr, m, adm = _marginals(lat, vals)
    leq = _leq_matrix(lat)
    worst, witness = -np.inf, None
    for ia, a in enumerate(irr):
        # smallest gain of a over bases X <= Y, per Y
        base = np.where(adm[ia], m[ia], np.inf)
        low = np.where(leq, base[:, None], np.inf).min(axis=0)  # indexed by Y
        for ib, b in enumerate(irr):
            if not lat.leq(a, b):
                continue
            cand = np.where(adm[ib], m[ib], -np.inf) - low
            y = int(np.argmax(cand))
            if cand[y] > worst and np.isfinite(cand[y]):
                worst = float(cand[y])
                x = int(np.argmin(np.where(leq[:, y], base, np.inf)))
                witness = {"X": x, "Y": y, "a": int(a), "b": int(b),
                           "violation": worst}
    if witness is None:
        return GapReport("strong", 0.0)
    return GapReport("strong", max(0.0, worst), witness)


def measure_downward_gap(obj, lat: FiniteLattice) -> GapReport:
    """Worst violation of: the gain of a step at Y is explained from
    below, by the best closure member whose admissible minorants at X
    all gain at least as much."""
    vals = _values(obj, lat)
    irr, m, adm = _marginals(lat, vals)
    idx = {a: i for i, a in enumerate(irr)}
    leq = _leq_matrix(lat)
    # low[i, X]: least gain among admissible minorants of irreducible i at X;
    # +inf marks an empty minorant set (that closure member is skipped)
    low = np.full((len(irr), lat.n), np.inf)
    for ibp, bp in enumerate(irr):
        below = np.array([lat.leq(a, bp) for a in irr])
        low[ibp] = np.where(below[:, None] & adm, m, np.inf).min(axis=0)
    worst, witness, excluded = -np.inf, None, 0
    for y in range(lat.n):
        xs = np.flatnonzero(leq[:, y])
        for b in irr:
            if not adm[idx[b], y]:
                continue
            lhs = m[idx[b], y]
            cl = np.array([idx[bp] for bp in lat.closure_of(b, y)])
            sub = low[cl][:, xs]
            feasible = np.isfinite(sub)
            covered = feasible.any(axis=0)
            excluded += int((~covered).sum())
            if not covered.any():
                continue
            rhs = np.where(feasible, sub, -np.inf).max(axis=0)
            viol = lhs - rhs
            viol[~covered] = -np.inf
            k = int(np.argmax(viol))
            if viol[k] > worst:
                worst = float(viol[k])
                witness = {"X": int(xs[k]), "Y": y, "b": int(b),
                           "lhs_marginal": float(lhs),
                           "rhs_maxmin": float(rhs[k]),
                           "violation": worst}
    if witness is None:
        return GapReport("downward", 0.0, excluded_triples=excluded)
    return GapReport("downward", max(0.0, worst), witness,
                     excluded_triples=excluded)


def measure_upward_gap(obj, lat: FiniteLattice) -> GapReport:
    """Worst violation of: the gain of a step at X is not beaten by the
    cheapest completion of any larger step into a target above X join a."""
    vals = _values(obj, lat)
    irr, m, adm = _marginals(lat, vals)
    idx = {a: i for i, a in enumerate(irr)}
    jt = np.asarray(lat.join_table())
    leq = _leq_matrix(lat)
    above = np.array([[lat.leq(a, b) for b in irr] for a in irr])
    worst, witness, excluded = -np.inf, None, 0
    for x in range(lat.n):
        # best[i, Y]: largest f over feet Y0 >= X from which irreducible i
        # completes to Y; -inf marks no such foot
        best = np.full((len(irr), lat.n), -np.inf)
        for ib, b in enumerate(irr):
            feet = leq[x] & adm[ib]
            if feet.any():
                np.maximum.at(best[ib], jt[b, feet], vals[feet])
        for a in irr:
            ia = idx[a]
            if not adm[ia, x]:
                continue
            lhs = m[ia, x]
            ys = np.flatnonzero(leq[jt[a, x]])
            sub = best[above[ia]][:, ys]
            has_foot = np.isfinite(sub)
            covered = has_foot.any(axis=0)
            excluded += int((~covered).sum())
            if not covered.any():
                continue
            inner = vals[ys][None, :] - sub
            inner[~has_foot] = -np.inf
            rhs = inner.max(axis=0)
            viol = rhs - lhs
            viol[~covered] = -np.inf
            k = int(np.argmax(viol))
            if viol[k] > worst:
                worst = float(viol[k])
                witness = {"X": x, "a": int(a), "Y": int(ys[k]),
                           "lhs_marginal": float(lhs),
                           "rhs_maxmin": float(rhs[k]),
                           "violation": worst}
    if witness is None:
        return GapReport("upward", 0.0, excluded_triples=excluded)
    return GapReport("upward", max(0.0, worst), witness,
                     excluded_triples=excluded)


def reevaluate_witness(obj, lat: FiniteLattice, report: GapReport) -> float:
    """Recompute the witness violation from its coordinates alone."""
    w = report.witness
    if w is None:
        raise ValueError("report carries no witness")
    vals = _values(obj, lat)
    jt = lat.join_table()
    if report.direction == "strong":
        up_a = vals[jt[w["a"], w["X"]]] - vals[w["X"]]
        up_b = vals[jt[w["b"], w["Y"]]] - vals[w["Y"]]
        return float(up_b - up_a)
    irr, m, adm = _marginals(lat, vals)
    idx = {a: i for i, a in enumerate(irr)}
    if report.direction == "downward":
        x, y, b = w["X"], w["Y"], w["b"]
        lhs = m[idx[b], y]
        rhs = []
        for bp in lat.closure_of(b, y):
            inner = [m[idx[a], x] for a in irr
                     if adm[idx[a], x] and lat.leq(a, bp)]
            if inner:
                rhs.append(min(inner))
        return float(lhs - max(rhs))
    if report.direction == "upward":
        x, a, y = w["X"], w["a"], w["Y"]
        terms = []
        for b in irr:
            if not lat.leq(a, b):
                continue
            cands = [vals[y] - vals[y0] for y0 in range(lat.n)
                     if lat.leq(x, y0) and adm[idx[b], y0] and jt[b, y0] == y]
            if cands:
                terms.append(min(cands))
        return float(max(terms) - m[idx[a], x])
    raise ValueError(f"unknown direction {report.direction!r}")


def check_prop1_equivalence(lat: FiniteLattice, trials: int, *, seed=0,
                            tol=1e-12) -> bool:
    """On a distributive lattice the three gap measurements must agree,
    and every closure must be a singleton."""
    if not lat.is_distributive():
        raise ValueError("equivalence check needs a distributive lattice")
    for x in range(lat.n):
        for a in lat.admissibles(x):
            if lat.closure_of(a, x) != (a,):
                return False
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        obj = TableObjective(rng.random(lat.n))
        gaps = [measure_strong_gap(obj, lat).measured_delta,
                measure_downward_gap(obj, lat).measured_delta,
                measure_upward_gap(obj, lat).measured_delta]
        if max(gaps) - min(gaps) > tol:
            return False
    return True


def sample_strong_gap_vector(obj, d: int, *, trials=200, seed=0) -> GapReport:
    """Sampled lower bound on the strong gap over the subspace lattice of
    R^d: random nested pairs and a shared step direction."""
    rng = np.random.default_rng(seed)
    worst, witness = 0.0, None
    for t in range(trials):
        ry = int(rng.integers(1, d))
        rx = int(rng.integers(0, ry + 1))
        basis = np.linalg.qr(rng.normal(size=(d, ry)))[0]
        y = Subspace(basis)
        x = Subspace(basis[:, :rx])
        wv = rng.normal(size=d)
        wv -= basis @ (basis.T @ wv)
        nrm = np.linalg.norm(wv)
        if nrm < 1e-9:
            continue
        wdir = Direction(wv / nrm + 0.3 * basis[:, -1])
        up_x = obj.value_of_subspace(vjoin(x, wdir)) - obj.value_of_subspace(x)
        up_y = obj.value_of_subspace(vjoin(y, wdir)) - obj.value_of_subspace(y)
        if up_y - up_x > worst:
            worst = float(up_y - up_x)
            witness = {"trial": t, "dim_X": rx, "dim_Y": ry,
                       "violation": worst}
    return GapReport("strong", worst, witness, exhaustive=False)


@dataclass
class CoherenceBoundCheck:
    """Vector-level coherence against the induced lattice-level bound."""

    mu_vectors: float
    ambient_dim: int
    applicable: bool
    bound: float | None = None
    mu_lattice: float | None = None
    holds: bool | None = None

    def to_json_dict(self) -> dict:
        return {"mu_vectors": self.mu_vectors, "ambient_dim": self.ambient_dim,
                "applicable": self.applicable, "bound": self.bound,
                "mu_lattice": self.mu_lattice, "holds": self.holds}


def check_coherence_bound(dictionary: Dictionary, *, tol=1e-9) -> CoherenceBoundCheck:
    """mu of the generated lattice against d*eps/(1 - d*eps); only
    meaningful when d*eps < 1."""
    eps = coherence_vectors(dictionary)
    d = dictionary.ambient_dim
    check = CoherenceBoundCheck(eps, d, applicable=bool(d * eps < 1.0))
    if not check.applicable:
        return check
    check.bound = d * eps / (1.0 - d * eps)
    check.mu_lattice = coherence_lattice(enumerate_lattice(dictionary))
    check.holds = bool(check.mu_lattice <= check.bound + tol)
    return check


@dataclass
class SaturationGapCheck:
    """Downward gap of a reshaped energy objective against the coherence
    times slope-at-zero times total energy bound."""

    mu_lattice: float
    slope_at_zero: float
    total_energy: float
    bound: float
    measured_delta: float
    holds: bool
    report: GapReport = field(repr=False, default=None)

    def to_json_dict(self) -> dict:
        return {"mu_lattice": self.mu_lattice,
                "slope_at_zero": self.slope_at_zero,
                "total_energy": self.total_energy, "bound": self.bound,
                "measured_delta": self.measured_delta, "holds": self.holds}


def check_saturation_gap_bound(obj, lat: EnumeratedLattice, *,
                               tol=1e-9) -> SaturationGapCheck:
    """The reshaped-energy objective on a modular span lattice must be
    downward DR-submodular with gap at most
    3 * mu * slope0 * total_energy / (1 - mu^2)."""
    if not lat.is_modular():
        raise ValueError("the bound needs a modular span lattice")
    mu = coherence_lattice(lat)
    slope0 = obj.rho.dprime0() if hasattr(obj, "rho") else 1.0
    total = obj.total_energy
    bound = 3.0 * mu * slope0 * total / (1.0 - mu ** 2)
    rep = measure_downward_gap(obj, lat)
    return SaturationGapCheck(mu, slope0, total, bound, rep.measured_delta,
                              bool(rep.measured_delta <= bound + tol), rep)
