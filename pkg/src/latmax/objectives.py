"""Monotone objectives on subspace and subset lattices, and modular costs.

Objectives evaluate lattice elements through their payloads: subspace
payloads go through per-datum projection energies, subset payloads (bit
masks) through membership. Concave reshaping functions are validated
numerically at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from latmax.lattice import FiniteLattice
from latmax.subspaces import Subspace

_CONCAVITY_SAMPLES = 100
_CONCAVITY_SLACK = 1e-9


def _check_concave(apply_fn, upper):
    """Sample-based check: starts at zero, nondecreasing, concave."""
    t = np.linspace(0.0, max(upper, 1e-6), _CONCAVITY_SAMPLES)
    y = np.asarray(apply_fn(t), dtype=float)
    if y.shape != t.shape:
        raise ValueError("reshaping function must map samples elementwise")
    if abs(y[0]) > _CONCAVITY_SLACK:
        raise ValueError("reshaping function must vanish at zero")
    d1 = np.diff(y)
    if d1.min() < -_CONCAVITY_SLACK:
        raise ValueError("reshaping function must be nondecreasing")
    if np.diff(d1).max() > _CONCAVITY_SLACK:
        raise ValueError("reshaping function must be concave")


class ConcaveRho:
    """Monotone concave reshaping of a scalar energy, vanishing at zero.

    Piecewise-linear forms carry exact knots; arbitrary callables are
    accepted after a sampled concavity check on [0, check_upper].
    """

    def __init__(self, fn, *, knots=None, check_upper=10.0):
        self._fn = fn
        self.knots = None
        if knots is not None:
            ts, ys = (np.asarray(a, dtype=float) for a in knots)
            if ts[0] != 0.0 or abs(ys[0]) > 0:
                raise ValueError("knots must start at (0, 0)")
            if np.diff(ts).min() <= 0:
                raise ValueError("knot positions must increase")
            self.knots = (ts, ys)
        _check_concave(self.apply, check_upper)

    def apply(self, t):
        t = np.asarray(t, dtype=float)
        if self.knots is not None:
            ts, ys = self.knots
            last_slope = (ys[-1] - ys[-2]) / (ts[-1] - ts[-2]) if len(ts) > 1 else 1.0
            out = np.interp(t, ts, ys)
            beyond = t > ts[-1]
            if beyond.any():
                out = np.where(beyond, ys[-1] + last_slope * (t - ts[-1]), out)
            return out
        return np.asarray(self._fn(t), dtype=float)

    def dprime0(self) -> float:
        """Right slope at zero: exact for knots, forward difference otherwise."""
        if self.knots is not None:
            ts, ys = self.knots
            if len(ts) == 1:
                return 1.0
            return float((ys[1] - ys[0]) / (ts[1] - ts[0]))
        h = 1e-8
        return float((self.apply(np.array([h]))[0]) / h)

    @classmethod
    def identity(cls):
        return cls(None, knots=([0.0, 1.0], [0.0, 1.0]))

    @classmethod
    def capped(cls, threshold, slope=0.1):
        """Identity up to the threshold, then a gentler slope."""
        if threshold <= 0 or not 0 <= slope <= 1:
            raise ValueError("need threshold > 0 and slope in [0, 1]")
        return cls(None, knots=([0.0, threshold, 2 * threshold],
                                [0.0, threshold, threshold + slope * threshold]))

    @classmethod
    def from_knots(cls, ts, ys):
        return cls(None, knots=(ts, ys))

    @classmethod
    def from_callable(cls, fn, check_upper=10.0):
        return cls(fn, check_upper=check_upper)

    def to_json_dict(self) -> dict:
        if self.knots is None:
            raise ValueError("only knot-based forms serialize")
        ts, ys = self.knots
        return {"kind": "knots", "t": ts.tolist(), "y": ys.tolist()}


def rho_from_json_dict(doc) -> "ConcaveRho":
    if isinstance(doc, str):
        doc = {"kind": doc}
    kind = doc["kind"]
    if kind == "identity":
        return ConcaveRho.identity()
    if kind == "capped":
        return ConcaveRho.capped(doc["threshold"], doc.get("slope", 0.1))
    if kind == "knots":
        return ConcaveRho.from_knots(doc["t"], doc["y"])
    raise ValueError(f"unknown reshaping kind {kind!r}")


@dataclass(frozen=True)
class SaturatingFamily:
    """Per-datum reshaping: identity below a datum-specific threshold,
    then a shared gentler slope. Applies rowwise to energy matrices."""

    thresholds: np.ndarray  # (n_data,)
    slope: float = 0.1

    def __post_init__(self):
        th = np.asarray(self.thresholds, dtype=float)
        if th.ndim != 1 or th.min() < 0:
            raise ValueError("thresholds must be a nonnegative vector")
        if not 0 <= self.slope <= 1:
            raise ValueError("slope must lie in [0, 1]")
        object.__setattr__(self, "thresholds", th)

    def apply_rows(self, energies):
        e = np.asarray(energies, dtype=float)
        th = self.thresholds if e.ndim == 1 else self.thresholds[:, None]
        return np.minimum(e, self.slope * e + (1.0 - self.slope) * th)

    def row(self, i) -> ConcaveRho:
        th = float(self.thresholds[i])
        if th == 0.0:
            return ConcaveRho.from_knots([0.0, 1.0], [0.0, self.slope])
        return ConcaveRho.capped(th, self.slope)

    def dprime0(self) -> float:
        return self.slope if (self.thresholds == 0).all() else 1.0

    def to_json_dict(self) -> dict:
        return {"kind": "saturating_family",
                "thresholds": self.thresholds.tolist(), "slope": self.slope}


def fractional_energy_family(data, fraction=0.01, slope=0.1) -> SaturatingFamily:
    """Thresholds set to a fraction of each datum's squared norm."""
    norms = (np.asarray(data, dtype=float) ** 2).sum(axis=1)
    return SaturatingFamily(fraction * norms, slope)


class PCAObjective:
    """Total captured energy: sum of squared projections of the data rows."""

    def __init__(self, data):
        self.data = np.asarray(data, dtype=float)
        if self.data.ndim != 2:
            raise ValueError("data must be (n_rows, d)")
        self.total_energy = float((self.data ** 2).sum())

    @property
    def ambient_dim(self):
        return self.data.shape[1]

    @property
    def feature_rows(self):
        """Rows whose projection energies determine the value."""
        return self.data

    def energies(self, sub: Subspace):
        return ((self.data @ sub.basis) ** 2).sum(axis=1)

    def value_from_energies(self, energies):
        return np.asarray(energies, dtype=float).sum(axis=0)

    def value_from_scratch_energies(self, energies):
        """Same result as value_from_energies; may overwrite the buffer."""
        return self.value_from_energies(energies)

    def value_of_subspace(self, sub: Subspace) -> float:
        return float(self.value_from_energies(self.energies(sub)))

    def value(self, lat: FiniteLattice, e) -> float:
        return self.value_of_subspace(_subspace_payload(lat, e))


class GeneralizedPCAObjective(PCAObjective):
    """Captured energy reshaped per datum by a concave function."""

    def __init__(self, data, rho):
        super().__init__(data)
        self.rho = rho
        if isinstance(rho, SaturatingFamily):
            if len(rho.thresholds) != self.data.shape[0]:
                raise ValueError("one threshold per data row required")
        elif not isinstance(rho, ConcaveRho):
            raise ValueError("rho must be a ConcaveRho or a SaturatingFamily")

    def value_from_energies(self, energies):
        e = np.asarray(energies, dtype=float)
        if isinstance(self.rho, SaturatingFamily):
            return self.rho.apply_rows(e).sum(axis=0)
        return self.rho.apply(e).sum(axis=0)

    def value_from_scratch_energies(self, energies):
        # min(e, se + (1-s)t) = se + (1-s)min(e, t) for e, t >= 0, so the
        # column sum folds into two reductions over a reusable buffer
        fam = self.rho
        if isinstance(fam, SaturatingFamily) and getattr(energies, "ndim", 1) == 2:
            total = energies.sum(axis=0)
            np.minimum(energies, fam.thresholds[:, None], out=energies)
            return fam.slope * total + (1.0 - fam.slope) * energies.sum(axis=0)
        return self.value_from_energies(energies)


@dataclass(frozen=True)
class WeightedDigraph:
    """Directed graph with vector-valued vertices and weighted edges."""

    vertices: np.ndarray  # (n, d) one vector per vertex
    edges: tuple          # ((i, j, weight), ...)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] == 0:
            raise ValueError("vertices must be a nonempty (n, d) array")
        es = []
        for i, j, c in self.edges:
            i, j = int(i), int(j)
            if not (0 <= i < v.shape[0] and 0 <= j < v.shape[0]):
                raise ValueError(f"edge ({i},{j}) references a missing vertex")
            es.append((i, j, float(c)))
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "edges", tuple(es))

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    def to_json_dict(self) -> dict:
        return {"vertices": self.vertices.tolist(),
                "edges": [[i, j, c] for i, j, c in self.edges]}

    @classmethod
    def from_json_dict(cls, doc) -> "WeightedDigraph":
        return cls(np.asarray(doc["vertices"], dtype=float),
                   tuple(tuple(e) for e in doc["edges"]))

    @classmethod
    def complete_classical(cls, weights) -> "WeightedDigraph":
        """Axis-vector vertices with the given (n, n) weight matrix."""
        w = np.asarray(weights, dtype=float)
        n = w.shape[0]
        edges = [(i, j, w[i, j]) for i in range(n) for j in range(n)
                 if i != j and w[i, j] != 0.0]
        return cls(np.eye(n), tuple(edges))


class QuantumCutObjective:
    """Weighted sum over edges of source energy inside the subspace times
    target energy in its orthogonal complement. With axis-vector vertices
    and subset payloads this is the classical directed cut value."""

    def __init__(self, graph: WeightedDigraph):
        self.graph = graph
        self.vertex_norms = (graph.vertices ** 2).sum(axis=1)
        self._src = np.array([e[0] for e in graph.edges], dtype=int)
        self._dst = np.array([e[1] for e in graph.edges], dtype=int)
        self._w = np.array([e[2] for e in graph.edges], dtype=float)

    @property
    def ambient_dim(self):
        return self.graph.vertices.shape[1]

    @property
    def feature_rows(self):
        return self.graph.vertices

    def energies(self, sub: Subspace):
        return ((self.graph.vertices @ sub.basis) ** 2).sum(axis=1)

    def value_from_energies(self, energies):
        p = np.asarray(energies, dtype=float)
        q = (self.vertex_norms[:, None] if p.ndim > 1 else self.vertex_norms) - p
        src = p[self._src]
        dst = np.clip(q[self._dst], 0.0, None)
        if p.ndim > 1:
            return (self._w[:, None] * src * dst).sum(axis=0)
        return (self._w * src * dst).sum(axis=0)

    def value_from_scratch_energies(self, energies):
        return self.value_from_energies(energies)

    def value_of_subspace(self, sub: Subspace) -> float:
        return float(self.value_from_energies(self.energies(sub)))

    def value_of_mask(self, mask: int) -> float:
        inside = np.array([bool(mask >> i & 1) for i in range(self.graph.n_vertices)])
        p = np.where(inside, self.vertex_norms, 0.0)
        q = np.where(~inside, self.vertex_norms, 0.0)
        return float((self._w * p[self._src] * q[self._dst]).sum())

    def value(self, lat: FiniteLattice, e) -> float:
        payload = lat.payload(e)
        if isinstance(payload, Subspace):
            return self.value_of_subspace(payload)
        return self.value_of_mask(int(payload))


class TableObjective:
    """Objective given directly by a value per lattice element."""

    def __init__(self, values):
        self.values = np.asarray(values, dtype=float)

    def value(self, lat: FiniteLattice, e) -> float:
        return float(self.values[e])


def _subspace_payload(lat, e) -> Subspace:
    payload = lat.payload(e)
    if not isinstance(payload, Subspace):
        raise TypeError("objective needs subspace payloads")
    return payload


def marginal(obj, lat: FiniteLattice, a, x, *, check=True) -> float:
    """Gain of one admissible step from x along a."""
    if check and not lat.is_admissible(a, x):
        raise ValueError("step element is not admissible here")
    return obj.value(lat, lat.join(a, x)) - obj.value(lat, x)


class ModularCost:
    """Cost that adds a fixed increment per join-irreducible step.

    Evaluation walks a canonical chain from the bottom, always taking the
    lowest-indexed admissible irreducible below the target. For genuinely
    modular assignments the walk order does not matter.
    """

    def __init__(self, lat: FiniteLattice, increments, base=0.0):
        self.lat = lat
        self.base = float(base)
        self.increments = {int(a): float(c) for a, c in increments.items()}
        missing = set(lat.join_irreducibles()) - set(self.increments)
        if missing:
            raise ValueError(f"missing increments for irreducibles {sorted(missing)}")
        if min(self.increments.values()) < 0:
            raise ValueError("increments must be nonnegative")

    @classmethod
    def uniform(cls, lat, step=1.0, base=0.0) -> "ModularCost":
        """Height cost when every irreducible step costs the same."""
        return cls(lat, {a: step for a in lat.join_irreducibles()}, base)

    def step_cost(self, a) -> float:
        return self.increments[int(a)]

    def of(self, e) -> float:
        lat = self.lat
        total = self.base
        x = lat.bottom
        while x != e:
            a = next(a for a in lat.admissibles(x)
                     if lat.leq(a, e) and a != x)
            total += self.increments[a]
            x = lat.join(a, x)
        return total

    def is_modular(self) -> bool:
        """Exhaustive pairwise check of the valuation identity."""
        vals = np.array([self.of(e) for e in range(self.lat.n)])
        jt, mt = self.lat.join_table(), self.lat.meet_table()
        lhs = vals[:, None] + vals[None, :]
        rhs = vals[jt] + vals[mt]
        return bool(np.abs(lhs - rhs).max() <= 1e-9)


def check_order_consistency(lat: FiniteLattice, increments):
    """Comparable irreducibles must have nondecreasing step costs.

    Returns (True, None) or (False, (smaller, larger)) as a witness.
    """
    irr = lat.join_irreducibles()
    for a in irr:
        for b in irr:
            if a != b and lat.leq(a, b) and increments[a] > increments[b] + 1e-12:
                return False, (a, b)
    return True, None
