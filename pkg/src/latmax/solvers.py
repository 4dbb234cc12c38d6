"""Greedy maximization routines on finite lattices and on the full
subspace lattice of R^d.

Finite lattices get exact inner scans over admissible steps. The
continuous subspace lattice delegates the inner step to a strategy:
an exact eigenvector step (quadratic objectives only), a deterministic
direction grid, or random sampling. Double greedy evaluates ascent and
descent over one shared direction set so its per-iteration certificate
inherits the objective's exchange inequality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from latmax.lattice import FiniteLattice
from latmax.objectives import GeneralizedPCAObjective, PCAObjective
from latmax.subspaces import (
    Direction,
    Subspace,
    VectorLattice,
    codim1_descend,
    vjoin,
)


@dataclass(frozen=True)
class ExactEigen:
    """Closed-form inner step through the residual scatter matrix."""


@dataclass(frozen=True)
class Grid:
    """Deterministic direction grid: first coordinate in [0, 1], the rest
    in [-1, 1], normalized. Optional local refinement around the best cell."""

    width: float = 0.025
    refine_rounds: int = 0


@dataclass(frozen=True)
class RandomRestart:
    """Uniformly random unit directions."""

    samples: int = 8192
    seed: int = 0


_CHUNK = 16384


def describe_strategy(strategy) -> str:
    if isinstance(strategy, ExactEigen):
        return "exact-eigen"
    if isinstance(strategy, Grid):
        return f"grid:{strategy.width}" + (
            f"+refine{strategy.refine_rounds}" if strategy.refine_rounds else "")
    if isinstance(strategy, RandomRestart):
        return f"random:{strategy.samples}"
    return "exhaustive"


def strategy_from_name(name: str):
    if name in (None, "", "exhaustive"):
        return None
    if name == "exact-eigen":
        return ExactEigen()
    parts = name.split(":")
    if parts[0] == "grid":
        width = float(parts[1]) if len(parts) > 1 else 0.025
        rounds = int(parts[2]) if len(parts) > 2 else 0
        return Grid(width=width, refine_rounds=rounds)
    if parts[0] == "random":
        samples = int(parts[1]) if len(parts) > 1 else 8192
        seed = int(parts[2]) if len(parts) > 2 else 0
        return RandomRestart(samples=samples, seed=seed)
    raise ValueError(f"unknown strategy {name!r}")


@dataclass
class SolveReport:
    """Trajectory and outcome of one solver run."""

    algorithm: str
    value: float
    element: int | None = None
    basis: dict | None = None
    iterations: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {"algorithm": self.algorithm, "value": self.value,
                "element": self.element, "basis": self.basis,
                "iterations": self.iterations, "meta": self.meta}


def _grid_axes(width, dim):
    first = np.arange(0.0, 1.0 + width / 2, width)
    rest = np.arange(-1.0, 1.0 + width / 2, width)
    return [first] + [rest] * (dim - 1)


def _grid_points(axes):
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh])


def _best_direction(evaluate, strategy, dim, rng):
    """Maximize a direction score over the unit sphere of R^dim.

    evaluate maps a (dim, m) matrix of raw candidates to (scores, units)
    where units holds the normalized accepted candidates column-wise.
    Returns (best_score, best_unit_vector).
    """
    def sweep(raw):
        best_s, best_u = -np.inf, None
        for lo in range(0, raw.shape[1], _CHUNK):
            scores, units = evaluate(raw[:, lo:lo + _CHUNK])
            if scores.size == 0:
                continue
            k = int(np.argmax(scores))
            if scores[k] > best_s:
                best_s, best_u = float(scores[k]), units[:, k].copy()
        return best_s, best_u

    if isinstance(strategy, RandomRestart):
        local = np.random.default_rng(strategy.seed) if rng is None else rng
        return sweep(local.normal(size=(dim, strategy.samples)))

    if not isinstance(strategy, Grid):
        raise ValueError(f"strategy {strategy!r} cannot propose directions")
    width = strategy.width
    best_s, best_u = sweep(_grid_points(_grid_axes(width, dim)))
    for _ in range(strategy.refine_rounds):
        if best_u is None:
            break
        width /= 5.0
        axes = [np.linspace(c - 5 * width, c + 5 * width, 11) for c in best_u]
        s, u = sweep(_grid_points(axes))
        if u is not None and s > best_s:
            best_s, best_u = s, u
    return best_s, best_u


def _unitize(raw, against=None):
    """Orthogonalize raw columns against a subspace and normalize."""
    w = np.asarray(raw, dtype=float)
    if against is not None and against.dim > 0:
        b = against.basis
        w = w - b @ (b.T @ w)
        w = w - b @ (b.T @ w)
    nrm = np.linalg.norm(w, axis=0)
    keep = nrm > 1e-9
    return w[:, keep] / nrm[keep]


def _is_plain_pca(obj) -> bool:
    return isinstance(obj, PCAObjective) and not isinstance(obj, GeneralizedPCAObjective)


def _residual_scatter_top(obj, base: Subspace):
    """Best ascent direction of a quadratic energy sum: top eigenvector of
    the scatter matrix restricted to the orthogonal complement of base."""
    d = obj.ambient_dim
    s = obj.feature_rows.T @ obj.feature_rows
    q = np.eye(d) - base.projector()
    w, v = np.linalg.eigh(q @ s @ q)
    gain, vec = float(w[-1]), v[:, -1]
    resid = vec - base.projector() @ vec
    n = np.linalg.norm(resid)
    if n < 1e-9:
        return 0.0, None
    return gain, resid / n


def greedy_height(obj, lat, k, *, strategy=None, seed=0) -> SolveReport:
    """Height-constrained greedy: repeatedly join the admissible step of
    largest resulting value while the height stays within k."""
    if isinstance(lat, VectorLattice):
        return _greedy_height_vector(obj, lat, k, strategy, seed)
    return _greedy_height_finite(obj, lat, k)


def _greedy_height_finite(obj, lat: FiniteLattice, k) -> SolveReport:
    x = lat.bottom
    current = obj.value(lat, x)
    report = SolveReport("greedy-height", current, element=x,
                         meta={"k": k, "strategy": "exhaustive", "n_elements": lat.n})
    for step in range(k):
        best, best_v = None, None
        for a in lat.admissibles(x):
            y = lat.join(a, x)
            if lat.height(y) > k:
                continue
            v = obj.value(lat, y)
            if best_v is None or v > best_v:
                best, best_v = a, v
        if best is None:
            break
        y = lat.join(best, x)
        report.iterations.append({
            "step": step, "element": int(best), "label": lat.label(best),
            "marginal": best_v - current, "value": best_v,
            "height": lat.height(y),
        })
        x, current = y, best_v
    report.value, report.element = float(current), int(x)
    return report


def _greedy_height_vector(obj, lat: VectorLattice, k, strategy, seed) -> SolveReport:
    d = lat.ambient_dim
    if strategy is None:
        if _is_plain_pca(obj):
            strategy = ExactEigen()
        else:
            strategy = Grid() if d <= 4 else RandomRestart()
    if isinstance(strategy, ExactEigen) and not _is_plain_pca(obj):
        raise ValueError("the eigenvector step needs a plain quadratic objective")
    rng = np.random.default_rng(seed)
    rows = obj.feature_rows
    x = lat.bottom()
    energies = obj.energies(x)
    current = float(obj.value_from_energies(energies))
    report = SolveReport("greedy-height", current,
                         meta={"k": k, "strategy": describe_strategy(strategy),
                               "ambient_dim": d, "seed": seed})
    for step in range(min(k, d)):
        if isinstance(strategy, ExactEigen):
            gain, unit = _residual_scatter_top(obj, x)
            best_v = current + gain if unit is not None else None
        else:
            base = energies[:, None] if energies.any() else None

            def evaluate(raw):
                units = _unitize(raw, against=x)
                e = rows @ units
                np.square(e, out=e)
                if base is not None:
                    e += base
                return obj.value_from_scratch_energies(e), units
            best_v, unit = _best_direction(evaluate, strategy, d, rng)
        if unit is None:
            break
        x = vjoin(x, Direction(unit))
        energies = obj.energies(x)
        value = float(obj.value_from_energies(energies))
        report.iterations.append({
            "step": step, "direction": unit.tolist(),
            "marginal": value - current, "value": value, "height": x.dim,
        })
        current = value
    report.value = float(current)
    report.basis = x.to_json_dict()
    return report


def greedy_knapsack(obj, lat: FiniteLattice, cost, budget) -> SolveReport:
    """Density greedy under a budget, then compare with the best affordable
    single irreducible. Zero-cost steps rank first by raw gain."""
    if isinstance(lat, VectorLattice):
        raise TypeError("budgeted greedy runs on finite lattices")
    if cost.of(lat.bottom) > budget + 1e-12:
        raise ValueError("even the bottom exceeds the budget")
    x = lat.bottom
    current = obj.value(lat, x)
    spent = cost.of(x)
    report = SolveReport("greedy-knapsack", current, element=x,
                         meta={"budget": budget, "n_elements": lat.n})
    step = 0
    while True:
        zero_best, zero_v = None, None
        dens_best, dens_v, dens_m, dens_d = None, None, None, None
        for a in lat.admissibles(x):
            y = lat.join(a, x)
            cy = cost.of(y)
            if cy > budget + 1e-12:
                continue
            mv = obj.value(lat, y) - current
            dc = cy - spent
            if dc <= 1e-12:
                if zero_v is None or mv > zero_v:
                    zero_best, zero_v = a, mv
            else:
                dens = mv / dc
                if dens_v is None or dens > dens_v:
                    dens_best, dens_v, dens_m, dens_d = a, dens, mv, dc
        if zero_best is not None:
            a, mv, dc, dens = zero_best, zero_v, 0.0, float("inf")
        elif dens_best is not None:
            a, mv, dc, dens = dens_best, dens_m, dens_d, dens_v
        else:
            break
        x = lat.join(a, x)
        current = obj.value(lat, x)
        spent = cost.of(x)
        report.iterations.append({
            "step": step, "element": int(a), "label": lat.label(a),
            "marginal": mv, "cost_increment": dc, "density": dens,
            "value": current, "spent": spent,
        })
        step += 1
    greedy_value, greedy_elem = float(current), int(x)

    single_best, single_v = None, None
    for a in lat.join_irreducibles():
        if cost.of(a) > budget + 1e-12:
            continue
        v = obj.value(lat, a)
        if single_v is None or v > single_v:
            single_best, single_v = a, v
    if single_best is not None and single_v > greedy_value:
        report.value, report.element = float(single_v), int(single_best)
        report.meta["winner"] = "singleton"
    else:
        report.value, report.element = greedy_value, greedy_elem
        report.meta["winner"] = "greedy"
    report.meta["greedy_value"] = greedy_value
    report.meta["best_singleton_value"] = single_v
    return report


def double_greedy(obj, lat, *, strategy=None, seed=0) -> SolveReport:
    """Two-pointer greedy between the bottom and the top: each iteration
    compares the best one-step ascent of the lower pointer against the
    best one-step descent of the upper pointer."""
    if isinstance(lat, VectorLattice):
        return _double_greedy_vector(obj, lat, strategy, seed)
    return _double_greedy_finite(obj, lat)


def _double_greedy_finite(obj, lat: FiniteLattice) -> SolveReport:
    a, b = lat.bottom, lat.top
    fa, fb = obj.value(lat, a), obj.value(lat, b)
    report = SolveReport("double-greedy", fa,
                         meta={"strategy": "exhaustive", "n_elements": lat.n,
                               "lattice_height": lat.height(lat.top)})
    it = 0
    while a != b:
        up_best, up_v = None, None
        for u in lat.admissibles(a):
            if not lat.leq(u, b):
                continue
            v = obj.value(lat, lat.join(u, a))
            if up_v is None or v > up_v:
                up_best, up_v = u, v

        hb = lat.height(b)
        downs = [e for e in range(lat.n)
                 if lat.height(e) == hb - 1 and e != b
                 and lat.leq(a, e) and lat.leq(e, b)]
        if not downs:
            # no graded step below b: fall back to the highest elements of [a, b)
            between = [e for e in range(lat.n)
                       if e != b and lat.leq(a, e) and lat.leq(e, b)]
            hmax = max(lat.height(e) for e in between)
            downs = [e for e in between if lat.height(e) == hmax]
        down_best, down_v = None, None
        for e in downs:
            v = obj.value(lat, e)
            if down_v is None or v > down_v:
                down_best, down_v = e, v

        alpha = up_v - fa if up_best is not None else None
        beta = down_v - fb
        record = {"iteration": it, "alpha": alpha, "beta": beta,
                  "a": int(a), "b": int(b),
                  "a_height": lat.height(a), "b_height": hb,
                  "a_leq_b": bool(lat.leq(a, b))}
        if up_best is not None and alpha >= beta:
            a, fa = lat.join(up_best, a), up_v
            record["choice"] = "ascend"
            record["element"] = int(up_best)
        else:
            b, fb = down_best, down_v
            record["choice"] = "descend"
            record["element"] = int(down_best)
        report.iterations.append(record)
        it += 1
    report.value, report.element = float(fa), int(a)
    report.meta["iterations_used"] = it
    return report


def _double_greedy_vector(obj, lat: VectorLattice, strategy, seed) -> SolveReport:
    d = lat.ambient_dim
    if strategy is None:
        # a full grid is affordable only in low ambient dimension
        strategy = Grid() if d <= 4 else RandomRestart()
    rng = np.random.default_rng(seed)
    rows = obj.feature_rows
    a, b = lat.bottom(), lat.top()
    ea, eb = obj.energies(a), obj.energies(b)
    fa = float(obj.value_from_energies(ea))
    fb = float(obj.value_from_energies(eb))
    report = SolveReport("double-greedy", fa,
                         meta={"strategy": describe_strategy(strategy),
                               "ambient_dim": d, "seed": seed,
                               "lattice_height": d})
    it = 0
    while a.dim < b.dim:
        # orthonormal basis of b restricted to the complement of a;
        # both moves draw their direction from this gap
        gap = Subspace.from_spanning(_unitize(b.basis, against=a)).basis
        exact = isinstance(strategy, ExactEigen)
        if exact:
            if not _is_plain_pca(obj):
                raise ValueError("the eigenvector step needs a plain quadratic objective")
            s = gap.T @ (rows.T @ rows) @ gap
            w, v = np.linalg.eigh(s)
            up_unit, up_v = gap @ v[:, -1], fa + float(w[-1])
            down_unit, down_v = gap @ v[:, 0], fb - float(w[0])
        else:
            m = gap.shape[1]

            def eval_up(raw):
                units = gap @ _unitize(raw)
                e = rows @ units
                np.square(e, out=e)
                e += ea[:, None]
                return obj.value_from_scratch_energies(e), units

            def eval_down(raw):
                units = gap @ _unitize(raw)
                e = rows @ units
                np.square(e, out=e)
                np.subtract(eb[:, None], e, out=e)
                return obj.value_from_scratch_energies(e), units

            up_v, up_unit = _best_direction(eval_up, strategy, m, rng)
            down_v, down_unit = _best_direction(eval_down, strategy, m, rng)
        alpha, beta = up_v - fa, down_v - fb
        record = {"iteration": it, "alpha": alpha, "beta": beta,
                  "a_height": a.dim, "b_height": b.dim, "a_leq_b": True}
        if alpha >= beta:
            a = vjoin(a, Direction(up_unit))
            ea = obj.energies(a)
            fa = float(obj.value_from_energies(ea))
            record["choice"] = "ascend"
            record["direction"] = up_unit.tolist()
        else:
            b = codim1_descend(b, Direction(down_unit))
            eb = obj.energies(b)
            fb = float(obj.value_from_energies(eb))
            record["choice"] = "descend"
            record["direction"] = down_unit.tolist()
        report.iterations.append(record)
        it += 1
    report.value = float(fa)
    report.basis = a.to_json_dict()
    report.meta["iterations_used"] = it
    return report
