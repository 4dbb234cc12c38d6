"""Finite span lattices generated by a dictionary of unit vectors.

Enumerates the spans of all atom subsets, deduplicates them by projector
at EQ_TOL, and materializes order/join/meet tables. Join of two elements
is the span of the union of their generating subsets; meet is the join
of every enumerated element below both (flagged if that fails to be a
greatest lower bound, which only numerical inconsistency can cause).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from latmax.lattice import FiniteLattice, NotALatticeError, SizeLimitError
from latmax.subspaces import (
    EQ_TOL,
    ORTH_TOL,
    Direction,
    Subspace,
    vjoin,
)


@dataclass(frozen=True)
class Dictionary:
    """A finite set of unit vectors spanning candidate directions."""

    vectors: np.ndarray  # (n_atoms, d), one unit vector per row

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[0] == 0:
            raise ValueError("dictionary needs a nonempty (n_atoms, d) array")
        nrm = np.linalg.norm(v, axis=1)
        if np.abs(nrm - 1.0).max() > ORTH_TOL:
            raise ValueError("dictionary vectors must be unit norm")
        gram = np.abs(v @ v.T)
        np.fill_diagonal(gram, 0.0)
        if gram.max() >= 1.0 - 1e-10:
            raise ValueError("dictionary vectors must be pairwise distinct as lines")
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)

    @property
    def n_atoms(self) -> int:
        return self.vectors.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[1]

    def direction(self, i: int) -> Direction:
        return Direction(self.vectors[i])

    def to_json_dict(self) -> dict:
        return {"kind": "dictionary", "atoms": self.vectors.tolist(), "tolerance": EQ_TOL}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Dictionary":
        return cls(np.asarray(doc["atoms"], dtype=float))


class EnumeratedLattice(FiniteLattice):
    """Span lattice of a dictionary with precomputed order and tables."""

    def __init__(self, dictionary: Dictionary, cap: int = 12):
        if dictionary.n_atoms > cap:
            raise SizeLimitError(
                f"{dictionary.n_atoms} atoms exceed the enumeration cap {cap}"
            )
        self.dictionary = dictionary
        d = dictionary.ambient_dim
        n_subsets = 1 << dictionary.n_atoms

        subspaces: list[Subspace] = [Subspace.bottom(d)]
        gen_masks: list[int] = [0]
        projs: list[np.ndarray] = [np.zeros((d, d))]
        by_dim: dict[int, list[int]] = {0: [0]}
        elem_of_mask = np.zeros(n_subsets, dtype=np.int64)

        for mask in range(1, n_subsets):
            low = mask & -mask
            prev = int(elem_of_mask[mask ^ low])
            span = vjoin(subspaces[prev], dictionary.direction(low.bit_length() - 1))
            p = span.projector()
            found = -1
            bucket = by_dim.get(span.dim, [])
            if bucket:
                stack = np.stack([projs[i] for i in bucket])
                diffs = np.abs(stack - p[None]).max(axis=(1, 2))
                hit = int(np.argmin(diffs))
                if diffs[hit] <= EQ_TOL:
                    found = bucket[hit]
            if found < 0:
                found = len(subspaces)
                subspaces.append(span)
                gen_masks.append(mask)
                projs.append(p)
                by_dim.setdefault(span.dim, []).append(found)
            elem_of_mask[mask] = found

        n = len(subspaces)
        self.n = n
        self.subspaces = tuple(subspaces)
        self.gen_masks = tuple(gen_masks)
        self._elem_of_mask = elem_of_mask
        self.bottom = 0
        self.top = int(elem_of_mask[n_subsets - 1])
        self._dims = np.array([s.dim for s in subspaces])

        proj_stack = np.stack(projs)
        order = np.zeros((n, n), dtype=bool)
        for x in range(n):
            bx = subspaces[x].basis
            if bx.shape[1] == 0:
                order[x, :] = True
                continue
            resid = np.einsum("nij,jk->nik", proj_stack, bx) - bx[None]
            order[x, :] = np.abs(resid).max(axis=(1, 2)) <= ORTH_TOL
        self._order = order

        gm = np.array(gen_masks)
        self._jt = elem_of_mask[gm[:, None] | gm[None, :]]

        self._mt = np.full((n, n), -1, dtype=np.int64)
        heights = self._dims
        for i in range(n):
            common = order[:, [i]] & order  # (z, j): z below both i and j
            masked = np.where(common, heights[:, None], -1)
            m = np.argmax(masked, axis=0)
            ok = (~common | order[:, m]).all(axis=0)
            self._mt[i, ok] = m[ok]
        self.is_lattice = bool((self._mt >= 0).all())

    @property
    def atom_elements(self) -> tuple[int, ...]:
        """Element id of each dictionary vector's line."""
        return tuple(int(self._elem_of_mask[1 << i]) for i in range(self.dictionary.n_atoms))

    def leq(self, i, j):
        return bool(self._order[i, j])

    def join(self, i, j):
        return int(self._jt[i, j])

    def meet(self, i, j):
        m = int(self._mt[i, j])
        if m < 0:
            raise NotALatticeError(f"no unique greatest lower bound for ({i},{j})")
        return m

    def height(self, i):
        return int(self._dims[i])

    def payload(self, i) -> Subspace:
        return self.subspaces[i]

    def label(self, i):
        bits = [str(k) for k in range(self.dictionary.n_atoms) if self.gen_masks[i] >> k & 1]
        return "span{" + ",".join(bits) + "}"

    def join_table(self):
        return self._jt

    def meet_table(self):
        if not self.is_lattice:
            raise NotALatticeError("enumerated spans do not form a lattice")
        return self._mt

    @property
    def _leq(self):
        return self._order

    @property
    def heights(self):
        return self._dims

    def is_modular(self):
        if not self.is_lattice:
            return False
        return super().is_modular()

    def to_json_dict(self) -> dict:
        return {
            "kind": "dictionary",
            "atoms": self.dictionary.vectors.tolist(),
            "tolerance": EQ_TOL,
            "elements": [s.to_json_dict() for s in self.subspaces],
            "hasse_edges": self.hasse_edges(),
            "is_lattice": self.is_lattice,
            "is_modular": self.is_modular(),
        }


def enumerate_lattice(dictionary: Dictionary, cap: int = 12) -> EnumeratedLattice:
    return EnumeratedLattice(dictionary, cap=cap)


def coherence_vectors(dictionary: Dictionary) -> float:
    """Largest off-diagonal |inner product| between dictionary vectors."""
    if dictionary.n_atoms < 2:
        raise ValueError("coherence needs at least two vectors")
    gram = np.abs(dictionary.vectors @ dictionary.vectors.T)
    np.fill_diagonal(gram, 0.0)
    return float(gram.max())


def _alignment(x: Subspace, y: Subspace) -> float:
    """Worst-case |cosine| between unit vectors of two subspaces."""
    if x.dim == 0 or y.dim == 0:
        return 0.0
    s = np.linalg.svd(x.basis.T @ y.basis, compute_uv=False)
    return float(min(s[0], 1.0))


@dataclass
class CoherenceReport:
    """Best-complement alignment per element, and the lattice-wide worst case."""

    value: float
    per_element: dict[int, float] = field(default_factory=dict)
    best_complement: dict[int, int] = field(default_factory=dict)
    no_complement: tuple[int, ...] = ()


def lattice_coherence_report(lat: EnumeratedLattice) -> CoherenceReport:
    """For every element, find the complement (meet bottom, join top) whose
    alignment is smallest; report the max of those minima. Elements with no
    complement at all make the coherence infinite."""
    if lat.height(lat.top) != lat.dictionary.ambient_dim:
        raise ValueError("lattice top must span the ambient space")
    if not lat.is_lattice:
        raise NotALatticeError("coherence needs a lattice")
    report = CoherenceReport(value=0.0)
    offenders = []
    for x in range(lat.n):
        best, best_y = None, None
        for y in range(lat.n):
            if lat.join(x, y) != lat.top or lat.meet(x, y) != lat.bottom:
                continue
            a = _alignment(lat.subspaces[x], lat.subspaces[y])
            if best is None or a < best:
                best, best_y = a, y
        if best is None:
            offenders.append(x)
        else:
            report.per_element[x] = best
            report.best_complement[x] = best_y
    report.no_complement = tuple(offenders)
    report.value = float("inf") if offenders else max(report.per_element.values())
    return report


def coherence_lattice(lat: EnumeratedLattice) -> float:
    return lattice_coherence_report(lat).value
