"""Subspaces of R^d as orthonormal bases, with lattice operations.

Join appends columns with twice-iterated Gram-Schmidt; meet solves the
stacked nullspace system [P_X - I; P_Y - I] v = 0 by SVD. Tolerances:
RANK_TOL for keep/drop decisions relative to the largest singular value,
ORTH_TOL for orthonormality and containment residues, EQ_TOL for
projector equality. All objects are immutable value types.
"""

from __future__ import annotations

import numpy as np

RANK_TOL = 1e-9
ORTH_TOL = 1e-8
EQ_TOL = 1e-8


class Subspace:
    """Linear subspace of R^d held as a d x r orthonormal basis."""

    __slots__ = ("basis",)

    def __init__(self, basis: np.ndarray):
        basis = np.array(basis, dtype=float)
        if basis.ndim != 2:
            raise ValueError("basis must be a 2-d array of column vectors")
        d, r = basis.shape
        if r > d:
            raise ValueError(f"more basis vectors ({r}) than ambient dimensions ({d})")
        if r and np.abs(basis.T @ basis - np.eye(r)).max() > ORTH_TOL:
            raise ValueError("basis columns are not orthonormal")
        basis.flags.writeable = False
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def contains(self, v: np.ndarray, tol: float = ORTH_TOL) -> bool:
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self.basis @ (self.basis.T @ v))) <= tol * max(
            1.0, float(np.linalg.norm(v))
        )

    @classmethod
    def bottom(cls, d: int) -> "Subspace":
        return cls(np.zeros((d, 0)))

    @classmethod
    def top(cls, d: int) -> "Subspace":
        return cls(np.eye(d))

    @classmethod
    def from_spanning(cls, columns: np.ndarray) -> "Subspace":
        """Orthonormalize arbitrary spanning columns, dropping rank deficiency."""
        columns = np.asarray(columns, dtype=float)
        if columns.ndim == 1:
            columns = columns[:, None]
        if columns.shape[1] == 0:
            return cls.bottom(columns.shape[0])
        u, s, _ = np.linalg.svd(columns, full_matrices=False)
        rank = int(np.sum(s > RANK_TOL * (s[0] if s.size else 1.0)))
        return cls(u[:, :rank])

    def to_json_dict(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.T.tolist()}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Subspace":
        rows = np.asarray(doc["basis"], dtype=float)
        if rows.size == 0:
            return cls.bottom(int(doc["ambient_dim"]))
        return cls(rows.T)

    def __repr__(self):
        return f"Subspace(d={self.ambient_dim}, dim={self.dim})"


class Direction:
    """Unit vector in R^d, the atomic step of the subspace lattice."""

    __slots__ = ("vector",)

    def __init__(self, vector: np.ndarray):
        v = np.array(vector, dtype=float).ravel()
        nrm = float(np.linalg.norm(v))
        if nrm <= 1e-12:
            raise ValueError("direction must be a nonzero vector")
        v = v / nrm
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)

    def __setattr__(self, name, value):
        raise AttributeError("Direction is immutable")

    @property
    def ambient_dim(self) -> int:
        return self.vector.shape[0]

    def __repr__(self):
        return f"Direction({np.array2string(self.vector, precision=4)})"


def _append_orthonormal(basis: np.ndarray, columns: np.ndarray) -> np.ndarray:
    """Twice-iterated Gram-Schmidt append; drops columns below RANK_TOL."""
    b = basis
    for v in columns.T:
        w = v - b @ (b.T @ v)
        w = w - b @ (b.T @ w)
        nrm = float(np.linalg.norm(w))
        if nrm > RANK_TOL * max(1.0, float(np.linalg.norm(v))):
            b = np.hstack([b, (w / nrm)[:, None]])
    return b


def vjoin(x: Subspace, other: "Subspace | Direction") -> Subspace:
    """Least upper bound: the span of x together with other."""
    cols = other.basis if isinstance(other, Subspace) else other.vector[:, None]
    if cols.shape[0] != x.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Subspace(_append_orthonormal(x.basis, cols))


def vmeet(x: Subspace, y: Subspace) -> Subspace:
    """Greatest lower bound: intersection via the stacked nullspace system."""
    if x.ambient_dim != y.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    d = x.ambient_dim
    eye = np.eye(d)
    stacked = np.vstack([x.projector() - eye, y.projector() - eye])
    _, s, vt = np.linalg.svd(stacked, full_matrices=True)
    null_mask = np.concatenate([s, np.zeros(d - s.size)]) <= ORTH_TOL
    basis = vt[null_mask].T
    return Subspace(basis)


def ortho_complement(x: Subspace) -> Subspace:
    if x.dim == 0:
        return Subspace.top(x.ambient_dim)
    if x.dim == x.ambient_dim:
        return Subspace.bottom(x.ambient_dim)
    u, _, _ = np.linalg.svd(x.basis, full_matrices=True)
    return Subspace(u[:, x.dim:])


def residual_direction(a: Direction, x: Subspace) -> Direction:
    """Unit component of a orthogonal to x; the effective step direction."""
    v = a.vector
    w = v - x.basis @ (x.basis.T @ v)
    w = w - x.basis @ (x.basis.T @ w)
    if float(np.linalg.norm(w)) <= ORTH_TOL:
        raise ValueError("direction lies inside the subspace; no residual")
    return Direction(w)


def codim1_descend(b: Subspace, w: Direction) -> Subspace:
    """Remove the line of w from b, keeping the orthogonal remainder in b."""
    coords = b.basis.T @ w.vector
    resid = w.vector - b.basis @ coords
    if float(np.linalg.norm(resid)) > ORTH_TOL:
        raise ValueError("direction is not inside the subspace")
    u, _, _ = np.linalg.svd(coords[:, None], full_matrices=True)
    return Subspace(b.basis @ u[:, 1:])


def subspace_leq(x: Subspace, y: Subspace) -> bool:
    if x.dim == 0:
        return True
    if x.dim > y.dim:
        return False
    resid = x.basis - y.basis @ (y.basis.T @ x.basis)
    return float(np.linalg.norm(resid, axis=0).max()) <= ORTH_TOL


def subspace_eq(x: Subspace, y: Subspace) -> bool:
    if x.ambient_dim != y.ambient_dim:
        return False
    return float(np.abs(x.projector() - y.projector()).max()) <= EQ_TOL


class DirectionClosure:
    """Directions equivalent to a given admissible step from a base subspace.

    The closure is the set of unit vectors inside the target span but not
    inside the base; it is represented intensionally by membership and
    sampling rather than materialized.
    """

    def __init__(self, base: Subspace, direction: Direction):
        residual_direction(direction, base)  # rejects directions already in base
        self.base = base
        self.direction = direction
        self.target = vjoin(base, direction)

    def contains(self, candidate: Direction) -> bool:
        if not self.target.contains(candidate.vector):
            return False
        return not self.base.contains(candidate.vector)

    def sample(self, rng: np.random.Generator, count: int) -> list[Direction]:
        out: list[Direction] = []
        while len(out) < count:
            g = rng.standard_normal((self.target.dim, count - len(out)))
            for coef in g.T:
                v = self.target.basis @ coef
                cand = Direction(v)
                if self.contains(cand):
                    out.append(cand)
        return out


class VectorLattice:
    """The full subspace lattice of R^d (modular, 1-incremental)."""

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("ambient dimension must be positive")
        self.d = d

    @property
    def ambient_dim(self) -> int:
        return self.d

    def bottom(self) -> Subspace:
        return Subspace.bottom(self.d)

    def top(self) -> Subspace:
        return Subspace.top(self.d)

    def join(self, x: Subspace, other) -> Subspace:
        return vjoin(x, other)

    def meet(self, x: Subspace, y: Subspace) -> Subspace:
        return vmeet(x, y)

    def leq(self, x: Subspace, y: Subspace) -> bool:
        return subspace_leq(x, y)

    def height(self, x: Subspace) -> int:
        return x.dim

    def lattice_height(self) -> int:
        return self.d

    def incrementality(self) -> int:
        # joining one line raises dimension by at most one
        return 1


def load_vectors_csv(path) -> np.ndarray:
    """Read one vector per row from a comma-separated file."""
    data = np.loadtxt(path, delimiter=",", ndmin=2, dtype=float)
    return data
