"""Finite-dimensional polyhedral geometry.

Domination sets are stored as finite intersections of closed halfspaces
``{d : <a_i, d> >= b_i}``; cones given by generators are kept as
:class:`GeneratorCone` and decided by a small phase-1 simplex.  In the plane
both representations convert exactly into each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

TOL_GEO = 1e-9
TOL_LP = 1e-9


class DimensionError(ValueError):
    pass


class LPError(RuntimeError):
    pass


class NotAConeError(ValueError):
    pass


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries: {arr!r}")
    return arr


@dataclass(frozen=True, eq=False)
class Halfspace:
    """The closed halfspace ``{d : <normal, d> >= offset}``."""

    normal: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        normal = as_vector(self.normal, "normal")
        if not np.any(normal != 0):
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))


@dataclass(eq=False)
class PolyhedralSet:
    """Intersection of halfspaces, stored as ``A d >= b``.

    ``generators`` optionally records a generating set when the polyhedron
    is a cone that came from a generator description; it is used for
    generator-wise inclusion tests and never for membership.
    """

    A: np.ndarray
    b: np.ndarray
    generators: np.ndarray | None = field(default=None)

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.shape[0] == 0:
            raise ValueError("a polyhedral set needs at least one halfspace")
        if A.shape[0] != b.shape[0]:
            raise DimensionError("normals and offsets disagree in count")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("halfspace data must be finite")
        if np.any(~A.any(axis=1)):
            raise ValueError("halfspace normal must be nonzero")
        self.A, self.b = A, b
        if self.generators is not None:
            self.generators = np.atleast_2d(np.asarray(self.generators, dtype=float))

    @classmethod
    def from_halfspaces(cls, halfspaces: Iterable[Halfspace]) -> "PolyhedralSet":
        hs = list(halfspaces)
        if not hs:
            raise ValueError("a polyhedral set needs at least one halfspace")
        return cls(np.array([h.normal for h in hs]), np.array([h.offset for h in hs]))

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    @property
    def is_cone(self) -> bool:
        return bool(np.all(self.b == 0))

    @property
    def halfspaces(self) -> list[Halfspace]:
        return [Halfspace(a, o) for a, o in zip(self.A, self.b)]

    def slack(self, d) -> np.ndarray:
        return self.A @ d - self.b

    def intersect(self, other: "PolyhedralSet") -> "PolyhedralSet":
        if other.dim != self.dim:
            raise DimensionError("cannot intersect sets of different dimension")
        return PolyhedralSet(np.vstack([self.A, other.A]), np.concatenate([self.b, other.b]))

    def __repr__(self):
        rows = ", ".join(
            f"{_fmt(a)}.d >= {o:g}" for a, o in zip(self.A, self.b)
        )
        return f"PolyhedralSet({rows})"


@dataclass(eq=False)
class GeneratorCone:
    """Conic hull of finitely many nonzero generators."""

    G: np.ndarray

    def __post_init__(self):
        G = np.atleast_2d(np.asarray(self.G, dtype=float))
        if G.shape[0] == 0:
            raise ValueError("a generator cone needs at least one generator")
        if not np.all(np.isfinite(G)):
            raise ValueError("generators must be finite")
        if np.any(~G.any(axis=1)):
            raise ValueError("generators must be nonzero")
        self.G = G

    @property
    def dim(self) -> int:
        return self.G.shape[1]

    @property
    def generators(self) -> np.ndarray:
        return self.G

    is_cone = True

    def __repr__(self):
        return "GeneratorCone(" + ", ".join(_fmt(g) for g in self.G) + ")"


def _fmt(v) -> str:
    return "(" + ", ".join(f"{x:g}" for x in v) + ")"


def pareto_cone(m: int) -> PolyhedralSet:
    eye = np.eye(m)
    return PolyhedralSet(eye, np.zeros(m), generators=eye)


def zero_cone(m: int) -> PolyhedralSet:
    """The degenerate cone ``{0}`` written as ``y >= 0, -y >= 0``."""
    eye = np.eye(m)
    return PolyhedralSet(np.vstack([eye, -eye]), np.zeros(2 * m), generators=np.zeros((0, m)))


def _check_dim(S, d: np.ndarray):
    if d.shape[-1] != S.dim:
        raise DimensionError(f"dimension mismatch: set has {S.dim}, vector has {d.shape[-1]}")


def contains(S, d, tol: float = TOL_GEO) -> bool:
    """Membership ``d in S``; every halfspace slack must be ``>= -tol``.

    Generator cones are dispatched to :func:`cone_contains`.
    """
    if isinstance(S, GeneratorCone):
        return cone_contains(S, d, tol)
    d = as_vector(d)
    _check_dim(S, d)
    return bool(np.all(S.slack(d) >= -tol))


def contains_many(S, D, tol: float = TOL_GEO) -> np.ndarray:
    """Row-wise membership for a stack of vectors ``D`` (n x m)."""
    D = np.atleast_2d(np.asarray(D, dtype=float))
    if isinstance(S, GeneratorCone):
        return np.array([cone_contains(S, d, tol) for d in D], dtype=bool)
    _check_dim(S, D)
    return np.all(D @ S.A.T - S.b >= -tol, axis=1)


def cone_contains(gens: GeneratorCone, d, tol: float = TOL_LP) -> bool:
    """Decide ``d in cone(gens)`` by phase-1 feasibility of ``G^T lam = d, lam >= 0``."""
    d = as_vector(d)
    _check_dim(gens, d)
    if not np.any(np.abs(d) > tol):
        return True
    res = _simplex(
        c=np.zeros(gens.G.shape[0]),
        A_eq=gens.G.T,
        b_eq=d,
        tol=tol,
        phase_one_only=True,
    )
    return res.status == "optimal"


# ---------------------------------------------------------------------------
# Dense two-phase simplex with Bland's rule


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: np.ndarray | None
    value: float


def _pivot(T: np.ndarray, i: int, j: int):
    T[i] /= T[i, j]
    col = T[:, j].copy()
    col[i] = 0.0
    T -= np.outer(col, T[i])


def _bland(T: np.ndarray, basis: list[int], n_allowed: int, tol: float, max_iter: int) -> str:
    m = T.shape[0] - 1
    for _ in range(max_iter):
        reduced = T[-1, :n_allowed]
        entering = np.flatnonzero(reduced < -tol)
        if entering.size == 0:
            return "optimal"
        j = int(entering[0])
        col = T[:m, j]
        pos = np.flatnonzero(col > tol)
        if pos.size == 0:
            return "unbounded"
        ratios = T[pos, -1] / col[pos]
        best = ratios.min()
        ties = pos[ratios <= best + tol * (1.0 + abs(best))]
        i = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, i, j)
        basis[i] = j
    raise LPError("simplex iteration limit reached")


def _simplex(
    c,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    tol: float = TOL_LP,
    phase_one_only: bool = False,
    max_iter: int = 5000,
) -> LPResult:
    """Minimize ``c x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).reshape(-1)
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).reshape(-1)
    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq
    if m == 0:
        if np.any(c < -tol):
            return LPResult("unbounded", None, -math.inf)
        return LPResult("optimal", np.zeros(n), 0.0)

    # columns: x (n) | slacks (m_ub) | artificials
    A = np.zeros((m, n + m_ub))
    A[:m_ub, :n] = A_ub
    A[:m_ub, n:] = np.eye(m_ub)
    A[m_ub:, :n] = A_eq
    rhs = np.concatenate([b_ub, b_eq])
    neg = rhs < 0
    A[neg] *= -1
    rhs[neg] *= -1

    basis: list[int] = [-1] * m
    needs_art = []
    for i in range(m):
        if i < m_ub and not neg[i]:
            basis[i] = n + i
        else:
            needs_art.append(i)
    n_core = n + m_ub
    n_art = len(needs_art)
    T = np.zeros((m + 1, n_core + n_art + 1))
    T[:m, :n_core] = A
    T[:m, -1] = rhs
    for a, i in enumerate(needs_art):
        T[i, n_core + a] = 1.0
        basis[i] = n_core + a
        T[-1] -= T[i]
    T[-1, n_core:n_core + n_art] = 0.0

    status = _bland(T, basis, n_core + n_art, tol, max_iter)
    if status == "unbounded":
        raise LPError("phase-1 auxiliary objective reported unbounded")
    scale = 1.0 + float(np.abs(rhs).max(initial=0.0))
    if -T[-1, -1] > tol * scale:
        return LPResult("infeasible", None, math.nan)

    # drive artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n_core:
            nz = np.flatnonzero(np.abs(T[i, :n_core]) > tol)
            if nz.size == 0:
                continue
            j = int(nz[0])
            _pivot(T, i, j)
            basis[i] = j
        keep.append(i)
    T = np.vstack([T[keep][:, list(range(n_core)) + [-1]], np.zeros((1, n_core + 1))])
    basis = [basis[i] for i in keep]

    def point() -> np.ndarray:
        x = np.zeros(n_core)
        for r, j in enumerate(basis):
            x[j] = T[r, -1]
        return np.where(np.abs(x[:n]) <= tol, 0.0, x[:n])

    if phase_one_only:
        return LPResult("optimal", point(), 0.0)

    cost = np.zeros(n_core)
    cost[:n] = c
    T[-1, :n_core] = cost
    T[-1, -1] = 0.0
    for r, j in enumerate(basis):
        if cost[j] != 0.0:
            T[-1] -= cost[j] * T[r]
    status = _bland(T, basis, n_core, tol, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, -math.inf)
    x = point()
    return LPResult("optimal", x, float(c @ x))


@dataclass(frozen=True)
class LinearConstraint:
    """``coeffs . x (sense) rhs`` with sense one of ``<=``, ``>=``, ``==``."""

    coeffs: tuple
    sense: str
    rhs: float

    def __post_init__(self):
        if self.sense not in ("<=", ">=", "=="):
            raise ValueError(f"unknown constraint sense {self.sense!r}")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", float(self.rhs))


def _free_split(constraints: Sequence[LinearConstraint], n: int):
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for con in constraints:
        a = np.asarray(con.coeffs)
        if a.size != n:
            raise DimensionError("constraint length disagrees with the number of variables")
        row = np.concatenate([a, -a])
        if con.sense == "<=":
            ub_rows.append(row), ub_rhs.append(con.rhs)
        elif con.sense == ">=":
            ub_rows.append(-row), ub_rhs.append(-con.rhs)
        else:
            eq_rows.append(row), eq_rhs.append(con.rhs)
    return (
        np.array(ub_rows).reshape(-1, 2 * n),
        np.array(ub_rhs),
        np.array(eq_rows).reshape(-1, 2 * n),
        np.array(eq_rhs),
    )


def lp_feasible(
    constraints: Sequence[LinearConstraint], n_vars: int | None = None, tol: float = TOL_LP
) -> tuple[bool, np.ndarray | None]:
    """Phase-1 feasibility over free real variables.

    Returns ``(True, witness)`` or ``(False, None)``.  Bland's rule makes the
    witness a deterministic function of the input.
    """
    if n_vars is None:
        if not constraints:
            raise ValueError("n_vars is required for an empty constraint list")
        n_vars = len(constraints[0].coeffs)
    A_ub, b_ub, A_eq, b_eq = _free_split(constraints, n_vars)
    res = _simplex(np.zeros(2 * n_vars), A_ub, b_ub, A_eq, b_eq, tol=tol, phase_one_only=True)
    if res.status != "optimal":
        return False, None
    return True, res.x[:n_vars] - res.x[n_vars:]


def lp_maximize(
    objective, constraints: Sequence[LinearConstraint], tol: float = TOL_LP
) -> LPResult:
    """Maximize ``objective . x`` over free variables; used by the pointedness test."""
    obj = as_vector(objective, "objective")
    n = obj.size
    A_ub, b_ub, A_eq, b_eq = _free_split(constraints, n)
    res = _simplex(-np.concatenate([obj, -obj]), A_ub, b_ub, A_eq, b_eq, tol=tol)
    if res.status != "optimal":
        return LPResult(res.status, None, -res.value if res.status == "unbounded" else res.value)
    x = res.x[:n] - res.x[n:]
    return LPResult("optimal", x, float(obj @ x))


# ---------------------------------------------------------------------------
# Planar conversions


def _angle(v) -> float:
    a = math.atan2(v[1], v[0])
    return a + 2 * math.pi if a < 0 else a


def _unit(v) -> np.ndarray:
    return v / np.abs(v).max() + 0.0  # + 0.0 clears negative zeros


def generators_to_halfspaces_2d(gens: GeneratorCone, angle_tol: float = 1e-10) -> PolyhedralSet:
    """Exact halfspace description of a planar generator cone.

    Works by locating the widest angular gap between consecutive
    generators: a gap wider than pi leaves a pointed sector, a gap of
    exactly pi a halfplane (or a line), anything narrower covers the plane.
    """
    if not isinstance(gens, GeneratorCone):
        gens = GeneratorCone(gens)
    if gens.dim != 2:
        raise DimensionError("generators_to_halfspaces_2d needs planar generators")
    G = gens.G
    angles = np.array([_angle(g) for g in G])
    order = np.argsort(angles, kind="stable")
    a_sorted = angles[order]
    gaps = np.diff(np.append(a_sorted, a_sorted[0] + 2 * math.pi))
    g = int(np.argmax(gaps))
    widest = gaps[g]
    start = G[order[(g + 1) % len(order)]]  # first generator after the gap (ccw)
    end = G[order[g]]  # last generator before the gap
    pi = math.pi
    if widest < pi - angle_tol:
        raise ValueError("generators span the whole plane; no halfspace description exists")
    left_of_start = np.array([-start[1], start[0]])
    if widest > pi + angle_tol:
        right_of_end = np.array([end[1], -end[0]])
        normals = [_unit(left_of_start), _unit(right_of_end)]
        if widest > 2 * pi - angle_tol:  # all generators on one ray
            normals.append(_unit(start))
        return PolyhedralSet(np.array(normals), np.zeros(len(normals)), generators=G)
    # widest gap equals pi: halfplane unless nothing lies strictly inside the other side
    other = np.delete(gaps, g)
    if np.all(np.abs(other) <= angle_tol) or np.any(np.abs(other - pi) <= angle_tol):
        n = _unit(left_of_start)
        return PolyhedralSet(np.array([n, -n]), np.zeros(2), generators=G)
    return PolyhedralSet(_unit(left_of_start)[None, :], np.zeros(1), generators=G)


def as_polyhedral(S) -> PolyhedralSet:
    if isinstance(S, PolyhedralSet):
        return S
    if isinstance(S, GeneratorCone) and S.dim == 2:
        return generators_to_halfspaces_2d(S)
    raise DimensionError("halfspace form of a generator cone is only available in the plane")


def generators_of(S, tol: float = TOL_GEO) -> np.ndarray:
    """A generating set for a cone (possibly empty for ``{0}``).

    Uses recorded generators when present; planar halfspace cones are
    handled by testing boundary directions and normals for membership.
    """
    if isinstance(S, GeneratorCone):
        return S.G
    if S.generators is not None:
        return S.generators
    if not S.is_cone:
        raise NotAConeError("generators are only defined for cones")
    if S.dim != 2:
        raise DimensionError("generator recovery from halfspaces is planar only")
    cands = []
    for a in S.A:
        t = np.array([-a[1], a[0]])
        cands.extend([t, -t, a])
    out: list[np.ndarray] = []
    for v in cands:
        v = _unit(v)
        if contains(S, v, tol) and not any(np.allclose(v, w) for w in out):
            out.append(v)
    return np.array(out).reshape(-1, 2)


def subset_cone(S1, S2, tol: float = TOL_GEO) -> tuple[bool, np.ndarray | None]:
    """Generator-wise inclusion ``S1 ⊆ S2`` for cones; returns a failing generator."""
    for g in generators_of(S1, tol):
        if not contains(S2, g, tol):
            return False, g
    return True, None


def pointedness_pair(A, B, tol: float = TOL_GEO) -> tuple[bool, np.ndarray | None]:
    """Decide ``A ∩ (-B) = {0}`` for two cones.

    The intersection is itself a cone; it is nontrivial exactly when one of
    ``±d_i`` has a positive maximum over it within the box ``|d| <= 1``.
    Returns ``(True, None)`` or ``(False, witness)``.
    """
    A, B = as_polyhedral(A), as_polyhedral(B)
    if not (A.is_cone and B.is_cone):
        raise NotAConeError("pointedness_pair is defined for cones only")
    if A.dim != B.dim:
        raise DimensionError("cones of different dimension")
    m = A.dim
    cons = [LinearConstraint(a, ">=", 0.0) for a in A.A]
    cons += [LinearConstraint(-b, ">=", 0.0) for b in B.A]
    eye = np.eye(m)
    cons += [LinearConstraint(e, "<=", 1.0) for e in eye]
    cons += [LinearConstraint(e, ">=", -1.0) for e in eye]
    for i in range(m):
        for s in (1.0, -1.0):
            res = lp_maximize(s * eye[i], cons, tol=TOL_LP)
            if res.status == "optimal" and res.value > tol:
                return False, res.x
    return True, None
