"""2x2 matrices over F_q, T and W_2(F_q); the groups GL_2^D and the trace-0 module.

Two representations coexist:

* :class:`Mat2` holds element objects and is what the public API returns.
* "packed" matrices are 4-tuples of element codes ``(a, b, c, d)`` in
  row-major order, multiplied through the dense tables of the ring. Group
  closures and enumerations run on these.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from .config import enumeration_cap
from .errors import CapacityError, DomainError, ParameterError
from .ffield import FieldParams, UnitSubgroup, f2_basis, field_tables, trivial_subgroup
from .localalg import AlgebraParams, TElem, algebra_tables

Packed = tuple[int, int, int, int]


def ring_tables(params):
    if isinstance(params, FieldParams):
        return field_tables(params)
    if isinstance(params, AlgebraParams):
        return algebra_tables(params)
    return params.tables()


def residue_field(params) -> FieldParams:
    if isinstance(params, FieldParams):
        return params
    if isinstance(params, AlgebraParams):
        return params.field
    return params.field


@dataclass(frozen=True, eq=False)
class Mat2:
    """[[a, b], [c, d]] over a commutative ring.

    Equality and hashing look at the entries only, so a TraceZeroMat equals
    the plain Mat2 with the same entries.
    """

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        rings = {e.params for e in self.entries}
        if len(rings) != 1:
            raise ParameterError("matrix entries must lie in one ring")

    @property
    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    @property
    def ring(self):
        return self.a.params

    @classmethod
    def identity(cls, ring) -> Mat2:
        return cls(ring.one(), ring.zero(), ring.zero(), ring.one())

    @classmethod
    def scalar(cls, ring, lam) -> Mat2:
        z = ring.zero()
        lam = ring(lam)
        return cls(lam, z, z, lam)

    @classmethod
    def from_packed(cls, ring, codes: Sequence[int]) -> Mat2:
        return cls(*(ring.element(int(c)) for c in codes))

    def packed(self) -> Packed:
        return (self.a.code, self.b.code, self.c.code, self.d.code)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def is_invertible(self) -> bool:
        det = self.det()
        return det.is_unit() if hasattr(det, "is_unit") else not det.is_zero()

    def __mul__(self, other: Mat2) -> Mat2:
        if not isinstance(other, Mat2):
            return NotImplemented
        return Mat2(self.a * other.a + self.b * other.c,
                    self.a * other.b + self.b * other.d,
                    self.c * other.a + self.d * other.c,
                    self.c * other.b + self.d * other.d)

    def __add__(self, other: Mat2) -> Mat2:
        return Mat2(*(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: Mat2) -> Mat2:
        return Mat2(*(x - y for x, y in zip(self.entries, other.entries)))

    def scale(self, lam) -> Mat2:
        return Mat2(*(lam * x for x in self.entries))

    def inverse(self) -> Mat2:
        if not self.is_invertible():
            raise DomainError("matrix is singular")
        u = self.det().inverse()
        return Mat2(u * self.d, -(u * self.b), -(u * self.c), u * self.a)

    def map(self, fn: Callable) -> Mat2:
        return Mat2(*(fn(x) for x in self.entries))

    def reduce(self) -> Mat2:
        """Entry-wise reduction to the residue field."""
        return self.map(lambda x: x.reduce())

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries)

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

    def to_json(self) -> list:
        return [x.to_json() for x in self.entries]


class TraceZeroMat(Mat2):
    """A trace-0 matrix (element of M_2^0(F_q) or of M_2^0(m_T))."""

    def __post_init__(self):
        super().__post_init__()
        if not self.trace().is_zero():
            raise DomainError(f"matrix {self} has nonzero trace")

    @classmethod
    def of(cls, m: Mat2) -> TraceZeroMat:
        return cls(*m.entries)

    def in_ideal(self) -> bool:
        return all(getattr(x, "in_ideal", lambda: x.is_zero())() for x in self.entries)


def embed_constant(g: Mat2, algebra: AlgebraParams) -> Mat2:
    """View a matrix over F_q as a constant matrix over T."""
    if g.ring != algebra.field:
        raise ParameterError("matrix is not over the residue field of the algebra")
    return g.map(algebra.const)


@dataclass(frozen=True)
class GroupSpec:
    """GL_2^D over a field or algebra: det(g) in D (D embedded as constants)."""

    ring: object
    D: UnitSubgroup

    def __post_init__(self):
        if self.D.params != residue_field(self.ring):
            raise ParameterError("D must be a subgroup of the residue field's units")

    @property
    def field(self) -> FieldParams:
        return residue_field(self.ring)

    def det_codes(self) -> frozenset[int]:
        # constants have the same code in F_q and in T
        return self.D.codes

    def __contains__(self, g: Mat2) -> bool:
        if g.ring != self.ring:
            return False
        return g.det().code in self.det_codes()

    def order(self) -> int:
        q = self.field.q
        base = q * (q - 1) * (q + 1) * len(self.D)
        if isinstance(self.ring, AlgebraParams):
            base *= q ** (3 * self.ring.m)
        return base

    def residual(self) -> GroupSpec:
        return GroupSpec(self.field, self.D)


def sl2(ring) -> GroupSpec:
    return GroupSpec(ring, trivial_subgroup(residue_field(ring)))


# -- packed arithmetic ---------------------------------------------------------

def pmul(R, A: Packed, B: Packed) -> Packed:
    add, mul = R.add_l, R.mul_l
    a, b, c, d = A
    e, f, g, h = B
    return (add[mul[a][e]][mul[b][g]], add[mul[a][f]][mul[b][h]],
            add[mul[c][e]][mul[d][g]], add[mul[c][f]][mul[d][h]])


def pdet(R, A: Packed) -> int:
    a, b, c, d = A
    return R.sub_l[R.mul_l[a][d]][R.mul_l[b][c]]


def ptrace(R, A: Packed) -> int:
    return R.add_l[A[0]][A[3]]


def pinv(R, A: Packed) -> Packed:
    u = R.inv_l[pdet(R, A)]
    if u < 0:
        raise DomainError("matrix is singular")
    mul, neg = R.mul_l, R.neg_l
    a, b, c, d = A
    return (mul[u][d], neg[mul[u][b]], neg[mul[u][c]], mul[u][a])


def pconj(R, g: Packed, x: Packed, g_inv: Packed | None = None) -> Packed:
    if g_inv is None:
        g_inv = pinv(R, g)
    return pmul(R, pmul(R, g, x), g_inv)


def pidentity(R) -> Packed:
    return (R.one, R.zero, R.zero, R.one)


# -- enumeration ---------------------------------------------------------------

def _check_cap(required: int, cap: int, what: str):
    if required > cap:
        raise CapacityError(f"{what} needs {required} elements, over the cap {cap}",
                            required=required, cap=cap)


def gl2d_codes(spec: GroupSpec, cap: int | None = None) -> np.ndarray:
    """Packed GL_2^D(F_q) as an (N, 4) array, lexicographic in (a, b, c, d)."""
    if not isinstance(spec.ring, FieldParams):
        raise ParameterError("gl2d_codes enumerates over the residue field only")
    cap = enumeration_cap(cap)
    q = spec.field.q
    _check_cap(q**4, cap, "enumerating 2x2 matrices")
    ft = field_tables(spec.field)
    grid = np.indices((q, q, q, q), dtype=np.int64).reshape(4, -1).T
    det = ft.sub[ft.mul[grid[:, 0], grid[:, 3]], ft.mul[grid[:, 1], grid[:, 2]]]
    keep = np.isin(det, sorted(spec.det_codes()))
    return grid[keep]


def enumerate_gl2d(spec: GroupSpec, cap: int | None = None) -> list[Mat2]:
    F = spec.field
    return [Mat2.from_packed(F, row) for row in gl2d_codes(spec, cap).tolist()]


def tz_encode(q: int, a: int, b: int, c: int) -> int:
    return a + q * b + q * q * c


def tz_decode(q: int, code: int) -> tuple[int, int, int]:
    return code % q, (code // q) % q, code // (q * q)


def tz_packed(F: FieldParams, code: int) -> Packed:
    q = F.q
    a, b, c = tz_decode(q, code)
    return (a, b, c, field_tables(F).neg_l[a])


def tz_from_packed(F: FieldParams, A: Packed) -> int:
    return tz_encode(F.q, A[0], A[1], A[2])


def enumerate_trace_zero(params, cap: int | None = None):
    """M_2^0(F_q) as a list, or M_2^0(m_T) as a lazy iterator.

    Over F_q the order is lexicographic in (a, b, c) with d = -a. Over T the
    matrices are sum_k A_k X_k, ordered lexicographically in (A_1, ..., A_m).
    """
    cap = enumeration_cap(cap)
    if isinstance(params, FieldParams):
        q = params.q
        _check_cap(q**3, cap, "enumerating M_2^0")
        return [TraceZeroMat.of(Mat2.from_packed(params, tz_packed(params, tz_encode(q, a, b, c))))
                for a, b, c in itertools.product(range(q), repeat=3)]
    if isinstance(params, AlgebraParams):
        _check_cap(params.q**3, cap, "enumerating M_2^0 per coordinate")
        return _iter_trace_zero_ideal(params)
    raise ParameterError(f"unsupported ring {params!r}")


def _iter_trace_zero_ideal(T: AlgebraParams) -> Iterator[TraceZeroMat]:
    F = T.field
    base = enumerate_trace_zero(F)
    for combo in itertools.product(base, repeat=T.m):
        yield ideal_matrix(T, combo)


def ideal_matrix(T: AlgebraParams, coords: Sequence[Mat2]) -> TraceZeroMat:
    """sum_k A_k X_k for A_k over F_q."""
    if len(coords) != T.m:
        raise ParameterError(f"need {T.m} coordinate matrices")
    z = T.field.zero()
    entries = []
    for idx in range(4):
        eps = tuple(A.entries[idx] for A in coords)
        entries.append(TElem(T, z, eps))
    return TraceZeroMat(*entries)


def ideal_coordinates(mu: Mat2) -> list[Mat2]:
    """Inverse of :func:`ideal_matrix`: the F_q-matrices A_k with mu = sum A_k X_k."""
    T = mu.ring
    if any(not x.in_ideal() for x in mu.entries):
        raise DomainError("matrix entries are not in the maximal ideal")
    return [Mat2(*(x.eps[k] for x in mu.entries)) for k in range(T.m)]


def conj(g: Mat2, mu: Mat2) -> TraceZeroMat:
    """g mu g^-1, with g over F_q and mu over F_q or T."""
    if not g.is_invertible():
        raise DomainError("conjugating matrix is singular")
    if mu.ring != g.ring:
        if isinstance(mu.ring, AlgebraParams) and mu.ring.field == g.ring:
            g = embed_constant(g, mu.ring)
        else:
            raise ParameterError("matrices live over unrelated rings")
    return TraceZeroMat.of(g * mu * g.inverse())


def embed_unipotent(mu: Mat2, h: Mat2) -> Mat2:
    """(1 + mu) h in GL_2(T) for mu in M_2^0(m_T), h over F_q."""
    T = mu.ring
    if not isinstance(T, AlgebraParams):
        raise ParameterError("mu must be a matrix over the local algebra")
    if not mu.trace().is_zero():
        raise DomainError("mu must have trace 0")
    return (Mat2.identity(T) + mu) * embed_constant(h, T)


# -- closures ------------------------------------------------------------------

def closure(gens: Iterable[Hashable], mul: Callable, identity: Hashable,
            cap: int | None = None) -> set:
    """Multiplicative closure of gens together with identity (a group when finite)."""
    cap = enumeration_cap(cap)
    gens = list(dict.fromkeys(gens))
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapacityError(f"closure exceeded the cap {cap}", required=None, cap=cap)
                queue.append(y)
    return seen


def packed_closure(R, gens: Iterable[Packed], cap: int | None = None) -> set[Packed]:
    return closure(gens, lambda x, y: pmul(R, x, y), pidentity(R), cap)


def group_closure(gens: Iterable[Mat2], cap: int | None = None) -> frozenset[Mat2]:
    gens = list(gens)
    if not gens:
        raise ParameterError("need at least one generator to know the ring")
    ring = gens[0].ring
    if any(g.ring != ring for g in gens):
        raise ParameterError("generators live over different rings")
    if not all(g.is_invertible() for g in gens):
        raise DomainError("generators must be invertible")
    R = ring_tables(ring)
    packed = packed_closure(R, (g.packed() for g in gens), cap)
    return frozenset(Mat2.from_packed(ring, x) for x in packed)


def standard_generators(spec: GroupSpec) -> list[Mat2]:
    """Elementary matrices over an F_p-basis of F_q plus diag(delta, 1) for D = <delta>.

    Elementary matrices generate SL_2 over a field; the diagonal one adds the
    determinant subgroup.
    """
    F = spec.field
    ring = spec.ring
    lift = (lambda x: x) if ring == F else ring.const
    one, zero = F.one(), F.zero()
    gens = []
    for b in f2_basis(F):
        gens.append(Mat2(one, b, zero, one))
        gens.append(Mat2(one, zero, b, one))
    if len(spec.D) > 1:
        gens.append(Mat2(spec.D.generator, zero, zero, one))
    return [g.map(lift) for g in gens]
