"""The square-zero local algebra T = F_q[X_1..X_m]/(X_i X_j).

Elements are written c0 + eps_1 X_1 + ... + eps_m X_m in the fixed ordered
basis {1, X_1, ..., X_m}. Codes: ``sum(coord_i.code * q**i)`` with the
constant coordinate at i = 0.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import enumeration_cap
from .errors import CapacityError, DomainError, NonUnitError, ParameterError
from .ffield import FieldParams, FqElem, field_tables, fq_inv

TABLE_LIMIT = 1024


@dataclass(frozen=True)
class AlgebraParams:
    field: FieldParams
    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 0:
            raise ParameterError(f"m must be a non-negative integer, got {self.m}")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def dim(self) -> int:
        return self.m + 1

    @property
    def size(self) -> int:
        return self.q**self.dim

    def __str__(self):
        return f"{self.field}[X1..X{self.m}]/(XiXj)"

    def zero(self) -> TElem:
        z = self.field.zero()
        return TElem(self, z, (z,) * self.m)

    def one(self) -> TElem:
        z = self.field.zero()
        return TElem(self, self.field.one(), (z,) * self.m)

    def X(self, i: int) -> TElem:
        """The generator X_i, 1-based like the notation."""
        if not 1 <= i <= self.m:
            raise DomainError(f"X_{i} does not exist for m={self.m}")
        F = self.field
        eps = tuple(F.one() if k == i - 1 else F.zero() for k in range(self.m))
        return TElem(self, F.zero(), eps)

    def const(self, a) -> TElem:
        a = self.field(a)
        return TElem(self, a, (self.field.zero(),) * self.m)

    def __call__(self, value) -> TElem:
        if isinstance(value, TElem):
            if value.params != self:
                raise ParameterError("element belongs to a different algebra")
            return value
        if isinstance(value, (int, FqElem)):
            return self.const(value)
        coords = list(value)
        if len(coords) != self.dim:
            raise ParameterError(f"expected {self.dim} coordinates, got {len(coords)}")
        coords = [self.field(c) for c in coords]
        return TElem(self, coords[0], tuple(coords[1:]))

    def element(self, code: int) -> TElem:
        q = self.q
        if not 0 <= code < self.size:
            raise DomainError(f"code {code} out of range for {self}")
        coords = [self.field.element((code // q**i) % q) for i in range(self.dim)]
        return TElem(self, coords[0], tuple(coords[1:]))

    def elements(self, cap: int | None = None) -> list[TElem]:
        cap = enumeration_cap(cap)
        if self.size > cap:
            raise CapacityError(f"{self} has {self.size} elements, over the cap {cap}",
                                required=self.size, cap=cap)
        return [self.element(c) for c in range(self.size)]


@dataclass(frozen=True)
class TElem:
    params: AlgebraParams
    c0: FqElem
    eps: tuple[FqElem, ...]
    code: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        F = self.params.field
        eps = tuple(self.eps)
        if len(eps) != self.params.m:
            raise ParameterError(f"expected {self.params.m} infinitesimal coordinates, got {len(eps)}")
        if self.c0.params != F or any(e.params != F for e in eps):
            raise ParameterError("coordinates must lie in the algebra's residue field")
        object.__setattr__(self, "eps", eps)
        q = F.q
        code = self.c0.code + sum(e.code * q ** (i + 1) for i, e in enumerate(eps))
        object.__setattr__(self, "code", code)

    def __hash__(self):
        return hash((self.params, self.c0.coeffs, tuple(e.coeffs for e in self.eps)))

    @property
    def coords(self) -> tuple[FqElem, ...]:
        return (self.c0,) + self.eps

    def reduce(self) -> FqElem:
        """Image under T -> T/m_T = F_q."""
        return self.c0

    def is_unit(self) -> bool:
        return not self.c0.is_zero()

    def in_ideal(self) -> bool:
        return self.c0.is_zero()

    def _check(self, other):
        if isinstance(other, (int, FqElem)):
            return self.params.const(other)
        if not isinstance(other, TElem):
            return NotImplemented
        if other.params != self.params:
            raise ParameterError(f"algebra mismatch: {self.params} vs {other.params}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return TElem(self.params, self.c0 + other.c0,
                     tuple(a + b for a, b in zip(self.eps, other.eps)))

    __radd__ = __add__

    def __neg__(self):
        return TElem(self.params, -self.c0, tuple(-a for a in self.eps))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return t_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return t_mul(self, t_inv(other))

    def inverse(self) -> TElem:
        return t_inv(self)

    def is_zero(self) -> bool:
        return self.c0.is_zero() and all(e.is_zero() for e in self.eps)

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        parts = []
        if not self.c0.is_zero():
            parts.append(str(self.c0))
        for i, e in enumerate(self.eps, 1):
            if e.is_zero():
                continue
            s = str(e)
            parts.append(f"X{i}" if s == "1" else f"({s})X{i}")
        return " + ".join(parts) or "0"

    def to_json(self) -> list[list[int]]:
        return [c.to_json() for c in self.coords]


def t_mul(a: TElem, b: TElem) -> TElem:
    if a.params != b.params:
        raise ParameterError(f"algebra mismatch: {a.params} vs {b.params}")
    # products X_i X_j vanish, so only the cross terms with a constant survive
    eps = tuple(a.c0 * be + ae * b.c0 for ae, be in zip(a.eps, b.eps))
    return TElem(a.params, a.c0 * b.c0, eps)


def t_inv(a: TElem) -> TElem:
    if a.c0.is_zero():
        raise NonUnitError(f"{a} lies in the maximal ideal and is not invertible")
    u = fq_inv(a.c0)
    u2 = u * u
    return TElem(a.params, u, tuple(-(u2 * e) for e in a.eps))


class AlgebraTables:
    """Code-level tables for T, same layout as :class:`ffield.FieldTables`."""

    def __init__(self, params: AlgebraParams):
        if params.size > TABLE_LIMIT:
            raise CapacityError(f"{params} too large for dense tables",
                                required=params.size, cap=TABLE_LIMIT)
        self.params = params
        ft = field_tables(params.field)
        q, n, dim = params.q, params.size, params.dim
        codes = np.arange(n, dtype=np.int64)
        coords = np.stack([(codes // q**i) % q for i in range(dim)], axis=1)
        weights = q ** np.arange(dim, dtype=np.int64)
        A = coords[:, None, :]
        B = coords[None, :, :]
        self.add = (ft.add[A, B] @ weights).astype(np.int64)
        self.neg = (ft.neg[coords] @ weights).astype(np.int64)
        c0 = ft.mul[A[..., 0], B[..., 0]]
        prod = [c0]
        for i in range(1, dim):
            prod.append(ft.add[ft.mul[A[..., 0], B[..., i]], ft.mul[A[..., i], B[..., 0]]])
        self.mul = (np.stack(prod, axis=-1) @ weights).astype(np.int64)
        inv = np.full(n, -1, dtype=np.int64)
        for i in range(n):
            if coords[i, 0] != 0:
                inv[i] = int(np.nonzero(self.mul[i] == 1)[0][0])
        self.inv = inv
        self.sub = self.add[:, self.neg]
        self.add_l = self.add.tolist()
        self.sub_l = self.sub.tolist()
        self.mul_l = self.mul.tolist()
        self.neg_l = self.neg.tolist()
        self.inv_l = self.inv.tolist()
        self.q = n
        self.residue_q = q
        self.zero = 0
        self.one = 1

    def is_unit(self, code: int) -> bool:
        return code % self.residue_q != 0

    def reduce(self, code: int) -> int:
        return code % self.residue_q


@functools.lru_cache(maxsize=32)
def algebra_tables(params: AlgebraParams) -> AlgebraTables:
    return AlgebraTables(params)


class FqEchelon:
    """Reduced row echelon basis of an F_q-subspace of F_q^n (vectors as code lists)."""

    def __init__(self, params: FieldParams, n: int):
        self.ft = field_tables(params)
        self.n = n
        self.rows: dict[int, list[int]] = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[int]) -> list[int]:
        ft = self.ft
        v = list(v)
        for piv, row in self.rows.items():
            c = v[piv]
            if c:
                v = [ft.sub_l[a][ft.mul_l[c][b]] for a, b in zip(v, row)]
        return v

    def add(self, v: Sequence[int]) -> bool:
        """Insert v; returns False if it was already in the span."""
        ft = self.ft
        v = self.reduce(v)
        piv = next((i for i, c in enumerate(v) if c), None)
        if piv is None:
            return False
        inv = ft.inv_l[v[piv]]
        v = [ft.mul_l[inv][c] for c in v]
        for k, row in list(self.rows.items()):
            c = row[piv]
            if c:
                self.rows[k] = [ft.sub_l[a][ft.mul_l[c][b]] for a, b in zip(row, v)]
        self.rows[piv] = v
        return True

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def basis(self) -> list[list[int]]:
        return [self.rows[k] for k in sorted(self.rows)]

    def span(self) -> Iterable[list[int]]:
        ft = self.ft
        basis = self.basis()
        for coeffs in itertools.product(range(ft.q), repeat=len(basis)):
            v = [0] * self.n
            for c, row in zip(coeffs, basis):
                if c:
                    v = [ft.add_l[a][ft.mul_l[c][b]] for a, b in zip(v, row)]
            yield v


@dataclass(frozen=True)
class Subalgebra:
    params: AlgebraParams
    elements: frozenset
    dim: int
    basis: tuple

    def __contains__(self, item):
        return item in self.elements

    def __len__(self):
        return len(self.elements)

    @property
    def is_everything(self) -> bool:
        return self.dim == self.params.dim


def subalgebra_generated(elems: Iterable[TElem], params: AlgebraParams | None = None,
                         cap: int | None = None) -> Subalgebra:
    """Smallest F_q-subalgebra (with 1) of T containing elems."""
    elems = list(elems)
    if params is None:
        if not elems:
            raise ParameterError("cannot infer the algebra from an empty generator set")
        params = elems[0].params
    if any(e.params != params for e in elems):
        raise ParameterError("generators live in different algebras")
    cap = enumeration_cap(cap)
    if params.size > cap:
        raise CapacityError(f"{params} has {params.size} elements, over the cap {cap}",
                            required=params.size, cap=cap)
    ech = FqEchelon(params.field, params.dim)
    todo = [params.one()] + elems
    for e in todo:
        ech.add([c.code for c in e.coords])
    F = params.field
    # close the span under multiplication
    changed = True
    while changed:
        changed = False
        basis = [params([F.element(c) for c in row]) for row in ech.basis()]
        for a, b in itertools.combinations_with_replacement(basis, 2):
            if ech.add([c.code for c in t_mul(a, b).coords]):
                changed = True
    basis = tuple(params([F.element(c) for c in row]) for row in ech.basis())
    members = frozenset(params([F.element(c) for c in v]) for v in ech.span())
    return Subalgebra(params, members, ech.dim, basis)
