"""Length-2 Witt vectors W_2(F_q) as the Galois ring (Z/p^2)[x]/(f~).

f~ is the field modulus with its coefficients read in Z/p^2; a monic lift of
an irreducible polynomial mod p is basic irreducible, so no Hensel step is
needed.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from ..errors import CapacityError, DomainError, NonUnitError, ParameterError
from ..ffield import FieldParams, FqElem, _poly_mod, fq_inv


@dataclass(frozen=True)
class GaloisRingParams:
    field: FieldParams

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def modulus(self) -> int:
        return self.field.p ** 2

    @property
    def size(self) -> int:
        return self.modulus ** self.field.d

    def __str__(self):
        return f"W2({self.field})"

    def zero(self) -> GRElem:
        return GRElem(self, (0,) * self.field.d)

    def one(self) -> GRElem:
        return GRElem(self, (1,) + (0,) * (self.field.d - 1))

    def element(self, code: int) -> GRElem:
        n = self.modulus
        if not 0 <= code < self.size:
            raise DomainError(f"code {code} out of range for {self}")
        return GRElem(self, tuple((code // n**i) % n for i in range(self.field.d)))

    def __call__(self, value) -> GRElem:
        if isinstance(value, GRElem):
            return value
        if isinstance(value, int):
            return GRElem(self, (value % self.modulus,) + (0,) * (self.field.d - 1))
        return GRElem(self, tuple(int(c) % self.modulus for c in value))

    def lift(self, a: FqElem) -> GRElem:
        """Coefficient-wise lift with digits in [0, p)."""
        return GRElem(self, a.coeffs)

    def tables(self):
        return gr_tables(self)


@dataclass(frozen=True)
class GRElem:
    params: GaloisRingParams
    coeffs: tuple[int, ...]
    code: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.params.modulus
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.params.field.d or any(not 0 <= c < n for c in coeffs):
            raise ParameterError(f"bad Galois ring coefficients {coeffs}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "code", sum(c * n**i for i, c in enumerate(coeffs)))

    def __hash__(self):
        return hash((self.params, self.coeffs))

    def _other(self, other):
        if isinstance(other, int):
            return self.params(other)
        if not isinstance(other, GRElem) or other.params != self.params:
            raise ParameterError("Galois ring mismatch")
        return other

    def __add__(self, other):
        other = self._other(other)
        n = self.params.modulus
        return GRElem(self.params, tuple((a + b) % n for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        n = self.params.modulus
        return GRElem(self.params, tuple((-a) % n for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __mul__(self, other):
        other = self._other(other)
        d = self.params.field.d
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return GRElem(self.params, tuple(_poly_mod(prod, self.params.field.modulus, self.params.modulus)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result, base = self.params.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def reduce(self) -> FqElem:
        p = self.params.p
        return FqElem(self.params.field, tuple(c % p for c in self.coeffs))

    def is_unit(self) -> bool:
        return not self.reduce().is_zero()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse(self) -> GRElem:
        if not self.is_unit():
            raise NonUnitError(f"{self} is not a unit of {self.params}")
        b = self.params.lift(fq_inv(self.reduce()))
        # one Newton step doubles the p-adic precision: mod p -> mod p^2
        return b * (self.params(2) - self * b)

    def __str__(self):
        return "[" + ",".join(map(str, self.coeffs)) + "]"


def gr_teichmuller(a: FqElem, params: GaloisRingParams | None = None) -> GRElem:
    """The multiplicative lift: (any lift of a)^q."""
    if params is None:
        params = GaloisRingParams(a.params)
    return params.lift(a) ** a.params.q


class GaloisRingTables:
    def __init__(self, params: GaloisRingParams):
        if params.size > 1024:
            raise CapacityError("Galois ring too large for dense tables", required=params.size, cap=1024)
        n = params.size
        elems = [params.element(c) for c in range(n)]
        add = np.zeros((n, n), dtype=np.int64)
        mul = np.zeros((n, n), dtype=np.int64)
        for i, a in enumerate(elems):
            for j in range(i, n):
                b = elems[j]
                add[i, j] = add[j, i] = (a + b).code
                mul[i, j] = mul[j, i] = (a * b).code
        self.params = params
        self.add, self.mul = add, mul
        self.neg = np.array([(-a).code for a in elems], dtype=np.int64)
        self.inv = np.array([a.inverse().code if a.is_unit() else -1 for a in elems], dtype=np.int64)
        self.sub = self.add[:, self.neg]
        self.add_l, self.mul_l, self.sub_l = add.tolist(), mul.tolist(), self.sub.tolist()
        self.neg_l, self.inv_l = self.neg.tolist(), self.inv.tolist()
        self.q = n
        self.zero, self.one = 0, 1
        self.reduce_l = [elems[c].reduce().code for c in range(n)]

    def is_unit(self, code: int) -> bool:
        return self.inv_l[code] >= 0


@functools.lru_cache(maxsize=16)
def gr_tables(params: GaloisRingParams) -> GaloisRingTables:
    return GaloisRingTables(params)
