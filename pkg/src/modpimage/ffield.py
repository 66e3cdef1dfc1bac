"""Arithmetic in F_q = F_p[x]/(f) with elements in the polynomial basis.

An element is a length-d coefficient vector, constant term first. Every
element also has an integer *code* ``sum(c_i * p**i)``; codes index the
lookup tables returned by :func:`field_tables`, which the enumeration-heavy
modules use instead of element objects.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
from sympy import isprime

from .config import FIELD_CAP
from .errors import CapacityError, DomainError, NonUnitError, ParameterError

# constant term first
DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
}


def _trim(poly: list[int]) -> list[int]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_mod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    """Remainder of a by the monic polynomial f, coefficients mod p."""
    a = [c % p for c in a]
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i]
        if c:
            shift = i - df
            for j, fj in enumerate(f):
                a[shift + j] = (a[shift + j] - c * fj) % p
    return a[:df] + [0] * max(0, df - len(a))


def _poly_divides(g: Sequence[int], f: Sequence[int], p: int) -> bool:
    # g monic
    r = list(f)
    dg = len(g) - 1
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] % p
        if c:
            for j, gj in enumerate(g):
                r[i - dg + j] = (r[i - dg + j] - c * gj) % p
    return not any(c % p for c in r[:dg])


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    d = len(modulus) - 1
    if d == 1:
        return True
    if modulus[0] % p == 0:
        return False
    for deg in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if _poly_divides(list(low) + [1], modulus, p):
                return False
    return True


def find_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree d in code order (constant term first)."""
    for code in range(p**d):
        low = [(code // p**i) % p for i in range(d)]
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise ParameterError(f"no irreducible polynomial of degree {d} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class FieldParams:
    p: int
    d: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "modulus", tuple(int(c) for c in self.modulus))
        if not isinstance(self.p, int) or self.p < 2 or not isprime(self.p):
            raise ParameterError(f"characteristic must be prime, got {self.p}")
        if not isinstance(self.d, int) or self.d < 1:
            raise ParameterError(f"extension degree must be >= 1, got {self.d}")
        if len(self.modulus) != self.d + 1:
            raise ParameterError(
                f"modulus must have degree {self.d} ({self.d + 1} coefficients), got {self.modulus}"
            )
        if any(not 0 <= c < self.p for c in self.modulus):
            raise ParameterError(f"modulus coefficients must lie in [0, {self.p})")
        if self.modulus[-1] != 1:
            raise ParameterError("modulus must be monic")
        if self.p**self.d > FIELD_CAP:
            raise CapacityError(f"q = {self.p}^{self.d} exceeds the field cap {FIELD_CAP}",
                                required=self.p**self.d, cap=FIELD_CAP)
        if not is_irreducible(self.modulus, self.p):
            raise ParameterError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.d

    @property
    def theorem_grade(self) -> bool:
        return self.q not in (2, 3, 5)

    def __str__(self):
        return f"F_{self.q}"

    def __repr__(self):
        return f"FieldParams(p={self.p}, d={self.d}, modulus={list(self.modulus)})"

    def zero(self) -> FqElem:
        return FqElem(self, (0,) * self.d)

    def one(self) -> FqElem:
        return FqElem(self, (1,) + (0,) * (self.d - 1))

    def gen(self) -> FqElem:
        """The class of x (equals the integer 0 or 1 reduction when d = 1)."""
        if self.d == 1:
            return self(-self.modulus[0])
        return FqElem(self, (0, 1) + (0,) * (self.d - 2))

    def element(self, code: int) -> FqElem:
        if not 0 <= code < self.q:
            raise DomainError(f"code {code} out of range for {self}")
        return FqElem(self, tuple((code // self.p**i) % self.p for i in range(self.d)))

    def __call__(self, value) -> FqElem:
        """Coerce an int (image of Z) or a coefficient sequence into the field."""
        if isinstance(value, FqElem):
            if value.params != self:
                raise ParameterError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FqElem(self, (value % self.p,) + (0,) * (self.d - 1))
        coeffs = tuple(int(c) for c in value)
        if len(coeffs) != self.d:
            raise ParameterError(f"expected {self.d} coefficients, got {len(coeffs)}")
        return FqElem(self, coeffs)

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> FieldParams:
        try:
            return cls(int(obj["p"]), int(obj["d"]), tuple(obj["modulus"]))
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed field parameters: {obj!r}") from exc


@functools.lru_cache(maxsize=None)
def gf(p: int, d: int = 1) -> FieldParams:
    """Field with the shipped default modulus (x for prime fields)."""
    if d == 1:
        return FieldParams(p, 1, (0, 1))
    modulus = DEFAULT_MODULI.get((p, d)) or find_irreducible(p, d)
    return FieldParams(p, d, modulus)


def field_of_order(q: int) -> FieldParams:
    for p in range(2, q + 1):
        if q % p == 0:
            d, r = 0, q
            while r % p == 0:
                r //= p
                d += 1
            if r != 1:
                break
            return gf(p, d)
    raise ParameterError(f"{q} is not a prime power")


@dataclass(frozen=True)
class FqElem:
    params: FieldParams
    coeffs: tuple[int, ...]
    code: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = self.params.p
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.params.d:
            raise ParameterError(f"expected {self.params.d} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < p for c in coeffs):
            raise ParameterError(f"coefficients must lie in [0, {p})")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "code", sum(c * p**i for i, c in enumerate(coeffs)))

    def __hash__(self):
        return hash((self.params.p, self.params.modulus, self.coeffs))

    def _check(self, other) -> FqElem:
        if isinstance(other, int):
            return self.params(other)
        if not isinstance(other, FqElem):
            return NotImplemented
        if other.params != self.params:
            raise ParameterError(f"field mismatch: {self.params!r} vs {other.params!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.params.p
        return FqElem(self.params, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.params.p
        return FqElem(self.params, tuple((-a) % p for a in self.coeffs))

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
        return fq_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return fq_mul(self, fq_inv(other))

    def __pow__(self, n: int):
        if n < 0:
            return fq_inv(self) ** (-n)
        result, base = self.params.one(), self
        while n:
            if n & 1:
                result = fq_mul(result, base)
            base = fq_mul(base, base)
            n >>= 1
        return result

    def inverse(self) -> FqElem:
        return fq_inv(self)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"FqElem({list(self.coeffs)})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) or "0"

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def fq_mul(a: FqElem, b: FqElem) -> FqElem:
    if a.params != b.params:
        raise ParameterError(f"field mismatch: {a.params!r} vs {b.params!r}")
    params = a.params
    p = params.p
    prod = [0] * (2 * params.d - 1)
    for i, ai in enumerate(a.coeffs):
        if ai:
            for j, bj in enumerate(b.coeffs):
                prod[i + j] += ai * bj
    return FqElem(params, tuple(_poly_mod(prod, params.modulus, p)))


def fq_inv(a: FqElem) -> FqElem:
    """Inverse via a^(q-2)."""
    if a.is_zero():
        raise NonUnitError("zero has no inverse in a field")
    return a ** (a.params.q - 2)


def fq_enumerate(params: FieldParams, cap: int = FIELD_CAP) -> list[FqElem]:
    """All q elements in code order: 0, 1, ..., i.e. lexicographic on the
    coefficient vector read from the top-degree coefficient down."""
    if params.q > cap:
        raise CapacityError(f"{params} has {params.q} elements, over the cap {cap}",
                            required=params.q, cap=cap)
    return [params.element(c) for c in range(params.q)]


@dataclass(frozen=True)
class UnitSubgroup:
    """Cyclic subgroup D of F_q^x: a stored generator plus its element set."""

    generator: FqElem
    elements: frozenset

    @property
    def params(self) -> FieldParams:
        return self.generator.params

    def __contains__(self, item) -> bool:
        return item in self.elements

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[FqElem]:
        return iter(sorted(self.elements, key=lambda e: e.code))

    @property
    def codes(self) -> frozenset[int]:
        return frozenset(e.code for e in self.elements)

    def to_json(self) -> list[int]:
        return self.generator.to_json()


def subgroup_of_units(params: FieldParams, generator: FqElem) -> UnitSubgroup:
    generator = params(generator)
    if generator.is_zero():
        raise DomainError("zero does not generate a subgroup of units")
    elems = {params.one()}
    x = generator
    while x not in elems:
        elems.add(x)
        x = x * generator
    return UnitSubgroup(generator, frozenset(elems))


def trivial_subgroup(params: FieldParams) -> UnitSubgroup:
    return subgroup_of_units(params, params.one())


def full_unit_group(params: FieldParams) -> UnitSubgroup:
    """F_q^x, generated by the first primitive element in code order."""
    for c in range(1, params.q):
        g = params.element(c)
        sub = subgroup_of_units(params, g)
        if len(sub) == params.q - 1:
            return sub
    raise AssertionError("F_q^x is cyclic")  # pragma: no cover


class FieldTables:
    """Dense lookup tables on element codes.

    ``add``, ``mul`` are (q, q) int arrays, ``neg`` and ``inv`` length q
    (``inv[0] == -1``). ``*_l`` are the same data as nested lists, which is
    faster than numpy for scalar indexing in Python loops.
    """

    def __init__(self, params: FieldParams):
        self.params = params
        q = params.q
        elems = fq_enumerate(params)
        p = params.p
        # addition is coefficient-wise, so do it on digit arrays
        digits = np.array([e.coeffs for e in elems], dtype=np.int64)
        weights = p ** np.arange(params.d, dtype=np.int64)
        self.add = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights).astype(np.int64)
        self.neg = (((-digits) % p) @ weights).astype(np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for i in range(q):
            for j in range(i, q):
                mul[i, j] = mul[j, i] = fq_mul(elems[i], elems[j]).code
        self.mul = mul
        inv = np.full(q, -1, dtype=np.int64)
        for i in range(1, q):
            inv[i] = int(np.nonzero(mul[i] == 1)[0][0])
        self.inv = inv
        self.sub = self.add[:, self.neg]
        self.add_l = self.add.tolist()
        self.sub_l = self.sub.tolist()
        self.mul_l = self.mul.tolist()
        self.neg_l = self.neg.tolist()
        self.inv_l = self.inv.tolist()
        self.q = q
        self.zero = 0
        self.one = 1 if q > 1 else 0

    def is_unit(self, code: int) -> bool:
        return code != 0


@functools.lru_cache(maxsize=32)
def field_tables(params: FieldParams) -> FieldTables:
    return FieldTables(params)


def f2_basis(params: FieldParams) -> list[FqElem]:
    """1, x, ..., x^(d-1): an F_p-basis of F_q in the polynomial basis."""
    return [params.element(params.p**i) for i in range(params.d)]


def fp_span(elems: Iterable[FqElem]) -> set[FqElem]:
    """The additive subgroup (= F_p-span) generated by elems."""
    elems = list(elems)
    if not elems:
        return set()
    params = elems[0].params
    span = {params.zero()}
    for e in elems:
        if e in span:
            continue
        span = {s + k * e for s in span for k in range(params.p)}
    return span
