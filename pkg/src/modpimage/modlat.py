"""F_p[GL_2^D(F_q)]-submodules of M_2^0(F_q)^m under conjugation.

A tuple (mu_1, ..., mu_m) of trace-0 matrices is packed into one integer
``sum(tz_k * q**(3k))`` where ``tz_k = a + q b + q^2 c`` encodes
mu_k = [[a, b], [c, -a]]. Because q = p^d, the base-p digits of the packed
integer are exactly the F_p-coordinates of the tuple, so submodules are
handled as F_p-subspaces of F_p^(3dm).
"""

from __future__ import annotations

import functools
import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import enumeration_cap
from .errors import CapacityError, ContractError, DomainError, ParameterError, TheoremViolation
from .ffield import FieldParams, FqElem, f2_basis, field_tables, fp_span
from .matgrp import (
    GroupSpec, Mat2, TraceZeroMat, gl2d_codes, pconj, pinv, sl2, standard_generators,
    tz_decode, tz_encode, tz_from_packed, tz_packed,
)


class ModuleSpace:
    """The ambient M_2^0(F_q)^m with the conjugation action of a group spec."""

    def __init__(self, spec: GroupSpec, m: int):
        if not isinstance(spec.ring, FieldParams):
            raise ParameterError("the acting group must be over F_q")
        if m < 1:
            raise ParameterError("need at least one coordinate")
        self.spec = spec
        self.field = spec.field
        self.m = m
        self.p = self.field.p
        self.q = self.field.q
        self.q3 = self.q**3
        self.size = self.q3**m
        self.ndigits = 3 * self.field.d * m
        self.ft = field_tables(self.field)
        self.gens = [g.packed() for g in standard_generators(spec)]
        self.gen_maps = [self._conj_map(g) for g in self.gens]

    def _conj_map(self, g) -> np.ndarray:
        R, F = self.ft, self.field
        g_inv = pinv(R, g)
        return np.array([tz_from_packed(F, pconj(R, g, tz_packed(F, c), g_inv))
                         for c in range(self.q3)], dtype=np.int64)

    @functools.cached_property
    def group_maps(self) -> np.ndarray:
        """Conjugation maps on M_2^0(F_q) for every group element, shape (|G|, q^3)."""
        rows = gl2d_codes(self.spec).tolist()
        return np.stack([self._conj_map(tuple(g)) for g in rows])

    # -- coordinates -----------------------------------------------------------

    def split(self, code: int) -> list[int]:
        return [(code // self.q3**k) % self.q3 for k in range(self.m)]

    def join(self, parts: Sequence[int]) -> int:
        return sum(int(c) * self.q3**k for k, c in enumerate(parts))

    def split_array(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return np.stack([(codes // self.q3**k) % self.q3 for k in range(self.m)], axis=-1)

    def join_array(self, parts: np.ndarray) -> np.ndarray:
        w = self.q3 ** np.arange(self.m, dtype=np.int64)
        return parts @ w

    def to_vec(self, code: int) -> list[int]:
        p = self.p
        return [(code // p**i) % p for i in range(self.ndigits)]

    def from_vec(self, vec: Sequence[int]) -> int:
        p = self.p
        return sum(int(c) * p**i for i, c in enumerate(vec))

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        return self.from_vec([(a + b) % self.p for a, b in zip(self.to_vec(x), self.to_vec(y))])

    def add_array(self, x: np.ndarray, y) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(x, y)
        p = self.p
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        xx, yy = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        for i in range(self.ndigits):
            out += (((xx // p**i) % p + (yy // p**i) % p) % p) * p**i
        return out

    def act(self, cmap: np.ndarray, code: int) -> int:
        return self.join([int(cmap[c]) for c in self.split(code)])

    def act_array(self, cmap: np.ndarray, codes: np.ndarray) -> np.ndarray:
        return self.join_array(cmap[self.split_array(codes)])

    def scale(self, lam: int, code: int) -> int:
        """Multiply every matrix entry by the field element with code lam."""
        mul = self.ft.mul_l
        out = []
        for c in self.split(code):
            a, b, cc = tz_decode(self.q, c)
            out.append(tz_encode(self.q, mul[lam][a], mul[lam][b], mul[lam][cc]))
        return self.join(out)

    def is_scalar_tz(self, c: int) -> bool:
        a, b, cc = tz_decode(self.q, c)
        return b == 0 and cc == 0 and self.ft.neg_l[a] == a

    def scalar_tz(self, lam: FqElem) -> int:
        return tz_encode(self.q, lam.code, 0, 0)

    def matrices(self, code: int) -> tuple[TraceZeroMat, ...]:
        F = self.field
        return tuple(TraceZeroMat.of(Mat2.from_packed(F, tz_packed(F, c))) for c in self.split(code))

    def encode(self, mats: Sequence[Mat2]) -> int:
        if len(mats) != self.m:
            raise ParameterError(f"expected {self.m} matrices")
        parts = []
        for A in mats:
            if A.ring != self.field or not A.trace().is_zero():
                raise DomainError("coordinates must be trace-0 matrices over F_q")
            parts.append(tz_from_packed(self.field, A.packed()))
        return self.join(parts)


@functools.lru_cache(maxsize=64)
def module_space(spec: GroupSpec, m: int) -> ModuleSpace:
    return ModuleSpace(spec, m)


class FpEchelon:
    """Row echelon basis over F_p, vectors given as packed integers."""

    def __init__(self, space: ModuleSpace):
        self.space = space
        self.p = space.p
        self.rows: dict[int, list[int]] = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, v: list[int]) -> list[int]:
        p = self.p
        for piv, row in self.rows.items():
            c = v[piv]
            if c:
                v = [(a - c * b) % p for a, b in zip(v, row)]
        return v

    def add(self, code: int) -> bool:
        v = self._reduce(self.space.to_vec(code))
        piv = next((i for i, c in enumerate(v) if c), None)
        if piv is None:
            return False
        inv = pow(v[piv], -1, self.p)
        v = [(c * inv) % self.p for c in v]
        for k, row in list(self.rows.items()):
            c = row[piv]
            if c:
                self.rows[k] = [(a - c * b) % self.p for a, b in zip(row, v)]
        self.rows[piv] = v
        return True

    def span_codes(self, cap: int) -> np.ndarray:
        size = self.p**self.dim
        if size > cap:
            raise CapacityError(f"submodule has {size} elements, over the cap {cap}",
                                required=size, cap=cap)
        codes = np.zeros(1, dtype=np.int64)
        for row in self.rows.values():
            r = self.space.from_vec(row)
            multiples = [0]
            for _ in range(self.p - 1):
                multiples.append(self.space.add(multiples[-1], r))
            codes = np.unique(np.concatenate(
                [self.space.add_array(codes, np.int64(mlt)) for mlt in multiples]))
        return codes


@dataclass(frozen=True, eq=False)
class SubmoduleSet:
    """An explicit submodule: sorted packed codes plus the ambient description."""

    space: ModuleSpace = field(repr=False)
    codes: np.ndarray = field(repr=False)
    elements: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        codes = np.unique(np.asarray(self.codes, dtype=np.int64))
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "elements", frozenset(codes.tolist()))

    def __repr__(self):
        return f"SubmoduleSet(m={self.space.m}, size={len(self)}, over {self.space.field})"

    @property
    def m(self) -> int:
        return self.space.m

    @property
    def spec(self) -> GroupSpec:
        return self.space.spec

    def __len__(self):
        return len(self.elements)

    def __contains__(self, code) -> bool:
        return code in self.elements

    def __eq__(self, other):
        if not isinstance(other, SubmoduleSet):
            return NotImplemented
        return self.space is other.space and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    @property
    def fp_dim(self) -> int:
        n, p, dim = len(self), self.space.p, 0
        while n > 1:
            n //= p
            dim += 1
        return dim

    def matrices(self) -> list[tuple[TraceZeroMat, ...]]:
        return [self.space.matrices(int(c)) for c in self.codes]

    def coordinate_array(self) -> np.ndarray:
        """(|M|, m, 4) array of field codes (a, b, c, d) per coordinate."""
        q = self.space.q
        parts = self.space.split_array(self.codes)
        a, b, c = parts % q, (parts // q) % q, parts // (q * q)
        d = self.space.ft.neg[a]
        return np.stack([a, b, c, d], axis=-1)

    def is_closed(self, full_group: bool = True) -> bool:
        """Direct re-check: contains 0, closed under + and under conjugation."""
        sp = self.space
        codes = self.codes
        if 0 not in self.elements:
            return False
        # subgroup test: with 0 present and finite, closure under + suffices
        sums = sp.add_array(codes[:, None], codes[None, :]).ravel()
        if not np.isin(sums, codes).all():
            return False
        maps = sp.group_maps if full_group else np.stack(sp.gen_maps) if sp.gen_maps else None
        if maps is None:
            return True
        for cmap in maps:
            if not np.isin(sp.act_array(cmap, codes), codes).all():
                return False
        return True

    def intersection(self, other: SubmoduleSet) -> SubmoduleSet:
        return SubmoduleSet(self.space, np.intersect1d(self.codes, other.codes))


def module_closure(gens: Iterable, spec: GroupSpec | None = None, m: int | None = None,
                   space: ModuleSpace | None = None, cap: int | None = None) -> SubmoduleSet:
    """Smallest submodule containing gens.

    Generators may be packed codes (then ``space`` or ``spec``/``m`` is
    required) or tuples of trace-0 matrices over F_q.
    """
    gens = list(gens)
    if space is None:
        if spec is None:
            raise ParameterError("need the acting group spec")
        if m is None:
            first = next((g for g in gens if not isinstance(g, (int, np.integer))), None)
            m = len(first) if first is not None else 1
        space = module_space(spec, m)
    cap = enumeration_cap(cap)
    codes = [int(g) if isinstance(g, (int, np.integer)) else space.encode(g) for g in gens]
    ech = FpEchelon(space)
    queue = deque(codes)
    while queue:
        v = queue.popleft()
        if ech.add(v):
            for cmap in space.gen_maps:
                queue.append(space.act(cmap, v))
    return SubmoduleSet(space, ech.span_codes(cap))


def zero_module(space: ModuleSpace) -> SubmoduleSet:
    return SubmoduleSet(space, np.zeros(1, dtype=np.int64))


def full_module(space: ModuleSpace, cap: int | None = None) -> SubmoduleSet:
    cap = enumeration_cap(cap)
    if space.size > cap:
        raise CapacityError(f"ambient module has {space.size} elements", required=space.size, cap=cap)
    return SubmoduleSet(space, np.arange(space.size, dtype=np.int64))


def scalar_module(space: ModuleSpace) -> SubmoduleSet:
    """The scalar matrices inside M_2^0(F_q) (m = 1); {0} when p is odd."""
    if space.m != 1:
        raise ParameterError("scalar_module is defined for m = 1")
    return SubmoduleSet(space, np.array([c for c in range(space.q3) if space.is_scalar_tz(c)]))


# -- classification ------------------------------------------------------------

@dataclass(frozen=True)
class Full:
    def __str__(self):
        return "Full"


@dataclass(frozen=True)
class ScalarSubspace:
    f2dim: int

    def __str__(self):
        return f"ScalarSubspace({self.f2dim})"


def classify_submodule(M: SubmoduleSet, check: bool = True):
    """Full or ScalarSubspace(dim) for a submodule of M_2^0(F_q)."""
    sp = M.space
    if sp.m != 1:
        raise ParameterError("classify_submodule expects m = 1")
    if check and not M.is_closed():
        raise ContractError("input set is not a closed submodule")
    if len(M) == sp.q3:
        return Full()
    if all(sp.is_scalar_tz(int(c)) for c in M.codes):
        return ScalarSubspace(M.fp_dim)
    raise TheoremViolation(f"submodule of size {len(M)} is neither full nor scalar")


def complement_exists(S: SubmoduleSet, ambient: SubmoduleSet, cap: int | None = None):
    """A submodule W with ambient = S + W and S & W = 0, or None.

    Exhaustive: every submodule meeting S trivially is reachable by adding
    one element at a time, and that property is inherited by submodules, so
    the search never needs to pass through a module that meets S.
    """
    sp = ambient.space
    if S.space is not sp:
        raise ParameterError("S and ambient live in different spaces")
    if not S.elements <= ambient.elements:
        raise ContractError("S is not contained in the ambient module")
    if len(ambient) % len(S):
        return None
    target = len(ambient) // len(S)
    cap = enumeration_cap(cap)
    start = zero_module(sp)
    seen = {start.elements}
    queue = deque([start])
    while queue:
        W = queue.popleft()
        if len(W) == target:
            return W
        for v in ambient.codes:
            v = int(v)
            if v in W.elements:
                continue
            W2 = module_closure(list(W.codes.tolist()) + [v], space=sp, cap=cap)
            if W2.elements in seen:
                continue
            seen.add(W2.elements)
            if len(W2) > target or len(S.elements & W2.elements) > 1:
                continue
            queue.append(W2)
    return None


# -- canonical modules ---------------------------------------------------------

@dataclass(frozen=True)
class ModuleEmbedding:
    """alpha full coordinates, then one scalar block per remaining coordinate.

    ``positions[i]`` is the (0-based) ambient coordinate that canonical slot i
    occupies; slots 0..alpha-1 are the full ones.
    """

    field: FieldParams
    m: int
    alpha: int
    blocks: tuple
    positions: tuple | None = None

    def __post_init__(self):
        blocks = tuple(tuple(self.field(x) for x in blk) for blk in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not 0 <= self.alpha <= self.m:
            raise DomainError(f"alpha={self.alpha} outside [0, {self.m}]")
        if len(blocks) != self.m - self.alpha:
            raise DomainError(f"need one scalar block per non-full coordinate ({self.m - self.alpha})")
        for blk in blocks:
            if any(x.is_zero() for x in blk):
                raise DomainError("block scalars must be nonzero")
            if blk and len(fp_span(blk)) != self.field.p ** len(blk):
                raise DomainError(f"block {blk} is not F_p-independent")
            if blk and self.field.p != 2:
                raise DomainError("scalar matrices have trace 0 only in characteristic 2")
        if self.beta > self.field.d * (self.m - self.alpha):
            raise DomainError("beta exceeds d(m - alpha)")
        pos = tuple(range(self.m)) if self.positions is None else tuple(self.positions)
        if sorted(pos) != list(range(self.m)):
            raise DomainError("positions must be a permutation of the coordinates")
        object.__setattr__(self, "positions", pos)

    @property
    def beta(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def size(self) -> int:
        return self.field.q ** (3 * self.alpha) * self.field.p**self.beta

    def to_json(self) -> dict:
        out = {"alpha": self.alpha, "blocks": [[x.to_json() for x in blk] for blk in self.blocks]}
        if self.positions != tuple(range(self.m)):
            out["positions"] = list(self.positions)
        return out

    @classmethod
    def from_json(cls, field: FieldParams, m: int, obj: dict) -> ModuleEmbedding:
        return cls(field, m, int(obj["alpha"]),
                   tuple(tuple(field(c) for c in blk) for blk in obj["blocks"]),
                   tuple(obj["positions"]) if "positions" in obj else None)


def block_sizes(d: int, m: int, alpha: int, beta: int) -> list[int]:
    """Default spread of beta over the m - alpha scalar coordinates.

    Every coordinate gets one scalar first (so traces can generate T when
    beta >= m - alpha), then coordinates are filled up to d in order.
    """
    s = m - alpha
    if not 0 <= alpha <= m or not 0 <= beta <= d * s:
        raise DomainError(f"(alpha, beta) = ({alpha}, {beta}) out of range for d={d}, m={m}")
    if beta <= s:
        return [1] * beta + [0] * (s - beta)
    sizes = [1] * s
    rest = beta - s
    for k in range(s):
        extra = min(d - 1, rest)
        sizes[k] += extra
        rest -= extra
    return sizes


def default_embedding(field: FieldParams, m: int, alpha: int, beta: int) -> ModuleEmbedding:
    """Blocks use the scalars 1, x, x^2, ... (lambda = 1 for a single C_2)."""
    basis = f2_basis(field)
    blocks = tuple(tuple(basis[:e]) for e in block_sizes(field.d, m, alpha, beta))
    return ModuleEmbedding(field, m, alpha, blocks)


def realize_embedding(e: ModuleEmbedding, spec: GroupSpec | None = None,
                      cap: int | None = None, verify: bool = True) -> SubmoduleSet:
    if spec is None:
        spec = sl2(e.field)
    if spec.field != e.field:
        raise ParameterError("embedding and group spec use different fields")
    cap = enumeration_cap(cap)
    if e.size > cap:
        raise CapacityError(f"module has {e.size} elements, over the cap {cap}", required=e.size, cap=cap)
    sp = module_space(spec, e.m)
    per_slot = [np.arange(sp.q3, dtype=np.int64)] * e.alpha
    for blk in e.blocks:
        span = fp_span(blk) if blk else {e.field.zero()}
        per_slot.append(np.array(sorted(sp.scalar_tz(x) for x in span), dtype=np.int64))
    codes = np.zeros(1, dtype=np.int64)
    for slot, values in enumerate(per_slot):
        weight = sp.q3 ** e.positions[slot]
        codes = (codes[:, None] + values[None, :] * weight).ravel()
    M = SubmoduleSet(sp, codes)
    if len(M) != e.size:
        raise ContractError(f"realized module has size {len(M)}, expected {e.size}")
    if verify and not M.is_closed(full_group=False):
        raise ContractError("realized module is not closed")
    return M


# -- product decomposition -----------------------------------------------------

@dataclass
class Decomposition:
    intersections: list
    projections: list
    full_count: int
    scalar_f2dim: int
    coordinate_change: list[list[int]]
    direct: bool
    verdict: str


def _fq_solve_basis_change(F: FieldParams, U: list[list[int]], m: int) -> list[list[int]]:
    """Invertible C (codes) with C u_i = e_i for a basis u_1..u_k of U."""
    ft = field_tables(F)
    cols = [list(u) for u in U]
    for i in range(m):
        e = [1 if j == i else 0 for j in range(m)]
        if _rank(F, cols + [e]) > len(cols):
            cols.append(e)
        if len(cols) == m:
            break
    # B has the chosen vectors as columns; invert with Gauss-Jordan
    B = [[cols[j][i] for j in range(m)] for i in range(m)]
    aug = [row + [1 if i == j else 0 for j in range(m)] for i, row in enumerate(B)]
    for col in range(m):
        piv = next(r for r in range(col, m) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ft.inv_l[aug[col][col]]
        aug[col] = [ft.mul_l[inv][x] for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [ft.sub_l[x][ft.mul_l[c][y]] for x, y in zip(aug[r], aug[col])]
    return [row[m:] for row in aug]


def _rank(F: FieldParams, vectors: list[list[int]]) -> int:
    from .localalg import FqEchelon

    ech = FqEchelon(F, len(vectors[0]) if vectors else 0)
    for v in vectors:
        ech.add(v)
    return ech.dim


def apply_coordinate_change(space: ModuleSpace, C: list[list[int]], codes: np.ndarray) -> np.ndarray:
    """(C.v)_i = sum_j C_ij v_j, an isomorphism of modules since F_q-scaling commutes with conjugation."""
    out = []
    for code in codes.tolist():
        parts = space.split(code)
        new = []
        for i in range(space.m):
            acc = 0
            for j in range(space.m):
                if C[i][j]:
                    acc = space.add(acc, space.scale(C[i][j], parts[j]))
            new.append(acc)
        out.append(space.join(new))
    return np.array(out, dtype=np.int64)


def _quotient_key(space: ModuleSpace, tz: int) -> int:
    # image in M_2^0 / S: drop the diagonal when the scalars are nontrivial
    a, b, c = tz_decode(space.q, tz)
    if space.p == 2:
        return tz_encode(space.q, 0, b, c)
    return tz


def decompose_product_submodule(N: SubmoduleSet, cap: int | None = None) -> Decomposition:
    sp = N.space
    m, q, F = sp.m, sp.q, sp.field
    if m < 2:
        raise ParameterError("decomposition needs m >= 2")
    cap = enumeration_cap(cap)
    if q**m > cap:
        raise CapacityError("too many coordinate vectors to scan", required=q**m, cap=cap)
    one_sp = module_space(sp.spec, 1)
    parts = sp.split_array(N.codes)
    intersections, projections = [], []
    for i in range(m):
        others_zero = np.all(np.delete(parts, i, axis=1) == 0, axis=1)
        inter = SubmoduleSet(one_sp, parts[others_zero, i])
        proj = SubmoduleSet(one_sp, parts[:, i])
        intersections.append(classify_submodule(inter, check=False))
        projections.append(classify_submodule(proj, check=False))

    # image in V^m, V = M_2^0 / S
    qkey = np.vectorize(lambda c: _quotient_key(sp, int(c)))
    image = {tuple(row) for row in qkey(parts).tolist()} if len(parts) else {(0,) * m}
    # U = {u in F_q^m : u (x) v0 lies in the image} for a fixed nonzero class v0
    v0 = tz_encode(q, 0, 1, 0)
    U = []
    from .localalg import FqEchelon

    ech = FqEchelon(F, m)
    for u in itertools.product(range(q), repeat=m):
        if not any(u):
            continue
        key = tuple(_quotient_key(sp, sp.scale(c, v0)) for c in u)
        if key in image and ech.add(list(u)):
            U.append(list(u))
    k = len(U)
    v_size = q**2 if sp.p == 2 else q**3
    if len(image) != v_size**k:
        raise TheoremViolation(f"image in V^m has {len(image)} elements, not |V|^{k}")
    C = _fq_solve_basis_change(F, U, m)
    moved = apply_coordinate_change(sp, C, N.codes)
    mparts = sp.split_array(moved)
    tail = mparts[:, k:]
    head_zero = np.all(mparts[:, :k] == 0, axis=1)
    L = tail[head_zero]
    if not all(sp.is_scalar_tz(int(c)) for c in L.ravel()):
        raise TheoremViolation("complement part is not scalar after the coordinate change")
    l_size = len({tuple(r) for r in L.tolist()})
    l_dim = l_size.bit_length() - 1
    if len(N) != q ** (3 * k) * l_size:
        raise TheoremViolation("module does not split as M^k + L after the coordinate change")
    direct = len(N) == int(np.prod([
        q**3 if isinstance(c, Full) else 2**c.f2dim for c in intersections]))
    verdict = f"M2^0^{k} + C2^{l_dim}"
    if not direct:
        verdict += " (isomorphic after coordinate change)"
    return Decomposition(intersections, projections, k, l_dim, C, direct, verdict)


def random_generators(space: ModuleSpace, count: int, rng: random.Random) -> list[int]:
    return [rng.randrange(space.size) for _ in range(count)]
