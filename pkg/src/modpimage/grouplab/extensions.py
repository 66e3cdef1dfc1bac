"""Finite group extensions 0 -> M -> E -> Q -> 1 and the search for splittings.

Groups here are explicit: either a multiplication table on indices
(:class:`FiniteGroup`) or packed matrices multiplied through ring tables.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

from ..config import enumeration_cap
from ..errors import CapacityError, ContractError, ParameterError
from ..ffield import FieldParams, UnitSubgroup, field_tables, trivial_subgroup
from ..localalg import AlgebraParams, algebra_tables
from ..matgrp import GroupSpec, closure, gl2d_codes, pidentity, pinv, pmul, tz_encode
from ..modlat import SubmoduleSet, full_module, module_space
from .galoisring import GaloisRingParams, gr_tables, gr_teichmuller

# below this order associativity is checked on every triple of E directly
DIRECT_ASSOC_LIMIT = 256
# independent random triples checked on top of the reduced exhaustive check
ASSOC_SAMPLES = 20000
# lift fan-out bound per generator
MAX_FIBER = 2**12


class FiniteGroup:
    """A group on indices 0..n-1 given by its multiplication table."""

    def __init__(self, table: np.ndarray, labels: Sequence[Hashable] | None = None,
                 identity: int = 0, name: str = ""):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ParameterError("multiplication table must be square")
        self.table = table
        self.table_l = table.tolist()
        self.n = n
        self.identity = identity
        self.labels = list(labels) if labels is not None else list(range(n))
        self.index = {x: i for i, x in enumerate(self.labels)}
        self.name = name
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(table == identity)
        inv[rows] = cols
        self.inv = inv
        self.inv_l = inv.tolist()

    @classmethod
    def from_packed(cls, R, elements: Sequence[tuple], name: str = "") -> FiniteGroup:
        elements = [tuple(int(c) for c in e) for e in elements]
        index = {e: i for i, e in enumerate(elements)}
        table = np.array([[index[pmul(R, a, b)] for b in elements] for a in elements], dtype=np.int64)
        return cls(table, elements, identity=index[pidentity(R)], name=name)

    def __len__(self):
        return self.n

    def mul(self, a: int, b: int) -> int:
        return self.table_l[a][b]

    def order_of(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table_l[x][a]
            k += 1
        return k

    def closure(self, gens, cap: int | None = None) -> set[int]:
        return closure(gens, self.mul, self.identity, cap)

    def generates(self, gens) -> bool:
        return len(self.closure(gens)) == self.n


@dataclass
class GModule:
    """A finite abelian group on indices with a left action of a FiniteGroup.

    ``act[g, m]`` is g.m; index 0 is the zero element.
    """

    add: np.ndarray
    neg: np.ndarray
    act: np.ndarray
    labels: list = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        self.add = np.asarray(self.add, dtype=np.int64)
        self.neg = np.asarray(self.neg, dtype=np.int64)
        self.act = np.asarray(self.act, dtype=np.int64)
        self.add_l, self.neg_l, self.act_l = self.add.tolist(), self.neg.tolist(), self.act.tolist()
        if not self.labels:
            self.labels = list(range(len(self.neg)))

    def __len__(self):
        return len(self.neg)

    @classmethod
    def from_submodule(cls, S: SubmoduleSet, name: str = "") -> GModule:
        """Submodule of M_2^0(F_q)^m with the conjugation action of GL_2^D(F_q).

        Group indices follow the row order of gl2d_codes(S.spec).
        """
        sp = S.space
        codes = S.codes
        index = np.full(sp.size, -1, dtype=np.int64)
        index[codes] = np.arange(len(codes))
        add = index[sp.add_array(codes[:, None], codes[None, :])]
        neg = index[sp.add_array(np.zeros_like(codes), codes)] if sp.p == 2 else \
            index[np.array([sp.from_vec([(-c) % sp.p for c in sp.to_vec(int(x))]) for x in codes])]
        act = index[np.stack([sp.act_array(cmap, codes) for cmap in sp.group_maps])]
        if (add < 0).any() or (act < 0).any():
            raise ContractError("not a submodule")
        return cls(add, neg, act, codes.tolist(), name)

    def quotient(self, sub: Sequence[int], name: str = "") -> tuple[GModule, np.ndarray]:
        """M / sub together with the projection array M -> M/sub."""
        sub = sorted(set(int(s) for s in sub))
        n = len(self)
        proj = np.full(n, -1, dtype=np.int64)
        reps = []
        for m in range(n):
            if proj[m] >= 0:
                continue
            coset = self.add[m, sub]
            proj[coset] = len(reps)
            reps.append(m)
        reps_a = np.array(reps, dtype=np.int64)
        add = proj[self.add[np.ix_(reps_a, reps_a)]]
        neg = proj[self.neg[reps_a]]
        act = proj[self.act[:, reps_a]]
        # well-definedness of the action on cosets
        if (proj[self.act] != act[:, proj]).any():
            raise ContractError("sub is not stable under the action")
        return GModule(add, neg, act, [self.labels[r] for r in reps], name), proj

    @classmethod
    def trivial_action(cls, add: np.ndarray, neg: np.ndarray, group_order: int, name: str = "") -> GModule:
        n = len(neg)
        return cls(add, neg, np.tile(np.arange(n), (group_order, 1)), name=name)


@dataclass
class Cocycle2:
    """x: G x G -> M as an index table, x[g, h] an element index of M."""

    table: np.ndarray

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64)

    @classmethod
    def zero(cls, G: FiniteGroup) -> Cocycle2:
        return cls(np.zeros((G.n, G.n), dtype=np.int64))

    def first_failure(self, M: GModule, G: FiniteGroup):
        """None when normalized and closed, else (kind, triple)."""
        x = self.table
        e = G.identity
        bad = np.nonzero((x[e, :] != 0) | (x[:, e] != 0))[0]
        if len(bad):
            g = int(bad[0])
            return "normalization", (e, g) if x[e, g] else (g, e)
        n = G.n
        mt = G.table
        g1 = np.arange(n)[:, None, None]
        g2 = np.arange(n)[None, :, None]
        g3 = np.arange(n)[None, None, :]
        add = M.add
        lhs = add[M.act[g1, x[g2, g3]], x[g1, mt[g2, g3]]]
        rhs = add[x[mt[g1, g2], g3], x[g1, g2]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return "cocycle", tuple(int(i) for i in bad[0])
        return None


class ExtensionInstance:
    """E with projection onto Q; the kernel is the fiber over the identity.

    E elements are hashable; ``mul`` multiplies them and ``proj`` sends them
    to Q indices.
    """

    def __init__(self, elements: Sequence[Hashable], mul: Callable, identity: Hashable,
                 Q: FiniteGroup, proj: Callable[[Hashable], int], name: str = ""):
        self.elements = list(elements)
        self.mul = mul
        self.identity = identity
        self.Q = Q
        self.proj = proj
        self.name = name
        fibers: dict[int, list] = {}
        for x in self.elements:
            fibers.setdefault(proj(x), []).append(x)
        self.fibers = fibers

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def kernel(self) -> list:
        return self.fibers.get(self.Q.identity, [])

    def fiber(self, qi: int) -> list:
        return self.fibers.get(qi, [])

    def check_exact(self, sample: int = 2000, seed: int = 0) -> None:
        """Surjective projection with |E| = |ker|.|Q|, and proj multiplicative on samples."""
        if len(self.fibers) != self.Q.n:
            raise ContractError("projection is not surjective")
        k = len(self.kernel)
        if any(len(f) != k for f in self.fibers.values()):
            raise ContractError("fibers have different sizes")
        rng = random.Random(seed)
        for _ in range(sample):
            a, b = rng.choice(self.elements), rng.choice(self.elements)
            if self.proj(self.mul(a, b)) != self.Q.mul(self.proj(a), self.proj(b)):
                raise ContractError(f"projection is not a homomorphism at {a}, {b}")


class TwistedProduct(ExtensionInstance):
    """M x|_x G with (m1, g1)(m2, g2) = (x(g1, g2) + m1 + g1.m2, g1 g2)."""

    def __init__(self, M: GModule, G: FiniteGroup, x: Cocycle2, name: str = ""):
        self.M, self.G, self.x = M, G, x
        add, act, gt = M.add_l, M.act_l, G.table_l
        xt = x.table.tolist()

        def mul(a, b):
            m1, g1 = a
            m2, g2 = b
            return (add[add[xt[g1][g2]][m1]][act[g1][m2]], gt[g1][g2])

        elements = [(m, g) for g in range(G.n) for m in range(len(M))]
        super().__init__(elements, mul, (0, G.identity), G, lambda e: e[1], name)

    def mul_table(self) -> np.ndarray:
        """Full table on indices m + |M| g (only sensible for small |E|)."""
        M, G, x = self.M, self.G, self.x.table
        nm = len(M)
        m = np.arange(nm)
        g = np.arange(G.n)
        mi = np.tile(m, G.n)
        gi = np.repeat(g, nm)
        m1, g1, m2, g2 = mi[:, None], gi[:, None], mi[None, :], gi[None, :]
        mm = M.add[M.add[x[g1, g2], m1], M.act[g1, m2]]
        return mm + nm * G.table[g1, g2]


@dataclass
class AxiomReport:
    order: int
    direct_triples: int
    reduced_checks: int
    sampled_triples: int
    ok: bool


def verify_group_axioms(E: TwistedProduct, samples: int = ASSOC_SAMPLES, seed: int = 0) -> AxiomReport:
    """Identity, inverses and associativity of a twisted product.

    For |E| <= DIRECT_ASSOC_LIMIT every triple is multiplied out. Above
    that, associativity is decided exhaustively through its two independent
    parts: the cocycle identity on G^3 and the action laws (additivity and
    g1.(g2.m) = (g1 g2).m); a random sample of triples is multiplied out as
    an independent cross-check.
    """
    M, G = E.M, E.G
    nm = len(M)
    failure = E.x.first_failure(M, G)
    if failure is not None:
        raise ContractError(f"{failure[0]} fails at {failure[1]}")
    gidx = np.arange(G.n)
    act = M.act
    if not (act[G.identity] == np.arange(nm)).all():
        raise ContractError("identity does not act trivially")
    if (act[gidx[:, None, None], M.add[None]] != M.add[act[:, :, None], act[:, None, :]]).any():
        raise ContractError("action is not additive")
    # act[g1 g2, m] == act[g1, act[g2, m]]
    if (act[G.table] != act[gidx[:, None, None], act[None, :, :]]).any():
        raise ContractError("action is not a homomorphism")
    reduced = G.n**3 + G.n * nm * nm + G.n * G.n * nm
    direct = 0
    if E.order <= DIRECT_ASSOC_LIMIT:
        T = E.mul_table()
        n = E.order
        left = T[T[:, :, None], np.arange(n)[None, None, :]]
        right = T[np.arange(n)[:, None, None], T[None, :, :]]
        if (left != right).any():
            raise ContractError("associativity fails")
        ident = 0 + nm * G.identity
        if not ((T[ident] == np.arange(n)).all() and (T[:, ident] == np.arange(n)).all()):
            raise ContractError("(0, 1) is not the identity")
        if not (T == ident).any(axis=1).all():
            raise ContractError("some element has no inverse")
        direct = n**3
    rng = random.Random(seed)
    els = E.elements
    for _ in range(samples):
        a, b, c = rng.choice(els), rng.choice(els), rng.choice(els)
        if E.mul(E.mul(a, b), c) != E.mul(a, E.mul(b, c)):
            raise ContractError(f"associativity fails at {a}, {b}, {c}")
    for a in els[: min(len(els), 4096)]:
        if E.mul(E.identity, a) != a or E.mul(a, E.identity) != a:
            raise ContractError(f"(0, 1) is not neutral for {a}")
    return AxiomReport(E.order, direct, reduced, samples, True)


def build_twisted_product(M: GModule, G: FiniteGroup, x: Cocycle2 | None = None,
                          check: bool = True, name: str = "") -> TwistedProduct:
    if x is None:
        x = Cocycle2.zero(G)
    if x.table.shape != (G.n, G.n):
        raise ParameterError("cocycle table has the wrong shape")
    failure = x.first_failure(M, G)
    if failure is not None:
        kind, triple = failure
        raise ContractError(f"{kind} condition violated at {triple}")
    E = TwistedProduct(M, G, x, name)
    if check:
        verify_group_axioms(E)
    return E


# -- matrix extensions ---------------------------------------------------------

def _matrix_grid(R, det_ok: np.ndarray) -> np.ndarray:
    n = R.q
    grid = np.indices((n, n, n, n), dtype=np.int64).reshape(4, -1).T
    det = R.sub[R.mul[grid[:, 0], grid[:, 3]], R.mul[grid[:, 1], grid[:, 2]]]
    return grid[det_ok[det]]


def matrix_extension(R, reduce_l: Sequence[int], det_codes: Sequence[int], Qspec: GroupSpec,
                     name: str = "", cap: int | None = None) -> ExtensionInstance:
    """Matrices over a local ring with det in det_codes, projected entrywise to F_q."""
    cap = enumeration_cap(cap)
    if R.q**4 > cap:
        raise CapacityError("ring too large to enumerate 2x2 matrices", required=R.q**4, cap=cap)
    ok = np.zeros(R.q, dtype=bool)
    ok[list(det_codes)] = True
    E = [tuple(r) for r in _matrix_grid(R, ok).tolist()]
    F = Qspec.field
    Q = FiniteGroup.from_packed(field_tables(F), gl2d_codes(Qspec).tolist(), name=str(Qspec))
    red = list(reduce_l)
    index = Q.index

    def proj(e):
        return index[(red[e[0]], red[e[1]], red[e[2]], red[e[3]])]

    return ExtensionInstance(E, lambda a, b: pmul(R, a, b), pidentity(R), Q, proj, name)


def sl2_witt_extension(F: FieldParams) -> ExtensionInstance:
    """SL_2(W_2(F_q)) -> SL_2(F_q)."""
    W = GaloisRingParams(F)
    R = gr_tables(W)
    one = W.one().code
    return matrix_extension(R, R.reduce_l, [one], GroupSpec(F, trivial_subgroup(F)),
                            name=f"SL2({W}) -> SL2({F})")


def gl2d_algebra_extension(T: AlgebraParams, D: UnitSubgroup | None = None) -> ExtensionInstance:
    """GL_2^D(T) -> GL_2^D(F_q) by X_i -> 0."""
    F = T.field
    D = D or trivial_subgroup(F)
    R = algebra_tables(T)
    red = [c % F.q for c in range(R.q)]
    return matrix_extension(R, red, sorted(D.codes), GroupSpec(F, D), name=f"GL2^D({T}) -> GL2^D({F})")


def witt_cocycle(F: FieldParams) -> tuple[GModule, FiniteGroup, Cocycle2]:
    """The kernel M_2^0(F_q), the quotient SL_2(F_q) and the cocycle of SL_2(W_2(F_q)).

    The section lifts entries by Teichmuller and rescales the first row to
    make the determinant 1; x(g, h) = s(g)s(h)s(gh)^-1 = 1 + p A with A
    read off in M_2^0(F_q).
    """
    W = GaloisRingParams(F)
    R = gr_tables(W)
    p, q = F.p, F.q
    spec = GroupSpec(F, trivial_subgroup(F))
    Q = FiniteGroup.from_packed(field_tables(F), gl2d_codes(spec).tolist(), name=f"SL2({F})")
    teich = [gr_teichmuller(F.element(c), W).code for c in range(q)]

    def section(g):
        s = tuple(teich[c] for c in g)
        dinv = R.inv_l[R.sub_l[R.mul_l[s[0]][s[3]]][R.mul_l[s[1]][s[2]]]]
        return (R.mul_l[dinv][s[0]], R.mul_l[dinv][s[1]], s[2], s[3])

    sec = [section(g) for g in Q.labels]
    space = module_space(spec, 1)
    n = Q.n
    table = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            k = pmul(R, pmul(R, sec[i], sec[j]), pinv(R, sec[Q.table_l[i][j]]))
            A = [(W.element(c) - (W.one() if idx in (0, 3) else W.zero())).coeffs for idx, c in enumerate(k)]
            if any(ci % p for a in A for ci in a):
                raise ContractError("section product left the congruence kernel")
            fa = [F((ci // p) % p for ci in a).code for a in A]
            table[i, j] = tz_encode(q, fa[0], fa[1], fa[2])
    M = GModule.from_submodule(full_module(space), name=f"M2^0({F})")
    # module labels are the trace-zero codes in increasing order, so label == index
    return M, Q, Cocycle2(table)


# -- splitting search ----------------------------------------------------------

@dataclass
class Splitting:
    generators: tuple
    complement: frozenset
    pairs_total: int
    pairs_after_prefilter: int
    closures: int
    seconds: float
    split: bool = True

    def to_json(self) -> dict:
        return {"split": True, "pairs_total": self.pairs_total,
                "pairs_after_prefilter": self.pairs_after_prefilter,
                "closures": self.closures, "complement_order": len(self.complement),
                "seconds": round(self.seconds, 3)}


@dataclass
class NoSplitting:
    pairs_total: int
    pairs_after_prefilter: int
    closures: int
    seconds: float
    split: bool = False

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        return {"split": False, "pairs_total": self.pairs_total,
                "pairs_after_prefilter": self.pairs_after_prefilter,
                "closures": self.closures, "seconds": round(self.seconds, 3)}


def _power(mul, identity, x, k):
    y = identity
    for _ in range(k):
        y = mul(y, x)
    return y


def splitting_search(ext: ExtensionInstance, gens: tuple[int, int],
                     pair_range: tuple[int, int] | None = None) -> Splitting | NoSplitting:
    """Try every pair of lifts of a generating pair of Q.

    A lift pair gives a splitting iff it generates a subgroup of order |Q|
    meeting the kernel only in the identity. Lifts whose orders differ from
    the orders of a, b, ab in Q cannot generate a complement and are dropped
    first. ``pair_range`` restricts the search to a slice of the pair list
    so that callers can shard it.
    """
    t0 = time.perf_counter()
    Q = ext.Q
    a, b = gens
    if not Q.generates([a, b]):
        raise ParameterError(f"{gens} does not generate the quotient")
    fa, fb = ext.fiber(a), ext.fiber(b)
    for f in (fa, fb):
        if len(f) > MAX_FIBER:
            raise CapacityError("lift fan-out over the bound", required=len(f), cap=MAX_FIBER)
    mul, e = ext.mul, ext.identity
    oa, ob, oab = Q.order_of(a), Q.order_of(b), Q.order_of(Q.mul(a, b))
    la = [u for u in fa if _power(mul, e, u, oa) == e]
    lb = [v for v in fb if _power(mul, e, v, ob) == e]
    pairs = [(u, v) for u in la for v in lb]
    total = len(fa) * len(fb)
    if pair_range is not None:
        pairs = pairs[pair_range[0]:pair_range[1]]
    kept = closures = 0
    kid = Q.identity
    for u, v in pairs:
        if _power(mul, e, mul(u, v), oab) != e:
            continue
        kept += 1
        closures += 1
        try:
            H = closure([u, v], mul, e, cap=Q.n)
        except CapacityError:
            continue
        if len(H) == Q.n and sum(1 for h in H if ext.proj(h) == kid) == 1:
            return Splitting((u, v), frozenset(H), total, kept, closures, time.perf_counter() - t0)
    return NoSplitting(total, kept, closures, time.perf_counter() - t0)


def generating_pairs(Q: FiniteGroup, count: int, seed: int = 0) -> list[tuple[int, int]]:
    """Distinct random pairs that generate Q (checked by closure)."""
    rng = random.Random(seed)
    out: list[tuple[int, int]] = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 10000 * count:
            raise ContractError("could not find enough generating pairs")
        pair = (rng.randrange(Q.n), rng.randrange(Q.n))
        if pair not in out and Q.generates(pair):
            out.append(pair)
    return out
