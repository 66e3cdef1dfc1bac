"""Conjugating a subgroup of GL_2^D(T) into the form M x| GL_2^D(F_q)."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from ..errors import ContractError, DomainError, ParameterError, TheoremViolation
from ..ffield import UnitSubgroup, field_tables, trivial_subgroup
from ..localalg import AlgebraParams, algebra_tables
from ..matgrp import (
    GroupSpec, Mat2, gl2d_codes, packed_closure, pinv, pmul, standard_generators, tz_encode,
)
from ..modlat import SubmoduleSet, module_space


@dataclass
class ConjugatorResult:
    u: Mat2
    M: SubmoduleSet
    candidates_tried: int

    def to_json(self) -> dict:
        return {"u": self.u.to_json(), "module_order": len(self.M), "candidates_tried": self.candidates_tried}


def _packed_set(G, T: AlgebraParams | None):
    G = list(G)
    if not G:
        raise ParameterError("empty group")
    if isinstance(G[0], Mat2):
        T = G[0].ring
        return T, {g.packed() for g in G}
    if T is None:
        raise ParameterError("packed input needs the algebra")
    return T, {tuple(int(c) for c in g) for g in G}


def kernel_codes(T: AlgebraParams, D: UnitSubgroup, H) -> tuple[np.ndarray, dict]:
    """Module codes of mu for the elements 1 + mu of H over the identity.

    Also returns, per element g of H, the pair (mu code, h) with g = (1 + mu) h,
    or raises when some g h^-1 is not of that shape.
    """
    q, m = T.field.q, T.m
    R = algebra_tables(T)
    neg = field_tables(T.field).neg_l
    one = R.one
    factor = {}
    for g in H:
        h = tuple(c % q for c in g)
        k = pmul(R, g, pinv(R, h))
        if any(c % q != e for c, e in zip(k, (1, 0, 0, 1))):
            raise ContractError("g h^-1 is not congruent to 1")
        mu = (R.sub_l[k[0]][one], k[1], k[2], R.sub_l[k[3]][one])
        parts = []
        for i in range(1, m + 1):
            a, b, c, d = ((x // q**i) % q for x in mu)
            if d != neg[a]:
                raise ContractError("mu is not trace 0")
            parts.append(tz_encode(q, a, b, c))
        code = sum(pt * q ** (3 * k_) for k_, pt in enumerate(parts))
        factor[g] = (code, h)
    ker = np.array(sorted({code for code, h in factor.values() if h == (1, 0, 0, 1)}), dtype=np.int64)
    return ker, factor


def split_conjugator(G, D: UnitSubgroup | None = None, T: AlgebraParams | None = None) -> ConjugatorResult:
    """Find u = 1 + N, N in M_2(m_T), with uGu^-1 = M x| GL_2^D(F_q) (constants).

    Candidates run through N in lexicographic code order; a candidate is
    accepted once u^-1 h u lies in G for the standard generators h, and the
    full factorisation of uGu^-1 is then checked directly.
    """
    T, Gp = _packed_set(G, T)
    F = T.field
    q = F.q
    D = D or trivial_subgroup(F)
    spec = GroupSpec(F, D)
    R = algebra_tables(T)
    base = {tuple(r) for r in gl2d_codes(spec).tolist()}
    if {tuple(c % q for c in g) for g in Gp} != base:
        raise DomainError("reduction of G is not GL_2^D(F_q)")
    gens = [h.packed() for h in standard_generators(spec)]
    ideal = [q * k for k in range(q**T.m)]
    tried = 0
    for N in itertools.product(ideal, repeat=4):
        tried += 1
        u = (R.add_l[1][N[0]], N[1], N[2], R.add_l[1][N[3]])
        ui = pinv(R, u)
        if not all(pmul(R, pmul(R, ui, h), u) in Gp for h in gens):
            continue
        H = {pmul(R, pmul(R, u, g), ui) for g in Gp}
        M = _check_factorisation(T, D, H, len(base))
        return ConjugatorResult(Mat2.from_packed(T, u), M, tried)
    raise TheoremViolation("no conjugator 1 + N makes G contain the constant GL_2^D(F_q)")


def _check_factorisation(T: AlgebraParams, D: UnitSubgroup, H: set, base_order: int) -> SubmoduleSet:
    ker, factor = kernel_codes(T, D, H)
    space = module_space(GroupSpec(T.field, D), T.m)
    M = SubmoduleSet(space, ker)
    if not M.is_closed():
        raise ContractError("kernel is not a submodule")
    if len(H) != len(M) * base_order:
        raise ContractError(f"|uGu^-1| = {len(H)} but |M||GL_2^D| = {len(M) * base_order}")
    if any(code not in M for code, _ in factor.values()):
        raise ContractError("some element does not factor as (1 + mu) h with mu in M")
    return M


def random_split_subgroup(T: AlgebraParams, D: UnitSubgroup | None = None, seed: int = 0,
                          module: SubmoduleSet | None = None, conjugate: bool = True,
                          ngens: int = 2) -> tuple[set, tuple]:
    """A random subgroup of GL_2^D(T) with full reduction, optionally conjugated.

    Generators (1 + mu) h are drawn with mu from ``module`` (default: the
    whole of M_2^0(m_T)) until their reductions generate GL_2^D(F_q).
    Returns the packed element set and the conjugating v (identity if none).
    """
    rng = random.Random(seed)
    F = T.field
    q = F.q
    D = D or trivial_subgroup(F)
    spec = GroupSpec(F, D)
    R = algebra_tables(T)
    FT = field_tables(F)
    base = [tuple(r) for r in gl2d_codes(spec).tolist()]
    space = module_space(spec, T.m)
    pool = module.codes.tolist() if module is not None else None
    while True:
        hs = [rng.choice(base) for _ in range(ngens)]
        if len(packed_closure(FT, hs)) == len(base):
            break
    gens = []
    for h in hs:
        code = rng.choice(pool) if pool is not None else rng.randrange(space.size)
        mu = [0, 0, 0, 0]
        for k, A in enumerate(space.matrices(code)):
            for idx, e in enumerate(A.entries):
                mu[idx] += e.code * q ** (k + 1)
        one_mu = (R.add_l[1][mu[0]], mu[1], mu[2], R.add_l[1][mu[3]])
        gens.append(pmul(R, one_mu, h))
    G = packed_closure(R, gens)
    v = (1, 0, 0, 1)
    if conjugate:
        N = [q * rng.randrange(q**T.m) for _ in range(4)]
        v = (R.add_l[1][N[0]], N[1], N[2], R.add_l[1][N[3]])
        vi = pinv(R, v)
        G = {pmul(R, pmul(R, v, g), vi) for g in G}
    return G, v
