"""The ``verify`` suites: each returns a JSON-ready pass/fail report."""

from __future__ import annotations

import itertools
import random
import time
from collections import Counter

from .errors import ContractError, TheoremViolation
from .ffield import field_of_order, full_unit_group, trivial_subgroup
from .grouplab import (
    Cocycle2, build_twisted_product, generating_pairs, random_split_subgroup, sl2_witt_extension,
    split_conjugator, splitting_search, verify_normal_subgroup_lemma, witt_cocycle,
)
from .localalg import AlgebraParams
from .matgrp import GroupSpec, pidentity, pmul, sl2
from .modlat import (
    classify_submodule, complement_exists, decompose_product_submodule, full_module,
    module_closure, module_space, random_generators, scalar_module,
)


def _timed(fn):
    def wrapper(**kw):
        t0 = time.perf_counter()
        out = fn(**kw)
        out["seconds"] = round(time.perf_counter() - t0, 3)
        return out
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _scalar_quotient(ext, F):
    """E / Z for the scalar matrices Z inside the kernel of a matrix extension."""
    from .grouplab.extensions import ExtensionInstance
    from .grouplab.galoisring import GaloisRingParams, gr_tables

    R = gr_tables(GaloisRingParams(F))
    Z = [k for k in ext.kernel if k[1] == 0 and k[2] == 0 and k[0] == k[3]]
    key = lambda g: min(pmul(R, z, g) for z in Z)  # noqa: E731
    els = sorted({key(g) for g in ext.elements})
    return ExtensionInstance(els, lambda a, b: key(pmul(R, a, b)), key(pidentity(R)), ext.Q, ext.proj), len(Z)


@_timed
def nonsplit(q: int = 4, seed: int = 0, count: int | None = None) -> dict:
    """SL_2(W_2(F_q)) -> SL_2(F_q) has no splitting, for several generating pairs."""
    F = field_of_order(q)
    if F.p != 2:
        raise ContractError("the Witt-vector suite is implemented for p = 2")
    ext = sl2_witt_extension(F)
    ext.check_exact()
    pairs = generating_pairs(ext.Q, count or 5, seed=seed)
    runs = [dict(splitting_search(ext, pr).to_json(), pair=list(pr)) for pr in pairs]
    M, Q, x = witt_cocycle(F)
    E = build_twisted_product(M, Q, x)
    twisted = splitting_search(E, pairs[0]).to_json()
    # quotient by the scalar part of the kernel, twisted model and matrix model
    sp = module_space(sl2(F), 1)
    S = [i for i, lab in enumerate(M.labels) if sp.is_scalar_tz(lab)]
    V, proj = M.quotient(S)
    EV = build_twisted_product(V, Q, Cocycle2(proj[x.table]))
    quotient_twisted = splitting_search(EV, pairs[0]).to_json()
    out = {
        "suite": "nonsplit", "q": q, "order_E": ext.order, "kernel": len(ext.kernel),
        "pairs": runs, "twisted_model": dict(twisted, order=E.order),
        "quotient_by_scalars": {"twisted_model": dict(quotient_twisted, order=EV.order)},
    }
    EZ, nz = _scalar_quotient(ext, F)
    out["quotient_by_scalars"]["matrix_model"] = dict(splitting_search(EZ, pairs[0]).to_json(),
                                                      order=EZ.order, scalars=nz)
    out["passed"] = not any(r["split"] for r in runs) and not twisted["split"]
    return out


@_timed
def corollary(q: int = 4, seed: int = 0, count: int | None = None) -> dict:
    """Random subgroups of GL_2^D(T) with full reduction conjugate to M x| GL_2^D(F_q)."""
    F = field_of_order(q)
    T = AlgebraParams(F, 1)
    count = 100 if count is None else count
    failures, sizes, tried = [], Counter(), []
    for i in range(count):
        rng = random.Random(seed + i)
        D = full_unit_group(F) if i % 2 else trivial_subgroup(F)
        sub = None
        if i % 4 >= 2:
            space = module_space(GroupSpec(F, D), 1)
            sub = module_closure(random_generators(space, rng.randint(1, 2), rng), space=space)
        try:
            G, v = random_split_subgroup(T, D, seed=seed + i, module=sub, conjugate=True)
            res = split_conjugator(G, D, T)
            sizes[(len(D), len(G), len(res.M))] += 1
            tried.append(res.candidates_tried)
        except (ContractError, TheoremViolation) as exc:
            failures.append({"trial": i, "error": str(exc)})
    return {
        "suite": "corollary", "q": q, "trials": count, "failures": failures,
        "shapes": [{"det_order": k[0], "order_G": k[1], "order_M": k[2], "count": n}
                   for k, n in sorted(sizes.items())],
        "max_candidates_tried": max(tried, default=0),
        "passed": not failures,
    }


@_timed
def modules(q: int = 4, seed: int = 0, count: int | None = None) -> dict:
    """Every one- and two-generator submodule of M_2^0(F_q) is full or scalar."""
    F = field_of_order(q)
    sp = module_space(sl2(F), 1)
    kinds, failures = Counter(), []
    single = {}
    for a in range(sp.q3):
        M = module_closure([a], space=sp)
        single[a] = M
        try:
            kinds[repr(classify_submodule(M))] += 1
        except TheoremViolation as exc:
            failures.append({"gens": [a], "error": str(exc)})
    pairs = 0
    for a, b in itertools.combinations(range(1, sp.q3), 2):
        if b in single[a]:
            continue
        pairs += 1
        M = module_closure(list(single[a].codes) + [b], space=sp)
        try:
            kinds[repr(classify_submodule(M, check=False))] += 1
        except TheoremViolation as exc:
            failures.append({"gens": [a, b], "error": str(exc)})
    S = scalar_module(sp)
    comp = complement_exists(S, full_module(sp))
    return {
        "suite": "modules", "q": q, "single_closures": sp.q3, "pair_closures": pairs,
        "classes": dict(kinds), "failures": failures,
        "scalar_complement": None if comp is None else len(comp),
        "passed": not failures and (comp is None) == (F.p == 2),
    }


@_timed
def normal(q: int = 4, seed: int = 0, count: int | None = None) -> dict:
    """Normal subgroups of GL_2^D(F_q) with det(J) = D map onto PGL_2^D(F_q)."""
    reports = [verify_normal_subgroup_lemma(q, D).to_json() for D in ("trivial", "full")]
    return {"suite": "normal", "q": q, "cases": reports, "passed": all(r["passed"] for r in reports)}


@_timed
def appendix(q: int = 4, seed: int = 0, count: int | None = None) -> dict:
    """Random submodules of M_2^0(F_q)^2 decompose as M_2^0^k + C_2^l."""
    F = field_of_order(q)
    sp = module_space(sl2(F), 2)
    rng = random.Random(seed)
    count = 200 if count is None else count
    verdicts, failures = Counter(), []
    for i in range(count):
        gens = random_generators(sp, rng.randint(1, 3), rng)
        if rng.random() < 0.5:
            # bias towards small modules: mostly scalar coordinates
            gens = [sp.join([c if sp.is_scalar_tz(c) or rng.random() < 0.2 else 0 for c in sp.split(g)])
                    for g in gens]
        N = module_closure(gens, space=sp)
        try:
            verdicts[decompose_product_submodule(N).verdict] += 1
        except (TheoremViolation, ContractError) as exc:
            failures.append({"trial": i, "gens": gens, "error": str(exc)})
    return {"suite": "appendix", "q": q, "trials": count, "verdicts": dict(verdicts),
            "failures": failures, "passed": not failures}


SUITES = {"nonsplit": nonsplit, "corollary": corollary, "modules": modules,
          "normal": normal, "appendix": appendix}
