"""Distinct-trace counts of M x| GL_2^D(F_q) inside GL_2(T).

Two independent routes:

* :func:`census_formula` -- the closed form q^alpha((q-1)2^beta + 1) in
  characteristic 2 and q^(m+1) otherwise;
* :func:`census_bruteforce` -- multiply out (1 + mu) h in GL_2(T) for every
  mu in M and h in GL_2^D(F_q) and count distinct traces.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import census_cap
from .errors import CapacityError, DomainError
from .ffield import FieldParams, field_tables, gf, trivial_subgroup
from .localalg import AlgebraParams, Subalgebra, TElem, subalgebra_generated
from .matgrp import GroupSpec, gl2d_codes
from .modlat import ModuleEmbedding, SubmoduleSet, default_embedding, realize_embedding

# cells above this many trace evaluations are reported formula-only by generate_table
TABLE_VERIFY_BUDGET = 2**24


def census_formula(p: int, d: int, m: int, alpha: int | None = None, beta: int | None = None) -> int:
    q = p**d
    if m < 0 or d < 1:
        raise DomainError(f"invalid (d, m) = ({d}, {m})")
    if p == 2:
        if alpha is None or beta is None:
            raise DomainError("characteristic 2 needs both alpha and beta")
        if not 0 <= alpha <= m or not 0 <= beta <= d * (m - alpha):
            raise DomainError(f"(alpha, beta) = ({alpha}, {beta}) out of range for d={d}, m={m}")
        return q**alpha * ((q - 1) * 2**beta + 1)
    if alpha is None:
        alpha = m
    if alpha != m or beta not in (None, 0):
        raise DomainError("odd characteristic forces alpha = m and no scalar part")
    return q ** (m + 1)


@dataclass
class CensusResult:
    t: int
    method: str
    total: int = 0
    algebra: AlgebraParams | None = None
    counts: np.ndarray | None = field(default=None, repr=False)

    @property
    def trace_multiplicity(self) -> dict[TElem, int]:
        if self.counts is None:
            return {}
        return {self.algebra.element(int(c)): int(self.counts[c]) for c in np.nonzero(self.counts)[0]}

    def traces(self) -> list[TElem]:
        return list(self.trace_multiplicity)

    def to_json(self) -> dict:
        return {"t": self.t, "method": self.method, "total": self.total}


def _as_spec(field_: FieldParams, D) -> GroupSpec:
    if isinstance(D, GroupSpec):
        return D
    if D is None:
        D = trivial_subgroup(field_)
    return GroupSpec(field_, D)


def _trace_counts(field_: FieldParams, m: int, mu: np.ndarray, hs: np.ndarray) -> np.ndarray:
    """bincount of trace codes of (1 + mu) h over all pairs.

    mu: (n, m, 4) field codes of the coordinate matrices A_k (mu = sum A_k X_k);
    hs: (k, 4) packed matrices over F_q.
    """
    ft = field_tables(field_)
    q = field_.q
    add, mul = ft.add, ft.mul
    n = mu.shape[0]
    dim = m + 1
    # X = 1 + mu as (n, 2, 2, dim): constant part identity, X_k part A_k
    X = np.zeros((n, 2, 2, dim), dtype=np.int64)
    X[:, 0, 0, 0] = X[:, 1, 1, 0] = ft.one if hasattr(ft, "one") else 1
    X[..., 1:] = mu.reshape(n, m, 2, 2).transpose(0, 2, 3, 1)
    # Y = h as constant matrices (k, 2, 2, dim)
    Y = np.zeros((hs.shape[0], 2, 2, dim), dtype=np.int64)
    Y[..., 0] = hs.reshape(-1, 2, 2)
    Xb = X[None]
    Yb = Y[:, None]
    tr = None
    for i in range(2):
        for l in range(2):
            u = Xb[:, :, i, l, :]
            v = Yb[:, :, l, i, :]
            # product in T: c0 = u0 v0, eps_k = u0 v_k + u_k v0
            prod = [mul[u[..., 0], v[..., 0]]]
            for r in range(1, dim):
                prod.append(add[mul[u[..., 0], v[..., r]], mul[u[..., r], v[..., 0]]])
            term = np.stack(prod, axis=-1)
            tr = term if tr is None else add[tr, term]
    keys = tr @ (q ** np.arange(dim, dtype=np.int64))
    return np.bincount(keys.ravel(), minlength=q**dim)


def _chunk_worker(args):
    field_, m, mu, hs = args
    return _trace_counts(field_, m, mu, hs)


def census_bruteforce(M, D=None, cap: int | None = None, workers: int = 1,
                      chunk: int | None = None) -> CensusResult:
    """Enumerate every pair (mu, h) and count distinct traces of (1 + mu) h.

    ``M`` is a :class:`ModuleEmbedding` or an explicit :class:`SubmoduleSet`;
    ``D`` a :class:`UnitSubgroup` (default {1}) or a full :class:`GroupSpec`.
    The h-loop is split into chunks, optionally spread over ``workers``
    processes; the merged counts do not depend on the split.
    """
    if isinstance(M, ModuleEmbedding):
        field_, m = M.field, M.m
        spec = _as_spec(field_, D)
        sub = realize_embedding(M, spec, verify=False)
    elif isinstance(M, SubmoduleSet):
        sub = M
        field_, m = sub.space.field, sub.m
        spec = _as_spec(field_, D)
    else:
        raise DomainError(f"unsupported module description {type(M).__name__}")
    cap = census_cap(cap)
    q = field_.q
    G = gl2d_codes(spec)
    required = len(sub) * len(G)
    if required > cap:
        raise CapacityError(f"census needs {required} trace evaluations, over the cap {cap}",
                            required=required, cap=cap)
    mu = sub.coordinate_array()
    if chunk is None:
        chunk = max(1, (1 << 21) // max(1, len(sub)))
    pieces = [G[i:i + chunk] for i in range(0, len(G), chunk)]
    counts = np.zeros(q ** (m + 1), dtype=np.int64)
    if workers > 1 and len(pieces) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_chunk_worker, [(field_, m, mu, hs) for hs in pieces]):
                counts += part
    else:
        for hs in pieces:
            counts += _trace_counts(field_, m, mu, hs)
    t = int(np.count_nonzero(counts))
    return CensusResult(t=t, method="bruteforce", total=int(counts.sum()),
                        algebra=AlgebraParams(field_, m), counts=counts)


def traces_generate(M, D=None, cap: int | None = None) -> tuple[bool, int]:
    """Whether the trace set generates all of T, and the generated dimension."""
    res = census_bruteforce(M, D, cap=cap)
    sub: Subalgebra = subalgebra_generated(res.traces(), res.algebra)
    return sub.is_everything, sub.dim


def module_cost(p: int, d: int, m: int, alpha: int, beta: int, group_order: int | None = None) -> int:
    q = p**d
    if group_order is None:
        group_order = q * (q * q - 1)
    return q ** (3 * alpha) * 2**beta * group_order


@dataclass
class TableCell:
    alpha: int
    beta: int
    t: int
    verified: bool = False
    generates: bool = True

    def to_json(self) -> dict:
        out = {"alpha": self.alpha, "beta": self.beta, "t": self.t,
               "status": "verified" if self.verified else "formula-only"}
        if not self.generates:
            out["note"] = "(c)-incompatible"
        return out


@dataclass
class TraceTable:
    p: int
    d: int
    m: int
    cells: list[TableCell]

    @property
    def width(self) -> int:
        return self.d * self.m + 1

    def grid(self) -> list[list[int | None]]:
        rows = [[None] * self.width for _ in range(self.m + 1)]
        for c in self.cells:
            rows[c.alpha][c.beta] = c.t
        return rows

    def render(self) -> str:
        grid = self.grid()
        cw = max(len(str(c.t)) for c in self.cells)
        cw = max(cw, len(str(self.width - 1)))
        head = f"F_{self.p}^{self.d}, m={self.m}"
        lines = [head, "alpha\\beta | " + " ".join(str(b).rjust(cw) for b in range(self.width))]
        lines.append("-" * len(lines[-1]))
        for a, row in enumerate(grid):
            vals = " ".join(("-" if v is None else str(v)).rjust(cw) for v in row)
            lines.append(f"{str(a).rjust(10)} | {vals}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d, "m": self.m,
                "field": gf(self.p, self.d).to_json(),
                "cells": [c.to_json() for c in self.cells]}


def generate_table(p: int, d: int, m: int, verify: bool = False,
                   verify_budget: int = TABLE_VERIFY_BUDGET) -> TraceTable:
    """All realizable trace counts for (q, m), one cell per (alpha, beta)."""
    if p != 2:
        raise DomainError("trace-count tables only exist in characteristic 2")
    field_ = gf(p, d)
    cells = []
    for alpha in range(m + 1):
        for beta in range(d * (m - alpha) + 1):
            cell = TableCell(alpha, beta, census_formula(p, d, m, alpha, beta),
                             generates=beta >= m - alpha)
            if verify and module_cost(p, d, m, alpha, beta) <= verify_budget:
                res = census_bruteforce(default_embedding(field_, m, alpha, beta))
                if res.t != cell.t:
                    raise AssertionError(
                        f"brute force gives {res.t}, formula {cell.t} at (alpha, beta)=({alpha}, {beta})")
                cell.verified = True
            cells.append(cell)
    return TraceTable(p, d, m, cells)


def realizable_values(p: int, d: int, m: int) -> dict[int, tuple[int, int | None]]:
    """t -> (alpha, beta) over the whole admissible grid."""
    if p != 2:
        return {census_formula(p, d, m): (m, None)}
    out: dict[int, tuple[int, int | None]] = {}
    for alpha in range(m + 1):
        for beta in range(d * (m - alpha) + 1):
            t = census_formula(p, d, m, alpha, beta)
            if t in out:
                raise AssertionError(f"t={t} realized twice: {out[t]} and {(alpha, beta)}")
            out[t] = (alpha, beta)
    return out
