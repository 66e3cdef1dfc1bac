"""Normal subgroups of GL_2^D(F_q) and their images in PGL_2^D(F_q)."""

from __future__ import annotations

import time
from collections import deque
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import ParameterError
from ..ffield import UnitSubgroup, field_of_order, field_tables, full_unit_group, trivial_subgroup
from ..matgrp import GroupSpec, gl2d_codes, pdet
from .extensions import FiniteGroup


def conjugacy_classes(G: FiniteGroup) -> list[frozenset[int]]:
    seen = np.zeros(G.n, dtype=bool)
    out = []
    for x in range(G.n):
        if seen[x]:
            continue
        cls = frozenset(int(c) for c in G.table[G.table[:, x], G.inv])
        seen[list(cls)] = True
        out.append(cls)
    return out


def normal_subgroups(G: FiniteGroup) -> list[frozenset[int]]:
    """All normal subgroups, as closures of unions of conjugacy classes.

    Breadth-first from {1}: every normal subgroup N' above N is reached by
    adding the classes of N' one at a time, so the search is complete.
    """
    classes = conjugacy_classes(G)
    start = frozenset([G.identity])
    found = {start}
    queue = deque([start])
    while queue:
        N = queue.popleft()
        for C in classes:
            if C <= N:
                continue
            J = frozenset(G.closure(list(N | C)))
            if J not in found:
                found.add(J)
                queue.append(J)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@dataclass
class NormalSubgroupEntry:
    order: int
    det: list[int]
    scalar: bool
    status: str


@dataclass
class NormalLemmaReport:
    q: int
    D: list[int]
    group_order: int
    scalars: int
    normal_subgroups: list[NormalSubgroupEntry] = field(default_factory=list)
    checked: int = 0
    passed: bool = True
    seconds: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)


def verify_normal_subgroup_lemma(q: int, D: UnitSubgroup | str | None = None) -> NormalLemmaReport:
    """Every normal J not inside the scalars with det(J) = D maps onto PGL_2^D.

    ``D`` may be a UnitSubgroup or one of "trivial" / "full".
    """
    t0 = time.perf_counter()
    F = field_of_order(q)
    if D is None or D == "trivial":
        D = trivial_subgroup(F)
    elif D == "full":
        D = full_unit_group(F)
    elif not isinstance(D, UnitSubgroup):
        raise ParameterError("D must be a UnitSubgroup, 'trivial' or 'full'")
    R = field_tables(F)
    G = FiniteGroup.from_packed(R, gl2d_codes(GroupSpec(F, D)).tolist())
    scalars = frozenset(i for i, (a, b, c, d) in enumerate(G.labels) if b == 0 and c == 0 and a == d)
    dets = [pdet(R, g) for g in G.labels]
    report = NormalLemmaReport(q, sorted(D.codes), G.n, len(scalars))
    for J in normal_subgroups(G):
        det_j = sorted({dets[i] for i in J})
        if J <= scalars:
            status = "inside scalars"
        elif set(det_j) != set(D.codes):
            status = "excluded: det(J) != D"
        else:
            JZ = {G.mul(j, z) for j in J for z in scalars}
            report.checked += 1
            if len(JZ) == G.n:
                status = "surjects onto PGL2^D"
            else:
                status = "FAILS: image is a proper subgroup"
                report.passed = False
        report.normal_subgroups.append(NormalSubgroupEntry(len(J), det_j, J <= scalars, status))
    report.seconds = round(time.perf_counter() - t0, 3)
    return report

