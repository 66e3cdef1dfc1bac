"""From an observed trace count back to the image group and its field extensions."""

from __future__ import annotations

import bisect
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

from .config import MIN_MULTIPLICITY
from .errors import DomainError, Unrealizable
from .tracecensus import census_formula, realizable_values


def _field_name(q: int) -> str:
    return f"F{q}"


def group_name(q: int, d_order: int) -> str:
    if d_order == 1:
        return f"SL2({_field_name(q)})"
    if d_order == q - 1:
        return f"GL2({_field_name(q)})"
    return f"GL2^D({_field_name(q)}), |D|={d_order}"


def module_name(q: int, alpha: int, beta: int) -> str:
    parts = []
    if alpha:
        parts.append(f"M2^0({_field_name(q)})" + (f"^{alpha}" if alpha > 1 else ""))
    if beta:
        parts.append("C2" + (f"^{beta}" if beta > 1 else ""))
    return " ⊕ ".join(parts) or "0"


def gl2d_order(q: int, d_order: int) -> int:
    return d_order * q * (q * q - 1)


@dataclass
class ImageHypothesis:
    p: int
    d: int
    m: int
    t: int
    alpha: int
    beta: int | None
    module: str
    image: str
    image_order: int
    structure: str

    def to_json(self) -> dict:
        return asdict(self)


def _check_params(p: int, d: int, m: int):
    if p < 2 or d < 1 or m < 0:
        raise DomainError(f"invalid parameters p={p}, d={d}, m={m}")


def infer(p: int, d: int, m: int, t: int, d_order: int = 1) -> ImageHypothesis:
    """The unique module structure with t distinct traces."""
    _check_params(p, d, m)
    if t < 1:
        raise DomainError("a trace count is at least 1")
    q = p**d
    if (q - 1) % d_order:
        raise DomainError(f"|D|={d_order} does not divide q-1={q - 1}")
    table = realizable_values(p, d, m)
    if t not in table:
        values = sorted(table)
        i = bisect.bisect_left(values, t)
        below = values[i - 1] if i > 0 else None
        above = values[i] if i < len(values) else None
        raise Unrealizable(t, below, above)
    alpha, beta = table[t]
    g = group_name(q, d_order)
    if p == 2:
        mod = module_name(q, alpha, beta)
        order = 2 ** (3 * d * alpha + beta) * gl2d_order(q, d_order)
        if alpha == 0:
            structure = "direct" if beta else "trivial"
            image = f"{mod} ⋊ {g}" if beta else g
        else:
            structure = "semidirect"
            image = f"({mod}) ⋊ {g}" if beta or alpha > 1 else f"{mod} ⋊ {g}"
    else:
        mod = f"M2^0({_field_name(q)})" + (f"^{m}" if m > 1 else "") if m else "0"
        order = q ** (3 * m) * gl2d_order(q, d_order)
        structure = "semidirect" if m else "trivial"
        image = f"GL2^D(T) = {mod} ⋊ {g}" if m else g
    return ImageHypothesis(p, d, m, t, alpha, beta if p == 2 else None, mod, image, order, structure)


@dataclass
class ExtensionReport:
    p: int
    degree: int
    matrix_part_degree: int
    central_part_degree: int
    ramification: str
    parts: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def ext_degrees(p: int, d: int, m: int, alpha: int | None = None, beta: int | None = None) -> ExtensionReport:
    """Degree of L/K and its split into the matrix part and the central part."""
    _check_params(p, d, m)
    census_formula(p, d, m, alpha, beta)  # range validation
    if p == 2:
        matrix_deg = 2 ** (3 * d * alpha)
        central_deg = 2**beta
        unram = "unramified at all primes ell not dividing 2N"
    else:
        alpha = m
        matrix_deg = p ** (3 * d * m)
        central_deg = 1
        unram = "unramified at all primes ell not dividing pN"
    parts = {}
    if matrix_deg > 1:
        parts["matrix"] = {
            "group": f"M2^0(F{p ** d})^{alpha}",
            "degree": matrix_deg,
            "action": "nontrivial conjugation",
            "definable_over_Q": False,
        }
    if central_deg > 1:
        parts["central"] = {
            "group": f"C2^{beta}",
            "degree": central_deg,
            "action": "trivial (central)",
            "definable_over_Q": True,
        }
    return ExtensionReport(p, matrix_deg * central_deg, matrix_deg, central_deg, unram, parts)


@dataclass
class MultiplicityVerdict:
    observed: int
    total: int
    bound: int | None
    level: int | None
    multiplicities: list[int]
    candidates: list[int]
    excluded: list[int]
    gap_to_next: int | None
    min_multiplicity: int
    last_new_position: int | None
    threshold: dict
    verdict: str
    reasons: list[str]

    def to_json(self) -> dict:
        return asdict(self)


def multiplicity_report(observed: Mapping | Sequence[int], p: int, d: int, m: int,
                        bound: int | None = None, level: int | None = None,
                        stream: Sequence | None = None,
                        min_multiplicity: int = MIN_MULTIPLICITY) -> MultiplicityVerdict:
    """Judge whether the distinct traces seen so far are likely all of them.

    ``observed`` maps trace -> count (or is a bare list of counts). When
    ``stream`` (the traces in arrival order) is given, the run is also
    required to have shown no new trace during its second half.
    """
    counts = list(observed.values()) if isinstance(observed, Mapping) else list(observed)
    if not counts:
        raise DomainError("no observations")
    t_obs = len(counts)
    total = sum(counts)
    values = sorted(realizable_values(p, d, m))
    candidates = [v for v in values if v >= t_obs]
    excluded = [v for v in values if v < t_obs]
    above = [v for v in candidates if v > t_obs]
    gap = above[0] - t_obs if above else None
    last_new = None
    if stream is not None:
        seen = set()
        for i, x in enumerate(stream):
            if x not in seen:
                seen.add(x)
                last_new = i
    reasons = []
    if t_obs not in values:
        reasons.append(f"{t_obs} distinct traces is not a realizable count")
    if min(counts) < min_multiplicity:
        reasons.append(f"some trace seen fewer than {min_multiplicity} times")
    if stream is not None and last_new is not None and last_new >= len(stream) / 2:
        reasons.append("a new trace appeared in the second half of the stream")
    return MultiplicityVerdict(
        observed=t_obs, total=total, bound=bound, level=level, multiplicities=counts,
        candidates=candidates, excluded=excluded, gap_to_next=gap,
        min_multiplicity=min(counts), last_new_position=last_new,
        threshold={"min_multiplicity": min_multiplicity, "no_new_in_second_half": stream is not None},
        verdict="inconclusive" if reasons else "stable", reasons=reasons,
    )
