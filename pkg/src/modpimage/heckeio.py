"""Hecke trace datasets: parsing, streaming census, analysis and synthetic data.

File format (UTF-8 JSON)::

    {"field":{"p":2,"d":2,"modulus":[1,1,1]},"m":1,"level":67,"weight":2,
     "records":[{"ell":3,"trace":[[c,...],[c,...]]}, ...]}

``trace`` lists the m+1 coordinates of a_ell in T (constant first), each as
d coefficients over F_p. Optional header keys: ``character`` (free text),
``det_order`` (|D|, default 1) and ``notes`` (free text).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import jsonschema
import numpy as np
from sympy import isprime, primerange

from .errors import DatasetError, DomainError, ParameterError
from .ffield import FieldParams, UnitSubgroup
from .imageinfer import ext_degrees, infer, multiplicity_report
from .localalg import AlgebraParams, TElem, subalgebra_generated
from .tracecensus import census_bruteforce, realizable_values

SCHEMA = {
    "type": "object",
    "required": ["field", "m", "level", "weight", "records"],
    "additionalProperties": False,
    "properties": {
        "field": {
            "type": "object",
            "required": ["p", "d", "modulus"],
            "additionalProperties": False,
            "properties": {
                "p": {"type": "integer", "minimum": 2},
                "d": {"type": "integer", "minimum": 1},
                "modulus": {"type": "array", "items": {"type": "integer", "minimum": 0}},
            },
        },
        "m": {"type": "integer", "minimum": 0},
        "level": {"type": "integer", "minimum": 1},
        "weight": {"type": "integer", "minimum": 1},
        "character": {"type": "string"},
        "det_order": {"type": "integer", "minimum": 1},
        "notes": {"type": "string"},
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["ell", "trace"],
                "additionalProperties": False,
                "properties": {
                    "ell": {"type": "integer"},
                    "trace": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                },
            },
        },
    },
}

_HEADER_ORDER = ("field", "m", "level", "weight", "character", "det_order", "notes")


@dataclass(frozen=True)
class HeckeRecord:
    ell: int
    trace: TElem


@dataclass
class HeckeDataset:
    field: FieldParams
    m: int
    level: int
    weight: int
    records: list[HeckeRecord] = field(default_factory=list)
    character: str | None = None
    det_order: int | None = None
    notes: str | None = None

    @property
    def algebra(self) -> AlgebraParams:
        return AlgebraParams(self.field, self.m)

    def __len__(self):
        return len(self.records)

    def header(self) -> dict:
        out = {"field": self.field.to_json(), "m": self.m, "level": self.level, "weight": self.weight}
        for key in ("character", "det_order", "notes"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out


def _fail(code: str, msg: str):
    raise DatasetError(code, msg)


def parse_dataset(data: bytes | str) -> HeckeDataset:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            _fail(DatasetError.SCHEMA, f"not UTF-8: {exc}")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        _fail(DatasetError.SCHEMA, f"invalid JSON: {exc}")
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        _fail(DatasetError.SCHEMA, exc.message)
    try:
        F = FieldParams.from_json(doc["field"])
    except (ParameterError, DomainError) as exc:
        _fail(DatasetError.SCHEMA, f"bad field parameters: {exc}")
    m, level = doc["m"], doc["level"]
    det_order = doc.get("det_order")
    if det_order is not None and (F.q - 1) % det_order:
        _fail(DatasetError.SCHEMA, f"det_order {det_order} does not divide q-1")
    T = AlgebraParams(F, m)
    Np = level * F.p
    seen: set[int] = set()
    records = []
    for i, rec in enumerate(doc["records"]):
        ell = rec["ell"]
        if ell < 2 or not isprime(ell):
            _fail(DatasetError.COMPOSITE_ELL, f"record {i}: ell={ell} is not prime")
        if Np % ell == 0:
            _fail(DatasetError.BAD_ELL, f"record {i}: ell={ell} divides N*p={Np}")
        if ell in seen:
            _fail(DatasetError.DUPLICATE_ELL, f"record {i}: ell={ell} repeated")
        seen.add(ell)
        coords = rec["trace"]
        if len(coords) != m + 1 or any(len(c) != F.d or any(not 0 <= x < F.p for x in c) for c in coords):
            _fail(DatasetError.COORDINATES,
                  f"record {i}: trace must be {m + 1} vectors of {F.d} residues mod {F.p}")
        records.append(HeckeRecord(ell, T([F(tuple(c)) for c in coords])))
    return HeckeDataset(F, m, level, doc["weight"], records,
                        doc.get("character"), det_order, doc.get("notes"))


def serialize(ds: HeckeDataset) -> bytes:
    """Canonical bytes: compact header, one record per line."""
    head = json.dumps(ds.header(), ensure_ascii=False, separators=(",", ":"))[:-1]
    lines = [json.dumps({"ell": r.ell, "trace": r.trace.to_json()}, separators=(",", ":"))
             for r in ds.records]
    body = "[\n" + ",\n".join(lines) + "\n]" if lines else "[]"
    return (head + ',"records":' + body + "}\n").encode("utf-8")


def load_dataset(path) -> HeckeDataset:
    with open(path, "rb") as fh:
        return parse_dataset(fh.read())


@dataclass
class StreamCensus:
    distinct: dict[int, TElem] = field(default_factory=dict)
    multiplicity: dict[int, int] = field(default_factory=dict)
    first_position: dict[int, int] = field(default_factory=dict)
    bound: int = 0
    consumed: int = 0
    stream: list[int] = field(default_factory=list, repr=False)

    @property
    def t_tilde(self) -> int:
        return len(self.distinct)

    @property
    def last_new_position(self) -> int | None:
        return max(self.first_position.values()) if self.first_position else None

    def feed(self, rec: HeckeRecord) -> None:
        c = rec.trace.code
        if c not in self.distinct:
            self.distinct[c] = rec.trace
            self.first_position[c] = self.consumed
        self.multiplicity[c] = self.multiplicity.get(c, 0) + 1
        self.bound = max(self.bound, rec.ell)
        self.consumed += 1
        self.stream.append(c)

    def to_json(self) -> dict:
        return {
            "t_tilde": self.t_tilde,
            "records": self.consumed,
            "bound": self.bound,
            "last_new_position": self.last_new_position,
            "traces": [{"trace": self.distinct[c].to_json(), "count": self.multiplicity[c],
                        "first_position": self.first_position[c]}
                       for c in sorted(self.distinct, key=self.first_position.get)],
        }


def stream_census(ds: HeckeDataset | Iterable[HeckeRecord]) -> StreamCensus:
    sc = StreamCensus()
    for rec in (ds.records if isinstance(ds, HeckeDataset) else ds):
        sc.feed(rec)
    return sc


def analyze(ds: HeckeDataset) -> dict:
    """Census, candidate counts, hypothesis and extension degrees as one JSON document."""
    F = ds.field
    if not F.theorem_grade:
        raise DomainError(f"q={F.q} is outside the range where the classification holds")
    sc = stream_census(ds)
    p, d, m = F.p, F.d, ds.m
    d_order = ds.det_order or 1
    out: dict = {
        "dataset": {"field": F.to_json(), "m": m, "level": ds.level, "weight": ds.weight,
                    "records": len(ds)},
        "observed": sc.to_json(),
    }
    table = realizable_values(p, d, m)
    if sc.t_tilde == 0:
        out.update(candidates=[{"t": t, "alpha": a, "beta": b} for t, (a, b) in sorted(table.items())],
                   excluded=[], verdict="inconclusive", reasons=["no records"],
                   hypothesis=None, extension=None)
        return out
    counts = [sc.multiplicity[c] for c in sorted(sc.distinct, key=sc.first_position.get)]
    verdict = multiplicity_report(counts, p, d, m, bound=sc.bound, level=ds.level, stream=sc.stream)
    gen = subalgebra_generated(list(sc.distinct.values()), ds.algebra)
    out["observed"]["traces_generate_T"] = gen.is_everything
    out["observed"]["generated_dim"] = gen.dim
    out["candidates"] = [{"t": t, "alpha": table[t][0], "beta": table[t][1]} for t in verdict.candidates]
    out["excluded"] = verdict.excluded
    out["gap_to_next"] = verdict.gap_to_next
    out["verdict"] = verdict.verdict
    out["reasons"] = verdict.reasons
    if verdict.verdict == "stable":
        hyp = infer(p, d, m, sc.t_tilde, d_order)
        out["hypothesis"] = hyp.to_json()
        out["extension"] = ext_degrees(p, d, m, hyp.alpha, hyp.beta).to_json()
    else:
        out["hypothesis"] = None
        out["extension"] = None
    return out


def synthetic_primes(count: int, level: int, p: int) -> list[int]:
    out: list[int] = []
    hi = max(64, 4 * count * max(1, int(np.log(count + 2))))
    while len(out) < count:
        out = [ell for ell in primerange(2, hi) if (level * p) % ell][:count]
        hi *= 2
    return out


def synth_dataset(M, D: UnitSubgroup | None = None, count: int = 0, seed: int = 0,
                  level: int = 1, weight: int = 2, notes: str | None = None) -> HeckeDataset:
    """Traces of `count` uniform group elements of M x| GL_2^D(F_q), on synthetic primes."""
    F, m = M.field, M.m
    res = census_bruteforce(M, D)
    T = res.algebra
    det_order = len(D) if D is not None else None
    ds = HeckeDataset(F, m, level, weight, [], det_order=det_order, notes=notes)
    if count == 0:
        return ds
    codes = np.nonzero(res.counts)[0]
    probs = res.counts[codes] / res.counts.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(codes, size=count, p=probs)
    ds.records = [HeckeRecord(ell, T.element(int(c)))
                  for ell, c in zip(synthetic_primes(count, level, F.p), draws)]
    return ds


def fixture_path(name: str):
    from importlib.resources import files
    return files("modpimage.data").joinpath(name)


def load_fixture(name: str) -> HeckeDataset:
    return parse_dataset(fixture_path(name).read_bytes())
