"""Regenerate the level-67 fixtures in src/modpimage/data (deterministic)."""

import random
from pathlib import Path

from sympy import primerange

from modpimage.ffield import gf
from modpimage.heckeio import HeckeDataset, HeckeRecord, serialize
from modpimage.modlat import default_embedding
from modpimage.tracecensus import census_bruteforce

COUNTS_1000 = [21, 31, 15, 14, 39, 16, 30]
COUNTS_5000 = [58, 114, 69, 67, 185, 63, 111]
SEED = 67
NOTES = ("Reconstructed fixture. Per-trace multiplicities are reference counts for a "
         "level 67 weight 2 eigenform with T = F4[X]/(X^2), computed up to b={b}. The trace "
         "values are not real eigenvalues: label i is mapped to the i-th trace of "
         "C2 x| SL2(F4) in code order, and the arrival order is a seeded shuffle.")


def main():
    F = gf(2, 2)
    traces = census_bruteforce(default_embedding(F, 1, 0, 1)).traces()
    assert len(traces) == 7
    rng = random.Random(SEED)
    first = [i for i, c in enumerate(COUNTS_1000) for _ in range(c)]
    rng.shuffle(first)
    rest = [i for i, (a, b) in enumerate(zip(COUNTS_1000, COUNTS_5000)) for _ in range(b - a)]
    rng.shuffle(rest)
    labels = first + rest
    out = Path(__file__).resolve().parents[1] / "src" / "modpimage" / "data"
    for b, n in ((1000, len(first)), (5000, len(labels))):
        primes = [ell for ell in primerange(3, b) if ell != 67]
        assert len(primes) == n, (b, len(primes), n)
        ds = HeckeDataset(F, 1, 67, 2, [HeckeRecord(ell, traces[i]) for ell, i in zip(primes, labels)],
                          notes=NOTES.format(b=b))
        (out / f"level67_b{b}.json").write_bytes(serialize(ds))


if __name__ == "__main__":
    main()
