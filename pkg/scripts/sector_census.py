"""Compare cylinder counts after breaking a five-prong zero against the sector cycle counts.

For each one-zero test surface and each of the ten sectors, report the cylinder
count of the broken surface, the count predicted by adding the sector cycles,
and the merged count used by the library.

    python3 scripts/sector_census.py --magnitude 1/20
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from support import one_zero_permutations, one_zero_surface, sector_vector  # noqa: E402

from prymforms.degeneration import (  # noqa: E402
    break_zero,
    separatrix_permutation,
    zero_break_cycles,
    zero_break_cylinder_count,
)


@dataclass(frozen=True)
class CensusConfig:
    magnitude: Fraction = Fraction(1, 10)
    verbose: bool = False


def census(cfg: CensusConfig):
    additive = merged = total = 0
    for pi in one_zero_permutations():
        src = one_zero_surface(pi)
        sp = separatrix_permutation(src, src.zeros[0].id)
        for k in range(10):
            got = len(break_zero(src, k, sector_vector(k, cfg.magnitude)).cyls)
            add = len(src.cyls) + len(zero_break_cycles(sp, k))
            mrg = zero_break_cylinder_count(sp, len(src.cyls), k)
            total += 1
            additive += got == add
            merged += got == mrg
            if cfg.verbose:
                print(f"{''.join(map(str, pi))} k={k} cylinders={got} additive={add} merged={mrg}")
    return total, additive, merged


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--magnitude", type=Fraction, default=CensusConfig.magnitude)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    total, additive, merged = census(CensusConfig(args.magnitude, args.verbose))
    print(f"{total} breaks: additive count matches {additive}, merged count matches {merged}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
