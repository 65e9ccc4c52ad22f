"""Shared builders and reference data for the test suite."""

from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from prymforms import prototypes as pr
from prymforms.quadfield import QF, square_root_of
from prymforms.surface import Cyl, assemble, is_valid

DATA = Path(__file__).parent / "data"


@lru_cache(maxsize=None)
def oracles() -> dict:
    return json.loads((DATA / "oracles.json").read_text())


def nonsquare_discs(lo: int, hi: int) -> list[int]:
    return [D for D in range(lo, hi + 1) if D % 4 in (0, 1) and square_root_of(D) is None]


# one-zero surfaces from a permutation of five separatrices -----------------------

def _cycles(perm):
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        out.append(cyc)
    return out


def one_zero_surface(pi, D: int = 5):
    """H(4) diagram whose bottom words are the cycles of pi and top words those of pi+1.

    Every connection has length 1 and every cylinder height 1.  Returns None
    when the words do not close up into a valid one-zero surface.
    """
    n = len(pi)
    top = [(pi[i] + 1) % n for i in range(n)]
    bottoms, tops = _cycles(pi), sorted(_cycles(top), key=len)
    if sorted(map(len, bottoms)) != sorted(map(len, tops)):
        return None
    q = lambda v: QF.of(v, D)  # noqa: E731
    used, cyls = set(), []
    for j, b in enumerate(bottoms):
        t = next(k for k, c in enumerate(tops) if len(c) == len(b) and k not in used)
        used.add(t)
        cyls.append(Cyl(f"C{j}", q(len(b)), q(1), q(0),
                        tuple(f"x{i}" for i in b), tuple(f"x{i}" for i in tops[t])))
    X = assemble(D, cyls, {f"x{i}": q(1) for i in range(n)}, tag="H(4)")
    return X if is_valid(X) else None


@lru_cache(maxsize=None)
def one_zero_permutations() -> tuple[tuple[int, ...], ...]:
    return tuple(pi for pi in itertools.permutations(range(5)) if one_zero_surface(pi) is not None)


def random_one_zero_permutations(count: int, seed: int = 20240611):
    rng = random.Random(seed)
    pool = list(one_zero_permutations())
    return rng.sample(pool, count)


def sector_vector(k: int, mag: Fraction, lean: int = 1):
    """A vector in open sector k: up for odd k, down for even k, x-component lean*mag/2."""
    vy = mag if k % 2 else -mag
    return (Fraction(lean) * mag / 2, vy)


# prototype surfaces ----------------------------------------------------------------

def parabolic_stable_covers(limit: int = 12, max_disc: int = 60):
    """Stable three-orbit Prym(2,2) double covers of splitting prototypes."""
    out = []
    for D in nonsquare_discs(5, max_disc):
        for p in pr.enumerate_h2_splitting(D):
            for model in ("model1", "model2"):
                X, _ = pr.build_double_cover(p, model)
                out.append((p, model, X))
                if len(out) >= limit:
                    return out
    return out


def three_tori_instances(limit: int = 12, max_disc: int = 60, fraction=Fraction(1, 3)):
    """Three-tori slit surfaces with a horizontal slit of length fraction*min(lambda, w)."""
    out = []
    for D in nonsquare_discs(5, max_disc):
        for p in pr.enumerate_three_tori(D):
            x = min(p.lam, QF.of(p.w, D)) * fraction
            out.append((p, x, pr.build_three_tori(p, (x, 0))))
            if len(out) >= limit:
                return out
    return out
