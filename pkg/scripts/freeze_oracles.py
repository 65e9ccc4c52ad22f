"""Recompute the brute-force reference tables used by the test suite.

Nothing here imports prymforms: every table is produced by plain nested
loops over integers and Fractions so that the package is checked against an
independent computation.  Run from the repository root:

    python3 scripts/freeze_oracles.py            # rewrite tests/data/oracles.json
    python3 scripts/freeze_oracles.py --check    # exit 1 if the frozen file is stale
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass
from decimal import Decimal, getcontext
from fractions import Fraction
from math import gcd
from pathlib import Path

getcontext().prec = 60

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"


@dataclass(frozen=True)
class OracleConfig:
    max_disc: int = 400
    max_obstruction_disc: int = 100
    torus_box: int = 10


def admissible_discs(n: int) -> list[int]:
    return [D for D in range(1, n + 1) if D % 4 in (0, 1)]


def is_square(n: int) -> bool:
    return n >= 0 and round(n ** 0.5) ** 2 == n


# prototype enumeration --------------------------------------------------------

def brute_prototypes(max_disc: int, k: int, window: bool) -> dict[int, list[list[int]]]:
    """All (w,h,t,e) with D = e^2 + k*w*h <= max_disc, binned by D.

    Loops run over full boxes and test every defining condition afterwards.
    """
    out: dict[int, list[list[int]]] = {D: [] for D in admissible_discs(max_disc)}
    top = max_disc // k
    for w in range(1, top + 1):
        for h in range(1, top + 1):
            if k * w * h > max_disc:
                continue
            for e in range(-max_disc, max_disc + 1):
                D = e * e + k * w * h
                if D > max_disc:
                    continue
                for t in range(0, max(w, h)):
                    if not t < gcd(w, h):
                        continue
                    if gcd(gcd(w, h), gcd(t, e)) != 1:
                        continue
                    if window:
                        lam = (Decimal(e) + Decimal(D).sqrt()) / 2
                        if not (0 < lam < w):
                            continue
                    if D in out:
                        out[D].append([w, h, t, e])
    for D in out:
        out[D].sort(key=lambda p: (p[3], p[0], p[1], p[2]))
    return out


# torus unfolding --------------------------------------------------------------

def unfold_unit_torus(p: int, q: int) -> dict:
    """Walk the line of slope q/p from the corner of the unit square grid.

    Returns the closing holonomy, the number of unit squares crossed, and the
    cylinder data (width, height, twist) in the frame sending the normalized
    direction to (1, 0) by [[dx/n, dy/n], [-dy, dx]].
    """
    x, y = Fraction(0), Fraction(0)
    squares = 0
    sx = 1 if p > 0 else -1 if p < 0 else 0
    sy = 1 if q > 0 else -1 if q < 0 else 0
    while True:
        # next vertical and horizontal grid lines along the ray
        cand = []
        if p:
            nx = (x // 1 + 1) if sx > 0 else (-((-x) // 1) - 1)
            cand.append((nx - x) / p)
        if q:
            ny = (y // 1 + 1) if sy > 0 else (-((-y) // 1) - 1)
            cand.append((ny - y) / q)
        step = min(c for c in cand if c > 0)
        x, y = x + step * p, y + step * q
        squares += 1
        if x.denominator == 1 and y.denominator == 1:
            break
    hol = (int(x), int(y))
    lead = Fraction(p if p else q)
    dx, dy = Fraction(p) / lead, Fraction(q) / lead
    n = dx * dx + dy * dy

    def frame(u, v):
        return (dx * u + dy * v) / n, -dy * u + dx * v

    width = frame(*hol)[0]
    if width < 0:  # a direction is an unoriented line
        hol, width = (-hol[0], -hol[1]), -width
    # the lowest lattice point strictly above the closed leaf sets height and twist
    best = None
    for u in range(-25, 26):
        for v in range(-25, 26):
            fx, fy = frame(u, v)
            if fy > 0 and (best is None or fy < best[1]):
                best = (fx, fy)
    height = best[1]
    twist = best[0] - width * (best[0] / width).__floor__()
    return {
        "p": p, "q": q, "holonomy": list(hol), "squares": squares,
        "width": str(width), "height": str(height), "twist": str(twist),
    }


def torus_table(box: int) -> list[dict]:
    rows = []
    for p in range(-box, box + 1):
        for q in range(-box, box + 1):
            if (p, q) != (0, 0) and gcd(p, q) == 1:
                rows.append(unfold_unit_torus(p, q))
    return rows


# permutation cycle counts -----------------------------------------------------

def cycle_count(perm: tuple[int, ...]) -> int:
    seen, count = set(), 0
    for i in range(len(perm)):
        if i in seen:
            continue
        count += 1
        while i not in seen:
            seen.add(i)
            i = perm[i]
    return count


def rotated_composition(pi: tuple[int, ...], k: int) -> tuple[int, ...]:
    """(j, j+1, j+2) after pi with j = 3k mod 5: the separatrix triple opened in sector k."""
    j = 3 * k % 5
    rot = {j: (j + 1) % 5, (j + 1) % 5: (j + 2) % 5, (j + 2) % 5: j}
    return tuple(rot.get(pi[i], pi[i]) for i in range(5))


def sector_table() -> dict[str, list[int]]:
    return {
        "".join(map(str, pi)): [cycle_count(rotated_composition(pi, k)) for k in range(10)]
        for pi in itertools.permutations(range(5))
    }


# obstruction system -----------------------------------------------------------

def primitive_parallel(w: int, h: int, t: int, direction: tuple[int, int]) -> Fraction:
    """Scalar c > 0 with c*direction the shortest vector of Z(w,0)+Z(t,h) along direction."""
    dx, dy = direction
    best = None
    for m in range(-60, 61):
        for n in range(-60, 61):
            x, y = m * w + n * t, n * h
            if (x, y) == (0, 0) or x * dy != y * dx:
                continue
            c = Fraction(x, dx) if dx else Fraction(y, dy)
            if c > 0 and (best is None or c < best):
                best = c
    return best


def obstruction_row(w: int, h: int, t: int, e: int) -> dict:
    D = e * e + 8 * w * h
    # each swapped torus contributes a shadow c*(direction) with coefficient c/2;
    # the class coefficient doubles the sum over the two (equal) swapped lattices
    beta = 2 * primitive_parallel(w, h, t, (0, 1))
    beta_p = 2 * primitive_parallel(w, h, t, (1, 2))
    row = {"proto": [w, h, t, e], "disc": D, "beta": str(beta), "beta_prime": str(beta_p)}
    # R*(e+b') - R'*(e+b) = 2b' - b ;  R - R' = b*b'/(2wh)
    a11, a12, r1 = e + beta_p, -(e + beta), 2 * beta_p - beta
    a21, a22, r2 = Fraction(1), Fraction(-1), beta * beta_p / (2 * w * h)
    det = a11 * a22 - a12 * a21
    row["det"] = str(det)
    if det == 0:
        row["unique"] = False
        return row
    R = (r1 * a22 - a12 * r2) / det
    Rp = (a11 * r2 - a21 * r1) / det
    lam = (Decimal(e) + Decimal(D).sqrt()) / 2
    num = lam + Decimal(beta.numerator) / Decimal(beta.denominator)
    den = Decimal(R.numerator) / Decimal(R.denominator) * lam + Decimal(beta.numerator) / Decimal(beta.denominator)
    row.update({"unique": True, "R": str(R), "R_prime": str(Rp)})
    row["s2_float"] = float(num / den) if den != 0 else None
    return row


def obstruction_table(max_disc: int) -> list[dict]:
    protos = brute_prototypes(max_disc, 8, window=False)
    rows = []
    for D, plist in protos.items():
        if is_square(D):
            continue
        rows += [obstruction_row(*p) for p in plist]
    return rows


def build(cfg: OracleConfig) -> dict:
    return {
        "config": {"max_disc": cfg.max_disc, "max_obstruction_disc": cfg.max_obstruction_disc,
                   "torus_box": cfg.torus_box},
        "three_tori": {str(D): v for D, v in brute_prototypes(cfg.max_disc, 8, window=False).items()},
        "h2_splitting": {str(D): v for D, v in brute_prototypes(cfg.max_disc, 4, window=True).items()},
        "torus_unfolding": torus_table(cfg.torus_box),
        "sector_cycles": sector_table(),
        "obstruction": obstruction_table(cfg.max_obstruction_disc),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare against the frozen file instead of writing")
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args(argv)
    data = build(OracleConfig())
    text = json.dumps(data, indent=1, sort_keys=True) + "\n"
    if args.check:
        current = args.out.read_text() if args.out.exists() else ""
        if current != text:
            print(f"{args.out} is stale", file=sys.stderr)
            return 1
        print(f"{args.out} is up to date")
        return 0
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(text)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
