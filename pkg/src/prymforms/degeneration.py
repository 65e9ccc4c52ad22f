"""Degenerations along the horizontal kernel direction and the inverse surgeries.

A Prym(2,2) diagram with horizontal connections between the exchanged zeros
P and Q can be pushed in the kernel direction until some of those connections
shrink to points.  ``classify_limit`` performs that collapse on the diagram;
``break_zero`` and ``split_slit_pair`` go the other way, opening a zero-length
slit and growing it.  The last part of the module computes the data behind the
non-density obstruction near three-tori surfaces.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd

from .dynamics import deform_weights, kernel_deform
from .periods import (
    FORM_2J_J,
    FORM_J_J,
    PeriodData,
    RMEndo,
    check_eigenform,
    check_self_adjoint,
    mat_mul,
    multiplier_discriminant,
    proper_discriminant,
    rational_matrix_inverse,
)
from .prototypes import PRYM22, ThreeToriProto, enumerate_three_tori, torus_triple
from .quadfield import QF, square_root_of
from .surface import (
    CylSurface,
    SurfaceError,
    _UnionFind,
    assemble,
    distinguished_pair,
    natural_key,
    require_valid,
)


class DegenerationError(SurfaceError):
    pass


class UnboundedInterval(DegenerationError):
    """No connection joins P and Q horizontally, so the kernel ray never degenerates."""


class LimitInconsistency(DegenerationError):
    """The collapsed configuration is one that cannot occur for a nonsquare discriminant."""


class LimitKind(enum.Enum):
    THREE_TORI = "ThreeTori"
    PRYM4 = "Prym4"
    PRYM2_STAR = "Prym2Star"


Lattice = tuple[tuple[QF, QF], tuple[QF, QF]]


@dataclass(frozen=True)
class DegenLimit:
    kind: LimitKind
    parameter: QF
    vanishing: tuple[str, ...]
    surface: CylSurface | None = None
    lattices: tuple[Lattice, ...] | None = None
    proto: ThreeToriProto | None = None
    disc: int | None = None
    source_disc: int | None = None


# holonomy bookkeeping --------------------------------------------------------------

def _pair(X: CylSurface, pair):
    if pair is not None:
        deform_weights(X, pair)
        return tuple(pair)
    found = distinguished_pair(X)
    if found is None:
        raise DegenerationError("no exchanged pair of zeros; pass the pair explicitly")
    return found


def pq_holonomies(X: CylSurface, pair=None) -> dict[str, QF]:
    """Signed horizontal holonomy, read from P to Q, of every connection joining them."""
    P, Q = _pair(X, pair)
    out = {}
    for s in X.scs:
        if (s.from_zero, s.to_zero) == (P, Q):
            out[s.id] = s.length
        elif (s.from_zero, s.to_zero) == (Q, P):
            out[s.id] = -s.length
    return out


def kernel_interval(X: CylSurface, pair=None) -> tuple[QF, QF]:
    """Open interval of x for which kernel_deform(X, (x, 0)) keeps the diagram."""
    hol = pq_holonomies(X, pair)
    if not hol:
        raise UnboundedInterval("stable surface: the horizontal kernel ray is unbounded both ways")
    return interval_from_holonomies(hol.values())


def interval_from_holonomies(values) -> tuple[QF, QF]:
    """(max{-s : s > 0}, min{-s : s < 0}) over signed P-to-Q holonomies."""
    values = list(values)
    pos = [-s for s in values if s.sign() > 0]
    neg = [-s for s in values if s.sign() < 0]
    if not pos or not neg:
        raise DegenerationError("all P-Q holonomies have one sign; the diagram is inconsistent")
    return max(pos), min(neg)


def _at_parameter(X: CylSurface, x: QF, pair):
    """Lengths and twists after the horizontal move by x, zero lengths allowed."""
    m = deform_weights(X, pair)
    lengths = {s.id: s.length + x * (m[s.to_zero] - m[s.from_zero]) for s in X.scs}
    cyls = [
        dataclasses.replace(c, twist=c.twist + x * (m[X.sc[c.top[0]].from_zero] - m[X.sc[c.bottom[0]].from_zero]))
        for c in X.cyls
    ]
    return lengths, cyls


def _components(cyls) -> list[set[str]]:
    uf = _UnionFind()
    owner = {}
    for c in cyls:
        uf.find(c.id)
        for a in c.bottom + c.top:
            if a in owner:
                uf.union(owner[a], c.id)
            owner[a] = c.id
    groups: dict[str, set[str]] = {}
    for c in cyls:
        groups.setdefault(uf.find(c.id), set()).add(c.id)
    return list(groups.values())


def _reglue(cyls, lengths, vanish, image):
    """Move each vanishing connection's top slot to ``image[a]``, then drop them all."""
    out = []
    for c in cyls:
        top = tuple(image.get(a, a) for a in c.top)
        out.append(dataclasses.replace(
            c,
            bottom=tuple(a for a in c.bottom if a not in vanish),
            top=tuple(a for a in top if a not in vanish),
        ))
    return out, {a: v for a, v in lengths.items() if a not in vanish}


def _restricted_inv(X: CylSurface, vanish):
    if X.inv is None:
        return None, None
    sc_perm = {a: b for a, b in X.inv.s.items() if a not in vanish}
    return sc_perm, dict(X.inv.c)


def _rename_by_order(Y: CylSurface, names: dict[int, str]) -> CylSurface:
    from .surface import relabel
    zmap = {z.id: names[z.order] for z in Y.zeros}
    return relabel(Y, zmap=zmap)


# limits ----------------------------------------------------------------------------

def classify_limit(X: CylSurface, endpoint: str, pair=None) -> DegenLimit:
    """Collapse the connections that vanish at one end of the kernel interval."""
    if square_root_of(X.disc) is not None:
        raise DegenerationError("square discriminant: the limit classification does not apply")
    return _collapse(X, endpoint, pair)


def _collapse(X: CylSurface, endpoint: str, pair) -> DegenLimit:
    if endpoint not in ("min", "max"):
        raise ValueError("endpoint must be 'min' or 'max'")
    P, Q = _pair(X, pair)
    lo, hi = kernel_interval(X, (P, Q))
    x = lo if endpoint == "min" else hi
    lengths, cyls = _at_parameter(X, x, (P, Q))
    vanish = tuple(sorted((a for a, v in lengths.items() if not v), key=natural_key))
    if X.inv is not None and {X.inv.s[a] for a in vanish} != set(vanish):
        raise LimitInconsistency("the vanishing connections are not permuted by the involution")
    fixed = [a for a in vanish if X.inv is not None and X.inv.s[a] == a]
    if len(vanish) == 1:
        return _prym4_limit(X, x, vanish, cyls, lengths)
    if len(vanish) == 2:
        if X.inv is not None and len(fixed) == 2:
            raise LimitInconsistency("two involution-invariant twins vanish together (excluded for nonsquare D)")
        return _prym2_star_limit(X, x, vanish, cyls, lengths)
    if len(vanish) == 3:
        if X.inv is not None and len(fixed) != 1:
            raise LimitInconsistency("a vanishing triple needs one invariant and one exchanged pair")
        return _three_tori_limit(X, x, vanish, cyls, lengths)
    raise LimitInconsistency(f"{len(vanish)} connections vanish simultaneously")


def _prym4_limit(X, x, vanish, cyls, lengths) -> DegenLimit:
    new_cyls, new_len = _reglue(cyls, lengths, set(vanish), {})
    sc_perm, cyl_perm = _restricted_inv(X, set(vanish))
    tag = "Prym(4)" if X.inv is not None else "H(4)"
    Y = assemble(X.disc, new_cyls, new_len, None, sc_perm, cyl_perm, tag)
    if len(Y.zeros) != 1:
        raise LimitInconsistency("collapsing a single connection left several zeros")
    Y = require_valid(_rename_by_order(Y, {Y.zeros[0].order: "P0"}))
    return DegenLimit(LimitKind.PRYM4, x, vanish, surface=Y)


def _prym2_star_limit(X, x, vanish, cyls, lengths) -> DegenLimit:
    a, b = vanish
    new_cyls, new_len = _reglue(cyls, lengths, {a, b}, {a: b, b: a})
    sc_perm, cyl_perm = _restricted_inv(X, {a, b})
    Y = assemble(X.disc, new_cyls, new_len, None, sc_perm, cyl_perm, "H(2,0)")
    if sorted(z.order for z in Y.zeros) != [0, 2] or len(_components(new_cyls)) != 1:
        raise LimitInconsistency("uncrossing the vanishing pair does not give a genus-two surface with a marked point")
    Y = _rename_by_order(Y, {2: "P0", 0: "W"})
    periods, recorded = _descend_periods(X)
    Y = require_valid(Y.replace(periods=periods))
    d_limit = multiplier_discriminant(absolute_periods(Y))
    if recorded is not None and recorded != d_limit:
        raise LimitInconsistency(f"recorded endomorphism gives {recorded}, period lattice gives {d_limit}")
    d_src = None
    if X.periods is not None and X.periods.endo is not None:
        d_src = proper_discriminant(X.periods.endo)[1]
        if d_limit not in (d_src, Fraction(d_src, 4)):
            raise LimitInconsistency(f"limit discriminant {d_limit} is neither {d_src} nor {d_src}/4")
    return DegenLimit(LimitKind.PRYM2_STAR, x, vanish, surface=Y, disc=d_limit, source_disc=d_src)


_HALF_FIRST = ((2, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def _descend_periods(X: CylSurface):
    """Periods and endomorphism of the genus-two limit when X records a 2J+J basis."""
    p = X.periods
    if p is None or p.endo is None or p.form != FORM_2J_J:
        return None, None
    S, Sinv = _HALF_FIRST, rational_matrix_inverse(_HALF_FIRST)
    t = mat_mul(mat_mul(S, p.endo.t), Sinv)
    if any(Fraction(v).denominator != 1 for row in t for v in row):
        raise LimitInconsistency("the endomorphism does not descend to the genus-two limit")
    endo = RMEndo(tuple(tuple(int(v) for v in row) for row in t), p.endo.e, p.endo.c)
    half = Fraction(1, 2)
    re = (p.re[0] * half,) + p.re[1:]
    im = (p.im[0] * half,) + p.im[1:]
    out = PeriodData(FORM_J_J, re, im, p.labels, "h2-marked", p.proto, endo, p.extra)
    return out, proper_discriminant(endo)[1]


def _three_tori_limit(X, x, vanish, cyls, lengths) -> DegenLimit:
    vs = set(vanish)
    chosen = None
    for perm in permutations(vanish):
        image = dict(zip(vanish, perm))
        if all(image[a] == a for a in vanish):
            continue
        new_cyls, new_len = _reglue(cyls, lengths, vs, image)
        comps = _components(new_cyls)
        if len(comps) == 3 and all(len(c) == 1 for c in comps):
            chosen = new_cyls
            break
    if chosen is None:
        raise LimitInconsistency("removing the vanishing triple does not separate three tori")
    inv_c = X.inv.c if X.inv is not None else {}
    order = sorted(chosen, key=lambda c: (inv_c.get(c.id) != c.id, natural_key(c.id)))
    lattices = tuple(((c.width, X.q(0)), (c.twist, c.height)) for c in order)
    if X.inv is not None and (lattices[1] != lattices[2]):
        raise LimitInconsistency("the exchanged tori have different lattices")
    return DegenLimit(LimitKind.THREE_TORI, x, vanish, lattices=lattices, proto=match_three_tori(X.disc, lattices))


def match_three_tori(D: int, lattices) -> ThreeToriProto | None:
    """Prototype whose normal form is an upper-triangular image of the given tori."""
    (w0, _), (t0, h0) = lattices[0]
    (w1, _), (t1, h1) = lattices[1]
    for p in enumerate_three_tori(D):
        lam = p.lam
        a, d = lam / w0, lam / h0
        b = -a * t0 / h0
        W, H, T = a * w1, d * h1, a * t1 + b * h1
        if W != p.w or H != p.h or not T.is_rational:
            continue
        g = gcd(p.w, p.h)
        if (T.a - p.t) % g == 0 and (T.a - p.t).denominator == 1:
            return p
    return None


# periods from the diagram ----------------------------------------------------------

def zero_positions(X: CylSurface, root: str | None = None) -> dict[str, tuple[QF, QF]]:
    """Holonomy from ``root`` to every zero along one path in the diagram."""
    edges = _edges(X)
    root = root or X.zeros[0].id
    pos = {root: (X.q(0), X.q(0))}
    changed = True
    while changed:
        changed = False
        for u, v, (hx, hy) in edges:
            if u in pos and v not in pos:
                pos[v] = (pos[u][0] + hx, pos[u][1] + hy)
                changed = True
            elif v in pos and u not in pos:
                pos[u] = (pos[v][0] - hx, pos[v][1] - hy)
                changed = True
    return pos


def _edges(X: CylSurface):
    out = [(s.from_zero, s.to_zero, (s.length, X.q(0))) for s in X.scs]
    for c in X.cyls:
        out.append((X.sc[c.bottom[0]].from_zero, X.sc[c.top[0]].from_zero, (c.twist, c.height)))
    return out


def absolute_periods(X: CylSurface) -> list[tuple[QF, QF]]:
    """Generators of the period lattice of closed curves."""
    pos = zero_positions(X)
    out = []
    for u, v, (hx, hy) in _edges(X):
        out.append((pos[u][0] + hx - pos[v][0], pos[u][1] + hy - pos[v][1]))
    out += [(c.width, X.q(0)) for c in X.cyls]
    return [p for p in out if p[0] or p[1]]


# opening zeros ---------------------------------------------------------------------

def separatrix_rays(X: CylSurface, zero: str) -> list[tuple[str, str]]:
    """Horizontal rays at a zero in counterclockwise order, starting along its smallest outgoing connection.

    Even positions are ("L", b) for outgoing connections, odd positions are
    ("R", a) for incoming ones.
    """
    outs = sorted((s.id for s in X.scs if s.from_zero == zero), key=natural_key)
    if not outs:
        raise DegenerationError(f"zero {zero} has no horizontal connection")
    rays, b = [], outs[0]
    while True:
        a = X.pred_bottom[b]
        rays += [("L", b), ("R", a)]
        b = X.succ_top[a]
        if b == outs[0]:
            break
    if len(rays) != 2 * (X.zero[zero].order + 1):
        raise DegenerationError(f"ray count at {zero} does not match its cone angle")
    return rays


def separatrix_permutation(X: CylSurface, zero: str) -> list[int]:
    """pi with pi[j] the index of the outgoing connection following b_j along a bottom word."""
    rays = separatrix_rays(X, zero)
    outs = [tok[1] for tok in rays[0::2]]
    index = {b: j for j, b in enumerate(outs)}
    return [index[X.succ_bottom[b]] for b in outs]


def _slot(rays, r: int):
    """The junction filling the half-disc between rays r and r+1: ("bottom"|"top", insert-after id)."""
    n = len(rays)
    if r % 2 == 0:
        return "bottom", rays[(r + 1) % n][1]
    return "top", rays[r % n][1]


def _insert(cyls, bottom_after: dict[str, str], top_after: dict[str, str]):
    """Insert new ids right after given connections in bottom/top words."""
    out = []
    for c in cyls:
        def grow(word, after):
            res = []
            for a in word:
                res.append(a)
                if a in after:
                    res.append(after[a])
            return tuple(res)
        out.append(dataclasses.replace(c, bottom=grow(c.bottom, bottom_after), top=grow(c.top, top_after)))
    return out


def _fresh(X: CylSurface, stem: str) -> str:
    k = 0
    while f"{stem}{k}" in X.sc:
        k += 1
    return f"{stem}{k}"


def _check_small(X: CylSurface, v) -> None:
    vx, vy = v
    eps = min(min(s.length for s in X.scs), min(c.height for c in X.cyls)) / 2
    if vx * vx + vy * vy >= eps * eps:
        raise DegenerationError(f"|v| must stay below the embedding radius {eps.approx()}")


def _sector_start(n: int, sector: int, v):
    """Ray to break along and the horizontal seed length, for a vector in the given sector."""
    vx, vy = v
    if not 0 <= sector < n:
        raise ValueError(f"sector must lie in 0..{n - 1}")
    right = sector % 2 == 0
    if not vy:
        if not vx:
            raise ValueError("v must be nonzero")
        if (vx.sign() > 0) != right:
            raise DegenerationError(f"horizontal v points the wrong way for ray {sector}")
        return abs(vx)
    if (vy.sign() > 0) != (sector % 2 == 1):
        raise DegenerationError(f"v is not in sector {sector}: the vertical sign does not match")
    along = vx if right else -vx
    return along if along.sign() > 0 else abs(vy)


def _grow(Y0: CylSurface, pair, sector: int, seed: QF, v) -> CylSurface:
    vx, vy = v
    x0 = seed if sector % 2 == 0 else -seed
    Y = kernel_deform(Y0, (x0, 0), pair)
    if vy:
        Y = kernel_deform(Y, (0, vy), pair)
        if vx != x0:
            Y = kernel_deform(Y, (vx - x0, 0), pair)
    return Y


def break_zero(src: CylSurface, sector_k: int, v, name: str = "s") -> CylSurface:
    """Split the order-four zero of a one-zero surface into P and Q joined by holonomy v.

    ``sector_k`` is a ray index when v is horizontal (even rays point right) and
    otherwise the open sector between rays k-1 and k, so v must point up exactly
    when k is odd.
    """
    if len(src.zeros) != 1 or src.zeros[0].order != 4:
        raise DegenerationError("break_zero needs a surface with a single zero of order four")
    v = (src.q(v[0]), src.q(v[1]))
    O = src.zeros[0].id
    rays = separatrix_rays(src, O)
    n = len(rays)
    seed = _sector_start(n, sector_k, v)
    _check_small(src, v)
    r = sector_k
    sigma = _fresh(src, name)
    bottom_after, top_after = {}, {}
    for h in (r, r + n // 2):
        side, after = _slot(rays, h % n)
        (bottom_after if side == "bottom" else top_after)[after] = sigma
    cyls = _insert(src.cyls, bottom_after, top_after)
    lengths = {s.id: s.length for s in src.scs}
    lengths[sigma] = src.q(0)
    names = {rays[(r + 1) % n]: "P", rays[(r + n // 2 + 1) % n]: "Q"}
    sc_perm = cyl_perm = None
    if src.inv is not None:
        sc_perm = dict(src.inv.s)
        sc_perm[sigma] = sigma
        cyl_perm = dict(src.inv.c)
    tag = PRYM22 if src.inv is not None else "H(2,2)"
    Y0 = assemble(src.disc, cyls, lengths, names, sc_perm, cyl_perm, tag, src.periods)
    return _grow(Y0, ("P", "Q"), sector_k, seed, v)



def _cycles_of(perm) -> list[list[int]]:
    seen, out = set(), []
    for i in range(len(perm)):
        if i not in seen:
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = perm[j]
            out.append(cyc)
    return out


def sector_triple(sector_k: int) -> tuple[int, int, int]:
    """Outgoing separatrices whose gluing is rotated when a zero of order four opens into sector k.

    Sectors k and k+5 give the same surface; the triple starts at half the
    even one of the two.
    """
    j = 3 * sector_k % 5
    return j, (j + 1) % 5, (j + 2) % 5


def zero_break_cycles(pi, sector_k: int) -> list[list[int]]:
    """Cycles of (j, j+1, j+2) o pi: closed leaves through the opened disc at the level of the old zero."""
    a, b, c = sector_triple(sector_k)
    rot = {a: b, b: c, c: a}
    return _cycles_of([rot.get(x, x) for x in pi])


def zero_break_cylinder_count(pi, old_count: int, sector_k: int) -> int:
    """Horizontal cylinders after opening the zero into an open sector.

    A leaf cycle avoiding the triple continues the old cylinder above it, and
    one that only enters the first two separatrices of the triple continues the
    cylinder below; every other cycle is a new cylinder.
    """
    a, b, c = sector_triple(sector_k)
    triple, lower = {a, b, c}, {a, b}
    new = 0
    for cyc in zero_break_cycles(pi, sector_k):
        images = {pi[x] for x in cyc}
        if not images & triple or images <= lower:
            continue
        new += 1
    return old_count + new

# slit pairs --------------------------------------------------------------------------

@dataclass(frozen=True)
class SlitPairResult:
    surface: CylSurface
    disc: int
    source_disc: int
    k: int


def split_slit_pair(src: CylSurface, sector_k: int, v, marked: str = "W") -> SlitPairResult:
    """Open the zero of a marked genus-two surface and a slit at the marked point, glued crosswise.

    The result carries period data in a basis adapted to the marked point, and
    its discriminant is D' or 4D' according to a parity test.
    """
    if marked not in src.zero or src.zero[marked].order != 0:
        raise DegenerationError(f"{marked} is not a marked regular point of the source")
    others = [z for z in src.zeros if z.id != marked]
    if len(others) != 1 or others[0].order != 2:
        raise DegenerationError("split_slit_pair needs a genus-two surface with one zero of order two")
    if src.inv is None:
        raise DegenerationError("the source must carry its hyperelliptic involution")
    P0 = others[0].id
    v = (src.q(v[0]), src.q(v[1]))
    rays = separatrix_rays(src, P0)
    n = len(rays)
    seed = _sector_start(n, sector_k, v)
    _check_small(src, v)
    r = sector_k
    sA = _fresh(src, "u")
    sB = sA + "'"
    # first slit at the zero: bottom slot goes to sA, top slot to sB
    bottom_after, top_after = {}, {}
    for h in (r, r + n // 2):
        side, after = _slot(rays, h % n)
        if side == "bottom":
            bottom_after[after] = sA
        else:
            top_after[after] = sB
    # second slit at the marked point, crosswise: bottom slot to sB, top slot to sA
    x_w = next(s.id for s in src.scs if s.to_zero == marked)
    bottom_after[x_w] = sB
    top_after[x_w] = sA
    cyls = _insert(src.cyls, bottom_after, top_after)
    lengths = {s.id: s.length for s in src.scs}
    lengths[sA] = lengths[sB] = src.q(0)
    names = {rays[(r + 1) % n]: "P", rays[(r + n // 2 + 1) % n]: "Q"}
    sc_perm = dict(src.inv.s)
    sc_perm[sA], sc_perm[sB] = sB, sA
    periods, D, Dp, k = slit_pair_periods(src, P0, marked)
    Y0 = assemble(src.disc, cyls, lengths, names, sc_perm, dict(src.inv.c), PRYM22, periods)
    Y = _grow(Y0, ("P", "Q"), sector_k, seed, v)
    return SlitPairResult(Y, D, Dp, k)


def marked_point_class(src: CylSurface, zero: str, marked: str) -> tuple[int, ...]:
    """Coordinates, in the recorded basis, of the cycle with period twice the holonomy zero -> marked."""
    p = src.periods
    if p is None:
        raise DegenerationError("the source records no homology basis")
    if square_root_of(src.disc) is not None:
        raise DegenerationError("square discriminant: periods do not determine homology classes")
    pos = zero_positions(src, zero)
    tx, ty = pos[marked]
    tx, ty = 2 * tx, 2 * ty
    rows = [[x.a for x in p.re], [x.b for x in p.re], [y.a for y in p.im], [y.b for y in p.im]]
    rhs = [tx.a, tx.b, ty.a, ty.b]
    inv = rational_matrix_inverse(rows)
    sol = [sum(inv[i][j] * rhs[j] for j in range(4)) for i in range(4)]
    if any(Fraction(s).denominator != 1 for s in sol):
        raise DegenerationError("the marked point is not a Weierstrass point of the recorded form")
    return tuple(int(s) for s in sol)


def _transvection(x, v, form):
    """x + <x, v> v for the symplectic form given as a matrix."""
    pairing = sum(x[i] * form[i][j] * v[j] for i in range(4) for j in range(4))
    return tuple(x[i] + pairing * v[i] for i in range(4))


def _adapted_basis(c: tuple[int, ...], form) -> tuple[tuple[int, ...], ...]:
    """Symplectic basis whose second vector is congruent to c mod 2."""
    target = tuple(x % 2 for x in c)
    if not any(target):
        raise DegenerationError("the marked point coincides with the zero")
    basis = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
    gens = [tuple(int(b) for b in f"{m:04b}") for m in range(1, 16)]
    frontier = {tuple(x % 2 for x in basis[1]): ()}
    queue = [tuple(x % 2 for x in basis[1])]
    while queue:
        cur = queue.pop(0)
        if cur == target:
            break
        for g in gens:
            nxt = tuple(x % 2 for x in _transvection(cur, g, form))
            if nxt not in frontier:
                frontier[nxt] = frontier[cur] + (g,)
                queue.append(nxt)
    for g in frontier[target]:
        basis = tuple(_transvection(b, g, form) for b in basis)
    return basis


def slit_pair_periods(src: CylSurface, zero: str, marked: str):
    """(period data, D, D', k) for the slit-pair surface built over ``src``."""
    p = src.periods
    if p is None or p.endo is None or p.form != FORM_J_J:
        raise DegenerationError("the source needs recorded periods and endomorphism in a J+J basis")
    k_src, Dp = proper_discriminant(p.endo)
    c = marked_point_class(src, zero, marked)
    M = _adapted_basis(c, p.form)
    Mt = tuple(zip(*M))
    t_new = mat_mul(mat_mul(rational_matrix_inverse(Mt), p.endo.t), Mt)
    re = tuple(sum((M[i][j] * p.re[j] for j in range(4)), src.q(0)) for i in range(4))
    im = tuple(sum((M[i][j] * p.im[j] for j in range(4)), src.q(0)) for i in range(4))
    k = 1 if all(Fraction(t_new[0][j]) % 2 == 0 for j in (1, 2, 3)) else 2
    T_prime = tuple(tuple(k * Fraction(v) for v in row) for row in t_new)
    S, Sinv = _HALF_FIRST, rational_matrix_inverse(_HALF_FIRST)
    T = mat_mul(mat_mul(Sinv, T_prime), S)
    if any(Fraction(v).denominator != 1 for row in T for v in row):
        raise DegenerationError("lifted endomorphism is not integral")
    endo = RMEndo(tuple(tuple(int(v) for v in row) for row in T), k * p.endo.e, k * k * p.endo.c)
    periods = PeriodData(
        FORM_2J_J,
        (2 * re[0],) + re[1:],
        (2 * im[0],) + im[1:],
        ("a1", "b1", "a2", "b2"),
        "slit-pair",
        p.proto,
        endo,
        (("marked_class", ",".join(map(str, c))),),
    )
    if not check_self_adjoint(endo, FORM_2J_J) or check_eigenform(endo, periods) is None:
        raise DegenerationError("lifted period data is not an eigenform")
    _, D = proper_discriminant(endo)
    return periods, D, Dp, k


def marked_parity_rule(src: CylSurface, zero: str, marked: str) -> bool:
    """True when T c = 0 or T c = c mod 2 for the marked class c (then D = D')."""
    c = marked_point_class(src, zero, marked)
    t = src.periods.endo.t
    tc = tuple(sum(t[i][j] * c[j] for j in range(4)) % 2 for i in range(4))
    return not any(tc) or tc == tuple(x % 2 for x in c)


# shadows and switching ----------------------------------------------------------------

@dataclass(frozen=True)
class Shadow:
    b: tuple[int, int]
    beta: QF
    ratio: QF


def _cross(u, v) -> QF:
    return u[0] * v[1] - u[1] * v[0]


def shadow(lattice: Lattice, b0_period, lam) -> Shadow:
    """Primitive vector of ``lattice`` parallel to ``b0_period`` (same orientation).

    ``ratio`` is the factor with period(b) = ratio * b0_period and
    ``beta = ratio * lam / 2``.
    """
    u, v = lattice
    bx, by = b0_period
    det = _cross(u, v)
    if not det:
        raise DegenerationError("degenerate lattice")
    m = _cross((bx, by), v) / det
    n = _cross(u, (bx, by)) / det
    if n and not (m / n).is_rational or not n and not m:
        raise DegenerationError("no lattice vector is parallel to the given period")
    scale = m if m else n
    mq, nq = m / scale, n / scale
    den = mq.a.denominator * nq.a.denominator // gcd(mq.a.denominator, nq.a.denominator)
    mi, ni = int(mq.a * den), int(nq.a * den)
    g = gcd(mi, ni)
    mi, ni = mi // g, ni // g
    if scale.sign() < 0:
        mi, ni = -mi, -ni
    vec = (u[0] * mi + v[0] * ni, u[1] * mi + v[1] * ni)
    ratio = vec[0] / bx if bx else vec[1] / by
    lam = QF.of(lam, u[0].D)
    return Shadow((mi, ni), ratio * lam / 2, ratio)


@dataclass(frozen=True)
class SwitchedSlit:
    b0: tuple[int, int]
    a0: tuple[int, int]
    shadows: tuple[Shadow, Shadow]
    c_period: tuple[QF, QF]
    old_slit: tuple[QF, QF]
    new_slit: tuple[QF, QF]
    new_basis: tuple[tuple[QF, QF], tuple[QF, QF]]
    slit_ratio: QF
    p: int
    q: int
    beta: QF | None
    lattices: tuple[Lattice, ...]


def _complete_basis(m: int, n: int) -> tuple[int, int]:
    """(p, q) with p*n - q*m = 1."""
    def egcd(a, b):
        if b == 0:
            return a, 1, 0
        g, x, y = egcd(b, a % b)
        return g, y, x - (a // b) * y
    g, x, y = egcd(n, -m)
    if abs(g) != 1:
        raise DegenerationError(f"class ({m},{n}) is not primitive")
    return x * g, y * g


def three_tori_data(X: CylSurface, pair=None):
    """(lattices, slit holonomy P->Q, prototype) for a diagram cut into three tori by its slits."""
    for end in ("min", "max"):
        try:
            lim = _collapse(X, end, pair)
        except (LimitInconsistency, DegenerationError):
            continue
        if lim.kind is LimitKind.THREE_TORI:
            return lim.lattices, (-lim.parameter, X.q(0)), lim.proto
    raise DegenerationError("the surface has no horizontal triple of slits cutting it into three tori")


def switch_slit(X: CylSurface, b0, pair=None) -> SwitchedSlit:
    """New three-tori slit triple obtained by a Dehn twist along b0 + shadows."""
    lattices, v, proto = three_tori_data(X, pair)
    m, n = (int(t) for t in b0)
    if gcd(m, n) != 1:
        raise DegenerationError("b0 must be primitive")
    if n == 0:
        raise DegenerationError("b0 must not be a multiple of the slit's closed curve")
    L0 = lattices[0]
    per_b0 = (L0[0][0] * m + L0[1][0] * n, L0[0][1] * m + L0[1][1] * n)
    lam = proto.lam if proto is not None else None
    shadows = tuple(shadow(L, per_b0, lam if lam is not None else 2) for L in lattices[1:])
    per = [per_b0] + [
        (L[0][0] * s.b[0] + L[1][0] * s.b[1], L[0][1] * s.b[0] + L[1][1] * s.b[1])
        for L, s in zip(lattices[1:], shadows)
    ]
    for j, (L, pj) in enumerate(zip(lattices, per)):
        area = abs(_cross(L[0], L[1]))
        if abs(_cross(v, pj)) >= area:
            raise DegenerationError(f"slit too long: the twist cylinder does not embed in torus {j}")
    c = (sum((q[0] for q in per), X.q(0)), sum((q[1] for q in per), X.q(0)))
    ap, aq = _complete_basis(m, n)
    # shift a0 by multiples of b0 so its b~0 coefficient lies in [0, |n|)
    t = aq // n if n > 0 else -(aq // -n)
    ap, aq = ap - t * m, aq - t * n
    per_a0 = (L0[0][0] * ap + L0[1][0] * aq, L0[0][1] * ap + L0[1][1] * aq)
    A = (per_a0[0] + c[0], per_a0[1] + c[1])
    new_slit = (v[0] + c[0], v[1] + c[1])
    # (1, 0) = p*a0 + q*b0 since ap*n - aq*m = 1
    p, q = n, -aq
    s = abs(v[0]) / L0[0][0]
    beta = None if lam is None else sum((sh.beta for sh in shadows), X.q(0)) * 2
    return SwitchedSlit((m, n), (ap, aq), shadows, c, v, new_slit, (A, per_b0), s, p, q, beta, lattices)



# non-density obstruction -----------------------------------------------------------

class ObstructionInconsistency(DegenerationError):
    pass


@dataclass(frozen=True)
class Obstruction:
    proto: ThreeToriProto
    beta: Fraction
    beta_prime: Fraction
    R: Fraction
    R_prime: Fraction
    s2: QF
    s1_bound: QF

    @property
    def threshold(self) -> QF:
        return min(self.s1_bound, self.s2)

    def verdict(self, s) -> str:
        """'obstructed' when a slit ratio s rules out a Veech surface, else 'inconclusive'."""
        s = QF.of(s, self.proto.disc)
        if s.sign() > 0 and s < self.threshold and s != self.s2:
            return "obstructed"
        return "inconclusive"


def obstruction_classes(p: ThreeToriProto):
    """The two classes (m, n) on the invariant torus used by the obstruction: b~0 and a~0 + 2 b~0."""
    return (0, 1), (1, 2)


def class_beta(p: ThreeToriProto, b0) -> tuple[Fraction, tuple[Shadow, Shadow]]:
    """beta with period(b1 + b2) = (beta / lam) period(b0), from the two shadows."""
    tri = torus_triple(p)
    lam = p.lam
    (u, v) = tri.lattices[0]
    m, n = b0
    per = (u[0] * m + v[0] * n, u[1] * m + v[1] * n)
    shadows = tuple(shadow(L, per, lam) for L in tri.lattices[1:])
    beta = 2 * sum((s.beta for s in shadows), QF.of(0, p.disc))
    if not beta.is_rational:
        raise ObstructionInconsistency(f"beta {beta} is irrational")
    return beta.a, shadows


def embedding_bound(p: ThreeToriProto, b0) -> QF:
    """Largest slit ratio for which the twist cylinders along b0 and its shadows all embed."""
    tri = torus_triple(p)
    lam = p.lam
    (u, v) = tri.lattices[0]
    m, n = b0
    per0 = (u[0] * m + v[0] * n, u[1] * m + v[1] * n)
    _, shadows = class_beta(p, b0)
    bounds = []
    for L, b in zip(tri.lattices, [None, *shadows]):
        if b is None:
            py = per0[1]
        else:
            py = L[0][1] * b.b[0] + L[1][1] * b.b[1]
        area = abs(_cross(L[0], L[1]))
        bounds.append(area / (lam * abs(py)))
    return min(bounds)


def veech_obstruction(p: ThreeToriProto) -> Obstruction:
    """Slit-ratio threshold below which a three-tori slit surface over ``p`` cannot be Veech."""
    D = p.disc
    if square_root_of(D) is not None:
        raise DegenerationError("square discriminant")
    cls, cls_prime = obstruction_classes(p)
    beta, _ = class_beta(p, cls)
    beta_p, _ = class_beta(p, cls_prime)
    if beta == beta_p:
        raise ObstructionInconsistency(
            f"beta = beta' = {beta} for prototype {p}: the two switching conditions coincide"
        )
    # R (e + b') - R' (e + b) = 2 b' - b,  R - R' = b b' / (2wh)
    delta = beta * beta_p / (2 * p.w * p.h)
    R = (2 * beta_p - beta - delta * (p.e + beta)) / (beta_p - beta)
    R_prime = R - delta
    lam = p.lam
    den = R * lam + beta
    if not den:
        raise ObstructionInconsistency("the periodicity condition has no finite slit ratio")
    s2 = (lam + beta) / den
    s1 = min(embedding_bound(p, cls), embedding_bound(p, cls_prime))
    return Obstruction(p, beta, beta_p, R, R_prime, s2, s1)
