"""Deformations of cylinder diagrams and periodicity analysis.

All computations are exact in Q(sqrt(D)).  A surface is always presented by
its horizontal cylinder decomposition; ``redecompose`` produces the diagram
in another direction by tracing separatrices.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, lcm

from .quadfield import QF, square_root_of
from .surface import (
    Cyl,
    CylSurface,
    SurfaceError,
    alpha_coefficients,
    assemble,
    classify_stability,
    involution_orbits,
    natural_key,
    require_valid,
    rotate_pi,
    zero_weights,
)

DEFAULT_STEP_BOUND = 10**6


class ChamberExit(SurfaceError):
    """The deformation leaves the region where the diagram stays combinatorially fixed.

    ``max_scale`` is the supremum of the admissible scalings of the requested vector.
    """

    def __init__(self, message: str, max_scale: QF):
        super().__init__(message)
        self.max_scale = max_scale


class NotPeriodicWithinBound(SurfaceError):
    pass


class NoRelation(SurfaceError):
    pass


def step_bound_from_env() -> int:
    raw = os.environ.get("PRYM_STEP_BOUND")
    if raw is None:
        return DEFAULT_STEP_BOUND
    bound = int(raw)
    if bound <= 0:
        raise ValueError("PRYM_STEP_BOUND must be positive")
    return bound


@dataclass(frozen=True)
class Direction:
    """A direction, scaled so that its first nonzero coordinate equals 1."""

    x: QF
    y: QF

    def __post_init__(self):
        if not self.x and not self.y:
            raise ValueError("direction vector must be nonzero")
        lead = self.x if self.x else self.y
        if lead != 1:
            object.__setattr__(self, "x", self.x / lead)
            object.__setattr__(self, "y", self.y / lead)

    @classmethod
    def of(cls, vx, vy, D: int) -> "Direction":
        return cls(QF.of(vx, D), QF.of(vy, D))

    def frame_map(self) -> tuple[tuple[QF, QF], tuple[QF, QF]]:
        """Determinant-one map sending this vector to (1, 0)."""
        n = self.x * self.x + self.y * self.y
        return ((self.x / n, self.y / n), (-self.y, self.x))


def _apply(g, re: QF, im: QF) -> tuple[QF, QF]:
    return g[0][0] * re + g[0][1] * im, g[1][0] * re + g[1][1] * im


def _map_periods(X: CylSurface, g):
    p = X.periods
    if p is None:
        return None
    pairs = [_apply(g, a, b) for a, b in zip(p.re, p.im)]
    return dataclasses.replace(p, re=tuple(a for a, _ in pairs), im=tuple(b for _, b in pairs))


def same_diagram(X: CylSurface, Y: CylSurface) -> bool:
    """Equality of the normalized cylinder data, ignoring recorded periods."""
    return X.replace(periods=None) == Y.replace(periods=None)


# linear actions --------------------------------------------------------------------

def horocycle(X: CylSurface, s) -> CylSurface:
    s = X.q(s)
    cyls = tuple(dataclasses.replace(c, twist=c.twist + s * c.height) for c in X.cyls)
    p = X.periods
    if p is not None:
        p = dataclasses.replace(p, re=tuple(a + s * b for a, b in zip(p.re, p.im)))
    return X.replace(cyls=cyls, periods=p)


def act_upper(X: CylSurface, a, b) -> CylSurface:
    """Apply [[a, b], [0, 1/a]] with a > 0; the horizontal direction is preserved."""
    a, b = X.q(a), X.q(b)
    if a.sign() <= 0:
        raise ValueError("diagonal entry must be positive")
    ia = a.inverse()
    cyls = tuple(
        Cyl(c.id, c.width * a, c.height * ia, c.twist * a + c.height * b, c.bottom, c.top)
        for c in X.cyls
    )
    scs = tuple(dataclasses.replace(s, length=s.length * a) for s in X.scs)
    return X.replace(cyls=cyls, scs=scs, periods=_map_periods(X, ((a, b), (X.q(0), ia))))


# kernel deformation ---------------------------------------------------------------

def _min_scale(limits: list[QF]) -> QF | None:
    return min(limits) if limits else None


def _horizontal(X: CylSurface, x: QF, m) -> tuple[CylSurface, list[QF]]:
    """Shift P and Q horizontally; returns the surface and the chamber limits."""
    limits, bad = [], False
    lengths = {}
    for s in X.scs:
        rate = (m[s.to_zero] - m[s.from_zero]) * x
        lengths[s.id] = s.length + rate
        if rate.sign() < 0:
            limits.append(s.length / (-rate))
            bad |= lengths[s.id].sign() <= 0
    if bad:
        raise ChamberExit("a saddle connection length would become non-positive", _min_scale(limits))
    scs = tuple(dataclasses.replace(s, length=lengths[s.id]) for s in X.scs)
    cyls = tuple(
        dataclasses.replace(
            c,
            twist=c.twist + x * (m[X.sc[c.top[0]].from_zero] - m[X.sc[c.bottom[0]].from_zero]),
        )
        for c in X.cyls
    )
    return X.replace(cyls=cyls, scs=scs), limits


def _drift(X: CylSurface, m) -> dict:
    return {c.id: m[X.sc[c.top[0]].from_zero] - m[X.sc[c.bottom[0]].from_zero] for c in X.cyls}


def _vertical_stable(X: CylSurface, y: QF, m) -> tuple[CylSurface, list[QF]]:
    alpha = _drift(X, m)
    limits, bad = [], False
    cyls = []
    for c in X.cyls:
        rate = alpha[c.id] * y
        h = c.height + rate
        if rate.sign() < 0:
            limits.append(c.height / (-rate))
            bad |= h.sign() <= 0
        cyls.append(dataclasses.replace(c, height=h))
    if bad:
        raise ChamberExit("a cylinder height would become non-positive", _min_scale(limits))
    return X.replace(cyls=tuple(cyls)), limits


def _vertical_unstable(X: CylSurface, y: QF, m) -> tuple[CylSurface, list[QF]]:
    """Move the zeros vertically by m(z)*y and rebuild the horizontal decomposition.

    Each new saddle connection follows old ones at a constant vertical offset and
    keeps the id of the old connection it starts on.
    """
    delta = {z: y * m[z] for z in X.zero}
    chains: dict[str, list[str]] = {}
    offset: dict[str, QF] = {}
    for b in X.sc:
        eta = delta[X.sc[b].from_zero]
        seq, cur = [b], b
        while True:
            B = X.sc[cur].to_zero
            if eta == delta[B]:
                break
            cur = X.succ_bottom[cur] if eta > delta[B] else X.succ_top[cur]
            seq.append(cur)
            if len(seq) > len(X.scs):
                raise SurfaceError("horizontal leaf does not close up after the vertical move")
        chains[b], offset[b] = seq, eta

    # which chains run along each old connection, with their prefix lengths
    runs: dict[str, list[tuple[QF, str, QF]]] = {a: [] for a in X.sc}
    for b, seq in chains.items():
        pre = X.q(0)
        for a in seq:
            runs[a].append((offset[b], b, pre))
            pre = pre + X.sc[a].length
    if any(len({r[0] for r in v}) != len(v) for v in runs.values()):
        raise SurfaceError("overlapping horizontal leaves after the vertical move")

    new_len = {b: sum((X.sc[a].length for a in seq), X.q(0)) for b, seq in chains.items()}
    nb = {b: X.succ_bottom[seq[-1]] for b, seq in chains.items()}
    nt = {b: X.succ_top[seq[-1]] for b, seq in chains.items()}
    if len(set(nb.values())) != len(nb) or len(set(nt.values())) != len(nt):
        raise SurfaceError("vertical move does not give a consistent gluing")

    bottoms = _cycles(nb)
    tops = _cycles(nt)
    top_of = {a: i for i, w in enumerate(tops) for a in w}

    def pos(word, a):
        x = X.q(0)
        for u in word:
            if u == a:
                return x
            x = x + new_len[u]
        raise KeyError(a)

    limits = []
    cyls, used_ids, fresh = [], set(), 0
    for word in bottoms:
        N = word[0]
        eta = offset[N]
        higher = [r for r in runs[N] if r[0] > eta]
        if higher:
            eta_top, M, p = min(higher, key=lambda r: r[0])
            h = eta_top - eta
            cid = None
        else:
            C = X.cyl[X.above[N]]
            xt = (X.bottom_pos[N] - C.twist).mod(C.width)
            u = next(u for u in C.top if X.top_pos[u] <= xt < X.top_pos[u] + X.sc[u].length)
            eta_top, M, pre = min(runs[u], key=lambda r: r[0])
            p = pre + (xt - X.top_pos[u])
            h = C.height + eta_top - eta
            rate = eta_top - eta
            if rate.sign() < 0:
                limits.append(C.height / (-rate))
            cid = C.id if C.id not in used_ids else None
        if cid is None:
            while f"K{fresh}" in X.cyl or f"K{fresh}" in used_ids:
                fresh += 1
            cid = f"K{fresh}"
        used_ids.add(cid)
        top = tops[top_of[M]]
        width = sum((new_len[a] for a in word), X.q(0))
        twist = -(pos(top, M) + p)
        cyls.append((cid, width, h, twist, word, top))
    if any(h.sign() <= 0 for _, _, h, _, _, _ in cyls):
        raise ChamberExit("a cylinder height would become non-positive", _min_scale(limits))

    cyl_objs = [Cyl(cid, w, h, t, bw, tw) for cid, w, h, t, bw, tw in cyls]
    names = {("L", b): X.sc[b].from_zero for b in chains}
    sc_perm = cyl_perm = None
    if X.inv is not None:
        sc_perm = {b: X.inv.s[chains[b][-1]] for b in chains}
        top_owner = {a: c.id for c in cyl_objs for a in c.top}
        cyl_perm = {c.id: top_owner[sc_perm[c.bottom[0]]] for c in cyl_objs}
    Y = assemble(X.disc, cyl_objs, new_len, names, sc_perm, cyl_perm, X.tag, X.periods)
    return Y, limits


def _cycles(succ: dict[str, str]) -> list[tuple[str, ...]]:
    out, seen = [], set()
    for start in sorted(succ, key=natural_key):
        if start in seen:
            continue
        word, a = [], start
        while a not in seen:
            seen.add(a)
            word.append(a)
            a = succ[a]
        if a != start:
            raise SurfaceError("successor map is not a permutation")
        out.append(tuple(word))
    return out


def deform_weights(X: CylSurface, pair: tuple[str, str] | None = None) -> dict:
    """Per-zero displacement weights; ``pair`` names (P, Q) explicitly."""
    if pair is None:
        return zero_weights(X)
    P, Q = pair
    if P == Q or P not in X.zero or Q not in X.zero:
        raise SurfaceError(f"bad zero pair {pair!r}")
    m = {z: Fraction(0) for z in X.zero}
    m[P], m[Q] = Fraction(-1, 2), Fraction(1, 2)
    return m


def kernel_deform(X: CylSurface, v, pair: tuple[str, str] | None = None) -> CylSurface:
    """Move P by -v/2 and Q by +v/2 with absolute periods fixed.

    The vertical part is applied first.  On unstable surfaces a vertical move
    changes the horizontal decomposition, which is rebuilt.  Without ``pair``
    the zeros exchanged by the involution are used.
    """
    x, y = (X.q(c) for c in v)
    if not x and not y:
        return X
    m = deform_weights(X, pair)
    stable = classify_stability(X) == "stable"
    Y, limits = X, []
    try:
        if y:
            Y, lim = _vertical_stable(X, y, m) if stable else _vertical_unstable(X, y, m)
            limits += lim
        if x:
            Y, lim = _horizontal(Y, x, m)
            limits += lim
    except ChamberExit as exc:
        raise ChamberExit(str(exc), _min_scale(limits + [exc.max_scale])) from None
    return require_valid(Y)


def kernel_limits(X: CylSurface, v, pair: tuple[str, str] | None = None) -> QF | None:
    """Supremum of t with kernel_deform(X, t*v) admissible; None if unbounded."""
    x, y = (X.q(c) for c in v)
    m = deform_weights(X, pair)
    limits, Y = [], X
    if y:
        if classify_stability(X) == "stable":
            alpha = _drift(X, m)
            limits += [c.height / -(alpha[c.id] * y) for c in X.cyls if (alpha[c.id] * y).sign() < 0]
        else:
            # the rebuilt combinatorics depends only on the sign of y
            k = _small_scale(X, y)
            Y, lim = _vertical_unstable(X, y * k, m)
            limits += [t * k for t in lim]
    if x:
        for s in Y.scs:
            rate = (m[s.to_zero] - m[s.from_zero]) * x
            if rate.sign() < 0:
                limits.append(s.length / (-rate))
    return _min_scale(limits)


def _small_scale(X: CylSurface, y: QF) -> QF:
    """A scale making the vertical move y safely inside the chamber."""
    hmin = min(c.height for c in X.cyls)
    return hmin / (abs(y) * 4)


# moduli relations -----------------------------------------------------------------

@dataclass(frozen=True)
class ModuliRelation:
    reps: tuple[str, ...]
    r: tuple[int, ...]
    alpha_checked: bool = True


def _clear(vals: list[Fraction]) -> tuple[int, ...]:
    den = 1
    for v in vals:
        den = lcm(den, Fraction(v).denominator)
    ints = [int(Fraction(v) * den) for v in vals]
    g = 0
    for i in ints:
        g = gcd(g, i)
    g = g or 1
    ints = [i // g for i in ints]
    first = next((i for i in ints if i), 0)
    if first < 0:
        ints = [-i for i in ints]
    return tuple(ints)


def _nullspace(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    A = [list(r) for r in rows]
    pivots, r = [], 0
    for col in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][col]
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][free]
        basis.append(v)
    return basis


def moduli_relation(X: CylSurface) -> ModuliRelation:
    orbits = involution_orbits(X)
    if len(orbits) < 2:
        raise NoRelation("a moduli relation needs at least two cylinder orbits")
    reps = tuple(c for c, _ in orbits)
    beta = [b for _, b in orbits]
    mu = [X.cyl[c].modulus for c in reps]
    stable = classify_stability(X) == "stable"
    alpha = alpha_coefficients(X) if stable else None
    if square_root_of(X.disc) is None:
        r = _clear([b * X.cyl[c].width.norm() for c, b in zip(reps, beta)])
    else:
        rows = [[m.a for m in mu]]
        if stable:
            rows.append([alpha[c] * X.cyl[c].width.inverse().a for c in reps])
        basis = _nullspace(rows, len(reps))
        alpha_checked = True
        if not basis:
            basis = _nullspace(rows[:1], len(reps))
            alpha_checked = False
        pick = next((v for v in basis if len(v) < 3 or v[1] != 0), basis[0])
        rel = ModuliRelation(reps, _clear(pick), alpha_checked and stable)
        _check_relation(X, rel, alpha if rel.alpha_checked else None)
        return rel
    rel = ModuliRelation(reps, r, stable)
    _check_relation(X, rel, alpha)
    return rel


def _check_relation(X: CylSurface, rel: ModuliRelation, alpha) -> None:
    if not any(rel.r):
        raise NoRelation("trivial moduli relation")
    if sum((X.cyl[c].modulus * k for c, k in zip(rel.reps, rel.r)), X.q(0)):
        raise NoRelation("moduli do not satisfy the relation: not an eigenform diagram")
    if alpha is not None and sum(
        (X.cyl[c].width.inverse() * (alpha[c] * k) for c, k in zip(rel.reps, rel.r)), X.q(0)
    ):
        raise NoRelation("drift coefficients do not satisfy the relation")


def is_parabolic(X: CylSurface) -> bool:
    mu = [c.modulus for c in X.cyls]
    return all((m / mu[0]).is_rational for m in mu[1:])


# good times -----------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitChoice:
    """Three orbit representatives (first, middle, last) and the relation coefficients."""

    first: str
    middle: str
    last: str
    r: tuple[int, int, int]


def choose_orbits(X: CylSurface) -> OrbitChoice:
    rel = moduli_relation(X)
    if len(rel.reps) != 3:
        raise SurfaceError("good times need exactly three cylinder orbits")
    alpha = alpha_coefficients(X)
    coef = dict(zip(rel.reps, rel.r))
    best = None
    for i, j in product(range(3), repeat=2):
        if i == j:
            continue
        c1, c3 = rel.reps[i], rel.reps[j]
        c2 = rel.reps[3 - i - j]
        a1, a3 = alpha[c1], alpha[c3]
        if a1 == 0 or a1 * a3 > 0 or coef[c2] == 0:
            continue
        rank = 0 if a3 != 0 else 1
        if best is None or rank < best[0]:
            best = (rank, OrbitChoice(c1, c2, c3, (coef[c1], coef[c2], coef[c3])))
    if best is None:
        raise SurfaceError("no orbit pair with opposite drift and a nonzero middle coefficient")
    return best[1]


def good_time(X: CylSurface, k1: int, k3: int, choice: OrbitChoice | None = None):
    """(s, x) with horocycle(X, s) equal to kernel_deform(X, (x, 0))."""
    choice = choice or choose_orbits(X)
    alpha = alpha_coefficients(X)
    C1, C3 = X.cyl[choice.first], X.cyl[choice.last]
    a1, a3 = alpha[C1.id], alpha[C3.id]
    r2 = choice.r[1]
    den = C1.height * a3 - C3.height * a1
    assert den, "opposite drift signs force a nonzero denominator"
    s = (C1.width * (k1 * a3) - C3.width * (k3 * a1)) * r2 / den
    x = (s * C1.height - C1.width * (r2 * k1)) / a1
    if not same_diagram(horocycle(X, s), kernel_deform(X, (x, 0))):
        raise AssertionError("good time does not reproduce the kernel deformation")
    return s, x


@dataclass(frozen=True)
class Shift:
    k1: int
    k3: int
    s: QF
    x: QF
    gap: QF
    q: int
    bound: QF


def approximate_shift(X: CylSurface, target_x, depth: int) -> Shift:
    target = X.q(target_x)
    choice = choose_orbits(X)
    alpha = alpha_coefficients(X)
    C1, C3 = X.cyl[choice.first], X.cyl[choice.last]
    a1, a3 = alpha[C1.id], alpha[C3.id]
    r2 = choice.r[1]
    ratio = C1.modulus / C3.modulus
    if not ratio.is_rational:
        raise SurfaceError("moduli are incommensurable: direction is not parabolic")
    pq = ratio.a
    scale = C3.height * C1.width * r2 / (C1.height * a3 - C3.height * a1)
    theta = target / scale
    best = None
    for k3 in sorted(range(-depth, depth + 1), key=lambda k: (abs(k), -k)):
        k1 = (theta + pq * k3 + Fraction(1, 2)).floor()
        gap = abs(scale * (k1 - pq * k3) - target)
        if best is None or gap < best[0]:
            best = (gap, k1, k3)
    gap, k1, k3 = best
    s, x = good_time(X, k1, k3, choice)
    return Shift(k1, k3, s, x, abs(x - target), pq.denominator, abs(scale))


# separatrix tracing ---------------------------------------------------------------

def redecompose(X: CylSurface, d: Direction, step_bound: int | None = None) -> CylSurface:
    """Cylinder diagram in direction d, rotated to horizontal by d's frame map."""
    bound = step_bound if step_bound is not None else step_bound_from_env()
    if not d.y:
        return X
    g = d.frame_map()
    if d.y.sign() < 0:
        Y = rotate_pi(X)
        u = (-d.x, -d.y)
        periods = _map_periods(X, g)
    else:
        Y, u = X, (d.x, d.y)
        periods = _map_periods(X, g)
    return _trace(Y, u, bound, periods)


def _trace(X: CylSurface, u, bound: int, periods) -> CylSurface:
    ux, uy = u
    slope = ux / uy
    n = ux * ux + uy * uy
    steps = 0
    arrive, length = {}, {}
    strips: dict[str, list[tuple[QF, str, QF]]] = {c.id: [] for c in X.cyls}
    for b in sorted(X.sc, key=natural_key):
        C = X.cyl[X.above[b]]
        x, ell = X.bottom_pos[b], X.q(0)
        while True:
            steps += 1
            if steps > bound:
                raise NotPeriodicWithinBound(f"no closed separatrix within {bound} crossings")
            strips[C.id].append((x, b, ell))
            xt = (x + C.height * slope - C.twist).mod(C.width)
            a = next(a for a in C.top if X.top_pos[a] <= xt < X.top_pos[a] + X.sc[a].length)
            ell = ell + C.height / uy
            off = xt - X.top_pos[a]
            if not off:
                break
            C = X.cyl[X.above[a]]
            x = X.bottom_pos[a] + off
        arrive[b], length[b] = a, ell

    nb = {b: X.succ_bottom[X.pred_top[arrive[b]]] for b in arrive}
    nt = {b: arrive[b] for b in arrive}
    bottoms = _cycles(nb)
    tops = _cycles(nt)
    bottom_of = {a: i for i, w in enumerate(bottoms) for a in w}
    top_of = {a: i for i, w in enumerate(tops) for a in w}

    def positions(word):
        out, x = {}, X.q(0)
        for a in word:
            out[a] = x
            x = x + length[a]
        return out, x

    bpos = [positions(w) for w in bottoms]
    tpos = [positions(w) for w in tops]
    data: dict[int, tuple] = {}
    for cid, segs in strips.items():
        C = X.cyl[cid]
        segs = sorted(segs, key=lambda s: s[0])
        for k, (xl, sl, pl) in enumerate(segs):
            xr, sr, pr = segs[(k + 1) % len(segs)]
            gap = (xr - xl).mod(C.width) or C.width
            i = bottom_of[sr]
            j = top_of[sl]
            width = bpos[i][1]
            twist = (bpos[i][0][sr] + pr - gap * ux / n - tpos[j][0][sl] - pl).mod(width)
            entry = (j, uy * gap, twist)
            if data.setdefault(i, entry) != entry:
                raise SurfaceError("inconsistent strips while rebuilding cylinders")
    if len(data) != len(bottoms):
        raise SurfaceError("some rebuilt cylinder received no strip")
    cyls = [
        Cyl(f"D{i}", bpos[i][1], h, t, bottoms[i], tops[j])
        for i, (j, h, t) in sorted(data.items())
    ]
    names = {("L", b): X.sc[b].from_zero for b in arrive}
    sc_perm = cyl_perm = None
    if X.inv is not None:
        sc_perm = {b: X.succ_bottom[X.inv.s[arrive[b]]] for b in arrive}
        top_owner = {a: c.id for c in cyls for a in c.top}
        cyl_perm = {c.id: top_owner[sc_perm[c.bottom[0]]] for c in cyls}
    Y = assemble(X.disc, cyls, length, names, sc_perm, cyl_perm, X.tag, periods)
    return require_valid(Y)


# absolute heights -----------------------------------------------------------------

@dataclass(frozen=True)
class HeightRelation:
    """``x_i*h_i + x_j*h_j`` is an absolute period; ``j`` is None when h_i alone is."""

    i: str
    j: str | None
    x_i: int
    x_j: int


def absolute_height_relation(X: CylSurface) -> HeightRelation:
    if classify_stability(X) != "stable":
        raise SurfaceError("absolute height relations are defined for stable surfaces")
    alpha = alpha_coefficients(X)
    zb = {c.id: X.sc[c.bottom[0]].from_zero for c in X.cyls}
    zt = {c.id: X.sc[c.top[0]].from_zero for c in X.cyls}
    for c in X.cyls:
        if zb[c.id] == zt[c.id]:
            return HeightRelation(c.id, None, 1, 0)
    orbit_of = {}
    for rep, _ in involution_orbits(X):
        orbit_of[rep] = rep
        if X.inv is not None:
            orbit_of[X.inv.c[rep]] = rep
    ids = [c.id for c in X.cyls]
    found = []
    for k in (2, 3):
        for path in product(ids, repeat=k):
            if path[0] != min(path, key=natural_key):
                continue
            if any(zt[path[t]] != zb[path[(t + 1) % k]] for t in range(k)):
                continue
            count: dict[str, int] = {}
            for c in path:
                count[orbit_of[c]] = count.get(orbit_of[c], 0) + 1
            if len(count) != 2 or any(v > 2 for v in count.values()):
                continue
            (i, xi), (j, xj) = sorted(count.items(), key=lambda kv: natural_key(kv[0]))
            if xi * alpha[i] + xj * alpha[j] == 0:
                found.append(HeightRelation(i, j, xi, xj))
        if found:
            return min(found, key=lambda r: (r.x_i + r.x_j, natural_key(r.i), natural_key(r.j)))
    raise SurfaceError("no short closed vertical chain of cylinders")


__all__ = [
    "ChamberExit",
    "Direction",
    "HeightRelation",
    "ModuliRelation",
    "NoRelation",
    "NotPeriodicWithinBound",
    "OrbitChoice",
    "Shift",
    "absolute_height_relation",
    "act_upper",
    "approximate_shift",
    "choose_orbits",
    "good_time",
    "horocycle",
    "is_parabolic",
    "deform_weights",
    "kernel_deform",
    "kernel_limits",
    "moduli_relation",
    "redecompose",
    "same_diagram",
    "step_bound_from_env",
]
