"""Horizontal cylinder diagrams of translation surfaces with a Prym involution.

Conventions used throughout the package:

* A cylinder of width ``w`` and height ``h`` has coordinates ``(R/wZ) x [0, h]``.
  Its bottom word starts at ``x = 0`` and its top word starts at ``x = twist``.
* Every saddle connection is horizontal and oriented left to right, so
  ``from_zero`` is its left endpoint and ``to_zero`` its right endpoint.
* The involution rotates by pi: a point ``(x, y)`` of ``C`` goes to
  ``(c_C - x, h - y)`` of ``tau(C)`` for some constant ``c_C``.
"""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .periods import PeriodData, period_data_from_json, period_data_to_json
from .quadfield import QF, check_disc, parse_qf


class SurfaceError(ValueError):
    pass


def natural_key(s: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", s)]


@dataclass(frozen=True)
class Zero:
    id: str
    order: int


@dataclass(frozen=True)
class SaddleConn:
    id: str
    length: QF
    from_zero: str
    to_zero: str


@dataclass(frozen=True)
class Cyl:
    id: str
    width: QF
    height: QF
    twist: QF
    bottom: tuple[str, ...]
    top: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "bottom", tuple(self.bottom))
        object.__setattr__(self, "top", tuple(self.top))
        if self.width.sign() > 0:
            object.__setattr__(self, "twist", self.twist.mod(self.width))

    @property
    def modulus(self) -> QF:
        return self.height / self.width


def _pairs(m: Mapping[str, str] | Iterable[tuple[str, str]]) -> tuple[tuple[str, str], ...]:
    items = m.items() if isinstance(m, Mapping) else m
    return tuple(sorted(((str(a), str(b)) for a, b in items), key=lambda p: natural_key(p[0])))


@dataclass(frozen=True)
class PrymInv:
    zero_perm: tuple[tuple[str, str], ...]
    cyl_perm: tuple[tuple[str, str], ...]
    sc_perm: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "zero_perm", _pairs(self.zero_perm))
        object.__setattr__(self, "cyl_perm", _pairs(self.cyl_perm))
        object.__setattr__(self, "sc_perm", _pairs(self.sc_perm))

    @cached_property
    def z(self) -> dict[str, str]:
        return dict(self.zero_perm)

    @cached_property
    def c(self) -> dict[str, str]:
        return dict(self.cyl_perm)

    @cached_property
    def s(self) -> dict[str, str]:
        return dict(self.sc_perm)


@dataclass(frozen=True)
class CylSurface:
    disc: int
    zeros: tuple[Zero, ...]
    cyls: tuple[Cyl, ...]
    scs: tuple[SaddleConn, ...]
    inv: PrymInv | None
    tag: str
    periods: PeriodData | None = None

    def __post_init__(self):
        check_disc(self.disc)
        object.__setattr__(self, "zeros", tuple(sorted(self.zeros, key=lambda z: natural_key(z.id))))
        object.__setattr__(self, "cyls", tuple(sorted(self.cyls, key=lambda c: natural_key(c.id))))
        object.__setattr__(self, "scs", tuple(sorted(self.scs, key=lambda s: natural_key(s.id))))

    # lookups ----------------------------------------------------------------
    @cached_property
    def zero(self) -> dict[str, Zero]:
        return {z.id: z for z in self.zeros}

    @cached_property
    def cyl(self) -> dict[str, Cyl]:
        return {c.id: c for c in self.cyls}

    @cached_property
    def sc(self) -> dict[str, SaddleConn]:
        return {s.id: s for s in self.scs}

    @cached_property
    def above(self) -> dict[str, str]:
        """Saddle connection -> cylinder whose bottom word contains it."""
        return {a: c.id for c in self.cyls for a in c.bottom}

    @cached_property
    def below(self) -> dict[str, str]:
        """Saddle connection -> cylinder whose top word contains it."""
        return {a: c.id for c in self.cyls for a in c.top}

    @cached_property
    def succ_bottom(self) -> dict[str, str]:
        return {w[i]: w[(i + 1) % len(w)] for c in self.cyls for w in [c.bottom] for i in range(len(w))}

    @cached_property
    def succ_top(self) -> dict[str, str]:
        return {w[i]: w[(i + 1) % len(w)] for c in self.cyls for w in [c.top] for i in range(len(w))}

    @cached_property
    def pred_bottom(self) -> dict[str, str]:
        return {v: k for k, v in self.succ_bottom.items()}

    @cached_property
    def pred_top(self) -> dict[str, str]:
        return {v: k for k, v in self.succ_top.items()}

    @cached_property
    def bottom_pos(self) -> dict[str, QF]:
        """Start of each saddle connection along the bottom of the cylinder above it."""
        out = {}
        for c in self.cyls:
            x = self.q(0)
            for a in c.bottom:
                out[a] = x
                x = x + self.sc[a].length
        return out

    @cached_property
    def top_pos(self) -> dict[str, QF]:
        """Start of each saddle connection along the top of the cylinder below it."""
        out = {}
        for c in self.cyls:
            x = self.q(0)
            for a in c.top:
                out[a] = x
                x = x + self.sc[a].length
        return out

    def q(self, x) -> QF:
        return QF.of(x, self.disc)

    def replace(self, **kw) -> "CylSurface":
        return dataclasses.replace(self, **kw)

    def __str__(self):
        return to_json_text(self)


# combinatorics ------------------------------------------------------------------

class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def endpoint_classes(cyls: Iterable[Cyl]) -> dict[tuple[str, str], tuple[str, str]]:
    """Group saddle-connection endpoints ("L"/"R", id) into zeros.

    Consecutive connections ``a, b`` in any boundary word share the point
    ``R(a) = L(b)``.
    """
    uf = _UnionFind()
    for c in cyls:
        for w in (c.bottom, c.top):
            for i, a in enumerate(w):
                uf.union(("R", a), ("L", w[(i + 1) % len(w)]))
                uf.find(("L", a))
    return {tok: uf.find(tok) for tok in list(uf.parent)}


def cyclic_equal(u: tuple, v: tuple) -> bool:
    if len(u) != len(v):
        return False
    if not u:
        return True
    doubled = v + v
    return any(doubled[i : i + len(u)] == u for i in range(len(v)))


def genus(surface: CylSurface) -> int:
    total = sum(z.order for z in surface.zeros)
    if total % 2:
        raise SurfaceError("odd total zero order")
    return total // 2 + 1


def rotation_constant(surface: CylSurface, cid: str) -> list[QF]:
    """Constants c with tau(x, y) = (c - x, h - y), one per boundary incidence."""
    inv = surface.inv
    c = surface.cyl[cid]
    img = surface.cyl[inv.c[cid]]
    w = c.width
    vals = []
    for a in c.bottom:
        ta = inv.s[a]
        vals.append((img.twist + surface.top_pos[ta] + surface.bottom_pos[a] + surface.sc[a].length).mod(w))
    for u in c.top:
        tu = inv.s[u]
        vals.append((surface.bottom_pos[tu] + c.twist + surface.top_pos[u] + surface.sc[u].length).mod(w))
    return vals


def fixed_point_count(surface: CylSurface) -> int:
    inv = surface.inv
    return (
        2 * sum(1 for c in surface.cyls if inv.c[c.id] == c.id)
        + sum(1 for s in surface.scs if inv.s[s.id] == s.id)
        + sum(1 for z in surface.zeros if inv.z[z.id] == z.id)
    )


def validate(surface: CylSurface) -> list[str]:
    """All violated invariants; an empty list means the surface is valid."""
    errs: list[str] = []
    X = surface
    for kind, items in (("zero", X.zeros), ("cylinder", X.cyls), ("saddle connection", X.scs)):
        ids = [x.id for x in items]
        if len(set(ids)) != len(ids):
            errs.append(f"duplicate {kind} id")
    for x in [*(c.width for c in X.cyls), *(c.height for c in X.cyls), *(c.twist for c in X.cyls),
              *(s.length for s in X.scs)]:
        if x.D != X.disc:
            errs.append("field element with foreign discriminant")
            return errs
    sc_ids = set(X.sc)
    bottoms = [a for c in X.cyls for a in c.bottom]
    tops = [a for c in X.cyls for a in c.top]
    for name, occ in (("bottom", bottoms), ("top", tops)):
        for a in sc_ids:
            k = occ.count(a)
            if k != 1:
                errs.append(f"saddle connection {a} occurs {k} times among {name} words")
        for a in set(occ) - sc_ids:
            errs.append(f"unknown saddle connection {a} in a {name} word")
    for s in X.scs:
        if s.length.sign() <= 0:
            errs.append(f"saddle connection {s.id} has nonpositive length")
        for z in (s.from_zero, s.to_zero):
            if z not in X.zero:
                errs.append(f"saddle connection {s.id} references unknown zero {z}")
    for z in X.zeros:
        if z.order < 0:
            errs.append(f"zero {z.id} has negative order")
    if errs:
        return errs
    for c in X.cyls:
        if c.width.sign() <= 0 or c.height.sign() <= 0:
            errs.append(f"cylinder {c.id} has nonpositive width or height")
        if not c.bottom or not c.top:
            errs.append(f"cylinder {c.id} has an empty boundary word")
            continue
        sb = sum((X.sc[a].length for a in c.bottom), X.q(0))
        st = sum((X.sc[a].length for a in c.top), X.q(0))
        if sb != c.width or st != c.width:
            errs.append(f"boundary sum mismatch in cylinder {c.id}: bottom {sb}, top {st}, width {c.width}")
        if c.width.sign() > 0 and not (X.q(0) <= c.twist < c.width):
            errs.append(f"cylinder {c.id} twist not normalized")
    if errs:
        return errs

    # zeros from the boundary combinatorics
    classes = endpoint_classes(X.cyls)
    declared: dict = {}
    for s in X.scs:
        for tok, z in ((("L", s.id), s.from_zero), (("R", s.id), s.to_zero)):
            declared.setdefault(classes[tok], set()).add(z)
    used = set()
    for cls, names in declared.items():
        if len(names) != 1:
            errs.append(f"one cone point carries several zero labels {sorted(names)}")
            continue
        (name,) = names
        if name in used:
            errs.append(f"zero {name} labels several distinct cone points")
        used.add(name)
        prongs = sum(1 for tok, r in classes.items() if r == cls and tok[0] == "L")
        if X.zero[name].order != prongs - 1:
            errs.append(
                f"cone angle mismatch at zero {name}: declared order {X.zero[name].order}, diagram gives {prongs - 1}"
            )
    for z in X.zeros:
        if z.id not in used:
            errs.append(f"zero {z.id} does not occur on the diagram")

    # connectivity
    if X.cyls:
        seen = {X.cyls[0].id}
        stack = [X.cyls[0].id]
        while stack:
            c = X.cyl[stack.pop()]
            for a in c.bottom + c.top:
                for nb in (X.above[a], X.below[a]):
                    if nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
        if len(seen) != len(X.cyls):
            errs.append("gluing graph is disconnected")
    if area(X).sign() <= 0:
        errs.append("total area is not positive")
    if sum(z.order for z in X.zeros) % 2:
        errs.append("odd total zero order")
    if errs or X.inv is None:
        return errs
    return errs + _validate_involution(X)


def _validate_involution(X: CylSurface) -> list[str]:
    errs: list[str] = []
    inv = X.inv
    for name, perm, ids in (("zero", inv.z, set(X.zero)), ("cylinder", inv.c, set(X.cyl)),
                            ("saddle connection", inv.s, set(X.sc))):
        if set(perm) != ids or not set(perm.values()) <= ids:
            errs.append(f"involution is not a permutation of the {name} ids")
            return errs
        if any(perm[perm[k]] != k for k in perm):
            errs.append(f"involution on {name}s is not an involution")
    if errs:
        return errs
    for z in X.zeros:
        if X.zero[inv.z[z.id]].order != z.order:
            errs.append(f"involution does not preserve the order of zero {z.id}")
    for s in X.scs:
        t = X.sc[inv.s[s.id]]
        if t.length != s.length:
            errs.append(f"involution changes the length of {s.id}")
        if inv.z[s.from_zero] != t.to_zero or inv.z[s.to_zero] != t.from_zero:
            errs.append(f"involution is inconsistent with the endpoints of {s.id}")
    for c in X.cyls:
        d = X.cyl[inv.c[c.id]]
        if d.width != c.width or d.height != c.height:
            errs.append(f"involution does not preserve the shape of cylinder {c.id}")
            continue
        if not cyclic_equal(d.bottom, tuple(inv.s[a] for a in reversed(c.top))):
            errs.append(f"involution: bottom of {d.id} is not the reversed image of the top of {c.id}")
        if not cyclic_equal(d.top, tuple(inv.s[a] for a in reversed(c.bottom))):
            errs.append(f"involution: top of {d.id} is not the reversed image of the bottom of {c.id}")
    if errs:
        return errs
    consts = {}
    for c in X.cyls:
        vals = rotation_constant(X, c.id)
        if any(v != vals[0] for v in vals):
            errs.append(f"involution is not a rotation by pi on cylinder {c.id}")
        consts[c.id] = vals[0]
    for c in X.cyls:
        if consts[c.id] != consts[inv.c[c.id]]:
            errs.append(f"rotation constants of {c.id} and its image disagree")
    if errs:
        return errs
    g = genus(X)
    r = fixed_point_count(X)
    quotient2 = 2 * g + 2 - r
    if quotient2 % 4 or quotient2 < 0:
        errs.append(f"fixed-point count {r} violates Riemann-Hurwitz in genus {g}")
        return errs
    gq = quotient2 // 4
    if X.tag.startswith("Prym") and g - gq != 2:
        errs.append(f"involution quotient has genus {gq}; a Prym involution needs genus {g - 2}")
    if X.tag.startswith("H(") and g == 2 and gq != 0:
        errs.append("involution on a genus-two surface is not hyperelliptic")
    return errs


def is_valid(surface: CylSurface) -> bool:
    return not validate(surface)


def require_valid(surface: CylSurface) -> CylSurface:
    errs = validate(surface)
    if errs:
        raise SurfaceError("; ".join(errs))
    return surface


# stability and drift coefficients -------------------------------------------------

def classify_stability(surface: CylSurface) -> str:
    return "stable" if all(s.from_zero == s.to_zero for s in surface.scs) else "unstable"


def distinguished_pair(surface: CylSurface) -> tuple[str, str] | None:
    """(P, Q): P is the smallest zero id lying in a 2-orbit of the involution."""
    inv = surface.inv
    if inv is None:
        return None
    swapped = sorted((z for z in surface.zero if inv.z[z] != z), key=natural_key)
    if not swapped:
        return None
    P = swapped[0]
    return P, inv.z[P]


def zero_weights(surface: CylSurface) -> dict[str, Fraction]:
    """Displacement weights: P moves by -v/2, Q by +v/2, fixed zeros stay."""
    weights = {z.id: Fraction(0) for z in surface.zeros}
    if surface.inv is None:
        if len(surface.zeros) == 1:
            return weights
        raise SurfaceError("kernel deformation needs the involution to orient P -> Q")
    pair = distinguished_pair(surface)
    if pair is None:
        return weights
    orbits = {frozenset((z, surface.inv.z[z])) for z in surface.zero if surface.inv.z[z] != z}
    if len(orbits) > 1:
        raise SurfaceError("more than one exchanged pair of zeros: kernel direction is ambiguous")
    P, Q = pair
    weights[P], weights[Q] = Fraction(-1, 2), Fraction(1, 2)
    return weights


def alpha_coefficients(surface: CylSurface) -> dict[str, Fraction]:
    """Twist/height drift of each cylinder per unit of kernel deformation."""
    if classify_stability(surface) != "stable":
        raise SurfaceError("drift coefficients are defined for stable decompositions only")
    m = zero_weights(surface)
    return {
        c.id: m[surface.sc[c.top[0]].from_zero] - m[surface.sc[c.bottom[0]].from_zero]
        for c in surface.cyls
    }


def involution_orbits(surface: CylSurface) -> list[tuple[str, int]]:
    if surface.inv is None:
        return [(c.id, 1) for c in surface.cyls]
    out, seen = [], set()
    for c in surface.cyls:
        if c.id in seen:
            continue
        d = surface.inv.c[c.id]
        seen |= {c.id, d}
        out.append((c.id, 1 if d == c.id else 2))
    return out


def area(surface: CylSurface) -> QF:
    return sum((c.width * c.height for c in surface.cyls), surface.q(0))


# symmetries and isomorphism ----------------------------------------------------------

def rotate_pi(surface: CylSurface) -> CylSurface:
    """The same surface with the form negated (rotation by pi)."""
    cyls = tuple(
        Cyl(c.id, c.width, c.height, c.twist, tuple(reversed(c.top)), tuple(reversed(c.bottom)))
        for c in surface.cyls
    )
    scs = tuple(SaddleConn(s.id, s.length, s.to_zero, s.from_zero) for s in surface.scs)
    periods = surface.periods
    if periods is not None:
        periods = dataclasses.replace(
            periods, re=tuple(-x for x in periods.re), im=tuple(-x for x in periods.im)
        )
    return surface.replace(cyls=cyls, scs=scs, periods=periods)


def _offsets_top(X: CylSurface, cid: str, a: str) -> list[tuple[QF, str]]:
    c = X.cyl[cid]
    base = X.bottom_pos[a]
    return sorted(((c.twist + X.top_pos[u] - base).mod(c.width), u) for u in c.top)


def _offsets_bottom(X: CylSurface, cid: str, a: str) -> list[tuple[QF, str]]:
    c = X.cyl[cid]
    base = c.twist + X.top_pos[a]
    return sorted(((X.bottom_pos[v] - base).mod(c.width), v) for v in c.bottom)


def _rot_from(word: tuple, a) -> tuple:
    i = word.index(a)
    return word[i:] + word[:i]


def find_isomorphism(X: CylSurface, Y: CylSurface, respect_inv: bool = True):
    """A relabeling (zero, cylinder, sc maps) carrying X onto Y, or None."""
    if (len(X.cyls), len(X.scs), len(X.zeros)) != (len(Y.cyls), len(Y.scs), len(Y.zeros)):
        return None
    if X.disc != Y.disc or not X.scs:
        return None
    a0 = X.scs[0].id
    for b0 in Y.sc:
        maps = _try_match(X, Y, a0, b0)
        if maps is None:
            continue
        zmap, cmap, smap = maps
        if respect_inv and X.inv is not None and Y.inv is not None:
            if any(Y.inv.s[smap[a]] != smap[X.inv.s[a]] for a in smap):
                continue
            if any(Y.inv.z[zmap[z]] != zmap[X.inv.z[z]] for z in zmap):
                continue
        return maps
    return None


def _try_match(X, Y, a0, b0):
    smap: dict[str, str] = {}
    cmap: dict[str, str] = {}

    def bind(a, b, table):
        if a in table:
            return table[a] == b
        table[a] = b
        return True

    if not bind(a0, b0, smap):
        return None
    queue = [a0]
    while queue:
        a = queue.pop()
        b = smap[a]
        if X.sc[a].length != Y.sc[b].length:
            return None
        for side in ("above", "below"):
            cx, cy = getattr(X, side)[a], getattr(Y, side)[b]
            if not bind(cx, cy, cmap):
                return None
            C, Cy = X.cyl[cx], Y.cyl[cy]
            if (C.width, C.height) != (Cy.width, Cy.height):
                return None
            if len(C.bottom) != len(Cy.bottom) or len(C.top) != len(Cy.top):
                return None
            if side == "above":
                same = zip(_rot_from(C.bottom, a), _rot_from(Cy.bottom, b))
                ox, oy = _offsets_top(X, cx, a), _offsets_top(Y, cy, b)
            else:
                same = zip(_rot_from(C.top, a), _rot_from(Cy.top, b))
                ox, oy = _offsets_bottom(X, cx, a), _offsets_bottom(Y, cy, b)
            pairs = list(same)
            if [o for o, _ in ox] != [o for o, _ in oy]:
                return None
            pairs += [(u, v) for (_, u), (_, v) in zip(ox, oy)]
            for u, v in pairs:
                fresh = u not in smap
                if not bind(u, v, smap):
                    return None
                if fresh:
                    queue.append(u)
    if len(smap) != len(X.scs) or len(set(smap.values())) != len(smap):
        return None
    if len(set(cmap.values())) != len(cmap):
        return None
    zmap: dict[str, str] = {}
    for a, b in smap.items():
        sa, sb = X.sc[a], Y.sc[b]
        if X.sc[a].length != Y.sc[b].length:
            return None
        if not bind(sa.from_zero, sb.from_zero, zmap) or not bind(sa.to_zero, sb.to_zero, zmap):
            return None
    if len(set(zmap.values())) != len(zmap):
        return None
    if any(X.zero[z].order != Y.zero[w].order for z, w in zmap.items()):
        return None
    return zmap, cmap, smap


def is_isomorphic(X: CylSurface, Y: CylSurface, respect_inv: bool = True) -> bool:
    return find_isomorphism(X, Y, respect_inv) is not None


def relabel(surface: CylSurface, zmap=None, cmap=None, smap=None) -> CylSurface:
    zmap = zmap or {}
    cmap = cmap or {}
    smap = smap or {}
    Z = lambda z: zmap.get(z, z)  # noqa: E731
    C = lambda c: cmap.get(c, c)  # noqa: E731
    S = lambda s: smap.get(s, s)  # noqa: E731
    zeros = tuple(Zero(Z(z.id), z.order) for z in surface.zeros)
    scs = tuple(SaddleConn(S(s.id), s.length, Z(s.from_zero), Z(s.to_zero)) for s in surface.scs)
    cyls = tuple(
        Cyl(C(c.id), c.width, c.height, c.twist, tuple(map(S, c.bottom)), tuple(map(S, c.top)))
        for c in surface.cyls
    )
    inv = surface.inv
    if inv is not None:
        inv = PrymInv(
            {Z(a): Z(b) for a, b in inv.zero_perm},
            {C(a): C(b) for a, b in inv.cyl_perm},
            {S(a): S(b) for a, b in inv.sc_perm},
        )
    return surface.replace(zeros=zeros, scs=scs, cyls=cyls, inv=inv)


def assemble(
    disc: int,
    cyls: Iterable[Cyl],
    lengths: Mapping[str, QF],
    names: Mapping[tuple[str, str], str] | None = None,
    sc_perm: Mapping[str, str] | None = None,
    cyl_perm: Mapping[str, str] | None = None,
    tag: str = "",
    periods: PeriodData | None = None,
) -> CylSurface:
    """Build a surface from boundary words alone; zeros come from the gluing.

    ``names`` maps an endpoint token such as ``("L", "s0")`` to the zero id of
    its cone point; unnamed cone points get ids ``Z0, Z1, ...``.
    """
    cyls = tuple(cyls)
    classes = endpoint_classes(cyls)
    label: dict = {}
    for tok, name in (names or {}).items():
        root = classes[tok]
        if label.get(root, name) != name:
            raise SurfaceError(f"conflicting names for one cone point: {label[root]}, {name}")
        label[root] = name
    fresh = 0
    for tok in sorted(classes, key=lambda t: (natural_key(t[1]), t[0])):
        root = classes[tok]
        if root not in label:
            while f"Z{fresh}" in label.values():
                fresh += 1
            label[root] = f"Z{fresh}"
    prongs: dict[str, int] = {}
    for tok, root in classes.items():
        if tok[0] == "L":
            prongs[label[root]] = prongs.get(label[root], 0) + 1
    zeros = tuple(Zero(z, k - 1) for z, k in prongs.items())
    scs = tuple(
        SaddleConn(a, QF.of(lengths[a], disc), label[classes[("L", a)]], label[classes[("R", a)]])
        for a in lengths
    )
    inv = None
    if sc_perm is not None:
        by_id = {s.id: s for s in scs}
        zperm = {by_id[a].from_zero: by_id[sc_perm[a]].to_zero for a in sc_perm}
        inv = PrymInv(zperm, dict(cyl_perm or {}), dict(sc_perm))
    return CylSurface(disc, zeros, cyls, scs, inv, tag, periods)


# JSON ---------------------------------------------------------------------------------

def to_json(surface: CylSurface) -> dict:
    out = {
        "disc": surface.disc,
        "tag": surface.tag,
        "zeros": [{"id": z.id, "order": z.order} for z in surface.zeros],
        "cyls": [
            {
                "id": c.id,
                "w": str(c.width),
                "h": str(c.height),
                "t": str(c.twist),
                "bottom": list(c.bottom),
                "top": list(c.top),
            }
            for c in surface.cyls
        ],
        "scs": [
            {"id": s.id, "len": str(s.length), "from": s.from_zero, "to": s.to_zero}
            for s in surface.scs
        ],
        "inv": None
        if surface.inv is None
        else {
            "zero_perm": dict(surface.inv.zero_perm),
            "cyl_perm": dict(surface.inv.cyl_perm),
            "sc_perm": dict(surface.inv.sc_perm),
        },
    }
    if surface.periods is not None:
        out["periods"] = period_data_to_json(surface.periods)
    return out


def from_json(obj: dict) -> CylSurface:
    try:
        D = check_disc(int(obj["disc"]))
        P = lambda x: parse_qf(x, D)  # noqa: E731
        zeros = tuple(Zero(str(z["id"]), int(z["order"])) for z in obj["zeros"])
        cyls = tuple(
            Cyl(str(c["id"]), P(c["w"]), P(c["h"]), P(c.get("t", "0")),
                tuple(map(str, c["bottom"])), tuple(map(str, c["top"])))
            for c in obj["cyls"]
        )
        scs = tuple(
            SaddleConn(str(s["id"]), P(s["len"]), str(s["from"]), str(s["to"])) for s in obj["scs"]
        )
        inv = None
        if obj.get("inv"):
            i = obj["inv"]
            inv = PrymInv(i["zero_perm"], i["cyl_perm"], i["sc_perm"])
        periods = None
        if obj.get("periods"):
            periods = period_data_from_json(obj["periods"], D)
        return CylSurface(D, zeros, cyls, scs, inv, str(obj.get("tag", "")), periods)
    except (KeyError, TypeError) as exc:
        raise SurfaceError(f"malformed surface JSON: {exc!r}") from exc


def to_json_text(surface: CylSurface) -> str:
    return json.dumps(to_json(surface), indent=2, sort_keys=False)


def from_json_text(text: str) -> CylSurface:
    return from_json(json.loads(text))
