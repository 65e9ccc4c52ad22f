"""Integer prototypes and the eigenform surfaces built from them."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .periods import (
    FORM_2J_J,
    FORM_J_2J,
    FORM_J_J,
    PeriodData,
    RMEndo,
    proper_discriminant,
)
from .quadfield import QF, check_disc
from .surface import Cyl, CylSurface, SurfaceError, assemble, require_valid, rotation_constant

PRYM22 = "Prym(2,2)odd"


def _divisor_pairs(n: int):
    for w in range(1, n + 1):
        if n % w == 0:
            yield w, n // w


def lam_of(e: int, D: int) -> QF:
    """Positive root of x^2 - e x - (D - e^2)/4."""
    return QF(Fraction(e, 2), Fraction(1, 2), D)


@dataclass(frozen=True)
class ThreeToriProto:
    w: int
    h: int
    t: int
    e: int

    def __post_init__(self):
        w, h, t, e = self.w, self.h, self.t, self.e
        if w <= 0 or h <= 0 or not 0 <= t < gcd(w, h) or gcd(gcd(w, h), gcd(t, e)) != 1:
            raise ValueError(f"not a three-tori prototype: {self.astuple()}")

    @property
    def disc(self) -> int:
        return self.e * self.e + 8 * self.w * self.h

    @property
    def lam(self) -> QF:
        return lam_of(self.e, self.disc)

    def astuple(self):
        return (self.w, self.h, self.t, self.e)

    def __str__(self):
        return f"({self.w},{self.h},{self.t},{self.e}):{self.disc}"


@dataclass(frozen=True)
class H2Proto:
    w: int
    h: int
    t: int
    e: int

    def __post_init__(self):
        w, h, t, e = self.w, self.h, self.t, self.e
        if w <= 0 or h <= 0 or not 0 <= t < gcd(w, h) or gcd(gcd(w, h), gcd(t, e)) != 1:
            raise ValueError(f"not a splitting prototype: {self.astuple()}")
        if not (self.lam < w):
            raise ValueError(f"splitting prototype needs lambda < w: {self.astuple()}")

    @property
    def disc(self) -> int:
        return self.e * self.e + 4 * self.w * self.h

    @property
    def lam(self) -> QF:
        return lam_of(self.e, self.disc)

    def astuple(self):
        return (self.w, self.h, self.t, self.e)

    def __str__(self):
        return f"({self.w},{self.h},{self.t},{self.e}):{self.disc}"


class CoverModel(enum.Enum):
    MODEL1 = "model1"
    MODEL2 = "model2"


def parse_proto(text: str, family: str):
    """Parse "(w,h,t,e)" or "w,h,t,e" (an optional ":D" suffix is checked)."""
    body, _, dtext = text.strip().partition(":")
    parts = [int(x) for x in body.strip().strip("()").split(",")]
    if len(parts) != 4:
        raise ValueError(f"prototype needs four integers, got {text!r}")
    cls = ThreeToriProto if family == "three-tori" else H2Proto
    p = cls(*parts)
    if dtext and int(dtext) != p.disc:
        raise ValueError(f"prototype {body} has discriminant {p.disc}, not {dtext}")
    return p


# enumeration ------------------------------------------------------------------

def _enumerate(D: int, k: int, cls):
    check_disc(D)
    out = []
    r = isqrt(D)
    for e in range(-r, r + 1):
        rest = D - e * e
        if rest <= 0 or rest % k:
            continue
        for w, h in _divisor_pairs(rest // k):
            if cls is H2Proto and not (w - e > 0 and (2 * w - e) ** 2 > D):
                continue
            for t in range(gcd(w, h)):
                if gcd(gcd(w, h), gcd(t, e)) == 1:
                    out.append(cls(w, h, t, e))
    out.sort(key=lambda p: (p.e, p.w, p.h, p.t))
    return out


def enumerate_three_tori(D: int) -> list[ThreeToriProto]:
    return _enumerate(D, 8, ThreeToriProto)


def enumerate_h2_splitting(D: int) -> list[H2Proto]:
    return _enumerate(D, 4, H2Proto)


# real multiplication data -------------------------------------------------------

def three_tori_endo(p: ThreeToriProto) -> RMEndo:
    w, h, t, e = p.astuple()
    return RMEndo(((e, 0, 2 * w, 2 * t), (0, e, 0, 2 * h), (h, -t, 0, 0), (0, w, 0, 0)), e, 2 * w * h)


def three_tori_periods(p: ThreeToriProto) -> PeriodData:
    D, lam = p.disc, p.lam
    q = lambda x: QF.of(x, D)  # noqa: E731
    return PeriodData(
        form=FORM_J_2J,
        re=(lam, q(0), q(2 * p.w), q(2 * p.t)),
        im=(q(0), lam, q(0), q(2 * p.h)),
        labels=("a0", "b0", "a1+a2", "b1+b2"),
        family="three-tori",
        proto=p.astuple(),
        endo=three_tori_endo(p),
    )


def h2_endo(p: H2Proto) -> RMEndo:
    w, h, t, e = p.astuple()
    return RMEndo(((e, 0, w, t), (0, e, 0, h), (h, -t, 0, 0), (0, w, 0, 0)), e, w * h)


def h2_periods(p: H2Proto) -> PeriodData:
    D, lam = p.disc, p.lam
    q = lambda x: QF.of(x, D)  # noqa: E731
    return PeriodData(
        form=FORM_J_J,
        re=(lam, q(0), q(p.w), q(p.t)),
        im=(q(0), lam, q(0), q(p.h)),
        labels=("a1", "b1", "a2", "b2"),
        family="h2",
        proto=p.astuple(),
        endo=h2_endo(p),
    )


def cover_endo(p: H2Proto, model: CoverModel) -> RMEndo:
    w, h, t, e = p.astuple()
    if model is CoverModel.MODEL1:
        t_ = ((2 * e, 0, 4 * w, 4 * t), (0, 2 * e, 0, 2 * h), (h, -2 * t, 0, 0), (0, 2 * w, 0, 0))
    else:
        t_ = ((2 * e, 0, w, 2 * t), (0, 2 * e, 0, 2 * h), (4 * h, -4 * t, 0, 0), (0, 2 * w, 0, 0))
    return RMEndo(t_, 2 * e, 4 * w * h)


def cover_periods(p: H2Proto, model: CoverModel) -> PeriodData:
    D, lam = p.disc, p.lam
    q = lambda x: QF.of(x, D)  # noqa: E731
    if model is CoverModel.MODEL1:
        form, re = FORM_J_2J, (lam, q(0), q(2 * p.w), q(2 * p.t))
        labels = ("a11", "b11+b12", "a21+a22", "b21+b22")
    else:
        form, re = FORM_2J_J, (2 * lam, q(0), q(p.w), q(2 * p.t))
        labels = ("a11+a12", "b11+b12", "a21", "b21+b22")
    return PeriodData(
        form=form,
        re=re,
        im=(q(0), 2 * lam, q(0), q(2 * p.h)),
        labels=labels,
        family=f"cover-{model.value}",
        proto=p.astuple(),
        endo=cover_endo(p, model),
    )


# surfaces -------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusTriple:
    """Three flat tori with a common marked point (the slit collapsed to zero length)."""

    disc: int
    lattices: tuple[tuple[tuple[QF, QF], tuple[QF, QF]], ...]
    proto: ThreeToriProto | None = None
    tag: str = "E(0,0,0)"

    @property
    def periods(self) -> PeriodData | None:
        return None if self.proto is None else three_tori_periods(self.proto)

    def area(self) -> QF:
        return sum((u[0] * v[1] - u[1] * v[0] for u, v in self.lattices), QF.of(0, self.disc))


def torus_triple(p: ThreeToriProto) -> TorusTriple:
    D, lam = p.disc, p.lam
    q = lambda x: QF.of(x, D)  # noqa: E731
    inv_lat = ((lam, q(0)), (q(0), lam))
    swap_lat = ((q(p.w), q(0)), (q(p.t), q(p.h)))
    return TorusTriple(D, (inv_lat, swap_lat, swap_lat), p)


def three_tori_diagram(D: int, widths, heights, twists, x: QF, periods=None) -> CylSurface:
    """Three one-cylinder tori glued crosswise along a horizontal slit of length |x|.

    Torus 0 is invariant, tori 1 and 2 are exchanged.  The slit runs P -> Q when
    x > 0 and Q -> P when x < 0.
    """
    x = QF.of(x, D)
    ax = abs(x)
    if x.sign() == 0:
        raise SurfaceError("zero slit: use the torus triple instead")
    if any(ax >= W for W in widths):
        raise SurfaceError("slit does not embed: it is at least as long as a horizontal closed curve")
    cyls = [
        Cyl(f"C{j}", QF.of(widths[j], D), QF.of(heights[j], D), QF.of(twists[j], D),
            (f"s{j}", f"r{j}"), (f"s{(j - 1) % 3}", f"r{j}"))
        for j in range(3)
    ]
    lengths = {}
    for j in range(3):
        lengths[f"s{j}"] = ax
        lengths[f"r{j}"] = QF.of(widths[j], D) - ax
    left, right = ("P", "Q") if x.sign() > 0 else ("Q", "P")
    return assemble(
        D,
        cyls,
        lengths,
        names={("L", "s0"): left, ("R", "s0"): right},
        sc_perm={"s0": "s2", "s2": "s0", "s1": "s1", "r0": "r0", "r1": "r2", "r2": "r1"},
        cyl_perm={"C0": "C0", "C1": "C2", "C2": "C1"},
        tag=PRYM22,
        periods=periods,
    )


def build_three_tori(p: ThreeToriProto, slit=(0, 0)):
    """Prym(2,2) surface from a prototype and a horizontal slit (x, 0).

    A zero slit returns the :class:`TorusTriple` instead.
    """
    D = p.disc
    x, y = (QF.of(c, D) for c in slit)
    if y.sign() != 0:
        raise SurfaceError("only horizontal slits give a cylinder diagram; redecompose for other directions")
    if x.sign() == 0:
        return torus_triple(p)
    lam = p.lam
    return require_valid(
        three_tori_diagram(D, (lam, p.w, p.w), (lam, p.h, p.h), (0, p.t, p.t), x, three_tori_periods(p))
    )


def build_h2_surface(p: H2Proto) -> CylSurface:
    """The L-shaped two-cylinder surface of a splitting prototype."""
    D, lam = p.disc, p.lam
    q = lambda v: QF.of(v, D)  # noqa: E731
    cyls = [
        Cyl("C1", lam, lam, q(0), ("a",), ("b",)),
        Cyl("C2", q(p.w), q(p.h), q(p.t), ("b", "c"), ("a", "c")),
    ]
    X = assemble(
        D,
        cyls,
        {"a": lam, "b": lam, "c": q(p.w) - lam},
        names={("L", "a"): "P0"},
        sc_perm={"a": "b", "b": "a", "c": "c"},
        cyl_perm={"C1": "C1", "C2": "C2"},
        tag="H(2)",
        periods=h2_periods(p),
    )
    return require_valid(X)


def weierstrass_sites(X: CylSurface) -> list[tuple[str, str]]:
    """Regular fixed points of the involution: ("sc", id) midpoints or ("cyl", id/k) centers."""
    inv = X.inv
    sites = [("sc", s.id) for s in X.scs if inv.s[s.id] == s.id]
    for c in X.cyls:
        if inv.c[c.id] == c.id:
            sites += [("cyl", f"{c.id}/0"), ("cyl", f"{c.id}/1")]
    return sites


def mark_weierstrass_point(X: CylSurface, site: tuple[str, str], name: str = "W") -> CylSurface:
    """Insert a fixed regular point of the involution as a marked zero of order 0."""
    inv = X.inv
    D = X.disc
    kind, ident = site
    cyls = {c.id: c for c in X.cyls}
    lengths = {s.id: s.length for s in X.scs}
    sc_perm = dict(inv.s)
    cyl_perm = dict(inv.c)
    names = {("L", s.id): s.from_zero for s in X.scs}
    if kind == "sc":
        a = ident
        if sc_perm[a] != a:
            raise SurfaceError(f"{a} is not fixed by the involution")
        a1, a2 = f"{a}.1", f"{a}.2"
        half = lengths.pop(a) / 2
        lengths[a1] = lengths[a2] = half
        for cid, c in cyls.items():
            sub = lambda w: tuple(y for z in w for y in ((a1, a2) if z == a else (z,)))  # noqa: E731
            cyls[cid] = Cyl(c.id, c.width, c.height, c.twist, sub(c.bottom), sub(c.top))
        del sc_perm[a]
        sc_perm[a1], sc_perm[a2] = a2, a1
        names.pop(("L", a))
        names[("L", a1)] = X.sc[a].from_zero
        names[("L", a2)] = name
    else:
        cid, k = ident.split("/")
        if cyl_perm[cid] != cid:
            raise SurfaceError(f"{cid} is not fixed by the involution")
        C = cyls.pop(cid)
        const = rotation_constant(X, cid)[0]
        x = (const / 2 + (C.width / 2 if k == "1" else 0)).mod(C.width)
        m = f"m{cid}"
        half = C.height / 2
        lo, hi = f"{cid}.lo", f"{cid}.hi"
        cyls[lo] = Cyl(lo, C.width, half, x, C.bottom, (m,))
        cyls[hi] = Cyl(hi, C.width, half, C.twist - x, (m,), C.top)
        lengths[m] = C.width
        sc_perm[m] = m
        del cyl_perm[cid]
        cyl_perm[lo], cyl_perm[hi] = hi, lo
        names[("L", m)] = name
    Y = assemble(D, cyls.values(), lengths, names, sc_perm, cyl_perm, tag="H(2,0)", periods=X.periods)
    return require_valid(Y)


def build_double_cover(p: H2Proto, model: CoverModel | str):
    """A four-cylinder Prym(2,2) double cover of the L-shaped surface and its discriminant."""
    model = CoverModel(model)
    D, lam = p.disc, p.lam
    q = lambda v: QF.of(v, D)  # noqa: E731
    W, H, T = q(p.w), q(p.h), q(p.t)
    if model is CoverModel.MODEL1:
        tops = (("y2", "c1"), ("y1", "c2"))
        sc_perm = {"y1": "x2", "x2": "y1", "y2": "x1", "x1": "y2", "c1": "c2", "c2": "c1"}
        cyl_perm = {"A1": "A2", "A2": "A1", "B1": "B1", "B2": "B2"}
    else:
        tops = (("y2", "c2"), ("y1", "c1"))
        sc_perm = {"x2": "y2", "y2": "x2", "x1": "y1", "y1": "x1", "c1": "c2", "c2": "c1"}
        cyl_perm = {"A1": "A1", "A2": "A2", "B1": "B2", "B2": "B1"}
    cyls = [
        Cyl("A1", W, H, T, ("x2", "c1"), tops[0]),
        Cyl("B1", lam, lam, q(0), ("y1",), ("x2",)),
        Cyl("A2", W, H, T, ("x1", "c2"), tops[1]),
        Cyl("B2", lam, lam, q(0), ("y2",), ("x1",)),
    ]
    lengths = {"x1": lam, "x2": lam, "y1": lam, "y2": lam, "c1": W - lam, "c2": W - lam}
    periods = cover_periods(p, model)
    names = {("L", "x2"): "P", ("R", sc_perm["x2"]): "Q"}
    X = assemble(D, cyls, lengths, names, sc_perm, cyl_perm, PRYM22, periods)
    _, d_tilde = proper_discriminant(periods.endo)
    return require_valid(X), d_tilde


# example surfaces with hand-checked combinatorics ------------------------------------

def unit_torus(D: int = 5) -> CylSurface:
    q = lambda v: QF.of(v, D)  # noqa: E731
    return require_valid(assemble(
        D, [Cyl("C0", q(1), q(1), q(0), ("s",), ("s",))], {"s": q(1)}, {("L", "s"): "O"},
        {"s": "s"}, {"C0": "C0"}, tag="H(0)",
    ))


def torus(D: int, w, h, t) -> CylSurface:
    q = lambda v: QF.of(v, D)  # noqa: E731
    return require_valid(assemble(
        D, [Cyl("C0", q(w), q(h), q(t), ("s",), ("s",))], {"s": q(w)}, {("L", "s"): "O"},
        {"s": "s"}, {"C0": "C0"}, tag="H(0)",
    ))


def five_cylinder_prym112(D: int = 5) -> CylSurface:
    """Stable five-cylinder Prym(1,1,2) surface; zeros P, Q of order 1 and Z of order 2."""
    q = lambda v: QF.of(Fraction(v), D)  # noqa: E731
    cyls = [
        Cyl("C1", q("3/2"), q("1/2"), q("1/2"), ("sE",), ("sB",)),
        Cyl("C2", q(1), q(1), q(0), ("s0",), ("s1",)),
        Cyl("C3", q(3), q(1), q("1/4"), ("s1", "sC"), ("sA", "sE")),
        Cyl("C4", q(3), q(1), q("1/4"), ("sF", "sB"), ("sC", "s0")),
        Cyl("C5", q("3/2"), q("1/2"), q("1/2"), ("sA",), ("sF",)),
    ]
    lengths = {"s0": q(1), "s1": q(1), "sC": q(2), "sA": q("3/2"), "sB": q("3/2"),
               "sE": q("3/2"), "sF": q("3/2")}
    return require_valid(assemble(
        D, cyls, lengths,
        {("L", "sB"): "P", ("L", "sA"): "Q", ("L", "s1"): "Z"},
        {"s0": "s1", "s1": "s0", "sC": "sC", "sA": "sB", "sB": "sA", "sE": "sF", "sF": "sE"},
        {"C1": "C5", "C5": "C1", "C2": "C2", "C3": "C4", "C4": "C3"},
        tag="Prym(1,1,2)",
    ))


def four_cylinder_prym22(D: int = 5) -> CylSurface:
    """Stable four-cylinder Prym(2,2) surface with two invariant cylinders."""
    q = lambda v: QF.of(Fraction(v), D)  # noqa: E731
    cyls = [
        Cyl("C1", q(5), q("3/4"), q("3/2"), ("a", "b"), ("c",)),
        Cyl("C2", q(8), q("3/4"), q("3/4"), ("c", "d"), ("b", "e")),
        Cyl("C3", q(2), q("3/2"), q(0), ("f",), ("a",)),
        Cyl("C4", q(5), q("3/4"), q("3/2"), ("e",), ("d", "f")),
    ]
    lengths = {"a": q(2), "b": q(3), "c": q(5), "d": q(3), "e": q(5), "f": q(2)}
    return require_valid(assemble(
        D, cyls, lengths,
        {("L", "c"): "P", ("L", "a"): "Q"},
        {"a": "f", "f": "a", "b": "d", "d": "b", "c": "e", "e": "c"},
        {"C1": "C4", "C4": "C1", "C2": "C2", "C3": "C3"},
        tag=PRYM22,
    ))


def unstable_three_cylinder(D: int = 5, heights=(2, 2, 2), twists=(0, 0, 0)) -> CylSurface:
    """Unstable three-cylinder H(2,2) surface: every horizontal saddle connection joins P and Q.

    Outgoing and incoming prongs at P and Q form one alternating 6-cycle, so a
    small vertical kernel move with pair (P, Q) produces four cylinders.  No
    involution exchanging P and Q is compatible with this gluing.
    """
    q = lambda v: QF.of(Fraction(v), D)  # noqa: E731
    h1, h2, h3 = heights
    t1, t2, t3 = twists
    cyls = [
        Cyl("C1", q(4), q(h1), q(t1), ("a", "b"), ("a", "c")),
        Cyl("C2", q(4), q(h2), q(t2), ("c", "d"), ("b", "e")),
        Cyl("C3", q(4), q(h3), q(t3), ("e", "f"), ("d", "f")),
    ]
    lengths = {s: q(2) for s in "abcdef"}
    return require_valid(assemble(D, cyls, lengths, {("L", "a"): "P", ("R", "a"): "Q"}, tag="H(2,2)"))
