"""Period coordinates on the anti-invariant homology and real-multiplication checks.

Periods are row vectors; an endomorphism acts on them by right multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .quadfield import QF, check_disc, parse_qf

IntMatrix = tuple[tuple[int, ...], ...]

J = ((0, 1), (-1, 0))


class NotAnEigenform(ValueError):
    pass


def block_form(k1: int, k2: int) -> IntMatrix:
    """The form diag(k1*J, k2*J)."""
    return (
        (0, k1, 0, 0),
        (-k1, 0, 0, 0),
        (0, 0, 0, k2),
        (0, 0, -k2, 0),
    )


FORM_J_J = block_form(1, 1)
FORM_J_2J = block_form(1, 2)
FORM_2J_J = block_form(2, 1)


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(m)), 0 * A[0][0]) for j in range(p))
        for i in range(n)
    )


def transpose(A):
    return tuple(zip(*A))


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def row_times(v: Sequence, M) -> tuple:
    """Row vector v times matrix M."""
    return tuple(sum((v[i] * M[i][j] for i in range(len(v))), 0 * v[0]) for j in range(len(M[0])))


@dataclass(frozen=True)
class RMEndo:
    t: IntMatrix
    e: int
    c: int

    def __post_init__(self):
        object.__setattr__(self, "t", as_matrix(self.t))

    def satisfies_quadratic(self) -> bool:
        n = len(self.t)
        sq = mat_mul(self.t, self.t)
        return all(
            sq[i][j] == self.e * self.t[i][j] + self.c * (i == j)
            for i in range(n)
            for j in range(n)
        )

    @property
    def raw_discriminant(self) -> int:
        return self.e * self.e + 4 * self.c


@dataclass(frozen=True)
class PeriodData:
    form: IntMatrix
    re: tuple[QF, ...]
    im: tuple[QF, ...]
    labels: tuple[str, ...] = ("a1", "b1", "a2", "b2")
    family: str = ""
    proto: tuple[int, ...] = ()
    endo: RMEndo | None = None
    extra: tuple[tuple[str, str], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "form", as_matrix(self.form))
        object.__setattr__(self, "re", tuple(self.re))
        object.__setattr__(self, "im", tuple(self.im))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "proto", tuple(self.proto))
        object.__setattr__(self, "extra", tuple(tuple(p) for p in self.extra))

    def is_nondegenerate(self) -> bool:
        n = len(self.re)
        return any(
            self.re[i] * self.im[j] - self.re[j] * self.im[i]
            for i in range(n)
            for j in range(i + 1, n)
        )


def check_self_adjoint(endo: RMEndo, form: IntMatrix) -> bool:
    """Adjointness for the intersection form: t^T m = m t."""
    t, m = endo.t, as_matrix(form)
    if len(t) != len(m):
        raise ValueError("shape mismatch between endomorphism and form")
    return mat_mul(transpose(t), m) == mat_mul(m, t)


def check_eigenform(endo: RMEndo, p: PeriodData) -> QF | None:
    """Eigenvalue of the period rows under right multiplication, or None."""
    if not p.is_nondegenerate():
        raise ValueError("period data has rank < 2")
    rt, it = row_times(p.re, endo.t), row_times(p.im, endo.t)
    i = next(k for k, x in enumerate(p.re) if x)
    lam = rt[i] / p.re[i]
    if any(a != lam * b for a, b in zip(rt, p.re)):
        return None
    if any(a != lam * b for a, b in zip(it, p.im)):
        return None
    if lam * lam != endo.e * lam + endo.c:
        return None
    return lam


def content(endo: RMEndo) -> int:
    """Largest k such that (t - j*Id)/k is integral for some integer j."""
    t = endo.t
    n = len(t)
    g = 0
    for i in range(n):
        for j in range(n):
            if i != j:
                g = gcd(g, t[i][j])
        g = gcd(g, t[i][i] - t[0][0])
    if g == 0:  # scalar matrix
        g = abs(t[0][0])
    if g == 0:
        raise ValueError("zero endomorphism has no proper order")
    return g


def proper_discriminant(endo: RMEndo) -> tuple[int, int]:
    """(k, D) with D the discriminant of the order generated by (t - j)/k."""
    k = content(endo)
    raw = endo.raw_discriminant
    if raw % (k * k):
        raise ValueError(f"raw discriminant {raw} not divisible by {k}^2")
    return k, raw // (k * k)


def build_period_data(surface) -> PeriodData:
    if surface.periods is None:
        raise ValueError("surface carries no recorded homology basis")
    return surface.periods


# JSON --------------------------------------------------------------------------

def period_data_to_json(p: PeriodData) -> dict:
    out = {
        "family": p.family,
        "proto": list(p.proto),
        "form": [list(r) for r in p.form],
        "labels": list(p.labels),
        "re": [str(x) for x in p.re],
        "im": [str(x) for x in p.im],
    }
    if p.endo is not None:
        out["endo"] = {"t": [list(r) for r in p.endo.t], "e": p.endo.e, "c": p.endo.c}
    if p.extra:
        out["extra"] = {k: v for k, v in p.extra}
    return out


def period_data_from_json(obj: dict, D: int) -> PeriodData:
    check_disc(D)
    endo = None
    if obj.get("endo") is not None:
        e = obj["endo"]
        endo = RMEndo(as_matrix(e["t"]), int(e["e"]), int(e["c"]))
    return PeriodData(
        form=as_matrix(obj["form"]),
        re=tuple(parse_qf(x, D) for x in obj["re"]),
        im=tuple(parse_qf(x, D) for x in obj["im"]),
        labels=tuple(obj.get("labels", ("a1", "b1", "a2", "b2"))),
        family=obj.get("family", ""),
        proto=tuple(int(x) for x in obj.get("proto", ())),
        endo=endo,
        extra=tuple(sorted((str(k), str(v)) for k, v in obj.get("extra", {}).items())),
    )


def rational_matrix_inverse(M):
    """Inverse of a small square matrix with exact entries (Gauss-Jordan)."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return tuple(tuple(row[n:]) for row in A)


# period lattices -------------------------------------------------------------------

def _rational_gcd(values) -> Fraction:
    vals = [Fraction(v) for v in values if v]
    if not vals:
        return Fraction(0)
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    g = 0
    for v in vals:
        g = gcd(g, int(v * den))
    return Fraction(g, den)


def integer_row_basis(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Echelon Z-basis of the row lattice spanned by integer vectors."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    n = len(A[0])
    basis, r = [], 0
    for col in range(n):
        rest = [row for row in A[r:]]
        while True:
            nz = [row for row in rest if row[col]]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda row: abs(row[col]))
            for row in nz:
                if row is not piv:
                    q = row[col] // piv[col]
                    for j in range(n):
                        row[j] -= q * piv[j]
        nz = [row for row in rest if row[col]]
        if nz:
            piv = nz[0]
            basis.append(piv)
            rest = [row for row in rest if row is not piv]
        A = A[:r] + rest
    return [row for row in basis if any(row)]


def lattice_basis(vectors: Sequence[Sequence[QF]]) -> list[tuple[QF, QF]]:
    """Z-basis of the subgroup of Q(sqrt D)^2 generated by planar vectors."""
    if not vectors:
        return []
    D = vectors[0][0].D
    coords = [[x.a, x.b, y.a, y.b] for x, y in vectors]
    den = 1
    for row in coords:
        for c in row:
            den = den * c.denominator // gcd(den, c.denominator)
    ints = [[int(c * den) for c in row] for row in coords]
    out = []
    for row in integer_row_basis(ints):
        a, b, c, d = (Fraction(v, den) for v in row)
        out.append((QF(a, b, D), QF(c, d, D)))
    return out


def multiplier_discriminant(vectors: Sequence[Sequence[QF]]) -> int:
    """Discriminant of {x in Q(sqrt D) : x * L in L} for a rank-4 period lattice L.

    The ring is Z[u + v0*sqrt(D)] with v0 the least positive admissible
    coefficient, so its discriminant is 4 * v0^2 * D.
    """
    basis = lattice_basis(vectors)
    if len(basis) != 4:
        raise ValueError(f"period lattice has rank {len(basis)}, expected 4")
    D = basis[0][0].D
    B = [[x.a, x.b, y.a, y.b] for x, y in basis]
    Binv = rational_matrix_inverse(B)
    images = [[x.b * D, x.a, y.b * D, y.a] for x, y in basis]
    M = [[sum(img[k] * Binv[k][j] for k in range(4)) for j in range(4)] for img in images]
    g = _rational_gcd([M[i][j] for i in range(4) for j in range(4) if i != j]
                      + [M[i][i] - M[0][0] for i in range(1, 4)])
    if g == 0:
        raise ValueError("square root of D acts as a scalar: the field is not real quadratic")
    disc = 4 * D / (g * g)
    if disc.denominator != 1:
        raise ValueError(f"multiplier ring has non-integral discriminant {disc}")
    return int(disc)
