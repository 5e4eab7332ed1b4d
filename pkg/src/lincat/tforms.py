"""Polynomial and infinitesimal extensions of the form algebra.

Forms with coefficients in Q[t], and pairs (a0, a1) standing for
a0 + a1.e with e^2 = 0, support the interpolation argument behind
homotopy invariance: a one-parameter family of connection data becomes
a single object over the extended coefficients, specializes at t = 0
and t = 1, and its e-component integrates to an explicit primitive.

Sign conventions, fixed here once and exercised by the tests:

* composition   (a0 + a1.e)(b0 + b1.e) = a0.b0 + (a0.b1 + (-1)^m a1.b0).e
  where m is the total degree of the right factor;
* differential  D(a0 + a1.e) = d(a0) + (d(a1) + (-1)^(n+1) a0').e
  on total degree n, where a0' is the derivative in t.

With these choices D squares to zero and is a graded derivation for the
composition above, and the integration operator on diagonal classes
satisfies an exact homotopy identity (see the quotient-complex module).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .category import ObjectId
from .dg import DGCategory, Form, FormMatrix
from .errors import CompositionError, DimensionError

# ---------------------------------------------------------------------------
# polynomial forms


@dataclass(frozen=True)
class PolyForm:
    """A form with coefficients in Q[t]; `coeffs[i]` multiplies t^i."""

    degree: int
    dom: ObjectId
    cod: ObjectId
    coeffs: tuple[Form, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise DimensionError("polynomial form needs at least one coefficient")
        for f in self.coeffs:
            if (f.degree, f.dom, f.cod) != (self.degree, self.dom, self.cod):
                raise DimensionError("polynomial form: inconsistent coefficient type")

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.coeffs)


def poly_form(coeffs: Sequence[Form]) -> PolyForm:
    """Normalized constructor: trims trailing zero coefficients."""
    cs = list(coeffs)
    if not cs:
        raise DimensionError("polynomial form needs at least one coefficient")
    while len(cs) > 1 and cs[-1].is_zero():
        cs.pop()
    head = cs[0]
    return PolyForm(head.degree, head.dom, head.cod, tuple(cs))


def poly_const(f: Form) -> PolyForm:
    return poly_form([f])


def poly_zero(w: DGCategory, degree: int, dom: ObjectId, cod: ObjectId) -> PolyForm:
    return poly_const(w.zero_form(degree, dom, cod))


def poly_shift(a: PolyForm, k: int = 1) -> PolyForm:
    """Multiply by t^k."""
    zero = a.coeffs[0].scale(0)
    return poly_form((zero,) * k + a.coeffs)


def poly_add(a: PolyForm, b: PolyForm) -> PolyForm:
    if (a.degree, a.dom, a.cod) != (b.degree, b.dom, b.cod):
        raise DimensionError("polynomial form addition: type mismatch")
    zero = a.coeffs[0].scale(0)
    n = max(len(a.coeffs), len(b.coeffs))
    padded_a = a.coeffs + (zero,) * (n - len(a.coeffs))
    padded_b = b.coeffs + (zero,) * (n - len(b.coeffs))
    return poly_form([x + y for x, y in zip(padded_a, padded_b)])


def poly_sub(a: PolyForm, b: PolyForm) -> PolyForm:
    return poly_add(a, poly_scale(b, -1))


def poly_scale(a: PolyForm, s) -> PolyForm:
    return poly_form([f.scale(s) for f in a.coeffs])


def poly_compose(w: DGCategory, a: PolyForm, b: PolyForm) -> PolyForm:
    if a.dom != b.cod:
        raise CompositionError("polynomial forms do not compose: endpoint mismatch")
    out: list[Form] = [
        w.zero_form(a.degree + b.degree, b.dom, a.cod)
        for _ in range(len(a.coeffs) + len(b.coeffs) - 1)
    ]
    for i, fa in enumerate(a.coeffs):
        if fa.is_zero():
            continue
        for j, fb in enumerate(b.coeffs):
            if fb.is_zero():
                continue
            out[i + j] = out[i + j] + w.compose(fa, fb)
    return poly_form(out)


def poly_d(w: DGCategory, a: PolyForm) -> PolyForm:
    return poly_form([w.d(f) for f in a.coeffs])


def poly_t_derivative(a: PolyForm) -> PolyForm:
    if len(a.coeffs) == 1:
        return poly_form([a.coeffs[0].scale(0)])
    return poly_form([a.coeffs[i].scale(i) for i in range(1, len(a.coeffs))])


def poly_integral01(a: PolyForm) -> Form:
    """Integrate the coefficients over t in [0, 1]."""
    total = a.coeffs[0].scale(0)
    for i, f in enumerate(a.coeffs):
        total = total + f.scale(Fraction(1, i + 1))
    return total


def poly_eval(a: PolyForm, t) -> Form:
    t = Fraction(t)
    total = a.coeffs[0].scale(0)
    power = Fraction(1)
    for f in a.coeffs:
        total = total + f.scale(power)
        power *= t
    return total


# ---------------------------------------------------------------------------
# forms with an infinitesimal component


@dataclass(frozen=True)
class TildeForm:
    """part0 + part1.e in total degree part0.degree; part1 one degree lower."""

    part0: PolyForm
    part1: Optional[PolyForm]

    def __post_init__(self):
        if self.part0.degree == 0:
            if self.part1 is not None:
                raise DimensionError("degree-0 extended form cannot carry an e-component")
        else:
            if self.part1 is None:
                raise DimensionError("positive-degree extended form needs an explicit e-component")
            if self.part1.degree != self.part0.degree - 1:
                raise DimensionError("e-component must sit one degree lower")
            if (self.part1.dom, self.part1.cod) != (self.part0.dom, self.part0.cod):
                raise DimensionError("e-component endpoints differ from the main component")

    @property
    def degree(self) -> int:
        return self.part0.degree


def tilde_form(w: DGCategory, part0: PolyForm, part1: Optional[PolyForm] = None) -> TildeForm:
    if part0.degree >= 1 and part1 is None:
        part1 = poly_zero(w, part0.degree - 1, part0.dom, part0.cod)
    return TildeForm(part0, part1)


def tilde_add(a: TildeForm, b: TildeForm) -> TildeForm:
    p1 = None
    if a.part1 is not None:
        p1 = poly_add(a.part1, b.part1)
    return TildeForm(poly_add(a.part0, b.part0), p1)


def tilde_scale(a: TildeForm, s) -> TildeForm:
    return TildeForm(poly_scale(a.part0, s), None if a.part1 is None else poly_scale(a.part1, s))


def tilde_compose(w: DGCategory, a: TildeForm, b: TildeForm) -> TildeForm:
    part0 = poly_compose(w, a.part0, b.part0)
    n = a.degree + b.degree
    if n == 0:
        return TildeForm(part0, None)
    part1 = poly_zero(w, n - 1, b.part0.dom, a.part0.cod)
    if b.part1 is not None:
        part1 = poly_add(part1, poly_compose(w, a.part0, b.part1))
    if a.part1 is not None:
        sign = -1 if b.degree % 2 else 1
        part1 = poly_add(part1, poly_scale(poly_compose(w, a.part1, b.part0), sign))
    return TildeForm(part0, part1)


def tilde_partial(w: DGCategory, a: TildeForm) -> TildeForm:
    """The differential: d on the main part, d +/- the t-derivative on e."""
    n = a.degree
    part0 = poly_d(w, a.part0)
    sign = 1 if (n + 1) % 2 == 0 else -1
    part1 = poly_scale(poly_t_derivative(a.part0), sign)
    if a.part1 is not None:
        part1 = poly_add(part1, poly_d(w, a.part1))
    return TildeForm(part0, part1)


# ---------------------------------------------------------------------------
# matrices over the extensions


@dataclass(frozen=True)
class PolyMatrix:
    """A form matrix with coefficients in Q[t]; `coeffs[i]` multiplies t^i."""

    degree: int
    row_family: tuple[ObjectId, ...]
    col_family: tuple[ObjectId, ...]
    coeffs: tuple[FormMatrix, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise DimensionError("polynomial matrix needs at least one coefficient")
        for m in self.coeffs:
            if (m.degree, m.row_family, m.col_family) != (self.degree, self.row_family, self.col_family):
                raise DimensionError("polynomial matrix: inconsistent coefficient type")

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.coeffs)


def poly_matrix(coeffs: Sequence[FormMatrix]) -> PolyMatrix:
    cs = list(coeffs)
    if not cs:
        raise DimensionError("polynomial matrix needs at least one coefficient")
    while len(cs) > 1 and cs[-1].is_zero():
        cs.pop()
    head = cs[0]
    return PolyMatrix(head.degree, head.row_family, head.col_family, tuple(cs))


def pm_const(m: FormMatrix) -> PolyMatrix:
    return poly_matrix([m])


def pm_shift(a: PolyMatrix, k: int = 1) -> PolyMatrix:
    zero = a.coeffs[0].scale(0)
    return poly_matrix((zero,) * k + a.coeffs)


def pm_add(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if (a.degree, a.row_family, a.col_family) != (b.degree, b.row_family, b.col_family):
        raise DimensionError("polynomial matrix addition: type mismatch")
    zero = a.coeffs[0].scale(0)
    n = max(len(a.coeffs), len(b.coeffs))
    pa = a.coeffs + (zero,) * (n - len(a.coeffs))
    pb = b.coeffs + (zero,) * (n - len(b.coeffs))
    return poly_matrix([x + y for x, y in zip(pa, pb)])


def pm_scale(a: PolyMatrix, s) -> PolyMatrix:
    return poly_matrix([m.scale(s) for m in a.coeffs])


def pm_mul(w: DGCategory, a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.col_family != b.row_family:
        raise DimensionError("polynomial matrix product: inner families differ")
    out = [
        FormMatrix.zero(w, a.row_family, b.col_family, a.degree + b.degree)
        for _ in range(len(a.coeffs) + len(b.coeffs) - 1)
    ]
    for i, ma in enumerate(a.coeffs):
        if ma.is_zero():
            continue
        for j, mb in enumerate(b.coeffs):
            if mb.is_zero():
                continue
            out[i + j] = out[i + j] + ma.mul(w, mb)
    return poly_matrix(out)


def pm_d(w: DGCategory, a: PolyMatrix) -> PolyMatrix:
    return poly_matrix([m.d(w) for m in a.coeffs])


def pm_t_derivative(a: PolyMatrix) -> PolyMatrix:
    if len(a.coeffs) == 1:
        return poly_matrix([a.coeffs[0].scale(0)])
    return poly_matrix([a.coeffs[i].scale(i) for i in range(1, len(a.coeffs))])


def pm_eval(a: PolyMatrix, t) -> FormMatrix:
    t = Fraction(t)
    total = a.coeffs[0].scale(0)
    power = Fraction(1)
    for m in a.coeffs:
        total = total + m.scale(power)
        power *= t
    return total


def pm_diagonal_trace(w: DGCategory, a: PolyMatrix) -> tuple[tuple[Form, ...], ...]:
    """Per t-power, the object-indexed diagonal trace components."""
    return tuple(m.diagonal_trace(w) for m in a.coeffs)


@dataclass(frozen=True)
class TildeMatrix:
    """part0 + part1.e; the e-part sits one degree lower, same families."""

    part0: PolyMatrix
    part1: Optional[PolyMatrix]

    def __post_init__(self):
        if self.part0.degree == 0:
            if self.part1 is not None:
                raise DimensionError("degree-0 extended matrix cannot carry an e-component")
        else:
            if self.part1 is None:
                raise DimensionError("positive-degree extended matrix needs an explicit e-component")
            if self.part1.degree != self.part0.degree - 1:
                raise DimensionError("e-component must sit one degree lower")
            if (self.part1.row_family, self.part1.col_family) != (self.part0.row_family, self.part0.col_family):
                raise DimensionError("e-component families differ from the main component")

    @property
    def degree(self) -> int:
        return self.part0.degree


def tilde_matrix(w: DGCategory, part0: PolyMatrix, part1: Optional[PolyMatrix] = None) -> TildeMatrix:
    if part0.degree >= 1 and part1 is None:
        part1 = pm_const(FormMatrix.zero(w, part0.row_family, part0.col_family, part0.degree - 1))
    return TildeMatrix(part0, part1)


def tm_add(a: TildeMatrix, b: TildeMatrix) -> TildeMatrix:
    p1 = None
    if a.part1 is not None:
        p1 = pm_add(a.part1, b.part1)
    return TildeMatrix(pm_add(a.part0, b.part0), p1)


def tm_mul(w: DGCategory, a: TildeMatrix, b: TildeMatrix) -> TildeMatrix:
    part0 = pm_mul(w, a.part0, b.part0)
    n = a.degree + b.degree
    if n == 0:
        return TildeMatrix(part0, None)
    part1 = pm_const(FormMatrix.zero(w, a.part0.row_family, b.part0.col_family, n - 1))
    if b.part1 is not None:
        part1 = pm_add(part1, pm_mul(w, a.part0, b.part1))
    if a.part1 is not None:
        sign = -1 if b.degree % 2 else 1
        part1 = pm_add(part1, pm_scale(pm_mul(w, a.part1, b.part0), sign))
    return TildeMatrix(part0, part1)


def tm_power(w: DGCategory, a: TildeMatrix, k: int) -> TildeMatrix:
    if a.part0.row_family != a.part0.col_family:
        raise DimensionError("only square extended matrices have powers")
    if k < 1:
        raise DimensionError("extended matrix power needs a positive exponent")
    acc = a
    for _ in range(k - 1):
        acc = tm_mul(w, acc, a)
    return acc


def tm_partial(w: DGCategory, a: TildeMatrix) -> TildeMatrix:
    n = a.degree
    part0 = pm_d(w, a.part0)
    sign = 1 if (n + 1) % 2 == 0 else -1
    part1 = pm_scale(pm_t_derivative(a.part0), sign)
    if a.part1 is not None:
        part1 = pm_add(part1, pm_d(w, a.part1))
    return TildeMatrix(part0, part1)
