"""Differential graded structure on top of a finite linear category.

A `DGCategory` extends a base category with graded hom spaces up to a
truncation degree N, a graded composition, and a differential with
d.d = 0 and the graded Leibniz rule.  Degrees above N are zero spaces;
this is a quotient of the untruncated object by the ideal of forms of
degree > N, so every identity checked here survives truncation verbatim.

Two constructions are provided: `trivial_dg` (no forms above degree 0)
and `universal_dg`, which realizes the universal differential envelope
concretely inside "chain" spaces.  The degree-n chain space for the
endpoint pair (x, y) is the direct sum, over all length-n interior
object paths, of tensor products of n+1 hom spaces strung along the
path.  Inside it:

* degree 1 is the kernel of the composition map, with its basis chosen
  by row reduction in lexicographic path order;
* higher degrees are spanned by middle-merge products of lower ones;
* the differential is the alternating sum of identity insertions, which
  on degree 0 reduces to d(f) = 1.f - f.1.

All bases are deterministic, so composition tensors and differential
matrices are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .category import Category, Morphism, ObjectId, Violation, compose as cat_compose
from .errors import CompositionError, DimensionError, LincatError
from .exact_linalg import (
    MatrixQ,
    Vector,
    is_zero_vector,
    kernel_basis,
    row_space_basis,
    unit_vector,
    vec,
    vec_add,
    vec_scale,
    zero_vector,
)

# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True)
class Form:
    """A homogeneous form of the given degree, from `dom` to `cod`."""

    degree: int
    dom: ObjectId
    cod: ObjectId
    coords: Vector

    def __add__(self, other: "Form") -> "Form":
        if (self.degree, self.dom, self.cod) != (other.degree, other.dom, other.cod):
            raise CompositionError("cannot add forms of different degree or endpoints")
        return Form(self.degree, self.dom, self.cod, vec_add(self.coords, other.coords))

    def __neg__(self) -> "Form":
        return self.scale(-1)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, s) -> "Form":
        return Form(self.degree, self.dom, self.cod, vec_scale(Fraction(s), self.coords))

    def is_zero(self) -> bool:
        return is_zero_vector(self.coords)


class DGCategory:
    """Graded hom spaces, graded composition and differential tables.

    Degree 0 always delegates to the base category.  `gr_basis` holds
    the labels of the degree-n bases for n >= 1, `gr_comp` the
    composition tensors for mixed degrees, and `diff` the matrices of
    the differential; missing tensors denote zero maps and are filled
    with explicit zeros at construction time.
    """

    def __init__(
        self,
        base: Category,
        truncation: int,
        gr_basis: Mapping[int, Mapping[tuple[int, int], Sequence[str]]],
        gr_comp: Mapping[tuple[int, int], Mapping[tuple[int, int, int], Sequence]],
        diff: Mapping[int, Mapping[tuple[int, int], MatrixQ]],
    ):
        if truncation < 1:
            raise DimensionError("truncation degree must be at least 1")
        self.base = base
        self.truncation = truncation
        nobj = len(base.objects)

        self.gr_basis: dict[int, dict[tuple[int, int], tuple[str, ...]]] = {}
        for n in range(1, truncation + 1):
            level = {}
            for (x, y), labels in gr_basis.get(n, {}).items():
                if not (0 <= x < nobj and 0 <= y < nobj):
                    raise DimensionError(f"degree-{n} basis endpoint out of range: {(x, y)}")
                if labels:
                    level[(x, y)] = tuple(str(s) for s in labels)
            self.gr_basis[n] = level

        self.gr_comp: dict[tuple[int, int], dict[tuple[int, int, int], tuple]] = {}
        for p in range(0, truncation + 1):
            for q in range(0, truncation + 1 - p):
                if p == 0 and q == 0:
                    continue
                given = gr_comp.get((p, q), {})
                table = {}
                for x in range(nobj):
                    for y in range(nobj):
                        dp = self.dim(p, x, y)
                        if dp == 0:
                            continue
                        for z in range(nobj):
                            dq = self.dim(q, y, z)
                            if dq == 0:
                                continue
                            dn = self.dim(p + q, x, z)
                            tensor = given.get((x, y, z))
                            if tensor is None:
                                rows = tuple(tuple(zero_vector(dn) for _ in range(dq)) for _ in range(dp))
                            else:
                                if len(tensor) != dp or any(len(r) != dq for r in tensor):
                                    raise DimensionError(f"composition tensor ({p},{q}) at {(x, y, z)}: bad arity")
                                rows = tuple(
                                    tuple(self._checked_vec(tensor[i][j], dn, f"comp ({p},{q}) {(x, y, z)}")
                                          for j in range(dq))
                                    for i in range(dp)
                                )
                            table[(x, y, z)] = rows
                self.gr_comp[(p, q)] = table

        self.diff: dict[int, dict[tuple[int, int], MatrixQ]] = {}
        for n in range(0, truncation + 1):
            given = diff.get(n, {})
            level = {}
            for x in range(nobj):
                for y in range(nobj):
                    dn = self.dim(n, x, y)
                    if dn == 0:
                        continue
                    dn1 = self.dim(n + 1, x, y)
                    m = given.get((x, y))
                    if m is None:
                        m = MatrixQ.zero(dn1, dn)
                    if (m.rows, m.cols) != (dn1, dn):
                        raise DimensionError(f"differential matrix at degree {n}, {(x, y)}: wrong shape")
                    level[(x, y)] = m
            self.diff[n] = level

        self._derham = None  # memo slot used by the quotient-complex builder

    @staticmethod
    def _checked_vec(values, expected: int, where: str) -> Vector:
        v = vec(values)
        if len(v) != expected:
            raise DimensionError(f"{where}: wrong target length")
        return v

    # -- dimensions and bases --------------------------------------------

    def dim(self, n: int, x: int, y: int) -> int:
        if n < 0 or n > self.truncation:
            return 0
        if n == 0:
            return self.base.dim(x, y)
        return len(self.gr_basis.get(n, {}).get((x, y), ()))

    def space_labels(self, n: int, x: int, y: int) -> tuple[str, ...]:
        if n == 0:
            return self.base.basis_labels(x, y)
        return self.gr_basis.get(n, {}).get((x, y), ())

    def hom_pairs(self, n: int) -> list[tuple[int, int]]:
        nobj = len(self.base.objects)
        return [(x, y) for x in range(nobj) for y in range(nobj) if self.dim(n, x, y) > 0]

    def zero_form(self, n: int, dom: ObjectId, cod: ObjectId) -> Form:
        return Form(n, dom, cod, zero_vector(self.dim(n, cod.index, dom.index)))

    def form(self, n: int, dom: ObjectId, cod: ObjectId, coords) -> Form:
        v = vec(coords)
        if len(v) != self.dim(n, cod.index, dom.index):
            raise DimensionError(
                f"degree-{n} form {dom.label}->{cod.label}: expected {self.dim(n, cod.index, dom.index)} coordinates"
            )
        return Form(n, dom, cod, v)

    def basis_form(self, n: int, dom: ObjectId, cod: ObjectId, k: int) -> Form:
        d = self.dim(n, cod.index, dom.index)
        if not (0 <= k < d):
            raise DimensionError(f"basis index {k} out of range for dimension {d}")
        return Form(n, dom, cod, unit_vector(d, k))

    def identity_form(self, x: ObjectId) -> Form:
        return Form(0, x, x, self.base.identity[x.index])

    def form_from_morphism(self, f: Morphism) -> Form:
        return Form(0, f.dom, f.cod, f.coords)

    def morphism_from_form(self, f: Form) -> Morphism:
        if f.degree != 0:
            raise CompositionError("only degree-0 forms are morphisms of the base category")
        return Morphism(f.dom, f.cod, f.coords)

    # -- composition and differential ------------------------------------

    def compose(self, f: Form, g: Form) -> Form:
        if f.dom != g.cod:
            raise CompositionError(
                f"cannot compose: left factor starts at {f.dom.label}, right factor ends at {g.cod.label}"
            )
        p, q = f.degree, g.degree
        x, y, z = f.cod.index, f.dom.index, g.dom.index
        n = p + q
        result_dim = self.dim(n, x, z)
        out = list(zero_vector(result_dim))
        if result_dim and n <= self.truncation:
            if p == 0 and q == 0:
                m = cat_compose(self.base, Morphism(f.dom, f.cod, f.coords), Morphism(g.dom, g.cod, g.coords))
                return Form(0, g.dom, f.cod, m.coords)
            tensor = self.gr_comp[(p, q)].get((x, y, z))
            if tensor is not None:
                for i, a in enumerate(f.coords):
                    if a == 0:
                        continue
                    for j, b in enumerate(g.coords):
                        if b == 0:
                            continue
                        for k, s in enumerate(tensor[i][j]):
                            if s != 0:
                                out[k] += a * b * s
        return Form(n, g.dom, f.cod, tuple(out))

    def d(self, f: Form) -> Form:
        n = f.degree
        x, y = f.cod.index, f.dom.index
        if n >= self.truncation or self.dim(n, x, y) == 0:
            return self.zero_form(n + 1, f.dom, f.cod)
        mat = self.diff[n].get((x, y))
        if mat is None:
            return self.zero_form(n + 1, f.dom, f.cod)
        return Form(n + 1, f.dom, f.cod, mat.apply(f.coords))

    def diff_matrix(self, n: int, x: int, y: int) -> MatrixQ:
        dn, dn1 = self.dim(n, x, y), self.dim(n + 1, x, y)
        if n < 0 or n >= self.truncation or dn == 0:
            return MatrixQ.zero(dn1, dn)
        return self.diff[n].get((x, y), MatrixQ.zero(dn1, dn))


def validate_dg(w: DGCategory) -> list[Violation]:
    """Unit, d.d = 0, Leibniz and associativity failures, as data."""
    violations: list[Violation] = []
    N = w.truncation

    def name(n: int, x: int, y: int, k: int) -> str:
        labels = w.space_labels(n, x, y)
        return labels[k] if k < len(labels) else f"deg{n}[{x},{y}]#{k}"

    for n in range(0, N + 1):
        for (x, y) in w.hom_pairs(n):
            ox, oy = w.base.objects[x], w.base.objects[y]
            one_x, one_y = w.identity_form(ox), w.identity_form(oy)
            for k in range(w.dim(n, x, y)):
                b = w.basis_form(n, oy, ox, k)
                if w.compose(one_x, b) != b:
                    violations.append(Violation("dg-identity-left", f"1_{ox.label} . {name(n, x, y, k)}"))
                if w.compose(b, one_y) != b:
                    violations.append(Violation("dg-identity-right", f"{name(n, x, y, k)} . 1_{oy.label}"))

    for n in range(0, N):
        for (x, y) in w.hom_pairs(n):
            dd = w.diff_matrix(n + 1, x, y) @ w.diff_matrix(n, x, y)
            if not dd.is_zero():
                violations.append(Violation("dg-d-squared", f"degree {n} at ({w.base.objects[x].label},{w.base.objects[y].label})"))

    nobj = len(w.base.objects)
    for p in range(0, N + 1):
        for q in range(0, N - p + 1):
            if p + q + 1 > N:
                continue
            for x in range(nobj):
                for y in range(nobj):
                    if w.dim(p, x, y) == 0:
                        continue
                    for z in range(nobj):
                        if w.dim(q, y, z) == 0:
                            continue
                        sign = -1 if p % 2 else 1
                        for i in range(w.dim(p, x, y)):
                            f = w.basis_form(p, w.base.objects[y], w.base.objects[x], i)
                            df = w.d(f)
                            for j in range(w.dim(q, y, z)):
                                g = w.basis_form(q, w.base.objects[z], w.base.objects[y], j)
                                lhs = w.d(w.compose(f, g))
                                rhs = w.compose(df, g) + w.compose(f, w.d(g)).scale(sign)
                                if lhs != rhs:
                                    violations.append(
                                        Violation("dg-leibniz", f"{name(p, x, y, i)} . {name(q, y, z, j)}")
                                    )

    for p in range(0, N + 1):
        for q in range(0, N - p + 1):
            for r in range(0, N - p - q + 1):
                for x in range(nobj):
                    for y in range(nobj):
                        if w.dim(p, x, y) == 0:
                            continue
                        for z in range(nobj):
                            if w.dim(q, y, z) == 0:
                                continue
                            for u in range(nobj):
                                if w.dim(r, z, u) == 0:
                                    continue
                                for i in range(w.dim(p, x, y)):
                                    f = w.basis_form(p, w.base.objects[y], w.base.objects[x], i)
                                    for j in range(w.dim(q, y, z)):
                                        g = w.basis_form(q, w.base.objects[z], w.base.objects[y], j)
                                        fg = w.compose(f, g)
                                        for k in range(w.dim(r, z, u)):
                                            h = w.basis_form(r, w.base.objects[u], w.base.objects[z], k)
                                            if w.compose(fg, h) != w.compose(f, w.compose(g, h)):
                                                violations.append(
                                                    Violation(
                                                        "dg-associativity",
                                                        f"{name(p, x, y, i)} . {name(q, y, z, j)} . {name(r, z, u, k)}",
                                                    )
                                                )
    return violations


def trivial_dg(c: Category, truncation: int = 1) -> DGCategory:
    """The extension of `c` with no forms in positive degrees."""
    return DGCategory(c, truncation, {}, {}, {})


# ---------------------------------------------------------------------------
# universal envelope, chain model


class _ChainSpace:
    """Flat enumeration of degree-n chains for one endpoint pair.

    A chain is (interior objects, arrow basis indices): n interior
    objects and n+1 arrows strung from x to y through them.  Flat order
    is lexicographic in the interior path, then row-major in the arrow
    indices, which makes every reduced basis deterministic.
    """

    def __init__(self, c: Category, n: int, x: int, y: int):
        self.n, self.x, self.y = n, x, y
        self.elems: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        nobj = len(c.objects)
        for interior in itertools.product(range(nobj), repeat=n):
            path = (x,) + interior + (y,)
            dims = [c.dim(path[i], path[i + 1]) for i in range(n + 1)]
            if any(d == 0 for d in dims):
                continue
            for arrows in itertools.product(*(range(d) for d in dims)):
                self.elems.append((interior, arrows))
        self.pos = {e: k for k, e in enumerate(self.elems)}

    @property
    def dim(self) -> int:
        return len(self.elems)


class _Subspace:
    """A subspace of a chain space with a reduced-echelon basis.

    Reduction runs in a preferred column order (chains free of identity
    arrows in differential slots first), so pivots land on clean
    monomials whenever possible; rows are stored back in the natural
    chain order.  Each basis row is addressed by its pivot chain.
    """

    def __init__(self, space: _ChainSpace, spanning, order: tuple[int, ...]):
        self.space = space
        permuted = [tuple(r[j] for j in order) for r in spanning]
        reduced = row_space_basis(permuted, space.dim)
        inverse = [0] * space.dim
        for pos, j in enumerate(order):
            inverse[j] = pos
        self.rows = tuple(tuple(r[inverse[j]] for j in range(space.dim)) for r in reduced)
        self.pivots = tuple(
            order[next(j for j, v in enumerate(r) if v != 0)] for r in reduced
        )

    @property
    def dim(self) -> int:
        return len(self.rows)

    def coordinates(self, v: Vector) -> Vector:
        """Coordinates in the reduced basis; the vector must lie in the span."""
        coords = tuple(v[p] for p in self.pivots)
        check = zero_vector(self.space.dim)
        for s, row in zip(coords, self.rows):
            if s != 0:
                check = vec_add(check, vec_scale(s, row))
        if check != v:
            raise LincatError("universal builder: vector left the expected span")
        return coords


def _reduced_dim(c: Category, z: int, w_: int) -> int:
    return c.dim(z, w_) - (1 if z == w_ else 0)


def _expected_dim(c: Category, n: int, x: int, y: int) -> int:
    """Closed-form dimension of the degree-n envelope space.

    Counts paths weighted by the hom dimension for the first step and
    the identity-reduced dimensions afterwards; used as a consistency
    check on the constructive computation.
    """
    nobj = len(c.objects)
    total = 0
    for interior in itertools.product(range(nobj), repeat=n):
        path = (x,) + interior + (y,)
        prod = c.dim(path[0], path[1])
        for i in range(1, n + 1):
            prod *= _reduced_dim(c, path[i], path[i + 1])
        total += prod
    return total


def universal_dg(c: Category, truncation: int) -> DGCategory:
    """Universal differential envelope of `c`, truncated above `truncation`."""
    if truncation < 1:
        raise DimensionError("truncation degree must be at least 1")
    N = truncation
    nobj = len(c.objects)

    spaces: dict[tuple[int, int, int], _ChainSpace] = {}
    for n in range(1, N + 1):
        for x in range(nobj):
            for y in range(nobj):
                spaces[(n, x, y)] = _ChainSpace(c, n, x, y)

    def is_identity_arrow(x: int, k: int) -> bool:
        return c.identity[x] == unit_vector(c.dim(x, x), k)

    def chain_order(space: _ChainSpace) -> tuple[int, ...]:
        # identity arrows in differential slots make a chain a poor pivot
        def badness(elem) -> int:
            interior, arrows = elem
            path = (space.x,) + interior + (space.y,)
            return sum(
                1 for i in range(1, len(arrows))
                if path[i] == path[i + 1] and is_identity_arrow(path[i], arrows[i])
            )
        return tuple(sorted(range(space.dim), key=lambda k: (badness(space.elems[k]), k)))

    sub: dict[tuple[int, int, int], _Subspace] = {}

    # degree 1: kernel of the composition map, reduced deterministically
    for x in range(nobj):
        for y in range(nobj):
            space = spaces[(1, x, y)]
            target_dim = c.dim(x, y)
            cols = []
            for (interior, arrows) in space.elems:
                (z,) = interior
                cols.append(c.compose_basis(x, z, y, arrows[0], arrows[1]))
            if space.dim == 0:
                sub[(1, x, y)] = _Subspace(space, (), ())
            else:
                mu = MatrixQ(target_dim, space.dim, tuple(
                    tuple(cols[j][i] for j in range(space.dim)) for i in range(target_dim)
                )) if target_dim else MatrixQ.zero(0, space.dim)
                sub[(1, x, y)] = _Subspace(space, kernel_basis(mu), chain_order(space))

    def merge_vectors(p: int, q: int, x: int, y: int, z: int, u: Vector, v: Vector) -> Vector:
        """Chain-level product of a degree-p (x,y) vector and a degree-q (y,z) vector."""
        sp_u = spaces[(p, x, y)] if p >= 1 else None
        sp_v = spaces[(q, y, z)] if q >= 1 else None
        out_space = spaces[(p + q, x, z)]
        out = [Fraction(0)] * out_space.dim
        for ui, uc in enumerate(u):
            if uc == 0:
                continue
            if p >= 1:
                u_int, u_arr = sp_u.elems[ui]
                u_last_src = u_int[-1] if u_int else x
            else:
                u_int, u_arr = (), (ui,)
                u_last_src = x
            for vi, vc in enumerate(v):
                if vc == 0:
                    continue
                if q >= 1:
                    v_int, v_arr = sp_v.elems[vi]
                    v_first_tgt = v_int[0] if v_int else z
                else:
                    v_int, v_arr = (), (vi,)
                    v_first_tgt = z
                comp = c.compose_basis(u_last_src, y, v_first_tgt, u_arr[-1], v_arr[0])
                for k, s in enumerate(comp):
                    if s == 0:
                        continue
                    interior = u_int + v_int
                    arrows = u_arr[:-1] + (k,) + v_arr[1:]
                    out[out_space.pos[(interior, arrows)]] += uc * vc * s
        return tuple(out)

    # higher degrees: spans of products with degree 1
    for n in range(2, N + 1):
        for x in range(nobj):
            for y in range(nobj):
                space = spaces[(n, x, y)]
                prods: list[Vector] = []
                for z in range(nobj):
                    left = sub[(n - 1, x, z)]
                    right = sub[(1, z, y)]
                    for urow in left.rows:
                        for vrow in right.rows:
                            prods.append(merge_vectors(n - 1, 1, x, z, y, urow, vrow))
                sub[(n, x, y)] = _Subspace(space, prods, chain_order(space))

    for n in range(1, N + 1):
        for x in range(nobj):
            for y in range(nobj):
                assert sub[(n, x, y)].dim == _expected_dim(c, n, x, y), (
                    "universal builder: dimension mismatch against the path-count formula"
                )

    # labels: each basis row is named by its pivot chain, rendered as a
    # product a0.da1...dan with an identity head elided
    def render_chain(x: int, y: int, elem: tuple[tuple[int, ...], tuple[int, ...]]) -> str:
        interior, arrows = elem
        path = (x,) + interior + (y,)
        head_label = c.basis_labels(path[0], path[1])[arrows[0]]
        head_is_unit = path[0] == path[1] and is_identity_arrow(path[0], arrows[0])
        pieces = [] if head_is_unit else [head_label]
        for i in range(1, len(arrows)):
            pieces.append("d" + c.basis_labels(path[i], path[i + 1])[arrows[i]])
        return ".".join(pieces) if pieces else head_label

    gr_basis: dict[int, dict[tuple[int, int], tuple[str, ...]]] = {}
    for n in range(1, N + 1):
        level = {}
        for x in range(nobj):
            for y in range(nobj):
                s = sub[(n, x, y)]
                if s.dim:
                    names = tuple(render_chain(x, y, spaces[(n, x, y)].elems[p]) for p in s.pivots)
                    if len(set(names)) != len(names):
                        raise LincatError(
                            f"degree-{n} basis labels collide at ({c.objects[x].label},"
                            f"{c.objects[y].label}); rename arrows that start with 'd'"
                        )
                    level[(x, y)] = names
        gr_basis[n] = level

    # composition tensors
    gr_comp: dict[tuple[int, int], dict[tuple[int, int, int], list]] = {}
    for p in range(0, N + 1):
        for q in range(0, N + 1 - p):
            if p == 0 and q == 0:
                continue
            table: dict[tuple[int, int, int], list] = {}
            for x in range(nobj):
                for y in range(nobj):
                    dp = c.dim(x, y) if p == 0 else sub[(p, x, y)].dim
                    if dp == 0:
                        continue
                    for z in range(nobj):
                        dq = c.dim(y, z) if q == 0 else sub[(q, y, z)].dim
                        if dq == 0:
                            continue
                        target = sub[(p + q, x, z)]
                        rows = []
                        for i in range(dp):
                            uvec = unit_vector(c.dim(x, y), i) if p == 0 else sub[(p, x, y)].rows[i]
                            row = []
                            for j in range(dq):
                                vvec = unit_vector(c.dim(y, z), j) if q == 0 else sub[(q, y, z)].rows[j]
                                w_chain = merge_vectors(p, q, x, y, z, uvec, vvec)
                                row.append(target.coordinates(w_chain))
                            rows.append(row)
                        table[(x, y, z)] = rows
            gr_comp[(p, q)] = table

    # differential: alternating identity insertion on chain terms
    def d_of_chain_vector(n: int, x: int, y: int, v: Vector) -> Vector:
        out_space = spaces[(n + 1, x, y)]
        out = [Fraction(0)] * out_space.dim
        src_elems = spaces[(n, x, y)].elems if n >= 1 else [((), (k,)) for k in range(c.dim(x, y))]
        for idx, s in enumerate(v):
            if s == 0:
                continue
            interior, arrows = src_elems[idx]
            path = (x,) + interior + (y,)
            for ins in range(0, n + 2):
                sign = Fraction(-1 if ins % 2 else 1)
                obj = path[ins]
                idc = c.identity[obj]
                new_path = path[:ins + 1] + (obj,) + path[ins + 1:]
                new_interior = new_path[1:n + 2]
                for k, idcoef in enumerate(idc):
                    if idcoef == 0:
                        continue
                    new_arrows = arrows[:ins] + (k,) + arrows[ins:]
                    out[out_space.pos[(new_interior, new_arrows)]] += s * sign * idcoef
        return tuple(out)

    diff: dict[int, dict[tuple[int, int], MatrixQ]] = {}
    for n in range(0, N):
        level = {}
        for x in range(nobj):
            for y in range(nobj):
                dn = c.dim(x, y) if n == 0 else sub[(n, x, y)].dim
                if dn == 0:
                    continue
                target = sub[(n + 1, x, y)]
                cols = []
                for i in range(dn):
                    vv = unit_vector(c.dim(x, y), i) if n == 0 else sub[(n, x, y)].rows[i]
                    cols.append(target.coordinates(d_of_chain_vector(n, x, y, vv)))
                level[(x, y)] = MatrixQ(target.dim, dn, tuple(
                    tuple(cols[j][i] for j in range(dn)) for i in range(target.dim)
                ))
        diff[n] = level

    return DGCategory(c, N, gr_basis, gr_comp, diff)


# ---------------------------------------------------------------------------
# matrices of forms


@dataclass(frozen=True)
class FormMatrix:
    """Rectangular matrix of homogeneous forms between two index families.

    Entry (i, j) is a form from the j-th column object to the i-th row
    object, so matrices act on columns by composition, exactly like
    matrices over a ring act on column vectors.
    """

    degree: int
    row_family: tuple[ObjectId, ...]
    col_family: tuple[ObjectId, ...]
    entries: tuple[tuple[Form, ...], ...]

    def __post_init__(self):
        if len(self.entries) != len(self.row_family):
            raise DimensionError("form matrix: wrong number of rows")
        for i, row in enumerate(self.entries):
            if len(row) != len(self.col_family):
                raise DimensionError("form matrix: ragged row")
            for j, f in enumerate(row):
                if f.degree != self.degree:
                    raise DimensionError(f"form matrix entry ({i},{j}): degree {f.degree} != {self.degree}")
                if f.cod != self.row_family[i] or f.dom != self.col_family[j]:
                    raise DimensionError(f"form matrix entry ({i},{j}): endpoints do not match the families")

    @classmethod
    def zero(cls, w: DGCategory, row_family, col_family, degree: int) -> "FormMatrix":
        rf, cf = tuple(row_family), tuple(col_family)
        return cls(degree, rf, cf, tuple(
            tuple(w.zero_form(degree, d_, c_) for d_ in cf) for c_ in rf
        ))

    @classmethod
    def identity(cls, w: DGCategory, family) -> "FormMatrix":
        fam = tuple(family)
        rows = []
        for i, oi in enumerate(fam):
            row = []
            for j, oj in enumerate(fam):
                row.append(w.identity_form(oi) if i == j else w.zero_form(0, oj, oi))
            rows.append(tuple(row))
        return cls(0, fam, fam, tuple(rows))

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_family), len(self.col_family))

    def entry(self, i: int, j: int) -> Form:
        return self.entries[i][j]

    def __add__(self, other: "FormMatrix") -> "FormMatrix":
        if (self.degree, self.row_family, self.col_family) != (other.degree, other.row_family, other.col_family):
            raise DimensionError("form matrix addition: shape or degree mismatch")
        return FormMatrix(self.degree, self.row_family, self.col_family, tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)
        ))

    def __neg__(self) -> "FormMatrix":
        return self.scale(-1)

    def __sub__(self, other: "FormMatrix") -> "FormMatrix":
        return self + (-other)

    def scale(self, s) -> "FormMatrix":
        return FormMatrix(self.degree, self.row_family, self.col_family, tuple(
            tuple(f.scale(s) for f in row) for row in self.entries
        ))

    def mul(self, w: DGCategory, other: "FormMatrix") -> "FormMatrix":
        if self.col_family != other.row_family:
            raise DimensionError("form matrix product: inner families differ")
        deg = self.degree + other.degree
        rows = []
        for i, oi in enumerate(self.row_family):
            row = []
            for j, oj in enumerate(other.col_family):
                acc = w.zero_form(deg, oj, oi)
                for k in range(len(self.col_family)):
                    acc = acc + w.compose(self.entries[i][k], other.entries[k][j])
                row.append(acc)
            rows.append(tuple(row))
        return FormMatrix(deg, self.row_family, other.col_family, tuple(rows))

    def power(self, w: DGCategory, k: int) -> "FormMatrix":
        if self.row_family != self.col_family:
            raise DimensionError("only square form matrices have powers")
        if k < 0:
            raise DimensionError("negative matrix power")
        if k == 0:
            return FormMatrix.identity(w, self.row_family)
        acc = self
        for _ in range(k - 1):
            acc = acc.mul(w, self)
        return acc

    def d(self, w: DGCategory) -> "FormMatrix":
        return FormMatrix(self.degree + 1, self.row_family, self.col_family, tuple(
            tuple(w.d(f) for f in row) for row in self.entries
        ))

    def diagonal_trace(self, w: DGCategory) -> tuple[Form, ...]:
        """Sum of diagonal entries grouped per object, in object order."""
        if self.row_family != self.col_family:
            raise DimensionError("trace needs a square form matrix")
        comps = [w.zero_form(self.degree, o, o) for o in w.base.objects]
        for i, oi in enumerate(self.row_family):
            comps[oi.index] = comps[oi.index] + self.entries[i][i]
        return tuple(comps)

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.entries for f in row)


def block_diag(w: DGCategory, a: FormMatrix, b: FormMatrix) -> FormMatrix:
    if a.degree != b.degree:
        raise DimensionError("block diagonal: degree mismatch")
    rf = a.row_family + b.row_family
    cf = a.col_family + b.col_family
    rows = []
    for i, oi in enumerate(rf):
        row = []
        for j, oj in enumerate(cf):
            if i < len(a.row_family) and j < len(a.col_family):
                row.append(a.entries[i][j])
            elif i >= len(a.row_family) and j >= len(a.col_family):
                row.append(b.entries[i - len(a.row_family)][j - len(a.col_family)])
            else:
                row.append(w.zero_form(a.degree, oj, oi))
        rows.append(tuple(row))
    return FormMatrix(a.degree, rf, cf, tuple(rows))


# ---------------------------------------------------------------------------
# rendering


def render_form(w: DGCategory, f: Form) -> str:
    labels = w.space_labels(f.degree, f.cod.index, f.dom.index)
    terms = []
    for s, label in zip(f.coords, labels):
        if s == 0:
            continue
        if s == 1:
            terms.append(("+", label))
        elif s == -1:
            terms.append(("-", label))
        else:
            terms.append(("+", f"({s}){label}") if s > 0 else ("-", f"({-s}){label}"))
    if not terms:
        return "0"
    sign0, head = terms[0]
    text = ("-" if sign0 == "-" else "") + head
    for sign, piece in terms[1:]:
        text += f" {sign} {piece}"
    return text
