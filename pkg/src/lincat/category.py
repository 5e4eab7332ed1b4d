"""Finite linear categories over the rationals.

A category here is a finite set of objects together with a chosen basis
for every hom space and structure constants for composition.  The hom
space indexed by the pair ``(x, y)`` consists of the morphisms *from* y
*to* x, so composition pairs ``(x, y) x (y, z) -> (x, z)`` and reads
left of right, like matrix multiplication.

Everything is exact: coordinates are tuples of `Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import CompositionError, DimensionError, LincatError
from .exact_linalg import (
    QuotientSpace,
    Vector,
    build_quotient,
    is_zero_vector,
    parse_scalar,
    vec,
    vec_add,
    vec_scale,
    zero_vector,
)


@dataclass(frozen=True)
class ObjectId:
    index: int
    label: str


@dataclass(frozen=True)
class Morphism:
    """A morphism from `dom` to `cod` in hom-space coordinates."""

    dom: ObjectId
    cod: ObjectId
    coords: Vector

    def __add__(self, other: "Morphism") -> "Morphism":
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise CompositionError("cannot add morphisms with different endpoints")
        return Morphism(self.dom, self.cod, vec_add(self.coords, other.coords))

    def __neg__(self) -> "Morphism":
        return self.scale(-1)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, s) -> "Morphism":
        return Morphism(self.dom, self.cod, vec_scale(Fraction(s), self.coords))

    def is_zero(self) -> bool:
        return is_zero_vector(self.coords)


@dataclass(frozen=True)
class DiagonalElement:
    """One endomorphism-space coordinate vector per object (possibly zero)."""

    components: tuple[Vector, ...]


@dataclass(frozen=True)
class Violation:
    """A single failed axiom instance, as data rather than an exception."""

    kind: str
    where: str


class Category:
    """Finite linear category given by bases and structure constants.

    Parameters
    ----------
    labels:
        Object labels; objects are indexed 0..len(labels)-1.
    hom_basis:
        Map (x, y) -> basis labels of the morphisms from y to x.  Absent
        pairs are zero spaces.
    comp:
        Map (x, y, z) -> composition tensor ``t[i][j]`` giving the
        coordinates of ``b_i . b_j`` in the (x, z) basis, for b_i in the
        (x, y) basis and b_j in the (y, z) basis.  Absent tensors with
        nonzero source dimensions mean all such composites vanish.
    identity:
        Map x -> coordinates of the identity in the (x, x) basis.
    """

    def __init__(
        self,
        labels: Sequence[str],
        hom_basis: Mapping[tuple[int, int], Sequence[str]],
        comp: Mapping[tuple[int, int, int], Sequence[Sequence[Sequence]]],
        identity: Mapping[int, Sequence],
    ):
        self.objects: tuple[ObjectId, ...] = tuple(
            ObjectId(i, str(lab)) for i, lab in enumerate(labels)
        )
        n = len(self.objects)
        self.hom_basis: dict[tuple[int, int], tuple[str, ...]] = {}
        for (x, y), basis in hom_basis.items():
            if not (0 <= x < n and 0 <= y < n):
                raise DimensionError(f"hom endpoint out of range: {(x, y)}")
            if basis:
                self.hom_basis[(x, y)] = tuple(str(b) for b in basis)

        self.comp: dict[tuple[int, int, int], tuple[tuple[Vector, ...], ...]] = {}
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    dxy, dyz, dxz = self.dim(x, y), self.dim(y, z), self.dim(x, z)
                    if dxy == 0 or dyz == 0:
                        continue
                    tensor = comp.get((x, y, z))
                    if tensor is None:
                        rows = tuple(tuple(zero_vector(dxz) for _ in range(dyz)) for _ in range(dxy))
                    else:
                        if len(tensor) != dxy:
                            raise DimensionError(f"composition tensor {(x, y, z)}: bad left arity")
                        rows = []
                        for i in range(dxy):
                            if len(tensor[i]) != dyz:
                                raise DimensionError(f"composition tensor {(x, y, z)}: bad right arity")
                            row = []
                            for j in range(dyz):
                                v = vec(tensor[i][j])
                                if len(v) != dxz:
                                    raise DimensionError(
                                        f"composition tensor {(x, y, z)}[{i}][{j}]: wrong target length"
                                    )
                                row.append(v)
                            rows.append(tuple(row))
                        rows = tuple(rows)
                    self.comp[(x, y, z)] = rows

        self.identity: dict[int, Vector] = {}
        for x in range(n):
            coords = identity.get(x)
            if coords is None:
                raise DimensionError(f"object {self.objects[x].label}: identity coordinates missing")
            v = vec(coords)
            if len(v) != self.dim(x, x):
                raise DimensionError(f"object {self.objects[x].label}: identity has wrong length")
            self.identity[x] = v

        self._cab: Optional[QuotientSpace] = None

    # -- basic accessors -------------------------------------------------

    def dim(self, x: int, y: int) -> int:
        return len(self.hom_basis.get((x, y), ()))

    def object_by_label(self, label: str) -> ObjectId:
        for o in self.objects:
            if o.label == label:
                return o
        raise LincatError(f"no object labeled {label!r}")

    def basis_labels(self, x: int, y: int) -> tuple[str, ...]:
        return self.hom_basis.get((x, y), ())

    def morphism(self, dom: ObjectId, cod: ObjectId, coords: Iterable) -> Morphism:
        v = vec(coords)
        if len(v) != self.dim(cod.index, dom.index):
            raise DimensionError(
                f"morphism {dom.label}->{cod.label}: expected {self.dim(cod.index, dom.index)} coordinates"
            )
        return Morphism(dom, cod, v)

    def zero_morphism(self, dom: ObjectId, cod: ObjectId) -> Morphism:
        return Morphism(dom, cod, zero_vector(self.dim(cod.index, dom.index)))

    def basis_morphism(self, dom: ObjectId, cod: ObjectId, k: int) -> Morphism:
        d = self.dim(cod.index, dom.index)
        if not (0 <= k < d):
            raise DimensionError(f"basis index {k} out of range for dim {d}")
        return Morphism(dom, cod, tuple(Fraction(1 if i == k else 0) for i in range(d)))

    def identity_morphism(self, x: ObjectId) -> Morphism:
        return Morphism(x, x, self.identity[x.index])

    def compose_basis(self, x: int, y: int, z: int, i: int, j: int) -> Vector:
        tensor = self.comp.get((x, y, z))
        if tensor is None:
            return zero_vector(self.dim(x, z))
        return tensor[i][j]

    # -- diagonal space and its commutator quotient ----------------------

    def diagonal_dims(self) -> tuple[int, ...]:
        return tuple(self.dim(x, x) for x in range(len(self.objects)))

    def diagonal_dim(self) -> int:
        return sum(self.diagonal_dims())

    def diagonal_offsets(self) -> tuple[int, ...]:
        offs, acc = [], 0
        for d in self.diagonal_dims():
            offs.append(acc)
            acc += d
        return tuple(offs)

    def diagonal_to_vector(self, d: DiagonalElement) -> Vector:
        dims = self.diagonal_dims()
        if len(d.components) != len(dims):
            raise DimensionError("diagonal element has wrong number of components")
        out: list[Fraction] = []
        for comp, dim in zip(d.components, dims):
            if len(comp) != dim:
                raise DimensionError("diagonal component has wrong length")
            out.extend(comp)
        return tuple(out)

    def diagonal_from_vector(self, v: Vector) -> DiagonalElement:
        dims = self.diagonal_dims()
        if len(v) != sum(dims):
            raise DimensionError("vector length does not match the diagonal space")
        comps, pos = [], 0
        for dim in dims:
            comps.append(tuple(v[pos:pos + dim]))
            pos += dim
        return DiagonalElement(tuple(comps))

    def diagonal_of(self, f: Morphism) -> DiagonalElement:
        if f.dom != f.cod:
            raise CompositionError("only endomorphisms embed into the diagonal space")
        comps = [zero_vector(d) for d in self.diagonal_dims()]
        comps[f.dom.index] = f.coords
        return DiagonalElement(tuple(comps))

    def commutator_spanning_set(self) -> list[Vector]:
        """Spanning vectors for the commutator subspace of the diagonal.

        One vector b.b' - b'.b for every pair of opposed basis morphisms
        b: y -> x and b': x -> y, embedded into the concatenated
        endomorphism coordinates.
        """
        n = len(self.objects)
        offs = self.diagonal_offsets()
        total = self.diagonal_dim()
        spanning: list[Vector] = []
        for x in range(n):
            for y in range(n):
                dxy, dyx = self.dim(x, y), self.dim(y, x)
                for i in range(dxy):
                    for j in range(dyx):
                        v = [Fraction(0)] * total
                        fwd = self.compose_basis(x, y, x, i, j)
                        for k, s in enumerate(fwd):
                            v[offs[x] + k] += s
                        bwd = self.compose_basis(y, x, y, j, i)
                        for k, s in enumerate(bwd):
                            v[offs[y] + k] -= s
                        spanning.append(tuple(v))
        return spanning

    def cab_quotient(self) -> QuotientSpace:
        if self._cab is None:
            self._cab = build_quotient(self.diagonal_dim(), self.commutator_spanning_set())
        return self._cab


def compose(c: Category, f: Morphism, g: Morphism) -> Morphism:
    """The composite f . g of f: y -> x and g: z -> y."""
    if f.dom != g.cod:
        raise CompositionError(
            f"cannot compose: left factor starts at {f.dom.label}, right factor ends at {g.cod.label}"
        )
    x, y, z = f.cod.index, f.dom.index, g.dom.index
    out = list(zero_vector(c.dim(x, z)))
    for i, a in enumerate(f.coords):
        if a == 0:
            continue
        for j, b in enumerate(g.coords):
            if b == 0:
                continue
            target = c.compose_basis(x, y, z, i, j)
            for k, s in enumerate(target):
                if s != 0:
                    out[k] += a * b * s
    return Morphism(g.dom, f.cod, tuple(out))


def validate_category(c: Category) -> list[Violation]:
    """All unit and associativity failures on basis elements, as data."""
    violations: list[Violation] = []
    n = len(c.objects)

    for x in range(n):
        ox = c.objects[x]
        for y in range(n):
            oy = c.objects[y]
            for k in range(c.dim(x, y)):
                b = c.basis_morphism(oy, ox, k)
                label = c.basis_labels(x, y)[k]
                if compose(c, c.identity_morphism(ox), b) != b:
                    violations.append(Violation("identity-left", f"1_{ox.label} . {label}"))
                if compose(c, b, c.identity_morphism(oy)) != b:
                    violations.append(Violation("identity-right", f"{label} . 1_{oy.label}"))

    for x in range(n):
        for y in range(n):
            for z in range(n):
                for w in range(n):
                    dxy, dyz, dzw = c.dim(x, y), c.dim(y, z), c.dim(z, w)
                    if dxy * dyz * dzw == 0:
                        continue
                    for i in range(dxy):
                        f = c.basis_morphism(c.objects[y], c.objects[x], i)
                        for j in range(dyz):
                            g = c.basis_morphism(c.objects[z], c.objects[y], j)
                            fg = compose(c, f, g)
                            for k in range(dzw):
                                h = c.basis_morphism(c.objects[w], c.objects[z], k)
                                left = compose(c, fg, h)
                                right = compose(c, f, compose(c, g, h))
                                if left != right:
                                    names = (
                                        c.basis_labels(x, y)[i],
                                        c.basis_labels(y, z)[j],
                                        c.basis_labels(z, w)[k],
                                    )
                                    violations.append(
                                        Violation("associativity", " . ".join(names))
                                    )
    return violations


def commutator_class(c: Category, d: DiagonalElement) -> Vector:
    """Coset coordinates of a diagonal element modulo commutators."""
    return c.cab_quotient().coset_coordinates(c.diagonal_to_vector(d))


def build_category(
    object_labels: Sequence[str],
    arrows: Mapping[tuple[str, str], Sequence[str]],
    products: Mapping[tuple[str, str], Mapping[str, object]],
    identities: Mapping[str, Mapping[str, object]],
) -> Category:
    """Assemble a category from label-level sparse data.

    ``arrows`` maps (cod_label, dom_label) to basis arrow names, which
    must be globally unique.  ``products`` maps a pair of arrow names
    (left, right) to the sparse expansion of their composite; omitted
    pairs compose to zero.  ``identities`` maps each object label to the
    sparse expansion of its identity.
    """
    labels = [str(s) for s in object_labels]
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != len(labels):
        raise DimensionError("object labels must be distinct")

    hom_basis: dict[tuple[int, int], tuple[str, ...]] = {}
    arrow_home: dict[str, tuple[int, int, int]] = {}
    for (cod, dom), names in arrows.items():
        if cod not in index or dom not in index:
            raise DimensionError(f"hom endpoints ({cod}, {dom}) name unknown objects")
        key = (index[cod], index[dom])
        hom_basis[key] = tuple(str(a) for a in names)
        for k, a in enumerate(hom_basis[key]):
            if a in arrow_home:
                raise DimensionError(f"arrow label {a!r} is not globally unique")
            arrow_home[a] = (key[0], key[1], k)

    def expand(pair_dim: tuple[int, int], sparse: Mapping[str, object]) -> Vector:
        out = [Fraction(0)] * len(hom_basis.get(pair_dim, ()))
        names = hom_basis.get(pair_dim, ())
        pos = {a: k for k, a in enumerate(names)}
        for a, s in sparse.items():
            if a not in pos:
                raise DimensionError(f"arrow {a!r} does not live in the expected hom space")
            try:
                out[pos[a]] = parse_scalar(str(s))
            except ValueError as exc:
                raise DimensionError(f"coefficient of {a!r}: {exc}") from exc
        return tuple(out)

    comp: dict[tuple[int, int, int], list] = {}
    for (left, right), sparse in products.items():
        if left not in arrow_home or right not in arrow_home:
            raise DimensionError(f"product ({left}, {right}) names unknown arrows")
        lx, ly, li = arrow_home[left]
        ry, rz, rj = arrow_home[right]
        if ly != ry:
            raise DimensionError(f"product ({left}, {right}) is not composable")
        key = (lx, ly, rz)
        if key not in comp:
            dxy = len(hom_basis.get((lx, ly), ()))
            dyz = len(hom_basis.get((ly, rz), ()))
            dxz = len(hom_basis.get((lx, rz), ()))
            comp[key] = [[zero_vector(dxz) for _ in range(dyz)] for _ in range(dxy)]
        comp[key][li][rj] = expand((lx, rz), sparse)

    identity: dict[int, Vector] = {}
    for lab, sparse in identities.items():
        if lab not in index:
            raise DimensionError(f"identity given for unknown object {lab!r}")
        x = index[lab]
        identity[x] = expand((x, x), sparse)

    return Category(labels, hom_basis, comp, identity)
