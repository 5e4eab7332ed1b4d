"""Workspace documents: a JSON surface for every object the engine handles.

A workspace bundles one base category, one graded extension (universal,
trivial, or explicit tables), and named modules, connections, and
endomorphisms over it.  Parsing is strict: unknown labels, malformed
scalars, shape mismatches, and non-idempotent module matrices all raise
`WorkspaceError` with a message naming the offending entry.

Serialization is canonical.  The parser normalizes every coefficient
and rebuilds the document from the parsed objects, so serializing,
re-parsing, and serializing again is byte-stable; reports built on top
of workspaces inherit that determinism.

Form literals come in two shapes, usable anywhere a form is expected:

* word terms     {"coeff": "1", "word": ["a0", "a1", ..., "ak"]}
  meaning coeff . a0 . d(a1) ... d(ak), built from arrow labels with
  the graded category's own composition and differential;
* address terms  {"coeff": "1", "degree": n, "dom": "x", "cod": "y",
  "basis": "<basis label>"} referring to one basis element of the named
  graded hom space.

An entry is a list of such terms; the empty list is the zero form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Sequence

from .category import Category, ObjectId, build_category
from .connection import Connection, canonical_connection
from .dg import DGCategory, Form, FormMatrix, trivial_dg, universal_dg
from .errors import LincatError, WorkspaceError
from .exact_linalg import MatrixQ, format_scalar, parse_scalar, zero_vector
from .module_algebra import ProjectiveModule

FORMAT_NAME = "lincat-workspace"
FORMAT_VERSION = 1


@dataclass
class Workspace:
    """Parsed workspace with its canonical document."""

    name: str
    category: Category
    dg: DGCategory
    model: str
    modules: dict[str, ProjectiveModule]
    connections: dict[str, Connection]
    connection_kinds: dict[str, str]
    endomorphisms: dict[str, tuple[str, FormMatrix]]
    document: dict = field(repr=False)


# ---------------------------------------------------------------------------
# parsing helpers


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise WorkspaceError(message)


def _get(doc, key: str, where: str):
    if not isinstance(doc, Mapping):
        raise WorkspaceError(f"{where}: expected an object with key {key!r}")
    if key not in doc:
        raise WorkspaceError(f"{where}: missing required key {key!r}")
    return doc[key]


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise WorkspaceError(f"{where}: expected an integer, got {value!r}")
    return value


def _scalar(text, where: str):
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise WorkspaceError(f"{where}: {exc}") from exc


class _Parser:
    def __init__(self, doc: Mapping):
        _require(isinstance(doc, Mapping), "workspace document must be a JSON object")
        _require(doc.get("format") == FORMAT_NAME, f"unknown document format, expected {FORMAT_NAME!r}")
        _require(doc.get("version") == FORMAT_VERSION, f"unsupported document version, expected {FORMAT_VERSION}")
        self.name = str(_get(doc, "name", "workspace"))
        self.doc = doc
        self.arrow_home: dict[str, tuple[int, int, int]] = {}

    # -- category ---------------------------------------------------------

    def parse_category(self) -> Category:
        cdoc = _get(self.doc, "category", "workspace")
        labels = [str(s) for s in _get(cdoc, "objects", "category")]
        _require(len(labels) > 0, "category: needs at least one object")

        arrows: dict[tuple[str, str], list[str]] = {}
        for a in _get(cdoc, "arrows", "category"):
            label = str(_get(a, "label", "arrow"))
            dom = str(_get(a, "dom", f"arrow {label!r}"))
            cod = str(_get(a, "cod", f"arrow {label!r}"))
            _require(dom in labels, f"arrow {label!r}: unknown object {dom!r}")
            _require(cod in labels, f"arrow {label!r}: unknown object {cod!r}")
            arrows.setdefault((cod, dom), []).append(label)

        products: dict[tuple[str, str], Mapping[str, object]] = {}
        for p in cdoc.get("products", []):
            left = str(_get(p, "left", "product"))
            right = str(_get(p, "right", "product"))
            result = _get(p, "result", f"product ({left}, {right})")
            _require(isinstance(result, Mapping), f"product ({left}, {right}): result must be an object")
            _require((left, right) not in products, f"product ({left}, {right}) given twice")
            products[(left, right)] = result

        identities = _get(cdoc, "identities", "category")
        _require(isinstance(identities, Mapping), "category: identities must be an object")

        try:
            cat = build_category(labels, arrows, products, identities)
        except LincatError as exc:
            raise WorkspaceError(f"category: {exc}") from exc

        for (x, y), names in cat.hom_basis.items():
            for k, a in enumerate(names):
                self.arrow_home[a] = (x, y, k)
        return cat

    # -- graded extension ---------------------------------------------------

    def parse_forms(self, cat: Category) -> tuple[DGCategory, str]:
        fdoc = _get(self.doc, "forms", "workspace")
        model = str(_get(fdoc, "model", "forms"))
        if model == "universal":
            truncation = _int(_get(fdoc, "truncation", "forms"), "forms truncation")
            try:
                return universal_dg(cat, truncation), model
            except LincatError as exc:
                raise WorkspaceError(f"forms: {exc}") from exc
        if model == "trivial":
            truncation = _int(fdoc.get("truncation", 1), "forms truncation")
            try:
                return trivial_dg(cat, truncation), model
            except LincatError as exc:
                raise WorkspaceError(f"forms: {exc}") from exc
        if model == "tables":
            return self.parse_tables(cat, fdoc), model
        raise WorkspaceError(f"forms: unknown model {model!r}")

    def parse_tables(self, cat: Category, fdoc: Mapping) -> DGCategory:
        truncation = _int(_get(fdoc, "truncation", "forms"), "forms truncation")
        _require(truncation >= 1, "forms: truncation must be at least 1")

        gr_basis: dict[int, dict[tuple[int, int], tuple[str, ...]]] = {}
        for s in fdoc.get("spaces", []):
            degree = _int(_get(s, "degree", "form space"), "form space degree")
            _require(1 <= degree <= truncation, f"form space: degree {degree} outside 1..{truncation}")
            cod = self._object(cat, str(_get(s, "cod", "form space")))
            dom = self._object(cat, str(_get(s, "dom", "form space")))
            basis = tuple(str(b) for b in _get(s, "basis", "form space"))
            key = (cod.index, dom.index)
            level = gr_basis.setdefault(degree, {})
            _require(key not in level, f"form space degree {degree} at ({cod.label},{dom.label}) given twice")
            _require(len(set(basis)) == len(basis), f"form space degree {degree}: duplicate basis labels")
            level[key] = basis

        def space_dim(n: int, x: int, y: int) -> int:
            if n == 0:
                return cat.dim(x, y)
            if n > truncation:
                return 0
            return len(gr_basis.get(n, {}).get((x, y), ()))

        def locate(ref: Mapping, where: str) -> tuple[int, int, int, int]:
            degree = _int(_get(ref, "degree", where), where)
            cod = self._object(cat, str(_get(ref, "cod", where)))
            dom = self._object(cat, str(_get(ref, "dom", where)))
            label = str(_get(ref, "basis", where))
            if degree == 0:
                names = cat.basis_labels(cod.index, dom.index)
            else:
                names = gr_basis.get(degree, {}).get((cod.index, dom.index), ())
            _require(label in names, f"{where}: no basis element {label!r} in that space")
            return degree, cod.index, dom.index, names.index(label)

        def expand(terms, degree: int, x: int, y: int, where: str):
            out = list(zero_vector(space_dim(degree, x, y)))
            _require(isinstance(terms, Sequence) and not isinstance(terms, str), f"{where}: expected a list of terms")
            for t in terms:
                _require(isinstance(t, Mapping), f"{where}: each term must be an object")
                coeff = _scalar(t.get("coeff", "1"), where)
                d2, x2, y2, k = locate(t, where)
                _require((d2, x2, y2) == (degree, x, y), f"{where}: term lands in the wrong space")
                out[k] += coeff
            return tuple(out)

        gr_comp: dict[tuple[int, int], dict[tuple[int, int, int], list]] = {}
        for p in fdoc.get("products", []):
            lp, lx, ly, li = locate(_get(p, "left", "form product"), "form product left factor")
            rp, ry, rz, rj = locate(_get(p, "right", "form product"), "form product right factor")
            _require(ly == ry, "form product: factors are not composable")
            _require(lp + rp <= truncation, "form product: total degree exceeds the truncation")
            _require(lp + rp > 0, "form product: degree-0 products belong in the category block")
            table = gr_comp.setdefault((lp, rp), {})
            key = (lx, ly, rz)
            if key not in table:
                table[key] = [
                    [zero_vector(space_dim(lp + rp, lx, rz)) for _ in range(space_dim(rp, ry, rz))]
                    for _ in range(space_dim(lp, lx, ly))
                ]
            table[key][li][rj] = expand(_get(p, "result", "form product"), lp + rp, lx, rz, "form product result")

        diff: dict[int, dict[tuple[int, int], MatrixQ]] = {}
        diff_cols: dict[tuple[int, int, int], dict[int, tuple]] = {}
        for dspec in fdoc.get("differentials", []):
            n, x, y, k = locate(_get(dspec, "of", "differential"), "differential source")
            _require(n < truncation, "differential: source degree must lie below the truncation")
            col = expand(_get(dspec, "result", "differential"), n + 1, x, y, "differential result")
            diff_cols.setdefault((n, x, y), {})[k] = col
        for (n, x, y), cols in diff_cols.items():
            dn, dn1 = space_dim(n, x, y), space_dim(n + 1, x, y)
            entries = tuple(
                tuple(cols.get(j, zero_vector(dn1))[i] for j in range(dn))
                for i in range(dn1)
            )
            diff.setdefault(n, {})[(x, y)] = MatrixQ(dn1, dn, entries)

        try:
            return DGCategory(cat, truncation, gr_basis, gr_comp, diff)
        except LincatError as exc:
            raise WorkspaceError(f"forms: {exc}") from exc

    # -- forms from literals -------------------------------------------------

    @staticmethod
    def _object(cat: Category, label: str) -> ObjectId:
        try:
            return cat.object_by_label(label)
        except LincatError as exc:
            raise WorkspaceError(f"unknown object {label!r}") from exc

    def word_form(self, dg: DGCategory, word: Sequence, where: str) -> Form:
        _require(isinstance(word, Sequence) and not isinstance(word, str), f"{where}: word must be a list")
        _require(len(word) >= 1, f"{where}: empty word")
        names = [str(a) for a in word]
        for a in names:
            _require(a in self.arrow_home, f"{where}: unknown arrow {a!r} in word")

        def arrow_form(a: str) -> Form:
            x, y, k = self.arrow_home[a]
            return dg.basis_form(0, dg.base.objects[y], dg.base.objects[x], k)

        form = arrow_form(names[0])
        for a in names[1:]:
            try:
                form = dg.compose(form, dg.d(arrow_form(a)))
            except LincatError as exc:
                raise WorkspaceError(f"{where}: word does not compose ({exc})") from exc
        return form

    def address_form(self, dg: DGCategory, term: Mapping, where: str) -> Form:
        degree = _int(_get(term, "degree", where), where)
        cod = self._object(dg.base, str(_get(term, "cod", where)))
        dom = self._object(dg.base, str(_get(term, "dom", where)))
        label = str(_get(term, "basis", where))
        names = dg.space_labels(degree, cod.index, dom.index)
        _require(label in names, f"{where}: no basis element {label!r} in degree {degree} at ({cod.label},{dom.label})")
        return dg.basis_form(degree, dom, cod, names.index(label))

    def parse_form(self, dg: DGCategory, terms, degree: int, dom: ObjectId, cod: ObjectId, where: str) -> Form:
        _require(isinstance(terms, Sequence) and not isinstance(terms, str), f"{where}: expected a list of terms")
        total = dg.zero_form(degree, dom, cod)
        for t in terms:
            _require(isinstance(t, Mapping), f"{where}: each term must be an object")
            coeff = _scalar(t.get("coeff", "1"), where)
            if "word" in t:
                f = self.word_form(dg, t["word"], where)
            else:
                f = self.address_form(dg, t, where)
            _require(
                (f.degree, f.dom, f.cod) == (degree, dom, cod),
                f"{where}: term has degree {f.degree} from {f.dom.label} to {f.cod.label}, "
                f"expected degree {degree} from {dom.label} to {cod.label}",
            )
            total = total + f.scale(coeff)
        return total

    def parse_matrix(
        self,
        dg: DGCategory,
        degree: int,
        row_family: tuple[ObjectId, ...],
        col_family: tuple[ObjectId, ...],
        entries,
        where: str,
    ) -> FormMatrix:
        _require(isinstance(entries, Sequence), f"{where}: matrix must be a list of rows")
        _require(len(entries) == len(row_family), f"{where}: expected {len(row_family)} rows")
        rows = []
        for i, row in enumerate(entries):
            _require(isinstance(row, Sequence) and len(row) == len(col_family),
                     f"{where}: row {i} must have {len(col_family)} entries")
            rows.append(tuple(
                self.parse_form(dg, row[j], degree, col_family[j], row_family[i], f"{where}[{i}][{j}]")
                for j in range(len(col_family))
            ))
        return FormMatrix(degree, row_family, col_family, tuple(rows))

    # -- named objects ---------------------------------------------------------

    def parse_modules(self, dg: DGCategory) -> dict[str, ProjectiveModule]:
        out: dict[str, ProjectiveModule] = {}
        for m in self.doc.get("modules", []):
            name = str(_get(m, "name", "module"))
            _require(name not in out, f"module {name!r} given twice")
            family = tuple(self._object(dg.base, str(lbl)) for lbl in _get(m, "family", f"module {name!r}"))
            _require(len(family) >= 1, f"module {name!r}: empty family")
            e = self.parse_matrix(dg, 0, family, family,
                                  _get(m, "idempotent", f"module {name!r}"), f"module {name!r} idempotent")
            try:
                out[name] = ProjectiveModule(dg, name, e)
            except LincatError as exc:
                raise WorkspaceError(str(exc)) from exc
        return out

    def parse_connections(self, dg: DGCategory, modules: Mapping[str, ProjectiveModule]):
        conns: dict[str, Connection] = {}
        kinds: dict[str, str] = {}
        for c in self.doc.get("connections", []):
            name = str(_get(c, "name", "connection"))
            _require(name not in conns, f"connection {name!r} given twice")
            module_name = str(_get(c, "module", f"connection {name!r}"))
            _require(module_name in modules, f"connection {name!r}: unknown module {module_name!r}")
            module = modules[module_name]
            gauge = _get(c, "gauge", f"connection {name!r}")
            try:
                if gauge == "canonical":
                    conns[name] = canonical_connection(module)
                    kinds[name] = "canonical"
                else:
                    matrix = self.parse_matrix(dg, 1, module.family, module.family,
                                               gauge, f"connection {name!r} gauge")
                    conns[name] = Connection(module, matrix)
                    kinds[name] = "matrix"
            except WorkspaceError:
                raise
            except LincatError as exc:
                raise WorkspaceError(f"connection {name!r}: {exc}") from exc
        return conns, kinds

    def parse_endomorphisms(self, dg: DGCategory, modules: Mapping[str, ProjectiveModule]):
        out: dict[str, tuple[str, FormMatrix]] = {}
        for u in self.doc.get("endomorphisms", []):
            name = str(_get(u, "name", "endomorphism"))
            _require(name not in out, f"endomorphism {name!r} given twice")
            module_name = str(_get(u, "module", f"endomorphism {name!r}"))
            _require(module_name in modules, f"endomorphism {name!r}: unknown module {module_name!r}")
            module = modules[module_name]
            matrix = self.parse_matrix(dg, 0, module.family, module.family,
                                       _get(u, "matrix", f"endomorphism {name!r}"), f"endomorphism {name!r}")
            out[name] = (module_name, matrix)
        return out


# ---------------------------------------------------------------------------
# canonical document


def _term_docs(dg: DGCategory, f: Form) -> list[dict]:
    labels = dg.space_labels(f.degree, f.cod.index, f.dom.index)
    return [
        {
            "coeff": format_scalar(s),
            "degree": f.degree,
            "dom": f.dom.label,
            "cod": f.cod.label,
            "basis": labels[k],
        }
        for k, s in enumerate(f.coords)
        if s != 0
    ]


def _matrix_doc(dg: DGCategory, m: FormMatrix) -> list[list[list[dict]]]:
    return [[_term_docs(dg, f) for f in row] for row in m.entries]


def _category_doc(cat: Category) -> dict:
    nobj = len(cat.objects)
    arrows = []
    for x in range(nobj):
        for y in range(nobj):
            for a in cat.basis_labels(x, y):
                arrows.append({"label": a, "dom": cat.objects[y].label, "cod": cat.objects[x].label})
    products = []
    for x in range(nobj):
        for y in range(nobj):
            for z in range(nobj):
                for i, left in enumerate(cat.basis_labels(x, y)):
                    for j, right in enumerate(cat.basis_labels(y, z)):
                        coords = cat.compose_basis(x, y, z, i, j)
                        if all(s == 0 for s in coords):
                            continue
                        targets = cat.basis_labels(x, z)
                        products.append({
                            "left": left,
                            "right": right,
                            "result": {
                                targets[k]: format_scalar(s) for k, s in enumerate(coords) if s != 0
                            },
                        })
    identities = {}
    for x in range(nobj):
        names = cat.basis_labels(x, x)
        identities[cat.objects[x].label] = {
            names[k]: format_scalar(s) for k, s in enumerate(cat.identity[x]) if s != 0
        }
    return {
        "objects": [o.label for o in cat.objects],
        "arrows": arrows,
        "products": products,
        "identities": identities,
    }


def _forms_doc(dg: DGCategory, model: str) -> dict:
    if model in ("universal", "trivial"):
        return {"model": model, "truncation": dg.truncation}
    cat = dg.base
    nobj = len(cat.objects)
    spaces = []
    for n in range(1, dg.truncation + 1):
        for x in range(nobj):
            for y in range(nobj):
                labels = dg.space_labels(n, x, y)
                if labels:
                    spaces.append({
                        "degree": n,
                        "cod": cat.objects[x].label,
                        "dom": cat.objects[y].label,
                        "basis": list(labels),
                    })

    def address(n: int, x: int, y: int, k: int) -> dict:
        if n == 0:
            label = cat.basis_labels(x, y)[k]
        else:
            label = dg.space_labels(n, x, y)[k]
        return {"degree": n, "cod": cat.objects[x].label, "dom": cat.objects[y].label, "basis": label}

    def form_terms(f: Form) -> list[dict]:
        return _term_docs(dg, f)

    products = []
    for p in range(0, dg.truncation + 1):
        for q in range(0, dg.truncation + 1 - p):
            if p == 0 and q == 0:
                continue
            for x in range(nobj):
                for y in range(nobj):
                    for z in range(nobj):
                        dp, dq = dg.dim(p, x, y), dg.dim(q, y, z)
                        if dp == 0 or dq == 0:
                            continue
                        for i in range(dp):
                            f = dg.basis_form(p, cat.objects[y], cat.objects[x], i)
                            for j in range(dq):
                                g = dg.basis_form(q, cat.objects[z], cat.objects[y], j)
                                result = dg.compose(f, g)
                                if result.is_zero():
                                    continue
                                products.append({
                                    "left": address(p, x, y, i),
                                    "right": address(q, y, z, j),
                                    "result": form_terms(result),
                                })
    differentials = []
    for n in range(0, dg.truncation):
        for x in range(nobj):
            for y in range(nobj):
                for k in range(dg.dim(n, x, y)):
                    f = dg.basis_form(n, cat.objects[y], cat.objects[x], k)
                    df = dg.d(f)
                    if df.is_zero():
                        continue
                    differentials.append({"of": address(n, x, y, k), "result": form_terms(df)})
    return {
        "model": "tables",
        "truncation": dg.truncation,
        "spaces": spaces,
        "products": products,
        "differentials": differentials,
    }


def _document(ws_name: str, cat: Category, dg: DGCategory, model: str,
              modules: Mapping[str, ProjectiveModule],
              connections: Mapping[str, Connection],
              kinds: Mapping[str, str],
              endomorphisms: Mapping[str, tuple[str, FormMatrix]]) -> dict:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "name": ws_name,
        "category": _category_doc(cat),
        "forms": _forms_doc(dg, model),
    }
    if modules:
        doc["modules"] = [
            {
                "name": name,
                "family": [o.label for o in m.family],
                "idempotent": _matrix_doc(dg, m.idempotent),
            }
            for name, m in modules.items()
        ]
    if connections:
        doc["connections"] = [
            {
                "name": name,
                "module": conn.module.name,
                "gauge": "canonical" if kinds[name] == "canonical" else _matrix_doc(dg, conn.gauge),
            }
            for name, conn in connections.items()
        ]
    if endomorphisms:
        doc["endomorphisms"] = [
            {"name": name, "module": module_name, "matrix": _matrix_doc(dg, matrix)}
            for name, (module_name, matrix) in endomorphisms.items()
        ]
    return doc


# ---------------------------------------------------------------------------
# public API


def workspace_from_dict(doc: Mapping) -> Workspace:
    parser = _Parser(doc)
    cat = parser.parse_category()
    dg, model = parser.parse_forms(cat)
    modules = parser.parse_modules(dg)
    connections, kinds = parser.parse_connections(dg, modules)
    endomorphisms = parser.parse_endomorphisms(dg, modules)
    document = _document(parser.name, cat, dg, model, modules, connections, kinds, endomorphisms)
    return Workspace(
        name=parser.name,
        category=cat,
        dg=dg,
        model=model,
        modules=modules,
        connections=connections,
        connection_kinds=kinds,
        endomorphisms=endomorphisms,
        document=document,
    )


def parse_workspace(text: str) -> Workspace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"not valid JSON: {exc}") from exc
    return workspace_from_dict(doc)


def load_workspace(path: str) -> Workspace:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise WorkspaceError(f"cannot read workspace file: {exc}") from exc
    return parse_workspace(text)


def serialize_workspace(ws: Workspace) -> str:
    return json.dumps(ws.document, sort_keys=True, indent=2) + "\n"


def fixture_names() -> list[str]:
    root = resources.files("lincat").joinpath("fixtures")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> Workspace:
    root = resources.files("lincat").joinpath("fixtures")
    path = root.joinpath(f"{name}.json")
    try:
        text = path.read_text(encoding="utf-8")
    except (FileNotFoundError, OSError) as exc:
        raise WorkspaceError(f"no fixture named {name!r}; available: {', '.join(fixture_names())}") from exc
    return parse_workspace(text)
