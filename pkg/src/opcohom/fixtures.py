"""Built-in structure-constant fixtures and their JSON serialization.

Every fixture is re-validated on load; the validation report is attached
rather than asserted, so that defective levels are *reported* (with a
witness) instead of silently trusted.  In characteristic != 2 the exterior
fixture is an algebra and a coalgebra whose antipode equations hold, but its
comultiplication is not an algebra morphism (Delta(x)^2 = 2 x tensor x while
x^2 = 0); commands that genuinely need a bialgebra refuse it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from opcohom.hopfcore import FinAlgebraData, check_axioms
from opcohom.linalg import Field, Mat, Vec
from opcohom.report import Report, StructureError

BUILTIN_NAMES = (
    "trivial",
    "group_z2",
    "group_z3",
    "group_s3",
    "dual_group_z2",
    "dual_group_z3",
    "dual_group_s3",
    "sweedler_h4",
    "exterior_x",
    "trunc_poly_x2",
)


@dataclass
class Fixture:
    name: str
    data: FinAlgebraData
    declared_level: str
    notes: str = ""
    known_gaps: list = dc_field(default_factory=list)
    validation: Report | None = None

    @property
    def valid(self):
        return self.validation is not None and self.validation.ok


def _group_fixture(name, elements, op, inv, field: Field) -> FinAlgebraData:
    """Group algebra k[G]: Delta g = g tensor g, eps = 1, S g = g^-1."""
    d = len(elements)
    index = {g: i for i, g in enumerate(elements)}
    f = field
    mult = Mat.from_entries(
        f, d, d * d,
        ((index[op(a, b)], i * d + j, f.one)
         for i, a in enumerate(elements) for j, b in enumerate(elements)),
    )
    comult = Mat.from_entries(f, d * d, d, ((i * d + i, i, f.one) for i in range(d)))
    counit = Vec(f, d, {i: f.one for i in range(d)})
    antipode = Mat.from_entries(f, d, d, ((index[inv(g)], i, f.one) for i, g in enumerate(elements)))
    return FinAlgebraData(
        field=f,
        dim=d,
        basis_names=[str(g) for g in elements],
        mult=mult,
        unit=Vec.basis(f, d, 0),
        comult=comult,
        counit=counit,
        antipode=antipode,
        augmentation=counit,
        name=name,
    )


def _perm_compose(a, b):
    # (a . b)(i) = a(b(i)): apply b first
    return tuple(a[b[i]] for i in range(len(a)))


def _perm_inverse(a):
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


_S3_ELEMENTS = [
    ("e", (0, 1, 2)),
    ("(12)", (1, 0, 2)),
    ("(13)", (2, 1, 0)),
    ("(23)", (0, 2, 1)),
    ("(123)", (1, 2, 0)),
    ("(132)", (2, 0, 1)),
]


def _builtin_data(name: str, field: Field) -> tuple:
    """(FinAlgebraData, declared_level, notes, known_gaps)"""
    f = field
    if name == "trivial":
        one = Mat.from_entries(f, 1, 1, [(0, 0, f.one)])
        data = FinAlgebraData(
            field=f, dim=1, basis_names=["1"],
            mult=one, unit=Vec.basis(f, 1, 0),
            comult=one, counit=Vec.basis(f, 1, 0),
            antipode=Mat.identity(f, 1), augmentation=Vec.basis(f, 1, 0),
            name="trivial",
        )
        return data, "hopf", "the ground field as a Hopf algebra", []

    if name in ("group_z2", "group_z3"):
        n = 2 if name.endswith("2") else 3
        elems = list(range(n))
        names = ["1"] + ["g" if k == 1 else "g%d" % k for k in range(1, n)]
        data = _group_fixture(
            name, elems, lambda a, b: (a + b) % n, lambda a: (-a) % n, f
        )
        data.basis_names = names
        return data, "hopf", "group algebra of Z/%d" % n, []

    if name == "group_s3":
        names = [nm for nm, _ in _S3_ELEMENTS]
        perms = [p for _, p in _S3_ELEMENTS]
        data = _group_fixture(name, perms, _perm_compose, _perm_inverse, f)
        data.basis_names = names
        return data, "hopf", "group algebra of the symmetric group S3; product st applies t first", []

    if name.startswith("dual_group_"):
        base, level, notes, gaps = _builtin_data(name[len("dual_"):], f)
        from opcohom.hopfcore import dualize

        data = dualize(base)
        data.name = name
        return data, "hopf", "dual Hopf algebra of the %s" % notes, []

    if name == "sweedler_h4":
        if f.characteristic == 2:
            raise ValueError("sweedler_h4 requires characteristic != 2")
        # basis 1, g, x, gx with g^2 = 1, x^2 = 0, xg = -gx
        names = ["1", "g", "x", "gx"]
        one, mone = f.one, f.neg(f.one)
        table = {
            (0, 0): [(0, one)], (0, 1): [(1, one)], (0, 2): [(2, one)], (0, 3): [(3, one)],
            (1, 0): [(1, one)], (1, 1): [(0, one)], (1, 2): [(3, one)], (1, 3): [(2, one)],
            (2, 0): [(2, one)], (2, 1): [(3, mone)], (2, 2): [], (2, 3): [],
            (3, 0): [(3, one)], (3, 1): [(2, mone)], (3, 2): [], (3, 3): [],
        }
        mult = Mat.from_entries(
            f, 4, 16,
            ((k, i * 4 + j, v) for (i, j), terms in table.items() for k, v in terms),
        )
        comult_terms = {
            0: [(0, 0, one)],
            1: [(1, 1, one)],
            2: [(2, 0, one), (1, 2, one)],        # Delta x = x.1 + g.x
            3: [(3, 1, one), (0, 3, one)],        # Delta gx = gx.g + 1.gx
        }
        comult = Mat.from_entries(
            f, 16, 4,
            ((j * 4 + k, i, v) for i, terms in comult_terms.items() for j, k, v in terms),
        )
        counit = Vec(f, 4, {0: one, 1: one})
        antipode = Mat.from_entries(
            f, 4, 4, [(0, 0, one), (1, 1, one), (3, 2, mone), (2, 3, one)]
        )
        data = FinAlgebraData(
            field=f, dim=4, basis_names=names, mult=mult, unit=Vec.basis(f, 4, 0),
            comult=comult, counit=counit, antipode=antipode, augmentation=counit,
            name=name,
        )
        return data, "hopf", "Sweedler's 4-dimensional Hopf algebra (non-unimodular)", []

    if name == "exterior_x":
        names = ["1", "x"]
        one, mone = f.one, f.neg(f.one)
        mult = Mat.from_entries(
            f, 2, 4, [(0, 0, one), (1, 1, one), (1, 2, one)]  # 1.1, 1.x, x.1; x.x = 0
        )
        comult = Mat.from_entries(
            f, 4, 2, [(0, 0, one), (2, 1, one), (1, 1, one)]  # Delta 1 = 1.1, Delta x = x.1 + 1.x
        )
        counit = Vec(f, 2, {0: one})
        antipode = Mat.from_entries(f, 2, 2, [(0, 0, one), (1, 1, mone)])
        data = FinAlgebraData(
            field=f, dim=2, basis_names=names, mult=mult, unit=Vec.basis(f, 2, 0),
            comult=comult, counit=counit, antipode=antipode, augmentation=counit,
            name=name,
        )
        gaps = []
        if f.characteristic != 2:
            gaps = [
                "comult is not an algebra morphism in characteristic != 2 "
                "(Delta(x)^2 = 2 x tensor x but x^2 = 0)"
            ]
        return data, "hopf", "k[x]/(x^2) with primitive x and S(x) = -x", gaps

    if name == "trunc_poly_x2":
        names = ["1", "x"]
        one = f.one
        mult = Mat.from_entries(f, 2, 4, [(0, 0, one), (1, 1, one), (1, 2, one)])
        data = FinAlgebraData(
            field=f, dim=2, basis_names=names, mult=mult, unit=Vec.basis(f, 2, 0),
            augmentation=Vec(f, 2, {0: one}),
            name=name,
        )
        return data, "algebra", "truncated polynomial algebra k[x]/(x^2), algebra only", []

    raise ValueError("unknown builtin fixture %r" % name)


def builtin(name: str, field: Field | None = None) -> Fixture:
    """Construct and re-validate a named fixture (default field: Q)."""
    f = field if field is not None else Field.Q()
    data, level, notes, gaps = _builtin_data(name, f)
    fx = Fixture(name=name, data=data, declared_level=level, notes=notes, known_gaps=gaps)
    fx.validation = check_axioms(data, level)
    return fx


# ---------------------------------------------------------------------------
# JSON (de)serialization, schema shared with the CLI


def _field_to_json(f: Field):
    return "Q" if f.kind == "Q" else {"Fp": f.p}


def _field_from_json(spec) -> Field:
    if spec == "Q":
        return Field.Q()
    if isinstance(spec, dict) and "Fp" in spec:
        return Field.Fp(int(spec["Fp"]))
    raise ValueError("bad field spec %r" % (spec,))


def fixture_to_json(fx: Fixture) -> dict:
    a = fx.data
    f = a.field
    d = a.dim
    mult = [
        [[f.serialize(a.mult.entry(k, i * d + j)) for k in range(d)] for j in range(d)]
        for i in range(d)
    ]
    out = {
        "field": _field_to_json(f),
        "dim": d,
        "basis": list(a.basis_names),
        "unit": [f.serialize(a.unit[i]) for i in range(d)],
        "mult": mult,
        "level": fx.declared_level,
    }
    if a.comult is not None:
        # sparse triples per basis element
        comult = []
        for i in range(d):
            terms = []
            for jk in range(d * d):
                v = a.comult.entry(jk, i)
                if v != f.zero:
                    terms.append([jk // d, jk % d, f.serialize(v)])
            comult.append(terms)
        out["comult"] = comult
    if a.counit is not None:
        out["counit"] = [f.serialize(a.counit[i]) for i in range(d)]
    if a.antipode is not None:
        out["antipode"] = [
            [f.serialize(a.antipode.entry(j, i)) for j in range(d)] for i in range(d)
        ]
    if a.augmentation is not None and a.augmentation is not a.counit:
        out["augmentation"] = [f.serialize(a.augmentation[i]) for i in range(d)]
    if fx.notes:
        out["notes"] = fx.notes
    return out


def fixture_from_json(doc: dict, name: str = "") -> Fixture:
    f = _field_from_json(doc["field"])
    d = int(doc["dim"])
    basis = [str(s) for s in doc["basis"]]
    mult = Mat.from_entries(
        f, d, d * d,
        ((k, i * d + j, f.of(doc["mult"][i][j][k]))
         for i in range(d) for j in range(d) for k in range(d)),
    )
    unit = Vec.from_dense(f, [f.of(c) for c in doc["unit"]])
    comult = counit = antipode = augmentation = None
    if "comult" in doc:
        comult = Mat.from_entries(
            f, d * d, d,
            ((int(j) * d + int(k), i, f.of(v))
             for i in range(d) for j, k, v in doc["comult"][i]),
        )
    if "counit" in doc:
        counit = Vec.from_dense(f, [f.of(c) for c in doc["counit"]])
    if "antipode" in doc:
        antipode = Mat.from_entries(
            f, d, d,
            ((j, i, f.of(doc["antipode"][i][j])) for i in range(d) for j in range(d)),
        )
    if "augmentation" in doc:
        augmentation = Vec.from_dense(f, [f.of(c) for c in doc["augmentation"]])
    elif counit is not None:
        augmentation = counit
    level = doc.get("level", "algebra")
    data = FinAlgebraData(
        field=f, dim=d, basis_names=basis, mult=mult, unit=unit,
        comult=comult, counit=counit, antipode=antipode, augmentation=augmentation,
        name=name or doc.get("name", ""),
    )
    fx = Fixture(name=data.name, data=data, declared_level=level, notes=doc.get("notes", ""))
    fx.validation = check_axioms(data, level)
    return fx


def load_fixture(ref: str, field: Field | None = None) -> Fixture:
    """Load 'builtin:<name>' or a JSON file path."""
    if ref.startswith("builtin:"):
        return builtin(ref[len("builtin:"):], field)
    with open(ref) as fh:
        doc = json.load(fh)
    fx = fixture_from_json(doc, name=ref)
    if field is not None and field != fx.data.field:
        raise StructureError("fixture field %s does not match override %s" % (fx.data.field, field))
    return fx
