"""Command-line driver: load fixtures, run verification suites and
cohomology computations, emit deterministic JSON or CSV reports.

Exit codes: 0 all checks passed, 1 a mathematical check failed (witness in
the report), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from opcohom.linalg import Field, LinalgError, Mat, Vec
from opcohom.report import Report, StructureError
from opcohom import fixtures as fixmod
from opcohom import hopfcore


def _parse_field(spec: str | None) -> Field | None:
    if spec is None:
        return None
    if spec == "Q":
        return Field.Q()
    if spec.startswith("Fp:"):
        return Field.Fp(int(spec.split(":", 1)[1]))
    raise StructureError("bad field spec %r (use Q or Fp:p)" % spec)


def _parse_covector(field: Field, dim: int, spec: str | None, default: Vec) -> Vec:
    if spec is None:
        return default
    coeffs = [field.of(part.strip()) for part in spec.split(",")]
    if len(coeffs) != dim:
        raise StructureError("expected %d coefficients, got %d" % (dim, len(coeffs)))
    return Vec(field, dim, {i: c for i, c in enumerate(coeffs) if c != field.zero})


def _vec_json(field: Field, v: Vec) -> list:
    return [field.serialize(v[i]) for i in range(v.dim)]


def _tables_json(field: Field, report) -> dict:
    out = {}
    cup = {}
    for (m, n), table in sorted(report.cup_table.items()):
        cup["%d,%d" % (m, n)] = {
            "%d,%d" % (i, j): _vec_json(field, v) for (i, j), v in sorted(table.items())
        }
    out["cup"] = cup
    br = {}
    for (m, n), table in sorted(report.bracket_table.items()):
        br["%d,%d" % (m, n)] = {
            "%d,%d" % (i, j): _vec_json(field, v) for (i, j), v in sorted(table.items())
        }
    out["bracket"] = br
    if report.b_table is not None:
        out["B"] = {
            str(n): {str(i): _vec_json(field, v) for i, v in sorted(table.items())}
            for n, table in sorted(report.b_table.items())
        }
    if report.sq_table:
        out["sq"] = {
            str(n): {str(i): _vec_json(field, v) for i, v in sorted(table.items())}
            for n, table in sorted(report.sq_table.items())
        }
    return out


def _emit(doc: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["section", "key", "value", "extra"])
        for c in doc.get("checks", []):
            w.writerow(["check", c["name"], "pass" if c["pass"] else "FAIL", c.get("witness", "")])
        for i, b in enumerate(doc.get("betti", [])):
            w.writerow(["betti", str(i), str(b), ""])
        for section, table in sorted(doc.get("tables", {}).items()):
            for k1, inner in sorted(table.items()):
                if isinstance(inner, dict):
                    for k2, val in sorted(inner.items()):
                        w.writerow(["table:" + section, k1 + ";" + k2, ";".join(map(str, val)), ""])
                else:
                    w.writerow(["table:" + section, k1, ";".join(map(str, inner)), ""])
        for k, v in sorted(doc.items()):
            if k in ("checks", "betti", "tables"):
                continue
            w.writerow(["meta", k, json.dumps(v, sort_keys=True), ""])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args) -> fixmod.Fixture:
    return fixmod.load_fixture(args.fixture, _parse_field(args.field))


def _report_doc(command: str, fixture: str, rep: Report, **extra) -> dict:
    doc = {"command": command, "fixture": fixture, "checks": [c.as_dict() for c in rep.checks]}
    doc.update(extra)
    return doc


def cmd_verify(args) -> tuple:
    fx = _load(args)
    a = fx.data
    rep = Report("verify")
    rep.extend(fx.validation)
    findings = {"level": fx.declared_level}
    if fx.known_gaps:
        findings["known_gaps"] = list(fx.known_gaps)
    if fx.validation.ok and fx.declared_level == "hopf":
        dual = hopfcore.dualize(a)
        rep.add("dual passes the hopf axioms", hopfcore.check_axioms(dual, "hopf").ok)
        left = hopfcore.integrals(a, "left")
        right = hopfcore.integrals(a, "right")
        findings["left_integral_dim"] = len(left)
        findings["right_integral_dim"] = len(right)
        uni = hopfcore.is_unimodular(a)
        findings["unimodular"] = uni
        alpha = hopfcore.distinguished_grouplike(a)
        findings["distinguished_character"] = _vec_json(a.field, alpha)
        lam = hopfcore.integrals(dual, "right")[0]
        frob = hopfcore.frobenius_from_integral(a, lam, "right")
        findings["symmetric_frobenius_form"] = frob.symmetric
        hopfcore.nakayama(frob, a)
        rep.add("Nakayama automorphism verified", True)
        sym = hopfcore.is_symmetric_frobenius(a)
        findings["symmetric"] = sym
        u = hopfcore.inner_square_witness(a)
        inner = u is not None
        rep.add(
            "symmetric iff unimodular and antipode-square inner",
            sym == (uni and inner),
            "symmetric=%s unimodular=%s inner=%s" % (sym, uni, inner),
        )
    doc = _report_doc("verify", args.fixture, rep, findings=findings)
    return doc, 0 if rep.ok else 1


def cmd_hh(args) -> tuple:
    from opcohom.hochschild import end_operad
    from opcohom.operad import cohomology_ring

    fx = _load(args)
    a = fx.data
    hopfcore.check_axioms(a, "algebra").require("hh")
    op = end_operad(a, args.max_degree + 1)
    table = cohomology_ring(op, args.max_degree)
    doc = _report_doc(
        "hh", args.fixture, table.checks,
        betti=table.betti, tables=_tables_json(a.field, table),
    )
    return doc, 0 if table.checks.ok else 1


def cmd_bv_table(args) -> tuple:
    from opcohom.hochschild import hh_bv_table

    fx = _load(args)
    a = fx.data
    hopfcore.check_axioms(a, "algebra").require("bv-table")
    frob = _symmetric_frobenius(a)
    table = hh_bv_table(a, frob, args.max_degree)
    doc = _report_doc(
        "bv-table", args.fixture, table.checks,
        betti=table.betti, tables=_tables_json(a.field, table),
    )
    return doc, 0 if table.checks.ok else 1


def _symmetric_frobenius(a):
    dual = hopfcore.dualize(a) if a.comult is not None else None
    if dual is not None:
        lam = hopfcore.integrals(dual, "right")[0]
        return hopfcore.frobenius_from_integral(a, lam, "right")
    # algebra-only route: search the dual space for a symmetric invertible form
    raise StructureError("bv-table needs coalgebra data to locate an integral form")


def cmd_hc_lambda(args) -> tuple:
    from opcohom.hochschild import hc_lambda

    fx = _load(args)
    a = fx.data
    hopfcore.check_axioms(a, "algebra").require("hc-lambda")
    frob = _symmetric_frobenius(a)
    sub = hc_lambda(a, frob, args.max_degree)
    tables = {}
    for (m, n), table in sorted(sub.bracket_table.items()):
        tables["%d,%d" % (m, n)] = {
            "%d,%d" % (i, j): (_vec_json(a.field, v) if v is not None else None)
            for (i, j), v in sorted(table.items())
        }
    doc = _report_doc(
        "hc-lambda", args.fixture, sub.checks,
        betti=sub.betti, tables={"bracket": tables},
    )
    return doc, 0 if sub.checks.ok else 1


def cmd_ext(args) -> tuple:
    from opcohom.barcobar import ext_betti

    fx = _load(args)
    a = fx.data
    rep = hopfcore.check_axioms(a, "algebra")
    rep.require("ext")
    betti = ext_betti(a, args.max_degree)
    doc = _report_doc("ext", args.fixture, rep, betti=betti)
    return doc, 0


def cmd_cotor(args) -> tuple:
    from opcohom.barcobar import cotor_betti

    fx = _load(args)
    c = fx.data
    rep = hopfcore.check_axioms(c, "coalgebra")
    rep.require("cotor")
    betti = cotor_betti(c, args.max_degree)
    doc = _report_doc("cotor", args.fixture, rep, betti=betti)
    return doc, 0


def cmd_hopf_cyclic(args) -> tuple:
    from opcohom.barcobar import hopf_cyclic

    fx = _load(args)
    h = fx.data
    f = h.field
    delta = _parse_covector(f, h.dim, args.delta, Vec(f, h.dim, dict(h.counit.e)))
    sigma = _parse_covector(f, h.dim, args.sigma, h.unit)
    mp = hopfcore.ModularPair(delta=delta, sigma=sigma)
    out = hopf_cyclic(h, mp, args.max_degree, args.convention)
    rep = Report("hopf-cyclic")
    rep.extend(out.identities)
    rep.extend(out.checks)
    extra = {
        "hc_betti": out.hc_betti,
        "homology_betti": out.homology_betti,
        "convention": out.convention,
    }
    if out.bv is not None:
        extra["bv_betti"] = out.bv.betti
        extra["tables"] = _tables_json(f, out.bv)
    doc = _report_doc("hopf-cyclic", args.fixture, rep, **extra)
    return doc, 0 if rep.ok else 1


def cmd_charmap(args) -> tuple:
    from opcohom.charmap import (
        ActionData,
        canonical_trace,
        characteristic_on_cohomology,
    )

    fx_a = fixmod.load_fixture(args.fixture, _parse_field(args.field))
    fx_h = fixmod.load_fixture(args.hopf, _parse_field(args.field))
    a, h = fx_a.data, fx_h.data
    hopfcore.check_axioms(h, "hopf").require("charmap Hopf input")
    if args.action == "regular":
        if args.fixture != args.hopf:
            raise StructureError("the regular coaction needs the two fixtures to coincide")
        act = ActionData.regular_coaction(h)
    else:
        with open(args.action) as fh:
            doc = json.load(fh)
        kind = {"module": "module_action", "comodule": "comodule_coaction"}[doc["kind"]]
        rows = a.dim if kind == "module_action" else a.dim * h.dim
        cols = h.dim * a.dim if kind == "module_action" else a.dim
        act = ActionData(
            kind=kind,
            map=Mat.from_entries(
                a.field, rows, cols,
                ((int(r), int(c), a.field.of(v)) for r, c, v in doc["map"]),
            ),
        )
    sigma = _parse_covector(h.field, h.dim, args.sigma, h.unit)
    trace = canonical_trace(h, sigma)
    out = characteristic_on_cohomology(a, h, act, trace, args.max_degree)
    doc = _report_doc(
        "charmap", "%s|%s" % (args.fixture, args.hopf), out.checks,
        source_betti=out.source_betti,
        target_betti=out.target_betti,
        injective={str(k): v for k, v in sorted(out.injective.items())},
    )
    return doc, 0 if out.checks.ok else 1


def cmd_schouten(args) -> tuple:
    from opcohom import schouten as sch

    if args.lie.startswith("builtin:"):
        name = args.lie[len("builtin:"):]
        if name not in sch.LIE_BUILTINS:
            raise StructureError("unknown Lie fixture %r" % name)
        lie = sch.LIE_BUILTINS[name](_parse_field(args.field))
    else:
        with open(args.lie) as fh:
            doc = json.load(fh)
        lie = sch.lie_from_json(doc, _parse_field(args.field))
    if args.character:
        lie.delta = _parse_covector(lie.field, lie.dim, args.character, lie.delta)
    rep = sch.check_free_bv(lie, args.max_degree)
    doc = _report_doc("schouten", args.lie, rep)
    return doc, 0 if rep.ok else 1


def cmd_duality(args) -> tuple:
    from opcohom.barcobar import duality_maps, modular_pair_duality, psi_duality

    fx = _load(args)
    c = fx.data
    rep = Report("duality")
    dm = duality_maps(c, min(args.max_degree, 3))
    rep.extend(dm.checks)
    sigma = _parse_covector(c.field, c.dim, args.sigma, c.unit)
    eps = Vec(c.field, c.dim, dict(c.counit.e))
    mp = hopfcore.ModularPair(delta=eps, sigma=sigma)
    rep.extend(psi_duality(c, mp, min(args.max_degree, 3)))
    rep.extend(modular_pair_duality(c, mp))
    doc = _report_doc("duality", args.fixture, rep)
    return doc, 0 if rep.ok else 1


COMMANDS = {
    "verify": cmd_verify,
    "hh": cmd_hh,
    "hc-lambda": cmd_hc_lambda,
    "ext": cmd_ext,
    "cotor": cmd_cotor,
    "bv-table": cmd_bv_table,
    "hopf-cyclic": cmd_hopf_cyclic,
    "charmap": cmd_charmap,
    "schouten": cmd_schouten,
    "duality": cmd_duality,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="opcohom",
        description="Exact verification engine for operadic Hochschild/cyclic cohomology",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fixture=True):
        if fixture:
            sp.add_argument("fixture", help="builtin:<name> or a fixture JSON path")
        sp.add_argument("--max-degree", type=int, default=4)
        sp.add_argument("--field", default=None, help="Q or Fp:<p>")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default=None, help="report path (default stdout)")

    common(sub.add_parser("verify", help="axiom suite, integrals, Frobenius structure"))
    common(sub.add_parser("hh", help="Hochschild cohomology with Gerstenhaber tables"))
    common(sub.add_parser("hc-lambda", help="cyclic-invariant subcomplex cohomology"))
    common(sub.add_parser("ext", help="Ext over the augmented algebra"))
    common(sub.add_parser("cotor", help="Cotor over the coaugmented coalgebra"))
    common(sub.add_parser("bv-table", help="BV structure on Hochschild cohomology"))
    hc = sub.add_parser("hopf-cyclic", help="Hopf-cyclic cohomology for a modular pair")
    common(hc)
    hc.add_argument("--delta", default=None, help="character coefficients, comma separated")
    hc.add_argument("--sigma", default=None, help="group-like coefficients, comma separated")
    hc.add_argument("--convention", choices=("cm", "kr"), default="cm")
    cm = sub.add_parser("charmap", help="characteristic map suite")
    common(cm)
    cm.add_argument("hopf", help="builtin:<name> or fixture JSON path for the Hopf algebra")
    cm.add_argument("--action", default="regular", help="'regular' or an action-spec JSON path")
    cm.add_argument("--sigma", default=None, help="group-like for the trace, comma separated")
    sc = sub.add_parser("schouten", help="free BV algebra on a Lie algebra")
    sc.add_argument("lie", help="builtin:<name> or a Lie JSON path")
    sc.add_argument("--character", default=None, help="character coefficients, comma separated")
    sc.add_argument("--max-degree", type=int, default=4)
    sc.add_argument("--field", default=None)
    sc.add_argument("--format", choices=("json", "csv"), default="json")
    sc.add_argument("--out", default=None)
    du = sub.add_parser("duality", help="bar/cobar and psi duality squares")
    common(du)
    du.add_argument("--sigma", default=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_degree", 1) <= 0:
        parser.error("--max-degree must be positive")
    try:
        result = COMMANDS[args.command](args)
        doc, code = result[0], result[1]
    except (StructureError, LinalgError, FileNotFoundError, KeyError, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except json.JSONDecodeError as exc:
        sys.stderr.write("error: malformed JSON: %s\n" % exc)
        return 2
    _emit(doc, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
