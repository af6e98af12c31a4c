"""Command line entry point: load a JSON model, run one named check or construction,
print a deterministic report.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field as dc_field
from importlib import resources
from typing import Any, Callable

from .algebra import Algebra, idealizer, matrix_algebra, validate_algebra, validate_morphism
from .bimodules import (Bimodule3, embed_l, identity_bimodule, pentagon_check, reduce_bimodule,
                        reduction_mult_iso, tensor, triangle_check, validate_bimodule)
from .classical import (check_commute, cl_bimodule, cl_bimodule_report, cl_functor_laws, cl_identity_coherence,
                        cl_triple, dimension_accounting, eta_algebra, gamma_modifications, mu_hat_small_diagram,
                        mu_small_diagram, picard_check, validate_deformed)
from .field import QQ, Field
from .linalg import Mat, Subspace
from .morita import (check_structure_theorem, check_zero_component, dual_basis, idempotents, is_idempotent,
                     project_equivalence, right_generators, standard_equivalence, verify_equivalence)
from .report import CoisoError, Report, jsonable
from .sampling import (random_algebra, random_chain, random_composable, random_deformed_bimodule,
                       random_deformed_triple, random_dirac, random_triple)
from .triples import (Triple, TripleMorphism, dirac, reduction_functor_laws, trivial, unred, unred_iso,
                      validate_triple, verify_canonical_bimodule)

DEFAULT_MODEL = "default.json"


class ModelError(CoisoError):
    """A model file that cannot be turned into a workspace."""


# ------------------------------------------------------------------ model

@dataclass
class Workspace:
    field: Field = QQ
    algebras: dict[str, Algebra] = dc_field(default_factory=dict)
    subspaces: dict[str, tuple[str, Subspace]] = dc_field(default_factory=dict)
    triples: dict[str, Triple] = dc_field(default_factory=dict)
    bimodules: dict[str, Bimodule3] = dc_field(default_factory=dict)
    deformed: set[str] = dc_field(default_factory=set)

    def get(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            known = ", ".join(sorted(table)) or "none"
            raise ModelError(f"unknown {kind[:-1]} {name!r} (known: {known})")
        return table[name]


def parse_field(spec: Any) -> Field:
    """"Q", {"Fp": p}, or the environment forms "Fp:p" / "F7"."""
    if spec in (None, "Q", "QQ"):
        return QQ
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        p = spec["Fp"]
    elif isinstance(spec, str) and spec.startswith("Fp:"):
        p = spec[3:]
    elif isinstance(spec, str) and spec.startswith("F") and spec[1:].isdigit():
        p = spec[1:]
    else:
        raise ModelError(f"field: expected \"Q\" or {{\"Fp\": p}}, got {spec!r}")
    try:
        return Field(int(p))
    except ValueError as exc:
        raise ModelError(f"field: {exc}") from exc


def _scalar(fld: Field, x: Any, where: str):
    if isinstance(x, float) or isinstance(x, bool):
        raise ModelError(f"{where}: scalars must be integers or \"p/q\" strings, got {x!r}")
    try:
        return fld(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ModelError(f"{where}: bad scalar {x!r} ({exc})") from exc


def _vector(fld: Field, xs: Any, dim: int, where: str) -> tuple:
    if not isinstance(xs, list) or len(xs) != dim:
        raise ModelError(f"{where}: expected a list of {dim} scalars")
    return tuple(_scalar(fld, x, f"{where}[{i}]") for i, x in enumerate(xs))


def _mapping(raw: dict, key: str) -> dict:
    out = raw.get(key, {})
    if not isinstance(out, dict):
        raise ModelError(f"{key}: expected an object")
    return out


def _require(rep: Report, where: str):
    if not rep.ok:
        bad = rep.failures[0]
        detail = f" {json.dumps(jsonable(bad.witness), sort_keys=True)}" if bad.witness is not None else ""
        raise ModelError(f"{where}: {bad.name} fails{detail}", rep)


def _parse_algebra(fld: Field, name: str, spec: Any) -> Algebra:
    where = f"algebras.{name}"
    if not isinstance(spec, dict) or "dim" not in spec or "unit" not in spec:
        raise ModelError(f"{where}: expected {{dim, unit, structure}}")
    dim = spec["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ModelError(f"{where}.dim: expected a positive integer")
    unit = _vector(fld, spec["unit"], dim, f"{where}.unit")
    entries = []
    for n, entry in enumerate(spec.get("structure", [])):
        w = f"{where}.structure[{n}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise ModelError(f"{w}: expected [i, j, k, coefficient]")
        i, j, k, c = entry
        if not all(isinstance(x, int) and not isinstance(x, bool) and 0 <= x < dim for x in (i, j, k)):
            raise ModelError(f"{w}: basis indices must lie in 0..{dim - 1}")
        entries.append((i, j, k, _scalar(fld, c, w)))
    a = Algebra(dim, entries, unit, fld, label=name)
    _require(validate_algebra(a), where)
    return a


def _parse_triple(ws: Workspace, name: str, spec: Any) -> Triple:
    where = f"triples.{name}"
    if not isinstance(spec, dict):
        raise ModelError(f"{where}: expected an object")
    try:
        if "dirac" in spec:
            alg_name, ideal_name = spec["dirac"]
            a = ws.get("algebras", alg_name)
            return dirac(a, _subspace_of(ws, ideal_name, alg_name, where), label=name)
        if "trivial" in spec:
            return trivial(ws.get("algebras", spec["trivial"]), label=name)
        if "unred" in spec:
            return unred(ws.get("algebras", spec["unred"]), label=name)
        if {"tot", "n", "zero"} <= set(spec):
            a = ws.get("algebras", spec["tot"])
            t = Triple(a, _subspace_of(ws, spec["n"], spec["tot"], where),
                       _subspace_of(ws, spec["zero"], spec["tot"], where), label=name)
            _require(validate_triple(t), where)
            return t
    except ModelError:
        raise
    except CoisoError as exc:
        if exc.report is not None:
            _require(exc.report, where)
        raise ModelError(f"{where}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ModelError(f"{where}: {exc}") from exc
    raise ModelError(f"{where}: expected one of tot/n/zero, dirac, trivial, unred")


def _subspace_of(ws: Workspace, name: str, alg_name: str, where: str) -> Subspace:
    of, s = ws.get("subspaces", name)
    if of != alg_name:
        raise ModelError(f"{where}: subspace {name!r} lives in {of!r}, not {alg_name!r}")
    return s


def _parse_bimodule(ws: Workspace, name: str, spec: Any) -> Bimodule3:
    """{"identity": triple} or {"embed": {source, target, matrix}}, with optional extra "zero" vectors."""
    where = f"bimodules.{name}"
    if not isinstance(spec, dict):
        raise ModelError(f"{where}: expected an object")
    if "identity" in spec:
        e = identity_bimodule(ws.get("triples", spec["identity"]))
    elif "embed" in spec:
        m = spec["embed"]
        src, tgt = ws.get("triples", m["source"]), ws.get("triples", m["target"])
        rows = m["matrix"]
        if not isinstance(rows, list) or len(rows) != tgt.tot.dim:
            raise ModelError(f"{where}.embed.matrix: expected {tgt.tot.dim} rows")
        mat = Mat([_vector(ws.field, r, src.tot.dim, f"{where}.embed.matrix[{i}]") for i, r in enumerate(rows)],
                  src.tot.dim, ws.field)
        try:
            e = embed_l(TripleMorphism(src, tgt, mat))
        except CoisoError as exc:
            if exc.report is not None:
                _require(exc.report, f"{where}.embed")
            raise ModelError(f"{where}.embed: {exc}") from exc
    else:
        raise ModelError(f"{where}: expected identity or embed")
    zero = e.zero
    if "zero" in spec:
        extra = [_vector(ws.field, v, e.nmod.dim, f"{where}.zero[{i}]") for i, v in enumerate(spec["zero"])]
        zero = Subspace.span(list(e.zero.basis) + extra, e.nmod.dim, ws.field)
    # a fresh object: identity bimodules are cached on their triple
    e = Bimodule3(e.left, e.right, e.tot, e.nmod, zero, e.iota, label=name)
    _require(validate_bimodule(e), where)
    if e.left.tot.deformed and e.right.tot.deformed:
        _require(validate_deformed(e), where)
    return e


def build_workspace(raw: Any, env_field: str | None = None) -> Workspace:
    if not isinstance(raw, dict):
        raise ModelError("model: expected a JSON object at top level")
    fld = parse_field(raw["field"] if "field" in raw else env_field)
    ws = Workspace(field=fld)
    deformed = _mapping(raw, "deformed")
    for name, spec in _mapping(raw, "algebras").items():
        a = _parse_algebra(fld, name, spec)
        if name in deformed:
            d = deformed[name]
            where = f"deformed.{name}"
            if not isinstance(d, dict) or "lambda" not in d or not isinstance(d.get("order"), int):
                raise ModelError(f"{where}: expected {{lambda, order}}")
            a = a.with_deformation(_vector(fld, d["lambda"], a.dim, f"{where}.lambda"), d["order"])
            _require(validate_deformed(a), where)
            ws.deformed.add(name)
        ws.algebras[name] = a
    for name in deformed:
        if name not in ws.algebras:
            raise ModelError(f"deformed.{name}: no such algebra")
    for name, spec in _mapping(raw, "subspaces").items():
        where = f"subspaces.{name}"
        if not isinstance(spec, dict) or "of" not in spec:
            raise ModelError(f"{where}: expected {{of, vectors}}")
        a = ws.get("algebras", spec["of"])
        vecs = [_vector(fld, v, a.dim, f"{where}.vectors[{i}]") for i, v in enumerate(spec.get("vectors", []))]
        ws.subspaces[name] = (spec["of"], Subspace.span(vecs, a.dim, fld))
    for name, spec in _mapping(raw, "triples").items():
        ws.triples[name] = _parse_triple(ws, name, spec)
    for name, spec in _mapping(raw, "bimodules").items():
        ws.bimodules[name] = _parse_bimodule(ws, name, spec)
    return ws


def parse_model(path: str | None = None, env_field: str | None = None) -> Workspace:
    """Read a model file; `None` loads the bundled default model."""
    if path is None:
        text = resources.files("coiso.fixtures").joinpath(DEFAULT_MODEL).read_text(encoding="utf-8")
        where = DEFAULT_MODEL
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ModelError(f"{path}: {exc.strerror}") from exc
        where = path
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return build_workspace(raw, env_field)


# ------------------------------------------------------------------ output helpers

def algebra_summary(a: Algebra) -> dict:
    out = {"dim": a.dim, "unit": a.unit, "structure": [list(e) for e in a.structure_entries()]}
    if a.deformed:
        out["lambda"] = a.lam
        out["order"] = a.order
    return out


def triple_summary(t: Triple) -> dict:
    return {"dims": [t.tot.dim, t.n_sub.dim, t.zero.dim], "n_basis": t.n_sub.basis, "zero_basis": t.zero.basis,
            "red_dim": t.reduced()[0].dim}


def bimodule_summary(e: Bimodule3) -> dict:
    return {"dims": list(e.dims), "left": e.left.label, "right": e.right.label}


@dataclass
class Outcome:
    report: Report
    outputs: dict = dc_field(default_factory=dict)


def _rng(seed: int, k: int) -> random.Random:
    # one generator per iteration so any failing iteration replays on its own
    return random.Random(f"coiso:{seed}:{k}")


def _need_seed(args) -> int:
    if args.seed is None:
        raise ModelError(f"{args.command} draws random instances and needs --seed")
    return args.seed


def _sweep(args, name: str, body: Callable[[random.Random, Report, dict], None]) -> Outcome:
    seed = _need_seed(args)
    rep = Report(name)
    runs = []
    for k in range(args.iters):
        r = Report()
        info: dict = {}
        body(_rng(seed, k), r, info)
        rep.extend(r, f"iter{k}.")
        runs.append({"iter": k, "ok": r.ok, **info})
    passed = sum(1 for x in runs if x["ok"])
    return Outcome(rep, {"passed": f"{passed}/{args.iters}", "runs": runs})


# ------------------------------------------------------------------ commands

def cmd_validate(ws: Workspace, args) -> Outcome:
    rep = Report("validate")
    out: dict = {}
    names = set(args.object or [])
    for name, a in sorted(ws.algebras.items()):
        if names and name not in names:
            continue
        rep.extend(validate_algebra(a), f"algebras.{name}.")
        if a.deformed:
            rep.extend(validate_deformed(a), f"algebras.{name}.deformed.")
        out[f"algebras.{name}"] = {"dim": a.dim, "deformed": a.deformed}
    for name, t in sorted(ws.triples.items()):
        if names and name not in names:
            continue
        rep.extend(validate_triple(t), f"triples.{name}.")
        out[f"triples.{name}"] = triple_summary(t)
    for name, e in sorted(ws.bimodules.items()):
        if names and name not in names:
            continue
        rep.extend(validate_bimodule(e), f"bimodules.{name}.")
        out[f"bimodules.{name}"] = bimodule_summary(e)
    missing = names - set(ws.algebras) - set(ws.triples) - set(ws.bimodules)
    if missing:
        raise ModelError(f"unknown object(s): {', '.join(sorted(missing))}")
    return Outcome(rep, out)


def cmd_reduce(ws: Workspace, args) -> Outcome:
    if args.triple is None:
        def body(rng, r, info):
            a = random_algebra(rng, 4, ws.field)
            chain = random_chain(rng, random_triple(rng, a), 4)
            info["triples"] = [chain[0].source.label] + [f.target.label for f in chain]
            r.extend(reduction_functor_laws(chain))
        return _sweep(args, "reduction functor laws", body)
    t = ws.get("triples", args.triple)
    rep = Report(f"reduce {args.triple}")
    rep.extend(validate_triple(t), "input.")
    red, _, _ = t.reduced()
    rep.extend(validate_algebra(red), "reduced.")
    iso = unred_iso(t.tot)
    rep.extend(validate_morphism(iso), "unred.")
    rep.check("unred.bijective", iso.matrix.is_invertible())
    rep.check("trivial.reduces_to_zero", trivial(t.tot).reduced()[0].dim == 0)
    return Outcome(rep, {"triple": triple_summary(t), "reduced": algebra_summary(red)})


def cmd_dirac(ws: Workspace, args) -> Outcome:
    a = ws.get("algebras", args.algebra)
    _, j = ws.get("subspaces", args.ideal)
    t = dirac(a, j, label=f"dirac({args.algebra},{args.ideal})")
    rep = Report("dirac")
    rep.extend(validate_triple(t), "triple.")
    rep.check("n_is_idealizer", t.n_sub == idealizer(a, j))
    return Outcome(rep, {"triple": triple_summary(t), "reduced": algebra_summary(t.reduced()[0])})


def cmd_canonical(ws: Workspace, args) -> Outcome:
    if args.triple is None:
        def body(rng, r, info):
            t = random_dirac(rng, 4, ws.field)
            info["triple"] = t.label
            info["dims"] = [t.tot.dim, t.n_sub.dim, t.zero.dim]
            r.extend(verify_canonical_bimodule(t))
        return _sweep(args, "canonical bimodule", body)
    t = ws.get("triples", args.triple)
    rep = verify_canonical_bimodule(t)
    return Outcome(rep, {"triple": triple_summary(t), **rep.info})


def cmd_tensor(ws: Workspace, args) -> Outcome:
    f, e = ws.get("bimodules", args.left), ws.get("bimodules", args.right)
    if f.right != e.left:
        raise ModelError(f"{args.left} ⊗ {args.right}: middle triples differ")
    fe = tensor(f, e)
    rep = Report("tensor")
    rep.extend(validate_bimodule(fe), "tensor.")
    _, m = reduction_mult_iso(f, e)
    rep.extend(m, "reduction_mult.")
    return Outcome(rep, {"tensor": bimodule_summary(fe), "reduced_dim": reduce_bimodule(fe).dim})


def _standard(ws: Workspace, args):
    t = ws.get("triples", args.triple)
    if args.n < 1:
        raise ModelError("--n must be at least 1")
    return t, standard_equivalence(t, args.n)


def cmd_morita_standard(ws: Workspace, args) -> Outcome:
    t, d = _standard(ws, args)
    rep = verify_equivalence(d)
    out = {"triple": triple_summary(t), "matrix_triple": triple_summary(d.b),
           "e": bimodule_summary(d.e), "e_prime": bimodule_summary(d.e_prime)}
    return Outcome(rep, out)


def cmd_morita_verify(ws: Workspace, args) -> Outcome:
    t, d = _standard(ws, args)
    rep = Report("morita verify")
    rep.extend(verify_equivalence(d), "equivalence.")
    rep.check("zero_component", check_zero_component(d))
    rep.extend(project_equivalence(d, "tot"), "project.tot.")
    rep.extend(project_equivalence(d, "n"), "project.n.")
    if t.tot.deformed:
        rep.extend(picard_check(d), "picard.")
    return Outcome(rep, {"triple": triple_summary(t), "matrix_triple": triple_summary(d.b)})


def cmd_dual_basis(ws: Workspace, args) -> Outcome:
    t, d = _standard(ws, args)
    gens = right_generators(d.e.nmod)
    db = dual_basis(d, gens)
    rep = Report("dual basis")
    rep.extend(db.report)
    e_n, e_tot, equal = idempotents(db)
    m = len(gens)
    rep.check("idempotent.n", is_idempotent(matrix_algebra(d.a.n_alg, m), e_n))
    rep.check("idempotent.tot", is_idempotent(matrix_algebra(d.a.tot, m), e_tot))
    rep.check("idempotent.equal", equal)
    return Outcome(rep, {"generators": gens, "e_n": e_n, "e_tot": e_tot})


def cmd_structure(ws: Workspace, args) -> Outcome:
    t, d = _standard(ws, args)
    rep = check_structure_theorem(d)
    return Outcome(rep, {"triple": triple_summary(t), **rep.info})


def cmd_cl(ws: Workspace, args) -> Outcome:
    if args.triple is None and args.bimodule is None:
        def body(rng, r, info):
            t = random_deformed_triple(rng, 4, ws.field)
            chain = random_chain(rng, t, 3)
            info["triples"] = [t.label] + [f.target.label for f in chain]
            r.extend(cl_functor_laws(chain), "laws.")
            r.extend(dimension_accounting(t), "dims.")
        return _sweep(args, "classical limit", body)
    if args.bimodule is not None:
        e = ws.get("bimodules", args.bimodule)
        rep = Report(f"classical limit of {args.bimodule}")
        rep.extend(validate_deformed(e), "input.")
        if not rep.ok:
            return Outcome(rep)
        rep.extend(cl_bimodule_report(e), "cl.")
        rep.extend(dimension_accounting(e), "dims.")
        left, right = cl_identity_coherence(e)
        rep.check("identity_coherence.left", left)
        rep.check("identity_coherence.right", right)
        return Outcome(rep, {"input": bimodule_summary(e), "cl": bimodule_summary(cl_bimodule(e))})
    t = ws.get("triples", args.triple)
    rep = Report(f"classical limit of {args.triple}")
    rep.extend(validate_deformed(t), "input.")
    if not rep.ok:
        return Outcome(rep)
    c = cl_triple(t)
    rep.extend(validate_triple(c), "cl.")
    rep.extend(dimension_accounting(t), "dims.")
    return Outcome(rep, {"input": triple_summary(t), "cl": triple_summary(c), "cl_tot": algebra_summary(c.tot)})


def cmd_eta(ws: Workspace, args) -> Outcome:
    t = ws.get("triples", args.triple)
    rep = Report(f"eta at {args.triple}")
    rep.extend(validate_deformed(t), "input.")
    if not rep.ok:
        return Outcome(rep)
    eta, r = eta_algebra(t)
    rep.extend(r, "eta.")
    if not r.ok:
        return Outcome(rep)
    rep.extend(gamma_modifications(t).report, "gamma.")
    rep.check("mu_small_diagram", mu_small_diagram(t))
    rep.check("mu_hat_small_diagram", mu_hat_small_diagram(t))
    return Outcome(rep, {"eta": eta.matrix.tolist(), "cl_red_dim": eta.source.dim, "red_cl_dim": eta.target.dim})


def cmd_commute(ws: Workspace, args) -> Outcome:
    if args.bimodule is None:
        def body(rng, r, info):
            e = random_deformed_bimodule(rng, 4, ws.field)
            info["bimodule"] = e.label
            info["dims"] = list(e.dims)
            r.extend(check_commute(e))
        return _sweep(args, "commute check", body)
    e = ws.get("bimodules", args.bimodule)
    rep = check_commute(e)
    return Outcome(rep, {"bimodule": bimodule_summary(e)})


def cmd_coherence(ws: Workspace, args) -> Outcome:
    def body(rng, r, info):
        k, h, g, f = random_composable(rng, 4, 3, deformed=args.deformed, field=ws.field)
        info["dims"] = [list(x.dims) for x in (k, h, g, f)]
        r.check("pentagon", pentagon_check(k, h, g, f))
        r.check("triangle", triangle_check(g, f))
    return _sweep(args, "bicategory coherence", body)


def cmd_report_fixtures(ws: Workspace, args) -> Outcome:
    rep = Report("fixtures")
    out: dict = {}
    for name, t in sorted(ws.triples.items()):
        rep.extend(validate_triple(t), f"{name}.")
        out[name] = triple_summary(t)
        if t.n_sub == idealizer(t.tot, t.zero):
            rep.extend(verify_canonical_bimodule(t), f"{name}.canonical.")
        if t.tot.deformed:
            rep.extend(dimension_accounting(t), f"{name}.cl_dims.")
            _, r = eta_algebra(t)
            rep.extend(r, f"{name}.eta.")
    for name, e in sorted(ws.bimodules.items()):
        rep.extend(validate_bimodule(e), f"{name}.")
        out[name] = bimodule_summary(e)
        if e.left.tot.deformed and e.right.tot.deformed:
            rep.extend(check_commute(e), f"{name}.commute.")
    return Outcome(rep, out)


COMMANDS: dict[str, Callable[[Workspace, Any], Outcome]] = {
    "validate": cmd_validate,
    "reduce": cmd_reduce,
    "dirac": cmd_dirac,
    "canonical-bimodule": cmd_canonical,
    "tensor": cmd_tensor,
    "morita-standard": cmd_morita_standard,
    "morita-verify": cmd_morita_verify,
    "dual-basis": cmd_dual_basis,
    "structure-theorem": cmd_structure,
    "cl": cmd_cl,
    "eta": cmd_eta,
    "commute-check": cmd_commute,
    "coherence": cmd_coherence,
    "report-fixtures": cmd_report_fixtures,
}


# ------------------------------------------------------------------ argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="JSON model file (default: the bundled fixtures)")
    common.add_argument("--format", choices=("human", "json"), default="human")
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, help="required whenever instances are drawn at random")
    seeded.add_argument("--iters", type=int, default=10)
    standard = argparse.ArgumentParser(add_help=False)
    standard.add_argument("--triple", required=True)
    standard.add_argument("--n", type=int, default=2, help="matrix size of the standard equivalence")

    parser = argparse.ArgumentParser(prog="coiso", description="Exact checks for coisotropic triples of algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate", parents=[common], help="validate every object in the model")
    p.add_argument("--object", action="append", help="restrict to these names")
    p = sub.add_parser("reduce", parents=[common, seeded], help="reduced algebra, or functor laws on random chains")
    p.add_argument("--triple")
    p = sub.add_parser("dirac", parents=[common], help="Dirac triple of a left ideal")
    p.add_argument("--algebra", required=True)
    p.add_argument("--ideal", required=True)
    p = sub.add_parser("canonical-bimodule", parents=[common, seeded], help="End(A_tot/A_0)^opp vs A_red")
    p.add_argument("--triple")
    p = sub.add_parser("tensor", parents=[common], help="tensor two bimodules and check the reduction iso")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    sub.add_parser("morita-standard", parents=[common, standard], help="build and verify A^n as an equivalence")
    sub.add_parser("morita-verify", parents=[common, standard], help="full equivalence checks, Picard if deformed")
    sub.add_parser("dual-basis", parents=[common, standard], help="dual basis and idempotents")
    sub.add_parser("structure-theorem", parents=[common, standard], help="E = eA^m and B = End(E)")
    p = sub.add_parser("cl", parents=[common, seeded], help="classical limit of a deformed object")
    p.add_argument("--triple")
    p.add_argument("--bimodule")
    p = sub.add_parser("eta", parents=[common], help="cl(A_red) → cl(A)_red and its diagrams")
    p.add_argument("--triple", required=True)
    p = sub.add_parser("commute-check", parents=[common, seeded], help="cl∘red ≅ red∘cl at a bimodule")
    p.add_argument("--bimodule")
    p = sub.add_parser("coherence", parents=[common, seeded], help="pentagon and triangle on random tuples")
    p.add_argument("--deformed", action="store_true")
    sub.add_parser("report-fixtures", parents=[common], help="run the per-object checks on every fixture")
    return parser


def render_json(doc: dict) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_human(doc: dict) -> str:
    lines = [f"{doc['command']}: {doc['title']}"]
    for c in doc["checks"]:
        mark = "PASS" if c["pass"] else "FAIL"
        extra = f"  {json.dumps(c['witness'], sort_keys=True)}" if "witness" in c else ""
        lines.append(f"  {mark} {c['name']}{extra}")
    for k, v in sorted(doc["outputs"].items()):
        lines.append(f"  {k}: {json.dumps(v, sort_keys=True, ensure_ascii=False)}")
    passed = sum(1 for c in doc["checks"] if c["pass"])
    lines.append(f"{'OK' if doc['ok'] else 'FAILED'} ({passed}/{len(doc['checks'])} checks)")
    return "\n".join(lines) + "\n"


def run(argv: list[str] | None = None) -> tuple[int, dict, str]:
    """Parse arguments and execute one command: (exit code, report document, output format)."""
    args = build_parser().parse_args(argv)
    seed = getattr(args, "seed", None)
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "format", "seed") and v is not None}
    try:
        ws = parse_model(args.model, os.environ.get("COISO_FIELD"))
        outcome = COMMANDS[args.command](ws, args)
    except CoisoError as exc:
        doc = {"command": args.command, "title": "input error", "inputs": inputs, "seed": seed, "ok": False,
               "error": str(exc), "checks": [], "outputs": {}}
        return 2, doc, args.format
    rep = outcome.report
    outputs = dict(outcome.outputs)
    if rep.info:
        outputs["info"] = rep.info
    doc = {"command": args.command, "title": rep.title, "inputs": inputs, "seed": seed, "ok": rep.ok,
           "checks": [c.to_json() for c in rep.checks], "outputs": jsonable(outputs)}
    return (0 if rep.ok else 1), doc, args.format


def main(argv: list[str] | None = None) -> int:
    code, doc, fmt = run(argv)
    if fmt == "json":
        sys.stdout.write(render_json(doc))
    elif code == 2:
        sys.stderr.write(f"error: {doc['error']}\n")
    else:
        sys.stdout.write(render_human(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
