"""Command-line front end: ``formalglue <command> <session-file> [args] [flags]``."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import FormalGlueError, NonSurjectiveMap, TrivialGluing
from .fiber import fiber_over_k, fiber_product, verify_fibercomplete
from .gluing import (
    assess_configuration,
    check_symmetry,
    glue,
    noetherian_report,
    pushout_commutes,
    singularity_report,
    stalk_dimension_identity,
)
from .local_ring import LocalRingPresentation, depth, edim, invariants, krull_dim
from .oracles import intersection_agrees
from .resolution import (
    ModulePresentation,
    check_betti_inequality,
    check_domination,
    check_syzygy_recursion,
    minimal_resolution,
    poincare_residue_field,
    poincare_series,
    series_product,
)
from .session import GlueDecl, ImmersionDecl, MapDecl, ModuleDecl, RingDecl, parse_session, with_field

SCHEMA_VERSION = 1
COMMANDS = ("info", "fiber", "glue", "resolve", "verify")


class InputError(Exception):
    pass


# ---------------------------------------------------------------- report pieces


def ring_entry(R):
    return {
        "variables": list(R.ambient_vars),
        "ideal": [str(g) for g in R.ideal_gens],
        "standard_basis": [str(g) for g in R.std],
        "text": str(R),
    }


def invariants_entry(R):
    inv = invariants(R)
    return {"dim": inv.dim, "edim": inv.edim, "depth": inv.depth, "regular": inv.regular}


def fiber_entry(fp):
    out = {
        "provenance": fp.provenance,
        "R": str(fp.R),
        "S": str(fp.S),
        "T": str(fp.T),
        "dim": fp.dim,
        "depth": fp.depth,
        "depth_exact": fp.depth_exact,
    }
    if fp.presentation is not None:
        out["presentation"] = ring_entry(fp.presentation)
        out["invariants"] = invariants_entry(fp.presentation)
    else:
        out["presentation"] = None
        out["edim"] = "unknown (bound only)"
    return out


def _ring(doc, name):
    if not isinstance(doc.find(name), RingDecl):
        raise InputError(f"no ring named {name!r}")
    return doc.objects[name]


# ---------------------------------------------------------------- commands


def cmd_info(doc, args, opts):
    if len(args) != 1:
        raise InputError("usage: info <ring>")
    R = _ring(doc, args[0])
    return {
        "ring": args[0],
        "presentation": ring_entry(R),
        "invariants": invariants_entry(R),
        "poincare_residue_field": list(poincare_residue_field(R, opts["poincare_n"]).coefficients),
    }


def _find_map(doc, source, target):
    for s in doc.decls(MapDecl):
        if s.source == source and s.target == target:
            return doc.objects[s.name]
    raise InputError(f"no map {source} -> {target} is defined")


def cmd_fiber(doc, args, opts):
    if len(args) == 2:
        R, S = _ring(doc, args[0]), _ring(doc, args[1])
        fp = fiber_over_k(R, S)
    elif len(args) == 4 and args[2] == "over":
        _ring(doc, args[3])
        fp = fiber_product(_find_map(doc, args[0], args[3]), _find_map(doc, args[1], args[3]))
    else:
        raise InputError("usage: fiber <R> <S> [over <T>]")
    return {"fiber": fiber_entry(fp)}


def _find_gluing(doc, X, Y, Z):
    for g in doc.decls(GlueDecl):
        if (g.X, g.Y, g.Z) == (X, Y, Z):
            return g.name, doc.objects[g.name]
    alpha = beta = None
    for s in doc.decls(ImmersionDecl):
        if s.source == Z and s.target == X and alpha is None:
            alpha = doc.objects[s.name]
        if s.source == Z and s.target == Y and beta is None:
            beta = doc.objects[s.name]
    if alpha is None or beta is None:
        raise InputError(f"no immersions {Z} -> {X} and {Z} -> {Y} are defined")
    return f"{X}+{Y}", (doc.objects[X], doc.objects[Y], doc.objects[Z], alpha, beta)


def glued_entry(name, G):
    sing = {e.chart: e for e in singularity_report(G).entries}
    charts = []
    for c in G.charts:
        e = fiber_entry(c.fiber)
        e["name"] = c.name
        e["singular"] = sing[c.name].singular
        if sing[c.name].note:
            e["note"] = sing[c.name].note
        charts.append(e)
    nr = noetherian_report(G)
    return {
        "gluing": name,
        "charts": charts,
        "noetherian": {"verdict": nr.verdict, "finite_type": nr.finite_type},
        "has_singular_point": singularity_report(G).has_singular_point,
    }


def cmd_glue(doc, args, opts):
    if len(args) != 4 or args[2] != "along":
        raise InputError("usage: glue <X> <Y> along <Z>")
    name, cfg = _find_gluing(doc, args[0], args[1], args[3])
    return glued_entry(name, glue(*cfg))


def cmd_resolve(doc, args, opts):
    if len(args) != 1:
        raise InputError("usage: resolve <ring|module> --steps N")
    decl = doc.find(args[0])
    if isinstance(decl, ModuleDecl):
        M = doc.objects[args[0]]
    elif isinstance(decl, RingDecl):
        M = ModulePresentation.residue_field(doc.objects[args[0]])
    else:
        raise InputError(f"no ring or module named {args[0]!r}")
    steps = opts["steps"]
    res = minimal_resolution(M, steps)
    return {
        "module": args[0],
        "over": str(M.over),
        "steps": steps,
        "betti": list(res.betti_table(steps).betti),
        "complete": res.complete,
        "differentials": [[[str(p) for p in col] for col in d] for d in res.differentials],
    }


# ---------------------------------------------------------------- verify


class _Checks:
    def __init__(self):
        self.items = []

    def add(self, check, subject, passed, detail=""):
        self.items.append({"check": check, "subject": subject, "passed": bool(passed), "detail": detail})


def _verify_gluing(chk, name, cfg, opts):
    X, Y, Z, alpha, beta = cfg
    verdict = assess_configuration(alpha, beta)
    try:
        G = glue(*cfg)
    except NonSurjectiveMap as exc:
        ok = verdict.verdict == "not-noetherian-warning"
        chk.add("noetherian-gluing", name, ok, f"refused: {exc}")
        return
    except TrivialGluing as exc:
        iso = any(f.is_isomorphism() for spec in (alpha, beta) for _, f in spec.pairing.values())
        chk.add("nontrivial-gluing", name, iso, f"refused: {exc}")
        return
    chk.add("noetherian-gluing", name, noetherian_report(G).verdict == "noetherian", noetherian_report(G).verdict)
    n_max, N, D = opts["truncation"], opts["poincare_n"], opts["degree_bound"]
    for c in G.charts:
        fp, P = c.fiber, c.presentation
        subject = f"{name}/{c.name}"
        if P is None:
            continue
        d_formula = max(krull_dim(fp.R), krull_dim(fp.S))
        chk.add("union-dim", subject, krull_dim(P) == d_formula, f"dim {krull_dim(P)} vs formula {d_formula}")
        if fp.provenance == "over-residue-field":
            e, e_sum = edim(P), edim(fp.R) + edim(fp.S)
            chk.add("union-edim", subject, e == e_sum, f"edim {e} vs {e_sum}")
            dp, formula = depth(P), min(depth(fp.R), depth(fp.S), 1)
            chk.add("depth-formula", subject, dp == formula, f"depth {dp} vs formula {formula}")
            levels = verify_fibercomplete(fp, n_max)
            chk.add("fiber-truncations", subject, all(l.ok for l in levels),
                    "dims " + ",".join(f"{l.fiber_dimension}/{l.pair_dimension}" for l in levels))
        else:
            dp, bound = depth(P), min(depth(fp.R), depth(fp.S), depth(fp.T) + 1)
            chk.add("depth-bound", subject, dp >= bound, f"depth {dp} >= {bound}")
            I, J = list(fp.R.ideal_gens), list(fp.S.ideal_gens)
            ok = intersection_agrees(I, J, list(P.ideal_gens), P.ambient_vars, P.field, D)
            chk.add("intersection-oracle", subject, ok, f"degree bound {D}")
        rep = check_betti_inequality(fp)
        chk.add("betti-inequality", subject, rep.holds and rep.edim_holds,
                f"{rep.beta1_fiber} >= {rep.beta0_x}*{rep.beta1_y_of_z}+{rep.beta1_x}; "
                f"edim {rep.edim_fiber} >= {rep.beta1_y_of_z}+{rep.edim_x}")
    chk.add("pushout-commutes", name, pushout_commutes(G, n_max))
    stalk = stalk_dimension_identity(G, n_max)
    chk.add("stalk-sequence", name, all(a == b for _, _, a, b in stalk))
    sr = singularity_report(G)
    chk.add("singular-point", name, sr.has_singular_point,
            ", ".join(f"{e.chart}: edim {e.edim} dim {e.dim}" for e in sr.entries))
    chk.add("symmetry", name, check_symmetry(*cfg, N=N))


def cmd_verify(doc, args, opts):
    if args:
        raise InputError("usage: verify")
    chk = _Checks()
    N = opts["poincare_n"]
    for g in doc.decls(GlueDecl):
        _verify_gluing(chk, g.name, doc.objects[g.name], opts)
    for r in doc.decls(RingDecl):
        R = doc.objects[r.name]
        rep = check_syzygy_recursion(ModulePresentation.residue_field(R), N)
        chk.add("syzygy-recursion", r.name, rep.holds, f"{list(rep.lhs)} vs {list(rep.rhs)}")
        P = poincare_residue_field(R, N).coefficients
        chk.add("beta1-edim", r.name, P[1] == edim(R), f"beta1 {P[1]} edim {edim(R)}")
    for m in doc.decls(ModuleDecl):
        rep = check_syzygy_recursion(doc.objects[m.name], N)
        chk.add("syzygy-recursion", m.name, rep.holds, f"{list(rep.lhs)} vs {list(rep.rhs)}")
    for s in doc.decls(MapDecl):
        f = doc.objects[s.name]
        if not f.is_surjective:
            continue
        R, Rp = f.source, f.target
        lhs = poincare_residue_field(R, N)
        rhs = series_product(poincare_residue_field(Rp, N), poincare_series(ModulePresentation.cyclic(R, f.kernel()), N))
        chk.add("poincare-domination", s.name, check_domination(lhs, rhs),
                f"{list(lhs.coefficients)} >= {list(rhs.coefficients)}")
        chk.add("poincare-upper-bound", s.name, check_domination(rhs, lhs),
                f"{list(rhs.coefficients)} >= {list(lhs.coefficients)}")
    failed = sum(not c["passed"] for c in chk.items)
    return {"checks": chk.items, "passed": len(chk.items) - failed, "failed": failed}


HANDLERS = {"info": cmd_info, "fiber": cmd_fiber, "glue": cmd_glue, "resolve": cmd_resolve, "verify": cmd_verify}


# ---------------------------------------------------------------- output


def render(value, indent=0):
    """Deterministic indented key-value text."""
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, list) and not any(isinstance(x, (dict, list)) for x in v):
                lines.append(f"{pad}{k}: [{', '.join(_scalar(x) for x in v)}]")
            elif isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(render(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    return lines


def _scalar(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if v == [] or v == {}:
        return "[]"
    return str(v)


def render_verify(report):
    lines = []
    for c in report["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        detail = f"  ({c['detail']})" if c["detail"] else ""
        lines.append(f"{status} {c['check']} {c['subject']}{detail}")
    lines.append(f"{report['passed']} passed, {report['failed']} failed")
    return lines


def build_parser():
    p = argparse.ArgumentParser(prog="formalglue", description="Gluing of formal schemes along closed immersions.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("session", help="session document")
    p.add_argument("args", nargs="*", help="command arguments (names from the session)")
    p.add_argument("--degree-bound", type=int, default=None)
    p.add_argument("--poincare-n", type=int, default=None)
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--field", default=None, help="QQ or a prime field such as GF(7) or F7")
    p.add_argument("--machine-output", default=None, metavar="PATH")
    return p


def run(text, command, args=(), degree_bound=None, poincare_n=None, truncation=None, steps=None, field=None):
    """Parse a session and run one command; returns (report, exit_code)."""
    doc = with_field(text, field) if field else parse_session(text)
    opts = dict(doc.options)
    for key, val in (("degree_bound", degree_bound), ("poincare_n", poincare_n), ("truncation", truncation)):
        if val is not None:
            if val < 1:
                raise InputError(f"--{key.replace('_', '-')} must be positive")
            opts[key] = val
    opts["steps"] = steps if steps is not None else opts["poincare_n"]
    report = HANDLERS[command](doc, list(args), opts)
    report = {"command": command, "arguments": list(args), "field": doc.field, "options": opts, "result": report}
    code = 1 if command == "verify" and report["result"]["failed"] else 0
    return report, code


def main(argv=None):
    ns = build_parser().parse_intermixed_args(argv)
    try:
        with open(ns.session, encoding="utf-8") as fh:
            text = fh.read()
        report, code = run(text, ns.command, ns.args, ns.degree_bound, ns.poincare_n, ns.truncation, ns.steps, ns.field)
    except (FormalGlueError, InputError, OSError) as exc:
        print(f"error: {ns.command}: {exc}", file=sys.stderr)
        return 2
    if ns.command == "verify":
        lines = render_verify(report["result"])
    else:
        lines = render(report["result"])
    print("\n".join(lines))
    if ns.machine_output:
        payload = dict(report, schema_version=SCHEMA_VERSION, exit_code=code)
        with open(ns.machine_output, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
