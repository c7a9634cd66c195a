"""Command line front end.

Subcommands
-----------
- ``ncd cohomology analyze FILE``: cocycle audit, class, kernel, descent.
- ``ncd algebra star|invol|check-theta-comm``: products, adjoints, the
  commutation defect against the class prediction.
- ``ncd module deform-projection``: deform a projection and verify it.
- ``ncd spectral verify``: truncated operator checks at a cutoff.
- ``ncd split rational``: clock-shift splitting at a rational angle.

Exit codes: 0 on success, 1 when a verification fails its tolerance,
2 on malformed input.  ``--output json`` emits a single sorted JSON object
with ``"schema": 1``; the default tolerance comes from NCD_TOLERANCE.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction

import numpy as np

from .coefficients import ExactComplex
from .cohomology import (Bicharacter, CohomologyClass, Multiplier,
                         antisymmetrize, class_order, is_coboundary,
                         kernel_of, nondegenerate_part, verify_cocycle)
from .groups import CirclePoint, FgAbelianGroup
from .module_deform import (InvariantProjection, check_invariant_projection,
                            deform_projection, mat_involution, mat_residual,
                            mat_star)
from .rational_split import (ClockShiftModel, equivariance_audit,
                             refined_split, simplicity_report)
from .spectral_harness import (TruncatedTriple, averaged_trace_diagnostic,
                               chirality_report, dirac_commutator_norm,
                               order_one_residual, order_zero_residual,
                               weyl_counting)
from .twisted_algebra import (AlgebraElement, StarContext, commutation_defect,
                              involution, star)

SCHEMA = 1

CONVENTIONS = {
    "product-phase": "mode pair (x, y) multiplies with e(-twist(x, y))",
    "involution-phase": "the adjoint coefficient at -x carries e(-twist(-x, -x))",
    "pairing-orientation": "the class pairs as twist(x, y) - twist(y, x)",
    "right-action-phase": "right blocks carry the transposed twist, minus sign",
    "projection-deform-phase": "deformed entry (j, k) scales by e(-twist(row weight, weight difference))",
    "metric-phase": "the metric term at mode w-v scales by e(+twist(v + frame weight, w - v))",
    "endo-transport-phase": "transported entries scale by e(twist(row weight, mode) - twist(shifted mode, column weight))",
    "epsilon-inversion": "antisymmetrisation charges each inverted pair with the pairing of the later leg against the earlier",
    "chirality-branch": "chirality is normalised so the first interior spinor diagonal entry is nonnegative",
    "clock-shift-word": "the basis mode (x1, x2) maps to e(angle x1 x2) clock^x1 shift^x2",
    "glnz-pairing": "a matrix intertwines the products when the source cocycle is the pullback of the target along the inverse transpose",
}


def default_tolerance() -> float:
    env = os.environ.get("NCD_TOLERANCE")
    if env is None:
        return 1e-10
    try:
        return float(env)
    except ValueError:
        raise ValueError(f"NCD_TOLERANCE is not a number: {env!r}")


def parse_theta(spec: str, group: FgAbelianGroup) -> Bicharacter:
    """Deformation angles from the command line.

    Accepts a JSON file path, a bare angle placed at the (1, 2) entry, or
    one or more ``value@i,j`` items (1-based indices) separated by ';'.
    Values are ``p/q`` fractions (exact) or decimals (tracked as floats).
    """
    if spec.endswith(".json") or os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        b = Bicharacter.from_json_dict(data)
        if b.group != group:
            raise ValueError("angle matrix group does not match the elements")
        return b
    n = group.ngens
    z = CirclePoint.zero()
    mat = [[z] * n for _ in range(n)]
    for item in spec.split(";"):
        item = item.strip()
        if not item:
            continue
        if "@" in item:
            val, at = item.split("@", 1)
            try:
                i_s, j_s = at.split(",")
                i, j = int(i_s) - 1, int(j_s) - 1
            except ValueError:
                raise ValueError(f"bad angle position {at!r}; expected i,j")
        else:
            val, i, j = item, 0, 1
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"angle position out of range for {n} generators")
        val = val.strip()
        if "/" in val:
            num, den = val.split("/", 1)
            point = CirclePoint.exact(Fraction(int(num), int(den)))
        else:
            try:
                point = CirclePoint.exact(Fraction(int(val)))
            except ValueError:
                point = CirclePoint.real(float(val))
        mat[i][j] = point
    return Bicharacter(group, mat)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_element(path: str) -> AlgebraElement:
    return AlgebraElement.from_json_dict(_load_json(path))


def _render(payload: dict, ok: bool, args) -> int:
    mode = getattr(args, "output", "text") or "text"
    payload = dict(payload)
    payload["schema"] = SCHEMA
    payload["ok"] = ok
    payload["conventions"] = CONVENTIONS
    if mode == "json":
        print(json.dumps(payload, sort_keys=True, default=_json_default))
    else:
        _print_text(payload)
    return 0 if ok else 1


def _json_default(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    raise TypeError(f"not JSON serialisable: {type(obj)!r}")


def _print_text(payload: dict, indent: str = ""):
    for key in sorted(payload):
        if key == "conventions" and not indent:
            continue
        value = payload[key]
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _print_text(value, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{indent}{key}:")
            for entry in value:
                _print_text(entry, indent + "  ")
                print(f"{indent}  -")
        else:
            print(f"{indent}{key}: {value}")
    if not indent:
        print("PASS" if payload.get("ok") else "FAIL")


# ---------------------------------------------------------------------------
# Subcommand drivers.


def cmd_cohomology_analyze(args) -> int:
    tol = args.tolerance
    data = _load_json(args.file)
    bichar = Bicharacter.from_json_dict(data)
    mult = Multiplier(bichar)
    rng = random.Random(args.seed)
    residual = verify_cocycle(mult, rng=rng)
    cls = antisymmetrize(mult)
    report = {
        "command": "cohomology analyze",
        "group": bichar.group.to_json_dict(),
        "exact": bichar.is_exact,
        "alternating": bichar.is_alternating(0.0 if bichar.is_exact else tol),
        "cocycle_residual": residual,
        "coboundary": is_coboundary(mult, 0.0 if bichar.is_exact else tol),
        "class_pairing": cls.to_json_dict(),
    }
    if cls.is_exact:
        ker = kernel_of(cls)
        nd = nondegenerate_part(cls)
        report["kernel_generators"] = [list(x.coords)
                                       for x in ker.minimal_generators()
                                       if not x.is_zero()]
        report["quotient_group"] = nd.quotient_group.to_json_dict()
        report["descended_pairing"] = nd.descended.to_json_dict()
        report["class_order"] = class_order(cls)
        report["nondegenerate_quotient"] = True
    else:
        report["kernel_undecidable"] = True
    return _render(report, residual <= tol, args)


def _context_for(args, group: FgAbelianGroup) -> StarContext:
    return StarContext(parse_theta(args.theta, group))


def cmd_algebra_star(args) -> int:
    a = _load_element(args.a)
    b = _load_element(args.b)
    if a.group != b.group:
        raise ValueError("the two elements live on different groups")
    ctx = _context_for(args, a.group)
    out = star(a, b, ctx)
    report = {
        "command": "algebra star",
        "support_size": len(out.coeffs),
        "exact": out.is_exact,
        "result": out.to_json_dict(),
    }
    return _render(report, True, args)


def cmd_algebra_invol(args) -> int:
    a = _load_element(args.a)
    ctx = _context_for(args, a.group)
    out = involution(a, ctx)
    twice = involution(out, ctx)
    residual = (twice - a).max_abs()
    report = {
        "command": "algebra invol",
        "support_size": len(out.coeffs),
        "exact": out.is_exact,
        "involutive_residual": residual,
        "result": out.to_json_dict(),
    }
    return _render(report, residual <= args.tolerance, args)


def cmd_algebra_check_comm(args) -> int:
    a = _load_element(args.a)
    b = _load_element(args.b)
    if a.group != b.group:
        raise ValueError("the two elements live on different groups")
    theta = parse_theta(args.theta, a.group)
    ctx = StarContext(theta)
    cls = antisymmetrize(theta)
    defect = commutation_defect(a, b, ctx, cls)
    report = {
        "command": "algebra check-theta-comm",
        "commutation_defect": defect,
        "tolerance": args.tolerance,
    }
    return _render(report, defect <= args.tolerance, args)


def cmd_module_deform(args) -> int:
    tol = args.tolerance
    proj = InvariantProjection.from_json_dict(_load_json(args.proj))
    group = proj.frame.group
    ctx = _context_for(args, group)
    base = check_invariant_projection(proj)
    deformed = deform_projection(proj, ctx)
    frame = deformed.frame
    sq = mat_star(frame, deformed.entries, deformed.entries, ctx)
    idem = mat_residual(sq, deformed.entries)
    adj = mat_residual(mat_involution(frame, deformed.entries, ctx),
                       deformed.entries)
    ok = bool(base["ok"]) and idem <= tol and adj <= tol
    report = {
        "command": "module deform-projection",
        "base": base,
        "deformed_idempotency_residual": idem,
        "deformed_selfadjoint_residual": adj,
        "tolerance": tol,
        "deformed": deformed.to_json_dict(),
    }
    return _render(report, ok, args)


def cmd_spectral_verify(args) -> int:
    tol = args.tolerance
    n = args.n
    group = FgAbelianGroup(n)
    theta = parse_theta(args.theta, group)
    ctx = StarContext(theta)
    cls = antisymmetrize(theta)
    triple = TruncatedTriple(n, args.cutoff)

    radius = max(1, args.max_support)
    probes = [c for c in triple.modes
              if 0 < sum(v * v for v in c) <= radius * radius]
    oz = oo = 0.0
    for xc in probes:
        a = AlgebraElement.generator(group, xc)
        for yc in probes:
            b = AlgebraElement.generator(group, yc)
            oz = max(oz, order_zero_residual(a, b, cls, ctx, triple))
            oo = max(oo, order_one_residual(a, b, cls, ctx, triple))

    comm_dev = 0.0
    for xc in probes:
        norm = dirac_commutator_norm(xc, ctx, triple)
        expected = 2.0 * math.pi * math.sqrt(sum(v * v for v in xc))
        comm_dev = max(comm_dev, abs(norm - expected))

    report = {
        "command": "spectral verify",
        "modes": triple.nmodes,
        "spinor_dimension": triple.s,
        "probe_radius": radius,
        "order_zero_residual": oz,
        "order_one_residual": oo,
        "dirac_commutator_deviation": comm_dev,
        "tolerance": tol,
    }
    ok = oz <= tol and oo <= tol and comm_dev <= max(tol, 1e-9)

    if n == 2:
        chi = chirality_report(ctx, cls, triple)
        chi_ok = all(chi[k] <= tol for k in (
            "transport_residual", "selfadjoint_residual", "unitarity_residual",
            "commutation_residual", "anticommutation_residual",
            "antisymmetrisation_residual"))
        report["chirality"] = {k: (v if not isinstance(v, complex) else
                                   [v.real, v.imag])
                               for k, v in chi.items()}
        ok = ok and chi_ok

    w = weyl_counting(n, args.cutoff)
    report["weyl"] = w
    ok = ok and abs(w["slope"] - w["expected"]) <= 0.05

    probe_shift = AlgebraElement.generator(group, (1,) + (0,) * (n - 1))
    diag = averaged_trace_diagnostic(probe_shift, ctx, triple)
    pure_shift_zero = all(s["partial_trace"] == [0.0, 0.0]
                          for s in diag["stages"])
    report["averaged_trace_pure_shift_zero"] = pure_shift_zero
    ok = ok and pure_shift_zero

    return _render(report, ok, args)


def cmd_split_rational(args) -> int:
    tol = args.tolerance
    if "@" in args.theta:
        raise ValueError("the splitting angle sits at the standard position; "
                         "pass a bare fraction p/q")
    if "/" in args.theta:
        num, den = args.theta.split("/", 1)
        p, q = int(num), int(den)
    else:
        p, q = int(args.theta), 1
    if q < 1:
        raise ValueError("the angle denominator must be positive")
    model = ClockShiftModel(q, p)
    ctx = model.star_context()
    cls = antisymmetrize(ctx.multiplier.bicharacter)
    a = _load_element(args.element)
    if a.group != ctx.group:
        raise ValueError("the element must live on the rank-two lattice")

    relation = model.relation_residual()
    closure = model.order_residual()
    morphism = model.morphism_residual()

    split = refined_split(a, cls)
    audit = equivariance_audit(split)
    recombine = (split.recombine() - a).max_abs()

    rng = random.Random(args.seed)
    sq = star(a, a, ctx)
    pointwise = 0.0
    for _ in range(args.samples):
        t = (rng.random(), rng.random())
        lhs = model.evaluate(sq, t)
        fib = model.evaluate(a, t)
        pointwise = max(pointwise, float(np.max(np.abs(lhs - fib @ fib))))

    report = {
        "command": "split rational",
        "modulus": q,
        "numerator": p % q if q > 1 else 0,
        "relation_residual": relation,
        "closure_residual": closure,
        "morphism_residual": morphism,
        "bucket_count": split.bucket_count,
        "audit": audit,
        "recombine_residual": recombine,
        "pointwise_residual": pointwise,
        "samples": args.samples,
        "seed": args.seed,
        "tolerance": tol,
    }
    try:
        nd = nondegenerate_part(cls)
        report["simplicity"] = simplicity_report(nd.representative)
        simple_ok = report["simplicity"]["consistent"]
    except ValueError as exc:
        report["simplicity_skipped"] = str(exc)
        simple_ok = True
    ok = (relation == 0.0 and closure == 0.0 and morphism <= 1e-12
          and audit["max_residual"] <= tol and recombine <= tol
          and pointwise <= max(tol, 1e-10) and simple_ok)
    return _render(report, ok, args)


# ---------------------------------------------------------------------------
# Parser wiring.


def _add_common(p: argparse.ArgumentParser, seed: bool = False):
    p.add_argument("--output", choices=["json", "text"], default="text",
                   help="report format")
    p.add_argument("--tolerance", type=float, default=None,
                   help="override the NCD_TOLERANCE default")
    if seed:
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomised probes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncd",
        description="Deformation toolkit for twisted torus algebras")
    sub = parser.add_subparsers(dest="domain", required=True)

    coh = sub.add_parser("cohomology", help="cocycle and class analysis")
    coh_sub = coh.add_subparsers(dest="action", required=True)
    an = coh_sub.add_parser("analyze", help="audit a cocycle file")
    an.add_argument("file", help="bicharacter JSON")
    _add_common(an, seed=True)
    an.set_defaults(func=cmd_cohomology_analyze)

    alg = sub.add_parser("algebra", help="twisted products")
    alg_sub = alg.add_subparsers(dest="action", required=True)
    st = alg_sub.add_parser("star", help="product of two element files")
    st.add_argument("a")
    st.add_argument("b")
    st.add_argument("--theta", required=True, help="deformation angles")
    _add_common(st)
    st.set_defaults(func=cmd_algebra_star)
    inv = alg_sub.add_parser("invol", help="adjoint of an element file")
    inv.add_argument("a")
    inv.add_argument("--theta", required=True)
    _add_common(inv)
    inv.set_defaults(func=cmd_algebra_invol)
    cc = alg_sub.add_parser("check-theta-comm",
                            help="commutation defect against the class")
    cc.add_argument("a")
    cc.add_argument("b")
    cc.add_argument("--theta", required=True)
    _add_common(cc)
    cc.set_defaults(func=cmd_algebra_check_comm)

    mod = sub.add_parser("module", help="projective module deformation")
    mod_sub = mod.add_subparsers(dest="action", required=True)
    dp = mod_sub.add_parser("deform-projection",
                            help="deform and verify a projection file")
    dp.add_argument("--proj", required=True, help="projection JSON")
    dp.add_argument("--theta", required=True)
    _add_common(dp)
    dp.set_defaults(func=cmd_module_deform)

    spec = sub.add_parser("spectral", help="truncated operator checks")
    spec_sub = spec.add_subparsers(dest="action", required=True)
    sv = spec_sub.add_parser("verify", help="run the residual suite")
    sv.add_argument("--n", type=int, default=2, help="torus dimension")
    sv.add_argument("--theta", required=True)
    sv.add_argument("--cutoff", type=float, default=8.0)
    sv.add_argument("--max-support", type=int, default=2,
                    help="probe generators up to this radius")
    sv.add_argument("--report", dest="output", choices=["json", "text"],
                    help="alias for --output")
    _add_common(sv)
    sv.set_defaults(func=cmd_spectral_verify)

    spl = sub.add_parser("split", help="rational splitting")
    spl_sub = spl.add_subparsers(dest="action", required=True)
    sr = spl_sub.add_parser("rational", help="clock-shift model checks")
    sr.add_argument("--theta", required=True, help="rational angle p/q")
    sr.add_argument("--element", required=True, help="element JSON")
    sr.add_argument("--samples", type=int, default=25)
    _add_common(sr, seed=True)
    sr.set_defaults(func=cmd_split_rational)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tolerance", None) is None:
        try:
            args.tolerance = default_tolerance()
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
