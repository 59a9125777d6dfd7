"""Batch command line front end: JSON in, JSON report out.

One subcommand per pipeline.  Exit codes: 0 on success, 1 on a domain error
(invariant violation, failed verification), 2 on an I/O or parse error.
Reports echo the parsed request, carry a schema marker, and are byte-stable
for a fixed request and seed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import jsonio
from .affine import AffineRoot, AffinisationSpec, Weight, enumerate_affine_roots, lars_contains
from .autnorm import (
    OperatorSpec,
    StandardizeError,
    mode_class,
    standardize,
    verify_certificate,
)
from .energy import Character, character_of, min_energy, theorem_b_pipeline
from .loopalg import apply_derivation, bracket, kappa_form, phi_hat, validate_element
from .rootdata import CartanVector, Functional, inner
from .sampling import random_loop_element, random_twisted_element
from .weyl import reflect_affine
from .affine import ExtCartanVector


class DomainError(Exception):
    pass


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise IOError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise IOError(f"malformed JSON in {path}: {exc}") from exc


def _require(obj, key, where):
    if key not in obj:
        raise IOError(f"missing field {key!r} in {where}")
    return obj[key]


def cmd_normalize(args):
    obj = _load(args.input)
    spec = OperatorSpec.from_json(obj)
    cert = standardize(spec)
    report = verify_certificate(spec, cert)
    out = {
        "schema": "v1",
        "request": {"command": "normalize", "input": args.input},
        "certificate": cert.to_json(),
        "verification": report.to_json(),
    }
    if not report.all_passed:
        return 1, out
    return 0, out


def cmd_roots(args):
    obj = _load(args.input)
    spec = AffinisationSpec.from_json(obj)
    roots = enumerate_affine_roots(spec.lars, spec.base, args.window)
    out = {
        "schema": "v1",
        "request": {"command": "roots", "input": args.input, "window": args.window},
        "spec": spec.to_json(),
        "count": len(roots),
        "roots": [r.to_json() for r in roots],
    }
    return 0, out


def cmd_map_roots(args):
    obj = _load(args.input)
    spec = OperatorSpec.from_json(_require(obj, "operator", "map-roots input"))
    cert = standardize(spec)
    n_phi, n_psi = cert.orders
    window = args.window if args.window else 4 * n_phi
    from .affine import lars_finite_parts

    table = []
    for a in lars_finite_parts(cert.lars, cert.base):
        residues = mode_class(cert, a)
        shift = inner(cert.mu, a.functional())
        for n in range(-window, window + 1):
            if n % n_phi not in residues:
                continue
            target = n_psi * (Fraction(n, n_phi) - shift)
            entry = {
                "root": a.to_json(),
                "mode": n,
                "image_mode": str(target),
                "integral": target.denominator == 1,
                "in_target": bool(
                    target.denominator == 1
                    and lars_contains(cert.lars, AffineRoot(a, int(target)), cert.base)
                ),
            }
            table.append(entry)
    ok = all(e["integral"] and e["in_target"] for e in table)
    out = {
        "schema": "v1",
        "request": {"command": "map-roots", "input": args.input, "window": window},
        "certificate": {"lars": cert.lars, "rank": cert.rank, "orders": list(cert.orders)},
        "map": table,
        "all_integral_and_contained": ok,
    }
    return (0 if ok else 1), out


def cmd_check_isom(args):
    obj = _load(args.input)
    spec = OperatorSpec.from_json(_require(obj, "operator", "check-isom input"))
    cert = standardize(spec)
    nu = Functional.from_json(obj["nu"]) if "nu" in obj else Functional(())
    src = cert.source_spec(nu)
    dst = cert.target_spec(nu)
    rng = random.Random(args.seed)
    checks = []
    ok_all = True
    for trial in range(args.count):
        a = random_twisted_element(rng, cert)
        b = random_twisted_element(rng, cert)
        fa = phi_hat(cert, src, dst, a)
        fb = phi_hat(cert, src, dst, b)
        validate_element(dst, fa)
        lhs = phi_hat(cert, src, dst, bracket(src, a, b))
        rhs = bracket(dst, fa, fb)
        good = lhs == rhs
        ok_all &= good
        checks.append({"pair": trial, "bracket_preserved": good})
    # Weyl coincidence on a window of matched reflections
    from .affine import lars_finite_parts

    weyl_ok = True
    basis = [ExtCartanVector(1, CartanVector(()), 0), ExtCartanVector(0, CartanVector(()), 1)]
    basis += [ExtCartanVector(0, CartanVector({j: 1}), 0) for j in range(1, cert.rank + 1)]
    n_phi, n_psi = cert.orders
    for a in lars_finite_parts(cert.lars, cert.base):
        shift = inner(cert.mu, a.functional())
        for m in mode_class(cert, a):
            for n in (m, m + n_phi, m - n_phi):
                t = n_psi * (Fraction(n, n_phi) - shift)
                if t.denominator != 1:
                    weyl_ok = False
                    continue
                for v in basis:
                    if reflect_affine(src, AffineRoot(a, n), v) != reflect_affine(
                        dst, AffineRoot(a, int(t)), v
                    ):
                        weyl_ok = False
    ok_all &= weyl_ok
    out = {
        "schema": "v1",
        "request": {
            "command": "check-isom",
            "input": args.input,
            "seed": args.seed,
            "count": args.count,
        },
        "certificate": {"lars": cert.lars, "rank": cert.rank, "orders": list(cert.orders)},
        "bracket_checks": checks,
        "weyl_reflections_coincide": weyl_ok,
        "passed": bool(ok_all),
    }
    return (0 if ok_all else 1), out


def cmd_bracket_check(args):
    obj = _load(args.input)
    spec = AffinisationSpec.from_json(obj)
    if not spec.is_standard():
        raise DomainError("bracket-check expects a standard spec; use check-isom for twists")
    rng = random.Random(args.seed)
    L = 4
    results = {"antisymmetry": 0, "jacobi": 0, "invariance": 0, "derivation_skew": 0}
    for _ in range(args.count):
        a = random_loop_element(rng, spec, L)
        b = random_loop_element(rng, spec, L)
        c = random_loop_element(rng, spec, L)
        ab = bracket(spec, a, b)
        if (ab + bracket(spec, b, a)).is_zero():
            results["antisymmetry"] += 1
        jac = (
            bracket(spec, a, bracket(spec, b, c))
            + bracket(spec, b, bracket(spec, c, a))
            + bracket(spec, c, ab)
        )
        if jac.is_zero():
            results["jacobi"] += 1
        if kappa_form(spec, ab, c) == kappa_form(spec, a, bracket(spec, b, c)):
            results["invariance"] += 1
        da = apply_derivation(spec, spec.slant_nu, a)
        db = apply_derivation(spec, spec.slant_nu, b)
        if kappa_form(spec, da, b) == -kappa_form(spec, a, db):
            results["derivation_skew"] += 1
    ok = all(v == args.count for v in results.values())
    out = {
        "schema": "v1",
        "request": {
            "command": "bracket-check",
            "input": args.input,
            "seed": args.seed,
            "count": args.count,
        },
        "spec": spec.to_json(),
        "passed_counts": results,
        "trials": args.count,
        "passed": ok,
    }
    return (0 if ok else 1), out


def cmd_min_energy(args):
    obj = _load(args.input)
    spec = AffinisationSpec.from_json(_require(obj, "spec", "min-energy input"))
    lam = Weight.from_json(_require(obj, "weight", "min-energy input"))
    if "chi" in obj:
        chi = Character.from_json(obj["chi"])
    else:
        nu_prime = Functional.from_json(obj.get("nu_prime", {"coords": {}}))
        chi = character_of(spec, spec.slant_nu, nu_prime)
    report = min_energy(spec, lam, chi, oracle_bound=args.bound, jobs=args.jobs)
    out = {
        "schema": "v1",
        "request": {"command": "min-energy", "input": args.input, "bound": args.bound},
        "spec": spec.to_json(),
        "weight": lam.to_json(),
        "chi": chi.to_json(),
        "report": report.to_json(),
    }
    return 0, out


def cmd_theorem_b(args):
    obj = _load(args.input)
    spec = OperatorSpec.from_json(_require(obj, "operator", "theorem-b input"))
    lam = Weight.from_json(_require(obj, "weight", "theorem-b input"))
    nu = Functional.from_json(obj.get("nu", {"coords": {}}))
    nu_prime = Functional.from_json(obj.get("nu_prime", {"coords": {}}))
    report, cert = theorem_b_pipeline(
        spec, lam, nu, nu_prime, oracle_bound=args.bound,
        require_integral=not args.allow_nonintegral,
    )
    out = {
        "schema": "v1",
        "request": {"command": "theorem-b", "input": args.input, "bound": args.bound},
        "certificate": {
            "lars": cert.lars,
            "rank": cert.rank,
            "orders": list(cert.orders),
            "mu": cert.mu.to_json(),
            "exponents": list(cert.exponents),
        },
        "report": report.to_json(),
    }
    return 0, out


COMMANDS = {
    "normalize": cmd_normalize,
    "roots": cmd_roots,
    "map-roots": cmd_map_roots,
    "check-isom": cmd_check_isom,
    "bracket-check": cmd_bracket_check,
    "min-energy": cmd_min_energy,
    "theorem-b": cmd_theorem_b,
}


def build_parser():
    p = argparse.ArgumentParser(prog="twistaff", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", required=True, help="path to the JSON request")
        sp.add_argument("--output", help="path for the JSON report (default: stdout)")
        sp.add_argument("--bound", type=int, default=10, help="lattice box bound for the oracle")
        sp.add_argument("--window", type=int, default=0, help="mode window for root listings")
        sp.add_argument("--seed", type=int, default=0, help="seed for pseudorandom checks")
        sp.add_argument("--count", type=int, default=20, help="number of pseudorandom trials")
        sp.add_argument("--jobs", type=int, default=1, help="parallel workers for orbit search")
        sp.add_argument(
            "--allow-nonintegral",
            action="store_true",
            help="compute the orbit infimum even for non-integral weights",
        )
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, out = COMMANDS[args.command](args)
    except (IOError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: missing or malformed field {exc} in the input", file=sys.stderr)
        return 2
    except (DomainError, StandardizeError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = jsonio.dump_report(out, args.output)
    if not args.output:
        sys.stdout.write(text)
    else:
        print(f"wrote {args.output}")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
