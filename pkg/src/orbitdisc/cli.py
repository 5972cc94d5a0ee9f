"""Command-line front end.

Every subcommand prints machine-readable lines prefixed with RESULT:
carrying key=value pairs, and exits 0 on success or verified, 1 on a
check that ran but came out false, 2 on a usage error, and 3 when the
computation was refused (a size cap was exceeded or an operator had no
rational spectral decomposition).  All randomness flows from --seed, so
identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import sys

from .actions import (
    CATALOG_CASES,
    InvalidAction,
    NotPolar,
    build_case,
    cartan_data,
    discriminant_irreducible,
)
from .discriminant import (
    discriminant_charcoeff,
    discriminant_minors,
    orbit_dim,
    verify_roots,
)
from .equivariant import (
    NoComponentFound,
    cert_from_text,
    cert_to_text,
    check_phi_astar_zero,
    kostant_report,
    sos_search,
)
from .exactlin import NonRationalSpectrum
from .polyring import CapExceeded, poly_to_text

_PARAMETRIC = ("sym_real", "sym_real_traceless", "sym_complex")


def _result(**kv) -> None:
    parts = " ".join(f"{k}={v}" for k, v in kv.items())
    print(f"RESULT: {parts}")


def _load_action(args):
    return build_case(args.case, getattr(args, "n", None))


def _cmd_catalog(args) -> int:
    for case in CATALOG_CASES:
        if case in _PARAMETRIC:
            example = build_case(case, 2)
            _result(case=case, parametric="true", example_n=2,
                    d=example.d, p=example.p,
                    polar="true" if example.polar else "false")
        else:
            action = build_case(case)
            _result(case=case, parametric="false",
                    d=action.d, p=action.p,
                    polar="true" if action.polar else "false")
    return 0


def _cmd_discriminant(args) -> int:
    action = _load_action(args)
    if args.method == "minors":
        delta = discriminant_minors(action, seed=args.seed, cap=args.cap)
    else:
        delta = discriminant_charcoeff(action, seed=args.seed)
    m = orbit_dim(action, args.seed)
    text = poly_to_text(delta, action.var_names)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    _result(case=action.name, method=args.method, orbit_dim=m,
            degree=2 * m, terms=len(delta.terms),
            out=args.out or "-")
    if not args.out:
        sys.stdout.write(text)
    return 0


def _cmd_verify_roots(args) -> int:
    action = _load_action(args)
    c, _, _ = verify_roots(action, seed=args.seed)
    ok = c is not None and c > 0
    _result(case=action.name, constant=c if ok else "none",
            verified="true" if ok else "false")
    return 0 if ok else 1


def _cmd_sos(args) -> int:
    action = _load_action(args)
    try:
        cert = sos_search(action, seed=args.seed, cap=args.cap)
    except NoComponentFound:
        _result(case=action.name, found="false")
        return 1
    text = cert_to_text(cert, action.var_names)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    _result(case=action.name, squares=cert.num_squares,
            constant=cert.constant, component_dim=cert.component_dim,
            verified="true" if cert.verified else "false",
            out=args.out or "-")
    if not args.out:
        sys.stdout.write(text)
    return 0 if cert.verified else 1


def _cmd_verify_cert(args) -> int:
    action = _load_action(args)
    with open(args.cert) as fh:
        cert = cert_from_text(fh.read())
    from .equivariant import verify_certificate
    delta = discriminant_charcoeff(action, seed=args.seed)
    ok = verify_certificate(cert, delta)
    _result(case=action.name, squares=cert.num_squares,
            constant=cert.constant, verified="true" if ok else "false")
    return 0 if ok else 1


def _cmd_phi_astar(args) -> int:
    action = _load_action(args)
    ok = check_phi_astar_zero(action, cap=args.cap)
    _result(case=action.name, zero="true" if ok else "false")
    return 0 if ok else 1


def _cmd_kostant(args) -> int:
    action = _load_action(args)
    rep = kostant_report(action, cap=args.cap)
    ok = rep["normalized"] and rep["max_eigenvalue"] == rep["rank"]
    _result(case=action.name, rank=rep["rank"],
            max_eigenvalue=rep["max_eigenvalue"],
            top_dim=rep["top_dim"], ker_a_dim=rep["ker_a_dim"],
            equal="true" if ok else "false")
    return 0 if ok else 1


def _cmd_oracle_compare(args) -> int:
    action = _load_action(args)
    dm = discriminant_minors(action, seed=args.seed, cap=args.cap)
    dc = discriminant_charcoeff(action, seed=args.seed)
    equal = (dm - dc).is_zero()
    _result(case=action.name, compare="EQUAL" if equal else "UNEQUAL")
    return 0 if equal else 1


def _cmd_irreducible(args) -> int:
    action = _load_action(args)
    cd = cartan_data(action)
    ok = discriminant_irreducible(cd)
    _result(case=action.name, diagram=cd.diagram,
            irreducible="true" if ok else "false")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitdisc",
        description="Exact squared-orbit-volume discriminants and "
                    "few-square certificates for the built-in catalog "
                    "of orthogonal linear actions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, case=True, n=True):
        p.add_argument("--seed", type=int, default=0,
                       help="seed for all randomized choices (default 0)")
        p.add_argument("--cap", type=int, default=100000,
                       help="size cap on wedge-space dimensions")
        if case:
            p.add_argument("--case", required=True, choices=CATALOG_CASES)
        if n:
            p.add_argument("--n", type=int, default=None,
                           help="matrix size for the parametric cases")

    p = sub.add_parser("catalog", help="list the built-in cases")
    common(p, case=False, n=False)
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("discriminant",
                       help="compute the squared-volume polynomial")
    common(p)
    p.add_argument("--method", choices=("minors", "charpoly"),
                   default="charpoly")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_discriminant)

    p = sub.add_parser("verify-roots",
                       help="compare the restricted discriminant with the "
                            "squared product of restricted roots")
    common(p)
    p.set_defaults(func=_cmd_verify_roots)

    p = sub.add_parser("sos", help="search for a few-square certificate")
    common(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sos)

    p = sub.add_parser("verify-cert", help="re-verify a certificate file")
    common(p)
    p.add_argument("--cert", required=True)
    p.set_defaults(func=_cmd_verify_cert)

    p = sub.add_parser("phi-astar",
                       help="check that the minor map kills the image of "
                            "the bracket-contraction adjoint")
    common(p)
    p.set_defaults(func=_cmd_phi_astar)

    p = sub.add_parser("kostant",
                       help="maximal normalized Casimir eigenvalue on the "
                            "top wedge power")
    common(p)
    p.set_defaults(func=_cmd_kostant)

    p = sub.add_parser("oracle-compare",
                       help="compare the two discriminant routes")
    common(p)
    p.set_defaults(func=_cmd_oracle_compare)

    p = sub.add_parser("irreducible",
                       help="irreducibility of the discriminant from the "
                            "restricted root diagram")
    common(p)
    p.set_defaults(func=_cmd_irreducible)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, InvalidAction, NotPolar, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, NonRationalSpectrum) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
