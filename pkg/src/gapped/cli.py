"""Command-line front end.

Exit codes: 0 success, 1 domain error (validation, not witnessed, failed
check), 2 input or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .contact_model import (
    SHModelClass,
    build_cosphere_model,
    contact_spectral_invariant,
    model_barcode,
    spectral_axiom_report,
)
from .gapped import (
    GapError,
    GappedModule,
    NotWitnessed,
    enumerate_restrictions,
    gapped_dual,
    gapped_spectral_invariant,
    restrict,
    translate,
    verify_interleaving_certificate,
)
from .io import DocumentError, dumps, fit_certificate, load_document
from .persistence import (
    Barcode,
    PersistenceModule,
    ValidationError,
    barcode,
    dual_module,
    interleaving_distance,
    min_appearance,
    shift_module,
    spectral_invariant_pm,
)
from .matching import bottleneck_distance
from .render import render_barcode
from .scalars import ScalarParseError, format_scalar, parse_scalar


class InputError(Exception):
    pass


class DomainError(Exception):
    pass


def _load(path, *kinds):
    env = load_document(path)
    if kinds and env.kind not in kinds:
        raise InputError(f"{path}: expected {' or '.join(kinds)}, got {env.kind}")
    return env.payload


def _class(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",")) if text.strip() else ()
    except ValueError:
        raise InputError(f"bad class vector {text!r}; use comma-separated integers") from None


def _as_barcode(obj) -> Barcode:
    if isinstance(obj, Barcode):
        return obj
    if isinstance(obj, PersistenceModule):
        return barcode(obj)
    raise InputError("expected a barcode or persistence_module document")


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args):
    env = load_document(args.file)
    obj = env.payload
    if isinstance(obj, PersistenceModule):
        detail = f"{len(obj.indices)} indices"
    elif isinstance(obj, GappedModule):
        detail = f"{len(obj.indices)} indices, gap {format_scalar(obj.gap)}, {len(obj.maps)} maps"
    elif isinstance(obj, Barcode):
        detail = f"{len(obj)} bars"
    else:
        detail = "well formed"
    print(f"ok {env.kind}: {detail}")


def cmd_barcode(args):
    obj = _load(args.file, "persistence_module", "barcode", "gapped_module")
    if isinstance(obj, GappedModule):
        step = parse_scalar(args.step) if args.step else obj.gap
        for seq in enumerate_restrictions(obj, step):
            B = barcode(restrict(obj, seq))
            if args.format == "text":
                sys.stdout.write(f"# restriction {seq}\n")
            sys.stdout.write(render_barcode(B, args.format))
        return
    sys.stdout.write(render_barcode(_as_barcode(obj), args.format))


def cmd_bottleneck(args):
    B1 = _as_barcode(_load(args.first))
    B2 = _as_barcode(_load(args.second))
    print(format_scalar(bottleneck_distance(B1, B2)))


def cmd_interleave(args):
    first, second = _load(args.first), _load(args.second)
    if args.cert:
        if not (isinstance(first, GappedModule) and isinstance(second, GappedModule)):
            raise InputError("certificate verification needs two gapped_module documents")
        env = load_document(args.cert)
        if env.kind != "certificate":
            raise InputError(f"{args.cert}: expected certificate, got {env.kind}")
        cert, delta = env.payload
        cert = fit_certificate(cert, first, second, delta)
        check = verify_interleaving_certificate(first, second, delta, cert)
        if check:
            print(f"certificate ok: {format_scalar(delta)}-interleaving on {cert.restriction}")
            return
        where = "" if check.index is None else f" at {check.family}[{check.index}]"
        raise DomainError(f"certificate fails{where}: {check.message}")
    if not (isinstance(first, PersistenceModule) and isinstance(second, PersistenceModule)):
        raise InputError("interleaving distance needs two persistence_module documents (or --cert)")
    print(format_scalar(interleaving_distance(first, second)))


def cmd_restrict(args):
    G = _load(args.file, "gapped_module")
    step = parse_scalar(args.step) if args.step else G.gap
    seqs = enumerate_restrictions(G, step, normalized_only=not args.all)
    if args.emit is not None:
        if not 0 <= args.emit < len(seqs):
            raise InputError(f"--emit must be in [0, {len(seqs)})")
        sys.stdout.write(dumps(restrict(G, seqs[args.emit])))
        return
    for seq in seqs:
        tag = "normalized" if seq.normalized else "reindexed"
        print(f"{tag} {seq}")


def cmd_spectral(args):
    M = _load(args.file, "persistence_module")
    a = _class(args.cls)
    t = min_appearance(M, a)
    c = spectral_invariant_pm(M, a)
    if c is None:
        raise DomainError("class is not in the image of any sample")
    print(f"min_appearance {format_scalar(t)}")
    print(f"spectral {format_scalar(c)}")


def cmd_gapped_spectral(args):
    G = _load(args.file, "gapped_module")
    print(format_scalar(gapped_spectral_invariant(G, _class(args.cls))))


def cmd_dual(args):
    obj = _load(args.file, "persistence_module", "gapped_module")
    D = dual_module(obj) if isinstance(obj, PersistenceModule) else gapped_dual(obj)
    _emit(dumps(D), args.output)


def cmd_translate(args):
    obj = _load(args.file, "persistence_module", "gapped_module")
    u = parse_scalar(args.by)
    out = shift_module(obj, -u) if isinstance(obj, PersistenceModule) else translate(obj, u)
    _emit(dumps(out), args.output)


def cmd_contact(args):
    if args.request:
        req = _load(args.request, "cosphere_request")
        n, mmax, degree = req.n, req.m_max, req.degree
    else:
        if args.n is None or args.mmax is None or args.degree is None:
            raise InputError("contact cosphere needs --n, --mmax and --degree (or --request)")
        n, mmax, degree = args.n, args.mmax, args.degree
    try:
        model = build_cosphere_model(n, mmax, degree)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.json:
        _emit(dumps(model.module), args.output)
        return
    slopes = " ".join(format_scalar(t) for t in model.module.indices)
    print(f"cosphere n={n} m_max={mmax} degree={degree}")
    print(f"slopes {slopes}")
    print(f"dims {' '.join(str(d) for d in model.module.dims)}")
    print(f"class {model.generator if model.generator is not None else 'none'}")
    sys.stdout.write(render_barcode(model_barcode(model), "text"))
    if model.generator is not None:
        try:
            c = contact_spectral_invariant(model, 0, model.generator)
            print(f"c(0, {model.generator}) = {format_scalar(c)}")
        except NotWitnessed:
            print(f"c(0, {model.generator}) not witnessed in window")


def cmd_axioms(args):
    hs = [parse_scalar(h) for h in args.h.split(",")]
    thetas = [SHModelClass.parse(t) for t in args.classes.split(",")]
    u = SHModelClass("u", 1)
    rep = spectral_axiom_report(args.n, args.mmax, hs, thetas, [(0, 0, u, u)])
    for line in rep.lines():
        print(line)
    if not rep.ok:
        raise DomainError("axiom check failed")


def cmd_suite(args):
    from .suite import run_suite

    seed = args.seed
    env = os.environ.get("GAPPED_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise InputError(f"GAPPED_SEED must be an integer, got {env!r}") from None
    lines, ok = run_suite(seed, args.cases)
    sys.stdout.write("".join(line + "\n" for line in lines))
    if not ok:
        raise DomainError("property suite failed")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gapped", description="Gapped persistence modules and contact models.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="load and validate a document")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("barcode", help="barcode of a module (per restriction for gapped modules)")
    s.add_argument("file")
    s.add_argument("--format", choices=["text", "svg"], default="text")
    s.add_argument("--step", help="restriction step for gapped modules (default: the gap)")
    s.set_defaults(func=cmd_barcode)

    s = sub.add_parser("bottleneck", help="bottleneck distance of two barcodes or modules")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_bottleneck)

    s = sub.add_parser("interleave", help="interleaving distance, or verify a certificate")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--cert", help="certificate document for two gapped modules")
    s.set_defaults(func=cmd_interleave)

    s = sub.add_parser("restrict", help="list restrictions of a gapped module")
    s.add_argument("file")
    s.add_argument("--step")
    s.add_argument("--all", action="store_true", help="include reindexed restrictions")
    s.add_argument("--emit", type=int, help="print the k-th restriction as a persistence_module")
    s.set_defaults(func=cmd_restrict)

    s = sub.add_parser("spectral", help="spectral invariant of a class in a persistence module")
    s.add_argument("file")
    s.add_argument("--class", dest="cls", required=True)
    s.set_defaults(func=cmd_spectral)

    s = sub.add_parser("gapped-spectral", help="spectral invariant of a class in a gapped module")
    s.add_argument("file")
    s.add_argument("--class", dest="cls", required=True)
    s.set_defaults(func=cmd_gapped_spectral)

    s = sub.add_parser("dual", help="dual module")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("translate", help="move every index by +u")
    s.add_argument("file")
    s.add_argument("--by", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("contact", help="contact models")
    csub = s.add_subparsers(dest="model", required=True)
    c = csub.add_parser("cosphere", help="unit cosphere bundle of S^n")
    c.add_argument("--n", type=int)
    c.add_argument("--mmax", type=int)
    c.add_argument("--degree", type=int)
    c.add_argument("--request", help="cosphere_request document")
    c.add_argument("--json", action="store_true", help="emit the model as a gapped_module document")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_contact)

    s = sub.add_parser("axioms", help="spectral invariant axioms on the cosphere model")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--mmax", type=int, default=4)
    s.add_argument("--h", default="-2,0,1/2,3", help="comma-separated constants")
    s.add_argument("--classes", default="e,a,u,au,u^2,au^2")
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("suite", help="seeded randomized property suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=50)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except (InputError, DocumentError, ScalarParseError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValidationError, NotWitnessed, GapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
