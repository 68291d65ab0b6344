"""Command-line front end: ``siegel-pullback <command> [flags]``.

Every command prints one JSON document (or CSV with ``--format csv`` where
offered).  Exact rationals are strings ``"num/den"``; numeric results carry an
error estimate.  Exit status: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import harmonic as hm
from . import lfunction as lf
from . import link_calculus as lc
from . import modular as md
from . import pullback as pb
from .cache import ENV_VAR, Cache

SCHEMA_VERSION = 1
DEFAULT_TRUNC = 8
DEFAULT_CUTOFF = 10_000

_LINK = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# flag parsing helpers


def parse_links(text: str) -> list[tuple]:
    """``"(1,2)(3,4)"`` -> ``[(1, 2), (3, 4)]``; labels that look like integers become ints."""
    pairs = _LINK.findall(text)
    if not pairs or _LINK.sub("", text).strip(" ,;"):
        raise UsageError(f"cannot parse links {text!r}; expected e.g. '(1,2)(3,4)'")
    return [tuple(int(x) if x.lstrip("-").isdigit() else x for x in p) for p in pairs]


def parse_complex(text: str) -> complex:
    """``"re"`` or ``"re,im"``."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def _cplx(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _load_poly(args) -> hm.HarmonicPolynomial:
    if args.poly:
        text = args.poly
        if text.startswith("@"):
            text = Path(text[1:]).read_text()
        try:
            return hm.HarmonicPolynomial.from_json(json.loads(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad --poly JSON: {exc}") from None
    if not args.preset:
        raise UsageError("give --poly or --preset")
    if args.d is None:
        raise UsageError("--preset needs --d")
    l = 1 if args.preset == "degree1" else 2
    shape = hm.SplitShape(args.p, args.q, args.d, args.l or l)
    if args.preset == "degree1":
        return hm.degree1_mixed(shape)
    if args.preset == "antisym2":
        return hm.antisymmetric_degree2(shape)
    return hm.symmetric_degree2(shape)


# ---------------------------------------------------------------------------
# commands; each returns (payload dict, exact flag) or a raw string for CSV


def cmd_expand(args, cache):
    links = parse_links(args.links)
    order = parse_links(args.order) if args.order else None
    e = lc.expand_operator(links, order)
    data = e.to_json()
    for row in data["terms"]:
        row["text"] = str(lc.coefficient_lookup(e, row["A"], row["E"]))
    return {"links": [list(x) for x in links], "expansion": data}, True


def cmd_harmonic_check(args, cache):
    P = _load_poly(args)
    out = {"input": P.to_json()}
    if args.project:
        res = hm.project_harmonic(P)
        out["projection"] = {"ok": res.ok, "poly": res.poly.to_json()}
        if not res.ok:
            raise hm.NotPluriharmonic("no non-zero pluri-harmonic projection exists")
        P = res.poly
    w = hm.check_pluriharmonic(P)
    out["pluriharmonic"] = w is None
    out["witness"] = None if w is None else {
        "block": w.block, "mu": w.mu, "nu": w.nu, "residual": w.residual_str(),
    }
    return out, True


def cmd_compute_q(args, cache):
    P = _load_poly(args)
    if args.project:
        res = hm.project_harmonic(P)
        if not res.ok:
            raise hm.NotPluriharmonic("no non-zero pluri-harmonic projection exists")
        P = res.poly
    ks = [int(x) for x in args.k.split(",")] if args.k else None
    Q = hm.compute_Q(P, validate=args.validate or ks is not None, ks=ks)
    return {"input": P.to_json(), "Q": Q.to_json()}, True


def cmd_qexp(args, cache):
    forms = md.qexp_basis(args.weight, args.trunc, cache)
    if args.format == "csv":
        lines = ["n," + ",".join(f.name for f in forms)]
        for n in range(args.trunc + 1):
            lines.append(f"{n}," + ",".join(str(f.form.coeffs[n]) for f in forms))
        return "\n".join(lines) + "\n"
    return {"weight": args.weight, "trunc": args.trunc, "forms": [f.to_json() for f in forms]}, True


def cmd_eisenstein2(args, cache):
    table = md.siegel_eisenstein2(args.weight, args.max_det, cache)
    if args.format == "csv":
        return table.to_csv()
    return {"weight": args.weight, "maxDet": args.max_det, "table": table.to_json()}, True


def cmd_pullback(args, cache):
    N = args.trunc
    F2 = md.siegel_eisenstein2(args.weight, N * N, cache)
    dq = pb.restrict_diagonal(F2, N)
    dec = pb.decompose_pullback(dq, args.weight, N, cache)
    out = dec.to_json()
    out["trunc"] = N
    if dec.residual_rank:
        _emit_partial(args, out)
        raise pb.PullbackError(f"inconsistent system; first failing (m,n) = {dec.first_failure}")
    if not dec.off_diagonal_zero:
        _emit_partial(args, out)
        raise pb.PullbackError("off-diagonal eigenform coefficients are not zero")
    return out, True


def cmd_conjecture(args, cache):
    grid = args.s or [complex(x) for x in (1, 2, 3, 4, 5)]
    rep = pb.normalized_c_check(args.lam, args.k, grid)
    return rep.to_json(), False


def _cusp(args, cache, N):
    forms = [f for f in md.qexp_basis(args.weight, N, cache) if f.tag == "cusp"]
    if not forms:
        raise md.ModularError(f"no cusp forms of weight {args.weight}")
    return forms[0]


def cmd_euler(args, cache):
    f = _cusp(args, cache, max(args.p, DEFAULT_TRUNC))
    sat = md.satake(f, args.p)
    ef = lf.euler_factor_standard([sat], 1, args.p)
    out = {
        "weight": args.weight,
        "p": args.p,
        "a_p": str(sat.a_p),
        "traceSquared": str(sat.trace_sq),
        "traceSign": sat.trace_sign,
        "alphaNumeric": _cplx(sat.alpha),
        "denominator": [str(c) for c in ef.denominator],
    }
    exact = True
    if args.s is not None:
        out["s"] = _cplx(args.s)
        out["value"] = _cplx(ef.value(args.s))
        exact = False
    return out, exact


def cmd_dcoeffs(args, cache):
    M = args.max
    need = M * M if args.check_hecke else M
    f = _cusp(args, cache, max(need * 3, DEFAULT_TRUNC))
    D = lf.dirichlet_from_L(f, M)
    rows = []
    for t in range(1, M + 1):
        row = {"t": t, "D": str(D[t])}
        if args.check_hecke:
            lam = md.hecke_doublecoset_eigenvalue(f, t).value
            row["doubleCoset"] = str(lam)
            row["agree"] = lam == D[t]
        rows.append(row)
    return {"weight": args.weight, "max": M, "coefficients": rows}, True


def cmd_gamma(args, cache):
    g = lf.gamma_pq(args.p, args.q)
    return {
        "p": args.p, "q": args.q,
        "coefficients": [str(c) for c in g],
        "degree": len(g) - 1,
        "text": lf.poly_str(g),
    }, True


def cmd_gamma_check(args, cache):
    pairs = [(p, q) for p in range(1, 9) for q in range(1, p + 1)] if args.all else [(args.p, args.q)]
    if not args.all and (args.p is None or args.q is None):
        raise UsageError("give --p and --q, or --all")
    rows = []
    for p, q in pairs:
        c = lf.gamma_pq_functional_check(p, q)
        rows.append({
            "p": p, "q": q, "ok": c.ok, "degree": c.degree, "degreeFormula": c.degree_formula,
            "residual": [str(x) for x in c.residual],
        })
    out = {"checks": rows, "ok": all(r["ok"] for r in rows)}
    if not out["ok"]:
        _emit_partial(args, out)
        raise lf.LFunctionError("functional equation residual is non-zero")
    return out, True


def cmd_poles(args, cache):
    t = lf.pole_tables(args.context, p=args.p, q=args.q, k=args.k, n=args.n)
    out = t.to_json()
    if args.lam is not None:
        out["parameters"]["lambda"] = args.lam
    return out, True


def cmd_lvalue(args, cache):
    f = _cusp(args, cache, args.cutoff)
    v = lf.lvalue_numeric(f, args.s, args.cutoff)
    return {
        "weight": args.weight, "s": _cplx(args.s), "cutoff": args.cutoff,
        "value": _cplx(v.value), "tailBound": v.tail_bound, "primesUsed": v.primes_used,
    }, False


def cmd_petersson(args, cache):
    f = _cusp(args, cache, args.trunc)
    val, err = md.petersson_norm_numeric(f, tol=args.tol)
    out = {"weight": args.weight, "trunc": args.trunc, "value": val, "errorEstimate": err}
    if args.weight == 12:
        out["gaussProductValue"] = md.petersson_norm_gauss(md.delta_product, 12)
    return out, False


def cmd_cache(args, cache):
    c = cache or Cache(args.cache_dir)
    if args.action == "list":
        rows = [
            {"key": e.key_hash, "operation": e.operation, "params": e.params, "version": e.version,
             "size": e.size, "created": e.created}
            for e in c.list()
        ]
        return {"directory": str(c.directory), "entries": rows}, True
    if args.action == "clear":
        return {"directory": str(c.directory), "removed": c.clear()}, True
    rows = c.verify()
    out = {"directory": str(c.directory), "entries": rows, "ok": all(r["ok"] for r in rows)}
    return out, True


# ---------------------------------------------------------------------------


def _emit_partial(args, payload):
    args._partial = payload


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siegel-pullback", description=__doc__.splitlines()[0])
    ap.add_argument("--cache-dir", default=None, help=f"cache directory (default: ${ENV_VAR} or ~/.cache/siegel_pullback)")
    ap.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")
        p.set_defaults(fn=fn)
        return p

    p = add("expand", cmd_expand, "expand a link operator applied to the kernel")
    p.add_argument("--links", required=True, help="e.g. '(1,2)(3,4)'")
    p.add_argument("--order", default=None, help="application order, same syntax as --links")

    for name, fn in (("harmonic-check", cmd_harmonic_check), ("compute-q", cmd_compute_q)):
        p = add(name, fn, "pluri-harmonic check" if name == "harmonic-check" else "compute Q for a harmonic polynomial")
        p.add_argument("--poly", default=None, help="polynomial JSON, or @path")
        p.add_argument("--preset", choices=("degree1", "antisym2", "sym2"), default=None)
        p.add_argument("--p", type=int, default=2)
        p.add_argument("--q", type=int, default=2)
        p.add_argument("--d", type=int, default=None)
        p.add_argument("--l", type=int, default=None)
        p.add_argument("--project", action="store_true", help="project onto pluri-harmonic polynomials first")
        if name == "compute-q":
            p.add_argument("--validate", action="store_true", help="check the vanishing of non-mixed terms")
            p.add_argument("--k", default=None, help="comma-separated weights to validate at")

    p = add("qexp", cmd_qexp, "Hecke eigenbasis q-expansions")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--trunc", type=int, default=DEFAULT_TRUNC)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("eisenstein2", cmd_eisenstein2, "degree-2 Eisenstein coefficients")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--max-det", type=int, default=16)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("pullback", cmd_pullback, "decompose the diagonal restriction over the eigenbasis")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--trunc", type=int, default=DEFAULT_TRUNC)

    p = add("conjecture61", cmd_conjecture, "c-integral quotients over an s grid (q = 1)")
    p.add_argument("--lambda", dest="lam", type=int, choices=(1, 2), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=parse_complex, nargs="+", default=None, help="grid points 're' or 're,im'")

    p = add("euler", cmd_euler, "standard Euler factor of the cusp eigenform")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=parse_complex, default=None)

    p = add("dcoeffs", cmd_dcoeffs, "Dirichlet coefficients of D(s, f) by formal division")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--max", type=int, default=DEFAULT_TRUNC)
    p.add_argument("--check-hecke", action="store_true", help="compare with double-coset eigenvalues")

    p = add("gamma", cmd_gamma, "gamma_{p,q} as a polynomial, lowest degree first")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)

    p = add("gamma-check", cmd_gamma_check, "functional equation of gamma_{p,q}")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--all", action="store_true", help="all 1 <= q <= p <= 8")

    p = add("poles", cmd_poles, "pole candidate tables")
    p.add_argument("--context", choices=("feit", "klingen63", "lambda64"), required=True)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, default=None)

    p = add("lvalue", cmd_lvalue, "standard L-value by the Euler product")
    p.add_argument("--weight", type=int, default=12)
    p.add_argument("--s", type=parse_complex, required=True)
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)

    p = add("petersson", cmd_petersson, "numeric Petersson norm of the cusp eigenform")
    p.add_argument("--weight", type=int, default=12)
    p.add_argument("--trunc", type=int, default=40)
    p.add_argument("--tol", type=float, default=1e-10)

    p = add("cache", cmd_cache, "cache administration")
    p.add_argument("action", choices=("list", "clear", "verify"))
    return ap


DOMAIN_ERRORS = (
    md.ModularError, lf.LFunctionError, pb.PullbackError, lc.LinkError,
    hm.NotPluriharmonic, hm.VanishingFailure, ValueError, OSError,
)


def _write(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._partial = None
    cache = None if args.no_cache else Cache(args.cache_dir)
    try:
        result = args.fn(args, cache)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"siegel-pullback: error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"siegel-pullback: {exc}", file=sys.stderr)
        if args._partial is not None:
            _write(args, json.dumps(args._partial, sort_keys=True, indent=2) + "\n")
        return 1
    if isinstance(result, str):
        _write(args, result)
        return 0
    payload, exact = result
    doc = {
        "schema": f"siegel-pullback/{args.command}/{SCHEMA_VERSION}",
        "command": args.command,
        "provenance": "exact" if exact else "numeric",
    }
    doc.update(payload)
    _write(args, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
