"""Command line entry point: `isg <group> <command> [options]`.

Exit status is 0 on success, 1 when a verification fails (or a capacity or
internal error stops it) and 2 for usage errors.
"""

import argparse
import json
import os
import random
import sys

from .errors import CapacityError, InternalError, ParameterError

DEFAULT_SEED = 20240601


def _env_int(name, default):
    v = os.environ.get(name)
    if v is None or v == "":
        return default
    try:
        return int(v)
    except ValueError:
        raise ParameterError("%s must be an integer, got %r" % (name, v)) from None


def _emit(args, text):
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _seed(args):
    return args.seed if args.seed is not None else _env_int("ISG_SEED", DEFAULT_SEED)


# --- ff ----------------------------------------------------------------------

def cmd_ff_selftest(args):
    from .ff import make_fp2, sqrt
    rng = random.Random(_seed(args))
    F = make_fp2(args.p)
    failures = 0
    for _ in range(args.trials):
        a, b, c = F.random(rng), F.random(rng), F.random(rng)
        if (a + b) * c != a * c + b * c or a * (b * c) != (a * b) * c:
            failures += 1
        if a and a * a.inverse() != F.one:
            failures += 1
        r = sqrt(a * a)
        if r is None or r * r != a * a:
            failures += 1
        if a ** (args.p * args.p) != a:
            failures += 1
    print("ff selftest p=%d: %d trials, %d failures" % (args.p, args.trials, failures))
    return 0 if failures == 0 else 1


# --- ssgraph -------------------------------------------------------------------

def cmd_ss_build(args):
    from .ssgraph import build_graph
    g = build_graph(args.p, args.ell)
    if args.format == "json":
        _emit(args, g.to_json())
    elif args.format == "dot":
        _emit(args, g.to_dot())
    elif args.format == "csv":
        rows = ["src,dst,mult"] + ["%d,%d,%d" % (i, k, m) for i, row in enumerate(g.adjacency)
                                   for k, m in enumerate(row) if m]
        _emit(args, "\n".join(rows))
    else:
        lines = ["G(%d,%d): %d vertices" % (g.p, g.ell, g.h)]
        for j, row in zip(g.vertices, g.adjacency):
            lines.append("%s: %s" % (j, " ".join(str(x) for x in row)))
        _emit(args, "\n".join(lines))
    return 0


def cmd_ss_spectra(args):
    from .ssgraph import build_graph, spectral_report
    g = build_graph(args.p, args.ell)
    r = spectral_report(g)
    ok = r.trivial_mult == 1 and r.ramanujan(args.ell) and not r.has_minus_trivial
    out = {"p": args.p, "ell": args.ell, "eigenvalues": list(r.eigenvalues),
           "trivial_multiplicity": r.trivial_mult, "max_nontrivial": r.max_nontrivial_abs,
           "bound": 2 * args.ell ** 0.5, "bipartite": r.has_minus_trivial, "ramanujan": ok}
    _emit(args, json.dumps(out, indent=1))
    return 0 if ok else 1


def cmd_ss_sspoly(args):
    from .ssgraph import ss_polynomial
    _emit(args, "S_%d(x) = %s" % (args.p, ss_polynomial(args.p).text()))
    return 0


def cmd_ss_autos(args):
    from .ssgraph import build_graph, essential_automorphisms, frobenius_involution
    g = build_graph(args.p, args.ell)
    r = essential_automorphisms(g)
    fr = tuple(frobenius_involution(g))
    expected = set(r.elements) == {tuple(range(g.h)), fr}
    _emit(args, json.dumps({"p": args.p, "ell": args.ell, "order": r.order,
                            "elements": [list(e) for e in r.elements],
                            "frobenius": list(fr), "is_id_and_frobenius": expected}, indent=1))
    return 0


# --- quat ----------------------------------------------------------------------

def cmd_q_classes(args):
    from .quat import bp_inf, class_set, left_order, unit_count
    _, O = bp_inf(args.p)
    reps = class_set(O, args.ell)
    out = []
    for i, I in enumerate(reps):
        L = left_order(I)
        out.append({"index": i, "norm": str(I.norm()), "basis": I.to_strings(),
                    "left_order": L.to_strings(), "units": unit_count(L)})
    if args.format == "json":
        _emit(args, json.dumps({"p": args.p, "h": len(reps), "classes": out}, indent=1))
    else:
        lines = ["p=%d: %d classes" % (args.p, len(reps))]
        lines += ["%d: Nm=%s units=%d basis=%s" % (c["index"], c["norm"], c["units"], c["basis"]) for c in out]
        _emit(args, "\n".join(lines))
    return 0


def cmd_q_brandt(args):
    from .quat import brandt
    Bs = brandt(args.p, args.nmax)
    if args.format == "json":
        _emit(args, json.dumps({"p": args.p, "matrices": {B.n: [[str(x) for x in r] for r in B.rows]
                                                           for B in Bs}}, indent=1))
    else:
        lines = []
        for B in Bs:
            lines.append("B(%d):" % B.n)
            lines += [" ".join(str(x) for x in r) for r in B.as_int()]
        _emit(args, "\n".join(lines))
    return 0


def cmd_q_theta(args):
    from .quat import deuring, theta_series
    D = deuring(args.p)
    if not 0 <= args.cls < D.h:
        raise ParameterError("class index must be in [0, %d)" % D.h)
    N = args.N if args.N is not None else args.p
    if args.hom is None:
        th = theta_series(D.left_orders[args.cls], 1, N)
    else:
        if not 0 <= args.hom < D.h:
            raise ParameterError("class index must be in [0, %d)" % D.h)
        L, nu = D.hom(args.cls, args.hom)
        th = theta_series(L, nu, N)
    _emit(args, th.csv())
    return 0


def cmd_q_rigidity(args):
    from .quat import theta_rigidity
    r = theta_rigidity(args.p, args.N)
    lines = ["p=%d N=%d classes=%d pairing=%s" % (r.p, r.N, r.h, r.involution)]
    lines.append("paired thetas equal" if r.paired_equal else "PAIRED THETAS DIFFER")
    if r.violations:
        lines.append("equal thetas for non-paired classes: %s" % r.violations)
    else:
        lines.append("all non-paired thetas distinct")
    lines.append("2-power coefficients alone: %s" % (
        "separate all non-paired classes" if not r.power_violations
        else "fail to separate %s" % r.power_violations))
    _emit(args, "\n".join(lines))
    return 0 if r.ok else 1


# --- latgen --------------------------------------------------------------------

def _parse_order_spec(text):
    parts = dict(kv.split("=", 1) for kv in text.split(","))
    try:
        return int(parts["p"]), int(parts["class"])
    except (KeyError, ValueError):
        raise ParameterError("--order expects p=<prime>,class=<index>") from None


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise ParameterError("expected a comma separated list of integers") from None


def cmd_l_check(args):
    from .latgen import ZLattice, e8, ell_powers, generated_by_norms, order_profile
    if args.order:
        p, cls = _parse_order_spec(args.order)
        cap = args.cap or 1024
        rep = order_profile(p, cls, args.ellpow, cap)
    else:
        if args.lattice == "e8":
            L = e8()
        elif args.lattice.startswith("z"):
            n = int(args.lattice[1:])
            L = ZLattice([[int(i == j) for j in range(n)] for i in range(n)], args.lattice)
        else:
            raise ParameterError("unknown lattice %r (use e8 or zN)" % args.lattice)
        if args.norms:
            norms = _int_list(args.norms)
            cap = args.cap or max(norms)
        else:
            cap = args.cap or 1024
            norms = ell_powers(args.ellpow, cap)
        rep = generated_by_norms(L, norms, cap)
    d = rep.to_dict()
    if not rep.generated:
        d["note"] = "not generated below the cap; inconclusive, larger caps may succeed"
    _emit(args, json.dumps(d, indent=1))
    return 0 if rep.generated else 1


def cmd_l_witness(args):
    from .latgen import local_witness_2, local_witness_p
    if args.kind == "2":
        d = local_witness_2(args.t)
        print("t=%d det=%d" % (args.t, d))
        return 0 if d == 1 else 1
    x, y, z = _int_list(args.xyz)
    d = local_witness_p(x, y, z)
    print("(x,y,z)=(%d,%d,%d) det=%d" % (x, y, z, d))
    return 0 if d == 2 * z else 1


# --- proto ---------------------------------------------------------------------

def cmd_p_hash(args):
    from .proto import bits_from_hex, cgl_hash
    bits = bits_from_hex(args.hex) if args.hex is not None else (args.bits or "")
    print(cgl_hash(args.p, bits))
    return 0


def cmd_p_sidh(args):
    from .proto import sidh_direct, sidh_exchange, sidh_setup
    seed = _seed(args)
    s = sidh_setup(args.la, args.ra, args.lb, args.rb, seed)
    rng = random.Random(seed)

    def secret(ell, r):
        while True:
            m, n = rng.randrange(ell ** r), rng.randrange(ell ** r)
            if m % ell or n % ell:
                return m, n

    while True:
        a, b = secret(s.la, s.ra), secret(s.lb, s.rb)
        try:
            ja, jb = sidh_exchange(s, a, b)
            break
        except ParameterError:
            continue
    jd = sidh_direct(s, a, b)
    print("p = %d = %d^%d * %d^%d * %d - 1" % (s.p, s.la, s.ra, s.lb, s.rb, s.f))
    print("E: y^2 = x^3 + (%s)x + (%s)" % (s.E.a, s.E.b))
    print("Alice j = %s" % ja)
    print("Bob   j = %s" % jb)
    print("direct j = %s" % jd)
    ok = ja == jb == jd
    print("shared secret agrees" if ok else "MISMATCH")
    return 0 if ok else 1


# --- accept --------------------------------------------------------------------

def cmd_accept(args):
    from .acceptance import CRITERIA, run_all
    ids = [c.cid for c in CRITERIA]
    if args.only:
        ids = [x.strip().upper() for x in args.only.split(",")]
        known = {c.cid for c in CRITERIA}
        if any(i not in known for i in ids):
            raise ParameterError("unknown criterion in %r" % args.only)
    threads = args.threads if args.threads is not None else _env_int("ISG_THREADS", 1)
    results = run_all(ids, threads)
    for r in results:
        print(r.line())
    n_ok = sum(r.ok for r in results)
    print("%d/%d criteria passed" % (n_ok, len(results)))
    return 0 if n_ok == len(results) else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="isg", description="Supersingular isogeny graph toolkit")
    groups = ap.add_subparsers(dest="group", required=True)

    def sub(parent, name, fn, **kw):
        p = parent.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="write output to this file instead of stdout")
        return p

    ff = groups.add_parser("ff").add_subparsers(dest="cmd", required=True)
    p = sub(ff, "selftest", cmd_ff_selftest)
    p.add_argument("--p", type=int, default=101)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int)

    ss = groups.add_parser("ssgraph").add_subparsers(dest="cmd", required=True)
    p = sub(ss, "build", cmd_ss_build)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--format", choices=["json", "dot", "csv", "text"], default="json")
    p = sub(ss, "spectra", cmd_ss_spectra)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ell", type=int, default=2)
    p = sub(ss, "sspoly", cmd_ss_sspoly)
    p.add_argument("--p", type=int, required=True)
    p = sub(ss, "autos", cmd_ss_autos)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ell", type=int, default=2)

    q = groups.add_parser("quat").add_subparsers(dest="cmd", required=True)
    p = sub(q, "classes", cmd_q_classes)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p = sub(q, "brandt", cmd_q_brandt)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p = sub(q, "theta", cmd_q_theta)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--class", dest="cls", type=int, default=0)
    p.add_argument("--hom", type=int, help="second class: theta of Hom(E_class, E_hom)")
    p.add_argument("--N", type=int)
    p = sub(q, "rigidity", cmd_q_rigidity)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--N", type=int)

    lg = groups.add_parser("latgen").add_subparsers(dest="cmd", required=True)
    p = sub(lg, "check", cmd_l_check)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--lattice", help="e8 or zN (identity form of rank N)")
    which.add_argument("--order", help="p=<prime>,class=<index>")
    p.add_argument("--norms", help="comma separated norm set")
    p.add_argument("--ellpow", type=int, default=2, help="use the powers of this prime as norm set")
    p.add_argument("--cap", type=int)
    p = sub(lg, "witness", cmd_l_witness)
    p.add_argument("--kind", choices=["2", "p"], required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--xyz", default="0,0,1")

    pr = groups.add_parser("proto").add_subparsers(dest="cmd", required=True)
    p = sub(pr, "hash", cmd_p_hash)
    p.add_argument("--p", type=int, default=101)
    msg = p.add_mutually_exclusive_group()
    msg.add_argument("--hex")
    msg.add_argument("--bits")
    p = sub(pr, "sidh-demo", cmd_p_sidh)
    p.add_argument("--la", type=int, default=2)
    p.add_argument("--ra", type=int, default=4)
    p.add_argument("--lb", type=int, default=3)
    p.add_argument("--rb", type=int, default=3)
    p.add_argument("--seed", type=int)

    p = groups.add_parser("accept")
    p.set_defaults(fn=cmd_accept)
    p.add_argument("--only", help="comma separated criterion ids, e.g. AC01,AC05")
    p.add_argument("--threads", type=int)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParameterError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (CapacityError, InternalError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
