"""Command line entry point: ``subposets <group> <command> ...``.

Exit codes: 0 success, 1 property violation, 2 usage or parse error,
3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import bounds, family, la, lemmas, poset, turan

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _frac(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _family_json(fam: family.SetFamily) -> dict:
    return {"n": fam.n, "size": len(fam), "members": fam.as_sets()}


def _catalog(size: int) -> list[str]:
    names = [f"chain:{size}", "butterfly", "diamond", "nposet"]
    if size >= 2:
        names.append(f"fork:{size - 1}")
    if size >= 4 and size % 2 == 0:
        names.append(f"crown:{size}")
    names += [f"krs:{r},{size - r}" for r in range(1, size)]
    names += [f"kfork:{k},{size - k}" for k in range(1, size)]
    for k in range(3, size + 1):
        for s in range(1, size - k + 3):
            t = size - k + 2 - s
            if t >= 1:
                names.append(f"baton:{k},{s},{t}")
    m = size.bit_length() - 1
    if size == 1 << m and m <= 4:
        names.append(f"boolean:{m}")
    return names


def identify(p: poset.Poset) -> list[str]:
    """Named posets isomorphic to ``p``."""
    hits = []
    for name in _catalog(p.size):
        q = poset.build_poset(name)
        if poset.is_isomorphic(p, q):
            hits.append(name)
    return hits


def _poset_summary(p: poset.Poset) -> dict:
    return {
        "size": p.size,
        "height": poset.height(p),
        "relations": p.num_relations,
        "covers": [f"{a}<{b}" for a, b in p.covers()],
        "up_down_tree": poset.is_up_down_tree(p),
        "isomorphic_to": identify(p) if p.size <= 16 else [],
    }


# -- handlers: each returns (inputs, outputs, exit_code, text) ---------------


def cmd_poset_show(a):
    if a.covers:
        with open(a.covers) as fh:
            p = poset.parse_covers(fh.read())
        src = {"covers": a.covers}
    else:
        if not a.spec:
            raise UsageError("give a poset spec or --covers PATH")
        p = poset.build_poset(a.spec)
        src = {"spec": a.spec}
    out = _poset_summary(p)
    text = [f"elements: {out['size']}", f"height:   {out['height']}",
            "covers:   " + (" ".join(out["covers"]) or "(none)")]
    if out["up_down_tree"]:
        text.append("up-down tree: yes")
    if out["isomorphic_to"]:
        text.append("isomorphic to: " + ", ".join(out["isomorphic_to"]))
    return src, out, EXIT_OK, "\n".join(text)


def cmd_poset_contains(a):
    host, pat = poset.build_poset(a.host), poset.build_poset(a.pattern)
    f = poset.contains_subposet(host, pat)
    out = {"contains": f is not None,
           "embedding": {str(k): v for k, v in sorted(f.items())} if f is not None else None}
    text = "no" if f is None else "yes\n" + " ".join(f"{u}->{h}" for u, h in sorted(f.items()))
    return {"host": a.host, "pattern": a.pattern}, out, EXIT_OK, text


def cmd_la_exact(a):
    h = poset.build_poset(a.poset)
    res = la.la_exact(a.n, h, max_nodes=a.max_nodes, max_seconds=a.max_seconds,
                      symmetry=a.symmetry)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(family.format_family(res.witness))
    out = {"value": res.value, "status": res.status, "nodes": res.nodes,
           "witness": _family_json(res.witness)}
    if a.timing:
        out["elapsed"] = res.elapsed
    code = EXIT_OK if res.exact else EXIT_BUDGET
    text = f"La({a.n}, {a.poset}) {'=' if res.exact else '>='} {res.value}  [{res.status}, {res.nodes} nodes]"
    inputs = {"n": a.n, "poset": a.poset, "max_nodes": a.max_nodes,
              "max_seconds": a.max_seconds, "symmetry": a.symmetry}
    return inputs, out, code, text


def cmd_la_middle(a):
    h = poset.build_poset(a.poset)
    m = la.max_hfree_middle_levels(a.n, h)
    fam = la.construct_middle_levels(a.n, m) if m else family.SetFamily(a.n, ())
    out = {"m": m, "size": len(fam),
           "levels": list(la.middle_level_range(a.n, m)) if m else []}
    return {"n": a.n, "poset": a.poset}, out, EXIT_OK, f"m={m}, {len(fam)} sets"


def cmd_family_stats(a):
    fam = family.read_family(a.family)
    out = {"n": fam.n, "size": len(fam), "lubell_mass": _frac(family.lubell_mass(fam)),
           "moments": {}}
    for k in range(1, a.k + 1):
        out["moments"][str(k)] = _frac(family.chain_moment(fam, k))
    lines = [f"|F| = {len(fam)}", f"E(X) = {family.lubell_mass(fam)}"]
    lines += [f"E C(X,{k}) = {Fraction(int(v['num']), int(v['den']))}"
              for k, v in out["moments"].items()]
    if a.samples:
        if a.seed is None:
            raise UsageError("--samples needs an explicit --seed")
        st = family.sample_chain_stats(fam, a.k, a.samples, a.seed, workers=a.threads)
        out["sampled"] = {"k": st.k, "estimate": st.estimate, "stderr": st.stderr,
                          "samples": st.samples}
        lines.append(f"sampled E C(X,{a.k}) = {st.estimate:.6f} +- {st.stderr:.6f}")
    return {"family": a.family, "k": a.k, "samples": a.samples}, out, EXIT_OK, "\n".join(lines)


def cmd_family_contains(a):
    fam = family.read_family(a.family)
    f = family.contains_pattern(fam, poset.build_poset(a.poset))
    out = {"contains": f is not None,
           "embedding": None if f is None else
           {str(u): [i + 1 for i in range(fam.n) if m >> i & 1] for u, m in sorted(f.items())}}
    return {"family": a.family, "poset": a.poset}, out, EXIT_OK, "yes" if f else "no"


def cmd_family_trim(a):
    fam = family.read_family(a.family)
    kept = family.trim_middle_band(fam)
    return ({"family": a.family}, _family_json(kept), EXIT_OK,
            family.format_family(kept).rstrip())


def _report_text(r: bounds.BoundReport) -> str:
    lines = [f"{r.bound}: La {r.relation} {r.main_term} + {r.correction_term}"
             f"  (ratio to central binomial {r.ratio_to_central:.6f})",
             f"dropped: {r.dropped_terms}"]
    if r.constant is not None:
        lines.append(f"leading constant: {r.constant!r}")
    lines += [f"note: {x}" for x in r.notes]
    return "\n".join(lines)


def cmd_bounds(a):
    kind = a.bound
    inputs = {k: v for k, v in vars(a).items()
              if k not in ("func", "json", "group", "bound", "timing", "threads") and v is not None}
    if kind == "thm1":
        r = bounds.thm1_upper(a.n, a.k, a.s, a.t)
        return inputs, r.to_json(), EXIT_OK, _report_text(r)
    if kind == "dk":
        lo, hi = bounds.dk_bounds(a.n, a.k, a.r)
        return (inputs, {"lower": lo.to_json(), "upper": hi.to_json()}, EXIT_OK,
                _report_text(lo) + "\n" + _report_text(hi))
    if kind == "eq4":
        r = bounds.eq4_lower(a.n, a.k, a.s, a.t)
        return inputs, r.to_json(), EXIT_OK, _report_text(r)
    if kind == "tree":
        r = bounds.tree_upper(a.n, a.t)
        return inputs, r.to_json(), EXIT_OK, _report_text(r)
    if kind == "crown":
        r = bounds.crown_bounds(a.n, a.length)
        return inputs, r.to_json(), EXIT_OK, _report_text(r)
    if kind == "pg":
        r = bounds.pg_upper(a.n, poset.parse_graph(a.graph))
        return inputs, r.to_json(), EXIT_OK, _report_text(r)
    if kind == "lemma1":
        c = bounds.lemma1_tail(a.n)
        out = {"n": c.n, "cutoff": c.cutoff, "tail": str(c.tail),
               "threshold": _frac(c.threshold), "holds": c.holds}
        code = EXIT_OK if c.holds else EXIT_VIOLATION
        return inputs, out, code, f"tail={c.tail} < 2^n/n^2: {'holds' if c.holds else 'FAILS'}"
    if kind == "stirling":
        approx = bounds.central_binomial_approx(a.n)
        rel = bounds.central_binomial_relerr(a.n)
        out = {"n": a.n, "approx": approx, "exact": str(bounds.central_binomial(a.n)),
               "relative_error": rel}
        return inputs, out, EXIT_OK, f"approx={approx!r} relerr={rel:.3e}"
    if kind == "middle":
        v = bounds.middle_sum(a.n, a.j)
        return inputs, {"value": str(v)}, EXIT_OK, str(v)
    if kind == "pi":
        e = bounds.pi_known(a.spec)
        return inputs, e.to_json(), EXIT_OK, f"pi({a.spec}) = {e.to_json()['value']} [{e.source}]"
    raise UsageError(kind)


def cmd_turan(a):
    g = poset.parse_graph(a.graph)
    inputs = {"graph": a.graph}
    if a.turan_cmd == "chi":
        chi = turan.chromatic_number(g)
        return inputs, {"chi": chi}, EXIT_OK, str(chi)
    inputs["n"] = a.n
    if a.turan_cmd == "ess":
        e = turan.ess_value(a.n, g)
        out = {"value": e.value, "chi": e.chi, "note": e.note}
        return inputs, out, EXIT_OK, f"{e.value!r}" + (f"  ({e.note})" if e.note else "")
    res = turan.turan_exact(a.n, g, max_nodes=a.max_nodes, max_seconds=a.max_seconds)
    out = res.to_json()
    if a.timing:
        out["elapsed"] = res.elapsed
    code = EXIT_OK if res.status == "exact" else EXIT_BUDGET
    return inputs, out, code, f"t({a.n}, G) {'=' if code == 0 else '>='} {res.value}"


def cmd_verify_lemmas(a):
    suites = [lemmas.run_fkg_suite(a.seed, a.trials), lemmas.run_variance_suite(a.seed, a.trials)]
    suites += [lemmas.run_lemma3_suite(a.seed, a.trials, k, r) for k, r in lemmas.LEMMA3_PAIRS]
    bad = sum(s.violations for s in suites)
    out = {"suites": [s.to_json() for s in suites], "violations": bad}
    text = "\n".join(f"{s.name}: {s.trials} trials, {s.violations} violations" for s in suites)
    return ({"seed": a.seed, "trials": a.trials}, out,
            EXIT_VIOLATION if bad else EXIT_OK, text)


def cmd_verify_chains(a):
    fam = family.read_family(a.family)
    exact = family.chain_moment(fam, a.k)
    st = family.sample_chain_stats(fam, a.k, a.samples, a.seed, workers=a.threads)
    ok = abs(st.estimate - float(exact)) <= 4 * st.stderr + 1e-12
    out = {"exact": _frac(exact), "estimate": st.estimate, "stderr": st.stderr,
           "samples": st.samples, "within_4_stderr": ok}
    return ({"family": a.family, "k": a.k, "samples": a.samples, "seed": a.seed}, out,
            EXIT_OK if ok else EXIT_VIOLATION,
            f"exact={exact} estimate={st.estimate:.6f} stderr={st.stderr:.6f} ok={ok}")


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subposets", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--timing", action="store_true", help="include wall-clock fields")
    common.add_argument("--threads", type=int, default=1, help="worker cap")
    groups = p.add_subparsers(dest="group", required=True)

    g = groups.add_parser("poset").add_subparsers(dest="poset_cmd", required=True)
    s = g.add_parser("show", parents=[common])
    s.add_argument("spec", nargs="?")
    s.add_argument("--covers", help="cover-relation file (one a<b per line)")
    s.set_defaults(func=cmd_poset_show)
    s = g.add_parser("contains", parents=[common])
    s.add_argument("host")
    s.add_argument("pattern")
    s.set_defaults(func=cmd_poset_contains)

    g = groups.add_parser("la").add_subparsers(dest="la_cmd", required=True)
    s = g.add_parser("exact", parents=[common])
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--poset", required=True)
    s.add_argument("--max-nodes", type=int)
    s.add_argument("--max-seconds", type=float)
    s.add_argument("--symmetry", action="store_true", help="complement symmetry (self-dual H)")
    s.add_argument("--out", help="write the witness family to this path")
    s.set_defaults(func=cmd_la_exact)
    s = g.add_parser("middle", parents=[common])
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--poset", required=True)
    s.set_defaults(func=cmd_la_middle)

    g = groups.add_parser("family").add_subparsers(dest="family_cmd", required=True)
    s = g.add_parser("stats", parents=[common])
    s.add_argument("--family", required=True)
    s.add_argument("-k", type=int, default=2)
    s.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_family_stats)
    s = g.add_parser("contains", parents=[common])
    s.add_argument("--family", required=True)
    s.add_argument("--poset", required=True)
    s.set_defaults(func=cmd_family_contains)
    s = g.add_parser("trim", parents=[common])
    s.add_argument("--family", required=True)
    s.set_defaults(func=cmd_family_trim)

    g = groups.add_parser("bounds").add_subparsers(dest="bound", required=True)
    for name, opts in [
        ("thm1", "nkst"), ("dk", "nkr"), ("eq4", "nkst"), ("tree", "nt"),
        ("lemma1", "n"), ("stirling", "n"), ("middle", "nj"),
    ]:
        s = g.add_parser(name, parents=[common])
        for o in opts:
            s.add_argument(f"-{o}", type=int, required=True)
        s.set_defaults(func=cmd_bounds)
    s = g.add_parser("crown", parents=[common])
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--length", type=int, required=True, help="crown size 2k")
    s.set_defaults(func=cmd_bounds)
    s = g.add_parser("pg", parents=[common])
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_bounds)
    s = g.add_parser("pi", parents=[common])
    s.add_argument("spec")
    s.set_defaults(func=cmd_bounds)

    g = groups.add_parser("turan").add_subparsers(dest="turan_cmd", required=True)
    for name in ("exact", "ess", "chi"):
        s = g.add_parser(name, parents=[common])
        if name != "chi":
            s.add_argument("-n", type=int, required=True)
        s.add_argument("--graph", required=True)
        if name == "exact":
            s.add_argument("--max-nodes", type=int)
            s.add_argument("--max-seconds", type=float)
        s.set_defaults(func=cmd_turan)

    g = groups.add_parser("verify").add_subparsers(dest="verify_cmd", required=True)
    s = g.add_parser("lemmas", parents=[common])
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--trials", type=int, default=1000)
    s.set_defaults(func=cmd_verify_lemmas)
    s = g.add_parser("chains", parents=[common])
    s.add_argument("--family", required=True)
    s.add_argument("-k", type=int, default=2)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_verify_chains)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        inputs, outputs, code, text = args.func(args)
    except (ValueError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        report = {"command": argv, "inputs": inputs, "outputs": outputs,
                  "seed": getattr(args, "seed", None), "exit_code": code}
        if args.timing:
            report["elapsed"] = time.perf_counter() - start
        print(json.dumps(report, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
