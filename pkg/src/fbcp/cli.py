"""Command-line frontend.

    fbcp [--json] [--truncate N] SUBCOMMAND ...

Exit status: 0 success, 1 domain error, 2 parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .classify import DEFAULT_TRUNCATE, compare, dossier
from .errors import FbcpError, ParseError
from .ext import fmt, to_json
from .specfile import GRAMMAR, parse_specfile

COLORS = {"Isomorphic": "32", "Distinct": "31", "Unknown": "33"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="emit one JSON document")
    p.add_argument("--truncate", type=int, default=argparse.SUPPRESS, metavar="N",
                   help=f"working prefix for infinite multiplicities (default {DEFAULT_TRUNCATE})")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fbcp", description="Invariants of free Bogoljubov crossed products of Z.")
    _common(p)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        _common(sp)
        return sp

    sp = add("classify", "full report for one representation")
    sp.add_argument("file")
    sp.add_argument("name")
    sp = add("compare", "Isomorphic / Distinct / Unknown verdict for two representations")
    sp.add_argument("file")
    sp.add_argument("name1")
    sp.add_argument("name2")
    sp = add("present", "presentations of the crossed product")
    sp.add_argument("file")
    sp.add_argument("name")
    sp = add("freedim", "free dimension of a factor descriptor, e.g. 'mat(3)@1/2 + diffuse@1/2'")
    sp.add_argument("expr")
    sp = add("cumulants", "moment and cumulant tables")
    sp.add_argument("--order", type=int, required=True, metavar="K")
    sp.add_argument("--ov", type=int, metavar="k", help="operator-valued over C^k, eta = tau(.)1")
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--cumulants", metavar="LIST", help="comma separated c[0], c[1], ...")
    src.add_argument("--moments", metavar="LIST", help="comma separated m[0], m[1], ...")
    sp = add("basis-change", "rebase the free generators of NAME1 onto the weights of NAME2")
    sp.add_argument("file")
    sp.add_argument("name1")
    sp.add_argument("name2")
    sp = add("nc", "non-crossing partitions of {1..N}")
    sp.add_argument("--n", type=int, required=True, metavar="N")
    sp.add_argument("--pairings", action="store_true", help="only pairings")
    sp.add_argument("--count", action="store_true", help="print the count only")
    sp = add("corpus", "run the golden corpus")
    sp.add_argument("--root", default=None, help="corpus directory")
    sp.add_argument("--bless", action="store_true", help="rewrite expected outputs")
    sp.add_argument("--jobs", type=int, default=1, help="worker threads")
    return p


# ------------------------------------------------------------- rendering


def _color(kind: str, out) -> str:
    if os.environ.get("NO_COLOR") is not None or not getattr(out, "isatty", lambda: False)():
        return kind
    return f"\033[{COLORS.get(kind, '0')}m{kind}\033[0m"


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_specfile(fh.read())


def _kv(lines, key, value):
    lines.append(f"{key}: {value}")


def _text_dossier(name: str, d: dict) -> str:
    lines = []
    rep = d["representation"]
    atoms = ", ".join(f"{a['angle']} x{a['multiplicity']}" for a in rep["atoms"]) or "none"
    wm = ", ".join(f"{w['kind']} x{w['multiplicity']}" + (f" [{','.join(w['flags'])}]" if w["flags"] else "")
                   for w in rep["wm_parts"]) or "none"
    _kv(lines, "representation", name)
    _kv(lines, "  eigenvalues", atoms)
    _kv(lines, "  weakly mixing", wm)
    _kv(lines, "dimension", f"{d['dimension']} (almost periodic {d['ap_dimension']})")
    _kv(lines, "eigenvalue group", f"{d['eigenvalue_subgroup']}, kernel index {d['kernel_index']}")
    f = d["factoriality"]
    _kv(lines, "factor", "yes" if f["factor"] else f"no, center {f['center']}")
    s = d["solidity"]
    sol = s["status"] if s["status"] != "Unknown" else f"Unknown({s['obstruction']})"
    _kv(lines, "solidity", sol + (f" ({s['witness']})" if s["witness"] else ""))
    _kv(lines, "rigidity class", d["rigidity_class"] if d["rigidity_class"] is not None else "none")
    _kv(lines, "bimodule", d["bimodule"]["description"])
    if d["presentation"]:
        _kv(lines, "presentation", d["presentation"]["algebra"])
    if d["relative_commutant"]:
        _kv(lines, "relative commutant", d["relative_commutant"]["description"])
    if d["cocycle"]:
        _kv(lines, "cocycle", d["cocycle"]["description"])
    if d["periodic"]:
        p = d["periodic"]
        r = p["r"] if p["r"] is not None else "-"
        _kv(lines, "periodic", f"T = {p['T']}, r = {r}, shape {p['shape']}")
    _kv(lines, "normaliser", d["normaliser"]["statement"])
    if d["notes"]:
        lines.append("notes:")
        lines += [f"  - {n}" for n in d["notes"]]
    return "\n".join(lines)


def _text_verdict(v, out) -> str:
    lines = [f"{_color(v.kind, out)} [{v.rule}]", v.human_summary]
    cert = v.certificate
    if "rebase" in cert and "automorphism" in cert["rebase"]:
        lines.append("rebase certificate:")
        for g, w in cert["rebase"]["automorphism"]["forward"].items():
            lines.append(f"  {g} = {w}  (weight {cert['rebase']['target'][g]})")
        if cert["rebase"]["truncated_at"]:
            lines.append(f"  (working prefix of {cert['rebase']['truncated_at']} generators)")
    if "forms" in cert:
        for f in cert["forms"]:
            lines.append(f"  T = {f['T']}, r = {f['r']}, shape {f['shape']}")
    return "\n".join(lines)


def _present(rep, truncate: int) -> dict:
    from .presentation import afp_presentation, cocycle_presentation, normalizer_summary, relative_commutant
    from .rep import decompose

    ap, _ = decompose(rep)
    out = {"normaliser": normalizer_summary(rep).to_json(), "presentation": None,
           "relative_commutant": None, "cocycle": None}
    if ap.atoms:
        out["presentation"] = afp_presentation(ap).to_json()
        out["relative_commutant"] = relative_commutant(ap).to_json()
        out["cocycle"] = cocycle_presentation(ap, truncate).to_json()
    return out


def _text_present(name: str, d: dict) -> str:
    lines = [f"representation: {name}"]
    p = d["presentation"]
    if p is None:
        lines.append(d["normaliser"]["statement"])
        return "\n".join(lines)
    lines.append(f"M_ap = {p['algebra']}")
    lines.append(f"  m = {p['m']} (trivial pairs {p['n1']} + trivial eigenvalues {p['m0']}), "
                 f"n = {p['n']} (acting)")
    lines.append("  acting weights: " + ", ".join(f"{a['angle']} x{a['multiplicity']}"
                                                   for a in p["acting_weights"]))
    rc = d["relative_commutant"]
    lines.append(f"relative commutant: {rc['description']}")
    lines.append(f"  kernel of F_n onto the acting eigenvalues: image order {rc['image_order']}, "
                 f"rank {rc['kernel_rank']}")
    if rc["witness"]:
        w = rc["witness"]
        lines.append(f"  Schreier graph: {w['vertices']} vertices, non-tree edges {len(w['non_tree_edges'])}")
        for g in w["kernel_generators"]:
            lines.append(f"    {g}")
    c = d["cocycle"]
    lines.append(f"cocycle: {c['description']}")
    if c["sections"]:
        lines.append("  sections: " + ", ".join(f"{k} -> {w}" for k, w in c["sections"]))
        lines.append(f"  cocycle identity verified: {c['identity_verified']}")
    lines.append(f"normaliser: {d['normaliser']['statement']}")
    return "\n".join(lines)


def _parse_list(text: str) -> list:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad number list {text!r}") from None


def _table(rows) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(str(c).rjust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _vec_str(v) -> list:
    return [fmt(x) for x in v]


# -------------------------------------------------------------- commands


def cmd_classify(args, out):
    spec = _load(args.file)
    d = dossier(spec.get(args.name), args.truncate)
    return d if args.json else _text_dossier(args.name, d)


def cmd_compare(args, out):
    spec = _load(args.file)
    v = compare(spec.get(args.name1), spec.get(args.name2), args.truncate)
    if args.json:
        doc = v.to_json()
        doc["representations"] = [args.name1, args.name2]
        return doc
    return f"{args.name1} vs {args.name2}: " + _text_verdict(v, out)


def cmd_present(args, out):
    spec = _load(args.file)
    d = _present(spec.get(args.name), args.truncate)
    return d if args.json else _text_present(args.name, d)


def cmd_freedim(args, out):
    from .freedim import free_dimension, parse_descriptor

    desc = parse_descriptor(args.expr)
    d = free_dimension(desc)
    if args.json:
        return {"descriptor": desc.literal(), "free_dimension": to_json(d)}
    return fmt(d)


def cmd_cumulants(args, out):
    from . import freeprob as fp

    K = args.order
    if args.ov is not None:
        return _cumulants_ov(args, fp)
    if args.moments is not None:
        m = _parse_list(args.moments)
        c = fp.cumulants_from_moments(m, K)
        m = m[:K + 1]
        source = "moments"
    else:
        c = _parse_list(args.cumulants) if args.cumulants is not None else [Fraction(0), Fraction(1)]
        m = fp.moments_from_cumulants(c, K)
        c = fp.cumulants_from_moments(m, K)
        source = "cumulants"
    if args.json:
        return {"order": K, "source": source, "moments": [to_json(x) for x in m],
                "cumulants": [to_json(x) for x in c],
                "indexing": "c[n] has n algebra slots and sees n+1 copies of X"}
    rows = [("n", "m[n]", "c[n]")]
    for n in range(K + 1):
        rows.append((n, fmt(m[n]), fmt(c[n]) if n < K else ""))
    return _table(rows) + "\n(c[n] has n algebra slots, i.e. kappa_{n+1})"


def _cumulants_ov(args, fp):
    k, K = args.ov, args.order
    if k < 1:
        raise ParseError("--ov needs k >= 1")
    dist = fp.trace_distribution([Fraction(1, k)] * k)
    moments = fp.ov_moments_from_cumulants(dist.as_cumulants(), K)
    cum = fp.ov_cumulants_from_moments(moments, k, K)
    roundtrip = all(cum.tables.get(n, {}) == dist.as_cumulants().tables.get(n, {}) for n in range(K))
    if args.json:
        return {
            "order": K, "k": k,
            "moments": {str(n): [{"args": list(key), "value": _vec_str(v)} for key, v in t.items()]
                        for n, t in moments.items()},
            "cumulants": {str(n): [{"args": list(key), "value": _vec_str(v)}
                                   for key, v in cum.tables.get(n, {}).items()] for n in range(K)},
            "roundtrip": roundtrip,
        }
    rows = [("n", "basis args", "E(X b_1 X ... b_n X)")]
    for n, t in moments.items():
        for key, v in t.items():
            rows.append((n, " ".join(f"e{i + 1}" for i in key) or "-", "(" + ", ".join(_vec_str(v)) + ")"))
    lines = [_table(rows)]
    lines.append("nonzero cumulants: " + ", ".join(
        f"c[{n}]({' '.join(f'e{i + 1}' for i in key)}) = ({', '.join(_vec_str(v))})"
        for n in range(K) for key, v in cum.tables.get(n, {}).items()))
    lines.append(f"round trip: {'ok' if roundtrip else 'FAILED'}")
    return "\n".join(lines)


def cmd_basis_change(args, out):
    from .classify import _rebase_witness
    from .words import check_rebase

    spec = _load(args.file)
    r1, r2 = spec.get(args.name1), spec.get(args.name2)
    src, tgt, auto, basis, truncated = _rebase_witness(r1, r2, args.truncate)
    ok = check_rebase(src, tgt, auto, basis)
    if args.json:
        return {"source": src.to_json(), "target": basis.to_json(),
                "automorphism": auto.to_json(), "verified": ok,
                "truncated_at": args.truncate if truncated else None}
    lines = ["source: " + ", ".join(f"{g} ({w})" for g, w in src.to_json().items())]
    lines.append("new basis:")
    for g in basis.generators:
        lines.append(f"  {g} = {auto.forward[g]}  (weight {basis.to_json()[g]})")
    lines.append("inverse:")
    for g in src.generators:
        lines.append(f"  {g} = {auto.backward[g]}")
    lines.append(f"verified: {'yes' if ok else 'NO'}")
    return "\n".join(lines)


def cmd_nc(args, out):
    from .freeprob import enumerate_nc

    parts = enumerate_nc(args.n)
    if args.pairings:
        parts = [p for p in parts if p.is_pairing]
    if args.json:
        doc = {"n": args.n, "pairings_only": args.pairings, "count": len(parts)}
        if not args.count:
            doc["partitions"] = [p.to_json() for p in parts]
        return doc
    if args.count:
        return str(len(parts))
    return "\n".join([str(p) for p in parts] + [f"count: {len(parts)}"])


def cmd_corpus(args, out):
    from .corpus import run_corpus

    summary = run_corpus(args.root, bless=args.bless, jobs=args.jobs)
    args.status = 0 if summary.passed else 1
    if args.json:
        return summary.to_json()
    return summary.render()


COMMANDS = {
    "classify": cmd_classify, "compare": cmd_compare, "present": cmd_present,
    "freedim": cmd_freedim, "cumulants": cmd_cumulants, "basis-change": cmd_basis_change,
    "nc": cmd_nc, "corpus": cmd_corpus,
}


def _fail(out, err, as_json: bool, kind: str, message: str, code: int, extra: str = "") -> int:
    print(message, file=err)
    if extra:
        print(extra, file=err)
    if as_json:
        # --json promises one document on stdout even when the command fails
        out.write(json.dumps({"error": {"kind": kind, "message": message, "exit": code}},
                             indent=2) + "\n")
    return code


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("fbcp: a subcommand is required")
    except UsageError as e:
        extra = parser.format_usage().rstrip() + "\n" + GRAMMAR.rstrip()
        return _fail(out, err, "--json" in argv, "usage", str(e), 2, extra)
    args.json = getattr(args, "json", False)
    args.truncate = getattr(args, "truncate", DEFAULT_TRUNCATE)
    try:
        result = COMMANDS[args.command](args, out)
    except ParseError as e:
        return _fail(out, err, args.json, "parse", f"parse error: {e}", 2)
    except OSError as e:
        return _fail(out, err, args.json, "io", f"error: cannot read {e.filename}: {e.strerror}", 2)
    except FbcpError as e:
        return _fail(out, err, args.json, "domain", f"error: {e}", 1)
    if args.json:
        out.write(json.dumps(result, indent=2) + "\n")
    else:
        out.write(result + "\n")
    return getattr(args, "status", 0)


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
