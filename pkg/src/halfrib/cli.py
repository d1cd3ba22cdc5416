"""Command line front end.

Exit codes: 0 on success, 1 when a requested check fails, 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field

from .dsl import ParseError, load_source, parse_link
from .halftwist import (
    CalibrationError,
    RibbonChoice,
    braiding,
    braiding_is_intertwiner,
    classify_ribbons,
    fs_indicator,
    half_twist,
    half_twist_report,
    ribbon_scalar,
    self_test,
    sl2_uniqueness_check,
    verify_ribbon_axioms,
    yang_baxter_check,
)
from .modules import Module, irrep
from .rootdata import RootDatumError, build_root_datum, order2_characters
from .scalars import Scalar
from .skein import differential_test, kauffman_bracket
from .tangles import DiagramError, braid_closure, evaluate, writhe

__all__ = ["main", "InvariantReport", "emit", "parse_rep", "parse_ribbon"]


class UsageError(Exception):
    pass


_REP_RE = re.compile(r"^(?:([A-Za-z][A-Za-z0-9]*)=)?([A-Za-z])(\d+)(?::([-\d,\s]+))?$")


def parse_rep(text: str):
    """``[LABEL=]TYPE[:weight]``, e.g. ``A1:1`` or ``W=A2:0,1``; no weight means the standard rep."""
    m = _REP_RE.match(text.strip())
    if not m:
        raise UsageError(f"bad --rep {text!r}; expected TYPE:weight such as A1:1")
    label, kind, rank, weight = m.groups()
    try:
        d = build_root_datum(kind.upper(), int(rank))
    except (RootDatumError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if weight is None:
        lam = d.fundamental(0)
    else:
        try:
            lam = tuple(int(x) for x in weight.split(","))
        except ValueError:
            raise UsageError(f"bad weight in {text!r}") from None
        if len(lam) != d.rank or any(x < 0 for x in lam):
            raise UsageError(f"weight {weight} is not dominant of rank {d.rank}")
    return label or "V", d, lam


def parse_ribbon(text: str, d) -> RibbonChoice:
    """``C``, ``X2`` or ``phi:<k>`` (the k-th sign character of P/Q, 0 being trivial)."""
    if text == "C":
        return RibbonChoice.standard()
    if text in ("X2", "X^-2"):
        return RibbonChoice.half()
    m = re.match(r"^phi:(\d+)$", text)
    if m:
        chars = order2_characters(d)
        k = int(m.group(1))
        if k >= len(chars):
            raise UsageError(f"{d.name} has {len(chars)} sign characters; phi:{k} is out of range")
        return RibbonChoice.twisted(chars[k])
    raise UsageError(f"bad --ribbon {text!r}; expected C, X2 or phi:<k>")


def _registry(reps: list[str]) -> dict:
    out: dict = {}
    datum = None
    for k, r in enumerate(reps or ["A1:1"]):
        label, d, lam = parse_rep(r)
        if label in out and "=" not in r:
            label = f"V{k + 1}"
        if datum is not None and d.name != datum.name:
            raise UsageError("all --rep flags must use the same root system")
        datum = d
        out[label] = irrep(d, lam)
    return out


# ---------------------------------------------------------------------------
# output


@dataclass
class InvariantReport:
    source: str
    ribbon: str
    writhe: int
    unnormalized: Scalar
    normalized: Scalar
    normalize: bool = True
    timing: float | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "input": self.source,
            "ribbon": self.ribbon,
            "writhe": self.writhe,
            "unnormalized": self.unnormalized.to_json(),
            "normalized": self.normalized.to_json(),
            "invariant": (self.normalized if self.normalize else self.unnormalized).to_json(),
        }
        if self.timing is not None:
            out["seconds"] = round(self.timing, 3)
        out.update(self.extra)
        return out

    def to_text(self) -> str:
        lines = [
            f"input: {self.source}",
            f"ribbon: {self.ribbon}",
            f"writhe: {self.writhe}",
            f"unnormalized: {self.unnormalized.to_text()}",
            f"normalized: {self.normalized.to_text()}",
            f"invariant: {(self.normalized if self.normalize else self.unnormalized).to_text()}",
        ]
        if self.timing is not None:
            lines.append(f"seconds: {self.timing:.3f}")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, Scalar):
        return x.to_json()
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(report, fmt: str = "text") -> str:
    """Deterministic rendering of a report object or plain dict."""
    if fmt == "json":
        return json.dumps(_jsonable(report), sort_keys=True, indent=2)
    if hasattr(report, "to_text"):
        return report.to_text()
    return _text(report)


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        elif isinstance(v, str) and v.startswith("\n"):
            lines.append(f"{pad}{k}:")
            lines.extend(f"{pad}  {row}" for row in v[1:].split("\n"))
        elif isinstance(v, Scalar):
            lines.append(f"{pad}{k}: {v.to_text()}")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(_text(item, indent + 1))
                lines.append("")
            lines.pop()
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommands


def _single(args) -> Module:
    reg = _registry(args.rep)
    return reg.get("V", next(iter(reg.values())))


def cmd_irrep(args):
    if args.type:
        d = build_root_datum(*_split_type(args.type))
        if args.dump_datum:
            return d.to_json(), 0
        lam = d.fundamental(0)
        if args.weight:
            _, _, lam = parse_rep(f"{d.name}:{args.weight}")
        V = irrep(d, lam)
    else:
        V = _single(args)
        if args.dump_datum:
            return V.datum.to_json(), 0
    if args.format == "json" or args.dump:
        return V.to_json(), 0
    out = {
        "module": V.name,
        "type": V.datum.name,
        "dim": V.dim,
        "weights": " ".join("(" + ",".join(map(str, w)) + ")" for w in V.weights),
        "relations": "ok" if not V.relation_failures() else ", ".join(V.relation_failures()),
    }
    if args.matrices:
        for i in V.datum.nodes:
            out[f"E{i + 1}"] = "\n" + V.E[i].pretty()
            out[f"F{i + 1}"] = "\n" + V.F[i].pretty()
    return out, 0 if out["relations"] == "ok" else 1


def cmd_xelement(args):
    V = _single(args)
    checks = half_twist_report(V)
    X = half_twist(V)
    out = {"module": V.name, "dim": V.dim, "checks": checks}
    if args.format == "json":
        out["X"] = X.to_json()
    else:
        out["X"] = "\n" + X.pretty()
    return out, 0 if all(checks.values()) else 1


def cmd_rmatrix(args):
    reg = _registry(args.rep)
    mods = list(reg.values())
    M = mods[0]
    N = mods[1] if len(mods) > 1 else M
    b = braiding(M, N)
    checks = {"intertwiner": braiding_is_intertwiner(M, N)}
    if args.yang_baxter:
        checks["yang_baxter"] = yang_baxter_check(M)
    out = {"source": f"{M.name} (x) {N.name}", "checks": checks}
    if args.format == "json":
        out["R"] = b.R.to_json()
        out["sigma"] = b.sigma.to_json()
    else:
        out["R"] = "\n" + b.R.pretty()
    return out, 0 if all(checks.values()) else 1


def cmd_fs(args):
    V = _single(args)
    c = parse_ribbon(args.ribbon, V.datum)
    return {"module": V.name, "ribbon": c.label, "fs": fs_indicator(c, V)}, 0


def cmd_ribbons(args):
    d = build_root_datum(*_split_type(args.type))
    cl = classify_ribbons(d)
    rows = []
    for ch in cl.choices:
        rows.append({
            "choice": ch.choice.label,
            "is_standard": ch.is_standard,
            "axioms": ch.axioms,
        })
    out = {
        "type": d.name,
        "count": len(cl.choices),
        "choices": rows,
        "standard_character": cl.standard_character.label() if cl.standard_character else None,
        "standard_square_roots": [phi.label() for phi in cl.standard_square_roots],
    }
    ok = all(all(r["axioms"].values()) for r in rows)
    return out, 0 if ok else 1


def _split_type(text: str):
    m = re.match(r"^([A-Za-z])(\d+)$", text.strip())
    if not m:
        raise UsageError(f"bad --type {text!r}; expected e.g. A2")
    return m.group(1).upper(), int(m.group(2))


def _load_link(args, reg):
    src = load_source(args.link)
    d = parse_link(src, labels=set(reg))
    desc = src.origin if src.origin != "<inline>" else " ".join(src.text.split())
    return d, desc


def cmd_invariant(args):
    reg = _registry(args.rep)
    V = reg["V"] if "V" in reg else next(iter(reg.values()))
    c = parse_ribbon(args.ribbon, V.datum)
    d, desc = _load_link(args, reg)
    if len(d.labels()) > 1:
        raise UsageError("link invariants take a single label")
    t0 = time.perf_counter()
    res = evaluate(d, c, reg)
    if not d.is_closed:
        out = {"input": desc, "ribbon": c.label, "shape": [res.operator.nrows, res.operator.ncols]}
        if args.format == "json":
            out["operator"] = res.operator.to_json()
        else:
            out["operator"] = "\n" + res.operator.pretty()
        return out, 0
    w = writhe(d)
    label = next(iter(d.labels()), "V")
    mod = reg.get(label, V)
    theta = ribbon_scalar(c, mod.datum, mod.highest_weight)
    norm = res.scalar * theta ** w
    rep = InvariantReport(desc, c.label, w, res.scalar, norm, args.normalize)
    if args.timing:
        rep.timing = time.perf_counter() - t0
    return rep, 0


def cmd_skein(args):
    reg = {"V": irrep(build_root_datum("A", 1), (1,))}
    d, desc = _load_link(args, reg)
    b = kauffman_bracket(d)
    return {"input": desc, "writhe": writhe(d), "bracket": b}, 0


def _standard_links():
    return {
        "unknot": braid_closure(1, []),
        "hopf": braid_closure(2, [1, 1]),
        "trefoil": braid_closure(2, [1, 1, 1]),
        "figure8": braid_closure(3, [1, -2, 1, -2]),
    }


def cmd_verify(args):
    d = build_root_datum(*_split_type(args.type))
    family = [d.fundamental(0)]
    if d.rank == 1:
        family.append((2,))
    out: dict = {"type": d.name}
    ok = True
    for c in (RibbonChoice.standard(), RibbonChoice.half()):
        ax = verify_ribbon_axioms(c, d, family)
        out[f"axioms {c.label}"] = ax
        ok = ok and all(ax.values())
    V = irrep(d, d.fundamental(0))
    out["yang_baxter"] = yang_baxter_check(V)
    out["intertwiner"] = braiding_is_intertwiner(V, V)
    ok = ok and out["yang_baxter"] and out["intertwiner"]
    if d.name == "A1":
        links = _standard_links()
        A1V = {"V": V}

        def fv(diag, normalize):
            from .tangles import link_invariant

            return link_invariant(diag, RibbonChoice.half(), A1V, normalize=normalize)

        rep = differential_test(
            [("unknot", links["unknot"]), ("hopf", links["hopf"])],
            [("trefoil", links["trefoil"]), ("figure8", links["figure8"])],
            fv,
        )
        out["skein_differential"] = rep["all_match"]
        ok = ok and rep["all_match"]
        u = sl2_uniqueness_check(["formal"])
        out["sl2_no_half_ribbon_for_C"] = u["no_half_ribbon_gives_C"]
        ok = ok and u["no_half_ribbon_gives_C"]
    out["ok"] = ok
    return out, 0 if ok else 1


def cmd_selftest(args):
    failures = self_test()
    return {"selftest": "pass" if not failures else "fail", "failures": failures}, 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="halfrib", description="Exact half-twists, ribbon elements and tangle invariants.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def with_rep(sp):
        sp.add_argument("--rep", action="append", help="[LABEL=]TYPE[:weight], e.g. A1:1 or A2:1,0")
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        return sp

    s = with_rep(sub.add_parser("irrep", help="construct an irreducible module"))
    s.add_argument("--matrices", action="store_true", help="print E_i and F_i")
    s.add_argument("--type", help="root system such as A2 (alternative to --rep)")
    s.add_argument("--weight", help="highest weight in fundamental coordinates, e.g. 1,1")
    s.add_argument("--dump", action="store_true", help="basis weights and generator matrices as JSON")
    s.add_argument("--dump-datum", action="store_true", help="the root datum as JSON")
    s.set_defaults(func=cmd_irrep)

    s = with_rep(sub.add_parser("xelement", help="the half-twist on a module, with its checks"))
    s.set_defaults(func=cmd_xelement)

    s = with_rep(sub.add_parser("rmatrix", help="R-matrix and braiding on V (x) W"))
    s.add_argument("--yang-baxter", action="store_true")
    s.set_defaults(func=cmd_rmatrix)

    s = with_rep(sub.add_parser("fs", help="Frobenius-Schur indicator"))
    s.add_argument("--ribbon", default="X2")
    s.set_defaults(func=cmd_fs)

    s = sub.add_parser("ribbons", help="classify ribbon elements")
    s.add_argument("--type", default="A1")
    s.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_ribbons)

    s = with_rep(sub.add_parser("invariant", help="evaluate a tangle or link"))
    s.add_argument("--link", required=True, help="a DSL file, or inline text such as 'braid 2: s1 s1 s1 ; close'")
    s.add_argument("--ribbon", default="X2")
    s.add_argument("--normalize", action="store_true")
    s.add_argument("--timing", action="store_true", help="include wall time (makes output nondeterministic)")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("skein", help="Kauffman bracket of a link")
    s.add_argument("--link", required=True)
    s.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_skein)

    s = sub.add_parser("verify", help="ribbon axioms, braiding and skein checks for a root system")
    s.add_argument("--type", default="A1")
    s.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="calibration self-test of the braid operators")
    s.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        report, code = args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DiagramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CalibrationError as exc:
        print(f"calibration failure: {exc}", file=sys.stderr)
        return 1
    fmt = "json" if getattr(args, "dump", False) or getattr(args, "dump_datum", False) else args.format
    print(emit(report, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
