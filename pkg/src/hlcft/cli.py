"""Command line front end.

Output is one ``key=value`` per line (or a JSON object with ``--json``).
Exit codes: 0 success, 2 domain error, 3 parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields

from . import parser as P
from .cft import ExtensionError, TameExtension, UnramifiedExtension, reciprocity_report
from .coeff import FieldConfig
from .ksym import SymbolError, SymbolSum, decompose, sym_make, tame_components, tame_full, val_map
from .pairing import get_context
from .series import SeriesRing, Window, first_unit_slot, unit_peel
from .witt import WittVec

EXIT_DOMAIN = 2
EXIT_PARSE = 3


@dataclass
class SessionConfig:
    p: int = 2
    f: int = 1
    modulus: tuple = None
    n: int = 1
    window: tuple = None  # ((lo, hi), ...); default |i_k| <= 3
    cap: int = None
    r: int = 1
    guard: int = None
    seed: int = 0
    threads: int = 1

    def bounds(self):
        if self.window is None:
            return tuple((-3, 3) for _ in range(self.n))
        if len(self.window) != self.n:
            raise ValueError(f"window has {len(self.window)} ranges, n = {self.n}")
        return self.window

    def field(self) -> FieldConfig:
        return FieldConfig(self.p, self.f, self.modulus)

    def ring(self, cfg=None) -> SeriesRing:
        cfg = cfg or self.field()
        b = self.bounds()
        w = Window([lo for lo, _ in b], [hi for _, hi in b])
        cap = self.cap
        if cap is None:
            # deep enough for log-Jacobians against level-r Witt vectors
            cap = self.p ** (self.r - 1) * (w.max_degree - w.min_degree) + 2 * sum(w.weights) + 1
        return SeriesRing(cfg, w.with_cap(cap))


def _parse_window(text: str, n=None):
    text = text.strip()
    if ":" not in text and "," not in text:
        b = int(text)
        if b < 0:
            raise ValueError("window bound must be >= 0")
        return None if n is None else tuple((-b, b) for _ in range(n)), b
    out = []
    for part in text.split(","):
        lo, hi = part.split(":")
        out.append((int(lo), int(hi)))
    return tuple(out), None


def _parse_modulus(text: str):
    return tuple(int(c) for c in text.replace(" ", "").split(","))


_CONFIG_KEYS = {"p": int, "f": int, "n": int, "r": int, "guard": int, "seed": int, "threads": int,
                "cap": int, "modulus": _parse_modulus, "window": str}


def read_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _CONFIG_KEYS[key](val)
    return out


def session_from_args(args) -> SessionConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for f in fields(SessionConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    window = values.pop("window", None)
    cfg = SessionConfig(**values)
    if window is not None:
        rng, bound = _parse_window(window, cfg.n)
        cfg.window = rng
    return cfg


# -- evaluation --------------------------------------------------------------------

def evaluate(node, ring: SeriesRing):
    if isinstance(node, P.Int):
        return ring.from_int(node.value)
    if isinstance(node, P.Gen):
        return ring.const(ring.coeff.g)
    if isinstance(node, P.Var):
        if node.index > ring.n:
            raise ValueError(f"t{node.index} does not exist for n = {ring.n}")
        return ring.var(node.index)
    if isinstance(node, P.Neg):
        return ring.neg(evaluate(node.arg, ring))
    if isinstance(node, P.Pow):
        return ring.pow(evaluate(node.base, ring), node.exp)
    if isinstance(node, P.BinOp):
        a, b = evaluate(node.left, ring), evaluate(node.right, ring)
        if node.op == "+":
            return ring.add(a, b)
        if node.op == "-":
            return ring.sub(a, b)
        if node.op == "*":
            return ring.mul(a, b)
        return ring.mul(a, ring.inv(b))
    raise TypeError(f"cannot evaluate {node!r} as a series")


def evaluate_symsum(node: P.SymSum, ring: SeriesRing) -> SymbolSum:
    out = None
    for coef, sym in node.terms:
        term = sym_make(ring, *(evaluate(e, ring) for e in sym.entries), coef=coef)
        out = term if out is None else out + term
    return out


def evaluate_witt(node: P.Witt, ring: SeriesRing) -> WittVec:
    return WittVec(ring, [evaluate(c, ring) for c in node.comps])


# -- formatting --------------------------------------------------------------------

def _fmt_index(idx) -> str:
    return "(" + ",".join(str(i) for i in idx) + ")"


def _fmt_elem(cfg, a) -> str:
    return cfg.format(a)


def _fmt_tame_value(cfg, a) -> str:
    if cfg.is_primitive(cfg.g):
        k = next(e for e in range(cfg.q - 1) if cfg.pow(cfg.g, e) == a)
        return f"g^{k}"
    return _fmt_elem(cfg, a)


def _vk_lines(cfg, table, key="vk"):
    out = []
    for (b, idx), a in table.sorted_items():
        theta = _fmt_elem(cfg, cfg.basis[b])
        out.append((f"{key}[theta={theta},i={_fmt_index(idx)},l={first_unit_slot(idx, cfg.p)}]", a))
    return out


# -- commands ------------------------------------------------------------------------

def _ext_from_arg(text: str, base: SeriesRing):
    parts = text.split(":")
    try:
        if parts[0] == "unram" and len(parts) == 2:
            return UnramifiedExtension(base, int(parts[1]))
        if parts[0] == "tame" and len(parts) == 3:
            return TameExtension(base, int(parts[1]), int(parts[2]))
    except ValueError as exc:
        if isinstance(exc, ExtensionError):
            raise
        raise ExtensionError(f"bad extension {text!r}") from None
    raise ExtensionError(f"bad extension {text!r}; use unram:L or tame:I:L")


def cmd_val(args, cfg):
    ring = cfg.ring()
    alpha = evaluate_symsum(P.parse_symsum(args.symbol, cfg.n), ring)
    return [("val", val_map(alpha))]


def cmd_tame(args, cfg):
    ring = cfg.ring()
    alpha = evaluate_symsum(P.parse_symsum(args.symbol, cfg.n), ring)
    if alpha.degree == ring.n + 1:
        return [("tame", _fmt_tame_value(ring.coeff, tame_full(alpha)))]
    if alpha.degree == ring.n:
        return [("tame_components", ",".join(str(c) for c in tame_components(alpha)))]
    raise SymbolError(f"tame needs degree {ring.n} or {ring.n + 1}, got {alpha.degree}")


def cmd_pair(args, cfg):
    wnode = P.parse_witt(args.witt, cfg.n)
    if args.r is None:
        cfg.r = len(wnode.comps)
    ring = cfg.ring()
    alpha = evaluate_symsum(P.parse_symsum(args.symbol, cfg.n), ring)
    w = evaluate_witt(wnode, ring)
    if w.r != cfg.r:
        raise ValueError(f"Witt literal has length {w.r}, level is {cfg.r}")
    ctx = get_context(ring, cfg.r, cfg.guard)
    v = ctx.pair(alpha, w)
    lim = ctx.pair_limit(alpha, w)
    return [("pair", f"{v} mod {ctx.modulus}"), ("pair_limit", str(lim))]


def cmd_decompose(args, cfg):
    ring = cfg.ring()
    alpha = evaluate_symsum(P.parse_symsum(args.symbol, cfg.n), ring)
    d = decompose(alpha, cfg.r, get_context(ring, cfg.r, cfg.guard))
    out = [("vZ", d.vZ), ("tame", ",".join(str(c) for c in d.tame)), ("vk_terms", len(d.vk.entries))]
    return out + _vk_lines(ring.coeff, d.vk)


def cmd_peel(args, cfg):
    ring = cfg.ring()
    u = evaluate(P.parse_expr(args.series, cfg.n), ring)
    table = unit_peel(u, cfg.r).mod(ring.p ** cfg.r)
    return [("gen_terms", len(table.entries))] + _vk_lines(ring.coeff, table, "gen")


def cmd_norm(args, cfg):
    base = cfg.ring()
    ext = _ext_from_arg(args.ext, base)
    alpha = evaluate_symsum(P.parse_symsum(args.symbol, cfg.n), ext.top)
    out = ext.norm_ksym(alpha, cfg.r)
    lines = [("ext", args.ext), ("norm", out.format())]
    if out.degree == base.n:
        lines += [("norm_val", val_map(out)), ("norm_tame", ",".join(str(c) for c in tame_components(out)))]
    return lines


def cmd_recip(args, cfg):
    queries = [P.parse_witt(q, cfg.n) for q in (args.query or [])]
    if args.r is None and queries:
        cfg.r = len(queries[0].comps)
    ring = cfg.ring()
    alpha = evaluate_symsum(P.parse_symsum(args.symbol, cfg.n), ring)
    ws = {P.to_text(q): evaluate_witt(q, ring) for q in queries}
    rep = reciprocity_report(alpha, ws)
    out = [("ur_exponent", rep.ur_exponent), ("tame_chars", ",".join(str(c) for c in rep.tame_chars))]
    for label, v in rep.p_chars.items():
        out.append((f"p_char[{label}]", f"{v} mod {ring.p ** ws[label].r}"))
    for label, ok in rep.agreement.items():
        out.append((f"agree[{label}]", "yes" if ok else "no"))
    return out


def cmd_check(args, cfg):
    from .suites import SUITES, run_suite

    names = list(SUITES) if args.suite == "all" else [args.suite]
    if any(nm not in SUITES for nm in names):
        raise ValueError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    out = []
    ok = True
    for nm in names:
        res = run_suite(nm, seed=cfg.seed, threads=cfg.threads, count=args.count)
        ok &= res.passed
        for line in res.lines():
            k, v = line.split("=", 1)
            out.append((k, v))
    out.append(("all_passed", "yes" if ok else "no"))
    return out


COMMANDS = {
    "val": cmd_val,
    "tame": cmd_tame,
    "pair": cmd_pair,
    "decompose": cmd_decompose,
    "peel": cmd_peel,
    "norm": cmd_norm,
    "recip": cmd_recip,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("field and truncation")
    g.add_argument("--p", type=int, help="residue characteristic (default 2)")
    g.add_argument("--f", type=int, help="residue degree, q = p^f (default 1)")
    g.add_argument("--modulus", type=_parse_modulus, help="residue field modulus, low to high, e.g. 1,1,1")
    g.add_argument("--n", type=int, help="dimension (default 1)")
    g.add_argument("--window", help="symmetric bound B, or lo:hi,lo:hi,... (default 3)")
    g.add_argument("--cap", type=int, help="truncation degree for inexact arithmetic")
    g.add_argument("--r", type=int, help="Witt level (default 1, or the Witt literal length)")
    g.add_argument("--guard", type=int, help="extra p-adic digits for the pairing (default r)")
    g.add_argument("--seed", type=int, help="seed for check suites (default 0)")
    g.add_argument("--threads", type=int, help="worker threads for check suites (default 1)")
    g.add_argument("--config", help="key=value file; command line flags win")
    g.add_argument("--json", action="store_true", help="print a JSON object instead of lines")

    ap = argparse.ArgumentParser(prog="hlcft", description="Higher local class field theory at finite truncation.")
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("val", parents=[common], help="valuation map of a degree-n symbol sum")
    s.add_argument("symbol")
    s = sub.add_parser("tame", parents=[common], help="tame symbol (degree n+1) or tame components (degree n)")
    s.add_argument("symbol")
    s = sub.add_parser("pair", parents=[common], help="Artin-Schreier-Witt pairing")
    s.add_argument("symbol")
    s.add_argument("witt")
    s = sub.add_parser("decompose", parents=[common], help="canonical coordinates of a degree-n class")
    s.add_argument("symbol")
    s = sub.add_parser("peel", parents=[common], help="principal unit as a product of generators")
    s.add_argument("series")
    s = sub.add_parser("norm", parents=[common], help="norm of a symbol sum from an extension")
    s.add_argument("symbol")
    s.add_argument("--ext", required=True, help="unram:L or tame:I:L")
    s = sub.add_parser("recip", parents=[common], help="reciprocity data of a class")
    s.add_argument("symbol")
    s.add_argument("--query", action="append", help="defining Witt vector, repeatable")
    s = sub.add_parser("check", parents=[common], help="run a property suite")
    s.add_argument("suite", help="suite name or 'all'")
    s.add_argument("--count", type=int, help="instances per configuration (suite default if omitted)")
    return ap


def render(pairs, as_json=False) -> str:
    if as_json:
        return json.dumps({k: v for k, v in pairs}, indent=2) + "\n"
    return "".join(f"{k}={v}\n" for k, v in pairs)


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = session_from_args(args)
        pairs = COMMANDS[args.command](args, cfg)
    except P.ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (ValueError, ArithmeticError, OSError) as exc:
        err.write(f"{args.command}: {exc}\n")
        return EXIT_DOMAIN
    out.write(render(pairs, args.json))
    return 0


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
