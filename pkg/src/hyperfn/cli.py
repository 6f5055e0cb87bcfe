"""Command-line entry point.

    hyperfn hyper eval --term step:0 --x 5
    hyperfn switch eval --expr e.json --inputs i.json
    hyperfn pref choose --spec s.json --pair 1.2,5.5
    hyperfn prod triangle --graph g.json --bins 1,2,3,4
    hyperfn prod abandon --graph g.json --rates 0.01,0.05,0.1
    hyperfn inflate sweep --config market.json --epsilons 0,0.001,0.01
    hyperfn risk project --model m.json --data d.json --rate 0.05

Exit 0 on success, 2 on usage or validation errors, 3 on IO errors.  Errors
are one line on stderr: ``error: CODE: message``.  Every successful run
emits a manifest (JSON) to ``--manifest`` or, failing that, to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
from typing import Sequence

from . import __version__, core, inflation, preference, production, risk, switches
from .errors import HyperfnError

CSV_SCHEMA = "#schema=hyperfn.{name}/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- helpers -----------------------------------------------------------------


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _read(path: str, inputs: list) -> str:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    inputs.append((path, text))
    return text


def _read_json(path: str, inputs: list):
    text = _read(path, inputs)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _num(v: float) -> str:
    """Shortest round-trip text; integral values print without a decimal point."""
    v = float(v)
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def _value(v) -> str:
    if v is core.IS_SINGULAR:
        return "singular"
    v = complex(v)
    if v.imag == 0:
        return _num(v.real + 0.0)
    sign = "+" if v.imag >= 0 else "-"
    return f"{_num(v.real)}{sign}{_num(abs(v.imag))}j"


def parse_term(text: str) -> core.HyperTerm:
    """``[coeff*]kind:params`` where kind is const, step, delta, interval or
    rational (``rational:n0,n1/d0,d1``)."""
    coeff = 1.0
    if "*" in text:
        c, text = text.split("*", 1)
        try:
            coeff = complex(c.replace("i", "j"))
        except ValueError as exc:
            raise UsageError(f"bad coefficient {c!r}") from exc
    kind, _, rest = text.partition(":")
    parts = rest.split(":") if rest else []
    try:
        if kind == "const":
            return core.constant(coeff * (float(parts[0]) if parts else 1.0))
        if kind == "step":
            return core.step(float(parts[0]), coeff, int(parts[1]) if len(parts) > 1 else 0)
        if kind == "delta":
            return core.delta(float(parts[0]), coeff, int(parts[1]) if len(parts) > 1 else 0)
        if kind == "interval":
            return core.interval(float(parts[0]), float(parts[1]), coeff)
        if kind == "rational":
            num, _, den = rest.partition("/")
            return core.rational(_floats(num), _floats(den) if den else (1.0,), coeff)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, HyperfnError):
            raise
        raise UsageError(f"bad term {text!r}: {exc}") from exc
    raise UsageError(f"unknown term kind {kind!r}")


def _write_csv(name: str, header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_SCHEMA.format(name=name) + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


# -- commands -------------------------------------------------------------------
# Each returns (text_output, seed, extra_files) where extra_files maps path->text.


def cmd_hyper_eval(args, inputs):
    terms = [parse_term(t) for t in args.term or []]
    hf = core.Hyperfunction(tuple(terms))
    if args.file:
        hf = hf + core.Hyperfunction.from_json(_read(args.file, inputs))
    if not hf.terms:
        raise UsageError("give at least one --term or --file")
    lines = []
    for x in args.x:
        v = core.eval_numeric(hf, x) if args.numeric else core.eval_closed(hf, x)
        lines.append(_value(v))
    return "\n".join(lines) + "\n", 0, {}


def cmd_switch_eval(args, inputs):
    expr = switches.SwitchExpr.from_dict(_read_json(args.expr, inputs))
    vals = _read_json(args.inputs, inputs) if args.inputs else {}
    missing = sorted(expr.operand_names() - set(vals))
    if missing:
        raise UsageError(f"missing switch inputs: {missing}")
    fn = switches.evaluate_via_hyperfunctions if args.via_hyperfunctions else switches.evaluate
    return f"{fn(expr, vals)}\n", 0, {}


def cmd_pref_choose(args, inputs):
    spec = preference.PreferenceSpec.from_dict(_read_json(args.spec, inputs))
    pair = _floats(args.pair)
    if len(pair) != 2:
        raise UsageError("--pair takes exactly two labels")
    pref = preference.build_preference(spec)
    try:
        winner = _num(preference.choose(pref, *pair))
    except preference.Tie:
        winner = "tie"
    return winner + "\n", 0, {}


def cmd_prod_triangle(args, inputs):
    g = production.ProcessGraph.from_dict(_read_json(args.graph, inputs))
    bins = production.bb_triangle(g, _floats(args.bins))
    rows = [(f"[{_num(b.lo)};{_num(b.hi)})", str(b.exact) if args.exact else _num(b.total_frequency))
            for b in bins]
    return _write_csv("triangle", ("order_bin", "frequency"), rows), 0, {}


def cmd_prod_abandon(args, inputs):
    g = production.ProcessGraph.from_dict(_read_json(args.graph, inputs))
    rates = _floats(args.rates)
    order = production.abandonment_order(g.tasks, rates)
    rows = []
    for rank, label in enumerate(order, 1):
        t = g.task(label)
        rate = next(r for r in rates if production.is_abandoned(t, r))
        rows.append((str(rank), _num(label), _num(rate)))
    return _write_csv("abandon", ("rank", "label", "abandon_rate"), rows), 0, {}


def cmd_inflate_sweep(args, inputs):
    cfg = inflation.MarketConfig.from_dict(_read_json(args.config, inputs))
    result = inflation.sensitivity_sweep(cfg, _floats(args.epsilons), threads=args.threads)
    rows = [(_num(p.epsilon), str(p.welfare), _num(p.drop_ratio), str(int(p.nonproportional)))
            for p in result.points]
    text = _write_csv("sweep", ("epsilon", "welfare", "drop_ratio", "nonproportional_flag"), rows)
    extra = {}
    if args.reports:
        doc = [{"epsilon": p.epsilon, "welfare": p.welfare,
                "rounds": [r.to_dict() for r in p.outcome.reports]} for p in result.points]
        extra[args.reports] = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return text, cfg.seed, extra


def cmd_risk_project(args, inputs):
    model = risk.RevenueModel.from_dict(_read_json(args.model, inputs))
    data = risk.load_data(_read_json(args.data, inputs))
    iv = risk.project_revenue(model, data, args.rate, args.now)
    return _write_csv("risk", ("lo", "hi"), [(_num(iv.lo), _num(iv.hi))]), 0, {}


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the primary output here instead of stdout")
    common.add_argument("--manifest", help="write the run manifest here instead of stderr")

    p = _Parser(prog="hyperfn", description="Hyperfunction toolkit for economic models.")
    p.add_argument("--version", action="version", version=f"hyperfn {__version__}")
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def sub(group, name, fn, help_):
        g = groups.choices.get(group) or groups.add_parser(group)
        if not hasattr(g, "_cmds"):
            g._cmds = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
        sp = g._cmds.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = sub("hyper", "eval", cmd_hyper_eval, "evaluate a hyperfunction at points")
    sp.add_argument("--term", action="append", help="e.g. step:0, 2*delta:1, interval:0:1, rational:1/1,0,1")
    sp.add_argument("--file", help="hyperfunction JSON")
    sp.add_argument("--x", type=float, action="append", required=True)
    sp.add_argument("--numeric", action="store_true", help="use the sigma-limit evaluator")

    sp = sub("switch", "eval", cmd_switch_eval, "evaluate a switch expression")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--inputs")
    sp.add_argument("--via-hyperfunctions", action="store_true")

    sp = sub("pref", "choose", cmd_pref_choose, "choose between two labels")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--pair", required=True)

    sp = sub("prod", "triangle", cmd_prod_triangle, "frequency per order bin")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--bins", required=True)
    sp.add_argument("--exact", action="store_true", help="print exact rationals")

    sp = sub("prod", "abandon", cmd_prod_abandon, "abandonment order along a rate path")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--rates", required=True)

    sp = sub("inflate", "sweep", cmd_inflate_sweep, "welfare across inflation impulses")
    sp.add_argument("--config", required=True)
    sp.add_argument("--epsilons", required=True)
    sp.add_argument("--reports", help="write per-point welfare reports (JSON) here")
    sp.add_argument("--threads", type=int, help="worker threads (default HYPERFN_THREADS or 1)")

    sp = sub("risk", "project", cmd_risk_project, "interval revenue projection")
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--rate", type=float, required=True)
    sp.add_argument("--now", type=float, default=0.0)
    return p


def config_digest(argv: Sequence[str], inputs: list) -> str:
    h = hashlib.sha256()
    h.update("\0".join(argv).encode())
    for path, text in inputs:
        h.update(b"\0" + path.encode() + b"\0" + text.encode())
    return h.hexdigest()


def _emit(path: str | None, text: str, stream) -> str:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        return path
    stream.write(text)
    return "<stdout>"


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    inputs: list = []
    try:
        args = build_parser().parse_args(argv)
        text, seed, extra = args.func(args, inputs)
        outputs = [_emit(args.out, text, stdout)]
        for path, body in extra.items():
            outputs.append(_emit(path, body, stdout))
        manifest = {
            "command": " ".join([args.group, args.cmd]),
            "argv": argv,
            "config_digest": "sha256:" + config_digest(argv, inputs),
            "seed": seed,
            "tool_version": __version__,
            "outputs": outputs,
        }
        body = json.dumps(manifest, sort_keys=True)
        if args.manifest:
            _emit(args.manifest, body + "\n", stderr)
        else:
            stderr.write("manifest: " + body + "\n")
        return 0
    except UsageError as exc:
        stderr.write(f"error: USAGE: {exc}\n")
        return 2
    except HyperfnError as exc:
        stderr.write(f"error: {exc.code}: {exc}\n".replace("\n", " ").rstrip() + "\n")
        return 2
    except OSError as exc:
        stderr.write(f"error: IO: {exc}\n")
        return 3
    except (ValueError, KeyError, TypeError) as exc:
        stderr.write(f"error: VALIDATION: {type(exc).__name__}: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
