"""Command-line front end: reduce, eval, relations, selftest."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .brackets import BracketTerm, ClassExpr, canonicalize, canonicalize_expr, fmt_q
from .p1eval import EvalConfig, NotEvaluable, ResourceError, SearchFailure, evaluate_expr, \
    find_tilde_tau
from .parse import ParseError, parse
from .reducer import DeterminationFailure, PreconditionError, Reducer, ReducerConfig, \
    ReductionError
from .relations import SetPartitionSpec, elliptic_vanishing, raw_monodromy_relation

SCHEMA = "gwtaut/1"


class ConfigError(ValueError):
    pass


def load_config(path: str | None, max_degree: int | None = None) -> ReducerConfig:
    """Key-value config: ``key = value`` lines, ``#`` comments.

    Keys: max_degree, max_q, max_sigma, sign (auto | +1 | -1), and
    ``profile.NAME.D = level:coeff, ...`` for named refined descendents.
    """
    opts: dict = {}
    profiles: dict = {}
    if path:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, val = (s.strip() for s in line.split("=", 1))
                try:
                    if key.startswith("profile."):
                        _, name, d = key.split(".")
                        coeffs = {}
                        for item in val.split(","):
                            lv, c = item.split(":")
                            coeffs[int(lv)] = Fraction(c.strip())
                        profiles.setdefault(name, {})[int(d)] = coeffs
                    elif key in ("max_degree", "max_q", "max_sigma"):
                        opts[key] = int(val)
                    elif key == "sign":
                        if val not in ("auto", "+1", "-1", "1"):
                            raise ValueError("sign must be auto, +1 or -1")
                        opts[key] = val
                    else:
                        raise ValueError(f"unknown key {key!r}")
                except ValueError as e:
                    raise ConfigError(f"{path}:{lineno}: {e}") from None
    if max_degree is not None:
        opts["max_degree"] = max_degree
    ev = EvalConfig(max_degree=opts.get("max_degree", 8), max_q=opts.get("max_q", 3),
                    profiles=profiles)
    return ReducerConfig(eval=ev, max_sigma=opts.get("max_sigma", 6),
                         sign=opts.get("sign", "auto"))


def _as_expr(x) -> ClassExpr:
    return canonicalize(x) if isinstance(x, BracketTerm) else canonicalize_expr(x)


def _brackets(x):
    if isinstance(x, BracketTerm):
        return [x]
    return list(x)


def _parse_parts(spec: str) -> SetPartitionSpec:
    parts = []
    for chunk in spec.split("|"):
        parts.append(tuple(int(s) for s in chunk.split(",") if s.strip()))
    return SetPartitionSpec(parts)


def cmd_reduce(args, config) -> dict:
    red = Reducer(config)
    out = red.reduce(_as_expr(parse(args.input)))
    res = {"result": out.to_json(), "text": out.render()}
    if args.trace:
        res["trace"] = red.trace
    return res


def cmd_eval(args, config) -> dict:
    red = Reducer(config)
    out = red.reduce(_as_expr(parse(args.input)))
    value = evaluate_expr(out, config.eval)
    res = {"value": fmt_q(value), "text": fmt_q(value)}
    if args.trace:
        res["trace"] = red.trace
    return res


def cmd_relations(args, config) -> dict:
    rels = []
    for t in _brackets(parse(args.input)):
        if args.kind == "monodromy":
            rels.append(raw_monodromy_relation(t))
        else:
            if not args.parts:
                raise PreconditionError("elliptic relations need --parts, e.g. '0,1|2,3'")
            # parts index the bracket's insertions; the rest form the even monomial M
            P = _parse_parts(args.parts)
            slots = sorted(P.support)
            if slots and slots[-1] >= len(t.insertions):
                raise PreconditionError(f"--parts refers to slot {slots[-1]} of "
                                        f"{len(t.insertions)} insertions")
            M = tuple(x for i, x in enumerate(t.insertions) if i not in P.support)
            levels = [t.insertions[i].level for i in slots]
            P = SetPartitionSpec([[slots.index(i) for i in part] for part in P.parts])
            rels.append(elliptic_vanishing(M, P, levels, d=t.d, r=t.r, odd_only=args.odd_only))
    text = "\n".join(f"{r.label}: {r.expr.render()} = 0" for r in rels)
    return {"relations": [r.to_json() for r in rels], "text": text}


def cmd_tilde(args, config) -> dict:
    tau = find_tilde_tau(args.degree, config.eval.max_q, config.eval.max_degree)
    body = tau.to_json()
    coeffs = " + ".join(f"{fmt_q(Fraction(c))}*t{q}(w)" for q, c in sorted(tau.coefficients.items()))
    return {"tilde": body, "text": f"d={args.degree}: {coeffs} (rank {tau.rank})"}


def cmd_selftest(args, config) -> dict:
    from .selftest import run_all

    results = run_all(set(args.only) if args.only else None)
    return {"criteria": [r.to_json() for r in results],
            "text": "\n".join(r.line() for r in results),
            "ok": all(r.ok for r in results)}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gwtaut", description=__doc__)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--trace", action="store_true", help="include relation provenance")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--config", default=None, help="key-value config file")
    sub = p.add_subparsers(dest="verb", required=True)

    for verb, help_ in (("reduce", "tautological presentation of an expression"),
                        ("eval", "reduce and fold r=0 atoms to a rational")):
        s = sub.add_parser(verb, help=help_)
        s.add_argument("input", nargs="?", help="expression text (default: --file or stdin)")
        s.add_argument("--file", default=None)

    s = sub.add_parser("relations", help="dump generated relations")
    s.add_argument("kind", choices=("monodromy", "elliptic"))
    s.add_argument("input", help="expression text")
    s.add_argument("--parts", default=None, help="set partition of the non-identity slots")
    s.add_argument("--odd-only", action="store_true")

    s = sub.add_parser("tilde", help="refined descendent and its gamma certificate")
    s.add_argument("degree", type=int)

    s = sub.add_parser("selftest", help="run the acceptance criteria")
    s.add_argument("--only", type=int, nargs="*", default=None)
    return p


COMMANDS = {"reduce": cmd_reduce, "eval": cmd_eval, "relations": cmd_relations,
            "tilde": cmd_tilde, "selftest": cmd_selftest}


def _read_input(args) -> None:
    if not hasattr(args, "file"):
        return

    if args.input is None:
        if args.file:
            with open(args.file) as fh:
                args.input = fh.read()
        else:
            args.input = sys.stdin.read()
    elif args.file:
        raise ConfigError("give either an expression or --file, not both")


def _emit(args, payload: dict, stream) -> None:
    if args.json:
        payload = {k: v for k, v in payload.items() if k != "text" or args.verb == "selftest"}
        json.dump({"schema": SCHEMA, **payload}, stream, indent=2)
        stream.write("\n")
    else:
        stream.write(payload["text"] + "\n")
        if args.trace and payload.get("trace"):
            for step in payload["trace"]:
                stream.write("# " + json.dumps(step) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config, args.max_degree)
        config.trace = args.trace
        _read_input(args)
        payload = COMMANDS[args.verb](args, config)
    except ParseError as e:
        return _fail(args, e.to_json(), str(e))
    except (ConfigError, OSError, PreconditionError, NotEvaluable, ResourceError, SearchFailure,
            DeterminationFailure, ReductionError, ValueError) as e:
        return _fail(args, {"error": type(e).__name__, "message": str(e)}, f"error: {e}")
    _emit(args, payload, sys.stdout)
    if args.verb == "selftest" and not payload["ok"]:
        return 1
    return 0


def _fail(args, body: dict, text: str) -> int:
    if args.json:
        json.dump({"schema": SCHEMA, **body}, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stderr.write(text + "\n")
    return 2


if __name__ == "__main__":
    sys.exit(main())
