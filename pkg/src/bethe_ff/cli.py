"""Command-line front end: ``bethe-ff {solve,scalar-product,formfactor,verify,kernels}``."""
from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys

import numpy as np

from . import __version__
from . import kernels as K
from .bethe import BetheState, solve_bethe_newton, solve_bethe_qnls, solve_magnons
from .errors import BetheFFError
from .models import ModelSpec, complex_to_json

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- formatting --------------------------------------------------------------


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _plain(obj):
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    return obj


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float printed to 17 significant digits."""
    obj = _plain(obj) if _level == 0 else obj
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _envelope(model: ModelSpec | None, payload: dict) -> dict:
    out = {"version": __version__}
    if model is not None:
        out["model"] = model.to_dict()
    out.update(payload)
    return out


def _csv(model: ModelSpec, header: list, rows: list) -> str:
    buf = io.StringIO()
    buf.write(f"# bethe-ff {__version__}\n")
    buf.write(f"# model {json.dumps(model.to_dict(), sort_keys=True)}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt_float(float(v)) if not isinstance(v, int) else str(v) for v in row) + "\n")
    return buf.getvalue()


# --- argument parsing helpers ---------------------------------------------------


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _load_model(path: str | None) -> ModelSpec:
    if not path:
        raise UsageError("--model is required")
    try:
        return ModelSpec.from_dict(_load_json(path))
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"invalid model in {path}: {exc}") from exc


def _load_state(path: str, model: ModelSpec) -> BetheState:
    data = _load_json(path)
    if isinstance(data, dict) and "state" in data:
        data = data["state"]
    try:
        if "model" not in data:
            data = dict(data, model=model.to_dict())
        st = BetheState.from_dict(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"invalid Bethe state in {path}: {exc}") from exc
    if st.model != model:
        raise UsageError(f"state in {path} belongs to a different model")
    return st


def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def _complexes(text: str) -> list:
    try:
        return [complex(x.strip().replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse complex list {text!r}") from exc


def _grid(text: str | None, default) -> list:
    if text is None:
        return list(default)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("grid must be start:stop:num")
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        return list(np.linspace(a, b, n))
    return _floats(text)


# --- subcommands -----------------------------------------------------------------


def cmd_solve(args) -> int:
    model = _load_model(args.model)
    tol = args.tol if args.tol is not None else 1e-12
    given = [x is not None for x in (args.qn, args.roots, args.magnons)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --qn, --roots, --magnons")
    if args.qn is not None:
        if model.kind != "qnls":
            raise UsageError("--qn seeding is for QNLS; use --magnons or --roots for chains")
        try:
            st = solve_bethe_qnls(model, _floats(args.qn), tol=tol)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    elif args.magnons is not None:
        if not model.is_chain:
            raise UsageError("--magnons is for spin chains")
        try:
            ks = [int(k) for k in args.magnons.split(",") if k.strip()]
            st = solve_magnons(model, ks, tol=tol)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        st = solve_bethe_newton(model, _complexes(args.roots), tol=tol)
    _emit(args, dumps(_envelope(model, {"state": st.to_dict()})) + "\n")
    return EXIT_OK


def cmd_scalar_product(args) -> int:
    from .scalar import scalar_product

    model = _load_model(args.model)
    mus = _load_state(args.mus, model)
    lam = _complexes(args.lambdas) if args.lambdas else []
    tol = args.tol if args.tol is not None else 1e-10
    res = scalar_product(model, mus, lam, onshell_tol=tol)
    payload = {"mus": mus.to_dict()["roots"], "lambdas": [complex_to_json(z) for z in lam], "result": res.to_dict()}
    if args.oracle:
        if not model.is_chain:
            raise UsageError("--oracle is available for spin chains only")
        from .oracle import oracle_scalar_product

        o = oracle_scalar_product(model, mus, lam)
        payload["oracle"] = complex_to_json(o)
        payload["relative_gap"] = abs(res.value - o) / max(abs(o), 1e-300)
    _emit(args, dumps(_envelope(model, payload)) + "\n")
    return EXIT_OK


def cmd_formfactor(args) -> int:
    model = _load_model(args.model)
    mus = _load_state(args.mus, model)
    las = _load_state(args.lambdas, model)
    tol = args.tol if args.tol is not None else 1e-10
    fmt = args.format or "json"
    if args.kind == "psi":
        from .qnls import ff_psi_via_sigma, ff_psi_zero, psi_phase

        if model.kind != "qnls":
            raise UsageError("psi form factors need a QNLS model")
        base = ff_psi_zero(model, mus, las, tol)
        alt = ff_psi_via_sigma(model, mus, las, tol)
        gap = abs(base.value - alt.value) / max(abs(base.value), 1e-300)
        rows = []
        for x in _grid(args.x, [0.0]):
            for t in _grid(args.t, [0.0]):
                ph = psi_phase(x, t, mus, las) if (x or t) else 1.0
                rows.append((x, t, base.value * ph, alt.value * ph))
        if fmt == "csv":
            text = _csv(
                model,
                ["x", "t", "re", "im", "sigma_re", "sigma_im", "rel_gap"],
                [(x, t, a.real, a.imag, b.real, b.imag, gap) for x, t, a, b in rows],
            )
        else:
            text = dumps(
                _envelope(
                    model,
                    {
                        "kind": "psi",
                        "relative_gap": gap,
                        "condition": base.condition,
                        "rows": [{"x": x, "t": t, "slavnov-det": a, "sigma-omega": b} for x, t, a, b in rows],
                    },
                )
            ) + "\n"
    elif args.kind == "q1":
        from .qnls import ff_q1

        if model.kind != "qnls":
            raise UsageError("q1 form factors need a QNLS model")
        xs = _grid(args.x, np.linspace(0.0, model.L, 11))
        results = [ff_q1(x, model, mus, las, tol) for x in xs]
        if fmt == "csv":
            text = _csv(model, ["x", "re", "im"], [(x, r.value.real, r.value.imag) for x, r in zip(xs, results)])
        else:
            diag = results[0].diagnostics if results else {}
            text = dumps(
                _envelope(
                    model,
                    {
                        "kind": "q1",
                        "derivative_route_gap": diag.get("route_gap", 0.0),
                        "rows": [{"x": x, "value": r.value} for x, r in zip(xs, results)],
                    },
                )
            ) + "\n"
    else:
        from .spin import ff_sigma_minus

        if not model.is_chain:
            raise UsageError("sigma-minus form factors need a spin chain")
        sites = [args.site] if args.site else list(range(1, model.M + 1))
        rows = []
        for m in sites:
            r = ff_sigma_minus(model, mus, las, m, tol)
            row = {"m": m, "value": r.value, "condition": r.condition}
            if args.oracle:
                from .oracle import oracle_sigma_minus

                o = oracle_sigma_minus(model, mus, las, m)
                row["oracle"] = o
                row["relative_gap"] = abs(r.value - o) / max(abs(o), 1e-300)
            rows.append(row)
        if fmt == "csv":
            text = _csv(model, ["m", "re", "im"], [(row["m"], row["value"].real, row["value"].imag) for row in rows])
        else:
            text = dumps(_envelope(model, {"kind": "sigma-minus", "rows": rows})) + "\n"
    _emit(args, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    if args.suite not in SUITES + ("all",):
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES + ('all',))}")
    report = run_suite(args.suite, args.seed)
    _emit(args, dumps(report) + "\n")
    return EXIT_OK if report["passed"] else EXIT_NUMERIC


def cmd_kernels(args) -> int:
    model = _load_model(args.model)
    mu = _complexes(args.mu)
    lam = _complexes(args.lam)
    if len(mu) != 1 or len(lam) != 1:
        raise UsageError("--mu and --lam take one complex number each")
    vals = {w: K.kernel(model, w, mu[0], lam[0]) for w in K.KERNELS}
    _emit(args, dumps(_envelope(model, {"mu": mu[0], "lambda": lam[0], "kernels": vals})) + "\n")
    return EXIT_OK


# --- entry point ---------------------------------------------------------------------


def _common(p):
    p.add_argument("--model", help="model JSON file")
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--tol", type=float, default=None, help="certification / on-shell tolerance")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bethe-ff", description=__doc__)
    parser.add_argument("--version", action="version", version=f"bethe-ff {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("solve", help="solve the Bethe equations")
    _common(p)
    p.add_argument("--qn", help="QNLS quantum numbers, e.g. -1,0,1")
    p.add_argument("--magnons", help="spin chain: free-magnon momenta k (2 pi k / M) as seeds")
    p.add_argument("--roots", help="explicit complex seed rapidities, e.g. 0.1+0.2j,-0.3")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scalar-product", help="scalar product of an on-shell state with a free vector")
    _common(p)
    p.add_argument("--mus", required=True, help="Bethe state JSON (on-shell set)")
    p.add_argument("--lambdas", default="", help="free rapidities, comma separated complex numbers")
    p.add_argument("--oracle", action="store_true", help="also evaluate the brute-force oracle")
    p.set_defaults(func=cmd_scalar_product)

    p = sub.add_parser("formfactor", help="form factors of psi, Q1 or sigma-minus")
    _common(p)
    p.add_argument("kind", choices=("psi", "q1", "sigma-minus"))
    p.add_argument("--mus", required=True, help="Bethe state JSON for the dual state")
    p.add_argument("--lambdas", required=True, help="Bethe state JSON for the ket state")
    p.add_argument("--x", help="x values: list a,b,c or grid start:stop:num")
    p.add_argument("--t", help="t values (psi only): list or grid")
    p.add_argument("--site", type=int, help="sigma-minus: single site (default all)")
    p.add_argument("--oracle", action="store_true", help="sigma-minus: include the oracle value")
    p.set_defaults(func=cmd_formfactor)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    _common(p)
    p.add_argument("--suite", default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kernels", help="evaluate f, g, h, t")
    _common(p)
    p.add_argument("--mu", required=True)
    p.add_argument("--lam", required=True)
    p.set_defaults(func=cmd_kernels)
    return parser


_VALUE_FLAGS = {"--qn", "--roots", "--magnons", "--lambdas", "--x", "--t", "--mu", "--lam"}


def _join_negative_values(argv: list) -> list:
    """Let ``--qn -1,0,1`` through: values starting with '-' are glued to their flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and re.match(r"-[\d.]", argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bethe-ff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BetheFFError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
        print(f"bethe-ff: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"bethe-ff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
