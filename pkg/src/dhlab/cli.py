"""Command-line front end: ``dhlab <command> --config run.json [--out prefix]``.

Exit codes: 0 success, 2 invariant violation, 3 config error, 4 degenerate parameters.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import enum
import io
import json
import logging
import math
import os
import sys
from fractions import Fraction

from .errors import DegenerateParams, DHLabError, PrecisionExhausted

log = logging.getLogger("dhlab")

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG, EXIT_DEGENERATE = 0, 2, 3, 4
COMMANDS = ("convergents", "params", "identity", "meanvalues", "scan-minor", "tails", "j1",
            "search", "s0")


class ConfigError(DHLabError):
    pass


# config ---------------------------------------------------------------------------

@dataclasses.dataclass
class RunConfig:
    lambdas: list
    varpi: object = 0
    eps: float = 0.05
    delta: float = 0.1
    X: object = 100.0
    overrides: dict = dataclasses.field(default_factory=dict)
    seed: int = 0
    output: str | None = None
    knobs: dict = dataclasses.field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        names = {f.name for f in dataclasses.fields(cls)} - {"knobs"}
        base = {k: d[k] for k in names if k in d}
        knobs = {k: v for k, v in d.items() if k not in names}
        if "lambdas" not in base:
            base["lambdas"] = [1, -1, -1, -1]
        if not isinstance(base["lambdas"], list) or len(base["lambdas"]) != 4:
            raise ConfigError("lambdas must be a list of four values")
        return cls(**base, knobs=knobs)


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig.from_dict({})
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return RunConfig.from_dict(data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _ratio(cfg: RunConfig):
    from .reals import parse_literal

    return parse_literal(cfg.lambdas[0]) / parse_literal(cfg.lambdas[1])


def resolve_X(cfg: RunConfig) -> float:
    """A number, or "from-convergent:<i>": the i-th (0-based) ladder point of lambda1/lambda2."""
    from .diophantine import ladder

    X = cfg.X
    if isinstance(X, str) and X.startswith("from-convergent:"):
        try:
            idx = int(X.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad convergent index in {X!r}") from exc
        steps = ladder(_ratio(cfg), idx + 1 + 64, min_q=int(cfg.knobs.get("min_q", 1)))
        if idx < 0 or idx >= len(steps):
            raise ConfigError(f"ladder has no point {idx}")
        return steps[idx][1]
    if isinstance(X, bool) or not isinstance(X, (int, float)):
        raise ConfigError(f"X must be a number or 'from-convergent:<i>', got {X!r}")
    return float(X)


def build_spec(cfg: RunConfig):
    from .problem import ProblemSpec

    return ProblemSpec.build(cfg.lambdas, cfg.varpi, resolve_X(cfg), cfg.delta, cfg.eps,
                             cfg.overrides or None, cfg.knobs.get("ghosh_eps"))


# output ---------------------------------------------------------------------------

def jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(obj.to_dict() if hasattr(obj, "to_dict") else dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def dumps(obj) -> str:
    # json writes floats with repr, the shortest string that round-trips
    return json.dumps(jsonable(obj), indent=1, sort_keys=True) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


class Sink:
    def __init__(self, prefix: str | None):
        self.prefix = prefix

    def emit(self, suffix: str, text: str):
        if self.prefix is None:
            sys.stdout.write(text)
        else:
            path = f"{self.prefix}.{suffix}"
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            log.info("wrote %s", path)


# commands -------------------------------------------------------------------------

def cmd_convergents(cfg, args, sink):
    from .diophantine import ladder

    steps = ladder(_ratio(cfg), int(cfg.knobs.get("count", 10)), int(cfg.knobs.get("min_q", 1)))
    rows = [(i, c.a, c.q, c.quality, X) for i, (c, X) in enumerate(steps)]
    sink.emit("csv", csv_text(("index", "a", "q", "quality", "X"), rows))
    return EXIT_OK


def cmd_params(cfg, args, sink):
    spec = build_spec(cfg)
    sink.emit("json", dumps({"params": spec.params.to_dict(), "mixed_signs": spec.mixed_signs}))
    return EXIT_OK


def cmd_identity(cfg, args, sink):
    from .analysis.integrals import circle_identity

    spec = build_spec(cfg)
    rep = circle_identity(spec, float(cfg.knobs.get("A", 1000.0)), cfg.knobs.get("step"))
    d = dataclasses.asdict(rep)
    d["passed"] = rep.passed
    sink.emit("json", dumps(d))
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_meanvalues(cfg, args, sink):
    from .analysis.meanvalues import Variant, mean_value_L2, mean_value_L4, selberg_J
    from .primes import sieve_range

    X, d = resolve_X(cfg), cfg.delta
    h = float(cfg.knobs.get("h", 5.0))
    table = sieve_range(0, math.ceil(X + h) + 1)
    l2 = mean_value_L2(X, d, table)
    l4 = mean_value_L4(X, d, table)
    out = {
        "X": X, "delta": d, "h": h, "L2": l2, "L4": l4,
        "J": selberg_J(X, h, d, Variant.LINEAR, table),
        "J_star": selberg_J(X, h, d, Variant.SQRT, table),
    }
    ok = abs(l2.exact - l2.quadrature) <= 1e-9 * max(l2.exact, 1e-300) \
        and abs(l4.exact - l4.quadrature) <= 1e-8 * l4.exact
    out["passed"] = ok
    sink.emit("json", dumps(out))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_scan(cfg, args, sink):
    from .analysis.envelopes import minor_arc_scan

    spec = build_spec(cfg)
    rep = minor_arc_scan(spec, int(cfg.knobs.get("samples", 10000)), args.seed, args.threads)
    if sink.prefix is not None:
        rows = [(r.alpha, r.V, r.q1, r.q2, r.label) for r in rep.rows]
        sink.emit("csv", csv_text(("alpha", "V", "q1", "q2", "label"), rows))
    sink.emit("json", dumps(rep.to_dict()))
    return EXIT_OK if not rep.dichotomy_violations else EXIT_VIOLATION


def cmd_tails(cfg, args, sink):
    from .analysis.integrals import Interval, integral_I
    from .analysis.tails import trivial_tail_bound

    spec = build_spec(cfg)
    A = float(cfg.knobs.get("A", 2 * spec.params.R))
    tb = trivial_tail_bound(spec, A)
    out = {"tail": dataclasses.asdict(tb)}
    ok = True
    if cfg.knobs.get("measure"):
        v = integral_I(spec, Interval(A, 10 * A)).value + integral_I(spec, Interval(-10 * A, -A)).value
        out["measured_A_10A"] = abs(v)
        ok = abs(v) <= tb.bound
    out["passed"] = ok
    sink.emit("json", dumps(out))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_j1(cfg, args, sink):
    from .analysis.major import major_lower_J1

    spec = build_spec(cfg)
    res = major_lower_J1(spec, int(cfg.knobs.get("mc_samples", 100000)), args.seed, args.threads)
    ok = res.estimate is None or res.estimate >= res.constructive
    out = res.to_dict()
    out["passed"] = ok
    sink.emit("json", dumps(out))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_search(cfg, args, sink):
    from .search import FixedWindow, TheoremThreshold, find_solutions, to_csv

    spec = build_spec(cfg)
    if cfg.knobs.get("mode", "theorem") == "window":
        mode = FixedWindow(float(cfg.knobs.get("eta", spec.eta)))
    else:
        mode = TheoremThreshold(float(cfg.knobs.get("threshold_eps", cfg.eps)))
    limit = cfg.knobs.get("limit")
    recs = find_solutions(spec, mode, None if limit is None else int(limit), args.threads)
    if sink.prefix is not None:
        sink.emit("json", dumps({"X": spec.X, "mode": dataclasses.asdict(mode), "count": len(recs),
                                 "records": [r.to_dict() for r in recs]}))
    sink.emit("csv", to_csv(recs))
    return EXIT_OK


def cmd_s0(cfg, args, sink):
    from .powers2 import S0Input, s_zero_report

    k = cfg.knobs
    try:
        inp = S0Input(float(k["lambda1"]), int(k.get("q1", 1)), int(k.get("q2", 1)), float(k["eta"]))
    except KeyError as exc:
        raise ConfigError(f"s0 needs {exc.args[0]}") from exc
    sink.emit("json", dumps({"input": dataclasses.asdict(inp), "report": s_zero_report(inp)}))
    return EXIT_OK


HANDLERS = {
    "convergents": cmd_convergents, "params": cmd_params, "identity": cmd_identity,
    "meanvalues": cmd_meanvalues, "scan-minor": cmd_scan, "tails": cmd_tails, "j1": cmd_j1,
    "search": cmd_search, "s0": cmd_s0,
}


def resolve_threads(value: int | None) -> int:
    if value is None:
        env = os.environ.get("DH_LAB_THREADS")
        value = int(env) if env else 1
    if value == 0:
        value = os.cpu_count() or 1
    if value < 0:
        raise ConfigError("threads must be >= 0")
    return value


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dhlab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON run config")
    p.add_argument("--out", help="output path prefix (default: stdout)")
    p.add_argument("--threads", type=int, help="worker threads, 0 = auto (env DH_LAB_THREADS)")
    p.add_argument("--seed", type=int, help="overrides the config seed")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        args.threads = resolve_threads(args.threads)
        if args.seed is None:
            args.seed = int(cfg.seed)
        if args.seed < 0 or args.seed >= 2**64:
            raise ConfigError("seed must be a u64")
        prefix = args.out if args.out is not None else cfg.output
        return HANDLERS[args.command](cfg, args, Sink(prefix))
    except DegenerateParams as exc:
        log.error("degenerate parameters: %s", exc)
        return EXIT_DEGENERATE
    except (ConfigError, ValueError, PrecisionExhausted, DHLabError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
