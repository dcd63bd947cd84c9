"""Command-line front end.

Subcommands::

    jcsim evolve --n1 1 --n2 3 --steps 1000 -o sweep.csv --plot sweep.svg
    jcsim period --n1 5 --n2 10
    jcsim catgen --atoms 2 --alpha 1.009 --parity odd -o cat.csv
    jcsim validate-dispersive --ratios 20,50,100 --n-max 5

Every CSV starts with a ``#`` comment line holding the tool version and the
parameters, followed by the header row. Exit codes: 0 success, 2 invalid
arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import math
import os
import sys
from typing import Any, Sequence

from . import __version__, catgen, jc_oracle, stats
from .dispersive import TwoFockSpec
from .errors import InvalidArgumentError, JCSimError, NumericalError

log = logging.getLogger("jcsim")

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC = 0, 2, 3

DEFAULTS: dict[str, dict[str, Any]] = {
    "evolve": {"w1": 0.5, "w2": 0.5, "phi_min": 0.0, "phi_max": None, "steps": 1000},
    "period": {},
    "catgen": {"parity": "even", "cutoff": 64, "normalization": "numeric"},
    "validate-dispersive": {"ratios": "20,50,100", "n_max": 5, "lambda_t": 1.0,
                            "dispersive_phase": None},
}
# Not recorded in CSV headers; they do not change the numbers.
RUNTIME_KEYS = {"command", "config", "output", "plot", "threads"}


def fmt_angle(x: float) -> str:
    return format(x, ".12g")


def fmt(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jcsim", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"jcsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, csv_out=True, plot=False):
        p.add_argument("--config", help="JSON file with parameters; flags override it")
        if csv_out:
            p.add_argument("-o", "--output", help="CSV path ('-' for stdout)")
        if plot:
            p.add_argument("--plot", help="optional SVG output path")
        return p

    p = common(sub.add_parser("evolve", help="sweep photon statistics over phi"), plot=True)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--w1", type=float, help="relative weight of |n1> (default equal)")
    p.add_argument("--w2", type=float, help="relative weight of |n2> (default equal)")
    p.add_argument("--phi-min", type=float)
    p.add_argument("--phi-max", type=float, help="default: one period")
    p.add_argument("--steps", type=int)
    p.add_argument("--threads", type=int, help="worker threads (env JCSIM_THREADS)")

    p = common(sub.add_parser("period", help="period of the evolved state"), csv_out=False)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)

    p = common(sub.add_parser("catgen", help="N-atom cat-state photon distribution"), plot=True)
    p.add_argument("--atoms", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--parity", choices=["even", "odd"])
    p.add_argument("--cutoff", type=int)
    p.add_argument("--normalization", choices=["numeric", "beta-reference"])

    p = common(sub.add_parser("validate-dispersive",
                              help="exact JC evolution vs the dispersive model"))
    p.add_argument("--ratios", help="comma-separated detuning/coupling ratios")
    p.add_argument("--n-max", type=int)
    p.add_argument("--lambda-t", type=float, help="coupling x interaction time")
    p.add_argument("--dispersive-phase", type=float,
                   help="lambda_eff x time; overrides --lambda-t per ratio")
    return parser


def resolve_config(args: argparse.Namespace) -> dict[str, Any]:
    """Defaults < JSON config file < command-line flags."""
    cfg = dict(DEFAULTS[args.command])
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidArgumentError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise InvalidArgumentError("config file must hold a JSON object")
        cfg.update({k.replace("-", "_"): v for k, v in loaded.items()})
    for key, value in vars(args).items():
        if value is not None:
            cfg[key] = value
    cfg.setdefault("output", "-")
    return cfg


def resolve_threads(cfg: dict[str, Any]) -> int:
    threads = cfg.get("threads") or os.environ.get("JCSIM_THREADS") or os.cpu_count() or 1
    try:
        threads = int(threads)
    except ValueError as exc:
        raise InvalidArgumentError(f"invalid thread count {threads!r}") from exc
    if threads < 1:
        raise InvalidArgumentError(f"thread count must be positive, got {threads}")
    return threads


def require(cfg: dict[str, Any], *keys: str) -> None:
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise InvalidArgumentError("missing required parameter(s): "
                                   + ", ".join("--" + k.replace("_", "-") for k in missing))


@contextlib.contextmanager
def open_output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_csv(path: str, command: str, cfg: dict[str, Any], header: Sequence[str],
              rows: Sequence[Sequence[str]]) -> None:
    params = {k: v for k, v in sorted(cfg.items()) if k not in RUNTIME_KEYS}
    with open_output(path) as fh:
        fh.write(f"# jcsim {__version__} {command} {json.dumps(params, sort_keys=True)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _info(cfg: dict[str, Any], message: str) -> None:
    # keep stdout clean when it carries the CSV
    print(message, file=sys.stderr if cfg.get("output", "-") == "-" else sys.stdout)


def cmd_evolve(cfg: dict[str, Any]) -> int:
    require(cfg, "n1", "n2")
    n1, n2 = int(cfg["n1"]), int(cfg["n2"])
    if not 0 <= n1 < n2:
        raise InvalidArgumentError(f"need 0 <= n1 < n2, got n1={n1}, n2={n2}")
    w1, w2 = float(cfg["w1"]), float(cfg["w2"])
    if not (w1 > 0 and w2 > 0):
        raise InvalidArgumentError("weights must be positive")
    spec = TwoFockSpec.from_weights(n1, n2, w1, w2)
    phi_min = float(cfg["phi_min"])
    phi_max = cfg["phi_max"]
    phi_max = phi_min + stats.period(n1, n2) if phi_max is None else float(phi_max)
    cfg["phi_max"] = phi_max
    result = stats.sweep(spec, phi_min, phi_max, int(cfg["steps"]), threads=resolve_threads(cfg))

    rows = [[fmt_angle(s.phi), fmt(s.p_n1), fmt(s.p_n2), fmt(s.mean_n), fmt(s.var_n),
             fmt(s.mandel_q), "1" if s.degenerate else "0"] for s in result.samples]
    write_csv(cfg["output"], "evolve", cfg,
              ["phi", "p_n1", "p_n2", "mean_n", "var_n", "mandel_q", "degenerate"], rows)
    if cfg.get("plot"):
        from .plots import plot_sweep
        plot_sweep(result, cfg["plot"])
    if all(s.degenerate for s in result.samples):
        log.error("every sample in the range is degenerate")
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_period(cfg: dict[str, Any]) -> int:
    require(cfg, "n1", "n2")
    n1, n2 = int(cfg["n1"]), int(cfg["n2"])
    if not 0 <= n1 < n2:
        raise InvalidArgumentError(f"need 0 <= n1 < n2, got n1={n1}, n2={n2}")
    frac = stats.period_over_pi(n1, n2)
    print(f"{stats.format_pi_multiple(frac)} ({fmt_angle(float(frac) * math.pi)})")
    return EXIT_OK


def cmd_catgen(cfg: dict[str, Any]) -> int:
    require(cfg, "atoms", "alpha")
    spec = catgen.CatSpec(int(cfg["atoms"]), float(cfg["alpha"]),
                          catgen.Parity.parse(cfg["parity"]), int(cfg["cutoff"]))
    dist = catgen.distribution(spec, cfg["normalization"])
    rows = [[str(n), fmt(p)] for n, p in enumerate(dist.probabilities)]
    write_csv(cfg["output"], "catgen", cfg, ["n", "probability"], rows)
    top = catgen.dominant_components(dist, 2)
    _info(cfg, "dominant pair: " + ",".join(str(n) for n in sorted(top)))
    if cfg.get("plot"):
        from .plots import plot_cat
        plot_cat(dist, cfg["plot"])
    return EXIT_OK


def parse_ratios(value: Any) -> list[float]:
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, list):
        return [float(v) for v in value]
    try:
        return [float(v) for v in str(value).split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidArgumentError(f"invalid ratio list {value!r}") from exc


def cmd_validate_dispersive(cfg: dict[str, Any]) -> int:
    ratios = parse_ratios(cfg["ratios"])
    if not ratios:
        raise InvalidArgumentError("no detuning ratios given")
    bad = [r for r in ratios if r < jc_oracle.MIN_DISPERSIVE_RATIO]
    if bad:
        raise InvalidArgumentError(f"ratios {bad} are below the dispersive regime (>= 5)")
    n_max = int(cfg["n_max"])
    rows, fidelity_table = [], {}
    for ratio in ratios:
        params = jc_oracle.JCParams.from_ratio(ratio, cutoff=n_max + 2)
        if cfg.get("dispersive_phase") is not None:
            t = float(cfg["dispersive_phase"]) / params.lambda_eff
        else:
            t = float(cfg["lambda_t"]) / params.coupling
        cmp = jc_oracle.compare_dispersive(params, n_max, t)
        fidelity_table[ratio] = cmp.fidelities
        for n, fid, leak in zip(cmp.ns, cmp.fidelities, cmp.leakages):
            rows.append([format(ratio, "g"), str(n), fmt(fid), fmt(leak),
                         fmt(cmp.phase_slope), fmt(cmp.lambda_eff_theory)])
    write_csv(cfg["output"], "validate-dispersive", cfg,
              ["detuning_ratio", "n", "fidelity", "leakage", "phase_slope", "lambda_eff_theory"],
              rows)
    ordered = sorted(set(ratios))
    for lo, hi in zip(ordered, ordered[1:]):
        if not (fidelity_table[hi] > fidelity_table[lo]).all():
            log.error("fidelity does not increase from ratio %g to %g", lo, hi)
            return EXIT_NUMERIC
    return EXIT_OK


COMMANDS = {
    "evolve": cmd_evolve,
    "period": cmd_period,
    "catgen": cmd_catgen,
    "validate-dispersive": cmd_validate_dispersive,
}


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="jcsim: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except InvalidArgumentError as exc:
        log.error("%s", exc)
        return EXIT_ARGS
    except NumericalError as exc:
        log.error("%s", exc)
        return EXIT_NUMERIC
    except JCSimError as exc:  # pragma: no cover
        log.error("%s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
