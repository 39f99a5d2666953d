"""Command-line front end.

stdout carries only machine-readable output (numbers, JSON or CSV);
diagnostics go to stderr. Exit codes: 0 success / every inequality holds,
2 an inequality violation was asserted, 1 usage or numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections import Counter
from contextlib import contextmanager
from dataclasses import replace

from . import __version__
from .entropy import renyi_entropy, von_neumann_entropy
from .inequalities import (
    HOLDS,
    MONOGAMY_FAMILIES,
    NOT_APPLICABLE,
    POLYGAMY_FAMILIES,
    VIOLATED,
    BoundParams,
    figure_curves,
    measure_terms,
    report_from_terms,
)
from .measures import PartitionSpec, renyi_assistance, renyi_entanglement
from .qcore import StateError, partial_trace
from .roof import RoofOptions
from .states import make, parse_state_flag

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    """12 significant digits, locale independent."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".12g")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise CliError(f"cannot parse number list {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise CliError(f"cannot parse index list {text!r}") from None


def mu_grid(text: str) -> list[float]:
    """Inclusive grid from ``a:b:step``; ``a:b`` alone is rejected unless a == b."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise CliError(f"range must look like a:b:step, got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 0.0
    except ValueError:
        raise CliError(f"cannot parse range {text!r}") from None
    if a == b:
        return [a]
    if step <= 0:
        raise CliError("range step must be positive")
    if b < a:
        raise CliError(f"empty range {text!r}")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 12) for i in range(n)]


def _opts(args) -> RoofOptions:
    return RoofOptions(
        restarts=args.restarts,
        tol=args.tol,
        seed=args.seed,
        max_iters=args.max_iters,
        max_ensemble=args.max_ensemble,
    )


def _state(args):
    state = make(parse_state_flag(args.state, default_seed=args.seed))
    keep = getattr(args, "trace_keep", None)
    if keep:
        state = partial_trace(state, _ints(keep))
    return state


def _partition(args, state) -> PartitionSpec:
    if args.partners:
        return PartitionSpec(args.focus, tuple(_ints(args.partners)))
    return PartitionSpec.rest(args.focus, state.layout.n)


@contextmanager
def _output(args):
    if args.out in (None, "-"):
        yield sys.stdout
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _write_json(args, obj) -> None:
    with _output(args) as fh:
        fh.write(json.dumps(obj, indent=2) + "\n")


def _write_csv(args, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    with _output(args) as fh:
        fh.write(buf.getvalue())


def _cell(x):
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    return fmt(x)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# -- commands ---------------------------------------------------------------

def cmd_entropy(args) -> int:
    state = _state(args)
    if args.von_neumann:
        value = von_neumann_entropy(state)
    else:
        if args.alpha is None:
            raise CliError("--alpha is required (or pass --von-neumann)")
        if args.alpha == 1:
            raise CliError("alpha = 1 is the von Neumann limit; use --von-neumann")
        value = renyi_entropy(state, args.alpha)
    if args.format == "json":
        _write_json(args, {"value": value})
    elif args.format == "csv":
        _write_csv(args, ["value"], [[value]])
    else:
        with _output(args) as fh:
            fh.write(fmt(value) + "\n")
    return EXIT_OK


def cmd_measure(args) -> int:
    state = _state(args)
    part = _partition(args, state)
    opts = _opts(args)
    if args.assistance:
        res = renyi_assistance(state, part, args.alpha, opts)
    else:
        res = renyi_entanglement(state, part, args.alpha, opts)
    if args.decomposition_out and res.decomposition is not None:
        with open(args.decomposition_out, "w", encoding="utf-8") as fh:
            json.dump(res.decomposition.to_json(), fh)
            fh.write("\n")
    for note in res.notes:
        _warn(note)
    out = {
        "quantity": "assistance" if args.assistance else "entanglement",
        "alpha": args.alpha,
        "focus": part.focus,
        "partners": list(part.partners),
        "value": res.value,
        "ensemble_value": res.ensemble_value,
        "provenance": res.provenance(),
    }
    if args.format == "csv":
        _write_csv(args, ["value", "method", "bound"], [[res.value, res.method, res.bound]])
    else:
        _write_json(args, out)
    return EXIT_OK


def _params(args, alpha=None, mu=None) -> BoundParams:
    alpha = args.alpha if alpha is None else alpha
    mu = args.mu if mu is None else mu
    return BoundParams(alpha, mu, args.k)


def _report_csv_rows(rep):
    for fam, verdict in rep.verdicts.items():
        yield [fam, rep.lhs_by_family.get(fam), rep.rhs_by_family.get(fam), rep.slack.get(fam), verdict]


def cmd_check(args) -> int:
    state = _state(args)
    part = _partition(args, state)
    opts = _opts(args)
    terms = measure_terms(state, part, args.alpha, args.mode, opts)
    rep = report_from_terms(terms, _params(args), opts)
    if args.format == "csv":
        _write_csv(args, ["family", "lhs", "rhs", "slack", "verdict"], _report_csv_rows(rep))
    else:
        _write_json(args, rep.to_json())
    for fam in rep.violated:
        print(f"violated: {fam} (slack {fmt(rep.slack[fam])})", file=sys.stderr)
    return EXIT_VIOLATION if rep.any_violation else EXIT_OK


def _tag(res) -> str:
    """Short provenance label: ``pure``, ``analytic``, ``roof-upper`` or ``roof-lower``."""
    return f"roof-{res.bound}" if res.method == "roof" else res.method


def cmd_sweep(args) -> int:
    grid = mu_grid(args.mu_range)
    state = _state(args)
    part = _partition(args, state)
    opts = _opts(args)
    terms = measure_terms(state, part, args.alpha, args.mode, opts)
    families = POLYGAMY_FAMILIES if args.mode == "polygamy" else MONOGAMY_FAMILIES
    reports = [report_from_terms(terms, _params(args, mu=mu), opts, families) for mu in grid]
    violated = any(r.any_violation for r in reports)
    if args.format == "json":
        _write_json(args, [r.to_json() for r in reports])
    else:
        header = ["mu", "lhs"] + [f"rhs_{f}" for f in families] + [f"slack_{f}" for f in families]
        header += ["provenance"]
        prov = _tag(terms.lhs) + "/" + ",".join(_tag(r) for r in terms.pairwise)
        rows = []
        for r in reports:
            row = [r.mu, r.lhs]
            row += [r.rhs_by_family.get(f) for f in families]
            row += [r.slack.get(f) for f in families]
            rows.append(row + [prov])
        _write_csv(args, header, rows)
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_figure(args) -> int:
    default = "1:5:0.01" if args.which == 1 else "0:1:0.01"
    table = figure_curves(args.which, mu_grid(args.mu_range or default))
    if args.format == "json":
        _write_json(args, [{"mu": r[0], "y_solid": r[1], "y_dashed": r[2]} for r in table.tolist()])
    else:
        _write_csv(args, ["mu", "y_solid", "y_dashed"], table.tolist())
    return EXIT_OK


_FUZZ_DEFAULTS = {
    "monogamy": ("2,3", "1,1.5,2,3"),
    "polygamy": ("0.5,1.5", "0,0.5,1"),
    "negative": ("3", "-0.5,-1,-2"),
}


def _campaign_config(args):
    if args.trials < 1:
        raise CliError("--trials must be >= 1")
    alphas = _floats(args.alphas or _FUZZ_DEFAULTS[args.mode][0])
    mus = _floats(args.mus or _FUZZ_DEFAULTS[args.mode][1])
    if not alphas or not mus:
        raise CliError("alpha and mu sets must be nonempty")
    if any(a <= 0 or a == 1 for a in alphas):
        raise CliError("alpha values must be positive and different from 1")
    if args.mode == "monogamy":
        if any(m < 1 for m in mus) or any(a < 2 for a in alphas):
            raise CliError("monogamy mode needs mu >= 1 and alpha >= 2")
        families = MONOGAMY_FAMILIES[:-1]
    elif args.mode == "polygamy":
        if any(not 0 <= m <= 1 for m in mus) or any(a >= 2 for a in alphas):
            raise CliError("polygamy mode needs 0 <= mu <= 1 and 0 < alpha < 2")
        families = POLYGAMY_FAMILIES
    else:
        if any(m >= 0 for m in mus) or any(a < 2 for a in alphas):
            raise CliError("negative mode needs mu < 0 and alpha >= 2")
        families = ("negative_mu",)
    return alphas, mus, families


def cmd_fuzz(args) -> int:
    alphas, mus, families = _campaign_config(args)
    measure_mode = "polygamy" if args.mode == "polygamy" else "monogamy"
    template = parse_state_flag(args.state, default_seed=args.seed)
    if not template.is_random:
        _warn(f"state template {args.state!r} is not random; every trial sees the same state")
    opts = _opts(args)
    counts = {f: Counter({HOLDS: 0, VIOLATED: 0, NOT_APPLICABLE: 0}) for f in families}
    min_slack = {f: None for f in families}
    violations = []
    trial_rows = []
    done = 0
    stop = False
    for t in range(args.trials):
        seed = args.seed + t
        spec = template.with_seed(seed) if template.is_random else template
        state = make(spec)
        part = PartitionSpec.rest(args.focus, state.layout.n)
        for alpha in alphas:
            trial_opts = replace(opts, seed=seed)
            terms = measure_terms(state, part, alpha, measure_mode, trial_opts)
            for mu in mus:
                rep = report_from_terms(terms, BoundParams(alpha, mu, args.k), trial_opts, families)
                for fam in families:
                    verdict = rep.verdicts[fam]
                    counts[fam][verdict] += 1
                    s = rep.slack.get(fam)
                    if s is not None and (min_slack[fam] is None or s < min_slack[fam]["slack"]):
                        min_slack[fam] = {"slack": s, "seed": seed, "trial": t, "alpha": alpha, "mu": mu}
                    if verdict == VIOLATED:
                        violations.append({"family": fam, "seed": seed, "trial": t, "alpha": alpha, "mu": mu, "slack": s})
                    if args.trials_csv:
                        trial_rows.append(
                            [t, seed, alpha, mu, fam, rep.lhs_by_family.get(fam), rep.rhs_by_family.get(fam), s, verdict]
                        )
        done += 1
        if violations and args.stop_on_violation:
            stop = True
            break
    if all(counts[f][NOT_APPLICABLE] == sum(counts[f].values()) for f in families):
        _warn("every family was not applicable on every trial")
    summary = {
        "mode": args.mode,
        "state": args.state,
        "trials": done,
        "seed": args.seed,
        "alphas": alphas,
        "mus": mus,
        "stopped_early": stop,
        "counts": {f: dict(counts[f]) for f in families},
        "min_slack": min_slack,
        "violations": violations,
    }
    if args.trials_csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "seed", "alpha", "mu", "family", "lhs", "rhs", "slack", "verdict"])
        for row in trial_rows:
            w.writerow([_cell(x) for x in row])
        with open(args.trials_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    _write_json(args, summary)
    return EXIT_VIOLATION if violations else EXIT_OK


# -- parser -----------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", default=None, help="output file (default stdout)")
    fmt_group = p.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", dest="format", action="store_const", const="json")
    fmt_group.add_argument("--csv", dest="format", action="store_const", const="csv")
    p.add_argument("--restarts", type=int, default=50, help="roof-search restarts")
    p.add_argument("--tol", type=float, default=1e-7, help="roof-search tolerance")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--max-ensemble", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    return p


def _state_flags(p, focus=True):
    p.add_argument("--state", required=True, help="ghz:N | w:N | antisym3 | random-pure:dims=..,seed=.. | file:PATH")
    p.add_argument("--trace-keep", default=None, help="keep only these subsystems before the command runs")
    if focus:
        p.add_argument("--focus", type=int, default=0)
        p.add_argument("--partners", default=None, help="comma-separated partner indices (default: all others)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="renyimono", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", parents=[common], help="Rényi-α or von Neumann entropy")
    _state_flags(p, focus=False)
    p.add_argument("--alpha", type=float)
    p.add_argument("--von-neumann", action="store_true")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("measure", parents=[common], help="RαE or RαEoA across a bipartition")
    _state_flags(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--assistance", action="store_true", help="maximise instead (RαEoA)")
    p.add_argument("--decomposition-out", default=None)
    p.set_defaults(func=cmd_measure)

    for name, func, helptext in (
        ("check", cmd_check, "evaluate every bound family on one state"),
        ("sweep", cmd_sweep, "evaluate the bounds over a grid of mu"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _state_flags(p)
        p.add_argument("--alpha", type=float, required=True)
        if name == "check":
            p.add_argument("--mu", type=float, required=True)
        else:
            p.add_argument("--mu-range", required=True, help="a:b:step")
        p.add_argument("--k", type=float, default=None)
        p.add_argument("--mode", choices=("monogamy", "polygamy"), default="monogamy")
        p.set_defaults(func=func)

    p = sub.add_parser("figure", parents=[common], help="comparison curves as CSV")
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    p.add_argument("--mu-range", default=None)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("fuzz", parents=[common], help="seeded random campaign")
    p.add_argument("--state", default="random-pure:dims=2,2,2", help="state template")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--alphas", default=None, help="comma-separated alpha set")
    p.add_argument("--mus", default=None, help="comma-separated mu set")
    p.add_argument("--mode", choices=("monogamy", "polygamy", "negative"), default="monogamy")
    p.add_argument("--focus", type=int, default=0)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--stop-on-violation", action="store_true")
    p.add_argument("--trials-csv", default=None, help="write one row per trial/parameter/family")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, StateError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
