"""Command-line front end.

    stripcut distance -n 3 "s1 S2"
    stripcut volume -n 3 "s1 S2" --max-power 8 --json
    stripcut trace -n 4 "s2 s3"
    stripcut track -n 3 "" --stage 0 --format dot
    stripcut relax -n 4 "s2 S1 s3"
    stripcut selftest --seed 7

Errors print one JSON line on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .braids import BraidParseError, BraidWord, Letter, parse_braid
from .curves import act, canonical_equal, round_pants
from .estimator import (
    BudgetExceeded,
    conjugacy_minimize,
    distance_estimate,
    relax,
    relax_bound,
    volume_estimate,
)
from .strips import canonical_trace, renormalized_count
from . import traintrack

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_IO = 4
EXIT_BUDGET = 5
EXIT_CHECK = 6

CAVEAT = "no pseudo-Anosov check is made; a slope near zero suggests a reducible or periodic braid"


class CliError(Exception):
    def __init__(self, kind: str, reason: str, status: int, **extra):
        super().__init__(reason)
        self.kind = kind
        self.reason = reason
        self.status = status
        self.extra = extra


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message, EXIT_USAGE)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    n: int | None
    braid: str
    max_power: int
    budget: int | None
    fmt: str  # human | json | dot | text
    out: Path | None
    seed: int
    stage: str
    count: int


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-n", type=int, default=None, help="number of punctures (at least 3)")
    common.add_argument("--json", action="store_true", help="write JSON (same as --format json)")
    common.add_argument("--format", choices=["human", "json", "dot", "text"], default=None)
    common.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized commands")

    ap = _Parser(prog="stripcut", description="Strip-cut counts for braids on the punctured disk.")
    sub = ap.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    for name, helptext in [("distance", "cut count of the braid image of the round pants"),
                           ("trace", "the canonical cutting sequence as JSON"),
                           ("relax", "band-generator word making the braid image round")]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("braid", help='braid word, e.g. "s1 S2 d1.3"')

    p = sub.add_parser("volume", parents=[common], help="counts along powers and their slope")
    p.add_argument("braid")
    p.add_argument("--max-power", type=int, default=8)
    p.add_argument("--budget", type=int, default=None,
                   help="also search conjugates by up to this many generators")

    p = sub.add_parser("track", parents=[common], help="train track of a cutting stage")
    p.add_argument("braid")
    p.add_argument("--stage", default="0", help="stage index, or 'all'")

    p = sub.add_parser("selftest", parents=[common], help="quick randomized consistency checks")
    p.add_argument("--count", type=int, default=50)
    return ap


def parse_config(argv: list[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    fmt = ns.format or ("json" if ns.json else "human")
    if ns.json and ns.format not in (None, "json"):
        raise CliError("usage", "--json conflicts with --format " + ns.format, EXIT_USAGE)
    if ns.n is not None and ns.n < 3:
        raise CliError("input", f"strand count must be at least 3, got {ns.n}", EXIT_INPUT)
    max_power = getattr(ns, "max_power", 8)
    if ns.subcommand == "volume" and max_power < 2:
        raise CliError("usage", f"--max-power must be at least 2, got {max_power}", EXIT_USAGE)
    budget = getattr(ns, "budget", None)
    if budget is not None and budget < 0:
        raise CliError("usage", "--budget must be nonnegative", EXIT_USAGE)
    if fmt == "dot" and ns.subcommand != "track":
        raise CliError("usage", "--format dot applies to the track command only", EXIT_USAGE)
    stage = getattr(ns, "stage", "0")
    if stage != "all" and not stage.lstrip("-").isdigit():
        raise CliError("usage", f"bad stage {stage!r}", EXIT_USAGE)
    return RunConfig(ns.subcommand, ns.n, getattr(ns, "braid", ""), max_power, budget, fmt,
                     ns.out, ns.seed, stage, getattr(ns, "count", 50))


def _braid(cfg: RunConfig) -> BraidWord:
    try:
        return parse_braid(cfg.braid, cfg.n)
    except BraidParseError as exc:
        raise CliError("parse", exc.reason, EXIT_INPUT, token=exc.token, offset=exc.offset) from None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _human(obj, prefix: str = "") -> str:
    """One field per line, nested keys joined by dots."""
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            lines.append(_human(obj[k], f"{prefix}{k}."))
        return "".join(lines)
    if isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        return "".join(_human(v, f"{prefix}{i}.") for i, v in enumerate(obj))
    value = " ".join(map(str, obj)) if isinstance(obj, list) else obj
    return f"{prefix[:-1]}: {value}\n"


def _render(cfg: RunConfig, report: dict, notes: list[str] = ()) -> str:
    report = dict(report, seed=cfg.seed)
    if cfg.fmt == "json":
        return _dump(report)
    return _human(report) + "".join(f"note: {x}\n" for x in notes)


def cmd_distance(cfg: RunConfig) -> str:
    return _render(cfg, distance_estimate(_braid(cfg)).to_json())


def cmd_volume(cfg: RunConfig) -> str:
    psi = _braid(cfg)
    try:
        est = volume_estimate(psi, cfg.max_power, conjugacy_budget=cfg.budget)
    except BudgetExceeded as exc:
        raise CliError("budget", str(exc), EXIT_BUDGET, partial=exc.partial.to_json()) from None
    rep = est.to_json()
    rep["caveat"] = CAVEAT
    notes = ["counts stopped growing over the fit range"] if est.stalled else []
    return _render(cfg, rep, notes)


def cmd_trace(cfg: RunConfig) -> str:
    psi = _braid(cfg)
    tr = canonical_trace(act(psi, round_pants(psi.n)))
    rep = dict(tr.to_json(), braid=psi.to_text())
    if cfg.fmt == "json":
        return _render(cfg, rep)
    lines = [f"braid: {psi.to_text()}", f"n: {psi.n}", f"count: {rep['count']}", f"seed: {cfg.seed}"]
    for i, ev in enumerate(rep["events"]):
        tag = f" group {ev['group']}" if ev["group"] is not None else ""
        lines.append(f"event {i}: {ev['kind']} marker {ev['marker_before']}->{ev['marker_after']}{tag}")
    return "\n".join(lines) + "\n"


def cmd_track(cfg: RunConfig) -> str:
    psi = _braid(cfg)
    tr = canonical_trace(act(psi, round_pants(psi.n)))
    states = list(tr.decompositions())
    if cfg.stage == "all":
        picks = list(range(len(states)))
    else:
        k = int(cfg.stage)
        if not 0 <= k < len(states):
            raise CliError("input", f"stage {k} out of range 0..{len(states) - 1}", EXIT_INPUT)
        picks = [k]
    tracks = [(k, traintrack.from_strips(states[k]).track) for k in picks]
    if cfg.fmt == "dot":
        return "".join(traintrack.to_dot(t, f"stage{k}") for k, t in tracks)
    if cfg.fmt == "json":
        return _render(cfg, {"braid": psi.to_text(), "n": psi.n,
                             "stages": [dict(traintrack.to_json(t), stage=k) for k, t in tracks]})
    return "".join(f"# stage {k}\n" + traintrack.to_text(t) for k, t in tracks)


def cmd_relax(cfg: RunConfig) -> str:
    psi = _braid(cfg)
    p = act(psi, round_pants(psi.n))
    word = relax(p)
    rep = {"braid": psi.to_text(), "n": psi.n, "relax_word": word.tokens(),
           "length": len(word), "bound": relax_bound(p)}
    return _render(cfg, rep)


def _random_word(rng: random.Random, n: int, length: int) -> BraidWord:
    return BraidWord(n, tuple(Letter.sigma(rng.randint(1, n - 1), rng.choice((1, -1)))
                              for _ in range(length)))


def cmd_selftest(cfg: RunConfig) -> str:
    rng = random.Random(cfg.seed)
    failures = []
    for trial in range(cfg.count):
        n = rng.randint(3, 5)
        w = _random_word(rng, n, rng.randint(0, 6))
        p = act(w, round_pants(n))
        if not canonical_equal(act(w.inverse(), p), round_pants(n)):
            failures.append(f"inverse {w}")
        word = relax(p)
        image = act(word, p)
        if not image.is_round() or len(word) > relax_bound(p):
            failures.append(f"relax {w}")
        if renormalized_count(canonical_trace(p)) < 1:
            failures.append(f"count {w}")
    rep = {"checks": cfg.count, "failures": failures, "ok": not failures}
    out = _render(cfg, rep)
    if failures:
        raise CliError("check", f"{len(failures)} selftest failures", EXIT_CHECK, report=rep)
    return out


COMMANDS = {
    "distance": cmd_distance,
    "volume": cmd_volume,
    "trace": cmd_trace,
    "track": cmd_track,
    "relax": cmd_relax,
    "selftest": cmd_selftest,
}


def _fail(exc: CliError) -> int:
    rec = {"error": exc.kind, "reason": exc.reason}
    rec.update(exc.extra)
    sys.stderr.write(json.dumps(rec, sort_keys=True) + "\n")
    return exc.status


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
        text = COMMANDS[cfg.subcommand](cfg)
        if cfg.out is not None:
            try:
                cfg.out.write_text(text)
            except OSError as exc:
                raise CliError("io", f"cannot write {cfg.out}: {exc.strerror}", EXIT_IO) from None
        else:
            sys.stdout.write(text)
        return 0
    except CliError as exc:
        return _fail(exc)
    except ValueError as exc:
        return _fail(CliError("input", str(exc), EXIT_INPUT))


if __name__ == "__main__":
    sys.exit(main())
