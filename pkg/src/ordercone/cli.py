"""Command-line entry point.

Exit codes: 0 verified or success, 2 witness found, 3 inconclusive, 1 usage or
resource error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import fsa as F
from .cones import REGISTRY, classify_ball, registry, report_json, verify_cone
from .convexity import build_LH, check_convexity, lh_state_bound, parse_subgroup
from .groups import CapacityError, CompletionError, GroupOracle, preset_oracle
from .pipeline import PipelineConfig, finite_index_pipeline
from .schreier import (
    ModHom,
    Transversal,
    abelian_invariants,
    abelianization,
    h_presentation_closed_form,
    navas_cone_generators,
    rank_certificate,
    subgroup_presentation,
)
from .traveller import build_LM, build_tilde_L

EXIT_OK, EXIT_ERROR, EXIT_WITNESS, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    action: str
    options: dict = field(default_factory=dict)

    def get(self, key, default=None):
        value = self.options.get(key)
        return default if value is None else value


# argument helpers


def _positive(flag: str):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {text!r}") from None
        if value < 0:
            raise argparse.ArgumentTypeError(f"{flag} must be non-negative")
        return value

    return parse


def _flagged(flag: str, fn, *args):
    try:
        return fn(*args)
    except (ValueError, OSError, KeyError) as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _group(cfg: RunConfig) -> GroupOracle:
    return _flagged("--group", preset_oracle, cfg.get("group", "klein_bottle"))


def parse_language(spec: str, oracle: GroupOracle) -> F.Fsa:
    """``positive`` (words in the generators), ``all``, ``cone:PRESET`` or ``file:PATH``."""
    alphabet = oracle.alphabet
    if spec == "positive":
        return F.minimize(F.words_over(alphabet, alphabet.generators))
    if spec == "all":
        return F.all_words(alphabet)
    if spec.startswith("cone:"):
        return registry(spec[5:]).language
    if spec.startswith("file:"):
        fsa = F.from_json(json.loads(Path(spec[5:]).read_text()))
        if fsa.alphabet != alphabet:
            raise ValueError("automaton alphabet does not match the group")
        return fsa
    raise ValueError(f"unknown language {spec!r}; expected positive, all, cone:PRESET or file:PATH")


def _language(cfg: RunConfig, oracle: GroupOracle) -> F.Fsa:
    return _flagged("--language", parse_language, cfg.get("language", "positive"), oracle)


def _subgroup(cfg: RunConfig, oracle: GroupOracle):
    return _flagged("--subgroup", parse_subgroup, cfg.get("subgroup", "pattern:even_a"), oracle)


def _load_fsa(spec: str) -> F.Fsa:
    """A JSON file, or ``semigroup:GROUP`` / ``all:GROUP`` built in."""
    kind, _, arg = spec.partition(":")
    if kind in ("semigroup", "all") and arg:
        alphabet = preset_oracle(arg).alphabet
        return F.semigroup_automaton(alphabet) if kind == "semigroup" else F.all_words(alphabet)
    return F.from_json(json.loads(Path(spec).read_text()))


def _emit_fsa(fsa: F.Fsa, cfg: RunConfig, label: str) -> None:
    print(f"{label}: {fsa.num_states} states over {len(fsa.alphabet)} symbols")
    if cfg.get("json"):
        Path(cfg.get("json")).write_text(json.dumps(F.to_json(fsa), indent=1, sort_keys=True) + "\n")
    if cfg.get("dot"):
        Path(cfg.get("dot")).write_text(F.to_dot(fsa))


def _table(rows: list[tuple], header: tuple) -> str:
    rows = [tuple(str(c) for c in r) for r in rows]
    widths = [max(len(str(h)), *(len(r[i]) for r in rows)) if rows else len(str(h)) for i, h in enumerate(header)]
    line = "  ".join(str(h).ljust(w) for h, w in zip(header, widths))
    out = [line, "  ".join("-" * w for w in widths)]
    out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(out)


# commands


def _run_fsa(cfg: RunConfig) -> int:
    inputs = [_flagged("input", _load_fsa, s) for s in cfg.get("inputs", [])]
    action = cfg.action
    if action == "min":
        _emit_fsa(F.minimize(inputs[0]), cfg, "minimized")
    elif action == "enum":
        fsa = inputs[0]
        for w in F.enumerate_words(fsa, cfg.get("max_len", 4)):
            print(fsa.alphabet.format(w))
    elif action == "product":
        _emit_fsa(F.product(inputs[0], inputs[1]), cfg, "product")
    elif action == "intersect":
        _emit_fsa(F.minimize(F.intersect(inputs[0], inputs[1])), cfg, "intersection")
    elif action == "project":
        _emit_fsa(F.minimize(_flagged("--coord", F.project, inputs[0], cfg.get("coord", 1))), cfg, "projection")
    elif action == "pad":
        _emit_fsa(_flagged("input", F.pad_language, inputs[0]), cfg, "padded")
    return EXIT_OK


def _run_traveller(cfg: RunConfig) -> int:
    oracle = _group(cfg)
    M = cfg.get("M", 1)
    if cfg.get("language"):
        L = _language(cfg, oracle)
        _emit_fsa(build_tilde_L(L, oracle, M), cfg, f"fellow-travelling closure (M={M})")
    else:
        fsa = build_LM(oracle, M)
        _emit_fsa(fsa, cfg, f"L_M (M={M}, ball size {oracle.growth(M)})")
    return EXIT_OK


def _run_convexity(cfg: RunConfig) -> int:
    oracle = _group(cfg)
    L = _language(cfg, oracle)
    h = _subgroup(cfg, oracle)
    R = cfg.get("R", 1)
    if cfg.action == "check":
        report = check_convexity(L, h, R, cfg.get("max_len", 8))
        print(_table(
            [(report.checked_length, report.words_checked, report.max_observed_R, R)],
            ("max_len", "words in H", "max distance", "R"),
        ))
        if report.witness:
            w, i, d = report.witness
            dist = "beyond cap" if d is None else d
            print(f"witness: {oracle.format(w)} at prefix {i}, distance {dist}")
            return EXIT_WITNESS
        print("no witness")
        return EXIT_OK
    if cfg.action == "lh":
        lh = build_LH(L, h, R)
        _emit_fsa(lh, cfg, f"L_H (R={R})")
        print(f"state bound: {lh_state_bound(L, h, R)}")
        return EXIT_OK
    if cfg.action == "bound":
        states_L = F.minimize(L).num_states
        gh, gg = h.growth(2 * R + 1), oracle.growth(3 * R + 1)
        print(_table(
            [(R, states_L, gh, gg, lh_state_bound(L, h, R))],
            ("R", "|A(L)|", "gamma_H(2R+1)", "gamma_G(3R+1)", "bound"),
        ))
        return EXIT_OK
    raise UsageError(f"unknown convexity action {cfg.action}")


def _schreier_setup(cfg: RunConfig):
    oracle = _group(cfg)
    hom = _flagged("--hom", ModHom.parse, cfg.get("hom", "mod:2:a=1,b=1"))
    _flagged("--hom", hom.check, oracle.presentation)
    T = _flagged("--transversal", Transversal.named, cfg.get("transversal", "a_powers"), hom, oracle.alphabet)
    return oracle, hom, T


def _run_schreier(cfg: RunConfig) -> int:
    action = cfg.action
    if action == "present":
        oracle, hom, T = _schreier_setup(cfg)
        sp = subgroup_presentation(oracle, hom, T)
        print(f"{len(sp.embeddings)} generators, {len(sp.relators)} relators")
        print(sp.format())
        print(sp.to_json_text())
        if cfg.get("json"):
            Path(cfg.get("json")).write_text(sp.to_json_text() + "\n")
        return EXIT_OK
    if action == "abelianize":
        if cfg.get("closed_form"):
            m, t = _flagged("--closed-form", lambda s: tuple(int(x) for x in s.split(",")), cfg.get("closed_form"))
            sp = h_presentation_closed_form(m, t)
        else:
            oracle, hom, T = _schreier_setup(cfg)
            sp = subgroup_presentation(oracle, hom, T)
        factors = abelianization(sp)
        print("invariant factors: " + " ".join(map(str, factors)))
        print("abelian invariants: " + (" ".join(map(str, abelian_invariants(factors))) or "trivial"))
        return EXIT_OK
    if action == "cone-gens":
        gens = _flagged("--mu", navas_cone_generators, cfg.get("n", 2), cfg.get("m", 6), cfg.get("mu", 4))
        alphabet = preset_oracle(f"gamma:{cfg.get('n', 2)}").alphabet
        for w in gens:
            print(alphabet.format(w))
        return EXIT_OK
    if action == "rank":
        print(_flagged("-t", rank_certificate, cfg.get("m", 2), cfg.get("t", 1)))
        return EXIT_OK
    raise UsageError(f"unknown schreier action {action}")


def _run_cone(cfg: RunConfig) -> int:
    if cfg.action == "registry":
        rows = []
        for name in sorted(REGISTRY):
            c = REGISTRY[name]()
            rows.append((name, c.oracle.name, c.expected or "", c.note))
        print(_table(rows, ("preset", "group", "expected", "description")))
        return EXIT_OK
    cone = _flagged("--preset", registry, cfg.get("preset", "k2_positive"))
    radius = cfg.get("radius", 2)
    cap = cfg.get("cap")
    if cfg.action == "classify":
        labels = classify_ball(cone, radius, cap if cap is not None else 3 * radius)
        oracle = cone.oracle
        order = sorted(labels, key=lambda g: (oracle.length(g), oracle.geodesic(g)))
        print(_table([(oracle.format(oracle.geodesic(g)), labels[g]) for g in order], ("element", "label")))
        return EXIT_INCONCLUSIVE if "unknown" in labels.values() else EXIT_OK
    report = verify_cone(cone, radius, cap)
    data = report.to_json(cone.oracle, cone.name, cone.note)
    print(_table(
        [(cone.name, radius, report.search_cap, report.checked, report.positives,
          report.semigroup_ok, report.partition, len(report.unknown))],
        ("preset", "radius", "cap", "elements", "positive", "semigroup", "partition", "unknown"),
    ))
    for w in data["witnesses"]:
        print(f"witness: {w}")
    if data["unknown"]:
        print("unclassified: " + ", ".join(data["unknown"]))
    if cfg.get("json"):
        Path(cfg.get("json")).write_text(report_json(report, cone) + "\n")
    return report.exit_code


def _run_pipeline(cfg: RunConfig) -> int:
    oracle = _group(cfg)
    L = _language(cfg, oracle)
    h = _subgroup(cfg, oracle)
    config = PipelineConfig(
        radius=cfg.get("radius", 2),
        cap=cfg.get("cap"),
        R=cfg.get("R"),
        compare=cfg.get("compare"),
        compare_cap=cfg.get("compare_cap"),
    )
    report = _flagged("--subgroup", finite_index_pipeline, oracle, L, h, config)
    reps = ", ".join(oracle.format(r) for r in report.coset_reps)
    print(f"coset representatives: {reps}")
    print(_table(
        [(report.derived_R, report.R, report.states, report.bound,
          report.cone.semigroup_ok, report.cone.partition)],
        ("derived R", "R used", "L_H states", "state bound", "semigroup", "partition"),
    ))
    if report.R < report.derived_R:
        print("note: R below the derived transfer constant; L_H is sound but may miss elements")
    if report.agreement is not None:
        print(f"agreement with {config.compare}: {report.agreement}")
    if cfg.get("json"):
        Path(cfg.get("json")).write_text(json.dumps(F.to_json(report.language), sort_keys=True) + "\n")
    return report.exit_code


def run(cfg: RunConfig) -> int:
    handlers = {
        "fsa": _run_fsa,
        "traveller": _run_traveller,
        "convexity": _run_convexity,
        "schreier": _run_schreier,
        "cone": _run_cone,
        "pipeline": _run_pipeline,
    }
    try:
        return handlers[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (CapacityError, CompletionError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ordercone", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out_flags(q):
        q.add_argument("--json", help="write JSON here")
        q.add_argument("--dot", help="write Graphviz DOT here")

    def group_flags(q, language=True, subgroup=False):
        q.add_argument("--group", default="klein_bottle", help="group preset")
        if language:
            q.add_argument("--language", "--cone", dest="language", default=None, help="positive | all | cone:PRESET | file:PATH")
        if subgroup:
            q.add_argument("--subgroup", default="pattern:even_a", help="mod:M:a=I,b=J | pattern:NAME")

    fsa = sub.add_parser("fsa", help="automaton operations on JSON files")
    fsa_sub = fsa.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, arity in (("min", 1), ("enum", 1), ("product", 2), ("intersect", 2), ("project", 1), ("pad", 1)):
        q = fsa_sub.add_parser(name)
        q.add_argument("inputs", nargs=arity, help="JSON file, semigroup:GROUP or all:GROUP")
        out_flags(q)
        if name == "enum":
            q.add_argument("--max-len", type=_positive("--max-len"), default=4)
        if name == "project":
            q.add_argument("--coord", type=int, choices=(1, 2), default=1)

    tr = sub.add_parser("traveller", help="fellow-traveller automata")
    tr_sub = tr.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = tr_sub.add_parser("build")
    group_flags(q)
    q.add_argument("-M", type=_positive("-M"), default=1)
    out_flags(q)

    cv = sub.add_parser("convexity", help="language convexity and subgroup languages")
    cv_sub = cv.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("check", "lh", "bound"):
        q = cv_sub.add_parser(name)
        group_flags(q, subgroup=True)
        q.add_argument("-R", type=_positive("-R"), default=1)
        if name == "check":
            q.add_argument("--max-len", type=_positive("--max-len"), default=8)
        if name == "lh":
            out_flags(q)

    sc = sub.add_parser("schreier", help="subgroup presentations")
    sc_sub = sc.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("present", "abelianize"):
        q = sc_sub.add_parser(name)
        group_flags(q, language=False)
        q.add_argument("--hom", default="mod:2:a=1,b=1")
        q.add_argument("--transversal", default="a_powers", choices=("a_powers", "b_powers"))
        if name == "present":
            q.add_argument("--json")
        else:
            q.add_argument("--closed-form", metavar="M,T", help="use the closed-form kernel presentation")
    q = sc_sub.add_parser("cone-gens")
    q.add_argument("-n", type=_positive("-n"), default=2)
    q.add_argument("-m", type=_positive("-m"), default=6)
    q.add_argument("--mu", type=_positive("--mu"), default=4)
    q = sc_sub.add_parser("rank")
    q.add_argument("-m", type=_positive("-m"), default=2)
    q.add_argument("-t", type=_positive("-t"), default=1)

    co = sub.add_parser("cone", help="positive cone checks")
    co_sub = co.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("verify", "classify"):
        q = co_sub.add_parser(name)
        q.add_argument("--preset", default="k2_positive")
        q.add_argument("--radius", type=_positive("--radius"), default=2)
        q.add_argument("--cap", type=_positive("--cap"), default=None)
        if name == "verify":
            q.add_argument("--json")
    co_sub.add_parser("registry")

    pl = sub.add_parser("pipeline", help="end-to-end constructions")
    pl_sub = pl.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = pl_sub.add_parser("finite-index", aliases=["thm11"], help="regular cone of a finite-index subgroup")
    group_flags(q, subgroup=True)
    q.add_argument("-R", type=_positive("-R"), default=None, help="override the derived constant")
    q.add_argument("--radius", type=_positive("--radius"), default=2)
    q.add_argument("--cap", type=_positive("--cap"), default=None)
    q.add_argument("--compare", default=None, help="registry cone to compare with")
    q.add_argument("--compare-cap", type=_positive("--compare-cap"), default=None)
    q.add_argument("--json")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    options = {k: v for k, v in vars(args).items() if k not in ("command", "action")}
    return run(RunConfig(args.command, args.action, options))


if __name__ == "__main__":
    sys.exit(main())
