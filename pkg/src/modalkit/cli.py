"""Command-line front end.

One subcommand per library pipeline, stable file formats, deterministic
reports.  Exit codes: 0 for success, 1 for a domain "false" or violation
result, 2 for errors (usage, parse, caps), every error printed as a single
``error:`` line on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import algebra as alg
from . import definability as df
from . import firstorder as fo
from . import formula as fm
from . import frame as fr
from . import variety as vr
from .errors import InvalidInputError, ModalkitError
from .limits import DEFAULT_LIMITS, Limits

_JSON_KWARGS = {"indent": 2, "sort_keys": True}


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"bad JSON in {path}: {exc}") from exc


def _load_limits(args: argparse.Namespace) -> Limits:
    limits = DEFAULT_LIMITS
    config_path = getattr(args, "config", None)
    if config_path:
        data = _load_json(config_path)
        known = {k: int(v) for k, v in data.items()
                 if k in Limits.__dataclass_fields__}
        unknown = set(data) - set(known)
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
        limits = limits.override(**known)
    env_worlds = os.environ.get("MODALKIT_MAX_WORLDS")
    if env_worlds:
        try:
            limits = limits.override(max_worlds=int(env_worlds))
        except ValueError as exc:
            raise InvalidInputError(
                f"MODALKIT_MAX_WORLDS must be an integer: {env_worlds!r}") from exc
    return limits


def _emit(args: argparse.Namespace, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, **_JSON_KWARGS))
    else:
        print(text)


def _valuation_json(valuation: dict[int, int]) -> dict:
    return {f"p{v}": fr.bit_list(w) for v, w in sorted(valuation.items())}


def _load_axioms(path: str) -> list[fm.Formula]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from exc
    return fm.parse_axiom_lines(text)


def _load_presentation(path: str, limits: Limits) -> vr.VarietyPresentation:
    data = _load_json(path)
    try:
        frames = tuple(fr.frame_from_dict(d, limits) for d in data["frames"])
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed presentation JSON: {exc}") from exc
    axioms_file = data.get("axioms_file")
    axioms: tuple[fm.Formula, ...] = ()
    if axioms_file:
        # relative paths resolve against the presentation file's directory
        axiom_path = Path(path).parent / axioms_file
        axioms = tuple(_load_axioms(str(axiom_path)))
    return vr.VarietyPresentation(frames, axioms)


# --- subcommand handlers -----------------------------------------------------

def _cmd_check(args, limits: Limits) -> int:
    frame = fr.frame_from_dict(_load_json(args.frame), limits)
    f = fm.parse(args.formula)
    verdict = fr.frame_valid(frame, f, limits)
    if verdict.valid:
        _emit(args, {"valid": True}, "valid")
        return 0
    valuation = _valuation_json(verdict.valuation)
    _emit(args,
          {"valid": False,
           "countermodel": {"valuation": valuation, "world": verdict.world}},
          "invalid\ncountermodel: valuation "
          f"{json.dumps(valuation, sort_keys=True)} at world {verdict.world}")
    return 1


def _cmd_validates(args, limits: Limits) -> int:
    frame = fr.frame_from_dict(_load_json(args.frame), limits)
    axioms = _load_axioms(args.axioms)
    failures = []
    for axiom in axioms:
        verdict = fr.frame_valid(frame, axiom, limits)
        if not verdict.valid:
            failures.append((axiom, verdict))
    if not failures:
        _emit(args, {"validates": True, "axioms": len(axioms)},
              f"validates all {len(axioms)} axiom(s)")
        return 0
    lines = ["does not validate"]
    payload = {"validates": False, "failures": []}
    for axiom, verdict in failures:
        valuation = _valuation_json(verdict.valuation)
        payload["failures"].append({
            "formula": fm.render(axiom),
            "countermodel": {"valuation": valuation, "world": verdict.world},
        })
        lines.append(f"axiom {fm.render(axiom)}: countermodel valuation "
                     f"{json.dumps(valuation, sort_keys=True)} at world {verdict.world}")
    _emit(args, payload, "\n".join(lines))
    return 1


def _cmd_duality(args, limits: Limits) -> int:
    frame = fr.frame_from_dict(_load_json(args.frame), limits)
    round_trip = alg.cf(alg.cm(frame))
    mapping = fr.is_isomorphic(round_trip, frame)
    payload = {
        "cf_of_cm": fr.frame_to_dict(round_trip),
        "isomorphic": mapping is not None,
        "isomorphism": list(mapping) if mapping is not None else None,
    }
    if mapping is not None:
        text = ("cf(cm(frame)) isomorphic to frame: yes\n"
                f"isomorphism: {list(mapping)}")
        _emit(args, payload, text)
        return 0
    _emit(args, payload, "cf(cm(frame)) isomorphic to frame: no")
    return 1


def _cmd_cm(args, limits: Limits) -> int:
    frame = fr.frame_from_dict(_load_json(args.frame), limits)
    algebra = alg.cm(frame)
    payload = alg.algebra_to_dict(algebra)
    _emit(args, payload, json.dumps(payload, sort_keys=True))
    return 0


def _cmd_cf(args, limits: Limits) -> int:
    algebra = alg.algebra_from_dict(_load_json(args.algebra), limits)
    frame = alg.cf(algebra)
    payload = fr.frame_to_dict(frame)
    _emit(args, payload, json.dumps(payload, sort_keys=True))
    return 0


def _cmd_em(args, limits: Limits) -> int:
    algebra = alg.algebra_from_dict(_load_json(args.algebra), limits)
    embedding = alg.em(algebra)
    payload = alg.algebra_to_dict(embedding)
    _emit(args, payload, json.dumps(payload, sort_keys=True))
    return 0


def _cmd_free(args, limits: Limits) -> int:
    pres = _load_presentation(args.presentation, limits)
    result = vr.free_algebra(pres, args.n, limits)
    payload = {
        "n": args.n,
        "algebra": alg.algebra_to_dict(result.algebra),
        "size": result.algebra.size,
        "generators": [fr.bit_list(g) for g in result.generators],
        "coordinates": [
            {"frame": gi, "assignment": [fr.bit_list(v) for v in assignment]}
            for gi, assignment in result.assignment_index
        ],
    }
    text = (f"free algebra on {args.n} generator(s): "
            f"{result.algebra.atoms} atoms, {result.algebra.size} elements\n"
            f"generators (as atom sets): {[fr.bit_list(g) for g in result.generators]}")
    _emit(args, payload, text)
    return 0


def _cmd_canonicity(args, limits: Limits) -> int:
    pres = _load_presentation(args.presentation, limits)
    report = vr.canonicity_report(pres, args.n, limits)
    _emit(args, report.to_dict(), report.render_text())
    return 0 if report.canonical else 1


def _cmd_probe_power(args, limits: Limits) -> int:
    pres = _load_presentation(args.presentation, limits)
    report = vr.power_commutation_probe(pres, args.n, args.i_count, limits)
    _emit(args, report.to_dict(), report.render_text())
    return 0 if report.isomorphic else 1


def _cmd_translate(args, limits: Limits) -> int:
    f = fm.parse(args.formula)
    translated = fo.simplify_fo(fo.standard_translation(f, 0))
    text = fo.render_fo(translated)
    _emit(args, {"formula": args.formula, "translation": text}, text)
    return 0


def _cmd_fo_check(args, limits: Limits) -> int:
    sentence = fo.parse_fo(args.fo)
    if args.model:
        model = fr.model_from_dict(_load_json(args.model), limits)
    else:
        model = fr.Model(fr.frame_from_dict(_load_json(args.frame), limits), {})
    satisfied = fo.fo_satisfies(model, sentence, {})
    _emit(args, {"satisfied": satisfied},
          "satisfied" if satisfied else "not satisfied")
    return 0 if satisfied else 1


def _cmd_qm_check(args, limits: Limits) -> int:
    sentence = fo.parse_fo(args.fo)
    result = fo.is_quasi_modal(sentence)
    if result.quasi_modal:
        _emit(args, {"quasi_modal": True}, "quasi-modal")
        return 0
    _emit(args, {"quasi_modal": False, "violation": result.violation},
          f"not quasi-modal: {result.violation}")
    return 1


def _cmd_morphisms(args, limits: Limits) -> int:
    src = fr.frame_from_dict(_load_json(args.source), limits)
    tgt = fr.frame_from_dict(_load_json(args.target), limits)
    morphisms = fr.find_bounded_morphisms(src, tgt, args.surjective, limits)
    payload = {"count": len(morphisms),
               "morphisms": [list(m.mapping) for m in morphisms]}
    if morphisms:
        lines = [f"{len(morphisms)} bounded morphism(s)"]
        lines.extend(str(list(m.mapping)) for m in morphisms)
        _emit(args, payload, "\n".join(lines))
        return 0
    _emit(args, payload, "no bounded morphisms")
    return 1


def _cmd_iso(args, limits: Limits) -> int:
    a = fr.frame_from_dict(_load_json(args.left), limits)
    b = fr.frame_from_dict(_load_json(args.right), limits)
    mapping = fr.is_isomorphic(a, b)
    if mapping is not None:
        _emit(args, {"isomorphic": True, "isomorphism": list(mapping)},
              f"isomorphic: {list(mapping)}")
        return 0
    _emit(args, {"isomorphic": False, "isomorphism": None}, "not isomorphic")
    return 1


def _cmd_union(args, limits: Limits) -> int:
    frames = [fr.frame_from_dict(_load_json(path), limits) for path in args.frames]
    union, injections = fr.disjoint_union(frames)
    payload = {
        "frame": fr.frame_to_dict(union),
        "injections": [list(inj) for inj in injections],
    }
    _emit(args, payload, json.dumps(payload["frame"], sort_keys=True))
    return 0


def _cmd_subframe(args, limits: Limits) -> int:
    frame = fr.frame_from_dict(_load_json(args.frame), limits)
    try:
        seeds = fr.bits(int(w) for w in args.seeds.split(","))
    except ValueError as exc:
        raise InvalidInputError(f"bad seed list {args.seeds!r}") from exc
    sub, worlds = fr.generated_subframe(frame, seeds)
    payload = {"frame": fr.frame_to_dict(sub), "worlds": list(worlds)}
    _emit(args, payload,
          json.dumps(payload["frame"], sort_keys=True) + f"\nworlds: {list(worlds)}")
    return 0


def _cmd_ultraproduct(args, limits: Limits) -> int:
    frames = [fr.frame_from_dict(_load_json(path), limits) for path in args.frames]
    j = None if args.nonprincipal else args.at
    product, iso = fr.ultraproduct_principal(frames, j, limits)
    payload = {"frame": fr.frame_to_dict(product), "isomorphism_to_factor": list(iso)}
    _emit(args, payload,
          json.dumps(payload["frame"], sort_keys=True)
          + f"\nisomorphic to factor {args.at} via {list(iso)}")
    return 0


def _cmd_gt_closure(args, limits: Limits) -> int:
    cls = df.frame_class_from_dict(_load_json(args.cls), limits)
    report = df.closure_report(cls, args.bound, limits)
    _emit(args, report.to_dict(), report.render_text())
    return 0 if report.closed else 1


def _cmd_gt_search(args, limits: Limits) -> int:
    cls = df.frame_class_from_dict(_load_json(args.cls), limits)
    found = df.search_defining_formula(cls, args.universe_bound, args.depth,
                                       args.vars, limits)
    if found is not None:
        _emit(args, {"found": True, "formula": fm.render(found)}, fm.render(found))
        return 0
    _emit(args, {"found": False, "formula": None}, "none")
    return 1


# --- argument parsing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 2 with the error: prefix
        raise InvalidInputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modalkit", description=__doc__)
    parser.add_argument("--json", action="store_true", help="emit JSON reports")
    parser.add_argument("--config", help="JSON file overriding the size caps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="frame validity of one formula")
    p.add_argument("--frame", required=True)
    p.add_argument("--formula", required=True)
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("validates", help="frame validity of an axiom file")
    p.add_argument("--frame", required=True)
    p.add_argument("--axioms", required=True)
    p.set_defaults(handler=_cmd_validates)

    p = sub.add_parser("duality", help="cf(cm(frame)) round-trip report")
    p.add_argument("--frame", required=True)
    p.set_defaults(handler=_cmd_duality)

    p = sub.add_parser("cm", help="complex algebra of a frame")
    p.add_argument("--frame", required=True)
    p.set_defaults(handler=_cmd_cm)

    p = sub.add_parser("cf", help="canonical frame of an algebra")
    p.add_argument("--algebra", required=True)
    p.set_defaults(handler=_cmd_cf)

    p = sub.add_parser("em", help="canonical embedding algebra")
    p.add_argument("--algebra", required=True)
    p.set_defaults(handler=_cmd_em)

    p = sub.add_parser("free", help="n-generated free algebra of a presentation")
    p.add_argument("--presentation", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_free)

    p = sub.add_parser("canonicity", help="level-n canonicity report")
    p.add_argument("--presentation", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_canonicity)

    p = sub.add_parser("probe-power",
                       help="compare cf of a direct power with copies of cf")
    p.add_argument("--presentation", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i-count", type=int, required=True)
    p.set_defaults(handler=_cmd_probe_power)

    p = sub.add_parser("translate", help="standard translation of a formula")
    p.add_argument("--formula", required=True)
    p.set_defaults(handler=_cmd_translate)

    p = sub.add_parser("fo-check", help="first-order satisfaction on a frame or model")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--frame")
    group.add_argument("--model")
    p.add_argument("--fo", required=True)
    p.set_defaults(handler=_cmd_fo_check)

    p = sub.add_parser("qm-check", help="quasi-modal sentence recognition")
    p.add_argument("--fo", required=True)
    p.set_defaults(handler=_cmd_qm_check)

    p = sub.add_parser("morphisms", help="all bounded morphisms between two frames")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--surjective", action="store_true")
    p.set_defaults(handler=_cmd_morphisms)

    p = sub.add_parser("iso", help="frame isomorphism search")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(handler=_cmd_iso)

    p = sub.add_parser("union", help="disjoint union of frames")
    p.add_argument("--frames", nargs="+", required=True)
    p.set_defaults(handler=_cmd_union)

    p = sub.add_parser("subframe", help="generated subframe from seed worlds")
    p.add_argument("--frame", required=True)
    p.add_argument("--seeds", required=True, help="comma-separated world indices")
    p.set_defaults(handler=_cmd_subframe)

    p = sub.add_parser("ultraproduct", help="principal ultraproduct of frames")
    p.add_argument("--frames", nargs="+", required=True)
    p.add_argument("--at", type=int, default=0, help="index of the principal ultrafilter")
    p.add_argument("--nonprincipal", action="store_true",
                   help="request a nonprincipal ultrafilter (always an error)")
    p.set_defaults(handler=_cmd_ultraproduct)

    p = sub.add_parser("gt-closure", help="closure report for a frame class")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(handler=_cmd_gt_closure)

    p = sub.add_parser("gt-search", help="bounded search for a defining formula")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--universe-bound", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--vars", type=int, required=True)
    p.set_defaults(handler=_cmd_gt_search)

    return parser


def dispatch(argv: Sequence[str]) -> int:
    """Run one invocation; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        limits = _load_limits(args)
        return args.handler(args, limits)
    except ModalkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    return dispatch(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    raise SystemExit(main())
