"""Command line front end.

Exit codes: 0 success, 1 semantic failure (not dendroidal, not monotone,
not maximal), 2 parse or flag error, 3 overflow or budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import category, core, structure, terms
from .core import BroadPoset, Flavour, MonotoneMap
from .errors import (
    BudgetExceeded,
    ClosureOverflow,
    DendroError,
    DuplicateEdge,
    ParseError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dendro",
        description="Broad posets, trees, and the maps between them.",
    )
    parser.add_argument(
        "--flavour",
        choices=[f.value for f in Flavour],
        default=Flavour.COMMUTATIVE.value,
        help="commutative (default) or planar",
    )
    parser.add_argument("--output", choices=["text", "json"], default="text")
    parser.add_argument("--max-word-len", type=int, default=None)
    parser.add_argument("--budget", type=int, default=10**7)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validation and tree report for a term")
    p.add_argument("term")

    p = sub.add_parser("info", help="root, leaves, stumps, inner edges, degree, links")
    p.add_argument("term")

    p = sub.add_parser("subtrees", help="list subtrees, optionally only maximal ones")
    p.add_argument("term")
    p.add_argument("--maximal", action="store_true")

    p = sub.add_parser("faces", help="all face maps of a tree")
    p.add_argument("term")

    p = sub.add_parser("degeneracies", help="all degeneracy maps of a tree")
    p.add_argument("term")

    p = sub.add_parser("hom", help="enumerate monotone maps between two terms")
    p.add_argument("source")
    p.add_argument("target")

    p = sub.add_parser("factor", help="factor a map into degeneracies, iso, faces")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--map", required=True, dest="assignment", help='e.g. "a=>x,b=>y"')

    p = sub.add_parser("graft", help="graft the second tree onto a leaf of the first")
    p.add_argument("host")
    p.add_argument("--at", required=True, dest="leaf")
    p.add_argument("scion")

    p = sub.add_parser("tensor", help="tensor product of two serialized broad posets")
    p.add_argument("left_file")
    p.add_argument("right_file")

    p = sub.add_parser("product", help="cartesian product of two serialized broad posets")
    p.add_argument("left_file")
    p.add_argument("right_file")

    p = sub.add_parser("pushout", help="pushout of two serialized monotone maps")
    p.add_argument("left_file")
    p.add_argument("right_file")

    p = sub.add_parser("dot", help="Graphviz digraph of a term")
    p.add_argument("term")

    return parser


def _parse_tree(text: str, flavour: Flavour) -> BroadPoset:
    return terms.to_broad(terms.parse_term(text), flavour)


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _parse_assignment(text: str) -> dict[str, str]:
    assignment: dict[str, str] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=>" not in part:
            raise ParseError(f"expected 'a=>b' in map literal, got {part!r}", 0)
        key, value = part.split("=>", 1)
        assignment[key.strip()] = value.strip()
    return assignment


def _word_str(w) -> str:
    return str(w)


def _map_str(m: MonotoneMap) -> str:
    return ", ".join(f"{k}=>{v}" for k, v in m.pairs)


def _poset_lines(poset: BroadPoset) -> list[str]:
    rel = sorted(core.pair_str(p) for p in poset.relation)
    return [
        f"carrier: {','.join(sorted(poset.carrier))}",
        f"relation: {'; '.join(rel) if rel else '(reflexive only)'}",
    ]


def cmd_check(args, flavour: Flavour):
    poset = _parse_tree(args.term, flavour)
    report = structure.is_dendroidal(poset)
    validation = core.validate(poset)
    lv = sorted(structure.leaves(poset))
    deg = structure.degree(poset)
    text = [
        f"dendroidal: {str(report.is_dendroidal).lower()}; degree {deg}; "
        f"leaves {','.join(lv) if lv else '(none)'}"
    ]
    for violation in report.violations:
        text.append(f"violation: {violation}")
    payload = {
        "report": report.to_json(),
        "validation": validation.to_json(),
        "degree": deg,
        "leaves": lv,
    }
    return payload, text, 0 if report.is_dendroidal else 1


def cmd_info(args, flavour: Flavour):
    poset = _parse_tree(args.term, flavour)
    the_root = structure.root(poset)
    lv = sorted(structure.leaves(poset))
    st = sorted(structure.stumps(poset))
    inner = sorted(structure.inner_edges(poset))
    vertex_list = sorted(structure.links(poset), key=lambda p: p[1])
    payload = {
        "poset": poset.to_json(),
        "root": the_root,
        "leaves": lv,
        "stumps": st,
        "inner_edges": inner,
        "degree": len(vertex_list),
        "links": [
            {"source": list(w.letters), "target": t} for w, t in vertex_list
        ],
    }
    text = [
        f"root: {the_root}",
        f"leaves: {','.join(lv) if lv else '(none)'}",
        f"stumps: {','.join(st) if st else '(none)'}",
        f"inner edges: {','.join(inner) if inner else '(none)'}",
        f"degree: {len(vertex_list)}",
        "links: " + "; ".join(core.pair_str(p) for p in vertex_list),
    ]
    return payload, text, 0


def cmd_subtrees(args, flavour: Flavour):
    poset = _parse_tree(args.term, flavour)
    subs = category.maximal_subtrees(poset) if args.maximal else category.enumerate_subtrees(poset)
    target = structure.degree(poset) - 1
    entries = []
    text = []
    for sub in subs:
        entry = {"poset": sub.to_json()}
        line = "{" + ",".join(sorted(sub.carrier)) + "}"
        rel = sorted(core.pair_str(p) for p in sub.relation)
        line += " with " + ("; ".join(rel) if rel else "(reflexive only)")
        if structure.degree(sub) == target:
            kind = category.classify_maximal(poset, sub)
            entry["face"] = kind.to_json()
            line += f"  [{kind.describe()}]"
        entries.append(entry)
        text.append(line)
    text.append(f"total: {len(subs)}")
    return {"subtrees": entries, "count": len(subs)}, text, 0


def cmd_faces(args, flavour: Flavour):
    poset = _parse_tree(args.term, flavour)
    faces = category.all_faces(poset)
    payload = {
        "faces": [
            {"kind": face.kind.to_json(), "map": face.map.to_json()} for face in faces
        ]
    }
    text = [
        f"{face.kind.describe()}: keeps {{{','.join(sorted(face.domain.carrier))}}}"
        for face in faces
    ]
    text.append(f"total: {len(faces)}")
    return payload, text, 0


def cmd_degeneracies(args, flavour: Flavour):
    poset = _parse_tree(args.term, flavour)
    maps = category.degeneracies(poset)
    payload = {"degeneracies": [m.to_json() for m in maps]}
    text = [f"collapse {max(set(m.domain.carrier) - set(m.codomain.carrier))}: {_map_str(m)}" for m in maps]
    text.append(f"total: {len(maps)}")
    return payload, text, 0


def cmd_hom(args, flavour: Flavour, budget: int):
    source = _parse_tree(args.source, flavour)
    target = _parse_tree(args.target, flavour)
    maps = core.enumerate_monotone(source, target, budget)
    payload = {"count": len(maps), "maps": [dict(m.pairs) for m in maps]}
    text = [_map_str(m) for m in maps]
    text.append(f"total: {len(maps)}")
    return payload, text, 0


def cmd_factor(args, flavour: Flavour):
    source = _parse_tree(args.source, flavour)
    target = _parse_tree(args.target, flavour)
    assignment = _parse_assignment(args.assignment)
    mapping = MonotoneMap.from_dict(source, target, assignment)
    result = category.factorize(mapping)
    composite_ok = result.composite() == mapping
    payload = {"factorization": result.to_json(), "composite_matches": composite_ok}
    text = [f"degeneracies: {len(result.degeneracies)}"]
    for m in result.degeneracies:
        text.append(f"  collapse: {_map_str(m)}")
    text.append(f"iso: {_map_str(result.iso)}")
    text.append(f"faces: {len(result.faces)}")
    for kind in result.kinds:
        text.append(f"  {kind.describe()}")
    text.append(f"composite matches: {str(composite_ok).lower()}")
    return payload, text, 0 if composite_ok else 1


def cmd_graft(args, flavour: Flavour):
    host = _parse_tree(args.host, flavour)
    scion = _parse_tree(args.scion, flavour)
    result = terms.graft(host, args.leaf, scion)
    payload = {
        "poset": result.to_json(),
        "renamed": result.meta.get("renamed", {}),
        "term": terms.print_term(terms.to_term(result)),
    }
    text = [payload["term"], *_poset_lines(result)]
    renamed = result.meta.get("renamed", {})
    if renamed:
        text.append("renamed: " + ", ".join(f"{k}=>{v}" for k, v in sorted(renamed.items())))
    return payload, text, 0


def cmd_tensor(args, flavour: Flavour, max_word_len: int | None):
    left = BroadPoset.from_json(_load_json(args.left_file))
    right = BroadPoset.from_json(_load_json(args.right_file))
    result = core.tensor(left, right, max_word_len)
    return {"poset": result.to_json()}, _poset_lines(result), 0


def cmd_product(args, flavour: Flavour):
    left = BroadPoset.from_json(_load_json(args.left_file))
    right = BroadPoset.from_json(_load_json(args.right_file))
    result, proj_left, proj_right = core.product(left, right)
    payload = {
        "poset": result.to_json(),
        "projection_left": dict(proj_left.pairs),
        "projection_right": dict(proj_right.pairs),
    }
    return payload, _poset_lines(result), 0


def cmd_pushout(args, flavour: Flavour, max_word_len: int | None):
    left_leg = MonotoneMap.from_json(_load_json(args.left_file))
    right_leg = MonotoneMap.from_json(_load_json(args.right_file))
    result, inj_left, inj_right = core.pushout(left_leg, right_leg, max_word_len)
    payload = {
        "poset": result.to_json(),
        "injection_left": dict(inj_left.pairs),
        "injection_right": dict(inj_right.pairs),
    }
    return payload, _poset_lines(result), 0


def cmd_dot(args, flavour: Flavour):
    poset = _parse_tree(args.term, flavour)
    lines = ["digraph tree {", "  rankdir=BT;"]
    for edge in sorted(poset.carrier):
        lines.append(f'  "{edge}";')
    for w, target in sorted(structure.links(poset), key=lambda p: p[1]):
        if w.is_empty:
            lines.append(f'  "stump_{target}" [shape=point];')
            lines.append(f'  "stump_{target}" -> "{target}";')
        else:
            for child in w.letters:
                lines.append(f'  "{child}" -> "{target}";')
    lines.append("}")
    dot = "\n".join(lines)
    return {"dot": dot}, [dot], 0


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flavour = Flavour(args.flavour)
    try:
        if args.command == "check":
            payload, text, code = cmd_check(args, flavour)
        elif args.command == "info":
            payload, text, code = cmd_info(args, flavour)
        elif args.command == "subtrees":
            payload, text, code = cmd_subtrees(args, flavour)
        elif args.command == "faces":
            payload, text, code = cmd_faces(args, flavour)
        elif args.command == "degeneracies":
            payload, text, code = cmd_degeneracies(args, flavour)
        elif args.command == "hom":
            payload, text, code = cmd_hom(args, flavour, args.budget)
        elif args.command == "factor":
            payload, text, code = cmd_factor(args, flavour)
        elif args.command == "graft":
            payload, text, code = cmd_graft(args, flavour)
        elif args.command == "tensor":
            payload, text, code = cmd_tensor(args, flavour, args.max_word_len)
        elif args.command == "product":
            payload, text, code = cmd_product(args, flavour)
        elif args.command == "pushout":
            payload, text, code = cmd_pushout(args, flavour, args.max_word_len)
        elif args.command == "dot":
            payload, text, code = cmd_dot(args, flavour)
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command!r}")
    except (ParseError, DuplicateEdge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ClosureOverflow, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DendroError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.output == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text:
            print(line)
    return code


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
