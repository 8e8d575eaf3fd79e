"""Command-line front end.

Vertices are numbered from 1 in everything the CLI reads or writes.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .errors import CapExceededError, HammologyError, InputError
from .filtration import (
    DEFAULT_MAX_ISO_SIZE,
    DEFAULT_MAX_SET_SIZE,
    build_filtration,
    dh_isomorphism,
    filtration_isomorphic,
)
from .io import InputDocument, dumps, load_input, parse_rational, rational_text
from .matching import bottleneck, compare, register_cycles
from .metrics import hausdorff
from .miniball import radius_points
from .persistence import BarcodeSet, bits, compute_persistence, is_morse
from .separation import SeparationResult, default_epsilon, separate, separate_union

TIE_BREAK = {
    "pair": "lowest shared radius, then (dimension, vertices)",
    "z": "difference against the lexicographically smaller generator set, smallest id",
    "j": "smallest power of two below the step bounds",
}


def label(simplex) -> list[int]:
    return [v + 1 for v in simplex]


def parse_simplex(text: str, m: int) -> tuple:
    ids = []
    for tok in text.split(","):
        tok = tok.strip().lower().lstrip("s")
        try:
            v = int(tok)
        except ValueError as exc:
            raise InputError(f"bad vertex {tok!r} in --simplex") from exc
        if not 1 <= v <= m:
            raise InputError(f"vertex {v} outside 1..{m}")
        ids.append(v - 1)
    if len(set(ids)) != len(ids):
        raise InputError("repeated vertex in --simplex")
    return tuple(sorted(ids))


def _cap(args, default: int) -> int:
    cap = args.max_set_size if args.max_set_size is not None else default
    if cap > 2 * default and not args.i_know:
        raise CapExceededError(f"--max-set-size {cap} exceeds twice the default {default}; add --i-know")
    return cap


def _mode(args, doc: InputDocument) -> str:
    mode = args.mode or doc.mode
    if mode == "discrete" and doc.mode != "discrete":
        raise InputError("discrete mode needs ordinary strings")
    return mode


def barcode_json(bc: BarcodeSet, max_dim: Optional[int] = None, zero_length: bool = False) -> dict:
    entries = bc.reduction.filtration.entries
    out: dict = {}
    for b in sorted(bc.bars, key=lambda b: (b.dim, b.birth, b.death is None, b.death or 0, b.birth_index)):
        if max_dim is not None and b.dim > max_dim:
            continue
        if b.zero_length and not zero_length:
            continue
        out.setdefault(str(b.dim), []).append({
            "birth": rational_text(b.birth),
            "death": rational_text(b.death),
            "birth_simplex": label(b.birth_simplex),
            "death_simplex": None if b.death_simplex is None else label(b.death_simplex),
            "representative": [label(entries[i][0]) for i in bits(b.representative)],
        })
    return out


def radius_table(entries) -> list:
    return [{"simplex": label(s), "radius": rational_text(r)} for s, r in entries]


def trace_json(res: SeparationResult) -> dict:
    return {
        "epsilon": rational_text(res.epsilon),
        "appended_positions": res.appended,
        "steps": [
            {
                "z": st.z + 1,
                "j": st.j,
                "fixed": label(st.target_pair[0]),
                "rising": label(st.target_pair[1]),
                "appended_position": st.appended_position + 1,
                "bounds": [None if b is None else rational_text(b) for b in st.bounds],
            }
            for st in res.steps
        ],
    }


def _intervals(bc: BarcodeSet, max_dim: Optional[int] = None) -> dict:
    out = {}
    for b in bc.bars:
        if b.zero_length or (max_dim is not None and b.dim > max_dim):
            continue
        out.setdefault(b.dim, []).append((b.birth, b.death))
    return out


def _write_tsv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    buf = _io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def _bar_rows(bc: BarcodeSet, max_dim: Optional[int] = None, tag: str = "") -> list:
    rows = []
    for b in sorted(bc.bars, key=lambda b: (b.dim, b.birth, b.death is None, b.death or 0)):
        if b.zero_length or (max_dim is not None and b.dim > max_dim):
            continue
        row = [b.dim, rational_text(b.birth), rational_text(b.death), " ".join(map(str, label(b.birth_simplex)))]
        rows.append(([tag] if tag else []) + row)
    return rows


def _svg(bc: BarcodeSet, path: str, title: str, max_dim: Optional[int] = None) -> None:
    from .plotting import render_barcode_svg

    render_barcode_svg(_intervals(bc, max_dim), bc.reduction.filtration.levels, path, title)


# -- commands ------------------------------------------------------------------------------


def cmd_barcode(args) -> dict:
    doc = load_input(args.input)
    mode = _mode(args, doc)
    F = build_filtration(doc.strings, mode, _cap(args, DEFAULT_MAX_SET_SIZE))
    bc = compute_persistence(F)
    if args.svg:
        _svg(bc, args.svg, f"barcode ({mode})", args.max_dim)
    if args.tsv:
        _write_tsv(args.tsv, ["dim", "birth", "death", "birth_simplex"], _bar_rows(bc, args.max_dim))
    return {
        "command": "barcode",
        "config": {"mode": mode, "max_dim": args.max_dim, "max_set_size": _cap(args, DEFAULT_MAX_SET_SIZE)},
        "strings": [str(s) for s in doc.strings],
        "levels": [rational_text(v) for v in F.levels],
        "radii": radius_table(F.entries),
        "barcodes": barcode_json(bc, args.max_dim),
        "morse": is_morse(bc),
    }


def cmd_radius(args) -> dict:
    doc = load_input(args.input)
    mode = _mode(args, doc)
    s = parse_simplex(args.simplex, len(doc.strings))
    cert = radius_points([doc.strings[i] for i in s], mode)
    return {
        "command": "radius",
        "config": {"mode": mode},
        "simplex": label(s),
        "radius": rational_text(cert.radius),
        "center": str(cert.center),
    }


def _epsilon(args) -> Optional[Fraction]:
    if args.epsilon is None:
        return None
    eps = parse_rational(args.epsilon, "--epsilon: ")
    if eps <= 0:
        raise InputError("--epsilon must be positive")
    return eps


def cmd_separate(args) -> dict:
    doc = load_input(args.input)
    res = separate(doc.strings, _epsilon(args), max_size=_cap(args, DEFAULT_MAX_SET_SIZE))
    bc = compute_persistence(res.filtration())
    if args.svg:
        _svg(bc, args.svg, "separated barcode")
    if args.tsv:
        rows = [[" ".join(map(str, label(s))), rational_text(res.original_radii[s]), rational_text(r)]
                for s, r in res.filtration().entries]
        _write_tsv(args.tsv, ["simplex", "radius", "separated_radius"], rows)
    return {
        "command": "separate",
        "config": {"epsilon": rational_text(res.epsilon), "tie_break": TIE_BREAK},
        "strings": [str(s) for s in doc.strings],
        "trace": trace_json(res),
        "separated": InputDocument(doc.n, res.separated.l, "generalized", res.separated).to_json(),
        "radii": [
            {"simplex": label(s), "radius": rational_text(res.original_radii[s]), "separated": rational_text(r)}
            for s, r in res.filtration().entries
        ],
        "barcodes": barcode_json(bc),
        "morse": is_morse(bc),
    }


def _pair_inputs(args) -> tuple:
    a, b = load_input(args.input_a), load_input(args.input_b)
    if (a.n, a.l) != (b.n, b.l):
        raise InputError(f"ambient mismatch: (n={a.n}, l={a.l}) vs (n={b.n}, l={b.l})")
    return a, b


def registration_json(reg) -> dict:
    def bar(b):
        return {"birth": rational_text(b.birth), "death": rational_text(b.death), "birth_simplex": label(b.birth_simplex)}

    return {
        "dim": reg.dim,
        "pairs": [{"left": bar(a), "right": bar(b), "union_death": rational_text(d)} for a, b, d in reg.pairs],
        "residual_left": [bar(b) for b in reg.residual_left],
        "residual_right": [bar(b) for b in reg.residual_right],
    }


def cmd_dnew(args) -> dict:
    a, b = _pair_inputs(args)
    cap = _cap(args, DEFAULT_MAX_SET_SIZE)
    if len(a.strings) > cap or len(b.strings) > cap:
        raise CapExceededError(f"set sizes {len(a.strings)}, {len(b.strings)} exceed the cap {cap}")
    rep = compare(a.strings, b.strings, _epsilon(args))
    if args.tsv:
        rows = [[f"d_{k}", rational_text(rep.d[k]), rational_text(rep.weights[k])] for k in sorted(rep.d)]
        rows.append(["d_new", rational_text(rep.value), "1"])
        _write_tsv(args.tsv, ["distance", "value", "weight"], rows)
    if args.svg:
        stem = args.svg[:-4] if args.svg.endswith(".svg") else args.svg
        _svg(rep.barcodes_a, f"{stem}.A.svg", "separated barcode of A")
        _svg(rep.barcodes_b, f"{stem}.B.svg", "separated barcode of B")
    return {
        "command": "dnew",
        "config": {"epsilon": rational_text(rep.epsilon), "tie_break": TIE_BREAK},
        "k0": rep.k0,
        "weights": {str(k): rational_text(w) for k, w in rep.weights.items()},
        "weights_sum": rational_text(sum(rep.weights.values())),
        "distances": {f"d_{k}": rational_text(v) for k, v in sorted(rep.d.items())} | {"d_new": rational_text(rep.value)},
        "registrations": [registration_json(r) for _, r in sorted(rep.registrations.items())],
        "traces": {
            "A": trace_json(rep.sep_a),
            "B": trace_json(rep.sep_b),
            "union": None if rep.union is None else trace_json(rep.union.result),
        },
        "barcodes": {"A": barcode_json(rep.barcodes_a), "B": barcode_json(rep.barcodes_b)},
    }


def cmd_register(args) -> dict:
    a, b = _pair_inputs(args)
    eps = _epsilon(args)
    if eps is None:
        eps = default_epsilon(a.strings, b.strings)
    sa, sb = separate(a.strings, eps), separate(b.strings, eps)
    bca, bcb = compute_persistence(sa.filtration()), compute_persistence(sb.filtration())
    union = separate_union(a.strings, b.strings, eps)
    reg = register_cycles(bca, bcb, union, args.dim)
    delta, _ = bottleneck(reg.residual_left, reg.residual_right)
    return {
        "command": "register",
        "config": {"epsilon": rational_text(eps), "dim": args.dim},
        "registration": registration_json(reg),
        "residual_bottleneck": rational_text(delta),
    }


def cmd_hausdorff(args) -> dict:
    a, b = _pair_inputs(args)
    return {"command": "hausdorff", "hausdorff": rational_text(hausdorff(a.strings, b.strings))}


def cmd_iso(args) -> dict:
    a, b = _pair_inputs(args)
    cap = _cap(args, DEFAULT_MAX_ISO_SIZE)
    if args.kind == "filtration":
        mode = args.mode or ("discrete" if a.mode == b.mode == "discrete" else "generalized")
        Fa = build_filtration(a.strings, mode, cap)
        Fb = build_filtration(b.strings, mode, cap)
        f = filtration_isomorphic(Fa, Fb, cap)
        found = None if f is None else {str(v + 1): w + 1 for v, w in f.items()}
        return {"command": "iso", "config": {"kind": "filtration", "mode": mode}, "mapping": found or "none"}
    iso = dh_isomorphism(a.strings, b.strings, cap)
    if iso is None:
        return {"command": "iso", "config": {"kind": "hamming"}, "isometry": "none"}
    return {
        "command": "iso",
        "config": {"kind": "hamming"},
        "isometry": {
            "positions": [p + 1 for p in iso.position_map],
            "letters": [list(m) for m in iso.letter_maps],
        },
    }


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hammology", description="Persistent homology of string sets under Hamming distance.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, pair: bool = False):
        if pair:
            sp.add_argument("input_a")
            sp.add_argument("input_b")
        else:
            sp.add_argument("input")
        sp.add_argument("--output", "-o", help="write the JSON result here instead of stdout")
        sp.add_argument("--max-set-size", type=int, help="cap on the number of strings")
        sp.add_argument("--i-know", action="store_true", help="allow caps beyond twice the default")

    sp = sub.add_parser("barcode", help="radius table and barcodes of one set")
    common(sp)
    sp.add_argument("--mode", choices=("discrete", "generalized"))
    sp.add_argument("--max-dim", type=int)
    sp.add_argument("--svg", help="render the barcode to this SVG file")
    sp.add_argument("--tsv", help="write the bars as a tab-separated table")
    sp.set_defaults(func=cmd_barcode)

    sp = sub.add_parser("radius", help="radius and a center of one simplex")
    common(sp)
    sp.add_argument("--mode", choices=("discrete", "generalized"))
    sp.add_argument("--simplex", required=True, help='vertices numbered from 1, e.g. "1,3" or "s1,s3"')
    sp.set_defaults(func=cmd_radius)

    sp = sub.add_parser("separate", help="separate the radii of one set")
    common(sp)
    sp.add_argument("--epsilon", help='total shift budget as "p/q"')
    sp.add_argument("--svg")
    sp.add_argument("--tsv", help="write original and separated radii as a tab-separated table")
    sp.set_defaults(func=cmd_separate)

    sp = sub.add_parser("dnew", help="the distances d_0..d_k0 and d_new between two sets")
    common(sp, pair=True)
    sp.add_argument("--epsilon")
    sp.add_argument("--svg", help="stem for the two separated barcodes (STEM.A.svg, STEM.B.svg)")
    sp.add_argument("--tsv", help="write the distances as a tab-separated table")
    sp.set_defaults(func=cmd_dnew)

    sp = sub.add_parser("register", help="cycle registration in one dimension")
    common(sp, pair=True)
    sp.add_argument("--epsilon")
    sp.add_argument("--dim", type=int, default=1)
    sp.set_defaults(func=cmd_register)

    sp = sub.add_parser("hausdorff", help="Hausdorff distance between two sets")
    common(sp, pair=True)
    sp.set_defaults(func=cmd_hausdorff)

    sp = sub.add_parser("iso", help="filtration or Hamming isomorphism between two sets")
    common(sp, pair=True)
    sp.add_argument("--kind", choices=("filtration", "hamming"), default="filtration")
    sp.add_argument("--mode", choices=("discrete", "generalized"))
    sp.set_defaults(func=cmd_iso)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
    except HammologyError as exc:
        print(f"hammology: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hammology: {exc}", file=sys.stderr)
        return InputError.exit_code
    text = dumps(doc)
    try:
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"hammology: {exc}", file=sys.stderr)
        return InputError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
