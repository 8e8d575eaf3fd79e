"""Input documents and JSON output.

Inputs are JSON documents::

    {"n": 4, "l": 8, "mode": "discrete", "strings": ["12244131", "[1,2,2,4,4,1,3,1]"]}
    {"n": 2, "l": 2, "mode": "generalized",
     "strings": [[{"1": "1/2", "2": "1/2"}, {"1": "1"}], ...]}

or plain text with one ordinary string per line.  Rationals travel as
``"p/q"`` text and the unbounded death is ``"inf"``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .errors import InputError
from .metrics import DiscreteString, GeneralizedString, StringSet


@dataclass(frozen=True)
class InputDocument:
    n: int
    l: int
    mode: str
    strings: StringSet

    def to_json(self) -> dict:
        if self.mode == "discrete":
            items = [str(s) for s in self.strings]
        else:
            items = [
                [{str(j + 1): str(w) for j, w in enumerate(dist) if w} for dist in s.weights]
                for s in self.strings
            ]
        return {"n": self.n, "l": self.l, "mode": self.mode, "strings": items}


def parse_rational(text: Any, where: str = "") -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InputError(f"{where}expected a rational as \"p/q\" text, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}bad rational {text!r}") from exc


def _parse_generalized(item: Any, n: int, where: str) -> GeneralizedString:
    if not isinstance(item, list):
        raise InputError(f"{where}generalized string must be a list of letter maps")
    rows = []
    for i, cell in enumerate(item):
        if not isinstance(cell, dict):
            raise InputError(f"{where}position {i + 1}: expected a map letter -> weight")
        row = [Fraction(0)] * n
        for key, w in cell.items():
            try:
                a = int(key)
            except ValueError as exc:
                raise InputError(f"{where}position {i + 1}: bad letter {key!r}") from exc
            if not 1 <= a <= n:
                raise InputError(f"{where}position {i + 1}: letter {a} outside 1..{n}")
            row[a - 1] = parse_rational(w, f"{where}position {i + 1}: ")
        rows.append(tuple(row))
    try:
        return GeneralizedString(tuple(rows))
    except InputError as exc:
        raise InputError(f"{where}{exc}") from exc


def document_from_json(data: Any) -> InputDocument:
    if not isinstance(data, dict):
        raise InputError("input document must be a JSON object")
    missing = [k for k in ("n", "mode", "strings") if k not in data]
    if missing:
        raise InputError(f"input document lacks {', '.join(missing)}")
    n, mode, items = data["n"], data["mode"], data["strings"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    if mode not in ("discrete", "generalized"):
        raise InputError(f"mode must be discrete or generalized, got {mode!r}")
    if not isinstance(items, list) or not items:
        raise InputError("strings must be a nonempty list")
    strings = []
    for k, item in enumerate(items):
        where = f"string {k + 1}: "
        if mode == "discrete":
            if not isinstance(item, str):
                raise InputError(f"{where}expected text")
            try:
                s = DiscreteString.parse(item, n)
            except InputError as exc:
                raise InputError(f"{where}{exc}") from exc
            if n > 9 and not item.strip().startswith("["):
                raise InputError(f"{where}alphabets above 9 letters need bracketed lists")
        else:
            s = _parse_generalized(item, n, where)
        strings.append(s)
    A = StringSet(tuple(strings))
    l = data.get("l", A.l)
    if l != A.l:
        raise InputError(f"declared l={l} but strings have length {A.l}")
    return InputDocument(n, A.l, mode, A)


def parse_text(text: str, n: Optional[int] = None) -> InputDocument:
    strings, lines = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            strings.append(DiscreteString.parse(line))
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
        lines.append(lineno)
    if not strings:
        raise InputError("no strings in input")
    if n is None:
        n = max(s.n for s in strings)
    A = StringSet(tuple(DiscreteString(s.symbols, n) for s in strings))
    return InputDocument(n, A.l, "discrete", A)


def parse_input(text: str) -> InputDocument:
    stripped = text.lstrip()
    if not stripped:
        raise InputError("line 1, column 1: empty input")
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        return document_from_json(data)
    return parse_text(text)


def load_input(path: str) -> InputDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parse_input(text)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def rational_text(x) -> str:
    if x is None:
        return "inf"
    return str(Fraction(x))


def jsonable(obj: Any) -> Any:
    """Fractions become "p/q" text, tuples become lists, sets sorted lists."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    return obj


def dumps(doc: dict) -> str:
    return json.dumps(jsonable(doc), indent=2, ensure_ascii=False) + "\n"
