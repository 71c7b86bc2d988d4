"""JSON and CSV encodings of field elements, step functions and reports.

Exact values are written as {"cyclotomic": [...]}, the rational coordinates
(as strings) on 1, zeta_p, ..., zeta_p^(p-2); floating values as {"re", "im"}.
Output is deterministic: keys sorted, pieces in canonical order.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from fractions import Fraction

from .cyclotomic import Cyclotomic, simplify
from .gfq import FieldParams
from .localfield import Ball, format_element, parse_element
from .stepfn import StepFunction

__all__ = [
    "value_to_json",
    "value_from_json",
    "step_to_json",
    "step_from_json",
    "shell_to_json",
    "shell_from_json",
    "dumps",
    "to_csv",
    "read_function_file",
]


def value_to_json(v, p: int = None):
    if isinstance(v, Cyclotomic):
        return {"cyclotomic": [str(c) for c in v.coords]}
    if isinstance(v, (int, Fraction)):
        n = max((p or 2) - 1, 1)
        return {"cyclotomic": [str(Fraction(v))] + ["0"] * (n - 1)}
    z = complex(v)
    return {"re": z.real, "im": z.imag}


def value_from_json(d, p: int):
    if isinstance(d, (int, str)):
        return Fraction(d)
    if isinstance(d, float):
        return d
    if "cyclotomic" in d:
        coords = [Fraction(c) for c in d["cyclotomic"]]
        n = max(p - 1, 1)
        coords = coords + [Fraction(0)] * (n - len(coords))
        return simplify(Cyclotomic(p, coords))
    re, im = float(d.get("re", 0.0)), float(d.get("im", 0.0))
    return complex(re, im) if im else re


def step_to_json(f: StepFunction) -> dict:
    p = f.params.p
    pieces = sorted(f.pieces, key=lambda bc: bc[0].sort_key())
    return {
        "params": f.params.to_json(),
        "pieces": [{"center": format_element(b.center), "level": b.level, "coeff": value_to_json(c, p)} for b, c in pieces],
    }


def step_from_json(d: dict, params: FieldParams = None) -> StepFunction:
    if params is None:
        params = FieldParams.from_json(d["params"])
    pieces = []
    for pc in d["pieces"]:
        center = parse_element(pc["center"], params)
        pieces.append((Ball(center, int(pc["level"])), value_from_json(pc["coeff"], params.p)))
    return StepFunction(params, pieces)


def _num(x):
    return str(x) if isinstance(x, Fraction) else float(x)


def shell_to_json(F) -> dict:
    d = step_to_json(F.step)
    d["weights"] = [[lev, _num(s)] for lev, s in F.weights]
    d["half_power"] = F.half_power
    return d


def shell_from_json(d: dict, params: FieldParams = None):
    from .sobolev import ShellFunction

    def num(x):
        return Fraction(x) if isinstance(x, str) else x

    step = step_from_json(d, params)
    return ShellFunction(step, tuple((int(l), num(s)) for l, s in d.get("weights", [])), int(d.get("half_power", 0)))


def read_function_file(path: str, params: FieldParams = None):
    with open(path) as fh:
        d = json.load(fh)
    if "packet" in d:
        d = d["packet"]
    if "freq" in d:
        d = d["freq"]
    if "weights" in d or "half_power" in d:
        return shell_from_json(d, params)
    return step_from_json(d, params)


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, Cyclotomic):
        return value_to_json(o)
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    if hasattr(o, "to_json"):
        return o.to_json()
    raise TypeError(f"cannot encode {type(o).__name__}")


def _clean(o):
    if isinstance(o, float) and math.isinf(o):
        return "inf" if o > 0 else "-inf"
    if isinstance(o, dict):
        return {str(k): _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    return o


def dumps(obj) -> str:
    return json.dumps(_clean(obj), default=_default, sort_keys=True, indent=2) + "\n"


def to_csv(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
