"""JSON schemas: symbols, model configurations, reports.

All angles are radians; complex numbers travel as [re, im] pairs or re/im
arrays.  Emitted JSON is canonical (sorted keys, two-space indent, no
timestamps) so identical inputs produce byte-identical reports.
"""

import json

import numpy as np

from .fig8 import ZetaPair
from .symbols import Symbol


def symbol_to_dict(symbol):
    if symbol.kind == "fourier":
        coeffs = [{"k": int(k), "re": c.real, "im": c.imag}
                  for k, c in sorted(symbol.coeffs.items())]
        out = {"type": "fourier", "coeffs": coeffs}
    else:
        out = {"type": "sampled",
               "theta": symbol.theta.tolist(),
               "re": symbol.values.real.tolist(),
               "im": symbol.values.imag.tolist()}
    if symbol.name:
        out["name"] = symbol.name
    return out


def symbol_from_dict(data):
    kind = data.get("type")
    name = data.get("name")
    if kind == "fourier":
        coeffs = {int(c["k"]): complex(c["re"], c.get("im", 0.0))
                  for c in data["coeffs"]}
        return Symbol.from_coeffs(coeffs, name=name)
    if kind == "sampled":
        theta = np.asarray(data["theta"], dtype=float)
        vals = np.asarray(data["re"], dtype=float) \
            + 1j * np.asarray(data["im"], dtype=float)
        return Symbol.from_samples(theta, vals, name=name)
    raise ValueError(f"unknown symbol type {kind!r}")


def zeta_pair_from_dict(data, **kwargs):
    """Circle-arc model configuration: {"c1": [re, im], "c2": [re, im],
    "r": ..., "nu": ...}."""
    c1 = complex(*data["c1"])
    c2 = complex(*data["c2"])
    return ZetaPair.circle_arc(c1, c2, float(data["r"]), float(data["nu"]),
                               **kwargs)


def zeta_pair_to_dict(pair):
    cfg = pair.config
    return {"c1": [cfg["c1"].real, cfg["c1"].imag],
            "c2": [cfg["c2"].real, cfg["c2"].imag],
            "r": cfg["r"], "nu": cfg["nu"]}


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(obj, path):
    with open(path, "w") as fh:
        fh.write(canonical_json(obj))


def read_json(path):
    with open(path) as fh:
        return json.load(fh)
