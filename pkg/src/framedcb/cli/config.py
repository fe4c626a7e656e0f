"""The structured-text datum file read by the CLI.

Example::

    [datum]
    nodes = i j
    i = 2 -1
    j = -1 2

    [weights]
    xi = 1 0
    lam = 0 1

Rows of ``[datum]`` are keyed by node name. Each ``[weights]`` entry is the
vector of pairings ``<i, lambda>`` in node order.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..cartan import CartanDatum, Weight, cartan_type


class ConfigError(ValueError):
    pass


def _ints(text: str, what: str) -> list:
    try:
        return [int(t) for t in re.split(r"[\s,]+", text.strip()) if t]
    except ValueError:
        raise ConfigError(f"{what}: expected integers, got {text!r}") from None


@dataclass
class DatumConfig:
    datum: CartanDatum
    weights: dict = field(default_factory=dict)  # name -> Weight
    source: str = "builtin"

    def weight(self, spec: str) -> Weight:
        """A named weight from the file, or a literal pairing vector such as ``1,0``."""
        if spec in self.weights:
            return self.weights[spec]
        vals = _ints(spec, "weight")
        if len(vals) != self.datum.rank:
            raise ConfigError(f"weight {spec!r} needs {self.datum.rank} pairings")
        w = self.datum.weight(vals)
        if not w.is_dominant():
            raise ConfigError(f"weight {spec!r} is not dominant")
        return w


def parse_config(text: str, source: str = "<string>") -> DatumConfig:
    cp = configparser.ConfigParser()
    cp.optionxform = str  # node names are case sensitive
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if not cp.has_section("datum"):
        raise ConfigError("missing [datum] section")
    sec = cp["datum"]
    if "type" in sec:
        datum = cartan_type(sec["type"])
    else:
        if "nodes" not in sec:
            raise ConfigError("[datum] needs 'nodes' (or 'type')")
        nodes = sec["nodes"].split()
        rows = []
        for n in nodes:
            if n not in sec:
                raise ConfigError(f"[datum] has no row for node {n!r}")
            row = _ints(sec[n], f"row {n}")
            if len(row) != len(nodes):
                raise ConfigError(f"row {n} has {len(row)} entries, expected {len(nodes)}")
            rows.append(row)
        try:
            datum = CartanDatum.build(nodes, rows)
        except ValueError as exc:
            raise ConfigError(f"invalid pairing matrix: {exc}") from None
    cfg = DatumConfig(datum, source=source)
    if cp.has_section("weights"):
        for name, value in cp["weights"].items():
            vals = _ints(value, f"weight {name}")
            if len(vals) != datum.rank:
                raise ConfigError(f"weight {name} needs {datum.rank} pairings")
            w = datum.weight(vals)
            if not w.is_dominant():
                raise ConfigError(f"weight {name} is not dominant")
            cfg.weights[name] = w
    return cfg


def load_config(path: "str | Path") -> DatumConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from None
    return parse_config(text, source=str(p))


def builtin_config(type_name: str) -> DatumConfig:
    return DatumConfig(cartan_type(type_name), source=f"builtin:{type_name.upper()}")
