"""JSON system files: loading, bundled corpus lookup, reference transcriptions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .jet import PdeSystem
from .prolong import VectorField


@dataclass
class SystemSpec:
    name: str
    system: PdeSystem
    expected: tuple = ()            # VectorField
    labels: tuple = ()
    extra: dict = field(default_factory=dict)


def bundled(name: str) -> dict:
    return json.loads(resources.files("liepoint").joinpath("data", name).read_text())


def read_spec_json(path: str) -> dict:
    """Read a system file; bare names fall back to the bundled corpus."""
    p = Path(path)
    if p.exists():
        return json.loads(p.read_text())
    try:
        return bundled(p.name)
    except FileNotFoundError:
        raise FileNotFoundError(f"no such system file: {path}") from None


def spec_from_dict(raw: dict) -> SystemSpec:
    for key in ("independents", "dependents", "equations"):
        if key not in raw:
            raise ValueError(f"system file lacks {key!r}")
    sys = PdeSystem.from_strings(raw["independents"], raw["dependents"],
                                 raw.get("parameters", []), raw["equations"],
                                 name=raw.get("name", ""), aliases=raw.get("aliases") or {})
    expected, labels = [], []
    for k, g in enumerate(raw.get("expected_generators", [])):
        comps = g.get("components", g) if isinstance(g, dict) else g
        labels.append(g.get("label", f"X{k + 1}") if isinstance(g, dict) else f"X{k + 1}")
        expected.append(VectorField.from_dict(sys, comps))
    return SystemSpec(raw.get("name", ""), sys, tuple(expected), tuple(labels), raw)


def load_spec(path: str) -> SystemSpec:
    return spec_from_dict(read_spec_json(path))


def reference_tables() -> dict:
    return bundled("reference_tables.json")
