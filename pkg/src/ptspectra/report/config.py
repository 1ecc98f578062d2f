"""Run configuration: schema validation, defaults and content digest."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from ..errors import ConfigInvalid

DEFAULTS = {"hbar": 1.0, "count": 20, "tolerances": {}, "output_dir": "ptspectra-out", "seed_overrides": {}}


def schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("config.schema.json").read_text(encoding="utf-8"))


def parse_complex(text: str) -> complex:
    """Accept '0.3-0.4i' as well as Python's '0.3-0.4j'."""
    return complex(text.strip().replace(" ", "").replace("i", "j"))


@dataclass(frozen=True)
class RunConfig:
    n: tuple
    g: float
    L: tuple
    tasks: tuple
    hbar: float = 1.0
    count: int = 20
    emapped: tuple = ()
    tolerances: dict = field(default_factory=dict)
    output_dir: str = "ptspectra-out"
    seed_overrides: dict = field(default_factory=dict)

    def canonical(self) -> dict:
        d = {
            "n": list(self.n), "g": self.g, "L": list(self.L), "tasks": list(self.tasks), "hbar": self.hbar,
            "count": self.count, "tolerances": dict(sorted(self.tolerances.items())),
            "seed_overrides": {k: list(v) for k, v in sorted(self.seed_overrides.items())},
        }
        if self.emapped:
            d["emapped"] = list(self.emapped)
        return d

    @property
    def digest(self) -> str:
        # output_dir is where results go, not what they are
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else ""


def validate_config(raw: dict) -> RunConfig:
    """Validate a parsed config; raises ConfigInvalid carrying a JSON pointer."""
    try:
        jsonschema.validate(raw, schema())
    except jsonschema.ValidationError as exc:
        raise ConfigInvalid(exc.message, pointer=_pointer(exc.absolute_path)) from None
    L = raw["L"]
    for k in range(1, len(L)):
        if not L[k] > L[k - 1]:
            raise ConfigInvalid("L grid must be strictly increasing", pointer=f"/L/{k}")
    if "branches" in raw["tasks"] and len(L) < 2:
        raise ConfigInvalid("branches needs at least two L values", pointer="/L")
    if "linear_exact" in raw["tasks"] and 0 not in raw["n"]:
        raise ConfigInvalid("linear_exact needs n = 0 in the n list", pointer="/n")
    if raw["g"] == 0 and {"secular_scan", "scaling_graph", "stokes_graph", "linear_exact"} & set(raw["tasks"]):
        raise ConfigInvalid("the requested tasks need g > 0", pointer="/g")
    for k, s in enumerate(raw.get("emapped", [])):
        try:
            if parse_complex(s) == 0:
                raise ValueError
        except ValueError:
            raise ConfigInvalid(f"not a nonzero complex number: {s!r}", pointer=f"/emapped/{k}") from None
    merged = {**DEFAULTS, **raw}
    return RunConfig(
        n=tuple(merged["n"]), g=float(merged["g"]), L=tuple(float(x) for x in merged["L"]),
        tasks=tuple(merged["tasks"]), hbar=float(merged["hbar"]), count=int(merged["count"]),
        emapped=tuple(merged.get("emapped", ())), tolerances=dict(merged["tolerances"]),
        output_dir=merged["output_dir"], seed_overrides=dict(merged["seed_overrides"]),
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"invalid JSON: {exc}", pointer="") from None
    return validate_config(raw)
