"""Scenario registry: lattice, generators, glue data and named chambers.

Scenario files are JSON with integer matrices stored row-major and
rationals written as "num/den" strings.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from ._linalg import as_matrix
from .birgroup import BirCriterionConfig
from .isometry import GeneratorTable, word_eval
from .lattice import GramLattice, IntersectionLattice, abel_jacobi

BUILTIN = ("c12", "syz", "nonsyz")


def parse_rational(s) -> Fraction:
    return Fraction(s) if not isinstance(s, str) else Fraction(s.strip())


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class Scenario:
    name: str
    lattice: GramLattice
    generators: GeneratorTable
    bir_config: BirCriterionConfig
    involution_words: dict
    fixed_vectors: dict
    named_paths: dict = field(default_factory=dict)
    orbit_reps: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    intersection: IntersectionLattice | None = None
    source: dict = field(default_factory=dict, repr=False)

    @property
    def involutions(self) -> GeneratorTable:
        """Table of the involutions, evaluated from their words."""
        return GeneratorTable(
            self.lattice,
            {name: word_eval(self.generators, w).matrix for name, w in self.involution_words.items()},
        )

    def full_table(self) -> GeneratorTable:
        return self.generators.extended(
            {name: word_eval(self.generators, w).matrix for name, w in self.involution_words.items()}
        )

    def content_hash(self) -> str:
        blob = json.dumps(self.source, sort_keys=True, ensure_ascii=True).encode()
        return hashlib.sha256(blob).hexdigest()


def scenario_from_dict(data: dict) -> Scenario:
    glue = [tuple(parse_rational(x) for x in w) for w in data["glue_gens"]]
    gram = as_matrix(data["gram"])
    inter = None
    if "intersection_form" in data:
        inter = IntersectionLattice(as_matrix(data["intersection_form"]), data.get("eta_index", 0))
        if abel_jacobi(inter).gram != gram:
            raise ValueError(f"scenario {data['name']}: gram does not match the intersection form")
    L = GramLattice(gram, tuple(data.get("basis_labels", ())), tuple(data.get("ample", ())),
                    tuple(glue), data["name"])
    table = GeneratorTable(L, data.get("generators", {}))
    mode = data.get("mov_mode", "RoundPos")
    witness = tuple(data["witness"]) if "witness" in data else None
    config = BirCriterionConfig(tuple(glue), mode, witness)
    config.validate(L)
    words, fixed = {}, {}
    for name, spec in data.get("involutions", {}).items():
        words[name] = tuple(spec["word"])
        fixed[name] = tuple(spec["fixed"])
    paths = {k: [tuple(w) for w in v] for k, v in data.get("named_paths", {}).items()}
    reps = {k: [tuple(v) for v in vs] for k, vs in data.get("orbit_reps", {}).items()}
    return Scenario(data["name"], L, table, config, words, fixed, paths, reps,
                    data.get("expected", {}), inter, data)


def load_scenario(name_or_path) -> Scenario:
    """A built-in scenario by name, or a scenario JSON file by path."""
    if str(name_or_path) in BUILTIN:
        text = resources.files("scrollfano").joinpath("data", f"{name_or_path}.json").read_text(encoding="utf-8")
    else:
        text = Path(name_or_path).read_text(encoding="utf-8")
    return scenario_from_dict(json.loads(text))


def load_example_data(name: str) -> dict:
    text = resources.files("scrollfano").joinpath("data", f"example_{name}.json").read_text(encoding="utf-8")
    return json.loads(text)
