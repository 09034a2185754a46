"""Run configuration for the CLI: a single declarative JSON file.

Unknown keys are rejected with the offending field named; every
underdetermined input (action tables, twist matrices, anchor data) lives
here rather than in code constants.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field


class ConfigError(Exception):
    pass


_TOP_KEYS = {"preset", "seed", "samples", "scalar", "tolerance", "output",
             "suites", "negative_controls", "qplane", "shiftline", "matrix",
             "sphere"}
_QPLANE_KEYS = {"n", "m", "tables", "gamma", "anchor", "lie", "eval_s"}
_SHIFT_KEYS = {"hbar"}
_MATRIX_KEYS = {"dim", "twists", "v0", "e", "h0", "hhat0"}
_SPHERE_KEYS = {"solve", "degree_bound", "x_table"}
_PRESETS = ("qplane", "shiftline", "matrix", "sphere")


@dataclass
class RunConfig:
    preset: str
    seed: int = 42
    samples: int = 50
    scalar: str = "exact"
    tolerance: float = 1e-9
    output: str | None = None
    suites: list | None = None
    negative_controls: bool = False
    qplane: dict = field(default_factory=lambda: {"n": 1, "m": 1, "tables": 3})
    shiftline: dict = field(default_factory=lambda: {"hbar": "1/2"})
    matrix: dict = field(default_factory=lambda: {"dim": 2})
    sphere: dict = field(default_factory=lambda: {"solve": False, "degree_bound": 2})

    def echo(self) -> dict:
        out = {
            "preset": self.preset,
            "seed": self.seed,
            "samples": self.samples,
            "scalar": self.scalar,
            "tolerance": self.tolerance,
            "negative_controls": self.negative_controls,
        }
        out[self.preset] = getattr(self, self.preset)
        return out


def _check_keys(section: str, data: dict, allowed: set) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {section}: {sorted(unknown)}")


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    _check_keys("config", data, _TOP_KEYS)
    preset = data.get("preset")
    if preset not in _PRESETS:
        raise ConfigError(f"preset must be one of {_PRESETS}, got {preset!r}")
    cfg = RunConfig(preset=preset)
    if "seed" in data:
        cfg.seed = int(data["seed"])
        if cfg.seed <= 0:
            raise ConfigError("seed must be positive")
    if "samples" in data:
        cfg.samples = int(data["samples"])
        if cfg.samples <= 0:
            raise ConfigError("samples must be positive")
    if "scalar" in data:
        if data["scalar"] not in ("exact", "float"):
            raise ConfigError("scalar must be 'exact' or 'float'")
        cfg.scalar = data["scalar"]
    if "tolerance" in data:
        cfg.tolerance = float(data["tolerance"])
    if "output" in data:
        cfg.output = data["output"]
    if "suites" in data:
        cfg.suites = list(data["suites"])
    if "negative_controls" in data:
        cfg.negative_controls = bool(data["negative_controls"])
    for name, keys in (("qplane", _QPLANE_KEYS), ("shiftline", _SHIFT_KEYS),
                       ("matrix", _MATRIX_KEYS), ("sphere", _SPHERE_KEYS)):
        if name in data:
            section = data[name]
            if not isinstance(section, dict):
                raise ConfigError(f"section {name} must be an object")
            _check_keys(name, section, keys)
            merged = dict(getattr(cfg, name))
            merged.update(section)
            setattr(cfg, name, merged)
    return cfg


def load_config(path: str) -> RunConfig:
    base = os.environ.get("TAUGEO_CONFIG_DIR")
    if base and not os.path.isabs(path) and not os.path.exists(path):
        candidate = os.path.join(base, path)
        if os.path.exists(candidate):
            path = candidate
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse error in {path} at line {exc.lineno}, "
                          f"column {exc.colno}: {exc.msg}") from exc
    return config_from_dict(data)


def scalar_field_for(cfg: RunConfig):
    from .scalars import QQI, FloatField
    if cfg.scalar == "float":
        return FloatField(cfg.tolerance)
    return QQI


def parse_matrix(alg, rows):
    """Matrix literal: rows of canonical scalar strings (or numbers)."""
    from .scalars import parse_scalar
    parsed = []
    for row in rows:
        out = []
        for entry in row:
            if isinstance(entry, str):
                out.append(parse_scalar(entry, alg.field))
            elif isinstance(entry, (int, float, complex)):
                if hasattr(alg.field, "from_complex"):
                    out.append(alg.field.from_complex(entry))
                elif isinstance(entry, int):
                    out.append(alg.field.from_int(entry))
                else:
                    raise ConfigError("non-integer literal in an exact field")
            else:
                raise ConfigError(f"bad matrix entry {entry!r}")
        parsed.append(out)
    return alg.from_rows(parsed)


def parse_vector(alg, entries):
    from .matrices import Vector
    from .scalars import parse_scalar
    out = []
    for entry in entries:
        if isinstance(entry, str):
            out.append(parse_scalar(entry, alg.field))
        elif isinstance(entry, int):
            out.append(alg.field.from_int(entry))
        elif isinstance(entry, (float, complex)) and hasattr(alg.field, "from_complex"):
            out.append(alg.field.from_complex(entry))
        else:
            raise ConfigError(f"bad vector entry {entry!r}")
    return Vector(alg, out)


# ---------------------------------------------------------------------------
# Declarative algebra/derivation/structure loading
# ---------------------------------------------------------------------------

def field_by_name(name: str, tolerance: float = 1e-9):
    from .scalars import QQ, QQI, QS, FloatField
    table = {"rational": QQ, "gaussian": QQI, "qfunction": QS}
    if name in table:
        return table[name]
    if name == "float":
        return FloatField(tolerance)
    raise ConfigError(f"unknown scalar field {name!r}")


def presentation_from_config(data: dict):
    """Build a presented algebra from a declarative description.

    Keys: name, field, generators, commutative, weights, star (generator
    map), relations (list of {"lhs": word-string, "rhs": element-string}).
    Relation sides share the canonical element syntax; the left side must
    be a single monomial with coefficient 1.
    """
    from .algebra import AlgebraPresentation
    allowed = {"name", "field", "generators", "commutative", "weights",
               "star", "relations", "max_overlap"}
    _check_keys("presentation", data, allowed)
    gens = list(data["generators"])
    field = field_by_name(data.get("field", "qfunction"))
    free = AlgebraPresentation("staging", gens, field,
                               commutative=bool(data.get("commutative", False)))
    relations = []
    for rel in data.get("relations", ()):
        lhs_el = free.parse(rel["lhs"])
        if len(lhs_el.terms) != 1:
            raise ConfigError(f"relation lhs {rel['lhs']!r} is not a monomial")
        (word, coeff), = lhs_el.terms.items()
        if not coeff.is_one():
            raise ConfigError(f"relation lhs {rel['lhs']!r} must have coefficient 1")
        rhs_el = free.parse(rel["rhs"])
        relations.append((word, dict(rhs_el.terms)))
    return AlgebraPresentation(
        data.get("name", "algebra"), gens, field, relations,
        star_map=data.get("star"),
        commutative=bool(data.get("commutative", False)),
        weights=data.get("weights"),
        max_overlap=int(data.get("max_overlap", 4)))


def _image_table(alg, table: dict):
    return [alg.parse(table[name]) for name in alg.generators]


def endomorphism_from_config(alg, table, name="endo"):
    """Generator-image table (dict name -> element string); None is the identity."""
    from .algebra import AlgebraEndomorphism
    if table is None:
        return AlgebraEndomorphism.identity(alg)
    return AlgebraEndomorphism(alg, _image_table(alg, table), name=name)


def derivation_from_config(alg, data: dict):
    """{"sigma": table|None, "tau": table|None, "images": table, "name": str}."""
    from .algebra import derivation_extend
    _check_keys("derivation", data, {"sigma", "tau", "images", "name"})
    sigma = endomorphism_from_config(alg, data.get("sigma"), name="sigma")
    tau = endomorphism_from_config(alg, data.get("tau"), name="tau")
    return derivation_extend(sigma, tau, _image_table(alg, data["images"]),
                             name=data.get("name", "X"))


def sigma_tau_algebra_from_config(data: dict):
    """{"presentation": {...}, "derivations": [...], "iota": [...]|None}."""
    from .algebra import SigmaTauAlgebra
    _check_keys("sigma-tau algebra", data, {"presentation", "derivations", "iota", "name"})
    alg = presentation_from_config(data["presentation"])
    derivations = [derivation_from_config(alg, d) for d in data["derivations"]]
    return SigmaTauAlgebra(alg, derivations, iota=data.get("iota"),
                           name=data.get("name", alg.name))


def lie_structure_from_config(st, data):
    """Either the string "flip" or explicit scalar tables r[a][b][p][q], c[a][b][p]."""
    from .connections import LieStructure
    from .scalars import parse_scalar
    if data == "flip":
        return LieStructure.flip(st)
    _check_keys("lie structure", data, {"r", "c"})
    field = st.presentation.field

    def scal(x):
        return parse_scalar(x, field) if isinstance(x, str) else field.from_int(x)

    n = st.n_derivations
    R = [[[[scal(data["r"][a][b][p][q]) for q in range(n)] for p in range(n)]
          for b in range(n)] for a in range(n)]
    C = [[[scal(data["c"][a][b][p]) for p in range(n)] for b in range(n)]
         for a in range(n)]
    return LieStructure(st, R, C)


def anchor_from_config(module, entries):
    """List (per tangent index) of component lists in element syntax."""
    alg = module.algebra
    return [module.element([alg.parse(comp) for comp in row]) for row in entries]


def gamma_from_config(module, table):
    """Connection coefficients gamma[a][i][j] in element syntax."""
    alg = module.algebra
    return [[[alg.parse(entry) for entry in row] for row in block]
            for block in table]
