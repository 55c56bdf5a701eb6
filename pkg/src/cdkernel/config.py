"""Experiment configuration files.

A config is INI-style ``key = value`` text with three sections::

    [measure]
    generator = chebyshev        # circle | chebyshev | uniform | file
    m = 256
    radius = 1.0                 # circle only
    path = nodes.csv             # file only, relative to the config file
    atoms = 1.5:0.1; -0.5+1j:0.1 # optional extra atoms, node:weight

    [weight]
    phi = zero                   # zero | gaussian(c) | samples

    [experiment]
    k = 8, 16, 32, 64
    delta = 0.5
    ...

Unknown keys are rejected so typos fail loudly.
"""

import configparser
import hashlib
import json
import os
import re
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Tuple

from .errors import ConfigError
from .measure import (
    add_atoms,
    gaussian_weight,
    gen_circle,
    gen_interval,
    load_measure,
    make_measure,
    zero_weight,
)
from .toeplitz import const, identity_symbol, rational, re_z

__all__ = ["ExperimentConfig", "load_config", "parse_config", "parse_complex", "parse_symbol"]


@dataclass(frozen=True)
class ExperimentConfig:
    generator: str = "chebyshev"
    m: int = 256
    radius: float = 1.0
    path: Optional[str] = None
    atoms: Tuple[Tuple[complex, float], ...] = ()
    phi: str = "zero"
    k: Tuple[int, ...] = (8, 16, 32, 64)
    delta: float = 0.5
    eps: float = 0.25
    y0: complex = 0j
    probe_radius: float = 0.2
    probe_count: int = 128
    probe_rings: int = 8
    f: Optional[str] = None
    g: Optional[str] = None
    p: Tuple[float, ...] = (1.0,)
    moments: int = 6
    trials: int = 100
    anchors: Tuple[complex, ...] = (0j,)
    nevai_radius: float = 0.2
    k0: Optional[int] = None
    seed: int = 0
    out: Optional[str] = field(default=None, compare=False)

    def with_seed(self, seed):
        return replace(self, seed=int(seed))

    def digest(self):
        """SHA-256 of every setting except the output directory."""
        data = asdict(self)
        data.pop("out")
        blob = json.dumps(data, sort_keys=True, default=repr)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def build_measure(self):
        """Return ``(mu, phi)`` described by the config."""
        phi = None
        if self.generator == "circle":
            mu = gen_circle(self.m, self.radius)
        elif self.generator in ("chebyshev", "uniform"):
            mu = gen_interval(self.m, self.generator)
        elif self.generator == "file":
            mu, phi = load_measure(self.path)
        else:
            raise ConfigError(f"unknown measure generator {self.generator!r}")
        if self.atoms:
            nodes = [z for z, _ in self.atoms]
            weights = [w for _, w in self.atoms]
            mu = add_atoms(mu, make_measure(nodes, weights))
        return mu, self.build_weight(phi)

    def build_weight(self, samples=None):
        text = self.phi.strip()
        if text == "zero":
            return zero_weight()
        if text == "samples":
            if samples is None:
                raise ConfigError("phi = samples needs generator = file")
            return samples
        m = re.fullmatch(r"gaussian\((.+)\)", text)
        if m:
            return gaussian_weight(_float(m.group(1), "phi"))
        raise ConfigError(f"unknown weight {text!r}")


_KEYS = {
    "measure": {
        "generator": ("generator", str),
        "m": ("m", int),
        "radius": ("radius", float),
        "path": ("path", str),
        "atoms": ("atoms", "atoms"),
    },
    "weight": {"phi": ("phi", str)},
    "experiment": {
        "k": ("k", "intlist"),
        "delta": ("delta", float),
        "eps": ("eps", float),
        "y0": ("y0", complex),
        "probe_radius": ("probe_radius", float),
        "probe_count": ("probe_count", int),
        "probe_rings": ("probe_rings", int),
        "f": ("f", str),
        "g": ("g", str),
        "p": ("p", "floatlist"),
        "moments": ("moments", int),
        "trials": ("trials", int),
        "anchor": ("anchors", "complexlist"),
        "nevai_radius": ("nevai_radius", float),
        "k0": ("k0", int),
        "seed": ("seed", int),
        "out": ("out", str),
    },
}


def _float(text, key):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as a number") from None


def parse_complex(text):
    """Parse ``1.5``, ``-0.5+1j`` or ``2i`` into a complex number."""
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise ConfigError(f"cannot parse {text!r} as a complex number") from None


def _convert(key, kind, text):
    text = text.strip()
    if kind is str:
        return text
    if kind is int:
        try:
            v = int(text)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {text!r}") from None
        return v
    if kind is float:
        return _float(text, key)
    if kind is complex:
        return parse_complex(text)
    items = [s for s in (p.strip() for p in text.split(",")) if s]
    if kind == "intlist":
        return tuple(_convert(key, int, s) for s in items)
    if kind == "floatlist":
        return tuple(_float(s, key) for s in items)
    if kind == "complexlist":
        return tuple(parse_complex(s) for s in items)
    if kind == "atoms":
        atoms = []
        for item in (s.strip() for s in text.split(";")):
            if not item:
                continue
            if ":" not in item:
                raise ConfigError(f"atoms: expected node:weight, got {item!r}")
            z, w = item.split(":", 1)
            atoms.append((parse_complex(z), _float(w, key)))
        return tuple(atoms)
    raise AssertionError(kind)


def parse_config(text, base_dir="."):
    """Parse config text; relative measure paths resolve against `base_dir`."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    values = {}
    for section in cp.sections():
        if section not in _KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in cp.items(section):
            if key not in _KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            name, kind = _KEYS[section][key]
            values[name] = _convert(key, kind, raw)
    if values.get("path") is not None and not os.path.isabs(values["path"]):
        values["path"] = os.path.normpath(os.path.join(base_dir, values["path"]))
    cfg = ExperimentConfig(**values)
    validate(cfg)
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, os.path.dirname(os.path.abspath(path)))


def validate(cfg):
    if not cfg.k:
        raise ConfigError("k list is empty")
    if any(k < 1 for k in cfg.k) or any(a >= b for a, b in zip(cfg.k, cfg.k[1:])):
        raise ConfigError(f"k list must be positive and strictly ascending, got {list(cfg.k)}")
    if cfg.generator == "file":
        if not cfg.path:
            raise ConfigError("generator = file needs a path")
        if not os.path.isfile(cfg.path):
            raise ConfigError(f"measure file not found: {cfg.path}")
    if cfg.m < 1:
        raise ConfigError("m must be at least 1")
    if cfg.seed < 0:
        raise ConfigError("seed must be an unsigned integer")
    if cfg.delta <= 0 or cfg.probe_radius <= 0 or cfg.nevai_radius <= 0:
        raise ConfigError("delta, probe_radius and nevai_radius must be positive")
    if any(p < 1 for p in cfg.p):
        raise ConfigError("Schatten exponents must be >= 1")
    for text in (cfg.f, cfg.g):
        if text is not None:
            parse_symbol(text)


def parse_symbol(text):
    """``const(c)``, ``re_z``, ``z`` or ``rational(a0, a1, ... / b0, b1, ...)``."""
    s = text.strip()
    if s == "re_z":
        return re_z()
    if s == "z":
        return identity_symbol()
    m = re.fullmatch(r"const\((.+)\)", s)
    if m:
        return const(parse_complex(m.group(1)))
    m = re.fullmatch(r"rational\((.+)\)", s)
    if m:
        num, _, den = m.group(1).partition("/")
        num_c = [parse_complex(c) for c in num.split(",") if c.strip()]
        den_c = [parse_complex(c) for c in den.split(",") if c.strip()] or [1.0]
        if not num_c:
            raise ConfigError(f"rational symbol without numerator: {text!r}")
        return rational(num_c, den_c)
    raise ConfigError(f"unknown symbol {text!r}")
