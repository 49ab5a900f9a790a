"""Workbench configuration: finite store domain, cost weights, model sizes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CostModel:
    """Per-operation step weights for the running-time semantics.

    Identity and twist are neutral. The weight of a join is configurable;
    it defaults to 0, which is the weighting under which the standard
    factorial budget derivation comes out exact.
    """

    assign: int = 1
    cond: int = 1
    join: int = 0
    twist: int = 0
    ident: int = 0
    pointer: int = 1
    stream: int = 0

    def weight(self, tag: str) -> int:
        return {
            "assign": self.assign,
            "cond": self.cond,
            "join": self.join,
            "twist": self.twist,
            "id": self.ident,
            "lookup": self.pointer,
            "mutate": self.pointer,
            "new": self.pointer,
            "dispose": self.pointer,
        }.get(tag, self.stream)


@dataclass(frozen=True)
class Config:
    variables: tuple = ("x", "y")
    lo: int = 0
    hi: int = 7
    arith: str = "mod"  # "mod" | "sat"
    cost: CostModel = field(default_factory=CostModel)
    addresses: int = 3
    truncation: int = 32

    def __post_init__(self):
        if self.hi < self.lo:
            raise ConfigError(f"empty domain {self.lo}..{self.hi}")
        if self.arith not in ("mod", "sat"):
            raise ConfigError(f"arith must be 'mod' or 'sat', not {self.arith!r}")
        if self.addresses < 0:
            raise ConfigError("addresses must be non-negative")
        if self.truncation < 1:
            raise ConfigError("truncation degree must be positive")
        if len(set(self.variables)) != len(self.variables):
            raise ConfigError("duplicate variable names")

    @property
    def domain(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def domain_size(self) -> int:
        return self.hi - self.lo + 1

    def normalize(self, v: int) -> int:
        if self.arith == "mod":
            return self.lo + (v - self.lo) % self.domain_size
        return min(max(v, self.lo), self.hi)

    # Stores are plain tuples of ints aligned with `variables`.

    def stores(self) -> tuple:
        return _stores(self.variables, self.lo, self.hi)

    def store_index(self, store: tuple) -> int:
        return _store_index(self.variables, self.lo, self.hi)[store]

    def env(self, store: tuple) -> dict:
        return dict(zip(self.variables, store))

    def make_store(self, **values) -> tuple:
        unknown = set(values) - set(self.variables)
        if unknown:
            raise ConfigError(f"unknown variables: {sorted(unknown)}")
        out = []
        for v in self.variables:
            val = values.get(v, self.lo)
            if not (self.lo <= val <= self.hi):
                raise ConfigError(f"{v}={val} outside domain {self.lo}..{self.hi}")
            out.append(val)
        return tuple(out)

    def parse_store(self, text: str) -> tuple:
        """Parse "x=0,y=3"; unmentioned variables default to the domain minimum."""
        values = {}
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ConfigError(f"bad binding {part!r}, expected var=value")
            name, _, val = part.partition("=")
            values[name.strip()] = int(val.strip())
        return self.make_store(**values)

    def format_store(self, store: tuple) -> str:
        return " ".join(f"{v}={x}" for v, x in zip(self.variables, store))

    def with_(self, **kw) -> "Config":
        return replace(self, **kw)


@lru_cache(maxsize=None)
def _stores(variables: tuple, lo: int, hi: int) -> tuple:
    return tuple(itertools.product(range(lo, hi + 1), repeat=len(variables)))


@lru_cache(maxsize=None)
def _store_index(variables: tuple, lo: int, hi: int) -> dict:
    return {s: i for i, s in enumerate(_stores(variables, lo, hi))}


_KEYS = {
    "vars", "domain", "arith",
    "cost.assign", "cost.cond", "cost.join", "cost.twist", "cost.id",
    "addrs", "truncation",
}


def parse_config(text: str) -> Config:
    """Parse key=value lines: vars=x,y; domain=0..7; arith=mod; cost.assign=1; ..."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = val

    kw: dict = {}
    cost_kw: dict = {}
    if "vars" in values:
        kw["variables"] = tuple(v.strip() for v in values["vars"].split(",") if v.strip())
    if "domain" in values:
        lo, sep, hi = values["domain"].partition("..")
        if not sep:
            raise ConfigError(f"domain must look like 0..7, got {values['domain']!r}")
        kw["lo"], kw["hi"] = int(lo), int(hi)
    if "arith" in values:
        kw["arith"] = values["arith"]
    if "addrs" in values:
        kw["addresses"] = int(values["addrs"])
    if "truncation" in values:
        kw["truncation"] = int(values["truncation"])
    for key, attr in (("cost.assign", "assign"), ("cost.cond", "cond"),
                      ("cost.join", "join"), ("cost.twist", "twist"),
                      ("cost.id", "ident")):
        if key in values:
            cost_kw[attr] = int(values[key])
    if cost_kw:
        kw["cost"] = CostModel(**cost_kw)
    return Config(**kw)


def load_config(path: str) -> Config:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
