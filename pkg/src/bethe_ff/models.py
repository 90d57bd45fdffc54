"""Model specification, rapidity sets and result records."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

KINDS = ("qnls", "xxx", "xxz")
REPRESENTATIONS = ("slavnov-det", "sigma-omega", "sigma-reduced", "spin-det-ratio", "oracle")


def coincidence_tol(*zs) -> float:
    """Tolerance below which two rapidities count as equal."""
    return 1e-10 * max([1.0] + [abs(z) for z in zs])


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValueError(f"complex number must be [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


@dataclass(frozen=True)
class ModelSpec:
    """An integrable model together with its physical parameters.

    ``qnls`` uses the rational kernel with coupling ``c`` in a box of length
    ``L``. ``xxx`` is the rational chain with ``c = 1``. ``xxz`` is the
    trigonometric chain with anisotropy ``gamma`` (``cos gamma = Delta``).
    """

    kind: str
    L: float = 1.0
    c: float = 1.0
    gamma: float = 0.0
    xi: tuple = ()

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "xi", tuple(complex(x) for x in self.xi))
        if kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError("coupling c must be a finite positive number")
        if kind == "qnls":
            if not (self.L > 0 and math.isfinite(self.L)):
                raise ValueError("QNLS box length L must be positive")
            return
        if kind == "xxx" and self.c != 1.0:
            raise ValueError("the XXX chain uses c = 1")
        if kind == "xxz" and not (0.0 < self.gamma < math.pi):
            raise ValueError("XXZ anisotropy gamma must lie in (0, pi)")
        if len(self.xi) == 0:
            raise ValueError("spin chains need at least one site (xi)")
        for a in range(len(self.xi)):
            for b in range(a):
                if abs(self.xi[a] - self.xi[b]) <= coincidence_tol(self.xi[a], self.xi[b]):
                    raise ValueError("inhomogeneities xi must be pairwise distinct")

    @property
    def M(self) -> int:
        return len(self.xi)

    @property
    def rational(self) -> bool:
        return self.kind != "xxz"

    @property
    def is_chain(self) -> bool:
        return self.kind != "qnls"

    @property
    def eta(self) -> complex:
        """Residue scale of g: ``ic`` (rational) or ``i sin gamma``."""
        return 1j * self.c if self.rational else 1j * math.sin(self.gamma)

    @classmethod
    def qnls(cls, L: float, c: float = 1.0) -> "ModelSpec":
        return cls("qnls", L=L, c=c)

    @classmethod
    def xxx(cls, xi: Iterable[complex]) -> "ModelSpec":
        return cls("xxx", xi=tuple(xi))

    @classmethod
    def xxz(cls, gamma: float, xi: Iterable[complex]) -> "ModelSpec":
        return cls("xxz", gamma=gamma, xi=tuple(xi))

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "qnls":
            d.update(L=self.L, c=self.c)
        else:
            d.update(c=self.c, M=self.M, xi=[complex_to_json(x) for x in self.xi])
            if self.kind == "xxz":
                d["gamma"] = self.gamma
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        if not isinstance(d, dict) or "kind" not in d:
            raise ValueError("model JSON must be an object with a 'kind' field")
        kind = str(d["kind"]).lower()
        if kind not in KINDS:
            raise ValueError(f"unknown model kind {d['kind']!r}; expected one of {KINDS}")
        if kind == "qnls":
            if "L" not in d:
                raise ValueError("QNLS model needs L")
            return cls("qnls", L=float(d["L"]), c=float(d.get("c", 1.0)))
        if "xi" in d:
            xi = tuple(complex_from_json(x) for x in d["xi"])
        elif "M" in d:
            raise ValueError("spin-chain model needs explicit distinct xi")
        else:
            raise ValueError("spin-chain model needs xi")
        if "M" in d and int(d["M"]) != len(xi):
            raise ValueError("M does not match the length of xi")
        if kind == "xxz":
            if "gamma" not in d:
                raise ValueError("XXZ model needs gamma")
            return cls("xxz", gamma=float(d["gamma"]), xi=xi)
        return cls(kind, c=float(d.get("c", 1.0)), xi=xi)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class RapiditySet:
    """Ordered complex rapidities, pairwise distinct."""

    values: tuple
    label: str = ""

    def __post_init__(self):
        vals = tuple(complex(v) for v in np.atleast_1d(np.asarray(self.values, dtype=complex)))
        object.__setattr__(self, "values", vals)
        for a in range(len(vals)):
            for b in range(a):
                if abs(vals[a] - vals[b]) <= coincidence_tol(vals[a], vals[b]):
                    from .errors import CoincidenceError

                    raise CoincidenceError(f"rapidities {b} and {a} coincide in set {self.label!r}")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)


def as_array(x) -> np.ndarray:
    """Rapidities from a RapiditySet, BetheState or sequence."""
    if hasattr(x, "roots"):
        x = x.roots
    if isinstance(x, RapiditySet):
        return x.array
    return np.atleast_1d(np.asarray(x, dtype=complex)).ravel()


@dataclass
class FormFactorResult:
    value: complex
    representation: str
    condition: float = 1.0
    notes: str = ""
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.representation not in REPRESENTATIONS:
            raise ValueError(f"unknown representation {self.representation!r}")
        self.value = complex(self.value)
        self.condition = max(1.0, float(self.condition))

    def to_dict(self) -> dict:
        out = {
            "value": complex_to_json(self.value),
            "representation": self.representation,
            "condition": self.condition,
            "notes": self.notes,
        }
        if self.diagnostics:
            out["diagnostics"] = {
                k: complex_to_json(v) if isinstance(v, complex) else v for k, v in self.diagnostics.items()
            }
        return out
