"""The six surfaces as labelled polynomial systems, with exact membership checks."""

from __future__ import annotations

import json
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping

from .exact_math import MultiPoly, fmt_rat, rational_root, to_rat, weighted_normalize

PROBLEMS = ("II20", "II31", "III17", "IV18", "IV32", "V29")


class RatPoint(Mapping[str, Fraction]):
    """Immutable mapping from variable label to rational coordinate."""

    __slots__ = ("_coords",)

    def __init__(self, coords: Mapping[str, object] | None = None, **kw):
        data = dict(coords or {})
        data.update(kw)
        self._coords = {k: to_rat(v) for k, v in data.items()}

    def __getitem__(self, key: str) -> Fraction:
        return self._coords[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._coords)

    def __len__(self) -> int:
        return len(self._coords)

    def __hash__(self):
        return hash(frozenset(self._coords.items()))

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict(self._coords) == {k: to_rat(v) for k, v in other.items()}
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"{k}={fmt_rat(v)}" for k, v in self._coords.items())
        return f"RatPoint({body})"

    def with_(self, **kw) -> "RatPoint":
        return RatPoint({**self._coords, **kw})

    def as_strings(self) -> dict[str, str]:
        return {k: fmt_rat(v) for k, v in self._coords.items()}

    def is_positive(self) -> bool:
        return all(v > 0 for v in self._coords.values())


@dataclass(frozen=True)
class Witness:
    """How to recover one auxiliary coordinate from the others.

    ``kind`` is ``"sqrt"`` or ``"cbrt"`` (the variable is the rational root of
    ``expr``) or ``"value"`` (the variable equals ``expr``).
    """

    var: str
    kind: str
    expr: MultiPoly


@dataclass(frozen=True)
class SurfaceModel:
    name: str
    variables: tuple[str, ...]
    equations: tuple[MultiPoly, ...]
    weights: tuple[int, ...]
    constants: Mapping[str, Fraction] = field(default_factory=dict)
    witnesses: tuple[Witness, ...] = ()

    def __post_init__(self):
        if len(self.weights) != len(self.variables):
            raise ValueError("one weight per variable")
        for eq in self.equations:
            if eq.variables != self.variables:
                raise ValueError(f"equation {eq} uses a different variable list")
            extra = eq.used_variables() - set(self.variables)
            if extra:
                raise ValueError(f"undeclared variables {extra}")

    @property
    def witness_vars(self) -> tuple[str, ...]:
        return tuple(w.var for w in self.witnesses)

    @property
    def base_vars(self) -> tuple[str, ...]:
        return tuple(v for v in self.variables if v not in self.witness_vars)

    def residuals(self, P: Mapping[str, object]) -> list[Fraction]:
        return [eq.evaluate(P) for eq in self.equations]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "variables": list(self.variables),
            "weights": list(self.weights),
            "constants": {k: fmt_rat(v) for k, v in self.constants.items()},
            "equations": [eq.to_json() for eq in self.equations],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: Mapping) -> "SurfaceModel":
        """Rebuild a model from :meth:`to_json` output.

        Witness recipes are not serialized; a catalogued name picks them up again.
        """
        variables = tuple(data["variables"])
        equations = tuple(MultiPoly.from_json(eq, variables) for eq in data["equations"])
        constants = {k: to_rat(v) for k, v in data.get("constants", {}).items()}
        witnesses: tuple[Witness, ...] = ()
        if data["name"] in PROBLEMS:
            ref = surface(data["name"], **constants)
            if ref.variables == variables:
                witnesses = ref.witnesses
        return cls(data["name"], variables, equations, tuple(data["weights"]), constants, witnesses)


def _ii20() -> SurfaceModel:
    vs = ("x", "y", "u", "v")
    x, y, u, v = MultiPoly.gens(vs)
    return SurfaceModel(
        "II20", vs,
        (x**2 + y - u**2, x + y**2 - v**2),
        (1, 1, 1, 1),
        witnesses=(Witness("u", "sqrt", x**2 + y), Witness("v", "sqrt", x + y**2)),
    )


def _ii31() -> SurfaceModel:
    vs = ("x", "y", "u", "v", "w")
    x, y, u, v, w = MultiPoly.gens(vs)
    return SurfaceModel(
        "II31", vs,
        (x + y - u**2, x * y + x + y - v**2, x * y - x - y - w**2),
        (1,) * 5,
        witnesses=(
            Witness("u", "sqrt", x + y),
            Witness("v", "sqrt", x * y + x + y),
            Witness("w", "sqrt", x * y - x - y),
        ),
    )


def _iii17() -> SurfaceModel:
    vs = ("x", "y", "u", "v", "w")
    x, y, u, v, w = MultiPoly.gens(vs)
    return SurfaceModel(
        "III17", vs,
        (x * y + x + y - u**2, x * y + x - v**2, x * y + y - w**2),
        (1,) * 5,
        witnesses=(
            Witness("u", "sqrt", x * y + x + y),
            Witness("v", "sqrt", x * y + x),
            Witness("w", "sqrt", x * y + y),
        ),
    )


def _iv18() -> SurfaceModel:
    vs = ("x", "y", "u", "v")
    x, y, u, v = MultiPoly.gens(vs)
    return SurfaceModel(
        "IV18", vs,
        (x**3 + y - u**3, x + y**2 - v**2),
        (1, 1, 1, 1),
        witnesses=(Witness("u", "cbrt", x**3 + y), Witness("v", "sqrt", x + y**2)),
    )


def _iv32(n=6) -> SurfaceModel:
    n = to_rat(n)
    vs = ("x", "y", "z", "u", "v")
    x, y, z, u, v = MultiPoly.gens(vs)
    return SurfaceModel(
        "IV32", vs,
        (x + y + z - n, x * y - z - u**2, x * y + z - v**2),
        (1,) * 5,
        constants={"n": n},
        witnesses=(
            Witness("z", "value", n - x - y),
            Witness("u", "sqrt", x * y + x + y - n),
            Witness("v", "sqrt", x * y - x - y + n),
        ),
    )


def _v29() -> SurfaceModel:
    vs = ("x", "y", "z", "w")
    x, y, z, w = MultiPoly.gens(vs)
    return SurfaceModel(
        "V29", vs,
        (x**4 + y**4 + z**4 - w**2,),
        (1, 1, 1, 2),
        witnesses=(Witness("w", "sqrt", x**4 + y**4 + z**4),),
    )


_BUILDERS: dict[str, Callable[..., SurfaceModel]] = {
    "II20": _ii20,
    "II31": _ii31,
    "III17": _iii17,
    "IV18": _iv18,
    "IV32": _iv32,
    "V29": _v29,
}


def surface(name: str, **constants) -> SurfaceModel:
    """Build the model for a problem name; IV32 takes the given number ``n`` (default 6)."""
    if name.upper() not in _BUILDERS:
        raise ValueError(f"unknown problem {name!r}; expected one of {', '.join(PROBLEMS)}")
    if constants and name.upper() != "IV32":
        raise ValueError(f"{name} takes no constants")
    return _cached(name.upper(), tuple(sorted((k, to_rat(v)) for k, v in constants.items())))


@lru_cache(maxsize=64)
def _cached(name: str, constants: tuple) -> SurfaceModel:
    # models are immutable, and rebuilding the polynomial systems dominates bulk checks
    return _BUILDERS[name](**dict(constants))


def witness_solve(S: SurfaceModel, partial: Mapping[str, object]) -> RatPoint | None:
    """Complete the auxiliary coordinates with nonnegative rational roots.

    Coordinates already present are kept.  Returns ``None`` when a needed
    root is irrational.
    """
    pt = {k: to_rat(v) for k, v in partial.items()}
    missing = [v for v in S.base_vars if v not in pt]
    if missing:
        raise KeyError(f"{S.name}: missing base coordinates {missing}")
    for w in S.witnesses:
        if w.var in pt:
            continue
        val = w.expr.evaluate(pt)
        if w.kind == "value":
            pt[w.var] = val
            continue
        root = rational_root(val, 2 if w.kind == "sqrt" else 3)
        if root is None:
            return None
        pt[w.var] = root
    return RatPoint({v: pt[v] for v in S.variables})


def membership(S: SurfaceModel, P: Mapping[str, object], solve_witnesses: bool = False) -> bool:
    """True iff every defining equation of S vanishes exactly at P."""
    missing = [v for v in S.variables if v not in P]
    if missing:
        if not solve_witnesses:
            raise KeyError(f"{S.name}: missing coordinates {missing}")
        done = witness_solve(S, P)
        if done is None:
            return False
        P = done
    return all(r == 0 for r in S.residuals(P))


def equation_checks(S: SurfaceModel, P: Mapping[str, object]) -> list[bool]:
    return [r == 0 for r in S.residuals(P)]


def fibration_value(S: SurfaceModel, P: Mapping[str, object]):
    """Base coordinate of the fibration each problem's solution runs along.

    II20: u - x.  II31: (v/u, w/u) on the conic m^2 - n^2 = 2.  III17: v/x.
    IV18: u.  IV32: y.  V29 has no catalogued fibration.
    """
    P = {k: to_rat(v) for k, v in P.items()}
    name = S.name
    if name == "II20":
        return P["u"] - P["x"]
    if name == "II31":
        if P["u"] == 0:
            raise ZeroDivisionError("II31 fibration is undefined where u = 0")
        return (P["v"] / P["u"], P["w"] / P["u"])
    if name == "III17":
        if P["x"] == 0:
            raise ZeroDivisionError("III17 fibration is undefined where x = 0")
        return P["v"] / P["x"]
    if name == "IV18":
        return P["u"]
    if name == "IV32":
        return P["y"]
    raise ValueError(f"no fibration is catalogued for {name}")


def projective_normal_form(S: SurfaceModel, P: Mapping[str, object]) -> tuple[int, ...]:
    """Primitive integer representative of P under the model's weighted scaling.

    Only meaningful for the homogeneous models; for V29 this is the
    P(1,1,1,2) normalization ``(x,y,z,w) -> (sx, sy, sz, s^2 w)``.
    """
    return weighted_normalize([P[v] for v in S.variables], S.weights)
