"""Fuzzy set primitives.

Bounded universes of discourse, piecewise-linear membership functions,
labelled fuzzy sets, linguistic variables and the pointwise set algebra
(max / algebraic sum unions, min / product intersections, complement).

Everything here is immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping

import numpy as np

Conorm = Literal["max", "algebraic_sum"]
Norm = Literal["min", "product"]

CONORMS = ("max", "algebraic_sum")
NORMS = ("min", "product")


class UniverseMismatchError(ValueError):
    """A binary set operation was given sets over different universes."""


@dataclass(frozen=True)
class Universe:
    """Closed real interval [lo, hi] with a sampling resolution.

    ``grid_points`` controls the discretization used by set-level
    operations (union, intersection, implication, aggregation).
    """

    lo: float
    hi: float
    grid_points: int = 1001

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"universe needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.grid_points < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")

    def grid(self, points: int | None = None) -> np.ndarray:
        return np.linspace(self.lo, self.hi, points or self.grid_points)

    @property
    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2.0


class PiecewiseLinearMF:
    """Membership function defined by ordered (x, degree) breakpoints.

    Linear interpolation between breakpoints; flat extrapolation beyond
    the first and last one. Degrees always lie in [0, 1].
    """

    __slots__ = ("_xs", "_ds")

    def __init__(self, breakpoints: Iterable[tuple[float, float]]):
        pts = list(breakpoints)
        xs = np.asarray([float(x) for x, _ in pts], dtype=float)
        ds = np.asarray([float(d) for _, d in pts], dtype=float)
        self._init_arrays(xs, ds)

    @classmethod
    def from_arrays(cls, xs: np.ndarray, ds: np.ndarray) -> "PiecewiseLinearMF":
        mf = cls.__new__(cls)
        mf._init_arrays(np.asarray(xs, dtype=float), np.asarray(ds, dtype=float))
        return mf

    def _init_arrays(self, xs: np.ndarray, ds: np.ndarray) -> None:
        if xs.ndim != 1 or xs.shape != ds.shape:
            raise ValueError("breakpoints must be a flat sequence of (x, degree) pairs")
        if xs.size < 2:
            raise ValueError("membership function needs at least 2 breakpoints")
        if not np.all(np.isfinite(xs)) or not np.all(np.isfinite(ds)):
            raise ValueError("breakpoints must be finite")
        if not np.all(np.diff(xs) > 0):
            raise ValueError("breakpoint x values must be strictly increasing")
        if np.any(ds < 0.0) or np.any(ds > 1.0):
            raise ValueError("degrees must lie in [0, 1]")
        xs = xs.copy()
        ds = ds.copy()
        xs.setflags(write=False)
        ds.setflags(write=False)
        self._xs = xs
        self._ds = ds

    @property
    def xs(self) -> np.ndarray:
        return self._xs

    @property
    def ds(self) -> np.ndarray:
        return self._ds

    @property
    def breakpoints(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self._xs.tolist(), self._ds.tolist()))

    def degree(self, x: float) -> float:
        """Membership degree at ``x`` (flat beyond the breakpoint span)."""
        return float(np.interp(x, self._xs, self._ds))

    def degrees(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`degree`."""
        return np.interp(xs, self._xs, self._ds)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewiseLinearMF):
            return NotImplemented
        return np.array_equal(self._xs, other._xs) and np.array_equal(self._ds, other._ds)

    def __hash__(self) -> int:  # immutable, but hashing arrays is not worth it
        return hash((self._xs.shape[0], self._xs[0], self._xs[-1]))

    def __repr__(self) -> str:
        if self._xs.size <= 6:
            pts = ", ".join(f"({x:g},{d:g})" for x, d in self.breakpoints)
        else:
            pts = f"{self._xs.size} breakpoints on [{self._xs[0]:g}, {self._xs[-1]:g}]"
        return f"PiecewiseLinearMF({pts})"


@dataclass(frozen=True)
class FuzzySet:
    """A labelled membership function over a universe."""

    label: str
    universe: Universe
    mf: PiecewiseLinearMF

    def __post_init__(self) -> None:
        xs = self.mf.xs
        if xs[0] < self.universe.lo or xs[-1] > self.universe.hi:
            raise ValueError(
                f"set {self.label!r}: breakpoints [{xs[0]}, {xs[-1]}] fall outside "
                f"universe [{self.universe.lo}, {self.universe.hi}]"
            )

    def degree(self, x: float) -> float:
        return self.mf.degree(x)

    def sampled(self, points: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Membership sampled on the universe grid."""
        xs = self.universe.grid(points)
        return xs, self.mf.degrees(xs)


@dataclass(frozen=True)
class LinguisticVariable:
    """A named universe with a term set mapping labels to fuzzy sets."""

    name: str
    universe: Universe
    terms: Mapping[str, FuzzySet] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("variable name must be nonempty")
        if not self.terms:
            raise ValueError(f"variable {self.name!r} needs at least one term")
        clean = dict(self.terms)
        for label, fset in clean.items():
            if not label:
                raise ValueError(f"variable {self.name!r} has an empty term label")
            if fset.label != label:
                raise ValueError(
                    f"variable {self.name!r}: term key {label!r} does not match "
                    f"set label {fset.label!r}"
                )
            if fset.universe != self.universe:
                raise ValueError(
                    f"variable {self.name!r}: term {label!r} is defined over a "
                    "different universe"
                )
        object.__setattr__(self, "terms", clean)

    def term(self, label: str) -> FuzzySet:
        try:
            return self.terms[label]
        except KeyError:
            raise KeyError(f"variable {self.name!r} has no term {label!r}") from None


def _require_same_universe(a: FuzzySet, b: FuzzySet) -> None:
    if a.universe != b.universe:
        raise UniverseMismatchError(
            f"sets {a.label!r} and {b.label!r} live on different universes"
        )


def set_union(a: FuzzySet, b: FuzzySet, conorm: Conorm = "max") -> FuzzySet:
    """Pointwise union sampled on the shared universe grid."""
    _require_same_universe(a, b)
    xs = a.universe.grid()
    da = a.mf.degrees(xs)
    db = b.mf.degrees(xs)
    if conorm == "max":
        dc = np.maximum(da, db)
    elif conorm == "algebraic_sum":
        # rounding can push a + b - a*b a hair past 1
        dc = np.clip(da + db - da * db, 0.0, 1.0)
    else:
        raise ValueError(f"unknown conorm {conorm!r}, expected one of {CONORMS}")
    return FuzzySet(f"({a.label} or {b.label})", a.universe, PiecewiseLinearMF.from_arrays(xs, dc))


def set_intersection(a: FuzzySet, b: FuzzySet, norm: Norm = "min") -> FuzzySet:
    """Pointwise intersection sampled on the shared universe grid."""
    _require_same_universe(a, b)
    xs = a.universe.grid()
    da = a.mf.degrees(xs)
    db = b.mf.degrees(xs)
    if norm == "min":
        dc = np.minimum(da, db)
    elif norm == "product":
        dc = da * db
    else:
        raise ValueError(f"unknown norm {norm!r}, expected one of {NORMS}")
    return FuzzySet(f"({a.label} and {b.label})", a.universe, PiecewiseLinearMF.from_arrays(xs, dc))


def set_complement(a: FuzzySet) -> FuzzySet:
    """Pointwise complement 1 - degree.

    The complement of a piecewise-linear function is piecewise linear on
    the same breakpoints, so no resampling happens here.
    """
    return FuzzySet(
        f"not {a.label}",
        a.universe,
        PiecewiseLinearMF.from_arrays(a.mf.xs, 1.0 - a.mf.ds),
    )
