"""Moving families, point sequences, and campaign configuration parsing.

Coefficients of a moving form are ratios of integer-coefficient polynomials
in the integer index alpha (ascending-power lists), which makes every
polynomial relation among them vanish either identically or at finitely many
indices.  Validation reports field-path diagnostics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError
from .places import Place
from .projgeom import HomForm, MultiIndex, ProjectivePoint, normalize_point


def poly_eval(coeffs: tuple[int, ...], alpha: int) -> int:
    """Evaluate an ascending-power integer polynomial at an integer."""
    total = 0
    for c in reversed(coeffs):
        total = total * alpha + c
    return total


@dataclass(frozen=True)
class CoefficientEntry:
    exponents: MultiIndex
    num: tuple[int, ...]
    den: tuple[int, ...]

    def at(self, alpha: int) -> Fraction:
        return Fraction(poly_eval(self.num, alpha), poly_eval(self.den, alpha))


@dataclass(frozen=True)
class MovingForm:
    n: int
    degree: int
    entries: tuple[CoefficientEntry, ...]

    def at(self, alpha: int) -> HomForm:
        return HomForm.make(
            self.n, self.degree, {e.exponents: e.at(alpha) for e in self.entries}
        )


@dataclass(frozen=True)
class MovingFamily:
    n: int
    forms: tuple[MovingForm, ...]

    @property
    def q(self) -> int:
        return len(self.forms)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.forms)

    def at(self, alpha: int) -> list[HomForm]:
        return [f.at(alpha) for f in self.forms]


@dataclass(frozen=True)
class PointSequence:
    """Point generator: explicit list, exponential bases, or coordinate polynomials."""

    kind: str  # "explicit" | "exponential" | "polynomial"
    bases: tuple[int, ...] = ()
    points: tuple[tuple[int, ...], ...] = ()
    coords: tuple[tuple[int, ...], ...] = ()
    alpha0: int = 0  # index of the first explicit point

    def raw(self, alpha: int) -> tuple[int, ...]:
        if self.kind == "exponential":
            return tuple(b ** alpha for b in self.bases)
        if self.kind == "polynomial":
            return tuple(poly_eval(c, alpha) for c in self.coords)
        return self.points[alpha - self.alpha0]

    def at(self, alpha: int) -> ProjectivePoint:
        return normalize_point(self.raw(alpha))


@dataclass
class CampaignConfig:
    n: int
    N: int
    epsilon: Fraction
    epsilon_prime: Fraction
    places: list[Place]
    alpha_range: tuple[int, int]
    precision_bits: int
    family: MovingFamily
    points: PointSequence
    probe_degree: int

    @property
    def alphas(self) -> range:
        return range(self.alpha_range[0], self.alpha_range[1] + 1)


def _require(document: dict, key: str, path: str):
    if key not in document:
        raise ConfigError(f"{path}.{key}" if path else key, "missing required field")
    return document[key]


def _fraction(value, path: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(path, f"not a rational: {value!r}") from exc


def _int_list(value, path: str) -> tuple[int, ...]:
    if not isinstance(value, list) or not value or not all(isinstance(c, int) for c in value):
        raise ConfigError(path, "expected a nonempty list of integers")
    return tuple(value)


def parse_family_spec(document: dict) -> CampaignConfig:
    """Validate a JSON campaign document and build the configuration."""
    n = _require(document, "n", "")
    N = _require(document, "N", "")
    if not isinstance(n, int) or n < 1:
        raise ConfigError("n", "must be a positive integer")
    if not isinstance(N, int) or N < n:
        raise ConfigError("N", f"must be an integer >= n={n}")

    epsilon = _fraction(_require(document, "epsilon", ""), "epsilon")
    if epsilon <= 0:
        raise ConfigError("epsilon", "must be positive")
    epsilon_prime = _fraction(document.get("epsilon_prime", "1"), "epsilon_prime")
    if epsilon_prime <= 0:
        raise ConfigError("epsilon_prime", "must be positive")

    raw_places = _require(document, "places", "")
    if not isinstance(raw_places, list) or not raw_places:
        raise ConfigError("places", "expected a nonempty list")
    places: list[Place] = []
    for idx, entry in enumerate(raw_places):
        path = f"places[{idx}]"
        if entry == "inf":
            place = Place.archimedean()
        elif isinstance(entry, int):
            try:
                place = Place.finite(entry)
            except ValueError as exc:
                raise ConfigError(path, str(exc)) from exc
        else:
            raise ConfigError(path, f'expected "inf" or a prime, got {entry!r}')
        if place in places:
            raise ConfigError(path, "duplicate place")
        places.append(place)

    rng = _require(document, "alpha_range", "")
    if (not isinstance(rng, list) or len(rng) != 2
            or not all(isinstance(a, int) for a in rng) or rng[0] > rng[1]):
        raise ConfigError("alpha_range", "expected [alpha_min, alpha_max] with min <= max")
    alpha_range = (rng[0], rng[1])
    alphas = range(rng[0], rng[1] + 1)

    precision_bits = document.get("precision_bits", 128)
    if not isinstance(precision_bits, int) or precision_bits < 16:
        raise ConfigError("precision_bits", "expected an integer >= 16")

    raw_family = _require(document, "family", "")
    if not isinstance(raw_family, list) or not raw_family:
        raise ConfigError("family", "expected a nonempty list of forms")
    forms = []
    for fi, raw_form in enumerate(raw_family):
        fpath = f"family.forms[{fi}]"
        if not isinstance(raw_form, dict):
            raise ConfigError(fpath, "expected an object")
        if "degree" not in raw_form:
            raise ConfigError(f"{fpath}.degree", "missing required field")
        degree = raw_form["degree"]
        if not isinstance(degree, int) or degree < 1:
            raise ConfigError(f"{fpath}.degree", "must be a positive integer")
        raw_coeffs = raw_form.get("coefficients")
        if not isinstance(raw_coeffs, list) or not raw_coeffs:
            raise ConfigError(f"{fpath}.coefficients", "expected a nonempty list")
        entries = []
        for ci, raw_entry in enumerate(raw_coeffs):
            cpath = f"{fpath}.coefficients[{ci}]"
            exps = _int_list(_require(raw_entry, "exponents", cpath), f"{cpath}.exponents")
            if len(exps) != n + 1 or any(e < 0 for e in exps) or sum(exps) != degree:
                raise ConfigError(f"{cpath}.exponents",
                                  f"expected {n + 1} nonnegative exponents of total degree {degree}")
            num = _int_list(_require(raw_entry, "num", cpath), f"{cpath}.num")
            den = _int_list(_require(raw_entry, "den", cpath), f"{cpath}.den")
            if all(c == 0 for c in den):
                raise ConfigError(f"{cpath}.den", "denominator is identically zero")
            for alpha in alphas:
                if poly_eval(den, alpha) == 0:
                    raise ConfigError(f"{cpath}.den", f"denominator root at alpha={alpha}")
            entries.append(CoefficientEntry(exps, num, den))
        # at least one coefficient not identically zero on the range
        if all(all(e.at(alpha) == 0 for e in entries) for alpha in alphas):
            raise ConfigError(f"{fpath}.coefficients", "form vanishes identically on the range")
        for alpha in alphas:
            if all(e.at(alpha) == 0 for e in entries):
                raise ConfigError(f"{fpath}.coefficients", f"form vanishes at alpha={alpha}")
        forms.append(MovingForm(n, degree, tuple(entries)))
    family = MovingFamily(n, tuple(forms))
    if family.q < N + 1:
        raise ConfigError("family", f"q={family.q} < N+1={N + 1}")

    raw_points = _require(document, "points", "")
    if not isinstance(raw_points, dict):
        raise ConfigError("points", "expected an object")
    kind = _require(raw_points, "kind", "points")
    if kind == "exponential":
        bases = _int_list(_require(raw_points, "bases", "points"), "points.bases")
        if len(bases) != n + 1:
            raise ConfigError("points.bases", f"expected {n + 1} bases")
        if any(b < 1 for b in bases):
            raise ConfigError("points.bases", "bases must be positive integers")
        points = PointSequence(kind="exponential", bases=bases)
    elif kind == "polynomial":
        raw_coords = _require(raw_points, "coords", "points")
        if not isinstance(raw_coords, list) or len(raw_coords) != n + 1:
            raise ConfigError("points.coords", f"expected {n + 1} coordinate polynomials")
        coords = tuple(_int_list(c, f"points.coords[{i}]") for i, c in enumerate(raw_coords))
        points = PointSequence(kind="polynomial", coords=coords)
    elif kind == "explicit":
        raw_list = _require(raw_points, "points", "points")
        if not isinstance(raw_list, list) or len(raw_list) != len(alphas):
            raise ConfigError("points.points",
                              f"expected one point per alpha ({len(alphas)} entries)")
        pts = tuple(_int_list(p, f"points.points[{i}]") for i, p in enumerate(raw_list))
        if any(len(p) != n + 1 for p in pts):
            raise ConfigError("points.points", f"each point needs {n + 1} coordinates")
        points = PointSequence(kind="explicit", points=pts, alpha0=alpha_range[0])
    else:
        raise ConfigError("points.kind", f"unknown kind {kind!r}")
    for alpha in alphas:
        if all(c == 0 for c in points.raw(alpha)):
            raise ConfigError("points", f"all coordinates vanish at alpha={alpha}")

    probe_degree = document.get("probe_degree", 1)
    if not isinstance(probe_degree, int) or probe_degree < 1:
        raise ConfigError("probe_degree", "expected a positive integer")

    return CampaignConfig(
        n=n,
        N=N,
        epsilon=epsilon,
        epsilon_prime=epsilon_prime,
        places=places,
        alpha_range=alpha_range,
        precision_bits=precision_bits,
        family=family,
        points=points,
        probe_degree=probe_degree,
    )


def load_config(path: str | Path) -> CampaignConfig:
    with open(path, encoding="utf-8") as fh:
        document = json.load(fh)
    if not isinstance(document, dict):
        raise ConfigError("", "top-level document must be an object")
    return parse_family_spec(document)
