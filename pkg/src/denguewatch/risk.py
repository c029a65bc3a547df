"""Risk composition: mobility risk, regional potential risk, local variation,
and the two-objective closeness space.

For a target region the model maps each admissible month t to

    R(t) = product of lagged membership degrees raised to their exponents
    L(t) = (S(t-1)/N(t-1)) * (I(t-1)/I_peak)
    d1   = clamp(1 - R/r_ideal), d2 = clamp(1 - L/l_ideal)

so that months closest to the ideal point (0, 0) are outbreak candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import MissingDataError, ParameterError, PipelineError
from .fuzzy import PiecewiseLinearMF
from .panel import MobilityMatrix, MonthIndex, MonthlySeries, Panel, Variable


@dataclass(frozen=True)
class Lags:
    rain: int = 2
    temp: int = 3
    humid: int = 2
    mobility: int = 1

    def __post_init__(self):
        for name in ("rain", "temp", "humid", "mobility"):
            v = getattr(self, name)
            if not (isinstance(v, int) and v >= 0):
                raise ParameterError(f"lag {name} must be an integer >= 0, got {v!r}")


@dataclass(frozen=True)
class RiskParams:
    """Everything needed to turn a panel into objective space."""

    mobility_c: float
    lags: Lags = field(default_factory=Lags)
    exponents: tuple = (1.0, 1.0, 1.0, 1.0)  # rain, temp, humid, mobility
    r_ideal: float = 1.0
    l_ideal: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(float(c) for c in self.exponents))
        if len(self.exponents) != 4 or any(
            not (math.isfinite(c) and c > 0) for c in self.exponents
        ):
            raise ParameterError(f"exponents must be 4 positive reals, got {self.exponents}")
        for name in ("r_ideal", "l_ideal"):
            v = getattr(self, name)
            if not (0 < v <= 1):
                raise ParameterError(f"{name} must lie in (0, 1], got {v}")
        if not (math.isfinite(self.mobility_c) and self.mobility_c > 0):
            raise ParameterError(f"mobility_c must be > 0, got {self.mobility_c}")


@dataclass(frozen=True)
class MembershipFunctions:
    rain: PiecewiseLinearMF
    temp: PiecewiseLinearMF
    humid: PiecewiseLinearMF
    mobility: PiecewiseLinearMF


@dataclass(frozen=True)
class RiskMonth:
    t: MonthIndex
    R: float
    L: float
    d1: float
    d2: float


@dataclass(frozen=True)
class RiskSeries:
    region: str
    months: tuple  # of RiskMonth, chronological
    skipped: tuple = ()  # months excluded for missing lagged inputs


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def infected_density(panel: Panel, region: str, t: MonthIndex):
    """I(region, t) / N(region, t); None when either input is missing."""
    inc = panel.get(region, Variable.INCIDENCE)
    pop = panel.get(region, Variable.POPULATION)
    if inc is None or pop is None:
        return None
    i, n = inc.value_at(t), pop.value_at(t)
    if i is None or n is None or n == 0:
        return None
    return i / n


def mobility_risk(
    mobility: MobilityMatrix, densities, region: str, t: MonthIndex
) -> float:
    """Mobility-weighted sum of neighbor infected densities.

    ``densities`` maps region id -> callable(t) -> density or None. Zero
    weights contribute nothing; a missing density behind a positive weight
    raises naming (region, month).
    """
    total = 0.0
    for j in mobility.regions:
        w = mobility.weight(region, j)
        if w == 0.0:
            continue
        lookup = densities.get(j)
        d = lookup(t) if lookup is not None else None
        if d is None:
            raise MissingDataError(
                f"infected density missing for ({j}, {t}) with positive mobility weight"
            )
        total += w * d
    return total


def _panel_densities(panel: Panel):
    return {
        r: (lambda t, _r=r: infected_density(panel, _r, t)) for r in panel.regions
    }


def _memberships(panel, mfs, params, region, t):
    """Four lagged membership degrees at month t, or None if any input is missing."""
    lags = params.lags
    raw = (
        (Variable.RAINFALL, lags.rain, mfs.rain),
        (Variable.TEMPERATURE, lags.temp, mfs.temp),
        (Variable.HUMIDITY, lags.humid, mfs.humid),
    )
    degrees = []
    for variable, lag, mf in raw:
        s = panel.get(region, variable)
        v = s.value_at(t - lag) if s is not None else None
        if v is None:
            return None
        degrees.append(mf.evaluate(v))
    if panel.mobility is None:
        return None
    try:
        rmob = mobility_risk(panel.mobility, _panel_densities(panel), region, t - lags.mobility)
    except MissingDataError:
        return None
    degrees.append(mfs.mobility.evaluate(rmob))
    return tuple(degrees)


def regional_risk(panel, mfs, params: RiskParams, region: str, t: MonthIndex):
    """R(region, t): exponent-weighted product of lagged memberships.

    Returns None (month excluded, not fatal) when a lagged input is missing.
    """
    degrees = _memberships(panel, mfs, params, region, t)
    if degrees is None:
        return None
    r = 1.0
    for m, c in zip(degrees, params.exponents):
        r *= m**c
    return _clamp01(r)


def incidence_peak(panel: Panel, region: str) -> float:
    """Maximum infected count over the (calibration) span of the panel."""
    inc = panel.get(region, Variable.INCIDENCE)
    if inc is None:
        raise MissingDataError(f"no incidence series for region {region}")
    present = [v for v in inc.values if v is not None]
    if not present:
        raise MissingDataError(f"incidence series for region {region} is all-missing")
    peak = max(present)
    if peak == 0:
        raise ParameterError(f"region {region} never records an infected host")
    return peak


def local_variation(
    panel, params: RiskParams, region: str, t: MonthIndex, i_peak: float | None = None
):
    """L(region, t) from last month's susceptible and infected densities.

    Susceptibles normalize by population, infected by the in-span peak count.
    Returns None when last month's inputs are missing.
    """
    sus = panel.get(region, Variable.SUSCEPTIBLE)
    inc = panel.get(region, Variable.INCIDENCE)
    pop = panel.get(region, Variable.POPULATION)
    if sus is None or inc is None or pop is None:
        return None
    s, i, n = sus.value_at(t - 1), inc.value_at(t - 1), pop.value_at(t - 1)
    if s is None or i is None or n is None:
        return None
    if n == 0:
        raise ParameterError(f"region {region} has zero population at {t - 1}")
    if i_peak is None:
        i_peak = incidence_peak(panel, region)
    y_s = _clamp01(s / n)
    y_i = _clamp01(i / i_peak)
    return y_s * y_i


def objective_space(
    panel: Panel, mfs: MembershipFunctions, params: RiskParams, region: str
) -> RiskSeries:
    """Map every admissible month of the aligned span into (d1, d2).

    Months whose lagged inputs are missing are omitted and listed in
    ``skipped``. Raises :class:`PipelineError` if nothing is admissible.
    """
    if panel.span is None:
        raise ParameterError("panel must be aligned before building objective space")
    start, end = panel.span
    i_peak = incidence_peak(panel, region)
    months = []
    skipped = []
    for k in range(end - start + 1):
        t = start + k
        r = regional_risk(panel, mfs, params, region, t)
        l = local_variation(panel, params, region, t, i_peak=i_peak)
        if r is None or l is None:
            skipped.append(t)
            continue
        d1 = _clamp01(1.0 - r / params.r_ideal)
        d2 = _clamp01(1.0 - l / params.l_ideal)
        months.append(RiskMonth(t, r, l, d1, d2))
    if not months:
        raise PipelineError(
            f"no admissible months for region {region} in span {start}..{end}"
        )
    return RiskSeries(region=region, months=tuple(months), skipped=tuple(skipped))


def default_mobility_c(panel: Panel, region: str) -> float:
    """Largest mobility risk observed over the aligned span (the normalizer C)."""
    if panel.span is None or panel.mobility is None:
        raise ParameterError("aligned panel with mobility matrix required")
    start, end = panel.span
    densities = _panel_densities(panel)
    best = 0.0
    for k in range(end - start + 1):
        try:
            best = max(best, mobility_risk(panel.mobility, densities, region, start + k))
        except MissingDataError:
            continue
    if best <= 0:
        raise ParameterError(
            f"mobility risk never positive for region {region}; set mobility_c explicitly"
        )
    return best
