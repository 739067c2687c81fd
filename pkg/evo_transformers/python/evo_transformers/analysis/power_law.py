# Copyright (C) 2026 The evo_transformers Authors.
# All rights reserved.
# Licensed under the BSD 3-Clause License (the "License"); you may
# not use this file except in compliance with the License. You may
# obtain a copy of the License at
# https://opensource.org/licenses/BSD-3-Clause
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" basis,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied. See the License for the specific language governing
# permissions and limitations under the License.
# See the AUTHORS file for names of contributors.
"""Power laws l = a * c^(-k) between compute and loss.

Fits are straight lines in (log c, log l). The default fit is robust: scipy's
least_squares with a Huber loss of width 0.1 in log space, started from the
ordinary least squares line.
"""

import dataclasses
import logging
import math
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.optimize import least_squares

from ..errors import AssumptionViolated, InvalidData
from .curves import LossCurve

__all__ = [
    'PowerLawFit', 'SavingsLaw', 'fit_power_law', 'frontier_points',
    'savings_from_offset', 'HUBER_DELTA', 'PARALLEL_TOLERANCE'
]

logger = logging.getLogger(__name__)

HUBER_DELTA = 0.1
# relative difference of exponents still read as parallel lines
PARALLEL_TOLERANCE = 0.1

Points = Sequence[Tuple[float, float]]


@dataclasses.dataclass(frozen=True)
class PowerLawFit:
    a: float
    k: float
    residual: float
    n_points: int = 0
    robust: bool = True

    @property
    def ok(self) -> bool:
        return self.a > 0 and self.k > 0 and math.isfinite(self.residual)

    def predict(self, compute):
        return self.a * np.power(np.asarray(compute, dtype=float), -self.k)

    def compute_at_loss(self, loss):
        return np.power(self.a / np.asarray(loss, dtype=float), 1.0 / self.k)

    def to_dict(self) -> dict:
        return dict(dataclasses.asdict(self), ok=self.ok)


def _as_points(data: Union[LossCurve, Points]) -> np.ndarray:
    if isinstance(data, LossCurve):
        data = list(zip(data.compute, data.loss))
    return np.asarray(data, dtype=float).reshape(-1, 2)


def _log_points(data) -> Tuple[np.ndarray, np.ndarray]:
    points = _as_points(data)
    if len(points) < 3:
        raise InvalidData(
            f"a power law fit needs at least 3 points, got {len(points)}")
    if not np.all(points > 0) or not np.all(np.isfinite(points)):
        raise InvalidData("power law fits need positive finite values")
    return np.log(points[:, 0]), np.log(points[:, 1])


def fit_power_law(data: Union[LossCurve, Points],
                  robust: bool = True,
                  delta: float = HUBER_DELTA) -> PowerLawFit:
    """Fits log l = log a - k log c.

    Args:
        data: a LossCurve or (compute, loss) pairs.
        robust: Huber loss of width ``delta``; plain least squares if False.
    Returns:
        PowerLawFit; check ``ok`` before trusting a and k.
    """
    x, y = _log_points(data)
    slope, intercept = np.polyfit(x, y, 1)
    if robust:
        result = least_squares(lambda p: p[0] + p[1] * x - y,
                               x0=[intercept, slope],
                               loss="huber",
                               f_scale=delta,
                               xtol=1e-12,
                               ftol=1e-12,
                               gtol=1e-12)
        intercept, slope = result.x
    residual = float(np.sqrt(np.mean((intercept + slope * x - y)**2)))
    fit = PowerLawFit(float(np.exp(intercept)), float(-slope), residual,
                      len(x), robust)
    if not fit.ok:
        logger.warning("power law fit failed: a=%g k=%g", fit.a, fit.k)
    return fit


def frontier_points(data: Union[LossCurve, Points]) -> np.ndarray:
    """Vertices of the lower convex hull in (log c, log l), as (c, l)."""
    points = _as_points(data)
    if not np.all(points > 0):
        raise InvalidData("frontier extraction needs positive values")
    order = np.lexsort((points[:, 1], points[:, 0]))
    logs = np.log(points[order])
    hull = []
    for i, p in enumerate(logs):
        while len(hull) >= 2:
            o, q = logs[hull[-2]], logs[hull[-1]]
            cross = (q[0] - o[0]) * (p[1] - o[1]) - (q[1] - o[1]) * (p[0] -
                                                                     o[0])
            # collinear points stay on the frontier
            if cross >= -1e-12:
                break
            hull.pop()
        hull.append(i)
    return points[order][hull]


@dataclasses.dataclass(frozen=True)
class SavingsLaw:
    """Compute saved by the treatment: s = c_baseline * (1 - 1/b), which
    follows l = a_baseline * (1 - 1/b)^k * s^(-k)."""
    b: float
    k: float
    a_baseline: float

    @property
    def coefficient(self) -> float:
        return self.a_baseline * (1.0 - 1.0 / self.b)**self.k \
            if self.b >= 1.0 else float("nan")

    def baseline_compute(self, loss):
        return np.power(self.a_baseline / np.asarray(loss, dtype=float),
                        1.0 / self.k)

    def treatment_compute(self, loss):
        return self.baseline_compute(loss) / self.b

    def savings_at_loss(self, loss):
        return self.baseline_compute(loss) * (1.0 - 1.0 / self.b)

    def loss_at_savings(self, savings):
        if self.b <= 1.0:
            raise ValueError(f"no savings when b = {self.b}")
        return self.coefficient * np.power(np.asarray(savings, dtype=float),
                                           -self.k)

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "k": self.k,
            "a_baseline": self.a_baseline,
            "coefficient": self.coefficient
        }


def savings_from_offset(fit_baseline: PowerLawFit,
                        fit_treatment: PowerLawFit,
                        tolerance: float = PARALLEL_TOLERANCE) -> SavingsLaw:
    """Reads the compute reduction factor b off two parallel fits.

    The baseline line sits log(b^k) above the treatment's at the shared
    exponent k, the mean of the two.

    Raises:
        AssumptionViolated: exponents differ by more than ``tolerance``
            relative to the baseline's.
    """
    kb, kt = fit_baseline.k, fit_treatment.k
    if kb <= 0 or kt <= 0:
        raise InvalidData(f"exponents must be positive, got {kb} and {kt}")
    if abs(kb - kt) > tolerance * kb:
        raise AssumptionViolated(
            f"fits are not parallel: k = {kb:.4g} and {kt:.4g} differ by more "
            f"than {tolerance:.0%}")
    k = 0.5 * (kb + kt)
    b = math.exp((math.log(fit_baseline.a) - math.log(fit_treatment.a)) / k)
    return SavingsLaw(b, k, fit_baseline.a)
