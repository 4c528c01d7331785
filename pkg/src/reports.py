"""
Tabular reports as pandas DataFrames, with rationals rendered as "num/den" strings.
"""
from typing import Iterable, Sequence, Tuple

import pandas as pd

from .exact import Bracket, format_rational

SCHMIDT_COLUMNS = ["n", "threshold", "measure_le"]
GP_COLUMNS = ["i", "v_measure", "v_threshold", "u_measure", "u_threshold", "pass"]
BAND_COLUMNS = ["band", "k", "l", "epsilon", "delta", "measure", "sup_g", "bound",
                "power_integral_lower", "power_integral_upper", "balancing_floor"]
STAGE_COLUMNS = ["stage", "height", "residual_measure", "beta", "sup_g"]


def schmidt_frame(rows: Iterable[Tuple]) -> pd.DataFrame:
    data = [(n, format_rational(M), format_rational(measure)) for n, M, measure in rows]
    return pd.DataFrame(data, columns=SCHMIDT_COLUMNS)


def gp_frame(rows: Sequence) -> pd.DataFrame:
    data = [(row.i, format_rational(row.v_measure), str(row.v_threshold),
             format_rational(row.u_measure), str(row.u_threshold), bool(row.passed))
            for row in rows]
    return pd.DataFrame(data, columns=GP_COLUMNS)


def band_frame(bands: Sequence) -> pd.DataFrame:
    data = []
    for band in bands:
        integral: Bracket = band.power_integral
        data.append((band.index, format_rational(band.positive_scale),
                     format_rational(band.negative_scale), format_rational(band.epsilon),
                     format_rational(band.delta), format_rational(band.measure),
                     format_rational(band.sup_transfer), format_rational(band.bound),
                     format_rational(integral.lower), format_rational(integral.upper),
                     format_rational(band.balancing_floor)))
    return pd.DataFrame(data, columns=BAND_COLUMNS)


def stage_frame(states: Sequence) -> pd.DataFrame:
    data = [(s.stage_index, s.tower.height, format_rational(s.residual.measure),
             format_rational(s.residual_measure_bound), format_rational(s.transfer.sup_norm()))
            for s in states]
    return pd.DataFrame(data, columns=STAGE_COLUMNS)


def write_csv(frame: pd.DataFrame, path=None) -> str:
    """Write to `path` when given; always return the CSV text."""
    text = frame.to_csv(index=False, lineterminator="\n")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    return text
