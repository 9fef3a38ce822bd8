"""Independent reference computations used by several test modules."""

import numpy as np
from statsmodels.stats.proportion import proportion_confint


def wilson_reference(recognized, total, level):
    return proportion_confint(recognized, total, alpha=1 - level, method="wilson")


def clopper_pearson(recognized, total, level):
    return proportion_confint(recognized, total, alpha=1 - level, method="beta")


def grid_envelope(p_range, pp_range, steps=50):
    """Brute-force min/max of every bound endpoint over a steps x steps grid.

    Returns {key: (min_lower, max_upper)}.
    """
    p = np.linspace(*p_range, steps)[:, None]
    pp = np.linspace(*pp_range, steps)[None, :]
    lo = np.maximum(0.0, p - pp)
    hi = np.minimum(p, 1.0 - pp)
    out = {"pns": (lo.min(), hi.max())}
    out["pn"] = ((lo / p).min(), (hi / p).max())
    out["ps"] = ((lo / (1 - pp)).min(), (hi / (1 - pp)).max())
    return out
