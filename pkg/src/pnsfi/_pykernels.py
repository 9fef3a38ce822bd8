"""Numpy fallback for the compiled simulator kernels; results are identical."""

import numpy as np


def classify(u, thresholds):
    return np.searchsorted(np.asarray(thresholds), np.asarray(u), side="right").astype(np.uint8)


def type_counts(types):
    return np.bincount(np.asarray(types), minlength=4)[:4].astype(np.int64)


def _recognized(types):
    types = np.asarray(types)
    return types < 2, (types & 1) == 0


def tally(types, treated):
    types = np.asarray(types)
    treated = np.asarray(treated).astype(bool)
    if treated.shape != types.shape:
        raise ValueError("types and treated must have equal length")
    y_x, y_xp = _recognized(types)
    tot_t = int(treated.sum())
    rec_t = int(np.count_nonzero(y_x & treated))
    rec_c = int(np.count_nonzero(y_xp & ~treated))
    return rec_t, tot_t, rec_c, types.size - tot_t


def tally_paired(types):
    y_x, y_xp = _recognized(types)
    n = y_x.size
    return int(np.count_nonzero(y_x)), n, int(np.count_nonzero(y_xp)), n


def simulate_arms(u_type, u_assign, thresholds, treated_fraction):
    u_assign = np.asarray(u_assign)
    if u_assign.shape != np.shape(u_type):
        raise ValueError("u_type and u_assign must have equal length")
    return tally(classify(u_type, thresholds), u_assign < treated_fraction)
