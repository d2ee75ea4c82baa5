"""dB <-> linear conversions used at the configuration/report boundary.

Conventions: ``P[dBW] -> 10**(P/10) W`` and ``P[dBm] -> 10**((P-30)/10) W``.
Scalars in give floats out; arrays in give arrays out.
"""
import numpy as np


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def db_to_lin(x_db):
    return _out(10.0 ** (np.asarray(x_db, dtype=float) / 10.0))


def lin_to_db(x):
    return _out(10.0 * np.log10(np.asarray(x, dtype=float)))


def dbw_to_watt(p_dbw):
    return db_to_lin(p_dbw)


def watt_to_dbw(p_w):
    return lin_to_db(p_w)


def dbm_to_watt(p_dbm):
    return db_to_lin(np.asarray(p_dbm, dtype=float) - 30.0)


def watt_to_dbm(p_w):
    return _out(lin_to_db(p_w) + 30.0)
