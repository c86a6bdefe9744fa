"""Unit conversions used at configuration and reporting boundaries.

All internal computation is SI linear (Hz, W, m, radians); dB, dBm and degrees
appear only in config files and reports.
"""
import math


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)


def dbm_to_watt(value_dbm: float) -> float:
    return 10.0 ** ((value_dbm - 30.0) / 10.0)


def watt_to_dbm(value_w: float) -> float:
    return 10.0 * math.log10(value_w) + 30.0
