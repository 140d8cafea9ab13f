"""Exact symbolic suspension flows. Rationals are returned as Fraction."""

from fractions import Fraction

from . import _core
from ._core import DomainError, EntroflowError, FormatError, ResourceBound

_RATIONAL_KEYS = {
    "frequency", "bound", "exact_ratio", "u", "t_star", "density",
    "h_base", "expected_theta", "value", "abramov",
}
_INTEGER_KEYS = {"count", "length", "ones", "k"}


def _convert(d):
    out = {}
    for key, v in d.items():
        if isinstance(v, str) and key in _RATIONAL_KEYS:
            out[key] = Fraction(v)
        elif isinstance(v, str) and key in _INTEGER_KEYS:
            out[key] = int(v)
        else:
            out[key] = v
    return out


def stage_word(n):
    return _core.stage_word(n)


def corrected_prefix(length, max_stage=3):
    return _core.corrected_prefix(length, max_stage)


def count_variants(n, length=10000, max_stage=3):
    return _core.count_variants(n, length, max_stage)


def window_condition(n, length=10000, max_stage=3):
    return _core.window_condition(n, length, max_stage)


def block_certificate(n, length=10000, max_stage=3):
    return _convert(_core.block_certificate(n, length, max_stage))


def frequency_certificate(n, L=100000):
    return _convert(_core.frequency_certificate(n, L))


def expected_ohno_roof(L):
    return Fraction(_core.expected_ohno_roof(L))


def omega_stats(n):
    return _convert(_core.omega_stats(n))


def omega_odag(n):
    return _core.omega_odag(n)


def suspend(roof, k, u, t, radius=5000):
    return _convert(_core.suspend(roof, str(k), str(Fraction(u)), str(Fraction(t)), radius))


def verify_conjugacy(speed, samples=100, seed=0):
    return _core.verify_conjugacy(speed, samples, seed)


def abramov(h, speed, L=10000):
    return _convert(_core.abramov(str(Fraction(h)), speed, L))


def bowen(system="ohno", roof="unit", epsilon=Fraction(1, 64), horizon=64, samples=500, radius=8, seed=0):
    return _convert(_core.bowen(system, roof, str(Fraction(epsilon)), str(Fraction(horizon)), samples, radius, seed))


def theorem(target_b, mode="B", h=0.192540883489, samples=100):
    return _convert(_core.theorem(str(Fraction(target_b)), mode, h, samples))


__all__ = [
    "DomainError", "EntroflowError", "FormatError", "ResourceBound",
    "abramov", "block_certificate", "bowen", "corrected_prefix", "count_variants",
    "expected_ohno_roof", "frequency_certificate", "omega_odag", "omega_stats",
    "stage_word", "suspend", "theorem", "verify_conjugacy", "window_condition",
]
