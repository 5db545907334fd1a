"""Measure-theoretic Gronwall analysis: condition (M), semi-finite parts,
Lebesgue-Stieltjes integrals and verified counterexamples.

Measures, functions and intervals are plain dicts in the same JSON layout
the command-line tool reads. Infinite endpoints may be given as floats or
as the strings "-inf" / "+inf".
"""

import json
import math

from . import _gronwall
from ._gronwall import GronwallError

__all__ = [
    "GronwallError",
    "check_m",
    "semifinite",
    "integrate",
    "solve",
    "counterexample",
    "demo",
    "demo_names",
]


def _encode(value):
    if isinstance(value, float) and math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def _dump(value):
    return json.dumps(_encode(value))


def check_m(measure, a=None):
    """Global report on condition (M), or the local check at a."""
    return json.loads(_gronwall.check_m(_dump(measure), a))


def semifinite(measure):
    return json.loads(_gronwall.semifinite(_dump(measure)))


def integrate(function, measure, interval, absolute=False):
    return json.loads(_gronwall.integrate(_dump(function), _dump(measure), _dump(interval), absolute))


def solve(measure, function, a, b):
    """Forward solution of the integral equation for an atomic measure."""
    return json.loads(_gronwall.solve(_dump(measure), _dump(function), a, b))


def counterexample(measure, a, b=None):
    return json.loads(_gronwall.counterexample(_dump(measure), a, b))


def demo(name, count=None):
    return json.loads(_gronwall.demo(name, count))


def demo_names():
    return list(_gronwall.demo_names())
