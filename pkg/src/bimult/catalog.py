"""Registry of named symbols addressable from configuration files."""

from __future__ import annotations

from .symbols import (
    Symbol2D,
    bht_symbol,
    constant_symbol,
    exponential_symbol,
    fejer_square_symbol,
    indicator_box,
    mollified_box,
    tent_lambda,
)
from .transference import periodize_symbol


def _trig(a=1.0, b=1.0):
    return exponential_symbol(float(a), float(b))


def _tent(width=1.0):
    return tent_lambda(float(width))


def _tent_periodized(width=0.25):
    return periodize_symbol(tent_lambda(float(width)))


def _box_periodized(inner=0.25, outer=0.5):
    return periodize_symbol(mollified_box(float(inner), float(outer)))


def _bht_periodized():
    return periodize_symbol(bht_symbol() * indicator_box())


def _const(c=1.0):
    return constant_symbol(complex(c))


SYMBOLS = {
    "bht": (bht_symbol, "-i sgn(xi - eta)"),
    "tent": (_tent, "product tent on [-w, w)^2 (param: width)"),
    "box": (lambda half=0.5: indicator_box(float(half)), "indicator of [-h, h)^2 (param: half)"),
    "box-mollified": (lambda inner=0.25, outer=0.5: mollified_box(float(inner), float(outer)),
                      "smooth plateau, support [-outer, outer]^2"),
    "fejer2": (fejer_square_symbol, "product of sin^2(4 pi x)/(4 pi x)^2"),
    "one": (lambda: constant_symbol(1.0), "constant 1"),
    "zero": (lambda: constant_symbol(0.0), "constant 0"),
    "const": (_const, "constant c (param: c)"),
    "trig": (_trig, "exp(2 pi i (a xi + b eta)) (params: a, b)"),
    "tent-periodized": (_tent_periodized, "1-periodic tent of half width w (param: width)"),
    "box-periodized": (_box_periodized, "1-periodic smooth plateau"),
    "bht-periodized": (_bht_periodized, "1-periodic bht restricted to the unit cell"),
}


def symbol_names() -> list:
    return sorted(SYMBOLS)


def make_symbol(name: str, **params) -> Symbol2D:
    """Build a registered symbol; unknown names raise ``KeyError``."""
    if name not in SYMBOLS:
        raise KeyError(f"unknown symbol {name!r}; known: {', '.join(symbol_names())}")
    factory, _ = SYMBOLS[name]
    return factory(**params)


def describe(name: str) -> str:
    return SYMBOLS[name][1]
