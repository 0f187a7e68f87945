"""Built-in systems: worked examples, a negative control and random systems."""

from __future__ import annotations

import random
from typing import Iterator, Optional

from .exactalg import Field
from .quotient import Quotient, SystemConfig
from .wpoly import Ring, WPoly, canonical_names, monomials_of_wdeg, parse


def make_system(weights, names, polys, modulus: int = 0) -> SystemConfig:
    ring = Ring.make(weights, names, Field(modulus))
    return SystemConfig(ring, tuple(parse(p, ring) for p in polys))


def e1(modulus: int = 0) -> SystemConfig:
    return make_system([1], ["x"], ["x^2", "x^3"], modulus)


def e2(modulus: int = 0) -> SystemConfig:
    return make_system([1, 1], ["x1", "x2"], ["x1^2", "x2^2"], modulus)


def power(d: int, modulus: int = 0) -> SystemConfig:
    return make_system([1], ["x"], [f"x^{d}"], modulus)


def negative_control(modulus: int = 0) -> SystemConfig:
    return make_system([1, 1], ["x1", "x2"], ["x1^2", "x1*x2"], modulus)


# name -> (system, expected verdict)
def builtin() -> list[tuple[str, SystemConfig, str]]:
    out = [("E1", e1(), "DUALITY VERIFIED"), ("E2", e2(), "DUALITY VERIFIED")]
    out += [(f"E3(d={d})", power(d), "DUALITY VERIFIED") for d in range(2, 7)]
    out += [
        ("weighted", make_system([1, 2], ["x", "y"], ["x^2 - y", "y^2 + x^4", "x*y"]), "DUALITY VERIFIED"),
        ("control", negative_control(), "NOT CERTIFIED"),
    ]
    return out


def random_system(rng: random.Random, modulus: int = 101, n: Optional[int] = None,
                  extra: Optional[int] = None, max_degree: int = 4, max_delta: int = 10,
                  coeff_range: Optional[tuple[int, int]] = None) -> SystemConfig:
    """One dense random system with ``delta <= max_delta``.

    Weights are drawn from {1, 2} and degrees from ``1..max_degree`` (only
    degrees that actually have monomials); every monomial of the right degree
    gets a random coefficient.  Over the rationals pass ``coeff_range``.
    """
    while True:
        nn = n if n is not None else rng.choice([2, 3])
        r = nn + (extra if extra is not None else rng.randint(0, 2))
        weights = [rng.choice([1, 2]) for _ in range(nn)]
        ring = Ring.make(weights, canonical_names(nn, "x"), Field(modulus))
        options = [d for d in range(1, max_degree + 1) if monomials_of_wdeg(ring, d)]
        degrees = sorted(rng.choice(options) for _ in range(r))
        if sum(degrees) - sum(weights) > max_delta or sum(degrees) - sum(weights) < 0:
            continue
        polys = []
        for d in degrees:
            terms = {}
            for m in monomials_of_wdeg(ring, d):
                if coeff_range is None:
                    terms[m] = rng.randrange(1, modulus)
                else:
                    terms[m] = rng.randint(*coeff_range)
            poly = WPoly(ring, terms)
            if not poly:
                break
            polys.append(poly)
        else:
            return SystemConfig(ring, tuple(polys))


def random_corpus(count: int = 20, seed: int = 2024, modulus: int = 101, **kw) -> Iterator[SystemConfig]:
    """``count`` random systems that pass the finiteness certificate."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        cfg = random_system(rng, modulus, **kw)
        if Quotient(cfg).finiteness_certificate() is None:
            continue
        made += 1
        yield cfg
