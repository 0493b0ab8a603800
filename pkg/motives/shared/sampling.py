from __future__ import annotations

import random
from typing import Sequence

from sympy import Rational

from motives.shared.motive import MotiveMorphism, ToricOneMotive, apply_u, torus_map
from motives.shared.ratmult import QStarElem, factorize, product
from motives.shared.zlinalg import IntMatrix


ENTRY_POOL: tuple[str, ...] = ("2", "-2", "3", "-3", "5", "-5", "1/2", "-1/2", "3/5", "-3/5")


def random_entry(rng: random.Random, pool: Sequence[str] = ENTRY_POOL) -> QStarElem:
    return factorize(rng.choice(pool))


def random_motive(
    rng: random.Random, r: int, d: int, pool: Sequence[str] = ENTRY_POOL, name: str = ""
) -> ToricOneMotive:
    u = tuple(tuple(random_entry(rng, pool) for _ in range(r)) for _ in range(d))
    return ToricOneMotive(r, d, u, name)


def random_prime_unit(rng: random.Random, primes: Sequence[int], exponent_bound: int = 2) -> QStarElem:
    sign = rng.choice((1, -1))
    exps = {p: rng.randint(-exponent_bound, exponent_bound) for p in primes}
    return QStarElem.from_map(sign, exps)


def random_prime_motive(rng: random.Random, r: int, d: int, primes: Sequence[int], name: str = "") -> ToricOneMotive:
    u = tuple(tuple(random_prime_unit(rng, primes) for _ in range(r)) for _ in range(d))
    return ToricOneMotive(r, d, u, name)


def random_int_matrix(rng: random.Random, rows: int, cols: int, bound: int = 3) -> IntMatrix:
    return IntMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols=cols)


def random_morphism(
    rng: random.Random, r1: int, d1: int, r2: int, d2: int, pool: Sequence[str] = ENTRY_POOL
) -> MotiveMorphism:
    """A valid morphism: u1 = C∘f_x and u2 = f_t∘C for a random C: Z^{r2} -> T1."""
    f_x = random_int_matrix(rng, r2, r1, bound=2)
    f_t = random_int_matrix(rng, d2, d1, bound=2)
    core = tuple(tuple(random_entry(rng, pool) for _ in range(r2)) for _ in range(d1))
    core_motive = ToricOneMotive(r2, d1, core)
    u1_columns = [apply_u(core_motive, f_x.column(i)) for i in range(r1)]
    u2_columns = [torus_map(f_t, core_motive.column(l)) for l in range(r2)]
    source = ToricOneMotive.from_columns(r1, d1, u1_columns)
    target = ToricOneMotive.from_columns(r2, d2, u2_columns)
    return MotiveMorphism(source, target, f_x, f_t)


def random_point(
    rng: random.Random, motive: ToricOneMotive, denominator_bound: int = 6, pool: Sequence[str] = ENTRY_POOL
) -> tuple[tuple[Rational, ...], tuple[QStarElem, ...]]:
    a = tuple(Rational(rng.randint(-20, 20), rng.randint(1, denominator_bound)) for _ in range(motive.r))
    t = tuple(product([random_entry(rng, pool), random_entry(rng, pool)]) for _ in range(motive.d))
    return a, t
