"""Deterministic corpora for property checks: seeded random formulas,
frames, families and models, plus an exhaustive bounded formula
enumerator.  Shared by the test suite and the CLI selfcheck."""

from __future__ import annotations

import itertools
import random

from .frames import GeneralFrame, KripkeFrame, Model, close_family
from .gallery import (chain, clique, cyclic, d45_point, div4_frame,
                      euclid_window, identity, k5_frame)
from .syntax import (BOT, TOP, Atom, Dia, Exists, Formula, Not, Or, Var)


def random_subset(rng: random.Random, n: int) -> int:
    return rng.randrange(1 << n)


def random_frame(rng: random.Random, n: int, edge_prob: float = 0.45) -> KripkeFrame:
    names = [str(i) for i in range(n)]
    edges = [(i, j) for i in range(n) for j in range(n)
             if rng.random() < edge_prob]
    return KripkeFrame(names, edges)


def all_frames(n: int):
    """Every frame on n worlds: all 2^(n^2) relations."""
    names = [str(i) for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(n)]
    for code in range(1 << (n * n)):
        edges = [pairs[b] for b in range(n * n) if (code >> b) & 1]
        yield KripkeFrame(names, edges)


def random_formula(rng: random.Random, variables, connectives: int,
                   max_md: int = 3, max_qd: int = 2) -> Formula:
    """Random formula with at most `connectives` primitive connectives and
    the given modal/quantifier depth bounds."""
    variables = list(variables)
    if connectives <= 0:
        if rng.random() < 0.06:
            return TOP if rng.random() < 0.5 else BOT
        return Atom(rng.choice(variables))
    ops = ["not", "or"]
    if max_md > 0:
        ops.append("dia")
    if max_qd > 0:
        ops.append("exists")
    op = rng.choice(ops)
    if op == "not":
        return Not(random_formula(rng, variables, connectives - 1,
                                  max_md, max_qd))
    if op == "dia":
        return Dia(random_formula(rng, variables, connectives - 1,
                                  max_md - 1, max_qd))
    if op == "exists":
        v = rng.choice(variables)
        return Exists(v, random_formula(rng, variables, connectives - 1,
                                        max_md, max_qd - 1))
    left_budget = rng.randrange(connectives)
    left = random_formula(rng, variables, left_budget, max_md, max_qd)
    right = random_formula(rng, variables, connectives - 1 - left_budget,
                           max_md, max_qd)
    return Or(left, right)


def formula_corpus(count: int, seed: int, variables=(0, 1),
                   connectives: int = 5, max_md: int = 3,
                   max_qd: int = 2) -> list[Formula]:
    rng = random.Random(seed)
    out = []
    seen = set()
    while len(out) < count:
        phi = random_formula(rng, variables, connectives, max_md, max_qd)
        if phi not in seen:
            seen.add(phi)
            out.append(phi)
    return out


def enumerate_formulas(variables, max_connectives: int, max_md: int,
                       max_qd: int, include_consts: bool = False) -> list[Formula]:
    """All formulas over the given variables with at most the given number
    of primitive connectives and within the depth bounds.  Exhaustive by
    construction: every AST is built exactly once."""
    variables = list(variables)
    leaves: list[Formula] = [Atom(v) for v in variables]
    if include_consts:
        leaves += [TOP, BOT]
    levels: list[list[Formula]] = [leaves]
    for count in range(1, max_connectives + 1):
        level: list[Formula] = []
        for f in levels[count - 1]:
            level.append(Not(f))
            if f.md < max_md:
                level.append(Dia(f))
            if f.qd < max_qd:
                for v in variables:
                    level.append(Exists(v, f))
        for left_count in range(count):
            right_count = count - 1 - left_count
            for a in levels[left_count]:
                for b in levels[right_count]:
                    level.append(Or(a, b))
        levels.append(level)
    return [f for level in levels for f in level]


def random_valuation(rng: random.Random, variables, n: int,
                     family=None) -> dict[Var, int]:
    if family is None:
        return {v: random_subset(rng, n) for v in variables}
    family = list(family)
    return {v: rng.choice(family) for v in variables}


def random_family(rng: random.Random, n: int, size: int) -> tuple[int, ...]:
    """Arbitrary non-empty family of subsets (no closure guarantees)."""
    fam = {random_subset(rng, n) for _ in range(size)}
    return tuple(sorted(fam))


def random_closed_frame(rng: random.Random, n: int,
                        seeds: int = 2) -> GeneralFrame:
    """Random frame with the closure of a few random seed sets as its
    admissible family; certified closed by construction."""
    base = random_frame(rng, n)
    fam = close_family(base, random_family(rng, n, seeds))
    return GeneralFrame(base, fam, certify=True)


def random_pd_model(rng: random.Random, n: int, variables,
                    family_size: int = 4) -> Model:
    """Random model over an arbitrary (uncertified) admissible family,
    valuation drawn from the family."""
    base = random_frame(rng, n)
    fam = random_family(rng, n, family_size)
    frame = GeneralFrame(base, fam)
    valuation = {v: rng.choice(fam) for v in variables}
    return Model(frame, valuation)


def small_frame_corpus(seed: int = 7, random_count: int = 12,
                       max_random_size: int = 6) -> list[KripkeFrame]:
    """Gallery shapes at small sizes plus seeded random frames; the
    standing corpus for frame-level property checks."""
    frames = [
        cyclic(2).base, cyclic(3).base, cyclic(5).base,
        clique(1).base, clique(2).base, clique(3).base, clique(4).base,
        identity(1).base, identity(3).base, identity(4).base,
        chain(1).base, chain(2).base, chain(4).base,
        d45_point(1).base, d45_point(3).base,
        k5_frame(1, 1).base, k5_frame(1, 2).base, k5_frame(2, 2).base,
        div4_frame(1, 1, 1).base, div4_frame(2, 1, 1).base,
        div4_frame(0, 2, 2).base,
        euclid_window(3).base,
    ]
    rng = random.Random(seed)
    for _ in range(random_count):
        frames.append(random_frame(rng, rng.randint(2, max_random_size)))
    return frames


def quantifier_free_corpus(count: int, seed: int, variables=(0, 1),
                           connectives: int = 5, max_md: int = 2) -> list[Formula]:
    return formula_corpus(count, seed, variables, connectives, max_md, max_qd=0)


def product_valuations(variables, family):
    """All valuations of the given variables over the family, in
    deterministic order."""
    variables = list(variables)
    family = list(family)
    for choice in itertools.product(family, repeat=len(variables)):
        yield dict(zip(variables, choice))
