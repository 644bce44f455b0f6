"""Fast standing property checks behind the CLI selfcheck command.

Each check is a scaled-down version of a test-suite property: seeded,
deterministic, and quick enough to run together in a few seconds.  The
full-scale versions live in the acceptance tests.
"""

from __future__ import annotations

import random

from . import axioms
from .breakdown import (BreakdownEngine, approx_equiv, extend_witness,
                        fast_extension, invariant_subdomain_check)
from .corpus import (all_frames, formula_corpus, random_closed_frame,
                     random_formula, random_frame, random_pd_model,
                     random_subset, random_valuation, small_frame_corpus)
from .diversity import (diversity, diversity_generated, duplicate_structure,
                        m_diamond_quotient)
from .frames import (GeneralFrame, KripkeFrame, Model, check_closure,
                     close_family, frame_from_json, frame_to_json,
                     truncated_submodel)
from .gallery import (catalog, clique, cyclic, d45_point, k5_frame, resolve,
                      shift_isomorphism_check)
from .semantics import (Evaluator, check_substitution_lemma, extension,
                        extension_full, holds_at, valid_on_general,
                        valid_on_kripke)
from .syntax import (Atom, Dia, Exists, Not, Or, atoms_over, parse,
                     substitute, to_text)


def check_syntax_roundtrip() -> str:
    rng = random.Random(101)
    for _ in range(300):
        phi = random_formula(rng, [0, 1, 2], rng.randint(0, 7))
        if parse(to_text(phi)) is not phi:
            raise AssertionError(f"round-trip failed for {to_text(phi)}")
    return "300 random formulas re-parse to themselves"


def check_substitution() -> str:
    rng = random.Random(102)
    for _ in range(150):
        phi = random_formula(rng, [0, 1], rng.randint(0, 6))
        if substitute({}, phi) is not phi:
            raise AssertionError(f"identity substitution changed {phi!r}")
    tricky = substitute({0: Atom(1)}, Exists(1, Not(Or(Not(Atom(1)), Not(Atom(0))))))
    if tricky is not Exists(2, Not(Or(Not(Atom(2)), Not(Atom(1))))):
        raise AssertionError("bound renaming is off")
    frame = GeneralFrame.full(random_frame(rng, 4))
    for _ in range(40):
        phi = random_formula(rng, [0, 1], rng.randint(0, 5), max_qd=1)
        sigma = {0: random_formula(rng, [0, 1], 2, max_qd=0)}
        v = random_valuation(rng, [0, 1], 4)
        if not check_substitution_lemma(phi, sigma, frame, v):
            raise AssertionError(f"substitution lemma failed on {phi!r}")
    return "identity, renaming and the substitution lemma hold"


def check_boolean_clauses() -> str:
    rng = random.Random(103)
    for _ in range(60):
        n = rng.randint(1, 5)
        frame = GeneralFrame.full(random_frame(rng, n))
        ev = Evaluator(frame)
        phi = random_formula(rng, [0, 1], rng.randint(0, 5), max_qd=1)
        v = random_valuation(rng, sorted(phi.free_vars) or [0], n)
        ext = ev.extension(phi, v)
        if ev.extension(Not(phi), v) != frame.base.universe & ~ext:
            raise AssertionError("negation clause broken")
        psi = random_formula(rng, [0, 1], 2, max_qd=0)
        v.update(random_valuation(rng, sorted(psi.free_vars - set(v)), n))
        if ev.extension(Or(phi, psi), v) != ext | ev.extension(psi, v):
            raise AssertionError("disjunction clause broken")
    return "negation and disjunction clauses agree with set algebra"


def check_locality_and_partition() -> str:
    rng = random.Random(104)
    for _ in range(50):
        n = rng.randint(1, 5)
        base = random_frame(rng, n)
        phi = random_formula(rng, [0, 1], rng.randint(0, 5), max_qd=1)
        v = random_valuation(rng, sorted(phi.free_vars), n)
        before = extension_full(phi, base, v)
        noisy = dict(v)
        noisy[7] = random_subset(rng, n)  # irrelevant variable
        if extension_full(phi, base, noisy) != before:
            raise AssertionError("extension depends on an irrelevant variable")
        v2 = random_valuation(rng, [0, 1], n)
        masks = [extension_full(a, base, v2) for a in atoms_over([0, 1])]
        union = 0
        for i, m in enumerate(masks):
            if union & m:
                raise AssertionError("atom extensions overlap")
            union |= m
        if union != base.universe:
            raise AssertionError("atom extensions do not cover the frame")
    return "locality holds; atom extensions partition the worlds"


def check_closure_ops() -> str:
    rng = random.Random(105)
    for _ in range(25):
        n = rng.randint(1, 5)
        base = random_frame(rng, n)
        seeds = {random_subset(rng, n) for _ in range(rng.randint(1, 3))}
        closed = close_family(base, seeds)
        report = check_closure(base, closed)
        if not report.closed:
            raise AssertionError(f"closure output not closed: {report}")
        if close_family(base, closed) != closed:
            raise AssertionError("closure is not idempotent")
        if not set(seeds) <= set(closed):
            raise AssertionError("closure is not extensive")
    return "close_family is closed, idempotent and extensive"


def check_quotient_mdia() -> str:
    count = 0
    for n in (1, 2):
        for frame in all_frames(n):
            ds = duplicate_structure(frame)
            for x in range(1 << n):
                count += 1
                if m_diamond_quotient(ds, frame, x) != frame.m_diamond(x):
                    raise AssertionError("quotient diamond mismatch")
    rng = random.Random(106)
    for _ in range(120):
        frame = random_frame(rng, rng.randint(3, 5))
        ds = duplicate_structure(frame)
        for x in range(1 << frame.n):
            count += 1
            if m_diamond_quotient(ds, frame, x) != frame.m_diamond(x):
                raise AssertionError("quotient diamond mismatch")
    return f"{count} quotient-vs-direct diamond agreements"


def check_duplicates_equivalence() -> str:
    from .diversity import are_duplicates
    rng = random.Random(107)
    for _ in range(60):
        frame = random_frame(rng, rng.randint(2, 6))
        n = frame.n
        for w in range(n):
            if not are_duplicates(frame, w, w):
                raise AssertionError("reflexivity broken")
        for w in range(n):
            for u in range(n):
                if are_duplicates(frame, w, u) != are_duplicates(frame, u, w):
                    raise AssertionError("symmetry broken")
                for x in range(n):
                    if are_duplicates(frame, w, u) and are_duplicates(frame, u, x) \
                            and not are_duplicates(frame, w, x):
                        raise AssertionError("transitivity broken")
    return "duplicate relation is an equivalence on random frames"


def check_breakdown_oracle() -> str:
    rng = random.Random(108)
    for _ in range(80):
        n = rng.randint(1, 5)
        frame = random_frame(rng, n)
        phi = random_formula(rng, [0, 1], rng.randint(0, 6), max_md=3, max_qd=2)
        v = random_valuation(rng, sorted(phi.free_vars), n)
        if fast_extension(phi, frame, v) != extension_full(phi, frame, v):
            raise AssertionError(f"fast path disagrees on {to_text(phi)}")
    return "fast extension matches the powerset oracle on 80 random cases"


def check_breakdown_stability() -> str:
    rng = random.Random(109)
    for _ in range(40):
        n = rng.randint(2, 6)
        frame = random_frame(rng, n)
        ds = duplicate_structure(frame)
        phi = random_formula(rng, [0], rng.randint(1, 4), max_md=2, max_qd=1)
        level = phi.qd + 1
        x = random_subset(rng, n)
        y = extend_witness({}, {}, level + 1, 0, x, ds)  # {0:x} ~level {0:y}
        engine = BreakdownEngine(frame, ds)
        for d in range(len(ds.classes)):
            if engine.breakdown(phi, {0: x}, d) is not engine.breakdown(phi, {0: y}, d):
                raise AssertionError("breakdown not stable under ~-equivalence")
    return "breakdown outputs are stable across equivalent valuations"


def check_truncation() -> str:
    rng = random.Random(110)
    for _ in range(120):
        model = random_pd_model(rng, rng.randint(2, 6), [0, 1])
        phi = random_formula(rng, [0, 1], rng.randint(0, 5), max_md=2, max_qd=1)
        w = rng.randrange(model.base.n)
        depth = phi.md + rng.randint(0, 2)
        sub = truncated_submodel(model, w, depth)
        name = model.base.names[w]
        if holds_at(phi, model, name) != holds_at(phi, sub, name):
            raise AssertionError(f"truncation changed truth of {to_text(phi)}")
    return "truth is preserved under depth-covering truncation"


def check_axiom_validities() -> str:
    for frame in (clique(3).base, cyclic(3).base, k5_frame(1, 2).base):
        for n in (0, 1):
            if not valid_on_kripke(axioms.at_n(n), frame).valid:
                raise AssertionError(f"atomicity at grade {n} failed")
            if not valid_on_kripke(axioms.r_n(n), frame).valid:
                raise AssertionError(f"successor-set scheme at grade {n} failed")
    if not valid_on_kripke(axioms.five(), k5_frame(1, 2).base).valid:
        raise AssertionError("Euclidean axiom failed on a Euclidean frame")
    if valid_on_kripke(axioms.five(), cyclic(3).base).valid:
        raise AssertionError("Euclidean axiom cannot hold on a 3-cycle")
    return "graded axioms valid; Euclidean axiom tracks Euclideanness"


def check_bc_on_quantifiable() -> str:
    rng = random.Random(111)
    corpus = formula_corpus(6, 112, variables=(0, 1), connectives=3, max_qd=1)
    for _ in range(12):
        frame = random_closed_frame(rng, rng.randint(2, 4))
        for phi in corpus:
            inst = axioms.bc(0, phi)
            if not valid_on_general(inst, frame).valid:
                raise AssertionError(f"Barcan instance failed: {to_text(inst)}")
    return "Barcan instances valid on certified closed frames"


def check_diversity_spots() -> str:
    # the 2-cycle degenerates: its transposition is an automorphism
    if [diversity(cyclic(n).base) for n in (2, 3, 4)] != [1, 3, 4]:
        raise AssertionError("cycle diversity off")
    if diversity(clique(5).base) != 1:
        raise AssertionError("clique diversity off")
    if diversity_generated(d45_point(3).base) != 2:
        raise AssertionError("point-at-clique diversity off")
    ds = duplicate_structure(k5_frame(1, 2).base)
    if ds.diversity != 3:
        raise AssertionError("root/seen/unseen diversity off")
    return "diversity spot values as expected"


def check_diamond_collapse() -> str:
    for frame in small_frame_corpus(seed=113, random_count=6):
        n = diversity_generated(frame)
        if n <= 4 and not valid_on_kripke(axioms.diamond_collapse(n), frame).valid:
            raise AssertionError("diamond collapse failed below diversity")
    return "diversity bounds the diamond collapse grade"


def check_sahlqvist() -> str:
    good = [axioms.t(), axioms.five(), axioms.phi_sq1(), axioms.phi_sq2()]
    if not all(axioms.sahlqvist_check(f).is_sahlqvist for f in good):
        raise AssertionError("a Sahlqvist formula was rejected")
    if axioms.sahlqvist_check(axioms.m_ax()).is_sahlqvist:
        raise AssertionError("McKinsey accepted")
    return "classifier accepts the known positives, rejects McKinsey"


def check_invariance_demo() -> str:
    base = clique(2).base
    frame = GeneralFrame(base, [0, base.universe])
    report = invariant_subdomain_check(frame, [parse("E p0. p0 & <>~p0")])
    if report.passed:
        raise AssertionError("two-set family passed against the powerset")
    full = invariant_subdomain_check(GeneralFrame.full(base), [parse("p0")])
    if not full.passed:
        raise AssertionError("powerset family failed against itself")
    return "coarse family caught, full family passes"


def check_shift_isomorphism() -> str:
    corpus = formula_corpus(10, 114, variables=(0,), connectives=4,
                            max_md=2, max_qd=0)
    for n, m in ((0, 2), (-1, 3), (2, 2)):
        for phi in corpus:
            result = shift_isomorphism_check(-6, 6, n, m, 2, phi, {0: {1}})
            if not result.passed:
                raise AssertionError(f"shift check failed at ({n},{m})")
    return "shift argument holds on the window sweep"


def check_gallery_roundtrip() -> str:
    for entry in catalog():
        text = frame_to_json(entry.frame)
        again = frame_from_json(text)
        if frame_to_json(again) != text:
            raise AssertionError(f"gallery {entry.id} JSON round-trip broke")
        if resolve(entry.id).base != entry.base:
            raise AssertionError(f"gallery {entry.id} not deterministic")
    return "gallery entries round-trip through JSON bit-exactly"


CHECKS = [
    ("syntax round-trip", check_syntax_roundtrip),
    ("substitution", check_substitution),
    ("boolean clauses", check_boolean_clauses),
    ("locality and atom partition", check_locality_and_partition),
    ("family closure", check_closure_ops),
    ("quotient diamond", check_quotient_mdia),
    ("duplicate equivalence", check_duplicates_equivalence),
    ("breakdown vs oracle", check_breakdown_oracle),
    ("breakdown stability", check_breakdown_stability),
    ("truncation preservation", check_truncation),
    ("axiom validities", check_axiom_validities),
    ("Barcan on quantifiable frames", check_bc_on_quantifiable),
    ("diversity spot values", check_diversity_spots),
    ("diamond collapse", check_diamond_collapse),
    ("Sahlqvist classifier", check_sahlqvist),
    ("invariance demo", check_invariance_demo),
    ("shift isomorphism", check_shift_isomorphism),
    ("gallery round-trip", check_gallery_roundtrip),
]


def run(out=print) -> bool:
    ok = True
    for name, fn in CHECKS:
        try:
            detail = fn()
            out(f"ok   {name}: {detail}")
        except Exception as exc:  # report and keep going
            ok = False
            out(f"FAIL {name}: {exc}")
    out("selfcheck passed" if ok else "selfcheck FAILED")
    return ok
