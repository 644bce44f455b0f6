import random

import pytest

from pqml.corpus import (formula_corpus, random_closed_frame, random_formula,
                         random_frame, random_pd_model, random_subset,
                         random_valuation)
from pqml.errors import EvaluationError, GuardrailError
from pqml.frames import GeneralFrame, KripkeFrame, Model, truncated_submodel
from pqml.semantics import (Evaluator, check_substitution_lemma, extension,
                            extension_full, holds_at, valid_on_general,
                            valid_on_kripke)
from pqml.syntax import (TOP, And, Atom, Box, Dia, Exists, Forall, Implies,
                         Not, Or, atoms_over, parse)
from pqml.axioms import at_n, bc, k

p0, p1 = Atom(0), Atom(1)
clique2 = KripkeFrame(["a", "b"], [(i, j) for i in range(2) for j in range(2)])
chain2 = KripkeFrame(["0", "1"], [(0, 1)])
witness_formula = parse("E p0. p0 & <>~p0")


class TestExtension:
    def test_atom_clause(self):
        rng = random.Random(10)
        for _ in range(20):
            frame = random_frame(rng, 4)
            x = random_subset(rng, 4)
            assert extension_full(p0, frame, {0: x}) == x

    def test_settled_family_kills_witness(self):
        frame = GeneralFrame(clique2, [0b00, 0b11])
        assert extension(witness_formula, frame, {}) == 0

    def test_full_family_finds_witness(self):
        assert extension_full(witness_formula, clique2, {}) == 0b11

    def test_exists_anything(self):
        assert extension_full(parse("E p0. p0"), clique2, {}) == 0b11

    def test_reflexive_points_definable(self):
        frame = KripkeFrame(["a", "b", "c"],
                            [("a", "a"), ("a", "b"), ("b", "c"), ("c", "c")])
        ext = extension_full(parse("A p0. []p0 -> p0"), frame, {})
        assert ext == 0b101  # exactly the reflexive worlds

    def test_chain_witness(self):
        ext = extension_full(parse("E p0. <>p0 & ~p0"), chain2, {})
        assert ext == 0b01

    def test_unbound_variable(self):
        with pytest.raises(EvaluationError):
            extension_full(p0, clique2, {})

    def test_valuation_outside_family(self):
        frame = GeneralFrame(clique2, [0b00, 0b11])
        with pytest.raises(EvaluationError):
            extension(p0, frame, {0: 0b01})

    def test_powerset_guardrail(self):
        big = KripkeFrame([str(i) for i in range(21)], [])
        with pytest.raises(GuardrailError):
            extension_full(parse("E p0. p0"), big, {})
        # quantifier-free formulas are fine at any size
        assert extension_full(parse("~p0"), big, {0: 0}) == big.universe
        # and the guardrail can be forced
        assert extension_full(parse("E p0. p0"), big, {},
                              force=True) == big.universe


class TestHoldsAt:
    def test_top_everywhere(self):
        model = Model(GeneralFrame.full(clique2), {})
        assert holds_at(TOP, model, "a") and holds_at(TOP, model, "b")

    def test_diamond_on_chain(self):
        model = Model(GeneralFrame.full(chain2), {0: 0b10})
        assert holds_at(Dia(p0), model, "0")
        assert not holds_at(Dia(p0), model, "1")

    def test_settling_fails_on_clique(self):
        model = Model(GeneralFrame.full(clique2), {0: 0b01})
        assert not holds_at(Implies(p0, Box(p0)), model, "a")


class TestValidity:
    def test_k_axiom_everywhere(self):
        rng = random.Random(11)
        for _ in range(25):
            frame = random_frame(rng, rng.randint(1, 4))
            assert valid_on_kripke(k(), frame).valid

    def test_counterexample_is_least(self):
        result = valid_on_kripke(parse("p0 -> []p0"), chain2)
        assert not result.valid
        assert result.valuation == {0: 0b01}
        assert result.world == 0

    def test_atomicity_on_clique(self):
        assert valid_on_kripke(at_n(1), KripkeFrame(
            ["0", "1", "2"], [(i, j) for i in range(3) for j in range(3)])).valid

    def test_barcan_on_certified_general_frames(self):
        rng = random.Random(12)
        corpus = formula_corpus(5, 13, variables=(0, 1), connectives=3,
                                max_qd=1)
        for _ in range(10):
            frame = random_closed_frame(rng, rng.randint(2, 4))
            for phi in corpus:
                assert valid_on_general(bc(0, phi), frame).valid

    def test_settled_family_validates_settling(self):
        frame = GeneralFrame(clique2, [0b00, 0b11])
        assert valid_on_general(parse("p0 -> []p0"), frame).valid
        assert not valid_on_kripke(parse("p0 -> []p0"), clique2).valid

    def test_sentences_single_shot(self):
        assert valid_on_kripke(parse("E p0. p0 | ~p0"), clique2).valid


class TestSubstitutionLemma:
    def test_identity(self):
        frame = GeneralFrame.full(clique2)
        assert check_substitution_lemma(witness_formula, {}, frame, {})

    def test_modal_image(self):
        rng = random.Random(14)
        for _ in range(30):
            base = random_frame(rng, rng.randint(1, 4))
            frame = GeneralFrame.full(base)
            phi = random_formula(rng, [0, 1], rng.randint(0, 5), max_qd=1)
            sigma = {0: Dia(p1)}
            v = random_valuation(rng, [0, 1], base.n)
            assert check_substitution_lemma(phi, sigma, frame, v)

    def test_renaming_trigger(self):
        # substituting p1 for p0 into a formula that binds p1
        phi = Exists(1, And(p1, p0))
        rng = random.Random(15)
        for _ in range(20):
            base = random_frame(rng, rng.randint(1, 4))
            frame = GeneralFrame.full(base)
            v = random_valuation(rng, [0, 1], base.n)
            assert check_substitution_lemma(phi, {0: p1}, frame, v)

    def test_random_substitutions(self):
        rng = random.Random(16)
        for _ in range(40):
            base = random_frame(rng, rng.randint(1, 4))
            frame = GeneralFrame.full(base)
            phi = random_formula(rng, [0, 1], rng.randint(0, 5), max_qd=1)
            sigma = {0: random_formula(rng, [0, 1], rng.randint(0, 3), max_qd=1),
                     1: random_formula(rng, [0, 1], rng.randint(0, 2), max_qd=0)}
            v = random_valuation(rng, [0, 1], base.n)
            assert check_substitution_lemma(phi, sigma, frame, v)


class TestSemanticInvariants:
    def test_boolean_clauses(self):
        rng = random.Random(17)
        corpus = formula_corpus(200, 18, variables=(0, 1), connectives=5,
                                max_md=3, max_qd=2)
        for phi in corpus[:60]:
            n = rng.randint(1, 4)
            base = random_frame(rng, n)
            ev = Evaluator(GeneralFrame.full(base))
            v = random_valuation(rng, [0, 1], n)
            ext = ev.extension(phi, v)
            assert ev.extension(Not(phi), v) == base.universe & ~ext
            psi = corpus[rng.randrange(len(corpus))]
            assert ev.extension(Or(phi, psi), v) == ext | ev.extension(psi, v)

    def test_locality(self):
        rng = random.Random(19)
        for _ in range(60):
            n = rng.randint(1, 4)
            base = random_frame(rng, n)
            phi = random_formula(rng, [0, 1], rng.randint(0, 5))
            v = random_valuation(rng, sorted(phi.free_vars), n)
            noisy = dict(v)
            noisy[9] = random_subset(rng, n)
            assert extension_full(phi, base, v) == extension_full(phi, base, noisy)

    def test_atom_partition(self):
        rng = random.Random(20)
        for _ in range(40):
            n = rng.randint(1, 5)
            base = random_frame(rng, n)
            v = random_valuation(rng, [0, 1], n)
            masks = [extension_full(a, base, v) for a in atoms_over([0, 1])]
            total = 0
            for m in masks:
                assert total & m == 0
                total |= m
            assert total == base.universe

    def test_monotone_quantifier(self):
        rng = random.Random(21)
        for _ in range(40):
            n = rng.randint(1, 4)
            base = random_frame(rng, n)
            small = sorted({random_subset(rng, n) for _ in range(3)})
            big = sorted(set(small) | {random_subset(rng, n) for _ in range(3)})
            body = random_formula(rng, [0, 1], rng.randint(0, 4), max_qd=0)
            phi = Exists(0, body)
            v = {1: rng.choice(small)} if 1 in phi.free_vars else {}
            ext_small = extension(phi, GeneralFrame(base, small), v)
            ext_big = extension(phi, GeneralFrame(base, big), v)
            assert ext_small & ~ext_big == 0

    def test_closed_under_semantics_on_certified(self):
        rng = random.Random(22)
        corpus = formula_corpus(25, 23, variables=(0,), connectives=4,
                                max_md=2, max_qd=1)
        for _ in range(10):
            frame = random_closed_frame(rng, rng.randint(2, 4))
            for phi in corpus:
                v = random_valuation(rng, [0], None, family=frame.admissible)
                assert frame.contains(extension(phi, frame, v))

    def test_truncation_preserves_truth(self):
        rng = random.Random(24)
        for _ in range(80):
            model = random_pd_model(rng, rng.randint(2, 6), [0, 1])
            phi = random_formula(rng, [0, 1], rng.randint(0, 5),
                                 max_md=2, max_qd=1)
            w = rng.randrange(model.base.n)
            name = model.base.names[w]
            sub = truncated_submodel(model, w, phi.md + rng.randint(0, 2))
            assert holds_at(phi, model, name) == holds_at(phi, sub, name)

    def test_memo_shared_across_formulas(self):
        ev = Evaluator(GeneralFrame.full(clique2))
        a = ev.extension(parse("E p0. p0 & <>p0"), {})
        b = ev.extension(parse("E p0. p0 & <>p0"), {})
        assert a == b == 0b11
