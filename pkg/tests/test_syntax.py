import random

import pytest

from pqml.corpus import random_formula
from pqml.errors import ParseError
from pqml.syntax import (BOT, TOP, And, Atom, Box, Dia, Exists, Forall, Iff,
                         Implies, Not, Or, alpha_equivalent, atoms_over,
                         big_and, box_iter, box_le, dia_iter, dia_le, parse,
                         substitute, to_text)

p0, p1, p2 = Atom(0), Atom(1), Atom(2)


class TestParse:
    def test_negation_disjunction(self):
        assert parse("~p0 | p1") is Or(Not(p0), p1)

    def test_quantifier_with_diamond(self):
        assert parse("E p0. <> p0") is Exists(0, Dia(p0))

    def test_box_implication_expands_to_primitives(self):
        assert parse("[]p0 -> p0") is Or(Not(Not(Dia(Not(p0)))), p0)

    def test_quantifier_body_extends_right(self):
        assert parse("E p0. <>p0 & ~p0") is Exists(0, And(Dia(p0), Not(p0)))
        assert parse("(E p0. <>p0) & ~p0") is And(Exists(0, Dia(p0)), Not(p0))

    def test_precedence(self):
        assert parse("p0 & p1 | p2") is Or(And(p0, p1), p2)
        assert parse("p0 -> p1 -> p2") is Implies(p0, Implies(p1, p2))
        assert parse("p0 | p1 <-> p2") is Iff(Or(p0, p1), p2)

    def test_aliases_and_constants(self):
        assert parse("q | r") is Or(p1, p2)
        assert parse("T & F") is And(TOP, BOT)

    def test_forall_sugar(self):
        assert parse("A p0. p0") is Forall(0, p0)

    def test_error_position(self):
        with pytest.raises(ParseError) as err:
            parse("p0 | $")
        assert err.value.position == 5

    def test_unknown_identifier(self):
        with pytest.raises(ParseError):
            parse("foo | p1")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse("p0 p1")


class TestPrint:
    def test_roundtrip_random(self):
        rng = random.Random(42)
        for _ in range(500):
            phi = random_formula(rng, [0, 1, 2], rng.randint(0, 8))
            assert parse(to_text(phi)) is phi

    def test_print_parse_stabilizes(self):
        for text in ("~p0 | p1", "p0 & (p1 | p2)", "E p0. A p1. p0 -> p1",
                     "[](<>p0 -> []<>p0)", "~(p0 & p1)"):
            first = parse(text)
            assert parse(to_text(first)) is first

    def test_box_resugars(self):
        assert to_text(Box(p0)) == "[]p0"
        assert to_text(Forall(0, p0)) == "A p0. p0"
        assert to_text(And(p0, p1)) == "p0 & p1"


class TestMeasures:
    def test_free_vars(self):
        assert p0.free_vars == {0}
        assert Exists(0, Or(p0, p1)).free_vars == {1}
        assert Dia(Exists(1, p1)).free_vars == set()

    def test_quantifier_depth(self):
        assert p0.qd == 0
        assert Exists(0, Exists(1, p0)).qd == 2
        assert Or(Exists(0, p0), Dia(p1)).qd == 1

    def test_modal_depth_ignores_quantifiers(self):
        assert p0.md == 0
        assert Dia(Dia(p0)).md == 2
        assert Exists(0, Dia(p0)).md == 1

    def test_measures_monotone_under_embedding(self):
        rng = random.Random(43)
        for _ in range(100):
            phi = random_formula(rng, [0, 1], rng.randint(0, 5))
            assert Dia(phi).md == phi.md + 1
            assert Exists(0, phi).qd == phi.qd + 1
            assert Not(phi).qd == phi.qd and Not(phi).md == phi.md
            psi = random_formula(rng, [0, 1], 2)
            assert Or(phi, psi).md >= phi.md
            assert Or(phi, psi).qd >= psi.qd


class TestSubstitute:
    def test_variable_swap(self):
        assert substitute({0: p1}, Dia(p0)) is Dia(p1)

    def test_bound_renaming(self):
        phi = Exists(1, And(p1, p0))
        assert substitute({0: p1}, phi) is Exists(2, And(p2, p1))

    def test_identity_is_identity(self):
        rng = random.Random(44)
        for _ in range(200):
            phi = random_formula(rng, [0, 1, 2], rng.randint(0, 7))
            assert substitute({}, phi) is phi

    def test_no_renaming_without_conflict(self):
        phi = Exists(1, And(p1, p0))
        assert substitute({0: p2}, phi) is Exists(1, And(p1, p2))

    def test_shadowed_variable_not_substituted(self):
        phi = Exists(0, p0)
        assert substitute({0: p1}, phi) is Exists(0, p0)

    def test_renaming_avoids_all_mentioned_variables(self):
        # target mentions p2 bound, image mentions p1: fresh must be p3
        phi = Exists(1, And(p1, Or(p0, Exists(2, p2))))
        out = substitute({0: p1}, phi)
        assert isinstance(out, Exists) and out.var == 3

    def test_complex_image_triggers_renaming(self):
        phi = Exists(1, Or(p1, p0))
        out = substitute({0: Or(p1, p2)}, phi)
        assert out is Exists(3, Or(Atom(3), Or(p1, p2)))

    def test_free_variables_after_substitution(self):
        rng = random.Random(45)
        for _ in range(150):
            phi = random_formula(rng, [0, 1], rng.randint(0, 5))
            image = random_formula(rng, [1, 2], rng.randint(0, 3), max_qd=0)
            out = substitute({0: image}, phi)
            expected = (phi.free_vars - {0}) | (image.free_vars
                                                if 0 in phi.free_vars else set())
            assert out.free_vars == expected


class TestBuilders:
    def test_dia_iter(self):
        assert dia_iter(0, p0) is p0
        assert dia_iter(2, p0) is Dia(Dia(p0))

    def test_dia_le(self):
        assert dia_le(0, p0) is p0
        assert dia_le(1, p0) is Or(p0, Dia(p0))
        assert dia_le(2, p0) is Or(Or(p0, Dia(p0)), Dia(Dia(p0)))

    def test_box_dual(self):
        assert box_iter(2, p0) is Box(Box(p0))
        assert box_le(1, p0) is And(p0, Box(p0))

    def test_atoms_over_empty(self):
        assert atoms_over([]) == [TOP]

    def test_atoms_over_one(self):
        assert atoms_over([0]) == [p0, Not(p0)]

    def test_atoms_over_two_canonical_order(self):
        assert atoms_over([0, 1]) == [
            And(p0, p1), And(p0, Not(p1)), And(Not(p0), p1),
            And(Not(p0), Not(p1))]

    def test_atoms_count(self):
        assert len(atoms_over([0, 1, 2])) == 8

    def test_atoms_reject_duplicates(self):
        with pytest.raises(ValueError):
            atoms_over([0, 0])

    def test_empty_conjunction_is_top(self):
        assert big_and([]) is TOP


class TestAlphaEquivalence:
    def test_renamed_binder(self):
        assert alpha_equivalent(Exists(0, p0), Exists(1, p1))

    def test_free_variables_must_match(self):
        assert not alpha_equivalent(Exists(0, p0), Exists(1, p0))
        assert not alpha_equivalent(p0, p1)

    def test_mixed(self):
        f = Exists(0, Or(p0, p1))
        g = Exists(2, Or(p2, p1))
        assert alpha_equivalent(f, g)
        assert not alpha_equivalent(f, Exists(2, Or(p2, p2)))

    def test_preserved_by_substitution_renaming(self):
        phi = Exists(1, And(p1, p0))
        assert alpha_equivalent(substitute({0: p0}, phi), phi)
