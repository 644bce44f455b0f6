import random

from pqml.corpus import all_frames, random_frame, small_frame_corpus
from pqml.diversity import (LocalKind, are_duplicates, diversity,
                            diversity_generated, duplicate_structure,
                            m_diamond_quotient, quotient_to_dot)
from pqml.frames import KripkeFrame
from pqml.gallery import clique, cyclic, d45_point, identity, k5_frame

chain2 = KripkeFrame(["0", "1"], [(0, 1)])


def coidentity3():
    return KripkeFrame(["0", "1", "2"],
                       [(i, j) for i in range(3) for j in range(3) if i != j])


class TestAreDuplicates:
    def test_clique_pairs(self):
        frame = clique(4).base
        for w in range(4):
            for u in range(4):
                assert are_duplicates(frame, w, u)

    def test_chain_direction(self):
        assert not are_duplicates(chain2, 0, 1)

    def test_cycle_pairs(self):
        frame = cyclic(3).base
        for w in range(3):
            for u in range(3):
                assert are_duplicates(frame, w, u) == (w == u)

    def test_self(self):
        assert are_duplicates(chain2, 1, 1)

    def test_equivalence_exhaustive_small(self):
        for n in (1, 2, 3):
            for frame in all_frames(n):
                for w in range(n):
                    assert are_duplicates(frame, w, w)
                    for u in range(n):
                        assert are_duplicates(frame, w, u) == \
                            are_duplicates(frame, u, w)
                        for x in range(n):
                            if are_duplicates(frame, w, u) and \
                                    are_duplicates(frame, u, x):
                                assert are_duplicates(frame, w, x)

    def test_equivalence_random_larger(self):
        rng = random.Random(30)
        for _ in range(60):
            frame = random_frame(rng, rng.randint(4, 6))
            n = frame.n
            for w in range(n):
                for u in range(n):
                    for x in range(n):
                        if are_duplicates(frame, w, u) and \
                                are_duplicates(frame, u, x):
                            assert are_duplicates(frame, w, x)


class TestDuplicateStructure:
    def test_root_seen_unseen(self):
        frame = k5_frame(1, 2).base
        ds = duplicate_structure(frame)
        classes = [frame.set_names(c) for c in ds.classes]
        assert classes == [["r"], ["u0"], ["v0", "v1"]]

    def test_identity_frame(self):
        ds = duplicate_structure(identity(3).base)
        assert ds.diversity == 1
        assert ds.local_kind == (LocalKind.IDENTITY,)

    def test_clique_frame(self):
        ds = duplicate_structure(clique(4).base)
        assert ds.diversity == 1
        assert ds.local_kind == (LocalKind.FULL,)

    def test_coidentity_frame(self):
        ds = duplicate_structure(coidentity3())
        assert ds.diversity == 1
        assert ds.local_kind == (LocalKind.COIDENTITY,)

    def test_singleton_kinds(self):
        loop = KripkeFrame(["a"], [("a", "a")])
        bare = KripkeFrame(["a"], [])
        assert duplicate_structure(loop).local_kind == (LocalKind.FULL,)
        assert duplicate_structure(bare).local_kind == (LocalKind.EMPTY,)

    def test_four_cases_exhaust_small_frames(self):
        for n in (1, 2, 3):
            for frame in all_frames(n):
                duplicate_structure(frame)  # raises on an impossible shape

    def test_four_cases_random(self):
        rng = random.Random(31)
        for _ in range(300):
            duplicate_structure(random_frame(rng, rng.randint(4, 6)))

    def test_quotient_includes_self_iff_inhabited(self):
        ds = duplicate_structure(coidentity3())
        assert ds.quotient_rel[0] & 1
        ds2 = duplicate_structure(KripkeFrame(["a", "b"], []))
        assert ds2.quotient_rel[0] == 0


class TestDiversity:
    def test_cycles(self):
        # the 2-cycle degenerates: swapping its two worlds is an
        # automorphism, so they are duplicates
        assert diversity(cyclic(1).base) == 1
        assert diversity(cyclic(2).base) == 1
        for n in range(3, 9):
            assert diversity(cyclic(n).base) == n

    def test_cliques(self):
        for n in range(1, 7):
            assert diversity(clique(n).base) == 1

    def test_diversity_at_most_size(self):
        rng = random.Random(32)
        for _ in range(50):
            frame = random_frame(rng, rng.randint(1, 6))
            assert 1 <= diversity(frame) <= frame.n


class TestDiversityGenerated:
    def test_disjoint_cliques(self):
        names = ["a0", "a1", "b0", "b1", "b2"]
        edges = [(i, j) for i in range(2) for j in range(2)]
        edges += [(i, j) for i in range(2, 5) for j in range(2, 5)]
        frame = KripkeFrame(names, edges)
        assert diversity(frame) == 2      # two classes in the whole frame
        assert diversity_generated(frame) == 1  # but each part is a clique

    def test_point_at_clique(self):
        assert diversity_generated(d45_point(3).base) == 2

    def test_single_irreflexive_point(self):
        assert diversity_generated(KripkeFrame(["a"], [])) == 1


class TestQuotientDiamond:
    def test_clique_nonempty_gives_class(self):
        frame = clique(3).base
        ds = duplicate_structure(frame)
        assert m_diamond_quotient(ds, frame, 0b010) == 0b111

    def test_coidentity_singleton(self):
        frame = coidentity3()
        ds = duplicate_structure(frame)
        assert m_diamond_quotient(ds, frame, 0b001) == 0b110

    def test_coidentity_trichotomy(self):
        frame = coidentity3()
        ds = duplicate_structure(frame)
        assert m_diamond_quotient(ds, frame, 0b000) == 0
        assert m_diamond_quotient(ds, frame, 0b011) == 0b111

    def test_identity_no_trigger(self):
        frame = identity(3).base
        ds = duplicate_structure(frame)
        assert m_diamond_quotient(ds, frame, 0b101) == 0b101

    def test_matches_direct_exhaustive(self):
        for n in (1, 2):
            for frame in all_frames(n):
                ds = duplicate_structure(frame)
                for x in range(1 << n):
                    assert m_diamond_quotient(ds, frame, x) == frame.m_diamond(x)

    def test_matches_direct_random(self):
        rng = random.Random(33)
        for _ in range(150):
            frame = random_frame(rng, rng.randint(3, 6))
            ds = duplicate_structure(frame)
            for x in range(1 << frame.n):
                assert m_diamond_quotient(ds, frame, x) == frame.m_diamond(x)


class TestQuotientDot:
    def test_contains_kinds_and_edges(self):
        frame = k5_frame(1, 2).base
        ds = duplicate_structure(frame)
        dot = quotient_to_dot(ds, frame)
        assert "empty" in dot and "full" in dot
        assert "D0 -> D1;" in dot


class TestCorpusShapes:
    def test_small_corpus_structures_are_consistent(self):
        for frame in small_frame_corpus():
            ds = duplicate_structure(frame)
            assert sum(c.bit_count() for c in ds.classes) == frame.n
