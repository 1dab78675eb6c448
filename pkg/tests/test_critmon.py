import contextlib
import io
import json
import os
import tempfile
import unittest
from unittest import mock

import numpy as np

import critmon
from critmon import cli, groebner, invariants, linalg, northcott, numsgp

# instances used throughout
TORSION_4 = dict(n=4, diag=(2, 2, 4), xn=(1, 2, 1), mvec=(1, 2, 1))
FIVE = dict(n=5, diag=(1, 2, 3, 4), xn=(5, 2, 3, 4), mvec=(1, 1, 1, 1))
THREE_FOUR_FIVE = dict(n=3, diag=(1, 1), xn=(2, 1), mvec=(1, 1))
ALL_ONES_3 = dict(n=3, diag=(1, 1), xn=(1, 1), mvec=(1, 1))


def instance(d):
    return northcott.validate(d["n"], d["diag"], d["xn"], d["mvec"])


class TestLinalg(unittest.TestCase):
    def test_snf_torsion(self):
        M = [[3, 0, -1, -1], [-1, 4, 0, -2], [0, -2, 5, -1], [-2, -2, -4, 4]]
        s = linalg.smith_normal_form(M)
        assert s.invariant_factors == (1, 1, 2, 0)
        assert s.rank == 3
        assert np.array_equal(s.U.dot(np.array(M, dtype=object)).dot(s.V), s.D)

    def test_snf_small(self):
        assert linalg.smith_normal_form(np.eye(3, dtype=int)).invariant_factors == (1, 1, 1)
        s = linalg.smith_normal_form([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
        assert s.invariant_factors == (1, 3, 0)
        assert linalg.smith_normal_form([[2, 0], [0, 3]]).invariant_factors == (1, 6)
        s = linalg.smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        assert s.invariant_factors == (2, 6, 12)

    def test_snf_shapes(self):
        s = linalg.smith_normal_form([[0, 0], [0, 0]])
        assert s.invariant_factors == (0, 0)
        assert s.rank == 0
        s = linalg.smith_normal_form([[2, 4, 6]])
        assert s.invariant_factors == (2,)
        assert s.V.shape == (3, 3)
        assert np.array_equal(s.V.dot(s.V_inv), np.eye(3, dtype=int))

    def test_snf_big_entries(self):
        big = 10**30
        s = linalg.smith_normal_form([[big, 0], [0, big * 3]])
        assert s.invariant_factors == (big, 3 * big)

    def test_snf_rejects_bad_matrix(self):
        with self.assertRaises(ValueError):
            linalg.smith_normal_form([])
        with self.assertRaises(ValueError):
            linalg.smith_normal_form([[1, 2], [3]])

    def test_row_lattice(self):
        M = [[3, 0, -1, -1], [-1, 4, 0, -2], [0, -2, 5, -1], [-2, -2, -4, 4]]
        assert linalg.row_lattice_contains(M, (0, 0, 0, 0))
        assert linalg.row_lattice_contains(M, (3, 0, -1, -1))
        assert linalg.row_lattice_contains(M, (2, 4, -1, -3))
        assert not linalg.row_lattice_contains(M, (1, 0, 0, 0))
        assert linalg.row_lattice_contains([[2, 0], [0, 3]], (4, 3))
        assert not linalg.row_lattice_contains([[2, 0], [0, 3]], (1, 0))
        with self.assertRaises(ValueError):
            linalg.row_lattice_contains(M, (1, 2))


class TestNorthcott(unittest.TestCase):
    def test_validate(self):
        e = instance(TORSION_4)
        assert e.critical_exponents == (3, 4, 5, 4)
        instance(ALL_ONES_3)
        with self.assertRaisesRegex(ValueError, "exponent must be positive"):
            northcott.validate(4, (2, 0, 4), (1, 2, 1), (1, 2, 1))
        with self.assertRaisesRegex(ValueError, "length mismatch"):
            northcott.validate(4, (2, 2), (1, 2, 1), (1, 2, 1))
        with self.assertRaisesRegex(ValueError, "at least 3"):
            northcott.validate(2, (1,), (1,), (1,))

    def test_json(self):
        e = instance(FIVE)
        assert northcott.NorthcottExponents.from_json(e.to_json()) == e
        with self.assertRaisesRegex(ValueError, "missing"):
            northcott.NorthcottExponents.from_json({"n": 3, "diag": [1, 1]})

    def test_binomials(self):
        assert northcott.binomials(instance(TORSION_4)).formatted() == [
            "x_1^3-x_3x_4",
            "x_2^4-x_1x_4^2",
            "x_3^5-x_2^2x_4",
            "x_1^2x_2^2x_3^4-x_4^4",
        ]
        assert northcott.binomials(instance(ALL_ONES_3)).formatted() == [
            "x_1^2-x_2x_3",
            "x_2^2-x_1x_3",
            "x_1x_2-x_3^2",
        ]
        five = northcott.binomials(instance(FIVE)).formatted()
        assert five[0] == "x_1^2-x_4x_5^5"
        assert five[-1] == "x_1x_2^2x_3^3x_4^4-x_5^14"

    def test_defining_matrix(self):
        M = northcott.defining_matrix(instance(TORSION_4))
        assert M.tolist() == [
            [3, 0, -1, -1],
            [-1, 4, 0, -2],
            [0, -2, 5, -1],
            [-2, -2, -4, 4],
        ]
        M = northcott.defining_matrix(instance(ALL_ONES_3))
        assert M.tolist() == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
        assert not M.flags.writeable

    def test_presentation_torsion(self):
        e = instance(TORSION_4)
        p = northcott.monoid_presentation(e)
        assert p.invariant_factors == (1, 1, 2, 0)
        assert p.weight == (14, 18, 13, 29)
        assert p.torsion == (2,)
        assert not p.is_numerical
        # every relation holds in Z/2 x Z
        for lhs, rhs in northcott.binomials(e).relations:
            left = [sum(u * g[k] for u, g in zip(lhs, p.generators)) for k in range(2)]
            right = [sum(u * g[k] for u, g in zip(rhs, p.generators)) for k in range(2)]
            assert (left[0] - right[0]) % 2 == 0
            assert left[1] == right[1]
        with self.assertRaises(ValueError):
            p.semigroup_generators

    def test_presentation_numerical(self):
        p = northcott.monoid_presentation(instance(FIVE))
        assert p.is_numerical
        assert p.semigroup_generators == (359, 199, 139, 123, 119)
        p = northcott.monoid_presentation(instance(THREE_FOUR_FIVE))
        assert p.semigroup_generators == (5, 4, 3)
        p = northcott.monoid_presentation(northcott.family_instance(4))
        assert p.semigroup_generators == (11, 9, 8, 7)

    def test_relations_hold(self):
        e = instance(FIVE)
        a = northcott.monoid_presentation(e).weight
        for lhs, rhs in northcott.binomials(e).relations:
            assert sum(u * w for u, w in zip(lhs, a)) == sum(u * w for u, w in zip(rhs, a))

    def test_numerical_test(self):
        t = northcott.numerical_test(northcott.family_instance(4))
        assert t.is_numerical
        assert t.formula_gcd == 1
        t = northcott.numerical_test(instance(ALL_ONES_3))
        assert not t.is_numerical
        assert t.formula_gcd == 3
        assert northcott.numerical_test(instance(FIVE)).is_numerical
        # formula only applies to mvec = 1
        assert northcott.numerical_test(instance(TORSION_4)).formula_gcd is None

    def test_minors(self):
        assert northcott.minor_generators(instance(FIVE)) == (359, 199, 139, 123, 119)
        assert northcott.minor_generators(northcott.family_instance(4)) == (11, 9, 8, 7)
        assert northcott.minor_generators(instance(ALL_ONES_3)) == (3, 3, 3)
        with self.assertRaises(ValueError):
            northcott.minor_generators(instance(TORSION_4))

    def test_saturation(self):
        s = northcott.saturation_index(instance(TORSION_4))
        assert s.index == 2 and not s.is_prime
        s = northcott.saturation_index(instance(FIVE))
        assert s.index == 1 and s.is_prime
        s = northcott.saturation_index(instance(ALL_ONES_3))
        assert s.index == 3 and not s.is_prime

    def test_family(self):
        # generators 2^{n-1} + sum_{k<=n-3} 2^k, ..., 2^{n-1} + 1, 2^{n-1}, 2^{n-1} - 1
        for n in range(3, 8):
            top = 2 ** (n - 1)
            expected = tuple(top + sum(2**k for k in range(j)) for j in range(n - 2, -1, -1))
            expected += (top - 1,)
            a = northcott.monoid_presentation(northcott.family_instance(n)).weight
            assert a == expected, n


class TestInvariants(unittest.TestCase):
    def test_apery(self):
        assert invariants.apery_closed(instance(THREE_FOUR_FIVE)) == (0, 4, 5)
        ap = invariants.apery_closed(instance(FIVE))
        assert len(ap) == 119
        assert max(ap) - 119 == 1424
        assert invariants.apery_closed(northcott.family_instance(4)) == (
            0, 8, 9, 11, 17, 19, 20
        )

    def test_apery_rejects_torsion(self):
        with self.assertRaisesRegex(ValueError, "not numerical"):
            invariants.apery_closed(instance(TORSION_4))

    def test_closed_invariants(self):
        inv = invariants.invariants_closed(instance(FIVE))
        assert inv.pseudo_frobenius == (1188, 1348, 1408, 1424)
        assert inv.frobenius == 1424
        assert inv.genus == 767
        assert inv.type == 4
        inv = invariants.invariants_closed(instance(THREE_FOUR_FIVE))
        assert inv.max_apery == 9
        assert inv.pseudo_frobenius == (1, 2)
        assert inv.genus == 2 and inv.type == 2

    def test_genus_general_mvec(self):
        # mvec = (1, 2) presents <3, 4, 5> again, with a = (5, 3, 4)
        e = northcott.validate(3, (1, 1), (1, 1), (1, 2))
        assert northcott.monoid_presentation(e).weight == (5, 3, 4)
        inv = invariants.invariants_closed(e)
        assert inv.genus == 2
        assert inv.pseudo_frobenius == (1, 2)
        assert invariants.apery_closed(e) == (0, 3, 5, 6)

    def test_factorization(self):
        f = invariants.factorization_closed(instance(THREE_FOUR_FIVE))
        assert f.gaps == (1, 0, 1)
        assert (f.delta_min, f.delta_max, f.catenary) == (1, 1, 3)
        f = invariants.factorization_closed(instance(FIVE))
        assert f.gaps == (4, 0, 0, 0, 4)
        assert (f.delta_min, f.delta_max, f.catenary) == (4, 4, 14)
        # every relation balanced: half-factorial
        f = invariants.factorization_closed(northcott.validate(3, (1, 1), (1, 1), (1, 1)))
        assert f.delta_min is None and f.delta_max is None

    def test_wilf(self):
        assert invariants.wilf_margin(instance(THREE_FOUR_FIVE)) == 0
        assert invariants.wilf_margin(instance(FIVE)) == 1865

    def test_report(self):
        r = invariants.invariant_report(northcott.family_instance(4))
        assert r.generators == (11, 9, 8, 7)
        assert r.frobenius == 13
        assert r.pseudo_frobenius == (10, 12, 13)
        assert r.genus == 9
        assert (r.delta_min, r.delta_max, r.catenary) == (1, 1, 4)
        assert r.wilf_margin == 6
        d = r.to_dict()
        assert d["apery"] == [0, 8, 9, 11, 17, 19, 20]


class TestNumsgp(unittest.TestCase):
    def test_construct(self):
        S = numsgp.from_generators((3, 4, 5))
        assert S.frobenius == 2 and S.conductor == 3
        assert S.minimal_generators == (3, 4, 5)
        assert S.gaps() == (1, 2)
        S = numsgp.from_generators((6, 10, 14, 21))
        assert S.minimal_generators == (6, 10, 14, 21)
        N = numsgp.from_generators((1,))
        assert N.frobenius == -1
        assert all(s in N for s in range(20))

    def test_minimal_generators_order(self):
        S = numsgp.from_generators((5, 3, 4, 8, 3))
        assert S.minimal_generators == (5, 3, 4)

    def test_bad_generators(self):
        with self.assertRaisesRegex(ValueError, "gcd"):
            numsgp.from_generators((4, 6))
        with self.assertRaises(ValueError):
            numsgp.from_generators((0, 1))
        with self.assertRaises(ValueError):
            numsgp.from_generators(())

    def test_membership(self):
        S = numsgp.from_generators((7, 11))
        # direct representability
        members = {7 * a + 11 * b for a in range(20) for b in range(20)}
        for s in range(S.conductor + 50):
            assert (s in S) == (s in members), s
        assert S.frobenius == 59
        assert -3 not in S
        table = S.membership(200)
        assert table.shape == (201,) and table[200]

    def test_apery(self):
        assert numsgp.apery(numsgp.from_generators((3, 4, 5)), 3) == (0, 4, 5)
        assert numsgp.apery(numsgp.from_generators((1,)), 1) == (0,)
        S = numsgp.from_generators((359, 199, 139, 123, 119))
        assert max(numsgp.apery(S, 119)) == 1543
        # 2 is a gap, so the set need not have 2 elements
        assert numsgp.apery(numsgp.from_generators((3, 4, 5)), 2) == (0, 3, 4)
        assert numsgp.apery(numsgp.from_generators((3, 4, 5)), 7) == (0, 3, 4, 5, 6, 8, 9)
        with self.assertRaises(ValueError):
            numsgp.apery(numsgp.from_generators((3, 4, 5)), 0)

    def test_basic_invariants(self):
        inv = numsgp.basic_invariants(numsgp.from_generators((3, 4, 5)))
        assert (inv.frobenius, inv.genus, inv.pseudo_frobenius, inv.type) == (2, 2, (1, 2), 2)
        inv = numsgp.basic_invariants(numsgp.from_generators((1,)))
        assert (inv.frobenius, inv.genus, inv.pseudo_frobenius, inv.type) == (-1, 0, (-1,), 1)
        S = numsgp.from_generators((11, 13, 14, 15, 19))
        inv = numsgp.basic_invariants(S)
        assert inv.genus == len(S.gaps())
        assert inv.frobenius == max(S.gaps())

    def test_factorizations(self):
        fs = numsgp.factorizations(numsgp.from_generators((3, 5, 7)), 21)
        assert set(fs.factorizations) == {(7, 0, 0), (2, 3, 0), (3, 1, 1), (0, 0, 3)}
        fs = numsgp.factorizations(numsgp.from_generators((5, 4, 3)), 10)
        assert set(fs.factorizations) == {(2, 0, 0), (0, 1, 2)}
        fs = numsgp.factorizations(numsgp.from_generators((5, 4, 3)), 0)
        assert fs.factorizations == ((0, 0, 0),)
        with self.assertRaises(ValueError):
            numsgp.factorizations(numsgp.from_generators((3, 4, 5)), 2)

    def test_presentation(self):
        p = numsgp.betti_and_presentation(numsgp.from_generators((3, 4, 5)))
        assert p.betti_elements == (8, 9, 10)
        assert p.uniquely_presented
        assert len(p.relations) == 3
        S = numsgp.from_generators((11, 13, 14, 15, 19))
        p = numsgp.betti_and_presentation(S)
        assert p.betti_elements == (26, 28, 30, 33, 38)
        pairs = {frozenset(uv) for _, uv in p.relations}
        assert frozenset([(0, 0, 0, 2, 0), (1, 0, 0, 0, 1)]) in pairs
        assert len(pairs) == 5
        assert not numsgp.is_uniquely_presented(numsgp.from_generators((6, 10, 14, 21)))
        assert numsgp.betti_elements(numsgp.from_generators((1,))) == ()

    def test_delta_and_catenary(self):
        f = numsgp.delta_and_catenary(numsgp.from_generators((3, 4, 5)))
        assert (f.delta_min, f.delta_max, f.catenary) == (1, 1, 3)
        f = numsgp.delta_and_catenary(numsgp.from_generators((2, 3)))
        assert (f.delta_min, f.delta_max, f.catenary) == (1, 1, 3)
        f = numsgp.delta_and_catenary(numsgp.from_generators((1,)))
        assert (f.delta_min, f.delta_max, f.catenary) == (None, None, 0)
        S = numsgp.from_generators((6, 10, 14, 21))
        f = numsgp.delta_and_catenary(S)
        worst = max(
            numsgp._element_catenary(numsgp.factorizations(S, b).factorizations)
            for b in numsgp.betti_elements(S)
        )
        assert f.catenary == worst

    def test_glue(self):
        g = numsgp.glue(
            numsgp.from_generators((3, 5, 7)), numsgp.from_generators((1,)), 2, 21
        )
        assert g.semigroup.minimal_generators == (6, 10, 14, 21)
        assert g.parts == ((6, 10, 14), (21,))
        assert g.relation == ((7, 0, 0), (2,))
        assert numsgp.detect_gluing(g.semigroup) == [((6, 10, 14), (21,))]
        N = numsgp.from_generators((1,))
        assert numsgp.glue(N, N, 2, 3).semigroup.minimal_generators == (2, 3)
        with self.assertRaisesRegex(ValueError, "mu = 5"):
            numsgp.glue(numsgp.from_generators((3, 5, 7)), N, 2, 5)
        with self.assertRaisesRegex(ValueError, "gcd"):
            numsgp.glue(numsgp.from_generators((3, 5, 7)), N, 2, 10)

    def test_detect_gluing(self):
        assert numsgp.detect_gluing(numsgp.from_generators((2, 3))) == [((2,), (3,))]
        assert numsgp.detect_gluing(numsgp.from_generators((11, 13, 14, 15, 19))) == []

    def test_critical_exponents(self):
        assert numsgp.critical_exponents(numsgp.from_generators((3, 4, 5))) == (3, 2, 2)
        assert numsgp.critical_exponents(numsgp.from_generators((6, 10, 14, 21)))[3] == 2
        assert numsgp.critical_exponents(numsgp.from_generators((2, 3))) == (3, 2)
        assert numsgp.critical_exponents(numsgp.from_generators((1,))) == ()
        e = instance(FIVE)
        S = numsgp.from_generators(northcott.monoid_presentation(e).weight)
        assert numsgp.critical_exponents(S) == e.critical_exponents

    def test_is_critical(self):
        assert numsgp.is_critical(numsgp.from_generators((3, 4, 5)))
        assert numsgp.is_critical(numsgp.from_generators((2, 3)))
        assert numsgp.is_critical(numsgp.from_generators((1,))) is False
        # every Betti element is a pure power with exactly two factorizations
        assert numsgp.is_critical(numsgp.from_generators((11, 13, 14, 15, 19))) is True
        # 18 = 3*6 = 2*9 = 8+10 has three classes, joined by the powers of 6 and 9
        g = numsgp.glue(
            numsgp.from_generators((3, 4, 5)), numsgp.from_generators((1,)), 2, 9
        )
        assert g.semigroup.minimal_generators == (6, 8, 10, 9)
        assert numsgp.is_critical(g.semigroup) is True

    def test_glue_pure_multiple_not_critical(self):
        # mu = 15 = 3*5 lowers the critical exponent of 10 to 3, so the
        # Betti element 60 = 6*10 = 18+42 carries no critical binomial
        S1 = numsgp.from_generators((5, 9, 21))
        assert numsgp.is_critical(S1) is True
        g = numsgp.glue(S1, numsgp.from_generators((1,)), 2, 15)
        S = g.semigroup
        assert S.minimal_generators == (10, 18, 42, 15)
        assert numsgp.critical_exponents(S)[0] == 3
        assert 60 in numsgp.betti_elements(S)
        assert numsgp.is_critical(S) is False

    def test_is_critical_cap(self):
        config = numsgp.OracleConfig(critical_search_cap=0)
        S = numsgp.NumericalSemigroup((3, 4, 5), config)
        with self.assertWarns(UserWarning):
            assert numsgp.is_critical(S) is None

    def test_wilf(self):
        assert numsgp.wilf_margin(numsgp.from_generators((3, 4, 5))) == 0
        assert numsgp.wilf_margin(numsgp.from_generators((359, 199, 139, 123, 119))) == 1865


class TestGroebner(unittest.TestCase):
    def test_compare(self):
        order = groebner.WeightedOrder((5, 4, 3))
        assert groebner.compare(order, (2, 0, 0), (0, 1, 1)) == 1
        assert groebner.compare(order, (0, 2, 0), (1, 0, 1)) == 1
        assert groebner.compare(order, (1, 0, 1), (0, 2, 0)) == -1
        assert groebner.compare(order, (1, 1, 1), (1, 1, 1)) == 0
        with self.assertRaises(ValueError):
            groebner.compare(order, (1, 1), (1, 1, 1))

    def test_tiebreaks(self):
        # equal weight and x_n exponent: revlex and lex can disagree
        revlex = groebner.WeightedOrder((1, 1, 1, 1))
        lex = groebner.WeightedOrder((1, 1, 1, 1), "lex")
        assert groebner.compare(revlex, (2, 0, 1, 0), (1, 2, 0, 0)) == -1
        assert groebner.compare(lex, (2, 0, 1, 0), (1, 2, 0, 0)) == 1
        with self.assertRaises(ValueError):
            groebner.WeightedOrder((1, 1), "deglex")

    def test_s_polynomial(self):
        e = instance(TORSION_4)
        order = groebner.WeightedOrder(northcott.monoid_presentation(e).weight)
        G = [groebner.PureBinomial(l, r) for l, r in northcott.binomials(e).relations]
        s = groebner.s_polynomial(G[0], G[3], order)
        assert s is not None
        assert s.is_homogeneous(order.weight)
        assert groebner.reduce(s, G, order) is None
        assert groebner.s_polynomial(G[1], G[1], order) is None

    def test_reduce(self):
        e = instance(FIVE)
        order = groebner.WeightedOrder(northcott.monoid_presentation(e).weight)
        G = [groebner.PureBinomial(l, r) for l, r in northcott.binomials(e).relations]
        assert groebner.reduce(G[0], [G[0]], order) is None
        assert groebner.reduce(G[2].times((1, 0, 2, 0, 3)), G, order) is None
        for f in G[:-1]:
            s = groebner.s_polynomial(f, G[-1], order)
            assert s is None or groebner.reduce(s, G, order) is None

    def test_pure_binomial(self):
        with self.assertRaises(ValueError):
            groebner.PureBinomial((1, 0), (1, 0))
        assert str(groebner.PureBinomial((2, 0, 0), (0, 1, 1))) == "x_1^2-x_2x_3"

    def test_verify(self):
        r = groebner.verify_groebner(instance(TORSION_4))
        assert r.is_basis
        r = groebner.verify_groebner(instance(FIVE))
        assert r.is_basis
        assert r.initial_gens == (
            (2, 0, 0, 0, 0),
            (0, 3, 0, 0, 0),
            (0, 0, 4, 0, 0),
            (0, 0, 0, 5, 0),
            (1, 2, 3, 4, 0),
        )
        r = groebner.verify_groebner(instance(THREE_FOUR_FIVE))
        assert set(r.initial_gens) == {(2, 0, 0), (0, 2, 0), (1, 1, 0)}
        lex = groebner.verify_groebner(instance(FIVE), tiebreak="lex")
        assert lex.is_basis and lex.initial_gens == groebner.verify_groebner(instance(FIVE)).initial_gens

    def test_standard_monomials(self):
        e = northcott.family_instance(4)
        p = northcott.monoid_presentation(e)
        r = groebner.verify_groebner(e, p)
        std = groebner.standard_monomials(r.initial_gens, e.n)
        values = sorted(sum(u * a for u, a in zip(m, p.weight)) for m in std)
        assert tuple(values) == invariants.apery_closed(e, p)
        with self.assertRaises(ValueError):
            groebner.standard_monomials([(1, 1, 0)], 3)


def run_cli(*argv):
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(list(argv))
    return code, out.getvalue(), err.getvalue()


def flags(d):
    return [
        "--n",
        str(d["n"]),
        "--diag",
        ",".join(map(str, d["diag"])),
        "--xn",
        ",".join(map(str, d["xn"])),
        "--mvec",
        ",".join(map(str, d["mvec"])),
    ]


class TestCli(unittest.TestCase):
    def test_construct(self):
        code, out, _ = run_cli("construct", *flags(FIVE))
        assert code == 0
        data = json.loads(out)
        assert data["schema"] == "critmon-1"
        assert data["presentation"]["generators"] == [359, 199, 139, 123, 119]
        code, out, _ = run_cli("construct", *flags(TORSION_4))
        data = json.loads(out)
        assert data["presentation"]["torsion"] == [2]
        assert data["is_prime"] is False
        code, out, _ = run_cli("construct", *flags(ALL_ONES_3))
        data = json.loads(out)
        assert data["presentation"]["is_numerical"] is False
        assert data["presentation"]["torsion"] == [3]

    def test_threads(self):
        with mock.patch.dict(os.environ):
            os.environ.pop("CRITMON_THREADS", None)
            with mock.patch("os.cpu_count", return_value=32):
                assert cli._threads() == 8
            with mock.patch("os.cpu_count", return_value=None):
                assert cli._threads() == 1
            os.environ["CRITMON_THREADS"] = "12"
            assert cli._threads() == 12
            os.environ["CRITMON_THREADS"] = "0"
            with self.assertRaises(ValueError):
                cli._threads()

    def test_construct_bad_input(self):
        bad = dict(TORSION_4, diag=(2, 0, 4))
        code, _, err = run_cli("construct", *flags(bad))
        assert code == 2
        assert "exponent must be positive" in err
        code, _, _ = run_cli("construct", "--n", "4")
        assert code == 2

    def test_invariants(self):
        code, out, _ = run_cli("invariants", *flags(FIVE))
        assert code == 0
        report = json.loads(out)["report"]
        assert set(report) == set(cli.REPORT_KEYS)
        assert report["pf"] == [1188, 1348, 1408, 1424]
        assert report["genus"] == 767
        assert "oracle" not in json.loads(out)

    def test_invariants_oracle(self):
        code, out, _ = run_cli("invariants", "--oracle", *flags(THREE_FOUR_FIVE))
        assert code == 0
        data = json.loads(out)
        assert data["oracle"]["mismatches"] == []
        assert data["oracle"]["values"]["betti_elements"] == [8, 9, 10]

    def test_invariants_torsion(self):
        code, out, _ = run_cli("invariants", "--oracle", *flags(TORSION_4))
        assert code == 0
        data = json.loads(out)
        assert data["report"]["apery"] is None
        assert data["report"]["is_prime"] is False
        assert "oracle" not in data

    def test_invariants_batch(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "batch.jsonl")
            with open(path, "w") as f:
                for d in (THREE_FOUR_FIVE, FIVE, TORSION_4):
                    f.write(json.dumps(instance(d).to_json()) + "\n")
            os.environ["CRITMON_THREADS"] = "2"
            try:
                code, out, _ = run_cli("invariants", "--instance", path, "--oracle")
            finally:
                del os.environ["CRITMON_THREADS"]
        assert code == 0
        lines = [json.loads(l) for l in out.splitlines()]
        assert [l["instance"]["n"] for l in lines] == [3, 5, 4]
        assert lines[1]["report"]["frobenius"] == 1424

    def test_invariants_batch_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "batch.jsonl")
            with open(path, "w") as f:
                f.write(json.dumps(instance(FIVE).to_json()) + "\n")
                f.write(json.dumps({"n": 3, "diag": [1, 0], "xn": [1, 1], "mvec": [1, 1]}) + "\n")
            code, out, _ = run_cli("invariants", "--instance", path)
        assert code == 2
        assert "error" in json.loads(out.splitlines()[1])

    def test_glue(self):
        code, out, _ = run_cli("glue", "--s1", "3,5,7", "--s2", "1", "--lam", "2", "--mu", "21")
        assert code == 0
        data = json.loads(out)
        assert data["generators"] == [6, 10, 14, 21]
        assert data["uniquely_presented"] is False
        assert data["gluings"] == [[[6, 10, 14], [21]]]
        code, _, err = run_cli("glue", "--s1", "3,5,7", "--s2", "1", "--lam", "2", "--mu", "5")
        assert code == 2

    def test_presentation(self):
        code, out, _ = run_cli("presentation", "--gens", "11,13,14,15,19")
        assert code == 0
        data = json.loads(out)
        assert len(data["relations"]) == 5
        assert [[1, 0, 0, 0, 1], [0, 0, 0, 2, 0]] in data["relations"]
        assert data["gluings"] == []
        code, _, _ = run_cli("presentation", "--gens", "4,6")
        assert code == 2

    def test_search(self):
        args = ("search", "--n", "4", "--max-exp", "3", "--numerical-only", "--seed", "7", "--count", "10")
        code, first, _ = run_cli(*args)
        assert code == 0
        _, second, _ = run_cli(*args)
        assert first == second
        lines = first.splitlines()
        assert len(lines) == 10
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "batch.jsonl")
            with open(path, "w") as f:
                f.write(first + "\n")
            code, _, _ = run_cli("invariants", "--instance", path, "--oracle")
        assert code == 0

    def test_verify(self):
        code, out, _ = run_cli("verify", *flags(TORSION_4))
        assert code == 0
        assert json.loads(out)["is_basis"] is True

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "out.json")
            code, out, _ = run_cli("construct", *flags(FIVE), "--out", path)
            assert code == 0 and out == ""
            with open(path) as f:
                assert json.load(f)["instance"]["n"] == 5


class TestApi(unittest.TestCase):
    def test_exports(self):
        e = critmon.family_instance(3)
        p = critmon.monoid_presentation(e)
        S = critmon.from_generators(p.weight)
        assert critmon.apery(S, p.weight[-1]) == critmon.apery_closed(e, p)
