import json
import tempfile
import unittest
from pathlib import Path

import numpy as np

from pseudoquandle_app.config import Limits
from pseudoquandle_app.documents import write_document
from pseudoquandle_app.errors import BadMap, BadParameter, ParseError, SizeLimit
from pseudoquandle_app.group_core import build_group
from pseudoquandle_app.pseudoquandle import (
    MAGMA_ONLY,
    PSEUDOQUANDLE,
    QUANDLE,
    RACK,
    build_example,
    build_pg,
    build_source,
    check_axioms,
    check_homomorphism,
    direct_sum,
    find_isomorphism,
    make_magma,
    max_chain,
    min_chain,
    right_translation,
    translation_solutions,
)


class NormalSubgroupPseudoquandleTests(unittest.TestCase):
    def test_quaternion_counterexample(self):
        m = build_pg(build_group("Q8"))
        report = check_axioms(m)
        self.assertEqual(m.size, 6)
        self.assertEqual(report.classification, PSEUDOQUANDLE)
        self.assertEqual(report.right_translations_bijective.witness, (2, 3))
        self.assertEqual(report.bijectivity_solutions, ())
        self.assertEqual(m.labels[2], "{1,-1,i,-i}")
        self.assertEqual(m.labels[3], "{1,-1,j,-j}")
        self.assertEqual(translation_solutions(m, 2, 3), ())
        self.assertEqual(m.product(2, 3), 5)

    def test_normal_subgroup_structure_is_commutative_and_distributive(self):
        for spec in ("Q8", "S4", "Z12", "D8", "Z2xZ2"):
            with self.subTest(spec=spec):
                report = check_axioms(build_pg(build_group(spec)))
                self.assertTrue(report.idempotent.holds)
                self.assertTrue(report.commutative.holds)
                self.assertTrue(report.right_self_distributive.holds)
                self.assertTrue(report.left_self_distributive.holds)

    def test_trivial_subgroup_comes_first(self):
        m = build_pg(build_group("Z4"))
        np.testing.assert_array_equal(m.op, [[0, 1, 2], [1, 1, 2], [2, 2, 2]])
        self.assertEqual(m.provenance, "P_G of Z4")

    def test_subgroup_cap(self):
        with self.assertRaises(SizeLimit):
            build_pg(build_group("Z2xZ2xZ2"), Limits(max_subgroups=4))


class FamilyTests(unittest.TestCase):
    def test_quandle_families(self):
        for source in ("dihedral:3", "trivial:1", "trivial:3", "alexander:5:2", "symplectic:3", "conj:S3", "conj:D8:2"):
            with self.subTest(source=source):
                self.assertEqual(check_axioms(build_source(source)).classification, QUANDLE)

    def test_dihedral_formula(self):
        m = build_example("dihedral", 3)
        np.testing.assert_array_equal(m.op, [[0, 2, 1], [2, 1, 0], [1, 0, 2]])
        np.testing.assert_array_equal(build_source("formula:3:2*b - a").op, m.op)

    def test_rack_and_plain_magma(self):
        self.assertEqual(check_axioms(build_source("formula:3:a + 1")).classification, RACK)
        self.assertEqual(check_axioms(build_source("formula:3:a + b")).classification, MAGMA_ONLY)

    def test_bad_parameters(self):
        with self.assertRaises(BadParameter):
            build_example("alexander", 4, 2)
        with self.assertRaises(BadParameter):
            build_example("symplectic", 4)
        with self.assertRaises(BadParameter):
            build_example("dihedral", 0)
        with self.assertRaises(BadParameter):
            build_source("formula:3:__import__('os')")
        with self.assertRaises(BadParameter):
            build_source("formula:3:a // (b - b)")
        with self.assertRaises(BadParameter):
            build_source("formula:4:a ** -1")

    def test_formula_powers_are_exact(self):
        m = build_source("formula:3:a**64")
        self.assertEqual(m.op[2].tolist(), [pow(2, 64, 3)] * 3)
        m = build_source("formula:7:a**(10**20) + b*b*b*b*b*b*b*b*b*b*b*b*b*b*b*b*b*b*b*b*b*b*b")
        expected = [[(pow(a, 10**20, 7) + pow(b, 23)) % 7 for b in range(7)] for a in range(7)]
        self.assertEqual(m.op.tolist(), expected)

    def test_source_parse_errors(self):
        for source in ("nope:3", "trivial:x", "alexander:5", "trivial", "formula:3"):
            with self.subTest(source=source):
                with self.assertRaises(ParseError):
                    build_source(source)

    def test_conjugation_exponent(self):
        m = build_source("conj:S3:0")
        np.testing.assert_array_equal(m.op, np.repeat(np.arange(6)[:, None], 6, axis=1))

    def test_right_translation(self):
        m = build_example("dihedral", 3)
        self.assertEqual(right_translation(m, 0), (0, 2, 1))

    def test_magma_document_source(self):
        m = build_example("alexander", 5, 2)
        with tempfile.TemporaryDirectory() as tmp:
            path = write_document(m.to_document(), Path(tmp) / "alexander.json")
            loaded = build_source(f"file:{path}")
            self.assertEqual(json.loads(path.read_text(encoding="utf-8"))["size"], 5)
        np.testing.assert_array_equal(loaded.op, m.op)
        self.assertEqual(loaded.labels, m.labels)

    def test_make_magma_rejects_open_tables(self):
        with self.assertRaises(ParseError):
            make_magma([[0, 2], [1, 0]])
        with self.assertRaises(SizeLimit):
            make_magma(np.zeros((5, 5), dtype=int), limits=Limits(max_magma_size=4))


class SumAndChainTests(unittest.TestCase):
    def test_direct_sum(self):
        m = direct_sum(max_chain(3), max_chain(2))
        self.assertEqual(m.size, 6)
        self.assertEqual(m.labels[1], "(1,2)")
        self.assertEqual(m.product(1, 2), 3)
        self.assertEqual(check_axioms(m).classification, PSEUDOQUANDLE)

    def test_direct_sum_cap(self):
        with self.assertRaises(SizeLimit):
            direct_sum(max_chain(3), max_chain(3), Limits(max_magma_size=8))

    def test_max_and_min_chains_are_isomorphic(self):
        for k in range(1, 9):
            with self.subTest(k=k):
                reversal = [k - 1 - i for i in range(k)]
                self.assertTrue(check_homomorphism(max_chain(k), min_chain(k), reversal)[0])
                witness = find_isomorphism(max_chain(k), min_chain(k))
                self.assertIsNotNone(witness)
                self.assertTrue(witness.verified)


class IsomorphismTests(unittest.TestCase):
    def test_different_primes_same_exponent(self):
        witness = find_isomorphism(build_source("pg:Z4"), build_source("pg:Z9"))
        self.assertIsNotNone(witness)
        self.assertTrue(witness.verified)
        self.assertEqual(witness.mapping, (0, 1, 2))

    def test_trivial_and_dihedral_are_not_isomorphic(self):
        self.assertIsNone(find_isomorphism(build_source("trivial:3"), build_source("dihedral:3")))
        self.assertIsNone(find_isomorphism(build_source("trivial:3"), build_source("dihedral:3"), prune=False))

    def test_identity_witness(self):
        witness = find_isomorphism(build_source("trivial:2"), build_source("trivial:2"))
        self.assertEqual(witness.mapping, (0, 1))

    def test_size_mismatch_and_cap(self):
        self.assertIsNone(find_isomorphism(max_chain(2), max_chain(3)))
        with self.assertRaises(SizeLimit):
            find_isomorphism(max_chain(3), max_chain(3), limits=Limits(max_iso_size=2))

    def test_inverse_witness(self):
        a = direct_sum(max_chain(2), max_chain(3))
        b = direct_sum(max_chain(3), max_chain(2))
        witness = find_isomorphism(a, b)
        self.assertTrue(check_homomorphism(b, a, witness.inverse().mapping)[0])

    def test_pruned_matches_plain_search(self):
        sources = ("pg:Q8", "pg:S3", "dihedral:5", "trivial:4", "alexander:5:3", "pg:Z12", "formula:4:a + 1")
        magmas = [build_source(source) for source in sources]
        for a in magmas:
            for b in magmas:
                with self.subTest(a=a.provenance, b=b.provenance):
                    pruned = find_isomorphism(a, b)
                    plain = find_isomorphism(a, b, prune=False)
                    self.assertEqual(pruned is None, plain is None)
                    if pruned is not None:
                        self.assertTrue(pruned.verified and plain.verified)

    def test_relabelled_tables_are_always_found(self):
        rng = np.random.default_rng(20)
        tables = [np.array([[1, 2, 1], [2, 2, 0], [1, 0, 1]])]
        tables.extend(rng.integers(0, n, size=(n, n)) for n in rng.integers(1, 6, size=300))
        for index, table in enumerate(tables):
            a = make_magma(table)
            perms = [np.array(p) for p in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))]
            if a.size != 3:
                perms = [rng.permutation(a.size)]
            for perm in perms:
                relabelled = np.empty_like(table)
                relabelled[np.ix_(perm, perm)] = perm[table]
                b = make_magma(relabelled)
                for prune in (True, False):
                    with self.subTest(index=index, perm=perm.tolist(), prune=prune):
                        witness = find_isomorphism(a, b, prune=prune)
                        self.assertIsNotNone(witness)
                        self.assertTrue(witness.verified)
                        self.assertTrue(check_homomorphism(a, b, witness.mapping)[0])


class HomomorphismTests(unittest.TestCase):
    def test_projection_is_homomorphism(self):
        source = direct_sum(max_chain(3), max_chain(2))
        projection = [index // 2 for index in range(6)]
        self.assertEqual(check_homomorphism(source, max_chain(3), projection), (True, None))

    def test_failing_pair_is_reported(self):
        ok, witness = check_homomorphism(max_chain(2), max_chain(2), [1, 0])
        self.assertFalse(ok)
        self.assertEqual(witness, (0, 1))

    def test_bad_maps(self):
        with self.assertRaises(BadMap):
            check_homomorphism(max_chain(2), max_chain(2), [0])
        with self.assertRaises(BadMap):
            check_homomorphism(max_chain(2), max_chain(2), [0, 2])


if __name__ == "__main__":
    unittest.main()
