import unittest

from pseudoquandle_app.errors import NoChain, NotAHomomorphism
from pseudoquandle_app.kernels import (
    STATUS_PASS,
    STATUS_SKIPPED,
    TIER_ASSERTED,
    TIER_EMPIRICAL,
    class_equation,
    cokernel,
    detect_chain,
    kernel,
    kernel_subset_product,
    kernel_table,
    relative_cokernel,
    verify_hom_kernel_inclusion,
    verify_properties,
)
from pseudoquandle_app.pseudoquandle import build_source, direct_sum, find_isomorphism, max_chain


class KernelTests(unittest.TestCase):
    def setUp(self):
        self.dihedral = build_source("dihedral:3")
        self.chain = max_chain(4)

    def test_dihedral_kernel_and_cokernel(self):
        self.assertEqual(kernel(self.dihedral, 0), frozenset({0}))
        self.assertEqual(cokernel(self.dihedral, 0), frozenset({1, 2}))
        # x2 * x3 = x1 leaves the cokernel.
        self.assertEqual(self.dihedral.product(1, 2), 0)

    def test_trivial_quandle_kernels_are_singletons(self):
        m = build_source("trivial:4")
        for p in range(4):
            self.assertEqual(kernel(m, p), frozenset({p}))

    def test_max_chain_kernels(self):
        for i in range(4):
            self.assertEqual(kernel(self.chain, i), frozenset(range(i + 1)))
        self.assertEqual(cokernel(self.chain, 1), frozenset({2, 3}))

    def test_relative_cokernel(self):
        for k in range(3):
            self.assertEqual(relative_cokernel(self.chain, k, k + 1), frozenset({k + 1}))
        self.assertEqual(relative_cokernel(self.chain, 2, 2), frozenset())
        self.assertEqual(relative_cokernel(self.dihedral, 1, 0), frozenset())

    def test_kernel_table_of_quaternion_structure(self):
        kt = kernel_table(build_source("pg:Q8"))
        self.assertEqual(kt.ker(5), frozenset(range(6)))
        self.assertEqual(kt.ker(2), frozenset({0, 1, 2}))
        self.assertTrue(kt.commutative_source)
        for p in range(6):
            self.assertEqual(kt.ker(p) | kt.coker(p), frozenset(range(6)))
            self.assertFalse(kt.ker(p) & kt.coker(p))

    def test_subset_product(self):
        self.assertEqual(kernel_subset_product(self.chain, {0, 1}, {0, 1}), frozenset({0, 1}))
        self.assertEqual(kernel_subset_product(self.chain, {3}, {0, 1, 2}), frozenset({3}))
        self.assertEqual(kernel_subset_product(self.chain, set(), {0}), frozenset())


class ChainTests(unittest.TestCase):
    def test_cyclic_prime_power_has_chain(self):
        m = build_source("pg:Z8")
        chain = detect_chain(kernel_table(m))
        self.assertTrue(chain.chain_found)
        self.assertEqual(chain.ordering, (0, 1, 2, 3))
        equation = class_equation(m)
        self.assertEqual((equation.base, equation.increments, equation.total), (1, (1, 1, 1), 4))
        self.assertEqual(equation.render(), "4 = 1 + 1 + 1 + 1")

    def test_prime_powers_up_to_six(self):
        for n in range(1, 7):
            with self.subTest(n=n):
                equation = class_equation(build_source(f"pg:Z{2 ** n}"))
                self.assertEqual(equation.base, 1)
                self.assertEqual(equation.increments, (1,) * n)
                self.assertEqual(equation.total, n + 1)

    def test_dihedral_has_no_chain(self):
        m = build_source("dihedral:3")
        self.assertFalse(detect_chain(kernel_table(m)).chain_found)
        with self.assertRaises(NoChain):
            class_equation(m)

    def test_single_element(self):
        m = build_source("trivial:1")
        self.assertTrue(detect_chain(kernel_table(m)).chain_found)
        equation = class_equation(m)
        self.assertEqual((equation.base, equation.increments, equation.total), (1, (), 1))


class PropertyTests(unittest.TestCase):
    def test_quaternion_claims(self):
        report = verify_properties(build_source("pg:Q8"))
        self.assertTrue(report.ok)
        self.assertEqual(report.tier, TIER_ASSERTED)
        statuses = {name: check.status for name, check in report.by_name().items()}
        self.assertEqual(statuses.pop("coker_chain_closure"), STATUS_SKIPPED)
        self.assertTrue(all(status == STATUS_PASS for status in statuses.values()))
        self.assertEqual(len(report.checks), 11)

    def test_dihedral_claims(self):
        report = verify_properties(build_source("dihedral:3"))
        checks = report.by_name()
        self.assertEqual(report.tier, TIER_ASSERTED)
        self.assertEqual(checks["kernel_closure"].status, STATUS_PASS)
        self.assertEqual(checks["coker_chain_closure"].status, STATUS_SKIPPED)
        self.assertEqual(checks["phi_bijective"].status, STATUS_PASS)
        self.assertTrue(report.ok)

    def test_chain_structures_pass_everything(self):
        for m in (max_chain(5), build_source("pg:Z27"), direct_sum(max_chain(3), max_chain(2))):
            with self.subTest(source=m.provenance):
                report = verify_properties(m)
                self.assertTrue(report.ok)
                self.assertFalse(report.asserted_failures())

    def test_trivial_quandle_phi_is_injective(self):
        for n in range(1, 9):
            with self.subTest(n=n):
                checks = verify_properties(build_source(f"trivial:{n}")).by_name()
                self.assertEqual(checks["phi_bijective"].status, STATUS_PASS)

    def test_disjoint_kernels_fall_in_cokernels(self):
        # Every pair of kernels in T_4 is disjoint, so the lemma quantifies over all 12 ordered pairs.
        m = build_source("trivial:4")
        for p in range(4):
            for q in range(4):
                if p != q:
                    self.assertLessEqual(kernel(m, q), cokernel(m, p))
        check = verify_properties(m).by_name()["disjointness_lemma"]
        self.assertEqual(check.status, STATUS_PASS)
        self.assertIsNone(check.counterexample)

    def test_non_commutative_source_is_empirical(self):
        report = verify_properties(build_source("conj:S3"))
        self.assertFalse(report.commutative)
        self.assertEqual(report.tier, TIER_EMPIRICAL)
        self.assertTrue(report.ok)


class HomomorphismKernelTests(unittest.TestCase):
    def test_identity_map(self):
        m = build_source("pg:Q8")
        self.assertTrue(verify_hom_kernel_inclusion(m, m, list(range(m.size))))

    def test_projection(self):
        source = direct_sum(max_chain(3), max_chain(2))
        self.assertTrue(verify_hom_kernel_inclusion(source, max_chain(3), [index // 2 for index in range(6)]))

    def test_isomorphism_gives_equality(self):
        a, b = build_source("pg:Z4"), build_source("pg:Z9")
        witness = find_isomorphism(a, b)
        self.assertTrue(verify_hom_kernel_inclusion(a, b, witness.mapping))

    def test_rejects_non_homomorphism(self):
        with self.assertRaises(NotAHomomorphism):
            verify_hom_kernel_inclusion(max_chain(2), max_chain(2), [1, 0])


if __name__ == "__main__":
    unittest.main()
