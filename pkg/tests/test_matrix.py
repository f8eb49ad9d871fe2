import unittest

from pseudoquandle_app.errors import TheoremViolation
from pseudoquandle_app.matrix import PQMatrix, matrix_of, matrix_report, matrix_to_frame, render_matrix_text
from pseudoquandle_app.pseudoquandle import build_source, check_axioms


class MatrixTests(unittest.TestCase):
    def test_single_element(self):
        matrix = matrix_of(build_source("trivial:1"))
        self.assertEqual(matrix.entries, ((1,),))
        report = matrix_report(matrix)
        self.assertTrue(report.symmetric)
        self.assertEqual((report.trace, report.expected_trace), (1, 1))
        self.assertFalse(report.simple_form)

    def test_prime_cyclic_group_has_simple_form(self):
        matrix = matrix_of(build_source("pg:Z5"))
        self.assertEqual(matrix.entries, ((1, 2), (2, 2)))
        report = matrix_report(matrix, source_is_pg=True)
        self.assertTrue(report.simple_form)
        self.assertTrue(report.trace_ok)
        self.assertEqual(render_matrix_text(matrix), "1 2\n2 2")

    def test_prime_square_is_max_chain(self):
        matrix = matrix_of(build_source("pg:Z4"))
        self.assertEqual(matrix.entries, ((1, 2, 3), (2, 2, 3), (3, 3, 3)))
        report = matrix_report(matrix, source_is_pg=True)
        self.assertEqual((report.trace, report.expected_trace), (6, 6))
        self.assertTrue(report.symmetric)
        self.assertFalse(report.simple_form)

    def test_diagonal_tracks_idempotence(self):
        for source in ("dihedral:5", "formula:3:a + 1", "pg:S3", "formula:4:a*b"):
            with self.subTest(source=source):
                m = build_source(source)
                matrix = matrix_of(m)
                diagonal = tuple(matrix.entries[i][i] for i in range(matrix.n))
                self.assertEqual(diagonal == tuple(range(1, m.size + 1)), check_axioms(m).idempotent.holds)

    def test_simple_form_matches_simplicity(self):
        for spec, simple in (("Z2", True), ("Z7", True), ("A5", True), ("Z4", False), ("S3", False), ("Q8", False)):
            with self.subTest(spec=spec):
                report = matrix_report(matrix_of(build_source(f"pg:{spec}")), source_is_pg=True)
                self.assertEqual(report.simple_form, simple)

    def test_asymmetric_matrix_from_pg_is_a_violation(self):
        matrix = PQMatrix(n=2, entries=((1, 2), (1, 2)))
        self.assertFalse(matrix_report(matrix).symmetric)
        with self.assertRaises(TheoremViolation):
            matrix_report(matrix, source_is_pg=True)

    def test_frame(self):
        m = build_source("pg:Q8")
        frame = matrix_to_frame(matrix_of(m), m.labels)
        self.assertEqual(frame.shape, (6, 7))
        self.assertEqual(frame.loc["x3", "x4"], 6)
        self.assertEqual(frame.loc["x1", "label"], "{1}")


if __name__ == "__main__":
    unittest.main()
