import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path
from unittest.mock import patch

from pseudoquandle_app.cli import EXIT_INPUT_ERROR, EXIT_OK, EXIT_VERIFICATION_FAILED, main


def run_cli(*argv):
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = main(list(argv))
    return code, buffer.getvalue()


def run_json(*argv):
    code, output = run_cli("--format", "json", *argv)
    return code, json.loads(output)


class GroupCommandTests(unittest.TestCase):
    def test_quaternion(self):
        code, report = run_json("group", "Q8")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(report["normal_subgroups"]), 6)
        self.assertEqual(report["normal_subgroups"][1]["members"], ["1", "-1"])

    def test_trivial_and_s4(self):
        self.assertEqual(run_json("group", "Z1")[1]["order"], 1)
        self.assertEqual(len(run_json("group", "S4")[1]["normal_subgroups"]), 4)

    def test_text_output(self):
        code, output = run_cli("group", "S3")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("Normal subgroups (3):", output)

    def test_input_errors(self):
        self.assertEqual(run_cli("group", "D7")[0], EXIT_INPUT_ERROR)
        self.assertEqual(run_cli("--max-order", "4", "group", "Z5")[0], EXIT_INPUT_ERROR)
        self.assertEqual(run_cli("--bound", "0", "group", "Z5")[0], EXIT_INPUT_ERROR)


class AxiomCommandTests(unittest.TestCase):
    def test_dihedral_is_quandle(self):
        code, output = run_cli("axioms", "dihedral:3")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("Classification: quandle", output)

    def test_quaternion_witness(self):
        code, report = run_json("axioms", "pg:Q8")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["classification"], "pseudoquandle")
        self.assertEqual(report["right_translations_bijective"]["witness"], [3, 4])
        self.assertEqual(report["bijectivity_solutions"], [])

    def test_text_witness(self):
        output = run_cli("axioms", "pg:Q8")[1]
        self.assertIn("p = x3 = {1,-1,i,-i}, q = x4 = {1,-1,j,-j}", output)
        self.assertIn("no r satisfies p = r*q", output)

    def test_bad_family_parameter(self):
        self.assertEqual(run_cli("axioms", "alexander:4:2")[0], EXIT_INPUT_ERROR)


class MatrixAndKernelCommandTests(unittest.TestCase):
    def test_simple_group_matrix(self):
        code, output = run_cli("matrix", "pg:Z5")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(output.startswith("1 2\n2 2\n"))
        self.assertIn("simple_form=true", output)

    def test_matrix_json(self):
        report = run_json("matrix", "pg:Z4")[1]
        self.assertEqual(report["entries"], [[1, 2, 3], [2, 2, 3], [3, 3, 3]])
        self.assertEqual(report["trace"], 6)

    def test_single_element_matrix(self):
        self.assertTrue(run_cli("matrix", "trivial:1")[1].startswith("1\n"))

    def test_kernels(self):
        self.assertIn("no ascending chain", run_cli("kernels", "dihedral:3")[1])
        self.assertIn("Class equation: 4 = 1 + 1 + 1 + 1", run_cli("kernels", "pg:Z8")[1])
        report = run_json("kernels", "trivial:1")[1]
        self.assertEqual(report["kernels"], [[1]])


class VerifyClassifyIsoCommandTests(unittest.TestCase):
    def test_verify_sources(self):
        self.assertEqual(run_cli("verify", "pg:Q8")[0], EXIT_OK)
        code, report = run_json("verify", "trivial:2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["claims"]["phi_bijective"]["status"], "pass")

    def test_classify(self):
        code, output = run_cli("classify", "Z12")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("P_G ≅ [3]⊕[2]", output)
        self.assertIn("[2]", run_cli("classify", "Z7")[1])
        self.assertIn("[4]⊕[3]", run_cli("classify", "Z8xZ9")[1])

    def test_classify_failures(self):
        self.assertEqual(run_cli("classify", "Z2xZ2")[0], EXIT_VERIFICATION_FAILED)
        self.assertEqual(run_cli("classify", "S3")[0], EXIT_INPUT_ERROR)

    def test_iso(self):
        code, report = run_json("iso", "pg:Z4", "pg:Z9")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(report["isomorphic"])
        self.assertEqual(report["witness"]["mapping"], [1, 2, 3])
        self.assertIn("not isomorphic", run_cli("iso", "trivial:3", "dihedral:3")[1])
        self.assertIn("identity", run_cli("iso", "trivial:2", "trivial:2")[1])
        self.assertIn("not isomorphic", run_cli("iso", "--no-prune", "trivial:3", "dihedral:3")[1])

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "report.json"
            code, _ = run_cli("--output", str(target), "axioms", "trivial:2")
            self.assertEqual(code, EXIT_OK)
            self.assertEqual(json.loads(target.read_text(encoding="utf-8"))["classification"], "quandle")

    def test_output_file_reloads_as_source(self):
        for command in ("axioms", "matrix", "kernels", "verify"):
            with self.subTest(command=command), tempfile.TemporaryDirectory() as tmp:
                target = Path(tmp) / "report.json"
                self.assertEqual(run_cli("--output", str(target), command, "alexander:5:2")[0], EXIT_OK)
                code, report = run_json("axioms", f"file:{target}")
                self.assertEqual(code, EXIT_OK)
                self.assertEqual(report["classification"], "quandle")
                self.assertEqual(report["magma"]["op"], run_json("axioms", "alexander:5:2")[1]["magma"]["op"])

    def test_unwritable_output_is_an_input_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            blocker = Path(tmp) / "blocker"
            blocker.write_text("", encoding="utf-8")
            code, _ = run_cli("--output", str(blocker / "report.json"), "axioms", "trivial:2")
        self.assertEqual(code, EXIT_INPUT_ERROR)

    def test_limit_flags_override_environment(self):
        with patch.dict(os.environ, {"PQ_MAX_MAGMA": "40"}):
            self.assertEqual(run_cli("--bound", "50", "classify", "Z")[0], EXIT_INPUT_ERROR)
            self.assertEqual(run_cli("--max-magma", "100", "--bound", "50", "classify", "Z")[0], EXIT_OK)


if __name__ == "__main__":
    unittest.main()
