"""Command-line front end: subcommands, exit codes, and pipelines."""

import pytest

from wspkit import formats
from wspkit.cli import main

WSTAR_TEXT = """\
tasks: s1 s2 s3
users: u1 u2 u3 u4 u5 u6
auth s1: u1 u2 u3
auth s2: u1 u4 u5
auth s3: u1 u6
constraint eq s1 s2
constraint neq s1 s3
constraint neq s2 s3
"""

UNSAT_TEXT = """\
tasks: a b
users: u1
auth a: u1
auth b: u1
constraint neq a b
"""


@pytest.fixture
def wstar_file(tmp_path):
    path = tmp_path / "wstar.wsp"
    path.write_text(WSTAR_TEXT)
    return str(path)


class TestSolve:
    def test_satisfiable_writes_plan(self, wstar_file, tmp_path, capsys):
        plan_path = tmp_path / "plan.txt"
        code = main(["solve", wstar_file, "--plan-out", str(plan_path)])
        assert code == 0
        assert plan_path.read_text() == "s1 u1\ns2 u1\ns3 u6\n"
        assert "status: satisfiable" in capsys.readouterr().out

    def test_both_engines_agree(self, wstar_file, tmp_path):
        for engine in ("fpt", "brute"):
            out = tmp_path / f"{engine}.txt"
            assert main(["solve", wstar_file, "--engine", engine,
                         "--plan-out", str(out)]) == 0
        assert (tmp_path / "fpt.txt").read_text() == (tmp_path / "brute.txt").read_text()

    def test_unsatisfiable(self, tmp_path):
        path = tmp_path / "unsat.wsp"
        path.write_text(UNSAT_TEXT)
        assert main(["solve", str(path)]) == 1

    def test_malformed_document(self, tmp_path):
        path = tmp_path / "bad.wsp"
        path.write_text("tasks a b\n")
        assert main(["solve", str(path)]) == 2

    def test_missing_file(self):
        assert main(["solve", "/nonexistent/instance.wsp"]) == 2


class TestVerify:
    def test_valid_plan(self, wstar_file, tmp_path):
        plan = tmp_path / "plan.txt"
        plan.write_text("s1 u1\ns2 u1\ns3 u6\n")
        assert main(["verify", wstar_file, str(plan)]) == 0

    def test_violations_listed(self, wstar_file, tmp_path, capsys):
        plan = tmp_path / "plan.txt"
        plan.write_text("s1 u1\ns2 u1\ns3 u1\n")
        assert main(["verify", wstar_file, str(plan)]) == 1
        out = capsys.readouterr().out
        assert "neq" not in out or "!=" in out
        assert "violation" in out

    def test_incomplete_plan(self, wstar_file, tmp_path, capsys):
        plan = tmp_path / "plan.txt"
        plan.write_text("s1 u1\n")
        assert main(["verify", wstar_file, str(plan)]) == 1
        assert "complete" in capsys.readouterr().out


class TestKernelize:
    def test_reduces_running_example(self, wstar_file, tmp_path, capsys):
        out = tmp_path / "reduced.wsp"
        log = tmp_path / "kernel.log"
        code = main(["kernelize", wstar_file, "--out", str(out),
                     "--log", str(log)])
        assert code == 0
        printed = capsys.readouterr().out
        assert "users: 6 -> 2" in printed
        reduced = formats.parse_instance(out.read_text())
        assert reduced.tasks == ("s1", "s3")
        assert len(reduced.users) == 2
        assert "MERGES" in log.read_text()

    def test_rejects_atmost(self, tmp_path):
        path = tmp_path / "atmost.wsp"
        path.write_text("tasks: a b c\nusers: u\nauth a: u\nauth b: u\n"
                        "auth c: u\nconstraint atmost 2 {a,b,c}\n")
        assert main(["kernelize", str(path), "--out",
                     str(tmp_path / "o.wsp")]) == 2

    def test_pipeline_kernelize_solve_verify(self, wstar_file, tmp_path):
        reduced = tmp_path / "reduced.wsp"
        assert main(["kernelize", wstar_file, "--out", str(reduced)]) == 0
        plan = tmp_path / "plan.txt"
        assert main(["solve", str(reduced), "--plan-out", str(plan)]) == 0
        assert main(["verify", str(reduced), str(plan)]) == 0


class TestClassify:
    def test_binding_singleton_side(self, capsys):
        assert main(["classify", "--kind", "bind", "--arity", "3",
                     "--split", "1"]) == 0
        out = capsys.readouterr().out
        assert "regular: yes" in out
        assert "intersection-closed: no" in out
        assert "ternary-gadget condition: yes" in out

    def test_disequality(self, capsys):
        assert main(["classify", "--kind", "neq", "--arity", "2"]) == 0
        out = capsys.readouterr().out
        assert "regular: yes" in out and "intersection-closed: yes" in out

    def test_two_sided_binding_spec_file(self, tmp_path, capsys):
        from wspkit.classify import spec_from_constraint
        from wspkit.core import binding

        spec = spec_from_constraint(binding(("a", "b"), ("c", "d")))
        path = tmp_path / "rel.spec"
        path.write_text(formats.serialize_relation_spec(spec))
        assert main(["classify", str(path)]) == 0
        assert "regular: no" in capsys.readouterr().out

    def test_needs_spec_or_kind(self, capsys):
        assert main(["classify"]) == 2


class TestReduce:
    def test_sat(self, tmp_path, capsys):
        cnf = tmp_path / "f.cnf"
        cnf.write_text("p cnf 2 2\n1 -2 0\n2 0\n")
        out = tmp_path / "inst.wsp"
        assert main(["reduce", cnf.as_posix(), "--from", "sat",
                     "--out", str(out)]) == 0
        schema = formats.parse_instance(out.read_text())
        assert len(schema.tasks) == 5 and len(schema.users) == 2

    def test_mchs_counts(self, tmp_path):
        doc = tmp_path / "h.mchs"
        doc.write_text(
            "vertices: a b c d e f\n"
            "color a 1\ncolor b 1\ncolor c 2\ncolor d 2\n"
            "color e 3\ncolor f 3\n"
            "set: a c e\nset: b d\nset: a f\nset: c\n"
        )
        out = tmp_path / "inst.wsp"
        assert main(["reduce", str(doc), "--from", "mchs",
                     "--gadget", "atmost2", "--out", str(out)]) == 0
        schema = formats.parse_instance(out.read_text())
        assert len(schema.tasks) == 11  # (l-1)m + l with l=3, m=4
        assert len(schema.constraints) == 8  # (l-1)m

    def test_unknown_gadget(self, tmp_path):
        doc = tmp_path / "h.mchs"
        doc.write_text("vertices: a b\ncolor a 1\ncolor b 2\n"
                       "set: a\nset: b\n")
        assert main(["reduce", str(doc), "--from", "mchs",
                     "--gadget", "neq"]) == 2


class TestGenerate:
    def test_parameters_echoed(self, tmp_path):
        out = tmp_path / "gen.wsp"
        assert main(["generate", "--tasks", "4", "--users", "6",
                     "--constraints", "3", "--seed", "7",
                     "--out", str(out)]) == 0
        text = out.read_text()
        assert "seed=7" in text
        schema = formats.parse_instance(text)
        assert len(schema.tasks) == 4 and len(schema.users) == 6

    def test_deterministic(self, tmp_path):
        args = ["generate", "--tasks", "3", "--users", "3",
                "--constraints", "2", "--seed", "5"]
        a, b = tmp_path / "a.wsp", tmp_path / "b.wsp"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_text() == b.read_text()
