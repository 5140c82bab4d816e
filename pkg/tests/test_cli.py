"""Command-line behavior: subcommands, exit codes, stdin, formats."""

import json



from lpdo.cli import main


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


A1 = "Dx^2 - Dy^2 + x*Dy + y*Dx + (y^2-x^2)/4 + 1"
A_PARAM = "Dx^2 - Dy^2 + x*Dy + y*Dx + (y^2-x^2)/4 + a"


class TestFactor:
    def test_factored_exit_zero(self, capsys):
        code, out, _ = run(capsys, ["factor", "--side", "left", A1])
        assert code == 0
        assert "status: factored" in out
        assert "factor: Dx + Dy + (-x + y)/2" in out
        assert "cofactor: Dx - Dy + (x + y)/2" in out

    def test_conditions_fail_exit_two_with_both_roots(self, capsys):
        code, out, _ = run(capsys, ["factor", "--params", "a", A_PARAM])
        assert code == 2
        assert "residuals: a - 1" in out
        assert "residuals: a + 1" in out

    def test_degenerate_exit_three(self, capsys):
        code, out, _ = run(capsys, ["factor", "Dx^2 + x*Dx"])
        assert code == 3
        assert "riccati" in out

    def test_degenerate_completion(self, capsys):
        code, out, _ = run(capsys, ["factor", "Dx^2 + x*Dx", "--p3", "x"])
        assert code == 0
        assert "factor: Dx + x" in out
        assert "cofactor: Dx" in out

    def test_unsupported_root_exit_four(self, capsys):
        # characteristic polynomial w^2 - x has no supported root
        code, out, _ = run(capsys, ["factor", "Dx^2 - x*Dy^2"])
        assert code == 4
        assert "unresolved" in out

    def test_parse_error_exit_one(self, capsys):
        code, _, err = run(capsys, ["factor", "Dx +"])
        assert code == 1
        assert "parse error" in err

    def test_right_side(self, capsys):
        code, out, _ = run(capsys, ["factor", "--side", "right", A1])
        assert code == 0
        assert "factor: Dx - Dy + (x + y)/2" in out

    def test_explicit_root_expression(self, capsys):
        code, out, _ = run(capsys, ["factor", "--root", "1", "--params", "a",
                                    A_PARAM])
        assert code == 2
        assert "residuals: a + 1" in out

    def test_root_expression_string(self, capsys):
        code, out, _ = run(capsys, ["factor", "--root", "-1", A1])
        # -1 parses as an index is impossible (negative), so it is a root value
        assert code == 0

    def test_recursive(self, capsys):
        code, out, _ = run(capsys, ["factor", "--recursive",
                                    "(Dx+1)*(Dx+1)*(Dx+x*Dy)"])
        assert code == 0
        assert "first-order leaf" in out

    def test_structured_format(self, capsys):
        code, out, _ = run(capsys, ["factor", "--format", "structured", A1])
        assert code == 0
        doc = json.loads(out)
        assert doc["status"] == "factored"

    def test_stdin(self, capsys, monkeypatch):
        import io
        monkeypatch.setattr("sys.stdin", io.StringIO(A1))
        code, out, _ = run(capsys, ["factor"])
        assert code == 0


class TestOtherCommands:
    def test_compose(self, capsys):
        code, out, _ = run(capsys, ["compose", "Dx+1", "Dx+1", "Dx+x*Dy"])
        assert code == 0
        assert out.strip() == \
            "Dx^3 + x*Dx^2*Dy + 2*Dx^2 + (2*x + 2)*Dx*Dy + Dx + (x + 2)*Dy"

    def test_transpose(self, capsys):
        code, out, _ = run(capsys, ["transpose", "Dx + 1"])
        assert code == 0
        assert out.strip() == "-Dx + 1"

    def test_verify_ok(self, capsys):
        code, out, _ = run(capsys, [
            "verify", "Dx+Dy+(y-x)/2", "Dx-Dy+(y+x)/2", A1])
        assert code == 0
        assert "ok" in out

    def test_verify_mismatch(self, capsys):
        code, out, _ = run(capsys, [
            "verify", "Dx+Dy", "Dx-Dy+(y+x)/2", A1])
        assert code == 2
        assert "mismatch" in out

    def test_charpoly(self, capsys):
        code, out, _ = run(capsys, ["charpoly", A1])
        assert code == 0
        assert "P(w) = w^2 - 1" in out
        assert "root: -1 (multiplicity 1)" in out

    def test_charpoly_structured(self, capsys):
        code, out, _ = run(capsys, ["charpoly", "--format", "structured",
                                    "Dx*Dy"])
        assert code == 0
        doc = json.loads(out)
        assert doc["n"] == 2
        assert any(r["at_infinity"] for r in doc["roots"])

    def test_usage_error(self, capsys):
        assert main(["factor", "--side", "sideways", "Dx^2"]) == 1

    def test_exit_code_is_function_of_status(self, capsys):
        # same status, different operators -> same exit code
        for op, expected in [
            ("Dx^2 - Dy^2", 0),
            ("Dx^2 + Dy^2", 0),
            ("Dx^2 + x*Dx", 3),
            ("Dx^2", 3),
        ]:
            code, _, _ = run(capsys, ["factor", op])
            assert code == expected
