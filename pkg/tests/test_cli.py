import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from support import polys, rings

from fsing.arith import RingSpec
from fsing.cli import main, parse_polynomial, parse_problem, run
from fsing.errors import InputError, ParseError

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fx(name):
    return os.path.join(FIXTURES, name)


# --- parser ----------------------------------------------------------------------


def test_parse_examples():
    R = RingSpec(2, ("x1", "x2", "x4"))
    f = parse_polynomial("x1^2*x2 + x4", R)
    assert len(f) == 2
    x1, x2, x4 = R.gens()
    assert f == x1**2 * x2 + x4
    S = RingSpec(2, ("x", "y"))
    assert parse_polynomial("3*x", S) == S.var("x")
    with pytest.raises(ParseError, match=r"unknown identifier `z` at column 7"):
        parse_polynomial("x*y + z", S)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("x^0", "exponent must be a positive integer"),
        ("x^-1", "exponent must be a positive integer"),
        ("2x", "use `*`"),
        ("x y", "use `*`"),
        ("(x + y", r"expected `\)`"),
        ("x +", "unexpected end"),
        ("x $ y", "unexpected character"),
        ("", "empty expression"),
        ("x^y", "integer exponent"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_polynomial(text, RingSpec(3, ("x", "y")))


def test_parse_grammar():
    R = RingSpec(5, ("x", "y"))
    x, y = R.gens()
    assert parse_polynomial("  -(x + 2*y)^2 * x - 7 ", R) == -((x + 2 * y) ** 2) * x - 7
    assert parse_polynomial("x - -y", R) == x + y
    assert parse_polynomial("0", R).is_zero()
    assert parse_polynomial("(x)^2 * y^1", R) == x**2 * y


@settings(max_examples=200)
@given(rings(primes=(2, 3, 5, 7)).flatmap(lambda R: polys(R, max_deg=5, max_terms=6).map(lambda f: (R, f))))
def test_render_parse_round_trip(sample):
    R, f = sample
    assert parse_polynomial(str(f), R) == f


# --- problem files ----------------------------------------------------------------


def test_problem_file_blocks():
    prob = parse_problem(
        """
        # comment
        [ring]
        p = 3
        variables = a, b c
        order = lex
        [ideal I]
        a*b, c^2   # trailing comment
        b + 4
        [element u]
        a^2
        [canonical]
        a
        [task]
        gb
        """.replace("        ", "")
    )
    assert prob.ring.variables == ("a", "b", "c") and str(prob.ring.order) == "lex"
    assert len(prob.ideal().generators) == 3
    assert prob.elements["u"] == prob.ring.var("a") ** 2
    assert prob.canonical is not None and prob.task == "gb"


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("[ideal I]\nx\n", "exactly one \\[ring\\]"),
        ("[ring]\np = 4\nvariables = x\n[ideal I]\nx\n", "prime"),
        ("[ring]\np = 2\nvariables = x\n[ideal I]\nx*y\n", "line 5: unknown identifier `y` at column 3"),
        ("[ring]\np = 2\nvariables = x\n[ideal I]\nx, y\n", "line 5: unknown identifier `y` at column 4"),
        ("[ring]\np = 2\nvariables = x\n", "no \\[ideal"),
        ("x\n[ring]\n", "before the first block"),
        ("[ring]\np = 2\nvariables = x\n[bogus]\n", "bad block header"),
        ("[ring]\np = 2\nq = 3\n", "unknown ring field"),
        ("[ring]\np = 2\nvariables = x\n[ideal I]\nx\n[element u]\nx, x\n", "exactly one expression"),
    ],
)
def test_problem_file_errors(text, fragment):
    with pytest.raises(InputError, match=fragment):
        parse_problem(text)


# --- commands ----------------------------------------------------------------------


def test_root_command():
    code, out, err = run(["root", "--e", "1", fx("example.ring")])
    assert code == 0 and err == ""
    assert out.splitlines()[-2:] == ["  x", "  y"]


def test_test_ideal_command():
    code, out, _ = run(["test-ideal", fx("determinantal.ring")])
    assert code == 0
    lines = out.splitlines()
    i = lines.index("tau:")
    assert lines[i + 1 : i + 5] == ["  x1", "  x2", "  x3 + x4", "  x4*x5"]
    assert "f_rational: false" in lines
    assert "seed: 0" in lines


def test_cusp_exit_code():
    code, out, err = run(["test-ideal", fx("cusp.ring"), "--gorenstein"])
    assert code == 2 and out == ""
    assert "not T-torsion-free" in err and "test-ideal" in err


def test_run_executes_task_line():
    assert run(["run", fx("cusp.ring")])[0] == 2
    code, out, _ = run(["run", fx("determinantal.ring"), "--format", "machine"])
    assert code == 0
    assert "tau.2=x3 + x4" in out.splitlines()
    assert "f_rational=false" in out.splitlines()


def test_other_commands():
    code, out, _ = run(["ext", fx("determinantal.ring")])
    assert code == 0 and "betti: 1 6 8 3" in out and "generators: 3" in out
    code, out, _ = run(["dim", fx("determinantal.ring"), "--format", "machine"])
    assert out.splitlines()[-1] == "dim=2"
    code, out, _ = run(["fedder", fx("cusp.ring")])
    assert "f_injective: false" in out
    code, out, _ = run(["nilpotency", fx("determinantal.ring")])
    assert code == 0 and "torsion_free: true" in out and "eta: 0" in out
    code, out, _ = run(["nilpotency", fx("cusp.ring"), "--gorenstein"])
    assert code == 0 and "torsion_free: false" in out
    code, out, _ = run(["star", fx("example.ring"), "--u", "1"])
    assert code == 0 and out.splitlines()[-1] == "  1"
    code, out, _ = run(["gb", fx("example.ring")])
    assert out.splitlines()[-2:] == ["  x^2", "  y^2"]


def test_input_errors_exit_1():
    assert run(["gb", fx("missing.ring")])[0] == 1
    assert run(["root", "--e", "0", fx("example.ring")])[0] == 1
    assert run(["bogus", fx("example.ring")])[0] == 1
    assert run([])[0] == 1
    code, _, err = run(["star", fx("example.ring"), "--u", "x*q"])
    assert code == 1 and "unknown identifier `q` at column 3" in err
    assert run(["star", fx("example.ring")])[0] == 1
    assert run(["test-ideal", fx("example.ring")])[0] == 1  # no canonical ideal
    assert run(["run", fx("example.ring")])[0] == 1  # no task line


def test_internal_error_exit_3(monkeypatch):
    from fsing import cli
    from fsing.errors import IterationCapError

    def boom(*args, **kw):
        raise IterationCapError("cap exceeded")

    monkeypatch.setitem(cli.COMMANDS, "gb", boom)
    code, _, err = run(["gb", fx("example.ring")])
    assert code == 3 and "gb: cap exceeded" in err


def test_output_deterministic():
    a = run(["test-ideal", fx("determinantal.ring"), "--seed", "3"])
    b = run(["test-ideal", fx("determinantal.ring"), "--seed", "3"])
    assert a == b and "seed: 3" in a[1]


def test_main_writes_streams(capsys):
    assert main(["dim", fx("example.ring")]) == 0
    assert "dim: 0" in capsys.readouterr().out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fsing.cli", "root", fx("example.ring"), "--format", "machine"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-2:] == ["root.0=x", "root.1=y"]
