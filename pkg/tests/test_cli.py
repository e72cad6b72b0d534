import json
from fractions import Fraction as Q

import pytest

from loopideal import (
    MonomialOrder,
    VarRing,
    buchberger,
    ideal_equal,
    parse_loop,
    poly_parse,
)
from loopideal.cli import main

WALK2 = """\
vars: x, y
init: x = 0; y = 0
body:
  x = x + 2 [1/2] x - 1
  y = y + 1 [1/2] y - 2
"""

LRS32 = {"coeffs": ["2", "-2", "-12"], "init": ["2", "-3", "3"]}


@pytest.fixture
def walk2_file(tmp_path):
    path = tmp_path / "walk2.loop"
    path.write_text(WALK2)
    return str(path)


@pytest.fixture
def lrs_file(tmp_path):
    path = tmp_path / "ex.json"
    path.write_text(json.dumps(LRS32))
    return str(path)


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_invariants_matches_quoted_basis(capsys, walk2_file):
    code, out, _ = _run(capsys, "invariants", "--loop", walk2_file, "--degree", "2")
    assert code == 0
    blob = json.loads(out)
    ring = VarRing(blob["ring"])
    order = MonomialOrder(blob["order"]["kind"], ring, blob["order"]["priority"])
    got = buchberger([poly_parse(t, ring) for t in blob["generators"]], order)
    expected = buchberger(
        [
            poly_parse(t, ring)
            for t in (
                "E[x^2] - E[y^2]",
                "9*E[x] - 2*E[x*y] - 2*E[y^2]",
                "E[x*y]^2 + 2*E[x*y]*E[y^2] + 81/4*E[x*y] + E[y^2]^2",
                "2*E[x*y] + 9*E[y] + 2*E[y^2]",
            )
        ],
        order,
    )
    assert ideal_equal(got, expected)


def test_invariants_deterministic_output(capsys, walk2_file):
    _, first, _ = _run(capsys, "invariants", "--loop", walk2_file, "--degree", "2")
    _, second, _ = _run(capsys, "invariants", "--loop", walk2_file, "--degree", "2")
    assert first == second


def test_reduce_skolem_p2p_round_trip(capsys, lrs_file):
    code, out, _ = _run(capsys, "reduce-skolem-p2p", "--lrs", lrs_file)
    assert code == 0
    loop = parse_loop(out)
    assert loop.init == (Q(2), Q(-6), Q(-36))
    assert parse_loop(out) == loop


def test_reduce_p2p_spinv(capsys, tmp_path):
    sys_path = tmp_path / "sys.loop"
    sys_path.write_text("vars: x, y\ninit: x = 0; y = 0\nbody:\n  (x, y) = (x + 2, y + 3)\n")
    code, out, _ = _run(
        capsys, "reduce-p2p-spinv", "--loop", str(sys_path), "--target", "4,6"
    )
    assert code == 0
    loop = parse_loop(out)
    assert loop.variables.names == ("x", "y", "f", "g")


def test_reduce_skolem_spinv(capsys, lrs_file):
    code, out, _ = _run(capsys, "reduce-skolem-spinv", "--lrs", lrs_file)
    assert code == 0
    loop = parse_loop(out)
    assert loop.variables.arity == 6


def test_simulate_missing_file_is_usage_error(capsys):
    code, _, err = _run(capsys, "simulate", "--loop", "missing.loop")
    assert code == 2
    assert "usage error" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, _ = _run(capsys, "simulate", "--nope", "x")
    assert code == 2


def test_domain_error_is_exit_1_with_json(capsys, tmp_path):
    path = tmp_path / "guarded.loop"
    path.write_text("vars: x\ninit: x = 0\nbody:\n  if x = 0\n")
    code, _, err = _run(capsys, "simulate", "--loop", str(path))
    assert code == 1
    blob = json.loads(err)
    assert blob["error"] == "GuardUnsupported"


def test_simulate_output(capsys, tmp_path):
    path = tmp_path / "det.loop"
    path.write_text(
        "vars: x, y, f, g\ninit: x = 0; y = 0; f = 1; g = 0\nbody:\n"
        "  (x, y) = (x + 2, y + 3)\n"
        "  f = f*((x - 4)^2 + (y - 6)^2)\n"
        "  g = g + 1\n"
    )
    code, out, _ = _run(capsys, "simulate", "--loop", str(path), "--horizon", "2")
    assert code == 0
    blob = json.loads(out)
    assert blob["states"][2] == ["4", "6", "0", "2"]


def test_distribution_output(capsys, tmp_path):
    path = tmp_path / "walk.loop"
    path.write_text("vars: x\ninit: x = 0\nbody:\n  x = x + 1 [1/2] x - 1\n")
    code, out, _ = _run(capsys, "distribution", "--loop", str(path), "--horizon", "2")
    assert code == 0
    blob = json.loads(out)
    probs = {tuple(e["state"]): e["probability"] for e in blob["support"]}
    assert probs == {("-2",): "1/4", ("0",): "1/2", ("2",): "1/4"}


def test_groebner_and_member(capsys, tmp_path):
    ideal_path = tmp_path / "ideal.json"
    ideal_path.write_text(
        json.dumps(
            {
                "ring": ["g", "f", "y", "x"],
                "order": {"kind": "lex", "priority": ["x", "y", "f", "g"]},
                "generators": ["x - 2*g", "y - 3*g", "g*(g-1)*f"],
            }
        )
    )
    code, out, _ = _run(capsys, "groebner", "--ideal", str(ideal_path))
    assert code == 0
    blob = json.loads(out)
    assert "x - 2*g" in blob["generators"]

    code, out, _ = _run(
        capsys, "member", "--ideal", str(ideal_path), "--poly", "g*(g-1)*f"
    )
    assert code == 0 and json.loads(out)["member"] is True
    code, out, _ = _run(capsys, "member", "--ideal", str(ideal_path), "--poly", "f")
    assert code == 0 and json.loads(out)["member"] is False


def test_detect_zero_command(capsys, tmp_path):
    ideal_path = tmp_path / "ideal.json"
    ideal_path.write_text(
        json.dumps(
            {
                "ring": ["g", "f", "y", "x"],
                "order": {"kind": "lex", "priority": ["x", "y", "f", "g"]},
                "generators": ["x - 2*g", "y - 3*g", "g*(g-1)*f"],
            }
        )
    )
    code, out, _ = _run(capsys, "detect-zero", "--ideal", str(ideal_path))
    assert code == 0 and json.loads(out)["eventual_zero_at"] == 2


def test_verify_witness_command(capsys, lrs_file):
    code, out, _ = _run(
        capsys, "verify-witness", "--lrs", lrs_file, "--horizon", "15"
    )
    assert code == 0
    blob = json.loads(out)
    assert blob == {"horizon": 15, "violations": [], "first_zero": 5}


def test_empirical_command(capsys, tmp_path):
    path = tmp_path / "det.loop"
    path.write_text(
        "vars: x, y, f, g\ninit: x = 0; y = 0; f = 1; g = 0\nbody:\n"
        "  (x, y) = (x + 2, y + 3)\n"
        "  f = f*((x - 5)^2 + (y - 7)^2)\n"
        "  g = g + 1\n"
    )
    code, out, _ = _run(
        capsys, "empirical", "--loop", str(path), "--degree", "3", "--horizon", "25"
    )
    assert code == 0
    blob = json.loads(out)
    ring = VarRing(blob["ring"])
    got = {poly_parse(t, ring) for t in blob["generators"]}
    assert got == {poly_parse("x - 2*g", ring), poly_parse("y - 3*g", ring)}


def test_closed_forms_command(capsys, walk2_file):
    code, out, _ = _run(
        capsys, "closed-forms", "--loop", walk2_file, "--degree", "1", "--format", "text"
    )
    assert code == 0
    assert "E[x] = (1/2*n)*1^n" in out
    assert "E[y] = (-1/2*n)*1^n" in out


def test_empirical_with_explicit_order(capsys, tmp_path):
    path = tmp_path / "det.loop"
    path.write_text(
        "vars: x, y, f, g\ninit: x = 0; y = 0; f = 1; g = 0\nbody:\n"
        "  (x, y) = (x + 2, y + 3)\n"
        "  f = f*((x - 5)^2 + (y - 7)^2)\n"
        "  g = g + 1\n"
    )
    code, out, _ = _run(
        capsys,
        "empirical", "--loop", str(path), "--degree", "3", "--horizon", "25",
        "--order", "lex", "--var-order", "g<f<y<x",
    )
    assert code == 0
    blob = json.loads(out)
    assert blob["order"] == {"kind": "lex", "priority": ["x", "y", "f", "g"]}
    assert blob["generators"] == ["x - 2*g", "y - 3*g"]


def test_irrational_eigenvalue_reported(capsys, tmp_path):
    path = tmp_path / "swap.loop"
    path.write_text("vars: x, y\ninit: x = 1; y = 1\nbody:\n  (x, y) = (2*y, x)\n")
    code, _, err = _run(capsys, "closed-forms", "--loop", str(path))
    assert code == 1
    assert json.loads(err)["error"] == "IrrationalEigenvalue"
