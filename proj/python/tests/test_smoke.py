import json
import math

import pytest

import ametric_fix as am


def test_eval_and_rep_distance():
    space = am.make_absdiff_space(3)
    assert am.eval(space, [0.0, 1.0, 2.0]) == 4.0
    assert am.rep_distance(space, 0.0, 5.0) == 10.0


def test_arity_mismatch_raises():
    space = am.make_absdiff_space(3)
    with pytest.raises(ValueError):
        am.eval(space, [0.0, 1.0])


def test_axiom_checks_pass_on_absdiff():
    space = am.make_absdiff_space(4)
    assert am.check_axioms(space, count=200, seed=1).passed
    assert am.check_symmetry(space, count=200, seed=2).passed
    assert am.check_triangle_lemma(space, count=200, seed=3).passed


def test_paper_example_certificate_and_solve():
    space = am.make_absdiff_space(3)
    f = am.make_map("paper-example", space)
    assert f(7.0) == [2.0]
    cert = am.classify(space, f, n_pairs=500, seed=4)
    assert cert.valid
    assert abs(cert.a - 2.0 / 7.0) <= 1e-12
    assert cert.b == 0.0 and cert.c == 0.0
    trace = am.picard_run(space, f, 7.0, cert.delta)
    assert trace.status == "converged"
    assert abs(trace.limit[0]) <= 1e-11
    assert am.verify_decay(trace).passed
    assert am.verify_cauchy(trace, space)["passed"]
    assert trace.to_csv().startswith("n,step,bound,ratio,tail_bound\n")


def test_shift_is_not_az():
    space = am.make_absdiff_space(2)
    f = am.make_map("shift", space)
    cert = am.classify(space, f, n_pairs=100)
    assert not cert.valid
    assert cert.to_dict()["witnesses"]


def test_compute_delta_and_tail_bound():
    assert am.compute_delta(0.0, 1.0 / 3.0, 0.0, 2) == pytest.approx(0.5, abs=1e-15)
    assert am.tail_bound(2.0 / 7.0, 3, 10.0, 1) == pytest.approx(8.0)


def test_finite_space_oracle():
    table = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    space = am.make_lifted_space(3, table)
    f = am.make_map("constant", space, c0=1)
    assert am.brute_force_fixed_points(space, f) == [[1.0]]
    with pytest.raises(RuntimeError):
        am.make_lifted_space(3, [[0, -1], [-1, 0]])


def test_run_command_writes_reports(tmp_path):
    config = {
        "space": {"kind": "absdiff", "t": 3},
        "map": {"kind": "paper-example"},
        "sampling": {"seed": 7, "n_pairs": 200, "n_triples": 200, "n_tuples": 200},
        "solver": {"x0": 7},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    code, written = am.run_command("verify", str(path), str(tmp_path / "out"))
    assert code == 0
    report = json.loads(open(written[-1]).read())
    assert report["verdict"] == "pass"
    assert math.isclose(report["certificate"]["a"], 2.0 / 7.0, abs_tol=1e-12)
