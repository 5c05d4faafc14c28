import math

import pytest

import hslab


LEGENDRE = {1: [0.0, 2.0], 2: [-1.0, 0.0, 1.0]}


def test_operator_basics():
    t = hslab.Operator(LEGENDRE)
    assert t.fuchs_index == 0
    assert t.min_order == 1
    assert t.max_order == 2
    assert t.coefficient(2) == [-1.0, 0.0, 1.0]
    assert t.coefficient(5) == []
    # T(z^2) = (z^2-1)*2 + 2z*2z = 6z^2 - 2
    assert t.apply([0.0, 0.0, 1.0]) == pytest.approx([-2.0, 0.0, 6.0])
    assert t.lambda_n(4) == pytest.approx(20.0)
    assert "fuchs_index 0" in repr(t)


def test_constructors_match_hand_built():
    classical = hslab.Operator.classical([-1.0, 1.0], [1.0, 1.0])
    direct = hslab.Operator(LEGENDRE)
    for k in (1, 2):
        assert classical.coefficient(k) == pytest.approx(direct.coefficient(k))

    sandwich = hslab.Operator.sandwich([0.0, 0.0, -1.0, 0.0, 1.0], 0, 2)
    assert sandwich.fuchs_index == 2
    assert sandwich.max_order == 2

    pencil = hslab.Operator.pencil([[1.0, 0.0], [0.0, 1.0]],
                                   [[1.0, 0.0], [0.0, 0.0]],
                                   [[0.0, 1.0], [1.0, 0.0]])
    assert pencil.fuchs_index == 1


def test_polynomial_helpers():
    assert hslab.real_roots([-1.0, 0.0, 1.0]) == pytest.approx([-1.0, 1.0])
    assert hslab.from_roots([1.0, -1.0]) == pytest.approx([-1.0, 0.0, 1.0])
    # f = z, g = z - 1: roots 0 <= 1 and W[f, g] = -1 <= 0.
    assert hslab.proper_position([0.0, 1.0], [-1.0, 1.0]) == "F_LL_G"
    assert hslab.proper_position([-1.0, 1.0], [0.0, 1.0]) == "G_LL_F"
    with pytest.raises(hslab.Error):
        hslab.real_roots([1.0, 0.0, 1.0])


def test_solve_legendre():
    t = hslab.Operator(LEGENDRE)
    rep = hslab.solve_all(t, 2)
    assert rep["n"] == 2 and rep["r"] == 0
    assert rep["failures"] == []
    assert rep["hypothesis_warning"] is None
    (pair,) = rep["pairs"]
    assert pair["pattern_a"] == []
    assert pair["v"] == pytest.approx([6.0])
    s = 1.0 / math.sqrt(3.0)
    assert pair["f_roots"] == pytest.approx([-s, s], abs=1e-11)
    assert pair["monotone"]
    assert pair["residual"] < 1e-9


def test_solve_heun_patterns():
    t = hslab.Operator.classical([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
    rep = hslab.solve_all(t, 2)
    assert [p["pattern_a"] for p in rep["pairs"]] == [[1], [2], [3]]

    one = hslab.solve_pair(t, 2, [2])
    match = rep["pairs"][1]
    assert one["v_roots"] == pytest.approx(match["v_roots"], abs=1e-10)
    assert one["f_roots"] == pytest.approx(match["f_roots"], abs=1e-10)

    oracle = hslab.brute_force_oracle(t, 1)
    assert oracle["complete"] and oracle["expected"] == 2
    roots = sorted(hslab.real_roots(p["f"])[0] for p in oracle["pairs"])
    s = 1.0 / math.sqrt(3.0)
    assert roots == pytest.approx([1.0 - s, 1.0 + s], abs=1e-9)


def test_verify_and_spectral():
    t = hslab.Operator.classical([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
    checks = hslab.verify_all(t, 2)
    assert [c["check"] for c in checks] == [
        "count",
        "location",
        "simple-coprime",
        "interlacing-same-degree",
        "interlacing-consecutive",
        "vanvleck-shift",
        "vanvleck-consecutive",
        "spectral-interlacing",
    ]
    assert all(c["pass"] for c in checks)

    sp = hslab.spectral_polynomial(t, 2)
    assert sp["n"] == 2
    assert len(sp["coeffs"]) == 4  # monic cubic
    assert sp["coeffs"][-1] == pytest.approx(1.0)
    with pytest.raises(hslab.Error):
        hslab.spectral_polynomial(hslab.Operator(LEGENDRE), 2)  # index 0


def test_diagnose():
    good = hslab.diagnose(hslab.Operator(LEGENDRE))
    assert good["structural_ok"] and good["witness"] is None
    assert good["leading_poly"] == pytest.approx([0.0, 2.0, 1.0])

    bad = hslab.diagnose(hslab.Operator({0: [0.0, 1.0], 2: [1.0]}))
    assert bad["witness"] is not None
    assert bad["witness"]["w_im"] > 1e-9


def test_no_convergence_error():
    t = hslab.Operator(LEGENDRE)
    with pytest.raises(hslab.NoConvergenceError):
        hslab.solve_pair(t, 5, [], max_iter=1)
