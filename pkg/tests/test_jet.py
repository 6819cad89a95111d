import itertools
import math

import numpy as np
import pytest

from conftest import sympy_partial
from finslerlab import DomainError, eval_jet, fd_partials, parse
from finslerlab.jet import Jet

ORDERS = [(a, b) for a in range(5) for b in range(5 - a)]

EX45 = "1/r^5 * sqrt(r^2-s^2) * exp(2*s/sqrt(r^2-s^2))"


def fd_tol(value, order):
    if order <= 3:
        return max(1e-6, 1e-4 * abs(value))
    return max(1e-4, 1e-3 * abs(value))


def test_linear_variable_jet():
    j = eval_jet(parse("s"), 2.0, 1.0)
    assert j.partial(0, 0) == 1.0
    assert j.partial(0, 1) == 1.0
    for a, b in ORDERS:
        if (a, b) not in ((0, 0), (0, 1)):
            assert j.partial(a, b) == 0.0


def test_sqrt_jet_at_origin_slice():
    j = eval_jet(parse("sqrt(1+s^2)"), 1.0, 0.0)
    assert j.partial(0, 0) == pytest.approx(1.0, abs=1e-15)
    assert j.partial(0, 1) == pytest.approx(0.0, abs=1e-15)
    assert j.partial(0, 2) == pytest.approx(1.0, rel=1e-14)


def test_constant_jet():
    j = Jet.constant(3.5)
    assert j.partial(0, 0) == 3.5
    assert np.count_nonzero(j.c) == 1


def test_product_is_cauchy_truncation():
    # (1 + r + s)^2 has known Taylor-normalized coefficients at (0, 0)
    j = eval_jet(parse("(1 + r + s)^2"), 0.0, 0.0)
    assert j.c[0, 0] == 1.0
    assert j.c[1, 0] == 2.0 and j.c[0, 1] == 2.0
    assert j.c[2, 0] == 1.0 and j.c[0, 2] == 1.0 and j.c[1, 1] == 2.0
    assert abs(j.c[3, 0]) == 0.0 and abs(j.c[2, 1]) == 0.0


def test_example45_jet_vs_fd_oracle():
    e = parse(EX45)
    j = eval_jet(e, 1.0, 0.3)
    for a, b in ORDERS:
        fd = fd_partials(e, 1.0, 0.3, a, b)
        assert abs(j.partial(a, b) - fd) <= fd_tol(fd, a + b), (a, b)


def test_fd_polynomial_examples():
    e = parse("s^2")
    assert fd_partials(e, 1.0, 0.5, 0, 1) == pytest.approx(1.0, abs=1e-10)
    assert fd_partials(e, 1.0, 0.5, 0, 2) == pytest.approx(2.0, abs=1e-6)


def test_fd_exp_third_order():
    assert fd_partials(parse("exp(s)"), 1.0, 0.0, 0, 3) == pytest.approx(1.0, abs=1e-6)


def test_fd_rejects_bad_order():
    with pytest.raises(ValueError):
        fd_partials(parse("s"), 1.0, 0.0, 3, 2)


def test_random_polynomials_match_symbolic():
    # fixed-seed random polynomials of total degree <= 4: jets are exact
    rng = np.random.default_rng(42)
    monomials = [(a, b) for a in range(5) for b in range(5 - a)]
    for _ in range(8):
        coeffs = {m: rng.integers(-5, 6) for m in monomials if rng.random() < 0.5}
        if not coeffs:
            continue
        text = " + ".join(f"{c}*r^{a}*s^{b}" for (a, b), c in coeffs.items())
        e = parse(text)
        r0, s0 = rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)
        j = eval_jet(e, r0, s0)
        for a, b in monomials:
            exact = sympy_partial(text, r0, s0, a, b)
            assert abs(j.partial(a, b) - exact) <= 1e-12 * max(1.0, abs(exact)), (a, b)


@pytest.mark.parametrize(
    "text,point",
    [
        ("exp(r*s)", (0.7, 0.4)),
        ("ln(1 + r + s^2)", (0.5, 0.8)),
        ("sin(r + s)", (1.1, -0.4)),
        ("cos(r*s)", (0.9, 0.6)),
        ("sqrt(1 + r^2 + s^2)", (1.3, -0.7)),
        ("1/(r + s)", (1.0, 0.5)),
        ("r^2.5", (1.7, 0.0)),
        ("(1 + s^2)^(1/2)", (1.0, 0.4)),
        ("abs(s - 2)", (1.0, 0.5)),
        (EX45, (1.2, -0.5)),
    ],
)
def test_compositions_match_symbolic(text, point):
    r0, s0 = point
    j = eval_jet(parse(text), r0, s0)
    for a, b in ORDERS:
        exact = sympy_partial(text, r0, s0, a, b)
        assert abs(j.partial(a, b) - exact) <= 1e-11 * max(1.0, abs(exact)), (a, b)


@pytest.mark.parametrize(
    "text,point",
    [
        ("exp(s/10) + r^2*s", (1.2, 0.5)),
        ("sqrt(1 + s^2)*r", (0.8, -0.3)),
        ("sin(s)*cos(r)", (1.0, 0.2)),
    ],
)
def test_fd_agrees_with_jet_on_smooth_functions(text, point):
    e = parse(text)
    j = eval_jet(e, *point)
    for a, b in ORDERS:
        fd = fd_partials(e, point[0], point[1], a, b)
        jv = j.partial(a, b)
        if a + b <= 3:
            assert abs(jv - fd) <= max(1e-6, 1e-4 * abs(jv)), (a, b)
        else:
            assert abs(jv - fd) <= max(1e-4, 1e-3 * abs(jv)), (a, b)


def test_domain_violations():
    with pytest.raises(DomainError):
        eval_jet(parse("sqrt(s)"), 1.0, -1.0)
    with pytest.raises(DomainError):
        eval_jet(parse("ln(s)"), 1.0, 0.0)
    with pytest.raises(DomainError):
        eval_jet(parse("1/s"), 1.0, 0.0)
    with pytest.raises(DomainError):
        eval_jet(parse("abs(s)"), 1.0, 1e-15)
    with pytest.raises(DomainError):
        eval_jet(parse("s^0.5"), 1.0, -2.0)


def test_domain_error_names_the_node():
    with pytest.raises(DomainError, match="sqrt"):
        eval_jet(parse("1 + sqrt(s - 10)"), 1.0, 0.0)


def test_integer_powers_of_negative_base():
    j = eval_jet(parse("s^3"), 1.0, -2.0)
    assert j.partial(0, 0) == -8.0
    assert j.partial(0, 1) == 12.0
    assert j.partial(0, 2) == -12.0
    assert j.partial(0, 3) == 6.0


def test_derivative_jets_shift_coefficients():
    j = eval_jet(parse("r^2*s^2"), 2.0, 3.0)
    ds = j.d_s()
    # d/ds (r^2 s^2) = 2 r^2 s
    assert ds.partial(0, 0) == pytest.approx(24.0)
    assert ds.partial(1, 1) == pytest.approx(8.0)  # d^2/drds of 2 r^2 s = 4r
