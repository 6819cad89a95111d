import numpy as np
import pytest

from finslerlab import canonical_point


def make_grid(n, r_values, s_fracs, u_values=(1.0,)):
    """Cartesian grid of canonical points with s = frac * r."""
    return [
        canonical_point(n, r, frac * r, u)
        for r in r_values
        for frac in s_fracs
        for u in u_values
    ]


@pytest.fixture
def grid2():
    """A generic 16-point surface grid away from the |s| = r cone."""
    return make_grid(2, (0.6, 0.9, 1.2, 1.5), (-0.6, -0.2, 0.3, 0.7))


def sympy_partial(text, r0, s0, a, b):
    """Symbolic mixed partial of an expression string, as a float."""
    import sympy as sp

    r, s = sp.symbols("r s", real=True)
    expr = sp.sympify(
        text.replace("^", "**"),
        locals={
            "r": r,
            "s": s,
            "ln": sp.log,
            "sqrt": sp.sqrt,
            "exp": sp.exp,
            "sin": sp.sin,
            "cos": sp.cos,
            "abs": sp.Abs,
        },
    )
    d = sp.diff(expr, r, a, s, b)
    return float(d.subs({r: r0, s: s0}).evalf(30))


def rel_close(value, expected, rel=1e-8, abs_tol=0.0):
    return abs(value - expected) <= max(abs_tol, rel * abs(expected))


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
