"""Degree-4 bivariate truncated Taylor jets in (r, s).

A :class:`Jet` holds the Taylor-normalized coefficients

    c[a][b] = (d/dr)^a (d/ds)^b f / (a! b!),   a + b <= 4,

of a function at a fixed base point.  Arithmetic is exact truncated
polynomial arithmetic: products are Cauchy products cut at total degree 4,
and smooth functions are applied by composing their univariate Taylor
expansion with the jet.  Coefficients of total degree > 4 are identically
zero and never consulted.

Taking ``d_r``/``d_s`` of a degree-4 jet yields a jet whose coefficients
are exact only up to total degree 3 (resp. 2 after two derivatives);
truncated arithmetic never propagates high-order error downward, so
values and low-order partials of downstream expressions stay exact.
"""

from __future__ import annotations

import math

import numpy as np

from .expr import BinOp, Call, DomainError, Neg, Node, Num, Var, eval_value, to_string

DEGREE = 4

_FACT = (1.0, 1.0, 2.0, 6.0, 24.0)

# abs() is rejected this close to the kink, sqrt/ln this close to zero.
SINGULAR_TOL = 1e-12


class Jet:
    """Bivariate Taylor jet of total degree 4."""

    __slots__ = ("c",)

    def __init__(self, c: np.ndarray):
        self.c = c

    @classmethod
    def constant(cls, v: float) -> "Jet":
        c = np.zeros((DEGREE + 1, DEGREE + 1))
        c[0, 0] = v
        return cls(c)

    @classmethod
    def variable_r(cls, r0: float) -> "Jet":
        c = np.zeros((DEGREE + 1, DEGREE + 1))
        c[0, 0] = r0
        c[1, 0] = 1.0
        return cls(c)

    @classmethod
    def variable_s(cls, s0: float) -> "Jet":
        c = np.zeros((DEGREE + 1, DEGREE + 1))
        c[0, 0] = s0
        c[0, 1] = 1.0
        return cls(c)

    @property
    def value(self) -> float:
        return float(self.c[0, 0])

    def partial(self, a: int, b: int) -> float:
        """The mixed partial (d/dr)^a (d/ds)^b at the base point."""
        if a < 0 or b < 0 or a + b > DEGREE:
            raise ValueError(f"partial order ({a},{b}) outside the jet degree")
        return float(self.c[a, b] * _FACT[a] * _FACT[b])

    def d_r(self) -> "Jet":
        """Jet of df/dr (exact to one total degree less)."""
        c = np.zeros((DEGREE + 1, DEGREE + 1))
        for a in range(DEGREE):
            c[a, : DEGREE - a] = self.c[a + 1, : DEGREE - a] * (a + 1)
        return Jet(c)

    def d_s(self) -> "Jet":
        """Jet of df/ds (exact to one total degree less)."""
        c = np.zeros((DEGREE + 1, DEGREE + 1))
        for a in range(DEGREE):
            for b in range(DEGREE - a):
                c[a, b] = self.c[a, b + 1] * (b + 1)
        return Jet(c)

    # -- ring operations ---------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(float(other))

    def __add__(self, other) -> "Jet":
        return Jet(self.c + Jet._coerce(other).c)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        return Jet(self.c - Jet._coerce(other).c)

    def __rsub__(self, other) -> "Jet":
        return Jet(Jet._coerce(other).c - self.c)

    def __neg__(self) -> "Jet":
        return Jet(-self.c)

    def __mul__(self, other) -> "Jet":
        y = Jet._coerce(other).c
        x = self.c
        out = np.zeros((DEGREE + 1, DEGREE + 1))
        for a in range(DEGREE + 1):
            for b in range(DEGREE + 1 - a):
                acc = 0.0
                for i in range(a + 1):
                    for j in range(b + 1):
                        acc += x[i, j] * y[a - i, b - j]
                out[a, b] = acc
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        return self * _reciprocal(Jet._coerce(other))

    def __rtruediv__(self, other) -> "Jet":
        return Jet._coerce(other) * _reciprocal(self)

    def __repr__(self) -> str:
        return f"Jet(value={self.value!r})"


def _compose(derivs: tuple[float, ...], g: Jet) -> Jet:
    """Truncated composition f(g) from f's derivatives at g.value.

    ``derivs[k]`` is the k-th derivative of f at g.value, k = 0..4.
    """
    h = g - g.value
    acc: Jet = Jet.constant(derivs[DEGREE] / _FACT[DEGREE])
    for k in range(DEGREE - 1, -1, -1):
        acc = acc * h + derivs[k] / _FACT[k]
    return acc


def _reciprocal(g: Jet) -> Jet:
    v = g.value
    if v == 0.0:
        raise DomainError("division by a jet with zero value")
    derivs = tuple((-1.0) ** k * _FACT[k] / v ** (k + 1) for k in range(DEGREE + 1))
    return _compose(derivs, g)


def jet_sqrt(g: Jet) -> Jet:
    v = g.value
    if v <= SINGULAR_TOL:
        raise DomainError(f"sqrt of non-positive jet value {v!r}")
    f0 = math.sqrt(v)
    derivs = (f0, 0.5 * f0 / v, -0.25 * f0 / v**2, 0.375 * f0 / v**3, -0.9375 * f0 / v**4)
    return _compose(derivs, g)


def jet_exp(g: Jet) -> Jet:
    f0 = math.exp(g.value)
    return _compose((f0,) * (DEGREE + 1), g)


def jet_ln(g: Jet) -> Jet:
    v = g.value
    if v <= SINGULAR_TOL:
        raise DomainError(f"ln of non-positive jet value {v!r}")
    return _compose((math.log(v), 1.0 / v, -1.0 / v**2, 2.0 / v**3, -6.0 / v**4), g)


def jet_sin(g: Jet) -> Jet:
    sv, cv = math.sin(g.value), math.cos(g.value)
    return _compose((sv, cv, -sv, -cv, sv), g)


def jet_cos(g: Jet) -> Jet:
    sv, cv = math.sin(g.value), math.cos(g.value)
    return _compose((cv, -sv, -cv, sv, cv), g)


def jet_abs(g: Jet) -> Jet:
    if abs(g.value) <= SINGULAR_TOL:
        raise DomainError("abs of a jet with value at the kink (|value| <= 1e-12)")
    return g if g.value > 0 else -g


def jet_ipow(g: Jet, n: int) -> Jet:
    """Integer power by repeated squaring."""
    if n == 0:
        return Jet.constant(1.0)
    if n < 0:
        return _reciprocal(jet_ipow(g, -n))
    out: Jet | None = None
    base = g
    while n:
        if n & 1:
            out = base if out is None else out * base
        n >>= 1
        if n:
            base = base * base
    assert out is not None
    return out


def _is_constant(g: Jet) -> bool:
    c = g.c.copy()
    c[0, 0] = 0.0
    return bool(np.max(np.abs(c)) < 1e-14)


def jet_pow(base: Jet, expo: Jet) -> Jet:
    """base^expo: integer constant exponents by squaring, else exp(e*ln(b))."""
    if _is_constant(expo):
        p = expo.value
        if p == round(p) and abs(p) <= 1024:
            return jet_ipow(base, int(round(p)))
    if base.value <= 0.0:
        raise DomainError(
            f"non-integer power of non-positive base {base.value!r}"
        )
    return jet_exp(expo * jet_ln(base))


_JET_FUNCS = {
    "sqrt": jet_sqrt,
    "exp": jet_exp,
    "ln": jet_ln,
    "sin": jet_sin,
    "cos": jet_cos,
    "abs": jet_abs,
}


def eval_jet(e: Node, r: float, s: float) -> Jet:
    """Evaluate an expression AST as a degree-4 Taylor jet at (r, s)."""

    def rec(node: Node) -> Jet:
        if isinstance(node, Num):
            return Jet.constant(node.value)
        if isinstance(node, Var):
            return Jet.variable_r(r) if node.name == "r" else Jet.variable_s(s)
        if isinstance(node, Neg):
            return -rec(node.arg)
        if isinstance(node, BinOp):
            a = rec(node.left)
            if node.op == "^":
                b = rec(node.right)
                try:
                    return jet_pow(a, b)
                except DomainError as exc:
                    raise DomainError(f"{exc} in {to_string(node)}") from exc
            b = rec(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if node.op == "/":
                try:
                    return a / b
                except DomainError as exc:
                    raise DomainError(f"{exc} in {to_string(node)}") from exc
            raise TypeError(f"unknown operator {node.op!r}")
        if isinstance(node, Call):
            g = rec(node.arg)
            try:
                return _JET_FUNCS[node.func](g)
            except DomainError as exc:
                raise DomainError(f"{exc} in {to_string(node)}") from exc
        raise TypeError(f"not an expression node: {node!r}")

    return rec(e)


# -- finite-difference oracle ----------------------------------------------

# Central stencils of second-order accuracy; offsets paired with weights,
# denominator h**order.
_STENCILS = {
    0: ((0,), (1.0,)),
    1: ((-1, 1), (-0.5, 0.5)),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
}

# Base step per total derivative order.  1e-4 is fine through order 2; the
# higher orders need larger steps to keep 1/h^k roundoff amplification
# below the advertised tolerances.
_STEP = {0: 1e-4, 1: 1e-4, 2: 1e-4, 3: 4e-3, 4: 2e-2}


def _fd_once(e: Node, r: float, s: float, a: int, b: int, h: float) -> float:
    offs_r, w_r = _STENCILS[a]
    offs_s, w_s = _STENCILS[b]
    acc = 0.0
    for oi, wi in zip(offs_r, w_r):
        for oj, wj in zip(offs_s, w_s):
            acc += wi * wj * eval_value(e, r + oi * h, s + oj * h)
    return acc / h ** (a + b)


def fd_partials(e: Node, r: float, s: float, a: int, b: int) -> float:
    """Central-difference estimate of (d/dr)^a (d/ds)^b e at (r, s).

    One Richardson refinement of the second-order central stencils; the
    point must be interior to the domain by at least 4h in each direction.
    """
    if a < 0 or b < 0 or a + b > DEGREE:
        raise ValueError(f"partial order ({a},{b}) outside supported range")
    if a + b == 0:
        return eval_value(e, r, s)
    h = _STEP[a + b] * max(1.0, abs(r), abs(s))
    coarse = _fd_once(e, r, s, a, b, h)
    fine = _fd_once(e, r, s, a, b, h / 2)
    return (4.0 * fine - coarse) / 3.0
