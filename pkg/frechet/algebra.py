"""
Polynomial representation of F_3(p).

The linear map H sends a pmf f to P_f(x) = m(x) . f, where

    m(x) = (1, x1, x2, x1 x2, -x1 x2 + c, -x2 + c, -x1 + c, -1 + c),   c = (2s - t) / s.

Its image is spanned by the fundamental polynomial F+ = x1 x2 - x1 - x2 + 1
and its kernel contains the comonotone and complementary-pair pmfs.
Polynomials are handled with sympy over QQ and exposed with Fraction
coefficients.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .core import BernoulliPmf, MarginParam, format_rational, margins
from .exceptions import NotAMember, UnsupportedDimension

logger = logging.getLogger(__name__)

x1, x2 = sympy.symbols("x1 x2")

# canonical coefficient order a_00 + a_10 x1 + a_01 x2 + a_11 x1 x2
EXPONENTS = ((0, 0), (1, 0), (0, 1), (1, 1))


def to_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def to_sympy(value) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _require_d3(d: int):
    if d != 3:
        raise UnsupportedDimension(f"The polynomial map is defined for d=3 only, got d={d}.")


# -------------------------
# Multilinear polynomials
# -------------------------
@dataclass(frozen=True)
class MultilinearPoly:
    """Square-free polynomial in x1, x2 with coefficients stored in EXPONENTS order."""
    d: int
    coeffs: Tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(a) for a in self.coeffs))

    @classmethod
    def from_expr(cls, expr, d: int = 3) -> "MultilinearPoly":
        poly = sympy.Poly(sympy.expand(expr), x1, x2, domain=sympy.QQ)
        terms: Dict[Tuple[int, int], Fraction] = {}
        for monomial, coeff in poly.terms():
            if any(e > 1 for e in monomial):
                raise ValueError(f"{expr} is not square-free.")
            terms[monomial] = to_fraction(coeff)
        return cls(d, tuple(terms.get(alpha, Fraction(0)) for alpha in EXPONENTS))

    @classmethod
    def zero(cls, d: int = 3) -> "MultilinearPoly":
        return cls(d, (Fraction(0),) * 4)

    def coefficient(self, alpha: Tuple[int, int]) -> Fraction:
        return self.coeffs[EXPONENTS.index(tuple(alpha))]

    def as_expr(self):
        return sum(
            (to_sympy(a) * x1 ** e1 * x2 ** e2 for a, (e1, e2) in zip(self.coeffs, EXPONENTS)),
            sympy.Integer(0),
        )

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def evaluate(self, point: Sequence) -> Fraction:
        u, v = (Fraction(c) for c in point)
        a00, a10, a01, a11 = self.coeffs
        return a00 + a10 * u + a01 * v + a11 * u * v

    def scale(self, factor) -> "MultilinearPoly":
        factor = Fraction(factor)
        return MultilinearPoly(self.d, tuple(factor * a for a in self.coeffs))

    def __add__(self, other: "MultilinearPoly") -> "MultilinearPoly":
        return MultilinearPoly(self.d, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "MultilinearPoly":
        return self.scale(-1)

    def __str__(self):
        names = ("", "x1", "x2", "x1x2")
        parts = []
        for a, name in zip(self.coeffs, names):
            parts.append(format_rational(a) + (f"*{name}" if name else ""))
        return " + ".join(parts)


# -------------------------
# The map H
# -------------------------
def monomial_vector(p) -> List:
    """m(x) as a flat row of 8 sympy expressions in reverse-lex atom order."""
    c = to_sympy(MarginParam.of(p).c)
    return [1, x1, x2, x1 * x2, -x1 * x2 + c, -x2 + c, -x1 + c, -1 + c]


def _require_member(param: MarginParam, f: BernoulliPmf):
    if any(m != param.p for m in margins(f)):
        raise NotAMember(f"pmf is not a member of F_{f.d}({param}).")


def apply_map(p, f: BernoulliPmf) -> MultilinearPoly:
    _require_d3(f.d)
    param = MarginParam.of(p)
    _require_member(param, f)
    expr = sum(
        (m * to_sympy(v) for m, v in zip(monomial_vector(param), f.values)),
        sympy.Integer(0),
    )
    return MultilinearPoly.from_expr(expr)


def kernel_basis(d: int, p) -> List[BernoulliPmf]:
    """
    Kernel basis pmfs: the upper Frechet pmf, then one pmf per complementary
    pair {x, 1 - x} with mass 1 - 2p at the origin and p on the pair.
    """
    q = MarginParam.of(p).p
    n = 2 ** d
    upper = [Fraction(0)] * n
    upper[0], upper[-1] = 1 - q, q
    basis = [BernoulliPmf(d, tuple(upper))]
    for i in range(1, n // 2):
        values = [Fraction(0)] * n
        values[0] = 1 - 2 * q
        values[i] = q
        values[n - 1 - i] = q
        basis.append(BernoulliPmf(d, tuple(values)))
    return basis


def fundamental_polynomials(d: int = 3) -> Tuple[MultilinearPoly, MultilinearPoly]:
    _require_d3(d)
    plus = MultilinearPoly.from_expr(x1 * x2 - x1 - x2 + 1)
    return plus, -plus


def express_in_fundamentals(poly: MultilinearPoly) -> Optional[Fraction]:
    """gamma with poly = gamma * F+, or None when poly is not a multiple of F+."""
    plus, _ = fundamental_polynomials(poly.d)
    gamma = poly.coefficient((1, 1))
    if plus.scale(gamma) != poly:
        return None
    return gamma


def is_in_kernel(p, f: BernoulliPmf) -> bool:
    return apply_map(p, f).is_zero


def type0_sign(p, f: BernoulliPmf) -> int:
    """+1 for a positive multiple of F+, -1 for a multiple of F-, 0 on the kernel."""
    gamma = express_in_fundamentals(apply_map(p, f))
    if gamma is None:
        raise ValueError("Image polynomial is not a multiple of F+.")
    return (gamma > 0) - (gamma < 0)


# -------------------------
# Probability generating function
# -------------------------
def pgf_symbols(d: int):
    return sympy.symbols(" ".join(f"x{k}" for k in range(1, d + 1)))


def pgf(f: BernoulliPmf):
    """g(x) = E[x1^X1 ... xd^Xd]."""
    xs = pgf_symbols(f.d)
    return sympy.expand(sum(
        (to_sympy(v) * sympy.Mul(*[xk ** bit for xk, bit in zip(xs, x)]) for x, v in f.items()),
        sympy.Integer(0),
    ))


def pgf_second_moment(f: BernoulliPmf, i: int, j: int) -> Fraction:
    """d^2 g / dx_i dx_j at the all-ones point."""
    xs = pgf_symbols(f.d)
    derivative = sympy.diff(pgf(f), xs[i - 1], xs[j - 1])
    return to_fraction(derivative.subs({xk: 1 for xk in xs}))
