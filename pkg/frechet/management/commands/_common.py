"""
Shared plumbing for the frechet management commands.

Exit codes: 0 ok, 2 usage or parse error, 3 p out of range, 4 io error,
5 semantic failure (unequal margins, failed verification, failed sanity check).
"""
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction

from django.core.exceptions import ValidationError
from django.core.management.base import CommandError

from frechet.core import MarginParam, format_rational, parse_rational
from frechet.exceptions import MalformedRational, OutOfRange

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RANGE = 3
EXIT_IO = 4
EXIT_SEMANTIC = 5


def error_text(exc: ValidationError) -> str:
    return "; ".join(exc.messages)


def parse_rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except MalformedRational as e:
        raise CommandError(error_text(e), returncode=EXIT_USAGE)


def parse_param_arg(text: str) -> MarginParam:
    value = parse_rational_arg(text)
    try:
        return MarginParam.of(value)
    except OutOfRange as e:
        raise CommandError(error_text(e), returncode=EXIT_RANGE)


def decimal_text(value, places: int) -> str:
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = max(places + 20, 28)
        exact = Decimal(value.numerator) / Decimal(value.denominator)
        return str(exact.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def rational_text(value, places=None) -> str:
    """'num/den', followed by a display-only decimal when ``places`` is set."""
    text = format_rational(value)
    if places is None:
        return text
    return f"{text} ({decimal_text(value, places)})"
