"""Exact fixed-point money arithmetic shared by every solver.

Prices, valuations and revenues are compared for exact equality throughout
the package (candidate prices must tie bit-exactly), so amounts are stored
as integer counts of 1/SCALE units and arithmetic never rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction


class MoneyError(ValueError):
    """Amount cannot be represented at the configured precision."""


#: raw units per whole unit; three decimal places by default
SCALE = 1000


def set_precision(places: int) -> None:
    """Change the global precision to ``places`` decimal digits.

    Call once at process start: amounts created under different precisions
    must never be mixed.
    """
    global SCALE
    if places < 0:
        raise MoneyError(f"precision must be non-negative, got {places}")
    SCALE = 10**places


@dataclass(frozen=True, slots=True, order=True)
class Money:
    """An exact amount stored as an integer count of 1/SCALE units."""

    raw: int

    @classmethod
    def from_units(cls, units: int) -> "Money":
        return cls(units * SCALE)

    @classmethod
    def parse(cls, text: str) -> "Money":
        """Parse a decimal string exactly; reject amounts finer than SCALE."""
        try:
            dec = Decimal(text)
        except InvalidOperation:
            raise MoneyError(f"not a decimal amount: {text!r}") from None
        scaled = dec * SCALE
        if scaled != scaled.to_integral_value():
            raise MoneyError(f"{text!r} is finer than 1/{SCALE} units")
        return cls(int(scaled))

    def as_fraction(self) -> Fraction:
        return Fraction(self.raw, SCALE)

    def __str__(self) -> str:
        sign = "-" if self.raw < 0 else ""
        whole, rem = divmod(abs(self.raw), SCALE)
        if rem == 0:
            return f"{sign}{whole}"
        places = len(str(SCALE)) - 1
        frac = str(rem).rjust(places, "0").rstrip("0")
        return f"{sign}{whole}.{frac}"

    def __add__(self, other: "Money") -> "Money":
        if not isinstance(other, Money):
            return NotImplemented
        return Money(self.raw + other.raw)

    def __sub__(self, other: "Money") -> "Money":
        if not isinstance(other, Money):
            return NotImplemented
        return Money(self.raw - other.raw)

    def __neg__(self) -> "Money":
        return Money(-self.raw)

    def __mul__(self, k: int) -> "Money":
        if not isinstance(k, int):
            return NotImplemented
        return Money(self.raw * k)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return self.raw != 0


ZERO = Money(0)


def fraction_to_decimal(fr: Fraction) -> str:
    """Exact decimal rendering of a fraction whose denominator is 2^a * 5^b."""
    den = fr.denominator
    two = five = 0
    while den % 2 == 0:
        den //= 2
        two += 1
    while den % 5 == 0:
        den //= 5
        five += 1
    if den != 1:
        raise MoneyError(f"{fr} has no terminating decimal form")
    places = max(two, five)
    scaled = fr.numerator * 10**places // fr.denominator
    sign = "-" if scaled < 0 else ""
    whole, rem = divmod(abs(scaled), 10**places) if places else (abs(scaled), 0)
    if rem == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}." + str(rem).rjust(places, "0").rstrip("0")


def fraction_str(fr: Fraction) -> str:
    """Decimal string when terminating, ``num/den`` otherwise."""
    try:
        return fraction_to_decimal(fr)
    except MoneyError:
        return f"{fr.numerator}/{fr.denominator}"
