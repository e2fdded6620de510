"""Chemical formula parsing.

A formula is a sequence of element symbols and parenthesised/bracketed
groups, each with an optional integer subscript, followed by an optional
charge suffix.  Two charge spellings are accepted:

* caret form: ``^2+``, ``^3-``, ``^+`` (magnitude defaults to 1)
* bare sign:  ``+`` or ``-`` (magnitude 1)

A bare trailing digit before a sign (``ClO2-``) is always read as a
subscript plus a unit charge, never as a charge magnitude; multiply
charged ions must use the caret form (``Fe^2+``).
"""
from __future__ import annotations

import re

__all__ = ["FormulaError", "parse_formula", "composition_add"]

# Symbols of the elements this grammar recognises (H through Og).
_ELEMENTS = frozenset(
    """
    H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe Co
    Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb
    Te I Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W Re
    Os Ir Pt Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es
    Fm Md No Lr Rf Db Sg Bh Hs Mt Ds Rg Cn Nh Fl Mc Lv Ts Og
    """.split()
)

_CHARGE_RE = re.compile(r"(?:\^(?P<mag>\d*)(?P<csign>[+-])|(?P<bare>[+-]))$")
_OPENERS = {"(": ")", "[": "]"}


class FormulaError(ValueError):
    """Raised for malformed formulas; carries the offending position."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def composition_add(
    target: dict[str, int], source: dict[str, int], factor: int = 1
) -> None:
    """Accumulate ``source`` element counts into ``target`` in place."""
    for symbol, count in source.items():
        target[symbol] = target.get(symbol, 0) + count * factor


def _split_charge(text: str) -> tuple[str, int]:
    match = _CHARGE_RE.search(text)
    if match is None:
        return text, 0
    if match.group("bare") is not None:
        return text[: match.start()], 1 if match.group("bare") == "+" else -1
    magnitude = int(match.group("mag")) if match.group("mag") else 1
    if magnitude == 0:
        raise FormulaError("charge magnitude must be >= 1", text, match.start())
    sign = 1 if match.group("csign") == "+" else -1
    return text[: match.start()], magnitude * sign


def parse_formula(text: str) -> tuple[dict[str, int], int]:
    """Parse ``text`` into ``(element_counts, charge)``.

    >>> parse_formula("Fe(SCN)3")
    ({'Fe': 1, 'S': 3, 'C': 3, 'N': 3}, 0)
    >>> parse_formula("SO4^2-")
    ({'S': 1, 'O': 4}, -2)
    """
    if not isinstance(text, str) or not text:
        raise FormulaError("empty formula", text or "", 0)
    body, charge = _split_charge(text)
    if not body:
        raise FormulaError("formula has no composition", text, 0)

    pos = 0

    def read_count(default: int = 1) -> int:
        nonlocal pos
        start = pos
        while pos < len(body) and body[pos].isdigit():
            pos += 1
        if pos == start:
            return default
        value = int(body[start:pos])
        if value < 1:
            raise FormulaError("subscript must be >= 1", text, start)
        return value

    def read_group(closer: str | None) -> dict[str, int]:
        nonlocal pos
        counts: dict[str, int] = {}
        while pos < len(body):
            ch = body[pos]
            if ch in _OPENERS:
                opener_pos = pos
                pos += 1
                inner = read_group(_OPENERS[ch])
                if pos >= len(body) or body[pos] != _OPENERS[ch]:
                    raise FormulaError("unclosed group", text, opener_pos)
                pos += 1
                composition_add(counts, inner, read_count())
            elif ch in ")]":
                if ch != closer:
                    raise FormulaError("unmatched closer", text, pos)
                if not counts:
                    raise FormulaError("empty group", text, pos)
                return counts
            elif ch.isupper():
                symbol_pos = pos
                symbol = ch
                pos += 1
                if pos < len(body) and body[pos].islower():
                    if symbol + body[pos] in _ELEMENTS:
                        symbol += body[pos]
                        pos += 1
                if symbol not in _ELEMENTS:
                    raise FormulaError(
                        f"unknown element {symbol!r}", text, symbol_pos
                    )
                composition_add(counts, {symbol: 1}, read_count())
            else:
                raise FormulaError(f"unexpected character {ch!r}", text, pos)
        if closer is not None:
            raise FormulaError("unclosed group", text, pos)
        return counts

    counts = read_group(None)
    if not counts:
        raise FormulaError("formula has no composition", text, 0)
    return counts, charge
