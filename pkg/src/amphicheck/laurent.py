"""Exact arithmetic in the Laurent polynomial ring Z[t1^{+-1}, ..., tr^{+-1}].

Polynomials are immutable and sparse: a map from :class:`Monomial` to a
nonzero Python ``int`` coefficient.  Variables are addressed by 1-based index,
``t1``, ``t2``, ...  Monomials are ordered lexicographically on their dense
exponent vectors with ``t1 > t2 > ... > tr``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from types import MappingProxyType
from typing import NamedTuple, Union

__all__ = [
    "Monomial",
    "LaurentPoly",
    "UnitFactor",
    "PolyError",
    "PolySyntaxError",
    "NotDivisibleError",
    "UnsupportedDivisorError",
    "parse_poly",
    "substitute",
    "divide_exact",
    "equal_up_to_unit",
    "normalize_canonical",
    "invert_variables",
]


class PolyError(ValueError):
    """Base class for errors raised by this module."""


class PolySyntaxError(PolyError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class NotDivisibleError(PolyError):
    """The dividend is not an exact multiple of the divisor."""


class UnsupportedDivisorError(PolyError):
    """A divisor factor is neither a constant, a term, nor a binomial of
    equal-magnitude coefficients."""


class Monomial(tuple):
    """A monomial ``t_{i1}^{e1} ... t_{ik}^{ek}``.

    Stored as the sorted tuple of ``(index, exponent)`` pairs with every
    exponent nonzero, so the empty tuple is the monomial 1.
    """

    __slots__ = ()

    def __new__(cls, exponents: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        acc: dict[int, int] = {}
        for index, exp in items:
            index, exp = int(index), int(exp)
            if index < 1:
                raise PolyError(f"variable index must be >= 1, got {index}")
            acc[index] = acc.get(index, 0) + exp
        return tuple.__new__(cls, sorted((i, e) for i, e in acc.items() if e))

    @classmethod
    def _raw(cls, pairs) -> Monomial:
        return tuple.__new__(cls, pairs)

    @classmethod
    def var(cls, index: int, exp: int = 1) -> Monomial:
        return cls({index: exp})

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self)

    def exponent(self, index: int) -> int:
        for i, e in self:
            if i == index:
                return e
        return 0

    @property
    def max_index(self) -> int:
        return self[-1][0] if self else 0

    def dense(self, n: int) -> tuple[int, ...]:
        out = [0] * n
        for i, e in self:
            out[i - 1] = e
        return tuple(out)

    def __mul__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        if not other:
            return self
        if not self:
            return other
        acc = dict(self)
        for i, e in other:
            acc[i] = acc.get(i, 0) + e
        return Monomial._raw(sorted((i, e) for i, e in acc.items() if e))

    def __truediv__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int) -> Monomial:
        if n == 0:
            return Monomial._raw(())
        return Monomial._raw(tuple((i, e * n) for i, e in self))

    def inverse(self) -> Monomial:
        return self ** -1

    # tuple's own ordering and concatenation are meaningless here
    __lt__ = __le__ = __gt__ = __ge__ = None  # type: ignore[assignment]
    __add__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self:
            return "1"
        return "*".join(f"t{i}" if e == 1 else f"t{i}^{e}" for i, e in self)

    def __repr__(self) -> str:
        return f"Monomial({dict(self)!r})"


_ONE = Monomial._raw(())


class UnitFactor(NamedTuple):
    """A unit ``sign * monomial`` of the Laurent ring."""

    sign: int
    monomial: Monomial

    def inverse(self) -> UnitFactor:
        return UnitFactor(self.sign, self.monomial.inverse())

    def as_poly(self, arity: int | None = None) -> LaurentPoly:
        return LaurentPoly({self.monomial: self.sign}, arity)

    def __str__(self) -> str:
        mono = str(self.monomial)
        return mono if self.sign > 0 else f"-{mono}"


TRIVIAL_UNIT = UnitFactor(1, _ONE)

PolyLike = Union["LaurentPoly", int]


def _lex_key(mono: Monomial, n: int) -> tuple[int, ...]:
    return mono.dense(n)


class LaurentPoly:
    """Immutable Laurent polynomial with integer coefficients.

    ``arity`` is the number of ambient variables; it defaults to the largest
    variable index in use.  Arithmetic between polynomials of different
    arity lands in the larger ring, and equality ignores arity.
    """

    __slots__ = ("_terms", "arity", "_hash")

    def __init__(self, terms: Mapping | int | None = None, arity: int | None = None):
        if terms is None:
            items: dict[Monomial, int] = {}
        elif isinstance(terms, int):
            items = {_ONE: terms} if terms else {}
        else:
            items = {}
            for mono, coeff in terms.items():
                if not isinstance(mono, Monomial):
                    mono = Monomial(mono)
                coeff = int(coeff)
                if coeff:
                    items[mono] = items.get(mono, 0) + coeff
            items = {m: c for m, c in items.items() if c}
        top = max((m.max_index for m in items), default=0)
        if arity is None:
            arity = top
        elif arity < top:
            raise PolyError(f"variable t{top} exceeds arity {arity}")
        if arity < 0:
            raise PolyError("arity must be >= 0")
        self._terms = items
        self.arity = arity
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, int], arity: int) -> LaurentPoly:
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.arity = arity
        obj._hash = None
        return obj

    # construction helpers

    @classmethod
    def zero(cls, arity: int = 0) -> LaurentPoly:
        return cls._raw({}, arity)

    @classmethod
    def constant(cls, c: int, arity: int = 0) -> LaurentPoly:
        return cls._raw({_ONE: c} if c else {}, arity)

    @classmethod
    def var(cls, index: int, arity: int | None = None, exp: int = 1) -> LaurentPoly:
        return cls({Monomial.var(index, exp): 1}, arity)

    @classmethod
    def monomial(cls, mono: Monomial | Mapping[int, int], coeff: int = 1,
                 arity: int | None = None) -> LaurentPoly:
        return cls({Monomial(mono) if not isinstance(mono, Monomial) else mono: coeff}, arity)

    # inspection

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, mono: Monomial | Mapping[int, int]) -> int:
        if not isinstance(mono, Monomial):
            mono = Monomial(mono)
        return self._terms.get(mono, 0)

    def variables(self) -> frozenset[int]:
        return frozenset(i for m in self._terms for i, _ in m)

    def _width(self) -> int:
        return max((m.max_index for m in self._terms), default=0)

    def leading_term(self) -> tuple[Monomial, int]:
        """Lex-greatest monomial (``t1 > t2 > ...``) with its coefficient."""
        if not self._terms:
            raise PolyError("zero polynomial has no leading term")
        n = self._width()
        mono = max(self._terms, key=lambda m: _lex_key(m, n))
        return mono, self._terms[mono]

    def as_unit(self) -> UnitFactor | None:
        """Return ``(sign, m)`` if this polynomial is ``+-m``, else None."""
        if len(self._terms) != 1:
            return None
        (mono, coeff), = self._terms.items()
        if coeff not in (1, -1):
            return None
        return UnitFactor(coeff, mono)

    def as_int(self) -> int | None:
        if not self._terms:
            return 0
        if len(self._terms) == 1 and _ONE in self._terms:
            return self._terms[_ONE]
        return None

    def min_exponents(self) -> dict[int, int]:
        lows: dict[int, int] = {}
        for mono in self._terms:
            present = dict(mono)
            for i in self.variables():
                e = present.get(i, 0)
                if e < lows.get(i, e + 1):
                    lows[i] = e
        return lows

    def evaluate_at_ones(self) -> int:
        return sum(self._terms.values())

    # arithmetic

    def _coerce(self, other) -> LaurentPoly | None:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other, self.arity)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            c = out.get(mono, 0) + coeff
            if c:
                out[mono] = c
            else:
                out.pop(mono, None)
        return LaurentPoly._raw(out, max(self.arity, other.arity))

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()}, self.arity)

    def __pos__(self) -> LaurentPoly:
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero(self.arity)
            return LaurentPoly._raw({m: c * other for m, c in self._terms.items()}, self.arity)
        if isinstance(other, Monomial):
            return self.shift(other)
        if isinstance(other, UnitFactor):
            return self.shift(other.monomial) * other.sign
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                c = out.get(m, 0) + c1 * c2
                if c:
                    out[m] = c
                else:
                    del out[m]
        return LaurentPoly._raw(out, max(self.arity, other.arity))

    __rmul__ = __mul__

    def shift(self, mono: Monomial) -> LaurentPoly:
        """Multiply by a monomial."""
        if not mono:
            return self
        arity = max(self.arity, mono.max_index)
        return LaurentPoly._raw({m * mono: c for m, c in self._terms.items()}, arity)

    def __pow__(self, n: int) -> LaurentPoly:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            unit = self.as_unit()
            if unit is None:
                raise PolyError("negative power of a non-monomial")
            return LaurentPoly._raw({unit.monomial ** n: unit.sign ** (-n)}, self.arity)
        result = LaurentPoly.constant(1, self.arity)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparison

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, int):
            return self.as_int() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # printing

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in descending lex order of their exponent vectors."""
        n = self._width()
        return sorted(self._terms.items(), key=lambda mc: _lex_key(mc[0], n), reverse=True)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, (mono, coeff) in enumerate(self.sorted_terms()):
            mag = abs(coeff)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = str(mono)
            else:
                body = f"{mag}*{mono}"
            if k == 0:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r}, arity={self.arity})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|t(?P<var>\d+)|(?P<op>[-+*^()]))")


class _Parser:
    def __init__(self, text: str, arity: int):
        self.text = text
        self.arity = arity
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m:
                bad = pos + len(stripped[pos:]) - len(stripped[pos:].lstrip())
                raise PolySyntaxError("unexpected character", text, bad)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.tokens.append(("end", "", len(stripped)))
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, pos: int | None = None):
        if pos is None:
            pos = self.peek()[2]
        raise PolySyntaxError(message, self.text, pos)

    def parse(self) -> LaurentPoly:
        value = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected token")
        return LaurentPoly._raw(value._terms, self.arity)

    def expr(self) -> LaurentPoly:
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> LaurentPoly:
        value = self.unary()
        while self.peek()[1] == "*" and self.peek()[0] == "op":
            self.take()
            value = value * self.unary()
        return value

    def unary(self) -> LaurentPoly:
        kind, tok, _ = self.peek()
        if kind == "op" and tok in ("+", "-"):
            self.take()
            value = self.unary()
            return -value if tok == "-" else value
        return self.factor()

    def factor(self) -> LaurentPoly:
        base_pos = self.peek()[2]
        base = self.base()
        kind, tok, _ = self.peek()
        if not (kind == "op" and tok == "^"):
            return base
        self.take()
        sign = 1
        kind, tok, pos = self.peek()
        if kind == "op" and tok in ("+", "-"):
            self.take()
            sign = -1 if tok == "-" else 1
            kind, tok, pos = self.peek()
        if kind != "int":
            self.error("exponent must be an integer literal")
        self.take()
        n = sign * int(tok)
        if n < 0 and base.as_unit() is None:
            self.error("negative exponent on a non-monomial base", base_pos)
        return base ** n

    def base(self) -> LaurentPoly:
        kind, tok, pos = self.take()
        if kind == "int":
            return LaurentPoly.constant(int(tok), self.arity)
        if kind == "var":
            index = int(tok)
            if index < 1:
                self.error("variable index must be >= 1", pos)
            if index > self.arity:
                self.error(f"variable t{index} exceeds arity {self.arity}", pos)
            return LaurentPoly._raw({Monomial._raw(((index, 1),)): 1}, self.arity)
        if kind == "op" and tok == "(":
            value = self.expr()
            kind, tok, pos = self.take()
            if not (kind == "op" and tok == ")"):
                self.error("expected ')'", pos)
            return value
        if kind == "end":
            self.error("unexpected end of input", pos)
        self.error(f"unexpected token {tok!r}", pos)


def parse_poly(text: str, arity: int) -> LaurentPoly:
    """Parse an expression such as ``"(t1-1)*(t2-1)"`` into a polynomial.

    Grammar::

        expr   := term (('+'|'-') term)*
        term   := unary ('*' unary)*
        unary  := ('+'|'-') unary | factor
        factor := base ('^' ['-'|'+'] int)?
        base   := int | 't' digit+ | '(' expr ')'

    Negative exponents are allowed only on a base that evaluates to
    ``+-monomial``.  Quotients are not expressible; use :func:`divide_exact`.
    """
    if arity < 0:
        raise PolyError("arity must be >= 0")
    return _Parser(text, arity).parse()


# ---------------------------------------------------------------------------
# substitution


def _as_signed_monomial(value) -> UnitFactor:
    if isinstance(value, UnitFactor):
        return value
    if isinstance(value, Monomial):
        return UnitFactor(1, value)
    if isinstance(value, int):
        if value in (1, -1):
            return UnitFactor(value, _ONE)
        raise PolyError(f"substituted value {value} is not +-monomial")
    if isinstance(value, LaurentPoly):
        unit = value.as_unit()
        if unit is None:
            raise PolyError(f"substituted value {value} is not +-monomial")
        return unit
    if isinstance(value, tuple) and len(value) == 2:
        sign, mono = value
        if sign not in (1, -1):
            raise PolyError(f"bad sign {sign!r}")
        return UnitFactor(sign, mono if isinstance(mono, Monomial) else Monomial(mono))
    raise PolyError(f"cannot substitute {value!r}")


def substitute(p: LaurentPoly, assignment: Mapping[int, object],
               arity: int | None = None) -> LaurentPoly:
    """Apply the ring homomorphism ``t_i -> assignment[i]``.

    Every value must be ``+-monomial`` (a :class:`LaurentPoly`, a
    :class:`Monomial`, a :class:`UnitFactor` or the integers ``+-1``), which
    keeps the image inside the Laurent ring.  Unassigned variables are fixed.
    """
    images = {int(i): _as_signed_monomial(v) for i, v in assignment.items()}
    top = max((u.monomial.max_index for u in images.values()), default=0)
    target = max(p.arity, top) if arity is None else arity
    if not images:
        return LaurentPoly._raw(dict(p._terms), target)
    out: dict[Monomial, int] = {}
    for mono, coeff in p._terms.items():
        acc: dict[int, int] = {}
        for i, e in mono:
            img = images.get(i)
            if img is None:
                acc[i] = acc.get(i, 0) + e
                continue
            if img.sign < 0 and e & 1:
                coeff = -coeff
            for j, f in img.monomial:
                acc[j] = acc.get(j, 0) + f * e
        m = Monomial._raw(sorted((i, e) for i, e in acc.items() if e))
        c = out.get(m, 0) + coeff
        if c:
            out[m] = c
        else:
            del out[m]
    top = max((m.max_index for m in out), default=0)
    if top > target:
        raise PolyError(f"image uses t{top}, beyond arity {target}")
    return LaurentPoly._raw(out, target)


def invert_variables(p: LaurentPoly, indices: Iterable[int] | None = None) -> LaurentPoly:
    """Substitute ``t_i -> t_i^{-1}`` for the given indices (default: all)."""
    if indices is None:
        indices = range(1, p.arity + 1)
    return substitute(p, {i: Monomial._raw(((i, -1),)) for i in indices}, p.arity)


# ---------------------------------------------------------------------------
# exact division


def _divide_constant(p: LaurentPoly, c: int) -> LaurentPoly:
    out = {}
    for mono, coeff in p._terms.items():
        q, r = divmod(coeff, c)
        if r:
            raise NotDivisibleError(f"{p} is not divisible by {c}")
        out[mono] = q
    return LaurentPoly._raw(out, p.arity)


def _divide_one_plus(p: LaurentPoly, s: int, w: Monomial) -> LaurentPoly:
    """Divide by ``1 + s*w`` for a monomial ``w != 1`` and ``s = +-1``.

    The support of ``p`` splits into cosets of the subgroup generated by
    ``w``; on each coset ``p`` is a one-variable Laurent polynomial in ``w``
    and the division is synthetic division by ``1 + s*X``.
    """
    n = max(p._width(), w.max_index)
    v = w.dense(n)
    pivot = next(k for k, e in enumerate(v) if e)
    step = v[pivot]
    classes: dict[tuple[int, ...], dict[int, int]] = {}
    for mono, coeff in p._terms.items():
        e = mono.dense(n)
        k = e[pivot] // step
        base = tuple(a - k * b for a, b in zip(e, v))
        classes.setdefault(base, {})[k] = coeff

    out: dict[Monomial, int] = {}
    for base, series in classes.items():
        lo, hi = min(series), max(series)
        a = [series.get(lo + i, 0) for i in range(hi - lo + 1)]
        if len(a) < 2:
            raise NotDivisibleError(f"{p} is not divisible by 1 {'+' if s > 0 else '-'} {w}")
        q = [a[0]]
        for i in range(1, len(a) - 1):
            q.append(a[i] - s * q[-1])
        if a[-1] != s * q[-1]:
            raise NotDivisibleError(f"{p} is not divisible by 1 {'+' if s > 0 else '-'} {w}")
        for i, c in enumerate(q):
            if c:
                k = lo + i
                dense = tuple(x + k * y for x, y in zip(base, v))
                out[Monomial._raw(tuple((j + 1, x) for j, x in enumerate(dense) if x))] = c
    return LaurentPoly._raw(out, p.arity)


def _divide_factor(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    arity = max(p.arity, d.arity)
    if p.is_zero():
        return LaurentPoly.zero(arity)
    terms = d.sorted_terms()
    if len(terms) == 1:
        (mono, c), = terms
        q = _divide_constant(p, c).shift(mono.inverse())
    elif len(terms) == 2 and abs(terms[0][1]) == abs(terms[1][1]):
        (m1, c1), (m2, c2) = terms
        try:
            q = _divide_constant(p, c1).shift(m1.inverse())
            q = _divide_one_plus(q, c2 // c1, m2 / m1)
        except NotDivisibleError:
            raise NotDivisibleError(f"{p} is not divisible by {d}") from None
    else:
        raise UnsupportedDivisorError(
            f"divisor {d} is not a constant, a term, or a difference of two monomials")
    return LaurentPoly._raw(q._terms, arity)


def divide_exact(p: LaurentPoly, d: PolyLike | Sequence[PolyLike]) -> LaurentPoly:
    """Return ``q`` with ``q * d == p`` exactly.

    ``d`` is a single factor or a sequence of factors.  Each factor must be a
    nonzero integer, a single term, or ``c*(m1 +- m2)`` for monomials
    ``m1 != m2``; anything else raises :class:`UnsupportedDivisorError`.
    Raises :class:`NotDivisibleError` when a remainder is left.
    """
    factors = d if isinstance(d, (list, tuple)) else [d]
    q = p
    for factor in factors:
        if isinstance(factor, int):
            factor = LaurentPoly.constant(factor, p.arity)
        q = _divide_factor(q, factor)
    return q


# ---------------------------------------------------------------------------
# units


def equal_up_to_unit(p: LaurentPoly, q: LaurentPoly) -> UnitFactor | None:
    """Return ``u`` with ``p == u * q``, or None if no unit relates them."""
    if p.is_zero() or q.is_zero():
        return TRIVIAL_UNIT if p.is_zero() and q.is_zero() else None
    if len(p) != len(q):
        return None
    mp, cp = p.leading_term()
    mq, cq = q.leading_term()
    if abs(cp) != abs(cq):
        return None
    unit = UnitFactor(1 if cp == cq else -1, mp / mq)
    if (q * unit)._terms == p._terms:
        return unit
    return None


def normalize_canonical(p: LaurentPoly) -> LaurentPoly:
    """Canonical representative of the class of ``p`` modulo units.

    Every variable's minimum exponent is shifted to 0 and the sign is chosen
    so that the lex-leading coefficient is positive.
    """
    if p.is_zero():
        return p
    lows = p.min_exponents()
    shifted = p.shift(Monomial({i: -e for i, e in lows.items()}))
    if shifted.leading_term()[1] < 0:
        shifted = -shifted
    return shifted
