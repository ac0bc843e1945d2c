"""Closed-form link families used as fixtures and demonstration data."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .laurent import LaurentPoly, Monomial, divide_exact, parse_poly
from .linkdata import LinkRecord
from .obstruction import SymmetricFactorFamily, proper_index_sets


def _zero_matrix(r: int) -> list[list[int]]:
    return [[0] * r for _ in range(r)]


def _unknots(r: int) -> tuple[LaurentPoly, ...]:
    return tuple(LaurentPoly.constant(1, r) for _ in range(r))


def milnor_record(lam: int) -> LinkRecord:
    """The ``lam``-component Milnor link (``lam = 3`` is the Borromean rings).

    Its polynomial is ``(t1-1)(t2-1)(t3-1)`` for three components and zero
    otherwise.  Only the three-component case carries sublink data (its
    two-component sublinks are trivial links, with polynomial 0).
    """
    if lam < 3:
        raise ValueError(f"Milnor links need at least 3 components, got {lam}")
    if lam == 3:
        delta = parse_poly("(t1-1)*(t2-1)*(t3-1)", 3)
        sublinks = {J: LaurentPoly.zero(3) for J in proper_index_sets(3, 2, 2)}
    else:
        delta = LaurentPoly.zero(lam)
        sublinks = None
    return LinkRecord(f"milnor-{lam}", lam, _zero_matrix(lam), delta, sublinks, _unknots(lam))


def geometric_quotient(a: int, arity: int = 2) -> LaurentPoly:
    """``((t1 t2)^a - 1) / (t1 t2 - 1)`` as a Laurent polynomial, ``a != 0``."""
    x = LaurentPoly.monomial({1: 1, 2: 1}, 1, arity)
    return divide_exact(x ** a - 1, x - 1)


def two_bridge_caa_record(a: int, b: int) -> LinkRecord:
    """The two-bridge link ``C(2a, 2b, -2a)``.

    Its polynomial is ``b (t1-1)(t2-1) {((t1 t2)^a - 1)/(t1 t2 - 1)}^2``;
    ``a = b = 1`` gives the Whitehead link.
    """
    if a == 0 or b == 0:
        raise ValueError("C(2a, 2b, -2a) needs a != 0 and b != 0")
    base = parse_poly("(t1-1)*(t2-1)", 2)
    q = geometric_quotient(a)
    return LinkRecord(f"C({2 * a},{2 * b},{-2 * a})", 2, _zero_matrix(2), base * q * q * b)


_NAMED = {
    "10n59": "(t1-1)*(t2-1)*(t1-t2)*(t1*t2-1)",
    "11n247": "0",
}


def named_fixture(name: str) -> LinkRecord:
    """Hard-coded records: ``10n59``, ``11n247``, ``borromean``, ``whitehead``."""
    key = name.lower()
    if key == "borromean":
        rec = milnor_record(3)
        return LinkRecord("borromean", 3, rec.linking_matrix, rec.alexander,
                          rec.sublinks, rec.knot_polys)
    if key == "whitehead":
        rec = two_bridge_caa_record(1, 1)
        return LinkRecord("whitehead", 2, rec.linking_matrix, rec.alexander)
    if key in _NAMED:
        return LinkRecord(key, 2, _zero_matrix(2), parse_poly(_NAMED[key], 2))
    raise KeyError(f"unknown fixture {name!r}; known: borromean, whitehead, "
                   + ", ".join(_NAMED))


FIXTURE_NAMES = ("borromean", "whitehead", *_NAMED)


@dataclass(frozen=True)
class FamilySpec:
    """What to generate: ``kind`` is one of ``milnor``, ``two-bridge``,
    ``borromean``, ``whitehead`` or ``fixture``."""

    kind: str
    params: tuple = ()

    def __post_init__(self):
        kind = self.kind.lower().replace("_", "-")
        object.__setattr__(self, "kind", kind)
        if kind == "milnor":
            (lam,) = self.params
            if int(lam) < 3:
                raise ValueError("milnor needs lambda >= 3")
        elif kind == "two-bridge":
            a, b = self.params
            if int(a) == 0 or int(b) == 0:
                raise ValueError("two-bridge needs a != 0 and b != 0")
        elif kind == "fixture":
            (name,) = self.params
            if str(name).lower() not in FIXTURE_NAMES:
                raise ValueError(f"unknown fixture {name!r}")
        elif kind in ("borromean", "whitehead"):
            if self.params:
                raise ValueError(f"{kind} takes no parameters")
        else:
            raise ValueError(f"unknown family {self.kind!r}")

    def generate(self) -> LinkRecord:
        if self.kind == "milnor":
            return milnor_record(int(self.params[0]))
        if self.kind == "two-bridge":
            return two_bridge_caa_record(int(self.params[0]), int(self.params[1]))
        if self.kind == "fixture":
            return named_fixture(str(self.params[0]))
        return named_fixture(self.kind)


# ---------------------------------------------------------------------------
# random symmetric families


def random_symmetric_poly(rng: random.Random, variables, max_degree: int = 3,
                          max_coeff: int = 5, max_orbits: int = 4, arity: int | None = None
                          ) -> LaurentPoly:
    """Random ``f`` with ``f(t) = f(t^{-1})`` in the given variables.

    Monomials have total absolute degree at most ``max_degree`` and
    coefficients lie in ``[-max_coeff, max_coeff]``; ``m`` and ``m^{-1}``
    always share a coefficient.
    """
    variables = list(variables)
    terms: dict[Monomial, int] = {}
    for _ in range(rng.randint(1, max_orbits)):
        rng.shuffle(variables)
        exps = {}
        budget = rng.randint(0, max_degree)
        for i in variables:
            if budget <= 0:
                break
            e = rng.randint(-budget, budget)
            exps[i] = e
            budget -= abs(e)
        mono = Monomial(exps)
        c = rng.randint(-max_coeff, max_coeff)
        terms[mono] = c
        terms[mono.inverse()] = c
    return LaurentPoly(terms, max(variables) if arity is None else arity)


def random_family(rng: random.Random, r: int, zero_prob: float = 0.25,
                  **poly_kwargs) -> SymmetricFactorFamily:
    """A complete family of random symmetric factors; each ``f_J`` is zero
    with probability ``zero_prob``."""
    factors = {}
    for J in proper_index_sets(r):
        if rng.random() < zero_prob:
            factors[J] = LaurentPoly.zero(r)
        else:
            factors[J] = random_symmetric_poly(rng, J, arity=r, **poly_kwargs)
    return SymmetricFactorFamily(r, factors, _unknots(r))
