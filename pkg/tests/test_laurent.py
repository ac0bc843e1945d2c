import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from amphicheck.laurent import (
    LaurentPoly,
    Monomial,
    NotDivisibleError,
    PolyError,
    PolySyntaxError,
    UnitFactor,
    UnsupportedDivisorError,
    divide_exact,
    equal_up_to_unit,
    invert_variables,
    normalize_canonical,
    parse_poly,
    substitute,
)

R = 3


def P(text, arity=R):
    return parse_poly(text, arity)


monomials = st.dictionaries(st.integers(1, R), st.integers(-3, 3), max_size=R).map(Monomial)
polys = st.dictionaries(monomials, st.integers(-6, 6), max_size=5).map(lambda d: LaurentPoly(d, R))
units = st.builds(UnitFactor, st.sampled_from([1, -1]), monomials)


@st.composite
def admissible_divisors(draw):
    kind = draw(st.sampled_from(["const", "term", "binomial"]))
    if kind == "const":
        return LaurentPoly.constant(draw(st.sampled_from([-3, -2, -1, 1, 2, 5])), R)
    m1 = draw(monomials)
    c = draw(st.sampled_from([-2, -1, 1, 2]))
    if kind == "term":
        return LaurentPoly({m1: c}, R)
    m2 = draw(monomials)
    assume(m1 != m2)
    return LaurentPoly({m1: c, m2: draw(st.sampled_from([c, -c]))}, R)


# parsing and printing


def test_parse_expands():
    assert str(P("(t1-1)*(t2-1)", 2)) == "t1*t2 - t1 - t2 + 1"


def test_parse_zero():
    p = P("0")
    assert p.is_zero() and p.arity == 3
    assert str(p) == "0"


def test_parse_rejects_negative_power_of_non_monomial():
    with pytest.raises(PolySyntaxError, match="negative exponent"):
        P("3*(t1-1)*(t2-1)*((t1*t2)^1-1)^2*(t1*t2-1)^-2", 2)


def test_parse_rejects_unknown_symbol():
    with pytest.raises(PolySyntaxError) as info:
        P("b*(t1-1)*(t2-1)*((t1*t2)^1-1)^2*(t1*t2-1)^-2", 2)
    assert info.value.position == 0


def test_parse_monomial_negative_powers():
    assert P("(t1*t2)^-2") == LaurentPoly.monomial({1: -2, 2: -2}, 1, 3)
    assert P("t3^-1 * -2") == LaurentPoly.monomial({3: -1}, -2, 3)
    assert P("(-t1)^-3") == LaurentPoly.monomial({1: -3}, -1)


@pytest.mark.parametrize("text", ["t4", "t0", "(t1", "t1 +", "t1^t2", "2^-1", "t1 ** 2", "t1 % 2"])
def test_parse_errors(text):
    with pytest.raises(PolyError):
        P(text)


def test_syntax_error_position():
    with pytest.raises(PolySyntaxError) as info:
        P("t1 + $")
    assert info.value.position == 5


def test_arity_zero_is_integers():
    assert P("(2-5)*3", 0) == -9
    with pytest.raises(PolyError):
        P("t1", 0)


@given(polys)
def test_print_parse_roundtrip(p):
    text = str(p)
    q = parse_poly(text, R)
    assert q == p
    assert str(q) == text


# arithmetic


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0
    assert (a * 0).is_zero()


def test_power_and_units():
    t = LaurentPoly.var(1, 1)
    assert (t - 1) ** 3 == P("t1^3 - 3*t1^2 + 3*t1 - 1", 1)
    assert t ** -2 * t ** 2 == 1
    with pytest.raises(PolyError):
        (t + 1) ** -1


# substitution


def test_substitute_kills_factor():
    p = P("(t1-1)*(t2-1)*(t3-1)")
    assert substitute(p, {3: 1}).is_zero()


def test_substitute_diagonal_of_10n59():
    p = P("(t1-1)*(t2-1)*(t1*t2-1)*(t1-t2)", 2)
    t = LaurentPoly.var(1, 1)
    assert substitute(p, {1: t, 2: t}, arity=1).is_zero()


def test_substitute_inversion():
    p = P("t1*t2 - 1", 2)
    out = substitute(p, {1: Monomial({1: -1}), 2: Monomial({2: -1})})
    assert out == P("t1^-1*t2^-1 - 1", 2)


def test_substitute_rejects_non_monomial():
    with pytest.raises(PolyError):
        substitute(P("t1"), {1: P("t1 + 1")})
    with pytest.raises(PolyError):
        substitute(P("t1"), {1: 2})


def test_substitute_negative_sign():
    assert substitute(P("t1^3 + t1^2"), {1: -1}) == 0
    assert substitute(P("t1^3 + t1^2"), {1: P("-t2")}) == P("-t2^3 + t2^2")


@given(polys)
def test_identity_substitution(p):
    assert substitute(p, {}) == p
    assert substitute(p, {i: Monomial({i: 1}) for i in range(1, R + 1)}) == p


@given(polys, polys, st.dictionaries(st.integers(1, R), units, max_size=R))
def test_substitution_is_homomorphism(p, q, sigma):
    assert substitute(p * q, sigma) == substitute(p, sigma) * substitute(q, sigma)
    assert substitute(p + q, sigma) == substitute(p, sigma) + substitute(q, sigma)


# division


def test_divide_examples():
    assert divide_exact(P("t1*t2 - t1 - t2 + 1", 2), P("t1 - 1", 2)) == P("t2 - 1", 2)
    assert divide_exact(P("(t1*t2)^2 - 1", 2), P("t1*t2 - 1", 2)) == P("t1*t2 + 1", 2)
    with pytest.raises(NotDivisibleError):
        divide_exact(P("t1 + 1", 1), P("t1 - 1", 1))


def test_divide_zero_and_by_zero():
    assert divide_exact(LaurentPoly.zero(2), P("t1 - t2", 2)).is_zero()
    with pytest.raises(ZeroDivisionError):
        divide_exact(P("t1"), LaurentPoly.zero(1))


def test_divide_unsupported():
    with pytest.raises(UnsupportedDivisorError):
        divide_exact(P("t1^2 + t1 + 1"), P("t1^2 + t1 + 1"))
    with pytest.raises(UnsupportedDivisorError):
        divide_exact(P("t1"), P("2*t1 - 1"))


def test_divide_factored_and_constants():
    p = P("6*(t1-1)^2*(t2+1)*(t1*t2^-1 - t3)", 3)
    factors = [2, P("t1 - 1"), P("t1 - 1"), P("t2 + 1"), P("t3 - t1*t2^-1"), 3]
    assert divide_exact(p, factors) == -1
    with pytest.raises(NotDivisibleError):
        divide_exact(P("3*t1 + 3"), 2)


def test_divide_negative_geometric_quotient():
    x = P("t1*t2", 2)
    q = divide_exact(x ** -3 - 1, x - 1)
    assert q * (x - 1) == x ** -3 - 1
    assert q == P("-(t1*t2)^-1 - (t1*t2)^-2 - (t1*t2)^-3", 2)


def test_divide_non_divisible_mixed_classes():
    # one coset divisible, the other not
    with pytest.raises(NotDivisibleError):
        divide_exact(P("t1*t2 - 1 + t2^5", 2), P("t1*t2 - 1", 2))


@given(polys, admissible_divisors())
def test_divide_inverts_multiplication(p, d):
    assert divide_exact(p * d, d) == p


@given(polys, polys)
def test_divide_by_variable_minus_one_matches_evaluation(p, q):
    # p is divisible by t1 - 1 iff p|_{t1=1} = 0
    divisible = substitute(p, {1: 1}).is_zero()
    try:
        divide_exact(p, P("t1 - 1"))
        assert divisible
    except NotDivisibleError:
        assert not divisible


# units and canonical form


def test_equal_up_to_unit_examples():
    assert equal_up_to_unit(P("t1 - t2"), P("t2 - t1")) == (-1, Monomial())
    assert equal_up_to_unit(P("t1^-1*t2^-1 - 1"), P("t1*t2 - 1")) == (-1, Monomial({1: -1, 2: -1}))
    assert equal_up_to_unit(P("t1 + 1"), P("t1 - 1")) is None
    assert equal_up_to_unit(LaurentPoly.zero(), LaurentPoly.zero()) == (1, Monomial())
    assert equal_up_to_unit(LaurentPoly.zero(), P("1")) is None


@given(polys, units)
def test_equal_up_to_unit_recovers_unit(p, u):
    assume(not p.is_zero())
    q = p * u
    assert equal_up_to_unit(q, p) == u
    assert equal_up_to_unit(p, q) == u.inverse()


@given(polys)
def test_equal_up_to_unit_trivial(p):
    assert equal_up_to_unit(p, p) == (1, Monomial())


def test_canonical_examples():
    assert normalize_canonical(P("t1^-1 - t2^-1")) == P("t1 - t2")
    assert normalize_canonical(LaurentPoly.zero(2)).is_zero()
    a = P("(t1-1)*(t2-1)")
    assert normalize_canonical(a) == normalize_canonical(P("t1^-1*t2^-1*(t1-1)*(t2-1)"))


@given(polys, units)
def test_canonical_form_is_class_invariant(p, u):
    c = normalize_canonical(p)
    assert equal_up_to_unit(c, p) is not None
    assert normalize_canonical(c) == c
    assert normalize_canonical(p * u) == c
    if not p.is_zero():
        assert min(c.min_exponents().values(), default=0) == 0
        assert c.leading_term()[1] > 0


def test_invert_variables():
    p = P("t1^2*t2 + 3*t3")
    assert invert_variables(p) == P("t1^-2*t2^-1 + 3*t3^-1")
    assert invert_variables(p, [2]) == P("t1^2*t2^-1 + 3*t3")


def test_immutability_of_terms():
    p = P("t1 + 1")
    with pytest.raises(TypeError):
        p.terms[Monomial()] = 5


@settings(max_examples=50)
@given(polys)
def test_hash_consistent(p):
    q = parse_poly(str(p), R)
    assert hash(p) == hash(q)
    assert len({p, q}) == 1
