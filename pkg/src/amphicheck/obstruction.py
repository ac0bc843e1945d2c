"""Alexander-polynomial obstructions to component-preserving amphicheirality.

An algebraically split link with ``r >= 2`` components has
``Delta_L = prod (t_i - 1) * f`` up to a unit, where ``f`` can be chosen
invariant under ``t -> t^{-1}``.  The same holds for every sublink ``L_J``
with ``|J| >= 2``, giving a family of symmetric factors ``f_J``.  Given a
subset ``I`` and a sign vector ``u`` on the complement, the sums

    S_even = sum eta_J(u) F_J(I)   over J > I with |J - I| even
    S_odd  = sum eta_J(u) F_J(I)   over J > I with |J - I| odd

(``F_J(I)`` is ``f_J`` with the variables outside ``I`` set to 1, and
``eta_J(u) = (-1)^(number of +1 among u_i, i in J - I)``) control the
torsion of the manifolds obtained by +-1 surgery on the complement of
``I``.  Amphicheirality forces those torsions for ``u`` and ``-u`` to agree,
which forces the sums to vanish in the patterns checked here.

Each ``f_J`` is only determined up to sign by its own sublink, so the
surgery-sum check searches over all sign assignments by default and fails
only when none of them works.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from .laurent import (
    LaurentPoly,
    Monomial,
    NotDivisibleError,
    divide_exact,
    equal_up_to_unit,
    invert_variables,
    substitute,
)
from .linkdata import IndexSet, LinkRecord, Status, Verdict, index_key, is_algebraically_split

DEFAULT_MAX_R = 4

SignAssignment = Mapping[IndexSet, int]


class ExtractionError(ValueError):
    """The polynomial of a sublink has no symmetric factor of the expected shape.

    ``kind`` is ``"NOT_DIVISIBLE"`` (not a multiple of ``prod (t_i - 1)``)
    or ``"NO_SYMMETRIC_REP"`` (the quotient is not symmetric up to an even
    unit).
    """

    def __init__(self, kind: str, indices: IndexSet, message: str):
        self.kind = kind
        self.indices = tuple(indices)
        super().__init__(f"{kind} for J={{{index_key(self.indices)}}}: {message}")


class MissingFactorError(LookupError):
    def __init__(self, indices: IndexSet):
        self.indices = tuple(indices)
        super().__init__(f"no symmetric factor for J={{{index_key(self.indices)}}}")


class MissingKnotPolyError(LookupError):
    pass


def proper_index_sets(r: int, min_size: int = 2, max_size: int | None = None) -> list[IndexSet]:
    if max_size is None:
        max_size = r
    return [J for k in range(min_size, max_size + 1)
            for J in itertools.combinations(range(1, r + 1), k)]


# ---------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class SubsetFrame:
    """A subset ``I`` of the components and signs ``u_i`` for the rest.

    ``u`` may be given as a mapping; it is stored as sorted ``(i, u_i)``
    pairs.
    """

    I: tuple[int, ...]
    u: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        I = tuple(sorted(self.I))
        u = self.u.items() if isinstance(self.u, Mapping) else self.u
        u = tuple(sorted((int(i), int(s)) for i, s in u))
        if not I:
            raise ValueError("frame needs a nonempty I")
        if any(s not in (1, -1) for _, s in u):
            raise ValueError("frame signs must be +1 or -1")
        everything = sorted(list(I) + [i for i, _ in u])
        if everything != list(range(1, len(everything) + 1)):
            raise ValueError(f"I={I} and the domain of u must partition 1..r")
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "u", u)

    @property
    def r(self) -> int:
        return len(self.I) + len(self.u)

    @property
    def signs(self) -> dict[int, int]:
        return dict(self.u)

    def witness(self) -> dict[str, Any]:
        return {"I": list(self.I), "u": {str(i): s for i, s in self.u}}

    def __str__(self) -> str:
        us = ",".join(f"u{i}={'+' if s > 0 else '-'}1" for i, s in self.u)
        return f"I={{{index_key(self.I)}}} {us}".rstrip()


def flip_frame(frame: SubsetFrame) -> SubsetFrame:
    """Negate every sign of the frame."""
    return SubsetFrame(frame.I, tuple((i, -s) for i, s in frame.u))


def iter_frames(r: int, sizes: Sequence[int] | None = None) -> Iterator[SubsetFrame]:
    if sizes is None:
        sizes = range(1, r)
    for k in sizes:
        for I in itertools.combinations(range(1, r + 1), k):
            rest = [i for i in range(1, r + 1) if i not in I]
            for signs in itertools.product((1, -1), repeat=len(rest)):
                yield SubsetFrame(I, tuple(zip(rest, signs)))


def eta(J: Sequence[int], frame: SubsetFrame) -> int:
    signs = frame.signs
    k = sum(1 for i in J if signs.get(i) == 1)
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# symmetric factors


def extract_symmetric_factor(delta: LaurentPoly, J: Sequence[int]) -> LaurentPoly:
    """Symmetric factor ``f_J`` of a sublink polynomial.

    Divides by ``prod_{i in J} (t_i - 1)`` and shifts the quotient by the
    unique unit making it invariant under ``t -> t^{-1}``; the result has a
    positive lex-leading coefficient.
    """
    J = tuple(sorted(J))
    if len(J) < 2:
        raise ValueError("symmetric factors need |J| >= 2")
    if not delta.variables() <= set(J):
        raise ValueError(f"polynomial uses variables outside J={{{index_key(J)}}}")
    if delta.is_zero():
        return delta
    arity = delta.arity
    try:
        q = divide_exact(delta, [LaurentPoly.var(i, arity) - 1 for i in J])
    except NotDivisibleError:
        raise ExtractionError("NOT_DIVISIBLE", J,
                              f"{delta} is not divisible by the product of (t_i - 1)") from None
    unit = equal_up_to_unit(invert_variables(q, J), q)
    if unit is None or unit.sign != 1 or any(e % 2 for _, e in unit.monomial):
        raise ExtractionError("NO_SYMMETRIC_REP", J,
                              f"quotient {q} has no representative fixed by t -> t^-1")
    f = q.shift(Monomial._raw(tuple((i, e // 2) for i, e in unit.monomial)))
    if f.leading_term()[1] < 0:
        f = -f
    return f


@dataclass(frozen=True)
class SymmetricFactorFamily:
    """The factors ``f_J`` of one link, keyed by sorted index tuples.

    ``provenance`` records for each ``J`` with ``|J| >= 2`` whether the
    factor was ``"extracted"`` from supplied data, ``"given"`` directly, or
    is ``"absent"``.
    """

    r: int
    factors: Mapping[IndexSet, LaurentPoly]
    knot_polys: tuple[LaurentPoly, ...] | None = None
    provenance: Mapping[IndexSet, str] = field(default_factory=dict)
    knot_polys_assumed: bool = False
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        factors = {tuple(sorted(J)): p for J, p in self.factors.items()}
        object.__setattr__(self, "factors", factors)
        prov = {J: ("given" if J in factors else "absent") for J in proper_index_sets(self.r)}
        prov.update({tuple(sorted(J)): v for J, v in self.provenance.items()})
        object.__setattr__(self, "provenance", prov)

    @property
    def missing(self) -> list[IndexSet]:
        return [J for J in proper_index_sets(self.r) if J not in self.factors]

    def is_complete(self) -> bool:
        return not self.missing

    def factor(self, J: Sequence[int]) -> LaurentPoly:
        key = tuple(sorted(J))
        try:
            return self.factors[key]
        except KeyError:
            raise MissingFactorError(key) from None

    def knot_poly(self, i: int) -> LaurentPoly:
        if self.knot_polys is None:
            raise MissingKnotPolyError(f"no knot polynomial for component {i}")
        return self.knot_polys[i - 1]


def build_family(rec: LinkRecord, default_knots: bool = True) -> SymmetricFactorFamily:
    """Extract every available ``f_J`` of an algebraically split record.

    Missing sublink polynomials leave gaps marked ``"absent"``.  Without
    knot polynomials, ``default_knots`` substitutes the unknot's ``1`` and
    sets ``knot_polys_assumed``.
    """
    if rec.r < 2:
        raise ValueError("symmetric factors need at least two components")
    if not is_algebraically_split(rec):
        raise ValueError(f"{rec.name} is not algebraically split")
    factors = {}
    provenance = {}
    for J in proper_index_sets(rec.r):
        delta = rec.sublink_poly(J)
        if delta is None:
            provenance[J] = "absent"
            continue
        factors[J] = extract_symmetric_factor(delta, J)
        provenance[J] = "extracted"
    knots = rec.knot_polys
    assumed = False
    if knots is None and default_knots:
        knots = tuple(LaurentPoly.constant(1, rec.r) for _ in range(rec.r))
        assumed = True
    return SymmetricFactorFamily(rec.r, factors, knots, provenance, assumed)


def f_sub(family: SymmetricFactorFamily, J: Sequence[int], I: Sequence[int]) -> LaurentPoly:
    """``F_J(I)``: the factor ``f_J`` with ``t_i = 1`` for ``i`` in ``J - I``."""
    J = tuple(sorted(J))
    I = tuple(sorted(I))
    if not set(I) <= set(J):
        raise ValueError(f"I={I} is not contained in J={J}")
    key = (J, I)
    cached = family._cache.get(key)
    if cached is None:
        f = family.factor(J)
        cached = substitute(f, {i: 1 for i in J if i not in I})
        family._cache[key] = cached
    return cached


def _supersets(frame: SubsetFrame) -> Iterator[tuple[IndexSet, int]]:
    """Index sets ``J >= I`` with ``|J| >= 2``, paired with ``|J - I|``."""
    rest = [i for i, _ in frame.u]
    for k in range(len(rest) + 1):
        if len(frame.I) + k < 2:
            continue
        for extra in itertools.combinations(rest, k):
            yield tuple(sorted(frame.I + extra)), k


def _sign_of(signs: SignAssignment | None, J: IndexSet) -> int:
    if signs is None:
        return 1
    return signs.get(J, 1)


def s_sums(family: SymmetricFactorFamily, frame: SubsetFrame,
           signs: SignAssignment | None = None) -> tuple[LaurentPoly, LaurentPoly]:
    """Return ``(S_even, S_odd)`` for the frame, each ``f_J`` scaled by ``signs[J]``.

    ``J = I`` is included whenever ``|I| >= 2``.
    """
    if frame.r != family.r:
        raise ValueError(f"frame is for r={frame.r}, family has r={family.r}")
    even = LaurentPoly.zero(family.r)
    odd = LaurentPoly.zero(family.r)
    for J, k in _supersets(frame):
        term = f_sub(family, J, frame.I)
        if not term:
            continue
        c = eta(J, frame) * _sign_of(signs, J)
        if k % 2:
            odd = odd + term * c
        else:
            even = even + term * c
    return even, odd


# ---------------------------------------------------------------------------
# surgery torsion


@dataclass(frozen=True)
class TorsionExpr:
    """A torsion value ``numerator / prod(denominators)``, meaningful up to a unit."""

    numerator: LaurentPoly
    denominators: tuple[LaurentPoly, ...] = ()

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def equivalent(self, other: TorsionExpr) -> bool:
        """Equality up to ``+-monomial`` after clearing denominators."""
        lhs = self.numerator
        for d in other.denominators:
            lhs = lhs * d
        rhs = other.numerator
        for d in self.denominators:
            rhs = rhs * d
        return equal_up_to_unit(lhs, rhs) is not None

    def __str__(self) -> str:
        if not self.denominators:
            return str(self.numerator)
        den = "*".join(f"({d})" for d in self.denominators)
        return f"({self.numerator}) / {den}"


def surgery_torsion(family: SymmetricFactorFamily, frame: SubsetFrame,
                    signs: SignAssignment | None = None) -> TorsionExpr:
    """Torsion of the manifold from +-1 surgery on the components outside ``I``.

    For ``I = {x}`` this is ``(Delta_{K_x} + (t_x - 1)^2 (S_even + S_odd)) /
    (t_x - 1)``; for ``2 <= |I| <= r - 1`` it is
    ``prod_{i in I} (t_i - 1) (S_even + S_odd)``.
    """
    r = family.r
    if not 1 <= len(frame.I) <= r - 1:
        raise ValueError(f"surgery torsion needs 1 <= |I| <= {r - 1}, got |I|={len(frame.I)}")
    even, odd = s_sums(family, frame, signs)
    total = even + odd
    if len(frame.I) == 1:
        (x,) = frame.I
        tx = LaurentPoly.var(x, r) - 1
        return TorsionExpr(family.knot_poly(x) + tx * tx * total, (tx,))
    prod = LaurentPoly.constant(1, r)
    for i in frame.I:
        prod = prod * (LaurentPoly.var(i, r) - 1)
    return TorsionExpr(prod * total)


# ---------------------------------------------------------------------------
# surgery-sum check


def _frame_ok(frame: SubsetFrame, even: LaurentPoly, odd: LaurentPoly) -> bool:
    if len(frame.I) == 1:
        return odd.is_zero()
    return even.is_zero() or odd.is_zero()


def _sums_witness(frame: SubsetFrame, even: LaurentPoly, odd: LaurentPoly) -> dict[str, Any]:
    w = frame.witness()
    w.update({"S_even": str(even), "S_odd": str(odd)})
    return w


def _signs_witness(signs: SignAssignment) -> dict[str, int]:
    return {index_key(J): s for J, s in sorted(signs.items())}


class _FrameTerms:
    """Signed terms ``eta_J * F_J(I)`` of one frame, split by parity."""

    def __init__(self, family: SymmetricFactorFamily, frame: SubsetFrame):
        self.frame = frame
        self.even: list[tuple[IndexSet, LaurentPoly]] = []
        self.odd: list[tuple[IndexSet, LaurentPoly]] = []
        for J, k in _supersets(frame):
            term = f_sub(family, J, frame.I)
            if term:
                (self.odd if k % 2 else self.even).append((J, term * eta(J, frame)))

    def sums(self, signs: SignAssignment) -> tuple[LaurentPoly, LaurentPoly]:
        r = self.frame.r
        even = sum((t * signs.get(J, 1) for J, t in self.even), LaurentPoly.zero(r))
        odd = sum((t * signs.get(J, 1) for J, t in self.odd), LaurentPoly.zero(r))
        return even, odd

    @staticmethod
    def _can_vanish(terms) -> bool:
        if not terms:
            return True
        head, tail = terms[0][1], [t for _, t in terms[1:]]
        for choice in itertools.product((1, -1), repeat=len(tail)):
            total = head
            for c, t in zip(choice, tail):
                total = total + t * c
            if total.is_zero():
                return True
        return False

    def satisfiable(self) -> bool:
        """Whether some sign choice on this frame's factors alone satisfies it."""
        if len(self.frame.I) == 1:
            return self._can_vanish(self.odd)
        return self._can_vanish(self.even) or self._can_vanish(self.odd)


def surgery_sum_check(family: SymmetricFactorFamily, signs: SignAssignment | None = None,
                      max_r: int = DEFAULT_MAX_R) -> Verdict:
    """Check the vanishing pattern of the surgery sums over all frames.

    For every ``I`` with ``|I| = 1`` and every ``u``, ``S_odd`` must vanish;
    for ``2 <= |I| <= r - 1``, ``S_even`` or ``S_odd`` must vanish.

    With ``signs`` given the factors are taken with exactly those signs.
    Otherwise (the default) the check passes if any sign assignment works;
    the exhaustive search is skipped above ``max_r`` components, leaving
    only frame-by-frame feasibility.
    """
    test = "surgery-sums"
    r = family.r
    if r < 2:
        return Verdict(Status.NOT_APPLICABLE, test, message="needs at least two components")
    if not family.is_complete():
        missing = ", ".join("{" + index_key(J) + "}" for J in family.missing)
        return Verdict(Status.NOT_APPLICABLE, test, message=f"missing sublink data: {missing}")

    if signs is not None:
        unknown = set(map(tuple, signs)) - set(family.factors)
        if unknown:
            raise ValueError(f"signs given for unknown index sets {sorted(unknown)}")
        for frame in iter_frames(r):
            even, odd = s_sums(family, frame, signs)
            if not _frame_ok(frame, even, odd):
                w = _sums_witness(frame, even, odd)
                w["signs"] = _signs_witness(signs)
                return Verdict(Status.FAIL, test, w, f"surgery sums do not vanish at {frame}")
        return Verdict(Status.PASS, test, {"mode": "fixed", "signs": _signs_witness(signs)})

    frames = [_FrameTerms(family, frame) for frame in iter_frames(r)]
    for ft in frames:
        if not ft.satisfiable():
            even, odd = ft.sums({})
            w = _sums_witness(ft.frame, even, odd)
            w["reason"] = "no sign choice makes this frame vanish"
            return Verdict(Status.FAIL, test, w,
                           f"surgery sums cannot vanish at {ft.frame} for any signs")
    if r > max_r:
        return Verdict(Status.NOT_APPLICABLE, test,
                       message=f"global sign search disabled for r={r} > {max_r}; "
                               "every frame is individually satisfiable")

    free = [J for J in sorted(family.factors, key=lambda J: (-len(J), J)) if family.factors[J]]
    best = None
    if not free:
        return Verdict(Status.PASS, test, {"mode": "exists", "signs": {}})
    anchor, rest = free[0], free[1:]
    for choice in itertools.product((1, -1), repeat=len(rest)):
        assignment = {anchor: 1, **dict(zip(rest, choice))}
        failures = []
        for ft in frames:
            even, odd = ft.sums(assignment)
            if not _frame_ok(ft.frame, even, odd):
                failures.append((ft.frame, even, odd))
                if best is not None and len(failures) >= best[0]:
                    break
        if not failures:
            return Verdict(Status.PASS, test,
                           {"mode": "exists", "signs": _signs_witness(assignment)})
        if best is None or len(failures) < best[0]:
            best = (len(failures), assignment, failures[0])
    _, assignment, (frame, even, odd) = best
    w = _sums_witness(frame, even, odd)
    w["signs"] = _signs_witness(assignment)
    return Verdict(Status.FAIL, test, w,
                   f"no sign assignment makes all surgery sums vanish; e.g. {frame}")


# ---------------------------------------------------------------------------
# specialization and divisibility consequences


def specialization_checks(family: SymmetricFactorFamily) -> list[Verdict]:
    """Sign-independent consequences of the surgery-sum pattern.

    ``one-variable-specialization``: for even ``r``, ``f`` with all variables
    but one set to 1 must vanish.  ``codim-one-specialization``: for each
    ``i`` with ``I = I_r - {i}``, the sublink polynomial on ``I`` and
    ``F(I) = f|_{t_i=1}`` cannot both be nonzero.  For ``r = 2`` the sublink
    is a knot, whose polynomial never vanishes.
    """
    r = family.r
    out = []
    whole = tuple(range(1, r + 1))
    f = family.factor(whole)

    test = "one-variable-specialization"
    if r % 2:
        out.append(Verdict(Status.NOT_APPLICABLE, test, message="needs an even number of components"))
    else:
        bad = {str(i): str(f_sub(family, whole, (i,))) for i in whole if f_sub(family, whole, (i,))}
        if bad:
            out.append(Verdict(Status.FAIL, test, {"nonzero_F": bad},
                               f"f does not vanish after setting all but one variable to 1 "
                               f"(components {', '.join(bad)})"))
        else:
            out.append(Verdict(Status.PASS, test))

    test = "codim-one-specialization"
    bad = {}
    checked = []
    for i in whole:
        I = tuple(j for j in whole if j != i)
        if len(I) == 1:
            sub_nonzero = True
        else:
            if I not in family.factors:
                continue
            sub_nonzero = not family.factors[I].is_zero()
        checked.append(i)
        F = f_sub(family, whole, I)
        if sub_nonzero and F:
            bad[str(i)] = str(F)
    if not checked:
        out.append(Verdict(Status.NOT_APPLICABLE, test, message="no codimension-one sublink data"))
    elif bad:
        out.append(Verdict(Status.FAIL, test, {"offending": bad},
                           "a nonzero codimension-one sublink with f not divisible by (t_i - 1), "
                           f"i in {{{', '.join(bad)}}}"))
    else:
        out.append(Verdict(Status.PASS, test, {"checked": checked}))
    return out


def divisibility_check(delta: LaurentPoly, mode: str = "amphi") -> Verdict:
    """Divisibility of a two-component polynomial.

    ``mode="amphi"``: by ``(t1-1)^2 (t2-1)^2``.  ``mode="eps"``: also by
    ``(t1 t2 - 1)(t1 - t2)``.
    """
    t1 = LaurentPoly.var(1, 2)
    t2 = LaurentPoly.var(2, 2)
    factors = [t1 - 1, t1 - 1, t2 - 1, t2 - 1]
    if mode == "amphi":
        test = "square-divisibility"
        label = "(t1 - 1)^2*(t2 - 1)^2"
        excluded = "not component-preservingly amphicheiral"
    elif mode == "eps":
        test = "eps-divisibility"
        factors += [t1 * t2 - 1, t1 - t2]
        label = "(t1 - 1)^2*(t2 - 1)^2*(t1*t2 - 1)*(t1 - t2)"
        excluded = "not (+,+)- or (-,-)-amphicheiral"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if delta.variables() - {1, 2}:
        raise ValueError("divisibility check is for two-variable polynomials")
    if delta.is_zero():
        return Verdict(Status.PASS, test, message="zero polynomial (vacuous)")
    q = delta
    for k, d in enumerate(factors):
        try:
            q = divide_exact(q, d)
        except NotDivisibleError:
            return Verdict(Status.FAIL, test,
                           {"divisor": label, "failed_factor": str(d), "factor_position": k,
                            "partial_quotient": str(q)},
                           f"not divisible by {label}: {excluded}")
    return Verdict(Status.PASS, test, {"quotient": str(q)})


def diagonal_vanishing_check(delta: LaurentPoly, r: int | None = None) -> Verdict:
    """``Delta(t^{eta_1}, ..., t^{eta_r})`` must vanish for every sign vector.

    Applies to an even number of components only.
    """
    test = "diagonal-vanishing"
    if r is None:
        r = delta.arity
    if r % 2 or r < 2:
        return Verdict(Status.NOT_APPLICABLE, test, message="needs an even number of components")
    for etas in itertools.product((1, -1), repeat=r):
        image = substitute(delta, {i: Monomial._raw(((1, e),)) for i, e in enumerate(etas, 1)}, 1)
        if image:
            return Verdict(Status.FAIL, test, {"eta": list(etas), "value": str(image)},
                           "one-variable specialization does not vanish: "
                           "not (eps)-amphicheiral for either eps")
    return Verdict(Status.PASS, test, {"sign_vectors": 2 ** r})
