"""Link records, their JSON form, and the classical consistency screens.

A record carries what is known about a link from its Alexander data: the
component count, the linking matrix, the multivariable Alexander polynomial,
and optionally the polynomials of sublinks and of the component knots.
Sublink and knot polynomials use the global variable names, so the sublink
on components {1, 3} is written in ``t1`` and ``t3``.
"""

from __future__ import annotations

import enum
import itertools
import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .laurent import (
    LaurentPoly,
    Monomial,
    PolyError,
    divide_exact,
    equal_up_to_unit,
    invert_variables,
    parse_poly,
    substitute,
)

IndexSet = tuple[int, ...]


class RecordError(ValueError):
    """A record violates the schema or one of the record invariants."""


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    DATA_ERROR = "DATA_ERROR"

    @property
    def short(self) -> str:
        return "N.A." if self is Status.NOT_APPLICABLE else self.value


@dataclass(frozen=True)
class Verdict:
    """Outcome of one test on one record.

    ``witness`` is a JSON-compatible dict; polynomials appear in it as
    expression strings and index sets as lists.
    """

    status: Status
    test_id: str
    witness: dict[str, Any] | None = None
    message: str = ""

    def __post_init__(self):
        object.__setattr__(self, "status", Status(self.status))
        if self.status is Status.FAIL and not self.witness:
            raise ValueError(f"FAIL verdict for {self.test_id} needs a witness")

    @property
    def failed(self) -> bool:
        return self.status is Status.FAIL

    def to_dict(self) -> dict[str, Any]:
        return {
            "test_id": self.test_id,
            "status": self.status.value,
            "message": self.message,
            "witness": self.witness,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> Verdict:
        return cls(Status(d["status"]), d["test_id"], d.get("witness"), d.get("message", ""))


def index_key(indices: Sequence[int]) -> str:
    return ",".join(str(i) for i in indices)


def parse_index_key(key: str) -> IndexSet:
    try:
        return tuple(sorted(int(part) for part in key.split(",")))
    except ValueError:
        raise RecordError(f"bad index set {key!r}") from None


@dataclass(frozen=True)
class LinkRecord:
    name: str
    r: int
    linking_matrix: tuple[tuple[int, ...], ...]
    alexander: LaurentPoly
    sublinks: Mapping[IndexSet, LaurentPoly] | None = None
    knot_polys: tuple[LaurentPoly, ...] | None = None

    def __post_init__(self):
        r = self.r
        if r < 1:
            raise RecordError(f"{self.name}: component count must be >= 1")
        matrix = tuple(tuple(int(x) for x in row) for row in self.linking_matrix)
        if len(matrix) != r or any(len(row) != r for row in matrix):
            raise RecordError(f"{self.name}: linking matrix must be {r}x{r}")
        for i in range(r):
            if matrix[i][i] != 0:
                raise RecordError(f"{self.name}: linking matrix diagonal must be zero")
            for j in range(i):
                if matrix[i][j] != matrix[j][i]:
                    raise RecordError(f"{self.name}: linking matrix is not symmetric")
        object.__setattr__(self, "linking_matrix", matrix)

        if any(i > r for i in self.alexander.variables()):
            raise RecordError(f"{self.name}: Alexander polynomial uses a variable beyond t{r}")
        object.__setattr__(self, "alexander", _with_arity(self.alexander, r))

        if self.sublinks is not None:
            subs = {}
            for key, poly in self.sublinks.items():
                key = tuple(sorted(key))
                if len(key) < 2 or len(set(key)) != len(key) or key[0] < 1 or key[-1] > r:
                    raise RecordError(f"{self.name}: bad sublink index set {key}")
                if len(key) == r:
                    raise RecordError(f"{self.name}: sublink {key} is the whole link")
                if not poly.variables() <= set(key):
                    raise RecordError(
                        f"{self.name}: sublink {index_key(key)} polynomial uses foreign variables")
                subs[key] = _with_arity(poly, r)
            object.__setattr__(self, "sublinks", dict(sorted(subs.items())))

        if self.knot_polys is not None:
            if len(self.knot_polys) != r:
                raise RecordError(f"{self.name}: expected {r} knot polynomials")
            knots = []
            for i, poly in enumerate(self.knot_polys, start=1):
                if not poly.variables() <= {i}:
                    raise RecordError(f"{self.name}: knot polynomial {i} must be in t{i} only")
                value = poly.evaluate_at_ones()
                if value not in (1, -1):
                    raise RecordError(
                        f"{self.name}: knot polynomial {i} takes value {value} at 1, not +-1")
                knots.append(_with_arity(poly if value == 1 else -poly, r))
            object.__setattr__(self, "knot_polys", tuple(knots))

    def lk(self, i: int, j: int) -> int:
        return self.linking_matrix[i - 1][j - 1]

    def sublink_poly(self, indices: Sequence[int]) -> LaurentPoly | None:
        """Polynomial of the sublink on ``indices`` (the whole link included)."""
        key = tuple(sorted(indices))
        if len(key) == self.r:
            return self.alexander
        if len(key) == 1:
            return self.knot_polys[key[0] - 1] if self.knot_polys is not None else None
        if self.sublinks is None:
            return None
        return self.sublinks.get(key)


def _with_arity(p: LaurentPoly, arity: int) -> LaurentPoly:
    return p if p.arity == arity else LaurentPoly(p.terms, arity)


# ---------------------------------------------------------------------------
# JSON schema


def record_from_dict(d: Mapping[str, Any]) -> LinkRecord:
    """Build a record from its JSON object.

    Raises :class:`RecordError` on schema violations or unparsable
    polynomials.
    """
    if not isinstance(d, Mapping):
        raise RecordError("record must be a JSON object")
    name = str(d.get("name", "<unnamed>"))
    try:
        r = d["components"]
        matrix = d.get("linking_matrix")
        alexander_text = d["alexander"]
    except KeyError as exc:
        raise RecordError(f"{name}: missing field {exc.args[0]!r}") from None
    if not isinstance(r, int) or isinstance(r, bool):
        raise RecordError(f"{name}: 'components' must be an integer")
    if matrix is None:
        matrix = [[0] * r for _ in range(r)]
    if not (isinstance(matrix, list) and all(isinstance(row, list) for row in matrix)):
        raise RecordError(f"{name}: 'linking_matrix' must be a list of lists")
    if any(not isinstance(x, int) or isinstance(x, bool) for row in matrix for x in row):
        raise RecordError(f"{name}: linking numbers must be integers")

    def parse(text, what):
        if not isinstance(text, str):
            raise RecordError(f"{name}: {what} must be an expression string")
        try:
            return parse_poly(text, r)
        except PolyError as exc:
            raise RecordError(f"{name}: {what}: {exc}") from None

    alexander = parse(alexander_text, "alexander")
    sublinks = None
    if d.get("sublinks") is not None:
        if not isinstance(d["sublinks"], Mapping):
            raise RecordError(f"{name}: 'sublinks' must be an object")
        sublinks = {parse_index_key(k): parse(v, f"sublink {k}") for k, v in d["sublinks"].items()}
    knot_polys = None
    if d.get("knot_polys") is not None:
        if not isinstance(d["knot_polys"], list):
            raise RecordError(f"{name}: 'knot_polys' must be a list")
        knot_polys = tuple(parse(v, f"knot_polys[{i}]") for i, v in enumerate(d["knot_polys"]))
    return LinkRecord(name, r, matrix, alexander, sublinks, knot_polys)


def record_to_dict(rec: LinkRecord) -> dict[str, Any]:
    out: dict[str, Any] = {
        "name": rec.name,
        "components": rec.r,
        "linking_matrix": [list(row) for row in rec.linking_matrix],
        "alexander": str(rec.alexander),
    }
    if rec.sublinks is not None:
        out["sublinks"] = {index_key(k): str(v) for k, v in rec.sublinks.items()}
    if rec.knot_polys is not None:
        out["knot_polys"] = [str(p) for p in rec.knot_polys]
    return out


def load_record_dicts(path: str | Path) -> list[Any]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise RecordError(f"{path}: expected a JSON array of records")
    return data


def load_records(path: str | Path) -> list[LinkRecord]:
    return [record_from_dict(d) for d in load_record_dicts(path)]


def dumps_records(records: Sequence[LinkRecord]) -> str:
    return json.dumps([record_to_dict(rec) for rec in records], indent=2)


# ---------------------------------------------------------------------------
# screens and validators


def is_algebraically_split(rec: LinkRecord) -> bool:
    return all(x == 0 for row in rec.linking_matrix for x in row)


def _unit_witness(unit) -> dict[str, Any]:
    return {"sign": unit.sign, "monomial": str(unit.monomial)}


def check_duality(rec: LinkRecord) -> Verdict:
    """Check the duality symmetry of the Alexander polynomial.

    For ``r >= 2`` the polynomial must equal ``(-1)^r t^a`` times its image
    under ``t_i -> t_i^{-1}``, with each ``a_i`` congruent mod 2 to
    ``1 + sum_j lk(i, j)``.  For a knot the unit must be ``t^a`` with ``a``
    even.  The unit relating the two sides is unique when it exists, so the
    search reduces to one comparison.
    """
    test = "duality"
    delta = rec.alexander
    if delta.arity != rec.r or any(i > rec.r for i in delta.variables()):
        return Verdict(Status.DATA_ERROR, test, message="polynomial arity does not match r")
    if delta.is_zero():
        return Verdict(Status.PASS, test, message="zero polynomial (vacuous)")
    unit = equal_up_to_unit(delta, invert_variables(delta))
    if unit is None:
        return Verdict(Status.FAIL, test, {"reason": "no unit relates the polynomial to its inverse",
                                           "polynomial": str(delta)},
                       "not symmetric up to a unit")
    exps = [unit.monomial.exponent(i) for i in range(1, rec.r + 1)]
    witness: dict[str, Any] = {"sign": unit.sign, "exponents": exps}
    if rec.r == 1:
        if unit.sign != 1 or exps[0] % 2:
            return Verdict(Status.FAIL, test, witness, "knot polynomial needs sign + and even shift")
        return Verdict(Status.PASS, test, witness)
    want_sign = (-1) ** rec.r
    parity = [(1 + sum(rec.lk(i, j) for j in range(1, rec.r + 1) if j != i)) % 2
              for i in range(1, rec.r + 1)]
    witness["required_parity"] = parity
    if unit.sign != want_sign:
        return Verdict(Status.FAIL, test, witness, f"sign {unit.sign}, expected {want_sign}")
    bad = [i + 1 for i in range(rec.r) if exps[i] % 2 != parity[i]]
    if bad:
        witness["bad_components"] = bad
        return Verdict(Status.FAIL, test, witness, "exponent parity contradicts linking numbers")
    return Verdict(Status.PASS, test, witness)


def check_torres(rec: LinkRecord, delete: int) -> Verdict:
    """Torres condition for the sublink obtained by deleting one component.

    Compares ``Delta(..., t_k = 1, ...)`` with ``(prod t_i^{l_i} - 1)``
    times the sublink polynomial (for a two-component link, with
    ``(t^l - 1)/(t - 1)`` times the remaining knot polynomial).  When every
    linking number with the deleted component is zero the right side
    vanishes and the sublink polynomial is not needed.
    """
    test = f"torres[-{delete}]"
    r = rec.r
    if r < 2:
        return Verdict(Status.NOT_APPLICABLE, test, message="needs at least two components")
    if not 1 <= delete <= r:
        raise ValueError(f"component {delete} out of range 1..{r}")
    rest = tuple(i for i in range(1, r + 1) if i != delete)
    ells = {i: rec.lk(i, delete) for i in rest}
    lhs = substitute(rec.alexander, {delete: 1})
    if all(v == 0 for v in ells.values()):
        rhs = LaurentPoly.zero(r)
    else:
        sub = rec.sublink_poly(rest)
        if sub is None:
            return Verdict(Status.DATA_ERROR, test,
                           message=f"polynomial of sublink {index_key(rest)} is not supplied")
        if len(rest) == 1:
            (i,) = rest
            t = LaurentPoly.var(i, r)
            rhs = divide_exact(t ** ells[i] - 1, t - 1) * sub
        else:
            rhs = (LaurentPoly.monomial(Monomial(ells), 1, r) - 1) * sub
    unit = equal_up_to_unit(lhs, rhs)
    if unit is None:
        return Verdict(Status.FAIL, test, {"deleted": delete, "lhs": str(lhs), "rhs": str(rhs)},
                       "specialization does not match the sublink data")
    return Verdict(Status.PASS, test, {"deleted": delete, "unit": _unit_witness(unit)})


def _odd_cycle(r: int, adjacent) -> list[int] | None:
    """Find an odd cycle in the graph on 1..r, or None if it is bipartite."""
    color: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    for root in range(1, r + 1):
        if root in color:
            continue
        color[root] = 0
        parent[root] = None
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in range(1, r + 1):
                if w == v or not adjacent(v, w):
                    continue
                if w not in color:
                    color[w] = 1 - color[v]
                    parent[w] = v
                    queue.append(w)
                elif color[w] == color[v]:
                    return _join_paths(v, w, parent)
    return None


def _join_paths(v: int, w: int, parent) -> list[int]:
    def path(x):
        out = [x]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    pv, pw = path(v), path(w)
    on_pw = set(pw)
    lca = next(x for x in pv if x in on_pw)
    left = pv[: pv.index(lca) + 1]
    right = pw[: pw.index(lca)]
    return left + right[::-1]


def linking_screen(rec: LinkRecord, invertibility: bool = False) -> list[Verdict]:
    """Obstructions read off the linking matrix alone.

    * two components with a nonzero even linking number cannot be
      component-preservingly amphicheiral;
    * neither can a link whose nonzero linking numbers contain an odd
      cycle (an odd sublink with nonzero cyclic product).

    With ``invertibility=True`` a two-component link with nonzero linking
    number also gets an informational verdict: only (-,-)-invertibility is
    possible.
    """
    r = rec.r
    out = []
    if r == 2:
        ell = rec.lk(1, 2)
        if ell != 0 and ell % 2 == 0:
            out.append(Verdict(Status.FAIL, "lk-even", {"linking_number": ell},
                               "nonzero even linking number: not component-preservingly amphicheiral"))
        else:
            out.append(Verdict(Status.PASS, "lk-even", {"linking_number": ell}))
    else:
        out.append(Verdict(Status.NOT_APPLICABLE, "lk-even", message="only for two components"))

    if r >= 3:
        cycle = _odd_cycle(r, lambda i, j: rec.lk(i, j) != 0)
        if cycle is not None:
            product = 1
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                product *= rec.lk(a, b)
            out.append(Verdict(Status.FAIL, "lk-odd-cycle", {"cycle": cycle, "product": product},
                               "odd cycle of nonzero linking numbers: "
                               "not component-preservingly amphicheiral"))
        else:
            out.append(Verdict(Status.PASS, "lk-odd-cycle"))
    else:
        out.append(Verdict(Status.NOT_APPLICABLE, "lk-odd-cycle", message="needs three components"))

    if invertibility and r == 2 and rec.lk(1, 2) != 0:
        out.append(Verdict(Status.PASS, "lk-invertibility", {"linking_number": rec.lk(1, 2)},
                           "if invertible at all, the link is (-,-)-invertible"))
    return out


def format_eps(eps: Sequence[int]) -> str:
    return "".join("+" if e > 0 else "-" for e in eps)


def check_eps_symmetry(rec: LinkRecord, eps: Sequence[int]) -> Verdict:
    eps = tuple(eps)
    test = f"eps-symmetry({format_eps(eps)})"
    if len(eps) != rec.r or any(e not in (1, -1) for e in eps):
        raise ValueError(f"eps must be {rec.r} signs, got {eps}")
    flipped = invert_variables(rec.alexander, [i for i, e in enumerate(eps, 1) if e < 0])
    unit = equal_up_to_unit(rec.alexander, flipped)
    if unit is None:
        return Verdict(Status.FAIL, test, {"eps": list(eps), "image": str(flipped)},
                       f"neither ({format_eps(eps)})-amphicheiral nor ({format_eps(eps)})-invertible")
    return Verdict(Status.PASS, test, {"eps": list(eps), "unit": _unit_witness(unit)})


def all_sign_vectors(r: int):
    return itertools.product((1, -1), repeat=r)
