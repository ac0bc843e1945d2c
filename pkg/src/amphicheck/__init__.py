"""Exact Alexander-polynomial checks for amphicheirality of links."""

from .laurent import (
    LaurentPoly,
    Monomial,
    UnitFactor,
    divide_exact,
    equal_up_to_unit,
    normalize_canonical,
    parse_poly,
    substitute,
)
from .linkdata import LinkRecord, Status, Verdict
from .obstruction import (
    SubsetFrame,
    SymmetricFactorFamily,
    TorsionExpr,
    build_family,
    extract_symmetric_factor,
    s_sums,
    surgery_torsion,
)

__version__ = "0.1.0"
