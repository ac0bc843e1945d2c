"""Run the full test battery over link records and render the results."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .linkdata import (
    LinkRecord,
    RecordError,
    Status,
    Verdict,
    check_duality,
    check_eps_symmetry,
    check_torres,
    format_eps,
    is_algebraically_split,
    linking_screen,
    load_record_dicts,
    record_from_dict,
)
from .obstruction import (
    DEFAULT_MAX_R,
    ExtractionError,
    build_family,
    diagonal_vanishing_check,
    divisibility_check,
    specialization_checks,
    surgery_sum_check,
)

OBSTRUCTED = "OBSTRUCTED"
CONSISTENT = "CONSISTENT"
DATA_ERROR = "DATA_ERROR"

TEST_GROUPS = ("duality", "torres", "linking", "eps", "divisibility",
               "specialization", "surgery", "diagonal")

_VALIDATORS = ("duality", "torres", "parse", "factor-extraction")


@dataclass
class RecordReport:
    name: str
    components: int | None
    verdicts: list[Verdict] = field(default_factory=list)
    overall_status: str = CONSISTENT
    conjecture_flag: bool = False
    conjecture_candidate: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "components": self.components,
            "overall_status": self.overall_status,
            "conjecture_flag": self.conjecture_flag,
            "conjecture_candidate": self.conjecture_candidate,
            "notes": list(self.notes),
            "verdicts": [v.to_dict() for v in self.verdicts],
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> RecordReport:
        return cls(
            name=d["name"],
            components=d.get("components"),
            verdicts=[Verdict.from_dict(v) for v in d.get("verdicts", [])],
            overall_status=d["overall_status"],
            conjecture_flag=bool(d.get("conjecture_flag", False)),
            conjecture_candidate=bool(d.get("conjecture_candidate", False)),
            notes=list(d.get("notes", [])),
        )

    def verdict(self, test_id: str) -> Verdict | None:
        for v in self.verdicts:
            if v.test_id == test_id:
                return v
        return None


@dataclass
class Report:
    records: list[RecordReport] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        statuses = {r.overall_status for r in self.records}
        if DATA_ERROR in statuses:
            return 2
        if OBSTRUCTED in statuses:
            return 1
        return 0

    def to_list(self) -> list[dict[str, Any]]:
        return [r.to_dict() for r in self.records]

    @classmethod
    def from_list(cls, items: Iterable[Mapping[str, Any]]) -> Report:
        return cls([RecordReport.from_dict(d) for d in items])


def _is_validator(test_id: str) -> bool:
    return test_id.split("[")[0] in _VALIDATORS


def _summarize(rep: RecordReport, rec: LinkRecord | None) -> None:
    statuses = [(v.test_id, v.status) for v in rep.verdicts]
    if any(s is Status.DATA_ERROR for _, s in statuses) or any(
            s is Status.FAIL and _is_validator(t) for t, s in statuses):
        rep.overall_status = DATA_ERROR
    elif any(s is Status.FAIL for _, s in statuses):
        rep.overall_status = OBSTRUCTED
    else:
        rep.overall_status = CONSISTENT
    if rec is None or rep.overall_status != CONSISTENT or rec.r % 2:
        return
    if rec.alexander.is_zero():
        rep.conjecture_flag = True
        rep.notes.append("even number of components with zero Alexander polynomial: "
                         "consistent with the even-component vanishing conjecture")
    elif is_algebraically_split(rec):
        rep.conjecture_candidate = True
        rep.notes.append("even, algebraically split, nonzero polynomial, and no obstruction "
                         "found: relevant to the even-component vanishing conjecture")


def check_record(rec: LinkRecord, tests: Sequence[str] | None = None,
                 eps_list: Sequence[Sequence[int]] = (),
                 signs: Mapping | None = None, max_r: int = DEFAULT_MAX_R) -> RecordReport:
    """Run the selected test groups on one record, in a fixed order."""
    selected = set(TEST_GROUPS if tests is None else tests)
    unknown = selected - set(TEST_GROUPS)
    if unknown:
        raise ValueError(f"unknown test groups: {', '.join(sorted(unknown))}")
    rep = RecordReport(rec.name, rec.r)
    add = rep.verdicts.append
    r = rec.r
    split = is_algebraically_split(rec)

    if "duality" in selected:
        add(check_duality(rec))
    if "torres" in selected and r >= 2:
        for k in range(1, r + 1):
            rest = [i for i in range(1, r + 1) if i != k]
            if all(rec.lk(i, k) == 0 for i in rest) or rec.sublink_poly(rest) is not None:
                add(check_torres(rec, k))
    if "linking" in selected:
        rep.verdicts.extend(linking_screen(rec))
    if "eps" in selected:
        for eps in eps_list:
            if len(eps) == r:
                add(check_eps_symmetry(rec, eps))
            else:
                add(Verdict(Status.NOT_APPLICABLE, f"eps-symmetry({format_eps(eps)})",
                            message=f"sign vector has length {len(eps)}, link has {r} components"))
    if rec.alexander.is_zero():
        rep.notes.append("zero Alexander polynomial: polynomial identities hold vacuously")

    obstruction_groups = selected & {"divisibility", "specialization", "surgery", "diagonal"}
    if not obstruction_groups:
        _summarize(rep, rec)
        return rep
    if r < 2 or not split:
        reason = "needs two or more components" if r < 2 else "link is not algebraically split"
        for group, test_ids in (("divisibility", ("square-divisibility", "eps-divisibility")),
                                ("specialization", ("one-variable-specialization",
                                                    "codim-one-specialization")),
                                ("surgery", ("surgery-sums",)),
                                ("diagonal", ("diagonal-vanishing",))):
            if group in selected:
                for t in test_ids:
                    add(Verdict(Status.NOT_APPLICABLE, t, message=reason))
        _summarize(rep, rec)
        return rep

    if "divisibility" in selected:
        if r == 2:
            add(divisibility_check(rec.alexander, "amphi"))
            add(divisibility_check(rec.alexander, "eps"))
        else:
            for t in ("square-divisibility", "eps-divisibility"):
                add(Verdict(Status.NOT_APPLICABLE, t, message="only for two components"))

    family = None
    if selected & {"specialization", "surgery"}:
        try:
            family = build_family(rec)
        except ExtractionError as exc:
            add(Verdict(Status.DATA_ERROR, "factor-extraction",
                        {"J": list(exc.indices), "kind": exc.kind}, str(exc)))
        else:
            absent = [J for J, v in family.provenance.items() if v == "absent"]
            if absent:
                rep.notes.append("sublink data absent for "
                                 + ", ".join("{" + ",".join(map(str, J)) + "}" for J in absent))
    if family is not None:
        if "specialization" in selected:
            rep.verdicts.extend(specialization_checks(family))
        if "surgery" in selected:
            fixed = None
            if signs is not None:
                fixed = {J: s for J, s in signs.items() if J in family.factors}
            add(surgery_sum_check(family, fixed, max_r=max_r))
    if "diagonal" in selected:
        add(diagonal_vanishing_check(rec.alexander, r))
    _summarize(rep, rec)
    return rep


def run_battery(path: str | Path, tests: Sequence[str] | None = None,
                eps_list: Sequence[Sequence[int]] = (), signs: Mapping | None = None,
                max_r: int = DEFAULT_MAX_R) -> Report:
    """Check every record of a JSON file; malformed records become DATA_ERROR
    entries and the run continues."""
    report = Report()
    for k, raw in enumerate(load_record_dicts(path)):
        name = raw.get("name", f"record-{k}") if isinstance(raw, Mapping) else f"record-{k}"
        try:
            rec = record_from_dict(raw)
        except RecordError as exc:
            rep = RecordReport(str(name), raw.get("components") if isinstance(raw, Mapping) else None)
            rep.verdicts.append(Verdict(Status.DATA_ERROR, "parse", message=str(exc)))
            _summarize(rep, None)
            report.records.append(rep)
            continue
        report.records.append(check_record(rec, tests, eps_list, signs, max_r))
    return report


# ---------------------------------------------------------------------------
# rendering


def _text_line(v: Verdict) -> str:
    line = f"  {v.test_id:<32} {v.status.short:<10}"
    if v.message:
        line += f" {v.message}"
    if v.status is Status.FAIL and v.witness:
        line += f"  witness={json.dumps(v.witness, sort_keys=True)}"
    return line.rstrip()


def emit_report(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.to_list(), indent=2)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    for rep in report.records:
        flag = ""
        if rep.conjecture_flag:
            flag = "  [conjecture-consistent]"
        elif rep.conjecture_candidate:
            flag = "  [conjecture-relevant]"
        r = "?" if rep.components is None else rep.components
        lines.append(f"{rep.name} (r={r}): {rep.overall_status}{flag}")
        lines.extend(_text_line(v) for v in rep.verdicts)
        lines.extend(f"  note: {n}" for n in rep.notes)
    counts = {s: sum(1 for rep in report.records if rep.overall_status == s)
              for s in (CONSISTENT, OBSTRUCTED, DATA_ERROR)}
    n = len(report.records)
    summary = f"{n} record{'s' if n != 1 else ''}"
    if n:
        summary += ": " + ", ".join(f"{c} {s}" for s, c in counts.items() if c)
    lines.append(summary)
    return "\n".join(lines)


def parse_report(text: str) -> Report:
    return Report.from_list(json.loads(text))
