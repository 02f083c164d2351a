"""Embedded corpus of families and the table verifier."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

from .blowup import ambient_weights_from_grading, centre_normal_form, equation_classes
from .chamber import endpoint_normalize, in_cone, minors_nonpositive, ray_scan
from .fano import INCONCLUSIVE, NONSOLID, TYPE_I, FanoFamily, SchemaError, family_from_json, lcm_criterion, weight_one_count
from .game import DECLARED, FLIP, GameError, LinkTrace, gamma_for, trace_link
from .polyring import BudgetExceeded

TABLES = (1, 2, 3, 4)


class CorpusError(ValueError):
    pass


@dataclass
class Corpus:
    families: dict[str, FanoFamily]

    def __getitem__(self, fid: str) -> FanoFamily:
        return self.families[normalize_id(fid)]

    def __contains__(self, fid: str) -> bool:
        return normalize_id(fid) in self.families

    def __len__(self):
        return len(self.families)

    def table(self, n: int) -> list[FanoFamily]:
        return [f for f in self.sorted() if f.expected.get("table") == n]

    def sorted(self) -> list[FanoFamily]:
        return [self.families[k] for k in sorted(self.families)]

    def to_json(self) -> list[dict]:
        return [f.to_json() for f in self.sorted()]

    def check_invariants(self):
        for f in self.sorted():
            t = f.expected.get("table")
            if t in (2, 3, 4) and f.grading is None:
                raise CorpusError(f"{f.id}: table {t} family without a grading")
            if t == 1 and "dim_A" not in f.expected:
                raise CorpusError(f"{f.id}: table 1 family without dim_A")


def normalize_id(fid: str) -> str:
    fid = str(fid).strip()
    return fid if fid.startswith("#") else "#" + fid


def _records(path: Path) -> Iterable[tuple[dict, str]]:
    files = sorted(path.glob("*.json")) if path.is_dir() else [path]
    for p in files:
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{p}:{exc.lineno}: {exc.msg}") from None
        if isinstance(data, list):
            for i, d in enumerate(data):
                yield d, f"{p}[{i}]"
        else:
            yield data, str(p)


def _embedded() -> Iterable[tuple[dict, str]]:
    root = resources.files("tworay") / "data"
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            yield json.loads(entry.read_text()), f"data/{entry.name}"


def _collect(records: Iterable[tuple[dict, str]]) -> dict[str, FanoFamily]:
    out: dict[str, FanoFamily] = {}
    seen: dict[str, str] = {}
    for data, where in records:
        fam = family_from_json(data, where)
        if fam.id in out:
            raise CorpusError(f"duplicate id {fam.id} in {where} (first seen in {seen[fam.id]})")
        out[fam.id] = fam
        seen[fam.id] = where
    return out


def load(paths: str | Path | Iterable[str | Path] | None = None, embedded: bool = True) -> Corpus:
    """Embedded families, overridden by id with those read from ``paths``."""
    families = _collect(_embedded()) if embedded else {}
    if paths is not None:
        if isinstance(paths, (str, Path)):
            paths = [paths]
        external: dict[str, FanoFamily] = {}
        for p in paths:
            for fid, fam in _collect(_records(Path(p))).items():
                if fid in external:
                    raise CorpusError(f"duplicate id {fid} across external files")
                external[fid] = fam
        families.update(external)
    corpus = Corpus(families)
    corpus.check_invariants()
    return corpus


# --- verification -------------------------------------------------------------

@dataclass(frozen=True)
class Diff:
    family: str
    cell: str
    expected: Any
    actual: Any

    def __str__(self):
        return f"{self.family} {self.cell}: expected {self.expected!r}, got {self.actual!r}"


@dataclass
class FamilyResult:
    family: str
    table: int | None
    checks: dict[str, bool] = field(default_factory=dict)
    evidence: list[str] = field(default_factory=list)
    trace: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def verdict(self) -> str:
        if self.error:
            return "ERROR"
        return "OK" if all(self.checks.values()) else "DIFF"


@dataclass
class Report:
    level: int
    results: list[FamilyResult] = field(default_factory=list)
    diffs: list[Diff] = field(default_factory=list)

    @property
    def errors(self) -> list[FamilyResult]:
        return [r for r in self.results if r.error]

    @property
    def ok(self) -> bool:
        return not self.diffs and not self.errors

    def exit_status(self) -> int:
        if self.errors:
            return 3
        return 1 if self.diffs else 0

    def result(self, fid: str) -> FamilyResult:
        fid = normalize_id(fid)
        return next(r for r in self.results if r.family == fid)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "ok": self.ok,
            "families": [
                {
                    "id": r.family,
                    "table": r.table,
                    "verdict": r.verdict,
                    "checks": r.checks,
                    "evidence": r.evidence,
                    "trace": r.trace,
                    **({"error": r.error} if r.error else {}),
                }
                for r in self.results
            ],
            "diffs": [
                {"family": d.family, "cell": d.cell, "expected": _plain(d.expected), "actual": _plain(d.actual)}
                for d in self.diffs
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def text(self) -> str:
        lines = [f"level {self.level}: {len(self.results)} families, {len(self.diffs)} diffs, {len(self.errors)} errors"]
        for r in self.results:
            ev = ",".join(sorted(set(r.evidence))) or "-"
            lines.append(f"  {r.family:8} table {r.table}  {r.verdict:5} evidence={ev}")
            if r.error:
                lines.append(f"    error: {r.error}")
        for d in self.diffs:
            lines.append(f"  diff {d}")
        return "\n".join(lines)


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    return x


def is_submultiset(small, big) -> bool:
    return not (Counter(small) - Counter(big))


def parse_weight_tuple(text: str) -> tuple[int, tuple[int, ...]]:
    """'1/3(2,10,5,3,1)' -> (3, (2,10,5,3,1)); a bare '(2,3,3,1)' has index 1."""
    m = re.fullmatch(r"\s*(?:1/(\d+))?\s*\(([\d,\s]+)\)\s*", text)
    if not m:
        raise ValueError(f"bad weight tuple {text!r}")
    return int(m.group(1) or 1), tuple(int(x) for x in m.group(2).split(","))


class _Checker:
    def __init__(self, fam: FanoFamily, result: FamilyResult, diffs: list[Diff]):
        self.fam, self.result, self.diffs = fam, result, diffs

    def __call__(self, cell: str, expected, actual, ok: bool | None = None):
        ok = expected == actual if ok is None else ok
        self.result.checks[cell] = ok
        if not ok:
            self.diffs.append(Diff(self.fam.id, cell, expected, actual))


def _check_table1(fam: FanoFamily, check: _Checker):
    if fam.coordinates:
        check("dim_A", fam.expected["dim_A"], weight_one_count(fam))
        check("lcm", NONSOLID, lcm_criterion(fam.weights, fam.fano_index))
    if "centre_form" in fam.expected and fam.centre is not None:
        check("centre_form", fam.expected["centre_form"], str(centre_normal_form(fam)[0]))
    if "gamma_dimension" in fam.expected:
        _, dim = gamma_for(fam)
        check("gamma_dimension", fam.expected["gamma_dimension"], dim)


def _check_flip(fam: FanoFamily, trace: LinkTrace, check: _Checker):
    want = fam.expected["flip"]
    flips = [s for s in trace.steps if s.kind == FLIP]
    if not flips:
        check("flip", want, None, False)
        return
    step = flips[0]
    check("flip.contracted", want["contracted"], list(step.contracted))
    check("flip.extracted", want["extracted"], list(step.extracted))
    got = [str(x) for x in step.data.get("intersections", [])]
    check("flip.intersections", want["intersections"], got)


def _check_link(fam: FanoFamily, trace: LinkTrace, level: int, check: _Checker):
    exp = fam.expected
    ep = trace.endpoint
    check("lcm", INCONCLUSIVE, lcm_criterion(fam.weights, fam.fano_index))
    check("endpoint", exp["endpoint"], ep["class"])
    if "centre" in exp and fam.centre is not None:
        weights = ambient_weights_from_grading(fam) if fam.centre[1] == TYPE_I else dict(fam.coordinates)
        check("centre", exp["centre"], f"1/{weights[fam.centre_coordinate]}")
    fan = ray_scan(fam.grading, fam.cox_variables)
    check("mov_in_eff", True, all(in_cone(v, fan.eff) for v in fan.mov))
    if exp["table"] == 2:
        check("base", sorted(exp["base"]), sorted(ep.get("base", [])))
        check("dp_degree", exp["dp_degree"], ep.get("dp_degree"))
    if exp["table"] in (3, 4):
        matrix = endpoint_normalize(fan).matrix
        check("minors_nonpositive", True, minors_nonpositive(fan, matrix))
        target = exp["target"]
        got = ep.get("target_weights", [])
        check("target.ambient", target["ambient"], got, is_submultiset(target["ambient"], got))
        check("target.quotient", target["quotient"], ep.get("quotient"))
    if exp["table"] == 3 and "blowup_weights" in exp:
        d, tup = parse_weight_tuple(exp["blowup_weights"])
        kappa = sorted(ep.get("kappa", {}).values())
        check("blowup_weights", exp["blowup_weights"], kappa, is_submultiset(tup, kappa) and d == ep.get("d"))
    if "d" in exp:
        check("d", exp["d"], ep.get("d"))
    if exp["table"] == 4:
        check("curve", sorted(exp["curve"]), sorted(ep.get("curve", [])))
    if "discrepancy" in exp:
        check("discrepancy", Fraction(exp["discrepancy"]), ep.get("discrepancy"))
    if "exceptional_divisor" in exp:
        kappa = sorted(ep.get("kappa", {}).values())
        check("exceptional_divisor", exp["exceptional_divisor"], kappa[:3])
    if "centre_form" in exp:
        check("centre_form", exp["centre_form"], str(centre_normal_form(fam)[0]))
    if "ambient" in exp:
        got = ambient_weights_from_grading(fam)
        check("ambient", sorted(exp["ambient"]), sorted(got.values()))
    if level >= 2 and fam.equations:
        if "trace" in exp:
            check("trace", exp["trace"], trace.labels())
        if "fiber" in exp:
            fib = ep.get("fibre", {})
            check("fiber.weights", sorted(exp["fiber"]["weights"]), sorted(fib.get("weights", [])))
            check("fiber.degrees", exp["fiber"]["degrees"], fib.get("degrees"))
        if fam.centre and fam.centre[1] == TYPE_I:
            check("three_free", True, equation_classes(fam)[1])


def verify_family(fam: FanoFamily, level: int = 2) -> tuple[FamilyResult, list[Diff]]:
    result = FamilyResult(fam.id, fam.expected.get("table"))
    diffs: list[Diff] = []
    check = _Checker(fam, result, diffs)
    try:
        trace = trace_link(fam, level) if fam.grading is not None else None
        if trace is not None:
            result.trace = trace.labels()
            result.evidence = [s.evidence for s in trace.steps]
        if result.table == 1:
            _check_table1(fam, check)
            if "flip" in fam.expected and trace is not None:
                _check_flip(fam, trace, check)
            if "declared_endpoint" in fam.expected and trace is not None:
                result.evidence.append(DECLARED)
        elif result.table in (2, 3, 4):
            _check_link(fam, trace, level, check)
    except (GameError, BudgetExceeded, ValueError, ArithmeticError, KeyError) as exc:
        result.error = f"{type(exc).__name__}: {exc}"
    return result, diffs


def verify_tables(corpus: Corpus, level: int = 2) -> Report:
    report = Report(level)
    for fam in corpus.sorted():
        if fam.expected.get("table") not in TABLES:
            continue
        result, diffs = verify_family(fam, level)
        report.results.append(result)
        report.diffs.extend(diffs)
    return report
