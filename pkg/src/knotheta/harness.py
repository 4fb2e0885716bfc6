"""Corpus loading and cross-engine verification."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import _kernels as K
from .diagram import LinkDiagram, parse_pd, resolve
from .errors import CrossingLimitExceeded, DiagramError, KnothetaError, PolynomialError
from .homfly import (
    CONVENTION,
    apply_convention,
    homfly_recursive,
    homfly_state_sum,
    specialize_to_alexander,
)
from .kauffman import DEFAULT_MAX_CROSSINGS, jones_reduced, jones_unreduced
from .polynomial import LaurentPoly
from .theta import theta_homfly, theta_jones

ALL_CHECKS = ("theorem_jones", "theorem_homfly", "skein", "monodromy", "aliases",
              "specialization", "alexander", "expected")

EXPECTED_COLUMNS = ("expected_jones", "expected_homfly")


class CorpusError(KnothetaError):
    """A corpus file could not be read."""


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    pd: str
    aliases: tuple[str, ...] = ()
    expected: dict[str, str] = field(default_factory=dict, hash=False)
    line: int = 0

    def diagram(self) -> LinkDiagram:
        return parse_pd(self.pd)

    def alias_diagrams(self) -> list[LinkDiagram]:
        return [parse_pd(a) for a in self.aliases]


class Corpus(list):
    """List of entries; ``errors`` holds (line, message) for rows skipped leniently."""

    def __init__(self, entries: Iterable[CorpusEntry] = (), errors: Sequence[tuple[int, str]] = ()):
        super().__init__(entries)
        self.errors = list(errors)


def _validate(entry: CorpusEntry) -> None:
    entry.diagram()
    for a in entry.aliases:
        parse_pd(a)
    for key, text in entry.expected.items():
        LaurentPoly.parse(text)


def _rows_from_csv(text: str):
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or "name" not in reader.fieldnames or "pd" not in reader.fieldnames:
        raise CorpusError("corpus CSV needs at least the columns name and pd")
    for row in reader:
        yield reader.line_num, row


def _rows_from_json(text: str):
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise CorpusError(f"corpus JSON does not parse: {exc}") from exc
    if not isinstance(doc, list):
        raise CorpusError("corpus JSON must be an array of entries")
    for i, row in enumerate(doc, start=1):
        if not isinstance(row, dict):
            yield i, {"name": None}
            continue
        aliases = row.get("aliases") or []
        flat = dict(row)
        flat["aliases"] = "|".join(aliases) if isinstance(aliases, list) else aliases
        for k, v in (row.get("expected") or {}).items():
            flat[f"expected_{k}"] = v
        yield i, flat


def parse_corpus(text: str, fmt: str = "csv", lenient: bool = False) -> Corpus:
    rows = _rows_from_json(text) if fmt == "json" else _rows_from_csv(text)
    entries, errors = [], []
    for line, row in rows:
        try:
            name = (row.get("name") or "").strip()
            if not name:
                raise CorpusError("missing name")
            aliases = tuple(a.strip() for a in (row.get("aliases") or "").split("|") if a.strip())
            expected = {k[len("expected_"):]: v.strip() for k, v in row.items()
                        if k and k.startswith("expected_") and v and v.strip()}
            entry = CorpusEntry(name, (row.get("pd") or "").strip(), aliases, expected, line)
            _validate(entry)
        except (KnothetaError, ValueError) as exc:
            msg = f"line {line}: {exc}"
            if not lenient:
                raise CorpusError(msg) from exc
            errors.append((line, str(exc)))
            continue
        entries.append(entry)
    return Corpus(entries, errors)


def load_corpus(path: str | Path, lenient: bool = False) -> Corpus:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
    fmt = "json" if path.suffix.lower() == ".json" or text.lstrip().startswith("[") else "csv"
    return parse_corpus(text, fmt, lenient)


def bundled_corpus_path() -> Path:
    return Path(__file__).with_name("data") / "corpus.csv"


def load_bundled_corpus() -> Corpus:
    return load_corpus(bundled_corpus_path())


# ---------------------------------------------------------------------------
# checks

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class VerifyReport:
    name: str
    results: list[CheckResult] = field(default_factory=list)
    skipped: str = ""

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "skipped": self.skipped,
                "checks": [r.to_dict() for r in self.results]}

    def to_text(self) -> str:
        if self.skipped:
            return f"{self.name}: skipped ({self.skipped})"
        lines = [f"{self.name}: {'ok' if self.passed else 'FAIL'}"]
        for r in self.results:
            tail = f"  {r.detail}" if r.detail and not r.passed else ""
            lines.append(f"  [{'pass' if r.passed else 'FAIL'}] {r.name}{tail}")
        return "\n".join(lines)


def diff_text(lhs: LaurentPoly, rhs: LaurentPoly) -> str:
    return f"{lhs} != {rhs} (difference {lhs - rhs})"


class _Engines:
    """Per-diagram cache of engine outputs used by several checks."""

    def __init__(self, threads: int | None):
        self.threads = threads
        self._cache: dict[tuple[str, LinkDiagram], LaurentPoly] = {}

    def get(self, which: str, d: LinkDiagram) -> LaurentPoly:
        key = (which, d)
        if key not in self._cache:
            self._cache[key] = self._compute(which, d)
        return self._cache[key]

    def _compute(self, which: str, d: LinkDiagram) -> LaurentPoly:
        if which == "jones":
            return jones_unreduced(d, self.threads, max_crossings=64)
        if which == "theta_jones":
            return theta_jones(d, self.threads, max_crossings=64).polynomial
        if which == "homfly":
            return homfly_recursive(d, max_crossings=64)
        if which == "homfly_statesum":
            return homfly_state_sum(d, max_crossings=64)
        if which == "theta_homfly":
            return theta_homfly(d, max_crossings=64).polynomial
        raise KeyError(which)


INVARIANTS = ("jones", "theta_jones", "homfly", "homfly_statesum", "theta_homfly")


def skein_residual(d: LinkDiagram, c: int, homfly: Callable[[LinkDiagram], LaurentPoly]) -> LaurentPoly:
    """a P(D+) - a^-1 P(D-) - z P(D0) at crossing c (zero when the relation holds)."""
    from .diagram import ORIENTED, SWITCH

    a = LaurentPoly.var("a")
    z = LaurentPoly.var("z")
    other = resolve(d, c, SWITCH)
    d_plus, d_minus = (d, other) if d.signs[c] > 0 else (other, d)
    d_zero = resolve(d, c, ORIENTED)
    return a * homfly(d_plus) - a ** -1 * homfly(d_minus) - z * homfly(d_zero)


def _check_monodromy(d: LinkDiagram, threads: int | None) -> CheckResult:
    if d.n == 0:
        return CheckResult("monodromy", True, "no crossings")
    a = d.arrays
    cut_end = 4 * (d.n - 1) + 2
    fails = K.run_chunked(K.pairing_audit, 1 << d.n,
                          (d.n, a.other_end, a.qface, a.n_faces, a.face_is_outer, cut_end), threads)
    names = ("pairing", "cut pairing", "monodromy", "nesting", "sigma-punctures")
    bad = [f"{names[i]}: {int(fails[i])} states" for i in range(5) if fails[i]]
    return CheckResult("monodromy", not bad, "; ".join(bad) or f"{1 << d.n} states")


def verify(entry: CorpusEntry, checks: Iterable[str] | None = None,
           max_crossings: int = DEFAULT_MAX_CROSSINGS, threads: int | None = None,
           homfly_max_crossings: int | None = None) -> VerifyReport:
    """Run the selected checks on one entry; failures are report lines, never exceptions."""
    try:
        d = entry.diagram()
        aliases = entry.alias_diagrams()
    except KnothetaError as exc:
        return VerifyReport(entry.name, [CheckResult("parse", False, str(exc))])
    return verify_diagram(d, aliases, entry.expected, checks, max_crossings, threads,
                          homfly_max_crossings, name=entry.name)


def verify_diagram(d: LinkDiagram, aliases: Sequence[LinkDiagram] = (),
                   expected: dict[str, str] | None = None, checks: Iterable[str] | None = None,
                   max_crossings: int = DEFAULT_MAX_CROSSINGS, threads: int | None = None,
                   homfly_max_crossings: int | None = None, name: str = "input") -> VerifyReport:
    """The checks of :func:`verify` on diagrams that are already parsed."""
    checks = tuple(ALL_CHECKS if checks is None else checks)
    expected = expected or {}
    report = VerifyReport(name)
    biggest = max([d.n] + [x.n for x in aliases])
    if biggest > max_crossings:
        report.skipped = f"{biggest} crossings exceed the limit of {max_crossings}"
        return report
    eng = _Engines(threads)
    hmax = max_crossings if homfly_max_crossings is None else homfly_max_crossings

    def run(name: str, fn: Callable[[], CheckResult]) -> None:
        if name not in checks:
            return
        try:
            report.results.append(fn())
        except (AssertionError, KnothetaError) as exc:
            report.results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))

    def theorem_jones() -> CheckResult:
        J, T = eng.get("jones", d), eng.get("theta_jones", d)
        return CheckResult("theorem_jones", J == T, "" if J == T else diff_text(T, J))

    def theorem_homfly() -> CheckResult:
        if d.n > hmax:
            return CheckResult("theorem_homfly", True, f"skipped above {hmax} crossings")
        R, S, T = (eng.get(w, d) for w in ("homfly", "homfly_statesum", "theta_homfly"))
        ok = R == S == T
        return CheckResult("theorem_homfly", ok, "" if ok else f"recursive {R}; state sum {S}; theta {T}")

    def skein() -> CheckResult:
        bad = []
        for c in range(d.n):
            r = skein_residual(d, c, lambda x: eng.get("homfly", x))
            if not r.is_zero():
                bad.append(f"crossing {c}: residual {r}")
        return CheckResult("skein", not bad, "; ".join(bad) or f"{d.n} crossings")

    def aliases_check() -> CheckResult:
        bad = []
        for idx, x in enumerate(aliases):
            for inv in INVARIANTS:
                if inv != "jones" and inv != "theta_jones" and max(x.n, d.n) > hmax:
                    continue
                lhs, rhs = eng.get(inv, d), eng.get(inv, x)
                if lhs != rhs:
                    bad.append(f"alias {idx + 1} {inv}: {diff_text(rhs, lhs)}")
        return CheckResult("aliases", not bad, "; ".join(bad) or f"{len(aliases)} aliases")

    def specialization() -> CheckResult:
        J = eng.get("theta_jones", d).divide_exact(LaurentPoly.parse("q + q^-1"))
        H = apply_convention(eng.get("theta_homfly", d), CONVENTION)
        return CheckResult("specialization", J == H, "" if J == H else diff_text(H, J))

    def alexander() -> CheckResult:
        if d.n_components != 1:
            return CheckResult("alexander", True, "not a knot")
        D = specialize_to_alexander(eng.get("homfly", d))
        t = LaurentPoly.var("t")
        mirror = D.substitute({"t": t ** -1})
        lo_d, lo_m = D.exponent_range("t")[0] if "t" in D.variables() else 0, \
            mirror.exponent_range("t")[0] if "t" in mirror.variables() else 0
        symmetric = D * t ** -lo_d in (mirror * t ** -lo_m, -(mirror * t ** -lo_m))
        at_one = D.substitute({"t": 1}).constant_term()
        ok = symmetric and abs(at_one) == 1
        return CheckResult("alexander", ok, "" if ok else f"Delta = {D}, Delta(1) = {at_one}")

    def expected_check() -> CheckResult:
        bad = []
        if "jones" in expected:
            want = LaurentPoly.parse(expected["jones"])
            got = jones_reduced(d, threads, max_crossings=64)
            if got != want:
                bad.append(f"jones {diff_text(got, want)}")
        if "homfly" in expected and d.n <= hmax:
            want = LaurentPoly.parse(expected["homfly"])
            got = eng.get("homfly", d)
            if got != want:
                bad.append(f"homfly {diff_text(got, want)}")
        return CheckResult("expected", not bad, "; ".join(bad) or
                           ", ".join(sorted(expected)) or "none given")

    run("theorem_jones", theorem_jones)
    run("theorem_homfly", theorem_homfly)
    run("skein", skein)
    run("monodromy", lambda: _check_monodromy(d, threads))
    run("aliases", aliases_check)
    run("specialization", specialization)
    run("alexander", alexander)
    run("expected", expected_check)
    return report


def verify_corpus(entries: Sequence[CorpusEntry], checks: Iterable[str] | None = None,
                  max_crossings: int = DEFAULT_MAX_CROSSINGS, threads: int | None = None,
                  workers: int = 1) -> list[VerifyReport]:
    """Verify every entry; reports come back in entry order whatever ``workers`` is."""
    checks = tuple(ALL_CHECKS if checks is None else checks)

    def one(e: CorpusEntry) -> VerifyReport:
        return verify(e, checks, max_crossings, threads)

    if workers <= 1:
        return [one(e) for e in entries]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, entries))


def reports_to_json(reports: Sequence[VerifyReport]) -> str:
    return json.dumps({"passed": all(r.passed for r in reports),
                       "entries": [r.to_dict() for r in reports]}, indent=2)


def reports_to_text(reports: Sequence[VerifyReport]) -> str:
    lines = [r.to_text() for r in reports]
    n_fail = sum(not r.passed for r in reports)
    n_skip = sum(bool(r.skipped) for r in reports)
    lines.append(f"{len(reports)} entries, {n_fail} failing, {n_skip} skipped")
    return "\n".join(lines)


__all__ = [
    "ALL_CHECKS", "CheckResult", "Corpus", "CorpusEntry", "CorpusError", "VerifyReport",
    "bundled_corpus_path", "load_bundled_corpus", "load_corpus", "parse_corpus",
    "reports_to_json", "reports_to_text", "skein_residual", "verify", "verify_corpus",
    "verify_diagram",
    "CrossingLimitExceeded", "DiagramError", "PolynomialError",
]
