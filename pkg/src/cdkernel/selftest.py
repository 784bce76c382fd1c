"""Invariant suite over a directory of ``.cd`` files (and optionally random terms)."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

from .extraction import (ExtractionError, extract_disjunct, extract_universal,
                         extract_witness)
from .parser import Definition, SourceFile, parse
from .reducer import (DEFAULT_FUEL, head_decompose, normalize, recompose,
                      replay_subject_reduction)
from .syntax import (And, Exists, Forall, Formula, Imp, Or, ProofTerm,
                     children, proof_free_vars)
from .translator import (DummyCache, NotSimulated, check_simulation,
                         contains_axiom, translate)
from .typechecker import Mode, TypingError, check


@dataclass
class CheckResult:
    name: str
    failures: list[str] = field(default_factory=list)
    count: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        if self.passed:
            return f"PASS {self.name} ({self.count} checked)"
        return f"FAIL {self.name}: {self.failures[0]} ({len(self.failures)} failure(s))"


@dataclass
class Loaded:
    path: Path
    source: SourceFile

    def label(self, d: Definition) -> str:
        return f"{self.path.name}:{d.name}"


def load_corpus(directory) -> list[Loaded]:
    """Parse every ``*.cd`` file under ``directory`` in sorted order."""
    files = sorted(Path(directory).glob("*.cd"))
    return [Loaded(p, parse(p.read_text(encoding="utf-8"))) for p in files]


def typing_outcome(src: SourceFile, d: Definition) -> Optional[str]:
    """None when ``d`` checks or is rejected as its ``#reject`` line says."""
    try:
        check(src.hypotheses, d.term, d.formula, src.mode, src.signature)
    except TypingError as e:
        if d.expect_error is None:
            return f"unexpected error: {e}"
        if e.kind is not d.expect_error:
            return f"expected {d.expect_error.value}, got {e}"
        return None
    if d.expect_error is not None:
        return f"expected {d.expect_error.value}, but it type-checks"
    return None


def positives(corpus: Iterable[Loaded]) -> Iterator[tuple[Loaded, Definition]]:
    for item in corpus:
        for d in item.source.definitions:
            if d.expect_error is None:
                yield item, d


def subformulas(a: Formula) -> Iterator[Formula]:
    yield a
    if isinstance(a, (And, Or, Imp)):
        yield from subformulas(a.left)
        yield from subformulas(a.right)
    elif isinstance(a, (Forall, Exists)):
        yield from subformulas(a.body)


def subterms(t: ProofTerm) -> Iterator[ProofTerm]:
    yield t
    for _, c in children(t):
        yield from subterms(c)


def extract_for(t: ProofTerm, a: Formula):
    """Run the extractor matching the top connective of ``a``, if any."""
    if isinstance(a, Exists):
        return extract_witness(t, a)
    if isinstance(a, Or):
        return extract_disjunct(t, a)
    if isinstance(a, Forall):
        return extract_universal(t, a)
    return None


def _run(name: str, items, body: Callable) -> CheckResult:
    result = CheckResult(name)
    for label, *args in items:
        result.count += 1
        problem = body(*args)
        if problem:
            result.failures.append(f"{label}: {problem}")
    return result


def run_selftest(directory, random_count: int = 0, seed: int = 0,
                 fuel: int = DEFAULT_FUEL) -> list[CheckResult]:
    corpus = load_corpus(directory)
    cases = [(item.label(d), item.source, d) for item in corpus for d in item.source.definitions]
    good = [(item.label(d), item.source, d) for item, d in positives(corpus)]
    cd_good = [x for x in good if x[1].mode is Mode.CD]
    results = [_run("typing", cases, typing_outcome)]
    # later checks assume the terms type-check
    good = [x for x in good if typing_outcome(x[1], x[2]) is None]
    cd_good = [x for x in cd_good if typing_outcome(x[1], x[2]) is None]

    terms = [(label, src.hypotheses, d.term, src.mode) for label, src, d in good]
    if random_count:
        from .generate import CONTEXT, random_terms
        terms += [(f"random#{i}", CONTEXT, t, Mode.CD)
                  for i, (t, _) in enumerate(random_terms(random_count, seed))]

    traces = {}

    def replay(ctx, t, mode):
        report = replay_subject_reduction(ctx, t, mode, fuel)
        traces[id(t)] = report.trace
        if report.trace.fuel_exhausted:
            return f"fuel exhausted after {len(report.trace.steps)} steps"
        return None if report.ok else str(report.violation)

    results.append(_run("subject reduction and normalization", terms, replay))

    def heads(ctx, t, mode):
        trace = traces[id(t)]
        for s in (*subterms(t), *subterms(trace.final)):
            if recompose(head_decompose(s)) != s:
                return f"head decomposition does not round-trip on {s}"
        return None

    results.append(_run("head decomposition", terms, heads))

    def shapes(src, d):
        if proof_free_vars(d.term) or not isinstance(d.formula, (Exists, Or, Forall)):
            return None
        final = normalize(d.term, fuel).final
        try:
            extract_for(final, d.formula)
        except ExtractionError as e:
            return str(e)
        return None

    results.append(_run("constructiveness shapes", cd_good, shapes))

    cache = DummyCache()

    def translation(src, d):
        image = translate(d.term, cache)
        if contains_axiom(image):
            return "translation still contains the axiom"
        try:
            check(src.hypotheses, image, d.formula, Mode.IL_BOT, src.signature)
        except TypingError as e:
            return f"translation is ill-typed: {e}"
        return None

    results.append(_run("translation typing", cd_good, translation))

    def dummies(src, d):
        for a in subformulas(d.formula):
            term = cache.get(a)
            if proof_free_vars(term):
                return f"dummy for {a} is open"
            try:
                check({}, term, a, Mode.IL_BOT)
            except TypingError as e:
                return f"dummy for {a} is ill-typed: {e}"
        return None

    results.append(_run("dummy terms", good, dummies))

    def simulation(src, d):
        current = d.term
        for s in normalize(d.term, fuel).steps:
            try:
                check_simulation(current, s, cache=cache)
            except NotSimulated as e:
                return str(e)
            current = s.after
        return None

    results.append(_run("simulation", cd_good, simulation))
    return results

