"""One-step reduction, leftmost-outermost normalization, head forms and the
subject-reduction replay harness."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .syntax import (Case, CDAxiom, Context, DUM, Efq, ExElim, ExIntro,
                     FalsityConst, FOApp, FOLam, FOTerm, Formula, Inj, Lam,
                     Pair, PApp, Path, ProofTerm, Proj, PVar, alpha_equal,
                     children, fo_subst, format_path, proof_free_vars,
                     proof_subst, replace_at, subterm_at)
from .typechecker import Mode, TypingError, infer

DEFAULT_FUEL = 10_000


class Rule(enum.Enum):
    BETA = "Beta"
    FO_BETA = "FOBeta"
    PROJ_PAIR = "ProjPair"
    CASE_INJ = "CaseInj"
    EXELIM_INTRO = "ExElimIntro"
    CD_INJ0 = "CDInj0"
    CD_INJ1 = "CDInj1"


class NotARedex(ValueError):
    pass


def redex_rule(t: ProofTerm) -> Optional[Rule]:
    """The rule whose left-hand side ``t`` matches, if any."""
    match t:
        case PApp(CDAxiom(), FOLam(_, Inj(0, _, _))):
            return Rule.CD_INJ0
        case PApp(CDAxiom(), FOLam(_, Inj(1, _, _))):
            return Rule.CD_INJ1
        case PApp(Lam(), _):
            return Rule.BETA
        case FOApp(FOLam(), _):
            return Rule.FO_BETA
        case Proj(Pair(), _):
            return Rule.PROJ_PAIR
        case Case(Inj(), _, _, _, _):
            return Rule.CASE_INJ
        case ExElim(ExIntro(), _, _, _):
            return Rule.EXELIM_INTRO
    return None


def contract(t: ProofTerm) -> ProofTerm:
    """Rewrite a redex to its contractum."""
    match t:
        case PApp(CDAxiom(instance), FOLam(alpha, Inj(index, u, _))):
            # the contractum is typed by the consequent of the instance
            conclusion = instance.right
            if index == 0:
                return Inj(0, FOLam(alpha, u), conclusion)
            return Inj(1, fo_subst(u, DUM, alpha), conclusion)
        case PApp(Lam(x, _, body), arg):
            return proof_subst(body, arg, x)
        case FOApp(FOLam(alpha, body), m):
            return fo_subst(body, m, alpha)
        case Proj(Pair(left, right), index):
            return left if index == 0 else right
        case Case(Inj(index, u, _), x1, b1, x2, b2):
            return proof_subst(b1, u, x1) if index == 0 else proof_subst(b2, u, x2)
        case ExElim(ExIntro(m, u, _), alpha, x, body):
            return proof_subst(fo_subst(body, m, alpha), u, x)
    raise NotARedex(f"no reduction rule applies to {t}")


def iter_redexes(t: ProofTerm, path: Path = ()) -> Iterator[tuple[Path, Rule]]:
    rule = redex_rule(t)
    if rule is not None:
        yield path, rule
    for label, c in children(t):
        yield from iter_redexes(c, path + (label,))


def find_redexes(t: ProofTerm) -> list[tuple[Path, Rule]]:
    """All redex positions, leftmost-outermost first."""
    return list(iter_redexes(t))


def is_normal(t: ProofTerm) -> bool:
    return next(iter_redexes(t), None) is None


@dataclass(frozen=True)
class Step:
    rule: Rule
    path: Path
    before: ProofTerm
    after: ProofTerm

    def describe(self, n: int) -> str:
        return f"step {n}: {self.rule.value} at {format_path(self.path)}"


@dataclass
class Trace:
    initial: ProofTerm
    steps: list[Step] = field(default_factory=list)
    normal: bool = False
    fuel_exhausted: bool = False

    @property
    def final(self) -> ProofTerm:
        return self.steps[-1].after if self.steps else self.initial

    def lines(self) -> list[str]:
        return [s.describe(i) for i, s in enumerate(self.steps, 1)]


def step_at(t: ProofTerm, path: Path) -> Step:
    redex = subterm_at(t, path)
    rule = redex_rule(redex)
    if rule is None:
        raise NotARedex(f"no redex at {format_path(path)}")
    return Step(rule, path, t, replace_at(t, path, contract(redex)))


def step(t: ProofTerm) -> Optional[Step]:
    """Contract the leftmost-outermost redex; None when ``t`` is normal."""
    found = next(iter_redexes(t), None)
    if found is None:
        return None
    return step_at(t, found[0])


def normalize(t: ProofTerm, fuel: int = DEFAULT_FUEL) -> Trace:
    """Reduce leftmost-outermost until normal or until ``fuel`` steps are spent."""
    if fuel < 1:
        raise ValueError("fuel must be positive")
    trace = Trace(t)
    current = t
    for _ in range(fuel):
        s = step(current)
        if s is None:
            trace.normal = True
            return trace
        trace.steps.append(s)
        current = s.after
    trace.normal = is_normal(current)
    trace.fuel_exhausted = not trace.normal
    return trace


# ---------------------------------------------------------------------------
# head decomposition


class HeadKind(enum.Enum):
    VARIABLE = "variable"
    CONSTANT = "constant"
    INTRO = "intro"


@dataclass(frozen=True)
class EfqHead:
    """``efq[P]`` as a constant awaiting its proof-of-bot argument."""
    atom: Formula


@dataclass(frozen=True)
class ProofArg:
    term: ProofTerm


@dataclass(frozen=True)
class FOArg:
    term: FOTerm


@dataclass(frozen=True)
class ProjElim:
    index: int


@dataclass(frozen=True)
class CaseElim:
    left_var: str
    left: ProofTerm
    right_var: str
    right: ProofTerm


@dataclass(frozen=True)
class UnpackElim:
    fo_var: str
    var: str
    body: ProofTerm


SpineItem = Union[ProofArg, FOArg, ProjElim, CaseElim, UnpackElim]
Head = Union[PVar, CDAxiom, FalsityConst, EfqHead, Lam, FOLam, Pair, Inj, ExIntro]


@dataclass(frozen=True)
class HeadForm:
    binders: tuple[tuple[str, Formula], ...]
    head: Head
    spine: tuple[SpineItem, ...]

    @property
    def kind(self) -> HeadKind:
        if isinstance(self.head, PVar):
            return HeadKind.VARIABLE
        if isinstance(self.head, (CDAxiom, FalsityConst, EfqHead)):
            return HeadKind.CONSTANT
        return HeadKind.INTRO


def head_decompose(t: ProofTerm) -> HeadForm:
    """Write ``t`` as ``fun z1 ... fun zn => r u1 ... uk``.

    Eliminations are peeled off into the spine, innermost (``u1``) first.
    """
    binders = []
    while isinstance(t, Lam):
        binders.append((t.var, t.domain))
        t = t.body
    spine: list[SpineItem] = []
    while True:
        match t:
            case PApp(fn, arg):
                spine.append(ProofArg(arg))
                t = fn
            case FOApp(fn, m):
                spine.append(FOArg(m))
                t = fn
            case Proj(body, i):
                spine.append(ProjElim(i))
                t = body
            case Case(s, x1, b1, x2, b2):
                spine.append(CaseElim(x1, b1, x2, b2))
                t = s
            case ExElim(s, a, x, body):
                spine.append(UnpackElim(a, x, body))
                t = s
            case Efq(atom, body):
                spine.append(ProofArg(body))
                return HeadForm(tuple(binders), EfqHead(atom), tuple(reversed(spine)))
            case _:
                return HeadForm(tuple(binders), t, tuple(reversed(spine)))


def recompose(form: HeadForm) -> ProofTerm:
    spine = list(form.spine)
    if isinstance(form.head, EfqHead):
        first = spine.pop(0)
        t: ProofTerm = Efq(form.head.atom, first.term)
    else:
        t = form.head
    for item in spine:
        match item:
            case ProofArg(arg):
                t = PApp(t, arg)
            case FOArg(m):
                t = FOApp(t, m)
            case ProjElim(i):
                t = Proj(t, i)
            case CaseElim(x1, b1, x2, b2):
                t = Case(t, x1, b1, x2, b2)
            case UnpackElim(a, x, body):
                t = ExElim(t, a, x, body)
    for var, dom in reversed(form.binders):
        t = Lam(var, dom, t)
    return t


# ---------------------------------------------------------------------------
# subject reduction replay


@dataclass
class Violation:
    index: int
    step: Step
    reason: str

    def __str__(self) -> str:
        return f"{self.step.describe(self.index)}: {self.reason}"


@dataclass
class ReplayReport:
    formula: Formula
    trace: Trace
    violation: Optional[Violation] = None

    @property
    def ok(self) -> bool:
        return self.violation is None


def check_step(ctx: Context, s: Step, expected: Formula, mode: Mode) -> Optional[str]:
    """Why ``s`` breaks subject reduction, or None if it does not."""
    try:
        after = infer(ctx, s.after, mode)
    except TypingError as e:
        return f"contractum is ill-typed: {e}"
    if not alpha_equal(after, expected):
        return f"type changed from {expected} to {after}"
    grown = proof_free_vars(s.after) - proof_free_vars(s.before)
    if grown:
        return f"new free proof variables {sorted(grown)}"
    return None


def replay_subject_reduction(ctx: Context, t: ProofTerm, mode: Mode = Mode.CD,
                             fuel: int = DEFAULT_FUEL) -> ReplayReport:
    """Normalize ``t`` and re-infer the type after every step."""
    expected = infer(ctx, t, mode)
    trace = normalize(t, fuel)
    report = ReplayReport(expected, trace)
    for i, s in enumerate(trace.steps, 1):
        reason = check_step(ctx, s, expected, mode)
        if reason is not None:
            report.violation = Violation(i, s, reason)
            break
    return report
