"""Translation of constant-domain proofs into intuitionistic logic with a
falsity constant ``F``, plus a checker that every source reduction step is
matched by at least one step on the translated side."""
from __future__ import annotations

import dataclasses
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .reducer import Rule, Step, iter_redexes, step_at
from .syntax import (And, Atom, Bottom, Case, CDAxiom, Context, DUM, ExIntro,
                     Efq, Exists, F, FOApp, FOLam, Forall, Formula, Imp, Inj,
                     Lam, Or, Pair, Path, ProofTerm, PVar, Var, alpha_key,
                     children, fo_free_vars, fo_names, fo_subst, format_path, fresh_name,
                     proof_free_vars, replace_at, subterm_at)
from .typechecker import ErrorKind, TypingError, cd_instance_parts


class DummyCache:
    """Closed il-bot inhabitants ``d^A``, memoised up to alpha-equivalence."""

    def __init__(self) -> None:
        self._terms: dict[tuple, ProofTerm] = {}

    def __len__(self) -> int:
        return len(self._terms)

    def get(self, a: Formula) -> ProofTerm:
        key = alpha_key(a)
        if key not in self._terms:
            self._terms[key] = self._build(a)
        return self._terms[key]

    def _build(self, a: Formula) -> ProofTerm:
        match a:
            case Bottom():
                return F
            case Atom():
                return Efq(a, F)
            case And(left, right):
                return Pair(self.get(left), self.get(right))
            case Or(left, _):
                return Inj(0, self.get(left), a)
            case Imp(left, right):
                return Lam("x", left, self.get(right))
            case Forall(var, body):
                return FOLam(var, self.get(body))
            case Exists(var, body):
                return ExIntro(DUM, self.get(fo_subst(body, DUM, var)), a)
        raise TypeError(f"not a formula: {a!r}")


def dummy_term(a: Formula, cache: Optional[DummyCache] = None) -> ProofTerm:
    return (cache or DummyCache()).get(a)


def exfalso(a: Formula, t: ProofTerm, ctx: Optional[Context] = None) -> ProofTerm:
    """Turn a proof ``t`` of ``bot`` into a proof of any ``a``.

    Ex falso is primitive only at atoms; compound targets are reached by
    recursion on ``a``.  ``ctx`` lists hypotheses whose types the new
    first-order binders must avoid.
    """
    avoid_fo = fo_free_vars(t) | fo_free_vars(a)
    for b in (ctx or {}).values():
        avoid_fo |= fo_free_vars(b)
    return _exfalso(a, t, avoid_fo, set(proof_free_vars(t)))


def _exfalso(a: Formula, t: ProofTerm, avoid_fo: set, avoid_px: set) -> ProofTerm:
    match a:
        case Bottom():
            return t
        case Atom():
            return Efq(a, t)
        case And(left, right):
            return Pair(_exfalso(left, t, avoid_fo, avoid_px), _exfalso(right, t, avoid_fo, avoid_px))
        case Or(left, _):
            return Inj(0, _exfalso(left, t, avoid_fo, avoid_px), a)
        case Imp(left, right):
            x = fresh_name("x", avoid_px)
            return Lam(x, left, _exfalso(right, t, avoid_fo, avoid_px | {x}))
        case Forall(var, body):
            beta = fresh_name(var, avoid_fo)
            inner = fo_subst(body, Var(beta), var)
            return FOLam(beta, _exfalso(inner, t, avoid_fo | {beta}, avoid_px))
        case Exists(var, body):
            return ExIntro(DUM, _exfalso(fo_subst(body, DUM, var), t, avoid_fo, avoid_px), a)
    raise TypeError(f"not a formula: {a!r}")


def translate_axiom(instance: Formula, cache: Optional[DummyCache] = None) -> ProofTerm:
    """The il-bot term standing in for the axiom constant at ``instance``.

    ``fun f => case f @ dum of { inl z => inl (gen a => case f @ a of
    { inl x => x | inr y => d^A }) | inr z => inr z }``
    """
    parts = cd_instance_parts(instance)
    if parts is None:
        raise TypingError(ErrorKind.BAD_CD_INSTANCE, (),
                          f"{instance} is not an instance of the constant-domain axiom")
    alpha, a, b = parts
    cache = cache or DummyCache()
    hypothesis = instance.left
    conclusion = instance.right

    avoid = fo_names(instance)
    names = {}
    for base in ("f", "z", "x", "y"):
        names[base] = fresh_name(base, avoid)
        avoid.add(names[base])
    f, z, x, y = (names[k] for k in ("f", "z", "x", "y"))

    uniform = FOLam(alpha, Case(FOApp(PVar(f), Var(alpha)),
                                x, PVar(x),
                                y, cache.get(a)))
    body = Case(FOApp(PVar(f), DUM),
                z, Inj(0, uniform, conclusion),
                z, Inj(1, PVar(z), conclusion))
    return Lam(f, hypothesis, body)


def translate(t: ProofTerm, cache: Optional[DummyCache] = None) -> ProofTerm:
    """Replace every axiom constant by its il-bot definition."""
    cache = cache or DummyCache()
    return _translate(t, cache)


def _translate(t: ProofTerm, cache: DummyCache) -> ProofTerm:
    if isinstance(t, CDAxiom):
        return translate_axiom(t.instance, cache)
    kids = dict(children(t))
    if not kids:
        return t
    return dataclasses.replace(t, **{k: _translate(v, cache) for k, v in kids.items()})


def contains_axiom(t: ProofTerm) -> bool:
    return isinstance(t, CDAxiom) or any(contains_axiom(c) for _, c in children(t))


# ---------------------------------------------------------------------------
# simulation


class NotSimulated(Exception):
    pass


@dataclass
class SimulationReport:
    rule: Rule
    path: Path
    length: int
    strategy: str
    rules: list[Rule] = field(default_factory=list)

    def __str__(self) -> str:
        return (f"{self.rule.value} at {format_path(self.path)} simulated by "
                f"{self.length} step(s) [{self.strategy}]")


def check_simulation(t: ProofTerm, s: Step, fuel: int = 64,
                     search_depth: int = 8, search_width: int = 2000,
                     cache: Optional[DummyCache] = None) -> SimulationReport:
    """Find a nonempty il-bot reduction from ``translate(t)`` to ``translate(s.after)``.

    Translation keeps the position of every redex, so reduction is confined
    to the subterm at ``s.path`` and proceeds leftmost-outermost there.
    If that does not reach the target within ``fuel`` steps, a breadth-first
    search over all redexes of that subterm is tried before giving up.
    """
    cache = cache or DummyCache()
    source = translate(t, cache)
    target = translate(s.after, cache)
    target_key = alpha_key(target)

    current = source
    rules = []
    for n in range(1, fuel + 1):
        local = subterm_at(current, s.path)
        found = next(iter_redexes(local), None)
        if found is None:
            break
        inner = step_at(local, found[0])
        rules.append(inner.rule)
        current = replace_at(current, s.path, inner.after)
        if alpha_key(current) == target_key:
            return SimulationReport(s.rule, s.path, n, "leftmost-outermost", rules)

    length = _search(source, s.path, target_key, search_depth, search_width)
    if length is None:
        raise NotSimulated(f"{s.rule.value} at {format_path(s.path)}: no il-bot reduction "
                           f"reaches the translated contractum")
    return SimulationReport(s.rule, s.path, length, "breadth-first")


def _search(source: ProofTerm, path: Path, target_key: tuple,
            depth: int, width: int) -> Optional[int]:
    seen = {alpha_key(source)}
    frontier = deque([(source, 0)])
    while frontier:
        term, d = frontier.popleft()
        if d >= depth:
            continue
        local = subterm_at(term, path)
        for inner_path, _ in iter_redexes(local):
            nxt = replace_at(term, path, step_at(local, inner_path).after)
            key = alpha_key(nxt)
            if key == target_key:
                return d + 1
            if key not in seen and len(seen) < width:
                seen.add(key)
                frontier.append((nxt, d + 1))
    return None

