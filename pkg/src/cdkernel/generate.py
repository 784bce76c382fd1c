"""Random well-typed constant-domain proof terms.

Terms are built goal-directed: to inhabit a formula the generator either
uses a hypothesis of that type, applies the matching introduction rule, or
wraps the goal in a detour (a redex of one of the seven reduction rules,
including both axiom rules).  Atoms and ``bot`` that cannot be proved
otherwise fall back on the global hypothesis ``hbot : bot`` through ex falso.
"""
from __future__ import annotations

import itertools
import random
from typing import Optional

from .syntax import (And, Atom, BOT, Bottom, Case, CDAxiom, Const, DUM,
                     ExElim, ExIntro, Exists, FOApp, FOLam, Forall, Formula,
                     Func, Imp, Inj, Lam, Or, Pair, PApp, ProofTerm, Proj,
                     PVar, Signature, Var, alpha_equal, Efq, fo_free_vars,
                     fo_subst, FOTerm)

SIGNATURE = Signature({"c"}, {"f": 1}, {"P": 1, "Q": 0, "R": 2})
BOTTOM_HYP = "hbot"
CONTEXT: dict[str, Formula] = {BOTTOM_HYP: BOT}


def _replace_const(a, name: str, var: str):
    """Replace constant ``name`` by variable ``var`` (``var`` must be fresh)."""
    if isinstance(a, Const):
        return Var(var) if a.name == name else a
    if isinstance(a, Var):
        return a
    if isinstance(a, Func):
        return Func(a.name, tuple(_replace_const(x, name, var) for x in a.args))
    if isinstance(a, Atom):
        return Atom(a.pred, tuple(_replace_const(x, name, var) for x in a.args))
    if isinstance(a, Bottom):
        return a
    if isinstance(a, (And, Or, Imp)):
        return type(a)(_replace_const(a.left, name, var), _replace_const(a.right, name, var))
    return type(a)(a.var, _replace_const(a.body, name, var))


class TermGenerator:
    def __init__(self, rng: random.Random, max_depth: int = 8):
        self.rng = rng
        self.max_depth = max_depth
        self._ids = itertools.count(1)

    def fresh(self, prefix: str) -> str:
        return f"{prefix}{next(self._ids)}"

    # -- first-order terms and formulas ------------------------------------

    def fo_term(self, fovars: tuple[str, ...], depth: int = 1) -> FOTerm:
        r = self.rng.random()
        if fovars and r < 0.45:
            return Var(self.rng.choice(fovars))
        if depth > 0 and r < 0.6:
            return Func("f", (self.fo_term(fovars, depth - 1),))
        return Const(self.rng.choice(("c", "dum")))

    def formula(self, fovars: tuple[str, ...], depth: int = 2) -> Formula:
        if depth <= 0 or self.rng.random() < 0.3:
            k = self.rng.random()
            if k < 0.45:
                return Atom("P", (self.fo_term(fovars),))
            if k < 0.65:
                return Atom("Q")
            if k < 0.85:
                return Atom("R", (self.fo_term(fovars), self.fo_term(fovars)))
            return BOT
        k = self.rng.randrange(5)
        if k < 3:
            cls = (And, Or, Imp)[k]
            return cls(self.formula(fovars, depth - 1), self.formula(fovars, depth - 1))
        var = self.fresh("a")
        cls = Forall if k == 3 else Exists
        return cls(var, self.formula(fovars + (var,), depth - 1))

    # -- proof terms -------------------------------------------------------

    def closed_or_open_term(self) -> tuple[ProofTerm, Formula]:
        """A random ``(term, formula)`` pair typed in :data:`CONTEXT`."""
        goal = self.formula(("b",), self.rng.randint(1, 3))
        return self.term(dict(CONTEXT), goal, self.max_depth, ("b",)), goal

    def term(self, ctx: dict, goal: Formula, depth: int, fovars: tuple[str, ...]) -> ProofTerm:
        matching = [x for x, a in ctx.items() if alpha_equal(a, goal)]
        if matching and (depth <= 0 or self.rng.random() < 0.3):
            return PVar(self.rng.choice(matching))
        if depth <= 0:
            return self.fill(ctx, goal, fovars)
        r = self.rng.random()
        if r < 0.45:
            return self.intro(ctx, goal, depth, fovars)
        if r < 0.55:
            elim = self.elim_from_context(ctx, goal, depth, fovars)
            if elim is not None:
                return elim
        return self.detour(ctx, goal, depth, fovars)

    def fill(self, ctx: dict, goal: Formula, fovars) -> ProofTerm:
        """Canonical inhabitant built from intro rules and ``hbot``."""
        match goal:
            case Bottom():
                return PVar(BOTTOM_HYP)
            case Atom():
                return Efq(goal, PVar(BOTTOM_HYP))
            case And(a, b):
                return Pair(self.fill(ctx, a, fovars), self.fill(ctx, b, fovars))
            case Or(a, _):
                return Inj(0, self.fill(ctx, a, fovars), goal)
            case Imp(a, b):
                x = self.fresh("x")
                return Lam(x, a, self.fill({**ctx, x: a}, b, fovars))
            case Forall(var, body):
                beta = self.fresh("e")
                return FOLam(beta, self.fill(ctx, fo_subst(body, Var(beta), var), fovars + (beta,)))
            case Exists(var, body):
                m = self.fo_term(fovars)
                return ExIntro(m, self.fill(ctx, fo_subst(body, m, var), fovars), goal)
        raise TypeError(goal)

    def intro(self, ctx: dict, goal: Formula, depth: int, fovars) -> ProofTerm:
        d = depth - 1
        match goal:
            case Bottom():
                return PVar(BOTTOM_HYP) if d <= 0 else self.detour(ctx, goal, depth, fovars)
            case Atom():
                return Efq(goal, self.term(ctx, BOT, d, fovars))
            case And(a, b):
                return Pair(self.term(ctx, a, d, fovars), self.term(ctx, b, d, fovars))
            case Or(a, b):
                i = self.rng.randrange(2)
                return Inj(i, self.term(ctx, (a, b)[i], d, fovars), goal)
            case Imp(a, b):
                x = self.fresh("x")
                return Lam(x, a, self.term({**ctx, x: a}, b, d, fovars))
            case Forall(var, body):
                beta = self.fresh("e")
                return FOLam(beta, self.term(ctx, fo_subst(body, Var(beta), var), d,
                                             fovars + (beta,)))
            case Exists(var, body):
                m = self.fo_term(fovars)
                return ExIntro(m, self.term(ctx, fo_subst(body, m, var), d, fovars), goal)
        raise TypeError(goal)

    def elim_from_context(self, ctx: dict, goal: Formula, depth: int, fovars) -> Optional[ProofTerm]:
        d = depth - 1
        options = []
        for x, a in ctx.items():
            if isinstance(a, Imp) and alpha_equal(a.right, goal):
                options.append(lambda x=x, a=a: PApp(PVar(x), self.term(ctx, a.left, d, fovars)))
            if isinstance(a, And) and alpha_equal(a.left, goal):
                options.append(lambda x=x: Proj(PVar(x), 0))
            if isinstance(a, And) and alpha_equal(a.right, goal):
                options.append(lambda x=x: Proj(PVar(x), 1))
            if isinstance(a, Forall) and a.var not in fo_free_vars(a.body) and alpha_equal(a.body, goal):
                options.append(lambda x=x: FOApp(PVar(x), self.fo_term(fovars)))
        if not options:
            return None
        return self.rng.choice(options)()

    def detour(self, ctx: dict, goal: Formula, depth: int, fovars) -> ProofTerm:
        d = depth - 1
        kinds = ["beta", "proj", "case", "cd_case", "fo_beta", "unpack"]
        if isinstance(goal, Or) and isinstance(goal.left, Forall) \
                and goal.left.var not in fo_free_vars(goal.right):
            kinds += ["cd", "cd"]
        kind = self.rng.choice(kinds)
        side = lambda: self.formula(fovars, 1)  # noqa: E731

        if kind == "beta":
            b = side()
            x = self.fresh("x")
            return PApp(Lam(x, b, self.term({**ctx, x: b}, goal, d, fovars)),
                        self.term(ctx, b, d, fovars))
        if kind == "proj":
            b = side()
            if self.rng.random() < 0.5:
                return Proj(Pair(self.term(ctx, goal, d, fovars), self.term(ctx, b, d, fovars)), 0)
            return Proj(Pair(self.term(ctx, b, d, fovars), self.term(ctx, goal, d, fovars)), 1)
        if kind == "case":
            b1, b2 = side(), side()
            i = self.rng.randrange(2)
            scrut = Inj(i, self.term(ctx, (b1, b2)[i], d, fovars), Or(b1, b2))
            return self.case_on(ctx, scrut, b1, b2, goal, d, fovars)
        if kind == "cd_case":
            alpha = self.fresh("a")
            a1 = self.formula(fovars + (alpha,), 1)
            b = side()
            scrut = self.cd_term(ctx, alpha, a1, b, d, fovars)
            return self.case_on(ctx, scrut, Forall(alpha, a1), b, goal, d, fovars)
        if kind == "cd":
            alpha, b = goal.left.var, goal.right
            return self.cd_term(ctx, alpha, goal.left.body, b, d, fovars)
        if kind == "fo_beta":
            beta = self.fresh("e")
            if self.rng.random() < 0.6:
                body_goal, m = _replace_const(goal, "c", beta), Const("c")
            else:
                body_goal, m = goal, self.fo_term(fovars)
            return FOApp(FOLam(beta, self.term(ctx, body_goal, d, fovars + (beta,))), m)
        # unpack
        beta = self.fresh("a")
        body = self.formula(fovars + (beta,), 1)
        packed = Exists(beta, body)
        if self.rng.random() < 0.7:
            m = self.fo_term(fovars)
            scrut = ExIntro(m, self.term(ctx, fo_subst(body, m, beta), d, fovars), packed)
        else:
            scrut = self.term(ctx, packed, d, fovars)
        gamma = self.fresh("e")
        x = self.fresh("x")
        hyp = fo_subst(body, Var(gamma), beta)
        return ExElim(scrut, gamma, x, self.term({**ctx, x: hyp}, goal, d, fovars))

    def case_on(self, ctx, scrut, b1, b2, goal, d, fovars) -> ProofTerm:
        x1, x2 = self.fresh("x"), self.fresh("x")
        return Case(scrut,
                    x1, self.term({**ctx, x1: b1}, goal, d, fovars),
                    x2, self.term({**ctx, x2: b2}, goal, d, fovars))

    def cd_term(self, ctx, alpha: str, a: Formula, b: Formula, d: int, fovars) -> ProofTerm:
        """``D (gen alpha => inj_i ...)``, or ``D`` applied to any proof of the premise.

        ``alpha`` must not occur in ``b`` nor in any type of ``ctx``.
        """
        instance = Imp(Forall(alpha, Or(a, b)), Or(Forall(alpha, a), b))
        inner_vars = fovars + (alpha,)
        # drop hypotheses whose types mention alpha; none should, but be safe
        inner_ctx = {x: t for x, t in ctx.items() if alpha not in fo_free_vars(t)}
        if self.rng.random() < 0.75:
            i = self.rng.randrange(2)
            arg = FOLam(alpha, Inj(i, self.term(inner_ctx, (a, b)[i], d, inner_vars), Or(a, b)))
        else:
            arg = self.term(ctx, instance.left, d, fovars)
        return PApp(CDAxiom(instance), arg)


    def closed_term(self) -> tuple[ProofTerm, Formula]:
        """A closed proof of an existential, disjunction or universal.

        A random term is guarded by ``fun (hbot : bot) => ...`` right under
        the introduction rule, so the result has no free hypotheses; redexes
        with closed side proofs are then stacked on top.
        """
        t, a = self.closed_or_open_term()
        guarded, k = Imp(BOT, a), Lam(BOTTOM_HYP, BOT, t)
        side = Imp(BOT, self.formula((), 1))
        kind = self.rng.randrange(4)
        if kind == 0:
            goal, proof = Forall("b", guarded), FOLam("b", k)
        elif kind == 1:
            m = self.fo_term(())
            goal = Exists("b", guarded)
            proof = ExIntro(m, fo_subst(k, m, "b"), goal)
        elif kind == 2:
            goal = Or(guarded, side) if self.rng.random() < 0.5 else Or(side, guarded)
            i = 0 if goal.left is guarded else 1
            proof = Inj(i, k, goal)
        else:
            # the axiom, reducible at the root once the redexes above are gone
            inner = Or(guarded, side)
            goal = Or(Forall("b", guarded), side)
            if self.rng.random() < 0.5:
                body = Inj(0, k, inner)
            else:
                body = Inj(1, self._guarded(side), inner)
            proof = PApp(CDAxiom(Imp(Forall("b", inner), goal)), FOLam("b", body))
        for _ in range(self.rng.randint(0, 3)):
            proof = self._closed_detour(proof, goal)
        return proof, goal

    def _guarded(self, a: Imp) -> ProofTerm:
        return Lam(BOTTOM_HYP, BOT, self.term(dict(CONTEXT), a.right, 3, ()))

    def _closed_detour(self, t: ProofTerm, goal: Formula) -> ProofTerm:
        side = Imp(BOT, self.formula((), 1))
        kind = self.rng.randrange(4)
        if kind == 0:
            return PApp(Lam(self.fresh("x"), side, t), self._guarded(side))
        if kind == 1:
            return Proj(Pair(t, self._guarded(side)), 0)
        if kind == 2:
            scrut = Inj(self.rng.randrange(2), self._guarded(side), Or(side, side))
            return Case(scrut, self.fresh("x"), t, self.fresh("x"), t)
        return FOApp(FOLam(self.fresh("e"), t), self.fo_term(()))


def random_terms(count: int, seed: int = 0, max_depth: int = 8) -> list[tuple[ProofTerm, Formula]]:
    """``count`` random terms typed in :data:`CONTEXT`, reproducible from ``seed``."""
    rng = random.Random(seed)
    gen = TermGenerator(rng, max_depth)
    return [gen.closed_or_open_term() for _ in range(count)]


def closed_terms(count: int, seed: int = 0, max_depth: int = 6) -> list[tuple[ProofTerm, Formula]]:
    """``count`` random closed proofs of existentials, disjunctions and universals."""
    gen = TermGenerator(random.Random(seed), max_depth)
    return [gen.closed_term() for _ in range(count)]


def random_fo_term(rng: random.Random, fovars=("b",)) -> FOTerm:
    return TermGenerator(rng).fo_term(tuple(fovars))

