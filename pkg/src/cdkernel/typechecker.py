"""Type inference for proof terms: ``ctx |- t : A``.

Inference is syntax directed; the annotations carried by ``Lam``, ``Inj``,
``ExIntro``, ``CDAxiom`` and ``Efq`` fix every type, so no unification is
needed.  Formulas are always compared up to alpha-equivalence.
"""
from __future__ import annotations

import enum
from typing import Optional

from .syntax import (And, Atom, Bottom, Case, CDAxiom, Context, Efq, Exists,
                     ExElim, ExIntro, FalsityConst, FOApp, FOLam, Forall,
                     Formula, Imp, Inj, Lam, Or, Pair, PApp, Path, ProofTerm,
                     Proj, PVar, Signature, SignatureError, Var, alpha_equal,
                     fo_free_vars, fo_subst, format_path, free_hypotheses)


class Mode(enum.Enum):
    CD = "cd"
    IL_BOT = "il-bot"


class ErrorKind(enum.Enum):
    UNBOUND_VARIABLE = "UnboundVariable"
    MISMATCH = "Mismatch"
    EIGENVARIABLE_VIOLATION = "EigenvariableViolation"
    BAD_CD_INSTANCE = "BadCDInstance"
    NON_ATOMIC_EFQ = "NonAtomicEfq"
    MODE_VIOLATION = "ModeViolation"
    ARITY_ERROR = "ArityError"


class TypingError(Exception):
    def __init__(self, kind: ErrorKind, path: Path, detail: str,
                 expected: Optional[Formula] = None, actual: Optional[Formula] = None):
        self.kind = kind
        self.path = tuple(path)
        self.detail = detail
        self.expected = expected
        self.actual = actual
        super().__init__(str(self))

    def __str__(self) -> str:
        where = format_path(self.path)
        if self.expected is not None or self.actual is not None:
            return (f"{where}: {self.kind.value}: expected {_show_opt(self.expected)}, "
                    f"got {_show_opt(self.actual)}")
        return f"{where}: {self.kind.value}: {self.detail}"


def _show_opt(a: Optional[Formula]) -> str:
    return "-" if a is None else str(a)


def cd_instance_parts(instance: Formula) -> Optional[tuple[str, Formula, Formula]]:
    """Split ``forall a.(A | B) -> (forall a. A) | B`` into ``(a, A, B)``.

    Returns None when ``instance`` is not a constant-domain instance.
    """
    match instance:
        case Imp(Forall(alpha, Or(a, b)), Or(Forall(beta, a2), b2)):
            if alpha in fo_free_vars(b):
                return None
            if not alpha_equal(Forall(alpha, a), Forall(beta, a2)):
                return None
            if not alpha_equal(b, b2):
                return None
            return alpha, a, b
    return None


def check_cd_instance(instance: Formula) -> bool:
    return cd_instance_parts(instance) is not None


def infer(ctx: Context, t: ProofTerm, mode: Mode = Mode.CD,
          signature: Optional[Signature] = None) -> Formula:
    """Return the formula proved by ``t`` or raise :class:`TypingError`.

    Free proof variables take their type from ``ctx`` or, failing that, from
    their own annotation.  With a ``signature`` every symbol is arity-checked.
    """
    return _Checker(mode, signature).infer(dict(ctx), t, ())


def check(ctx: Context, t: ProofTerm, expected: Formula, mode: Mode = Mode.CD,
          signature: Optional[Signature] = None) -> None:
    actual = infer(ctx, t, mode, signature)
    if not alpha_equal(actual, expected):
        raise TypingError(ErrorKind.MISMATCH, (), "type does not match declaration",
                          expected, actual)


class _Checker:
    def __init__(self, mode: Mode, signature: Optional[Signature]):
        self.mode = mode
        self.signature = signature

    def wf(self, x, path: Path) -> None:
        if self.signature is None:
            return
        try:
            self.signature.check(x)
        except SignatureError as e:
            raise TypingError(ErrorKind.ARITY_ERROR, path, str(e)) from None

    def sub(self, ctx, t, path, label):
        return self.infer(ctx, getattr(t, label), path + (label,))

    def free_types(self, ctx: dict, t: ProofTerm):
        for occ in free_hypotheses(t):
            yield occ.name, ctx.get(occ.name, occ.annotation)

    def infer(self, ctx: dict, t: ProofTerm, path: Path) -> Formula:
        match t:
            case PVar(name, ann):
                if ann is not None:
                    self.wf(ann, path)
                if name in ctx:
                    if ann is not None and not alpha_equal(ann, ctx[name]):
                        raise TypingError(ErrorKind.MISMATCH, path,
                                          f"annotation of {name} disagrees with context",
                                          ctx[name], ann)
                    return ctx[name]
                if ann is None:
                    raise TypingError(ErrorKind.UNBOUND_VARIABLE, path,
                                      f"proof variable {name} is not bound")
                return ann

            case Lam(var, dom, _):
                self.wf(dom, path)
                body = self.sub({**ctx, var: dom}, t, path, "body")
                return Imp(dom, body)

            case PApp():
                fn = self.sub(ctx, t, path, "fn")
                arg = self.sub(ctx, t, path, "arg")
                if not isinstance(fn, Imp):
                    raise TypingError(ErrorKind.MISMATCH, path + ("fn",),
                                      "applied term is not an implication", None, fn)
                if not alpha_equal(fn.left, arg):
                    raise TypingError(ErrorKind.MISMATCH, path + ("arg",),
                                      "argument type", fn.left, arg)
                return fn.right

            case Pair():
                return And(self.sub(ctx, t, path, "left"), self.sub(ctx, t, path, "right"))

            case Proj(_, index):
                a = self.sub(ctx, t, path, "term")
                if not isinstance(a, And):
                    raise TypingError(ErrorKind.MISMATCH, path + ("term",),
                                      "projection from a non-conjunction", None, a)
                return a.left if index == 0 else a.right

            case Inj(index, _, ann):
                self.wf(ann, path)
                if not isinstance(ann, Or):
                    raise TypingError(ErrorKind.MISMATCH, path,
                                      "injection annotation must be a disjunction", None, ann)
                a = self.sub(ctx, t, path, "term")
                want = ann.left if index == 0 else ann.right
                if not alpha_equal(a, want):
                    raise TypingError(ErrorKind.MISMATCH, path + ("term",),
                                      "injected term", want, a)
                return ann

            case Case(_, x1, _, x2, _):
                s = self.sub(ctx, t, path, "scrutinee")
                if not isinstance(s, Or):
                    raise TypingError(ErrorKind.MISMATCH, path + ("scrutinee",),
                                      "case on a non-disjunction", None, s)
                c1 = self.sub({**ctx, x1: s.left}, t, path, "left")
                c2 = self.sub({**ctx, x2: s.right}, t, path, "right")
                if not alpha_equal(c1, c2):
                    raise TypingError(ErrorKind.MISMATCH, path + ("right",),
                                      "case branches disagree", c1, c2)
                return c1

            case FOLam(var, body):
                a = self.sub(ctx, t, path, "body")
                for name, ty in self.free_types(ctx, body):
                    if ty is not None and var in fo_free_vars(ty):
                        raise TypingError(
                            ErrorKind.EIGENVARIABLE_VIOLATION, path,
                            f"{var} occurs free in {ty}, the type of free hypothesis {name}")
                return Forall(var, a)

            case FOApp(_, m):
                self.wf(m, path)
                a = self.sub(ctx, t, path, "term")
                if not isinstance(a, Forall):
                    raise TypingError(ErrorKind.MISMATCH, path + ("term",),
                                      "instantiation of a non-universal", None, a)
                return fo_subst(a.body, m, a.var)

            case ExIntro(m, _, ann):
                self.wf(m, path)
                self.wf(ann, path)
                if not isinstance(ann, Exists):
                    raise TypingError(ErrorKind.MISMATCH, path,
                                      "pack annotation must be existential", None, ann)
                a = self.sub(ctx, t, path, "term")
                want = fo_subst(ann.body, m, ann.var)
                if not alpha_equal(a, want):
                    raise TypingError(ErrorKind.MISMATCH, path + ("term",),
                                      "packed term", want, a)
                return ann

            case ExElim(_, alpha, x, body):
                s = self.sub(ctx, t, path, "scrutinee")
                if not isinstance(s, Exists):
                    raise TypingError(ErrorKind.MISMATCH, path + ("scrutinee",),
                                      "unpack of a non-existential", None, s)
                if alpha in fo_free_vars(s):
                    raise TypingError(ErrorKind.EIGENVARIABLE_VIOLATION, path,
                                      f"{alpha} occurs free in the unpacked formula {s}")
                hyp = fo_subst(s.body, Var(alpha), s.var)
                inner = {**ctx, x: hyp}
                c = self.sub(inner, t, path, "body")
                if alpha in fo_free_vars(c):
                    raise TypingError(ErrorKind.EIGENVARIABLE_VIOLATION, path,
                                      f"{alpha} occurs free in the conclusion {c}")
                for name, ty in self.free_types(inner, body):
                    if name != x and ty is not None and alpha in fo_free_vars(ty):
                        raise TypingError(
                            ErrorKind.EIGENVARIABLE_VIOLATION, path,
                            f"{alpha} occurs free in {ty}, the type of free hypothesis {name}")
                return c

            case CDAxiom(instance):
                if self.mode is not Mode.CD:
                    raise TypingError(ErrorKind.MODE_VIOLATION, path,
                                      "the constant-domain axiom is not available in il-bot mode")
                self.wf(instance, path)
                if not check_cd_instance(instance):
                    raise TypingError(ErrorKind.BAD_CD_INSTANCE, path,
                                      f"{instance} is not an instance of the constant-domain axiom")
                return instance

            case Efq(atom, _):
                self.wf(atom, path)
                if not isinstance(atom, (Atom, Bottom)):
                    raise TypingError(ErrorKind.NON_ATOMIC_EFQ, path,
                                      f"ex falso target {atom} is not atomic")
                a = self.sub(ctx, t, path, "term")
                if not isinstance(a, Bottom):
                    raise TypingError(ErrorKind.MISMATCH, path + ("term",),
                                      "ex falso needs a proof of bot", Bottom(), a)
                return atom

            case FalsityConst():
                if self.mode is not Mode.IL_BOT:
                    raise TypingError(ErrorKind.MODE_VIOLATION, path,
                                      "the falsity constant F is only available in il-bot mode")
                return Bottom()

        raise TypeError(f"not a proof term: {t!r}")
