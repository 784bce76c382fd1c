"""Computational content of closed normal proofs.

A closed normal proof of an existential is a ``pack``, of a disjunction an
injection, of a universal a ``gen``.  The functions here check that shape
and hand back the pieces; they never normalize on the caller's behalf.
"""
from __future__ import annotations

import enum
from typing import Optional

from .reducer import is_normal
from .syntax import (ExIntro, Exists, FOLam, FOTerm, Forall, Formula, Inj, Or,
                     ProofTerm, Var, fo_subst, proof_free_vars)
from .typechecker import Mode, check, infer


class ExtractionErrorKind(enum.Enum):
    NOT_CLOSED = "NotClosed"
    NOT_NORMAL = "NotNormal"
    WRONG_CONNECTIVE = "WrongConnective"
    SHAPE_VIOLATION = "ShapeViolation"


class ExtractionError(Exception):
    def __init__(self, kind: ExtractionErrorKind, detail: str):
        self.kind = kind
        self.detail = detail
        super().__init__(f"{kind.value}: {detail}")


def _prepare(t: ProofTerm, expected: Optional[Formula], connective: type) -> Formula:
    free = proof_free_vars(t)
    if free:
        raise ExtractionError(ExtractionErrorKind.NOT_CLOSED,
                              f"free proof variables {sorted(free)}")
    if expected is not None:
        check({}, t, expected, Mode.CD)
        a = expected
    else:
        a = infer({}, t, Mode.CD)
    if not isinstance(a, connective):
        raise ExtractionError(ExtractionErrorKind.WRONG_CONNECTIVE,
                              f"{a} is not of the form {connective.__name__}")
    if not is_normal(t):
        raise ExtractionError(ExtractionErrorKind.NOT_NORMAL, "the proof still has redexes")
    return a


def _shape(t: ProofTerm, a: Formula, want: str) -> ExtractionError:
    return ExtractionError(ExtractionErrorKind.SHAPE_VIOLATION,
                           f"closed normal proof of {a} is not {want}: {t}")


def extract_witness(t: ProofTerm, expected: Optional[Formula] = None) -> tuple[FOTerm, ProofTerm]:
    """``pack(m, u)`` -> ``(m, u)`` with ``u`` proving the instance at ``m``."""
    a = _prepare(t, expected, Exists)
    if not isinstance(t, ExIntro):
        raise _shape(t, a, "a pack")
    check({}, t.term, fo_subst(a.body, t.witness, a.var), Mode.CD)
    return t.witness, t.term


def extract_disjunct(t: ProofTerm, expected: Optional[Formula] = None) -> tuple[int, ProofTerm]:
    a = _prepare(t, expected, Or)
    if not isinstance(t, Inj):
        raise _shape(t, a, "an injection")
    check({}, t.term, a.left if t.index == 0 else a.right, Mode.CD)
    return t.index, t.term


def extract_universal(t: ProofTerm, expected: Optional[Formula] = None) -> tuple[str, ProofTerm]:
    """``gen a => u`` -> ``(a, u)``; ``u`` proves the body with ``a`` left free."""
    a = _prepare(t, expected, Forall)
    if not isinstance(t, FOLam):
        raise _shape(t, a, "a gen")
    check({}, t.body, fo_subst(a.body, Var(t.var), a.var), Mode.CD)
    return t.var, t.body
