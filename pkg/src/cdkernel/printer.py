"""Pretty printer for the surface syntax; output re-parses to the same tree."""
from __future__ import annotations

from .syntax import (And, Atom, Bottom, Case, CDAxiom, Const, Efq, Exists,
                     ExElim, ExIntro, FalsityConst, FOApp, FOLam, Forall, Func,
                     Imp, Inj, Lam, Or, Pair, PApp, Proj, PVar, Var,
                     FO_TERM_TYPES, FORMULA_TYPES)

# formula precedence, loosest first; quantifiers sit with negation
_IMP, _OR, _AND, _NOT, _ATOM = range(5)

# proof-term precedence, loosest first
_BINDER, _APP, _PREFIX, _POSTFIX, _PATOM = range(5)


def show(x) -> str:
    if isinstance(x, FO_TERM_TYPES):
        return show_fo(x)
    if isinstance(x, FORMULA_TYPES):
        return show_formula(x)
    return show_proof(x)


def show_fo(m) -> str:
    if isinstance(m, (Var, Const)):
        return m.name
    return f"{m.name}({', '.join(show_fo(a) for a in m.args)})"


def show_formula(a, level: int = _IMP) -> str:
    text, prec = _formula(a)
    return f"({text})" if prec < level else text


def _formula(a) -> tuple[str, int]:
    match a:
        case Bottom():
            return "bot", _ATOM
        case Atom(pred, ()):
            return pred, _ATOM
        case Atom(pred, args):
            return f"{pred}({', '.join(show_fo(t) for t in args)})", _ATOM
        case Imp(left, Bottom()):
            return "~" + show_formula(left, _NOT), _NOT
        case Imp(left, right):
            return f"{show_formula(left, _OR)} -> {show_formula(right, _IMP)}", _IMP
        case Or(left, right):
            return f"{show_formula(left, _AND)} | {show_formula(right, _OR)}", _OR
        case And(left, right):
            return f"{show_formula(left, _NOT)} & {show_formula(right, _AND)}", _AND
        case Forall(var, body):
            return f"forall {var}. {show_formula(body, _NOT)}", _NOT
        case Exists(var, body):
            return f"exists {var}. {show_formula(body, _NOT)}", _NOT
    raise TypeError(f"not a formula: {a!r}")


def show_proof(t, level: int = _BINDER) -> str:
    text, prec = _proof(t)
    return f"({text})" if prec < level else text


def _proof(t) -> tuple[str, int]:
    match t:
        case PVar(name, None):
            return name, _PATOM
        case PVar(name, ann):
            return f"({name} : {show_formula(ann)})", _PATOM
        case Lam(var, dom, body):
            return f"fun ({var} : {show_formula(dom)}) => {show_proof(body)}", _BINDER
        case FOLam(var, body):
            return f"gen {var} => {show_proof(body)}", _BINDER
        case Case(s, x1, b1, x2, b2):
            return (f"case {show_proof(s, _APP)} of {{ inl {x1} => {show_proof(b1)}"
                    f" | inr {x2} => {show_proof(b2)} }}"), _BINDER
        case ExElim(s, a, x, body):
            return f"unpack {show_proof(s, _APP)} as ({a}, {x}) in {show_proof(body)}", _BINDER
        case PApp(fn, arg):
            return f"{show_proof(fn, _APP)} {show_proof(arg, _PREFIX)}", _APP
        case FOApp(fn, m):
            return f"{show_proof(fn, _APP)} @ {show_fo(m)}", _APP
        case Inj(i, body, ann):
            tag = "inl" if i == 0 else "inr"
            return f"{tag}[{show_formula(ann)}] {show_proof(body, _PREFIX)}", _PREFIX
        case Proj(body, i):
            return f"{show_proof(body, _POSTFIX)}.{i}", _POSTFIX
        case Pair(left, right):
            return f"({show_proof(left)}, {show_proof(right)})", _PATOM
        case ExIntro(m, body, ann):
            return f"pack[{show_formula(ann)}]({show_fo(m)}, {show_proof(body)})", _PATOM
        case CDAxiom(inst):
            return f"D[{show_formula(inst)}]", _PATOM
        case Efq(atom, body):
            return f"efq[{show_formula(atom)}]({show_proof(body)})", _PATOM
        case FalsityConst():
            return "F", _PATOM
    raise TypeError(f"not a proof term: {t!r}")
