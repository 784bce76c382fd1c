"""Syntax of the constant-domain calculus.

Three levels live here: first-order terms (individuals), formulas, and
proof terms.  Everything is an immutable dataclass; equality via ``==`` is
syntactic, while :func:`alpha_equal` compares up to renaming of bound
variables.  Binders are named, and substitution renames a binder only when
it would capture a free variable of the substituted term.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional, Union

# ---------------------------------------------------------------------------
# first-order terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Func:
    name: str
    args: tuple[FOTerm, ...]


FOTerm = Union[Var, Const, Func]

DUM = Const("dum")

# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[FOTerm, ...] = ()


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


Formula = Union[Atom, Bottom, And, Or, Imp, Forall, Exists]

BOT = Bottom()


def neg(a: Formula) -> Formula:
    """``~A`` is only ever ``A -> bot``."""
    return Imp(a, BOT)


# ---------------------------------------------------------------------------
# proof terms


@dataclass(frozen=True)
class PVar:
    name: str
    annotation: Optional[Formula] = None


@dataclass(frozen=True)
class Lam:
    var: str
    domain: Formula
    body: ProofTerm


@dataclass(frozen=True)
class PApp:
    fn: ProofTerm
    arg: ProofTerm


@dataclass(frozen=True)
class Pair:
    left: ProofTerm
    right: ProofTerm


@dataclass(frozen=True)
class Proj:
    term: ProofTerm
    index: int


@dataclass(frozen=True)
class Inj:
    index: int
    term: ProofTerm
    annotation: Formula


@dataclass(frozen=True)
class Case:
    scrutinee: ProofTerm
    left_var: str
    left: ProofTerm
    right_var: str
    right: ProofTerm


@dataclass(frozen=True)
class FOLam:
    var: str
    body: ProofTerm


@dataclass(frozen=True)
class FOApp:
    term: ProofTerm
    arg: FOTerm


@dataclass(frozen=True)
class ExIntro:
    witness: FOTerm
    term: ProofTerm
    annotation: Formula


@dataclass(frozen=True)
class ExElim:
    scrutinee: ProofTerm
    fo_var: str
    var: str
    body: ProofTerm


@dataclass(frozen=True)
class CDAxiom:
    instance: Formula


@dataclass(frozen=True)
class Efq:
    atom: Formula
    term: ProofTerm


@dataclass(frozen=True)
class FalsityConst:
    pass


ProofTerm = Union[PVar, Lam, PApp, Pair, Proj, Inj, Case, FOLam, FOApp,
                  ExIntro, ExElim, CDAxiom, Efq, FalsityConst]

F = FalsityConst()

FO_TERM_TYPES = (Var, Const, Func)
FORMULA_TYPES = (Atom, Bottom, And, Or, Imp, Forall, Exists)
PROOF_TYPES = (PVar, Lam, PApp, Pair, Proj, Inj, Case, FOLam, FOApp,
               ExIntro, ExElim, CDAxiom, Efq, FalsityConst)

# Proof-term children in left-to-right order.  The field names double as
# path labels for redex positions and error locations.
CHILD_FIELDS: dict[type, tuple[str, ...]] = {
    PVar: (),
    Lam: ("body",),
    PApp: ("fn", "arg"),
    Pair: ("left", "right"),
    Proj: ("term",),
    Inj: ("term",),
    Case: ("scrutinee", "left", "right"),
    FOLam: ("body",),
    FOApp: ("term",),
    ExIntro: ("term",),
    ExElim: ("scrutinee", "body"),
    CDAxiom: (),
    Efq: ("term",),
    FalsityConst: (),
}

Path = tuple[str, ...]

Context = Mapping[str, Formula]


def children(t: ProofTerm) -> Iterator[tuple[str, ProofTerm]]:
    for label in CHILD_FIELDS[type(t)]:
        yield label, getattr(t, label)


def subterm_at(t: ProofTerm, path: Path) -> ProofTerm:
    for label in path:
        t = getattr(t, label)
    return t


def replace_at(t: ProofTerm, path: Path, new: ProofTerm) -> ProofTerm:
    if not path:
        return new
    head, rest = path[0], path[1:]
    return dataclasses.replace(t, **{head: replace_at(getattr(t, head), rest, new)})


def format_path(path: Path) -> str:
    return ".".join(path) if path else "root"


def term_size(t: ProofTerm) -> int:
    return 1 + sum(term_size(c) for _, c in children(t))


# ---------------------------------------------------------------------------
# signatures


class SignatureError(ValueError):
    pass


@dataclass
class Signature:
    """Function and predicate symbols with their arities.

    ``dum`` is always declared as a constant.
    """

    constants: set[str] = field(default_factory=set)
    functions: dict[str, int] = field(default_factory=dict)
    predicates: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.constants = set(self.constants) | {DUM.name}

    def check(self, x: Union[FOTerm, Formula, ProofTerm]) -> None:
        """Raise :class:`SignatureError` on an undeclared symbol or wrong arity."""
        for kind, name, arity in _symbols(x):
            if kind == "const":
                if name not in self.constants:
                    if name in self.functions:
                        raise SignatureError(
                            f"function {name} has arity {self.functions[name]}, used with 0 arguments")
                    raise SignatureError(f"undeclared constant {name}")
            elif kind == "func":
                if name not in self.functions:
                    raise SignatureError(f"undeclared function {name}")
                if self.functions[name] != arity:
                    raise SignatureError(
                        f"function {name} has arity {self.functions[name]}, used with {arity} arguments")
            else:
                if name not in self.predicates:
                    raise SignatureError(f"undeclared predicate {name}")
                if self.predicates[name] != arity:
                    raise SignatureError(
                        f"predicate {name} has arity {self.predicates[name]}, used with {arity} arguments")


def _symbols(x) -> Iterator[tuple[str, str, int]]:
    if isinstance(x, Var):
        return
    if isinstance(x, Const):
        yield "const", x.name, 0
    elif isinstance(x, Func):
        yield "func", x.name, len(x.args)
        for a in x.args:
            yield from _symbols(a)
    elif isinstance(x, Atom):
        yield "pred", x.pred, len(x.args)
        for a in x.args:
            yield from _symbols(a)
    elif isinstance(x, (Bottom, FalsityConst)):
        return
    elif isinstance(x, (And, Or, Imp)):
        yield from _symbols(x.left)
        yield from _symbols(x.right)
    elif isinstance(x, (Forall, Exists)):
        yield from _symbols(x.body)
    else:
        for f in dataclasses.fields(x):
            v = getattr(x, f.name)
            if isinstance(v, FO_TERM_TYPES + FORMULA_TYPES + PROOF_TYPES):
                yield from _symbols(v)


# ---------------------------------------------------------------------------
# free variables and names


def fo_free_vars(x: Union[FOTerm, Formula, ProofTerm]) -> frozenset[str]:
    """Free first-order variables of a term, formula or proof term."""
    if isinstance(x, Var):
        return frozenset((x.name,))
    if isinstance(x, Const):
        return frozenset()
    if isinstance(x, (Func, Atom)):
        return frozenset().union(*(fo_free_vars(a) for a in x.args))
    if isinstance(x, (Bottom, FalsityConst)):
        return frozenset()
    if isinstance(x, (And, Or, Imp)):
        return fo_free_vars(x.left) | fo_free_vars(x.right)
    if isinstance(x, (Forall, Exists, FOLam)):
        return fo_free_vars(x.body) - {x.var}
    if isinstance(x, ExElim):
        return fo_free_vars(x.scrutinee) | (fo_free_vars(x.body) - {x.fo_var})
    if isinstance(x, PROOF_TYPES):
        out = frozenset()
        for f in dataclasses.fields(x):
            v = getattr(x, f.name)
            if dataclasses.is_dataclass(v):
                out |= fo_free_vars(v)
        return out
    raise TypeError(f"not a syntax node: {x!r}")


def proof_free_vars(t: ProofTerm) -> frozenset[str]:
    """Names of the free proof variables of ``t``."""
    if isinstance(t, PVar):
        return frozenset((t.name,))
    if isinstance(t, Lam):
        return proof_free_vars(t.body) - {t.var}
    if isinstance(t, Case):
        return (proof_free_vars(t.scrutinee)
                | (proof_free_vars(t.left) - {t.left_var})
                | (proof_free_vars(t.right) - {t.right_var}))
    if isinstance(t, ExElim):
        return proof_free_vars(t.scrutinee) | (proof_free_vars(t.body) - {t.var})
    return frozenset().union(*(proof_free_vars(c) for _, c in children(t)))


def free_hypotheses(t: ProofTerm) -> Iterator[PVar]:
    """Every free proof-variable occurrence of ``t``, with its annotation."""
    yield from _free_hyps(t, frozenset())


def _free_hyps(t: ProofTerm, bound: frozenset[str]) -> Iterator[PVar]:
    if isinstance(t, PVar):
        if t.name not in bound:
            yield t
        return
    if isinstance(t, Lam):
        yield from _free_hyps(t.body, bound | {t.var})
    elif isinstance(t, Case):
        yield from _free_hyps(t.scrutinee, bound)
        yield from _free_hyps(t.left, bound | {t.left_var})
        yield from _free_hyps(t.right, bound | {t.right_var})
    elif isinstance(t, ExElim):
        yield from _free_hyps(t.scrutinee, bound)
        yield from _free_hyps(t.body, bound | {t.var})
    else:
        for _, c in children(t):
            yield from _free_hyps(c, bound)


def fo_names(x) -> set[str]:
    """All variable and constant names occurring anywhere in ``x``, bound or free."""
    out: set[str] = set()
    _collect_fo_names(x, out)
    return out


def _collect_fo_names(x, out: set[str]) -> None:
    if isinstance(x, (Var, Const)):
        out.add(x.name)
    elif isinstance(x, (Func, Atom)):
        for a in x.args:
            _collect_fo_names(a, out)
    elif isinstance(x, (Forall, Exists, FOLam)):
        out.add(x.var)
        _collect_fo_names(x.body, out)
    elif isinstance(x, ExElim):
        out.add(x.fo_var)
        _collect_fo_names(x.scrutinee, out)
        _collect_fo_names(x.body, out)
    elif dataclasses.is_dataclass(x):
        for f in dataclasses.fields(x):
            v = getattr(x, f.name)
            if dataclasses.is_dataclass(v):
                _collect_fo_names(v, out)


def fresh_name(base: str, avoid) -> str:
    """Deterministically prime ``base`` until it is not in ``avoid``."""
    candidate = base.rstrip("'") or base
    while candidate in avoid:
        candidate += "'"
    return candidate


# ---------------------------------------------------------------------------
# first-order substitution


def fo_subst(target, m: FOTerm, alpha: str):
    """Capture-avoiding ``target[m/alpha]`` for terms, formulas and proof terms."""
    if alpha not in fo_free_vars(target):
        return target
    return _fo_subst(target, m, alpha, fo_free_vars(m))


def _rebind_fo(var: str, body, m: FOTerm, alpha: str, m_fv: frozenset[str]):
    """Push ``[m/alpha]`` under a first-order binder ``var``; returns (var', body')."""
    if var == alpha or alpha not in fo_free_vars(body):
        return var, body
    if var in m_fv:
        avoid = fo_names(body) | fo_names(m) | {alpha}
        new = fresh_name(var, avoid)
        body = _fo_subst(body, Var(new), var, frozenset((new,)))
        var = new
    return var, _fo_subst(body, m, alpha, m_fv)


def _fo_subst(x, m: FOTerm, alpha: str, m_fv: frozenset[str]):
    if isinstance(x, Var):
        return m if x.name == alpha else x
    if isinstance(x, (Const, Bottom, FalsityConst, type(None))):
        return x
    if isinstance(x, Func):
        return Func(x.name, tuple(_fo_subst(a, m, alpha, m_fv) for a in x.args))
    if isinstance(x, Atom):
        return Atom(x.pred, tuple(_fo_subst(a, m, alpha, m_fv) for a in x.args))
    if isinstance(x, (Forall, Exists, FOLam)):
        var, body = _rebind_fo(x.var, x.body, m, alpha, m_fv)
        return type(x)(var, body)
    if isinstance(x, ExElim):
        fo_var, body = _rebind_fo(x.fo_var, x.body, m, alpha, m_fv)
        return ExElim(_fo_subst(x.scrutinee, m, alpha, m_fv), fo_var, x.var, body)
    # every remaining node has no first-order binder of its own
    changes = {}
    for f in dataclasses.fields(x):
        v = getattr(x, f.name)
        if dataclasses.is_dataclass(v):
            changes[f.name] = _fo_subst(v, m, alpha, m_fv)
    return dataclasses.replace(x, **changes)


# ---------------------------------------------------------------------------
# proof substitution


def proof_subst(target: ProofTerm, u: ProofTerm, x: str) -> ProofTerm:
    """Capture-avoiding ``target[u/x]``.

    Binders of ``target`` are renamed when they would capture a free proof
    variable of ``u``; first-order binders are renamed when they would capture
    one of ``u``'s free first-order variables.
    """
    if x not in proof_free_vars(target):
        return target
    return _psubst(target, x, lambda occ: u, proof_free_vars(u), fo_free_vars(u), u)


def rename_proof_var(target: ProofTerm, old: str, new: str) -> ProofTerm:
    """Rename free occurrences of ``old``, keeping each occurrence's annotation."""
    if old not in proof_free_vars(target):
        return target
    return _psubst(target, old, lambda occ: PVar(new, occ.annotation),
                   frozenset((new,)), frozenset(), PVar(new))


def _fresh_pvar(base: str, *terms) -> str:
    avoid: set[str] = set()
    for t in terms:
        avoid |= _all_pvar_names(t)
    return fresh_name(base, avoid)


def _all_pvar_names(t: ProofTerm) -> set[str]:
    out = set()
    if isinstance(t, PVar):
        out.add(t.name)
    elif isinstance(t, Lam):
        out.add(t.var)
    elif isinstance(t, Case):
        out |= {t.left_var, t.right_var}
    elif isinstance(t, ExElim):
        out.add(t.var)
    for _, c in children(t):
        out |= _all_pvar_names(c)
    return out


def _psubst(t: ProofTerm, x: str, repl: Callable[[PVar], ProofTerm],
            u_pfv: frozenset[str], u_fofv: frozenset[str], u: ProofTerm) -> ProofTerm:
    if x not in proof_free_vars(t):
        return t

    def under(var: str, body: ProofTerm) -> tuple[str, ProofTerm]:
        if var == x:
            return var, body
        if var in u_pfv:
            new = _fresh_pvar(var, body, u, PVar(x))
            body = rename_proof_var(body, var, new)
            var = new
        return var, _psubst(body, x, repl, u_pfv, u_fofv, u)

    def under_fo(var: str, body: ProofTerm) -> tuple[str, ProofTerm]:
        if var in u_fofv:
            new = fresh_name(var, fo_names(body) | fo_names(u))
            body = fo_subst(body, Var(new), var)
            var = new
        return var, body

    if isinstance(t, PVar):
        return repl(t)
    if isinstance(t, Lam):
        var, body = under(t.var, t.body)
        return Lam(var, t.domain, body)
    if isinstance(t, Case):
        scrut = _psubst(t.scrutinee, x, repl, u_pfv, u_fofv, u)
        lv, left = under(t.left_var, t.left)
        rv, right = under(t.right_var, t.right)
        return Case(scrut, lv, left, rv, right)
    if isinstance(t, FOLam):
        var, body = under_fo(t.var, t.body)
        return FOLam(var, _psubst(body, x, repl, u_pfv, u_fofv, u))
    if isinstance(t, ExElim):
        scrut = _psubst(t.scrutinee, x, repl, u_pfv, u_fofv, u)
        body = t.body
        fo_var = t.fo_var
        if t.var != x and x in proof_free_vars(body):
            fo_var, body = under_fo(fo_var, body)
        var, body = under(t.var, body)
        return ExElim(scrut, fo_var, var, body)
    return dataclasses.replace(
        t, **{label: _psubst(c, x, repl, u_pfv, u_fofv, u) for label, c in children(t)})


# ---------------------------------------------------------------------------
# alpha-equivalence


def alpha_key(x) -> tuple:
    """A nameless, hashable key: equal keys iff alpha-equivalent."""
    return _key(x, {}, 0, {}, 0)


def alpha_equal(a, b) -> bool:
    """True iff ``a`` and ``b`` differ only in the names of bound variables."""
    if a is b:
        return True
    return alpha_key(a) == alpha_key(b)


def _key(x, fo: dict, fo_depth: int, pv: dict, pv_depth: int) -> tuple:
    if x is None:
        return ("none",)
    if isinstance(x, Var):
        return ("bv", fo[x.name]) if x.name in fo else ("fv", x.name)
    if isinstance(x, Const):
        return ("c", x.name)
    if isinstance(x, Func):
        return ("f", x.name, tuple(_key(a, fo, fo_depth, pv, pv_depth) for a in x.args))
    if isinstance(x, Atom):
        return ("P", x.pred, tuple(_key(a, fo, fo_depth, pv, pv_depth) for a in x.args))
    if isinstance(x, Bottom):
        return ("bot",)
    if isinstance(x, FalsityConst):
        return ("F",)
    if isinstance(x, (Forall, Exists, FOLam)):
        inner = {**fo, x.var: fo_depth}
        return (type(x).__name__, _key(x.body, inner, fo_depth + 1, pv, pv_depth))
    if isinstance(x, PVar):
        name = ("bx", pv[x.name]) if x.name in pv else ("fx", x.name)
        return ("x", name, _key(x.annotation, fo, fo_depth, pv, pv_depth))
    if isinstance(x, Lam):
        return ("lam", _key(x.domain, fo, fo_depth, pv, pv_depth),
                _key(x.body, fo, fo_depth, {**pv, x.var: pv_depth}, pv_depth + 1))
    if isinstance(x, Case):
        return ("case", _key(x.scrutinee, fo, fo_depth, pv, pv_depth),
                _key(x.left, fo, fo_depth, {**pv, x.left_var: pv_depth}, pv_depth + 1),
                _key(x.right, fo, fo_depth, {**pv, x.right_var: pv_depth}, pv_depth + 1))
    if isinstance(x, ExElim):
        return ("unpack", _key(x.scrutinee, fo, fo_depth, pv, pv_depth),
                _key(x.body, {**fo, x.fo_var: fo_depth}, fo_depth + 1,
                     {**pv, x.var: pv_depth}, pv_depth + 1))
    parts = [type(x).__name__]
    for f in dataclasses.fields(x):
        v = getattr(x, f.name)
        if dataclasses.is_dataclass(v):
            parts.append(_key(v, fo, fo_depth, pv, pv_depth))
        else:
            parts.append(v)
    return tuple(parts)


def _str(self) -> str:
    from .printer import show
    return show(self)


for _cls in FO_TERM_TYPES + FORMULA_TYPES + PROOF_TYPES:
    _cls.__str__ = _str
del _cls
