"""Formula syntax: AST, parser, printer, measures, substitution.

The primitive connectives are atoms, negation, disjunction, diamond and the
existential propositional quantifier, plus the constants T (top) and F
(bottom).  Conjunction, implication, biconditional, box, the universal
quantifier and the iterated modalities are builder functions that expand
eagerly to primitives, so there is exactly one canonical AST per formula.

Variables form the indexed universe p0, p1, p2, ... and are represented as
plain ints.  "The first variable not used" always means the least unused
index.

Nodes are hash-consed: constructing a node with the same arguments returns
the same object, so `is`/`==` coincide with structural equality, formulas
are cheap dict keys, and measures (free variables, quantifier depth, modal
depth) are computed once at construction.
"""

from __future__ import annotations

from .errors import ParseError

Var = int


def var_name(v: Var) -> str:
    return f"p{v}"


class Formula:
    """Base class for all formula nodes.  Instances are immutable and
    interned; never mutate attributes after construction."""

    __slots__ = ("free_vars", "all_vars", "qd", "md", "connectives", "_fv_sorted")

    free_vars: frozenset[Var]
    all_vars: frozenset[Var]
    qd: int
    md: int
    connectives: int

    @property
    def fv_sorted(self) -> tuple[Var, ...]:
        return self._fv_sorted

    def __repr__(self) -> str:
        return to_text(self)


class _Const(Formula):
    __slots__ = ("is_top",)

    def __init__(self, is_top: bool):
        self.is_top = is_top
        self.free_vars = frozenset()
        self.all_vars = frozenset()
        self._fv_sorted = ()
        self.qd = 0
        self.md = 0
        self.connectives = 0


TOP = _Const(True)
BOT = _Const(False)


class Atom(Formula):
    __slots__ = ("var",)
    _interned: dict[int, "Atom"] = {}

    def __new__(cls, var: Var) -> "Atom":
        hit = cls._interned.get(var)
        if hit is not None:
            return hit
        if var < 0:
            raise ValueError("variable indices are natural numbers")
        self = object.__new__(cls)
        self.var = var
        self.free_vars = frozenset((var,))
        self.all_vars = self.free_vars
        self._fv_sorted = (var,)
        self.qd = 0
        self.md = 0
        self.connectives = 0
        cls._interned[var] = self
        return self


class Not(Formula):
    __slots__ = ("sub",)
    _interned: dict[Formula, "Not"] = {}

    def __new__(cls, sub: Formula) -> "Not":
        hit = cls._interned.get(sub)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.sub = sub
        self.free_vars = sub.free_vars
        self.all_vars = sub.all_vars
        self._fv_sorted = sub._fv_sorted
        self.qd = sub.qd
        self.md = sub.md
        self.connectives = sub.connectives + 1
        cls._interned[sub] = self
        return self


class Or(Formula):
    __slots__ = ("left", "right")
    _interned: dict[tuple[Formula, Formula], "Or"] = {}

    def __new__(cls, left: Formula, right: Formula) -> "Or":
        key = (left, right)
        hit = cls._interned.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.left = left
        self.right = right
        self.free_vars = left.free_vars | right.free_vars
        self.all_vars = left.all_vars | right.all_vars
        self._fv_sorted = tuple(sorted(self.free_vars))
        self.qd = max(left.qd, right.qd)
        self.md = max(left.md, right.md)
        self.connectives = left.connectives + right.connectives + 1
        cls._interned[key] = self
        return self


class Dia(Formula):
    __slots__ = ("sub",)
    _interned: dict[Formula, "Dia"] = {}

    def __new__(cls, sub: Formula) -> "Dia":
        hit = cls._interned.get(sub)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.sub = sub
        self.free_vars = sub.free_vars
        self.all_vars = sub.all_vars
        self._fv_sorted = sub._fv_sorted
        self.qd = sub.qd
        self.md = sub.md + 1
        self.connectives = sub.connectives + 1
        cls._interned[sub] = self
        return self


class Exists(Formula):
    """Existential propositional quantifier.  Quantifiers are ignored by
    modal depth; quantifier depth counts their nesting."""

    __slots__ = ("var", "body")
    _interned: dict[tuple[Var, Formula], "Exists"] = {}

    def __new__(cls, var: Var, body: Formula) -> "Exists":
        key = (var, body)
        hit = cls._interned.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.var = var
        self.body = body
        self.free_vars = body.free_vars - {var}
        self.all_vars = body.all_vars | {var}
        self._fv_sorted = tuple(sorted(self.free_vars))
        self.qd = body.qd + 1
        self.md = body.md
        self.connectives = body.connectives + 1
        cls._interned[key] = self
        return self


# ---------------------------------------------------------------------------
# Derived connectives (eager expansion to primitives)

def And(a: Formula, b: Formula) -> Formula:
    return Not(Or(Not(a), Not(b)))


def Implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def Box(a: Formula) -> Formula:
    return Not(Dia(Not(a)))


def Forall(var: Var, body: Formula) -> Formula:
    return Not(Exists(var, Not(body)))


def big_or(formulas, empty: Formula = BOT) -> Formula:
    """Left-associated disjunction; the empty disjunction is F."""
    out = None
    for f in formulas:
        out = f if out is None else Or(out, f)
    return empty if out is None else out


def big_and(formulas, empty: Formula = TOP) -> Formula:
    """Left-associated conjunction; the empty conjunction is T."""
    out = None
    for f in formulas:
        out = f if out is None else And(out, f)
    return empty if out is None else out


def dia_iter(n: int, phi: Formula) -> Formula:
    """n-fold diamond: 0 iterations is phi itself."""
    for _ in range(n):
        phi = Dia(phi)
    return phi


def box_iter(n: int, phi: Formula) -> Formula:
    for _ in range(n):
        phi = Box(phi)
    return phi


def dia_le(n: int, phi: Formula) -> Formula:
    """"Within n steps": phi or <>phi or ... or <>^n phi, built by the
    recursion le(n+1) = le(n) | iter(n+1)."""
    out = phi
    for k in range(1, n + 1):
        out = Or(out, dia_iter(k, phi))
    return out


def box_le(n: int, phi: Formula) -> Formula:
    """Dual of dia_le: phi & []phi & ... & []^n phi."""
    out = phi
    for k in range(1, n + 1):
        out = And(out, box_iter(k, phi))
    return out


def atoms_over(variables: list[Var] | tuple[Var, ...]) -> list[Formula]:
    """All 2^k conjunctions of literals over the given variables.

    Canonical order: variables in the given order, positive literal before
    negative, enumerated lexicographically (the all-positive atom first).
    The empty variable list yields [T].
    """
    vs = list(variables)
    if len(vs) != len(set(vs)):
        raise ValueError("atoms_over requires duplicate-free variables")
    k = len(vs)
    out = []
    for code in range(1 << k):
        lits = []
        for j, v in enumerate(vs):
            negated = (code >> (k - 1 - j)) & 1
            lits.append(Not(Atom(v)) if negated else Atom(v))
        out.append(big_and(lits))
    return out


# ---------------------------------------------------------------------------
# Substitution

Substitution = dict  # Var -> Formula; identity outside its domain


def _sigma_image(sigma: Substitution, v: Var) -> Formula:
    return sigma.get(v, Atom(v))


def substitute(sigma: Substitution, phi: Formula) -> Formula:
    """Apply a substitution, renaming bound variables on conflict.

    At a quantifier binding p, the bound variable is kept unless p occurs
    free in sigma(r) for some r free in the quantified formula; in that
    case it is renamed to the least-index variable occurring neither in the
    quantified formula nor in any such sigma(r).

    Hash-consing makes the identity substitution return the identical
    object through the plain recursion, no shortcut needed.
    """
    return _subst(sigma, phi)


def _subst(sigma: Substitution, phi: Formula) -> Formula:
    if isinstance(phi, Atom):
        return _sigma_image(sigma, phi.var)
    if isinstance(phi, _Const):
        return phi
    if isinstance(phi, Not):
        return Not(_subst(sigma, phi.sub))
    if isinstance(phi, Dia):
        return Dia(_subst(sigma, phi.sub))
    if isinstance(phi, Or):
        return Or(_subst(sigma, phi.left), _subst(sigma, phi.right))
    if isinstance(phi, Exists):
        p = phi.var
        images = [_sigma_image(sigma, r) for r in phi.free_vars]
        if any(p in im.free_vars for im in images):
            used = set(phi.all_vars)
            for im in images:
                used |= im.all_vars
            q = 0
            while q in used:
                q += 1
        else:
            q = p
        inner = dict(sigma)
        inner[p] = Atom(q)
        return Exists(q, _subst(inner, phi.body))
    raise TypeError(f"not a formula node: {phi!r}")


def rename_free(phi: Formula, old: Var, new: Var) -> Formula:
    """Substitute the variable `new` for free occurrences of `old`."""
    return substitute({old: Atom(new)}, phi)


def alpha_equivalent(f: Formula, g: Formula) -> bool:
    """Structural equality up to renaming of bound variables."""
    return _alpha(f, g, {}, {}, 0)


def _alpha(f: Formula, g: Formula, env_f: dict, env_g: dict, depth: int) -> bool:
    if type(f) is not type(g):
        return False
    if isinstance(f, _Const):
        return f is g
    if isinstance(f, Atom):
        return env_f.get(f.var, ("free", f.var)) == env_g.get(g.var, ("free", g.var))
    if isinstance(f, (Not, Dia)):
        return _alpha(f.sub, g.sub, env_f, env_g, depth)
    if isinstance(f, Or):
        return _alpha(f.left, g.left, env_f, env_g, depth) and _alpha(
            f.right, g.right, env_f, env_g, depth)
    if isinstance(f, Exists):
        ef = dict(env_f)
        eg = dict(env_g)
        ef[f.var] = ("bound", depth)
        eg[g.var] = ("bound", depth)
        return _alpha(f.body, g.body, ef, eg, depth + 1)
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Text grammar
#
#   formula := imp ('<->' formula)?                (right-assoc)
#   imp     := disj ('->' imp)?                    (right-assoc)
#   disj    := conj ('|' conj)*
#   conj    := unary ('&' unary)*
#   unary   := '~' unary | '<>' unary | '[]' unary
#            | 'E' var '.' formula | 'A' var '.' formula   (body extends
#              maximally to the right)
#            | var | 'T' | 'F' | '(' formula ')'
#
# Variables are written p<digits>; the bare names p, q, r, s abbreviate
# p0..p3.  T and F are the constants.

_ALIASES = {"p": 0, "q": 1, "r": 2, "s": 3}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, object, int]] = []
        self._run()
        self.i = 0

    def _run(self) -> None:
        text = self.text
        n = len(text)
        i = 0
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if text.startswith("<->", i):
                self.tokens.append(("IFF", None, i))
                i += 3
            elif text.startswith("->", i):
                self.tokens.append(("IMP", None, i))
                i += 2
            elif text.startswith("<>", i):
                self.tokens.append(("DIA", None, i))
                i += 2
            elif text.startswith("[]", i):
                self.tokens.append(("BOX", None, i))
                i += 2
            elif c in "~&|().":
                kind = {"~": "NOT", "&": "AND", "|": "OR",
                        "(": "LP", ")": "RP", ".": "DOT"}[c]
                self.tokens.append((kind, None, i))
                i += 1
            elif c.isalpha() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                self.tokens.append(self._word_token(word, i))
                i = j
            else:
                raise ParseError(f"unknown token {c!r}", i)
        self.tokens.append(("EOF", None, n))

    def _word_token(self, word: str, at: int) -> tuple[str, object, int]:
        if word == "E":
            return ("EXISTS", None, at)
        if word == "A":
            return ("FORALL", None, at)
        if word == "T":
            return ("TOP", None, at)
        if word == "F":
            return ("BOT", None, at)
        if word[0] == "p" and word[1:].isdigit():
            return ("VAR", int(word[1:]), at)
        if word in _ALIASES:
            return ("VAR", _ALIASES[word], at)
        raise ParseError(
            f"unknown identifier {word!r}: variables are p<digits> "
            "(or the shorthands p, q, r, s)", at)

    def peek(self) -> tuple[str, object, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, object, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, object, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[0]}", tok[2])
        return tok


def parse(text: str) -> Formula:
    """Parse formula text into the canonical primitive AST."""
    lx = _Lexer(text)
    phi = _parse_iff(lx)
    tok = lx.peek()
    if tok[0] != "EOF":
        raise ParseError(f"unexpected {tok[0]} after formula", tok[2])
    return phi


def _parse_iff(lx: _Lexer) -> Formula:
    left = _parse_imp(lx)
    if lx.peek()[0] == "IFF":
        lx.next()
        right = _parse_iff(lx)
        return Iff(left, right)
    return left


def _parse_imp(lx: _Lexer) -> Formula:
    left = _parse_disj(lx)
    if lx.peek()[0] == "IMP":
        lx.next()
        right = _parse_imp(lx)
        return Implies(left, right)
    return left


def _parse_disj(lx: _Lexer) -> Formula:
    out = _parse_conj(lx)
    while lx.peek()[0] == "OR":
        lx.next()
        out = Or(out, _parse_conj(lx))
    return out


def _parse_conj(lx: _Lexer) -> Formula:
    out = _parse_unary(lx)
    while lx.peek()[0] == "AND":
        lx.next()
        out = And(out, _parse_unary(lx))
    return out


def _parse_unary(lx: _Lexer) -> Formula:
    kind, value, at = lx.peek()
    if kind == "NOT":
        lx.next()
        return Not(_parse_unary(lx))
    if kind == "DIA":
        lx.next()
        return Dia(_parse_unary(lx))
    if kind == "BOX":
        lx.next()
        return Box(_parse_unary(lx))
    if kind in ("EXISTS", "FORALL"):
        lx.next()
        var = lx.expect("VAR")[1]
        lx.expect("DOT")
        body = _parse_iff(lx)  # maximal right extension
        return Exists(var, body) if kind == "EXISTS" else Forall(var, body)
    if kind == "VAR":
        lx.next()
        return Atom(value)
    if kind == "TOP":
        lx.next()
        return TOP
    if kind == "BOT":
        lx.next()
        return BOT
    if kind == "LP":
        lx.next()
        phi = _parse_iff(lx)
        lx.expect("RP")
        return phi
    raise ParseError(f"unexpected {kind}", at)


# ---------------------------------------------------------------------------
# Printing
#
# The printer re-sugars the stable patterns produced by the builders:
# []x, A v. x, x & y, x -> y, x <-> y.  parse(to_text(phi)) is phi for every
# formula; texts written with sugar-expandable spellings (e.g. "~p0 | p1")
# normalize to the sugared form after one parse/print cycle.

_PREC_IFF = 1
_PREC_IMP = 2
_PREC_OR = 3
_PREC_AND = 4
_PREC_UNARY = 5


def _match_and(phi: Formula):
    if isinstance(phi, Not) and isinstance(phi.sub, Or) \
            and isinstance(phi.sub.left, Not) and isinstance(phi.sub.right, Not):
        return phi.sub.left.sub, phi.sub.right.sub
    return None


def _match_iff(phi: Formula):
    both = _match_and(phi)
    if both is None:
        return None
    lhs, rhs = both
    if isinstance(lhs, Or) and isinstance(lhs.left, Not) \
            and isinstance(rhs, Or) and isinstance(rhs.left, Not) \
            and lhs.left.sub is rhs.right and rhs.left.sub is lhs.right:
        return lhs.left.sub, lhs.right
    return None


def to_text(phi: Formula) -> str:
    """Render a formula in the text grammar with minimal parentheses."""
    return _fmt(phi, 0, True)


def _fmt(phi: Formula, prec: int, tail: bool) -> str:
    # tail: this occurrence extends to the end of the enclosing printed
    # region, so an open quantifier body cannot capture a later operator.
    if isinstance(phi, _Const):
        return "T" if phi.is_top else "F"
    if isinstance(phi, Atom):
        return var_name(phi.var)

    iff = _match_iff(phi)
    if iff is not None:
        a, b = iff
        wrapped = prec >= _PREC_IFF + 1
        text = f"{_fmt(a, _PREC_IFF + 1, False)} <-> {_fmt(b, _PREC_IFF, tail or wrapped)}"
        return f"({text})" if wrapped else text

    both = _match_and(phi)
    if both is not None:
        a, b = both
        wrapped = prec >= _PREC_AND + 1
        text = f"{_fmt(a, _PREC_AND, False)} & {_fmt(b, _PREC_AND + 1, tail or wrapped)}"
        return f"({text})" if wrapped else text

    if isinstance(phi, Not):
        sub = phi.sub
        if isinstance(sub, Dia) and isinstance(sub.sub, Not):  # box
            return f"[]{_fmt(sub.sub.sub, _PREC_UNARY, tail)}"
        if isinstance(sub, Exists) and isinstance(sub.body, Not):  # forall
            body = _fmt(sub.body.sub, 0, True)
            text = f"A {var_name(sub.var)}. {body}"
            return text if tail else f"({text})"
        return f"~{_fmt(sub, _PREC_UNARY, tail)}"

    if isinstance(phi, Or):
        if isinstance(phi.left, Not):  # implication sugar
            wrapped = prec >= _PREC_IMP + 1
            text = (f"{_fmt(phi.left.sub, _PREC_IMP + 1, False)} -> "
                    f"{_fmt(phi.right, _PREC_IMP, tail or wrapped)}")
            return f"({text})" if wrapped else text
        wrapped = prec >= _PREC_OR + 1
        text = (f"{_fmt(phi.left, _PREC_OR, False)} | "
                f"{_fmt(phi.right, _PREC_OR + 1, tail or wrapped)}")
        return f"({text})" if wrapped else text

    if isinstance(phi, Dia):
        return f"<>{_fmt(phi.sub, _PREC_UNARY, tail)}"

    if isinstance(phi, Exists):
        text = f"E {var_name(phi.var)}. {_fmt(phi.body, 0, True)}"
        return text if tail else f"({text})"

    raise TypeError(f"not a formula node: {phi!r}")
