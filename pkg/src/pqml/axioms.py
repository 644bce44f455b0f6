"""Named axiom schemes and a syntactic Sahlqvist classifier.

Generators produce exact formulas in the primitive AST; parameterized
schemes pick fresh variables by the least-unused-index rule, so
regenerating with the same parameters is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (BOT, TOP, And, Atom, Box, Dia, Exists, Forall, Formula,
                     Iff, Implies, Not, Or, Var, _Const, big_and, big_or,
                     box_iter, box_le, dia_iter, dia_le, to_text)

P0, P1, P2 = Atom(0), Atom(1), Atom(2)


def k() -> Formula:
    """Distribution: [](p0 -> p1) -> ([]p0 -> []p1)."""
    return Implies(Box(Implies(P0, P1)), Implies(Box(P0), Box(P1)))


def dual() -> Formula:
    """<>p0 <-> ~[]~p0."""
    return Iff(Dia(P0), Not(Box(Not(P0))))


def bc(p: Var, phi: Formula) -> Formula:
    """Barcan instance: <>E p. phi -> E p. <>phi."""
    return Implies(Dia(Exists(p, phi)), Exists(p, Dia(phi)))


def _first_var_not_free(phi: Formula) -> Var:
    v = 0
    while v in phi.free_vars:
        v += 1
    return v


def q_n(n: int, phi: Formula) -> Formula:
    """phi expresses a maximally specific possible proposition, with
    within-n modalities standing in for the global one: phi is possible
    within n steps and settles every proposition within n steps.  The
    settling variable is the first variable not free in phi."""
    p = Atom(_first_var_not_free(phi))
    settled = Forall(p.var, Or(box_le(n, Implies(phi, p)),
                               box_le(n, Implies(phi, Not(p)))))
    return And(dia_le(n, phi), settled)


def at_n(n: int) -> Formula:
    """Atomicity: whatever is possible within n steps is entailed, within
    n steps, by a maximally specific possible proposition."""
    q, p = P0, P1
    body = Implies(dia_le(n, q),
                   Exists(p.var, And(q_n(n, p), box_le(n, Implies(p, q)))))
    return Forall(q.var, body)


def r_n(n: int) -> Formula:
    """Successor-set definability: for every proposition p there is a
    strongest q with "necessarily q" entailed by p within n steps."""
    p, q, r = P0, P1, P2
    strongest = Forall(r.var, Implies(box_le(n, Implies(p, Box(r))),
                                      box_le(n, Implies(q, r))))
    return Forall(p.var, Exists(q.var, And(box_le(n, Implies(p, Box(q))),
                                           strongest)))


def five() -> Formula:
    """<>p0 -> []<>p0 (Euclidean)."""
    return Implies(Dia(P0), Box(Dia(P0)))


def t() -> Formula:
    """[]p0 -> p0 (reflexivity)."""
    return Implies(Box(P0), P0)


def t_dia() -> Formula:
    """p0 -> <>p0, the diamond spelling of reflexivity."""
    return Implies(P0, Dia(P0))


def m_ax() -> Formula:
    """[]<>p0 -> <>[]p0 (McKinsey)."""
    return Implies(Box(Dia(P0)), Dia(Box(P0)))


def e_ax() -> Formula:
    """<>(<>p0 & []p1) -> [](<>p0 | []p1)."""
    return Implies(Dia(And(Dia(P0), Box(P1))), Box(Or(Dia(P0), Box(P1))))


def q_vb() -> Formula:
    """(<>p0 & [](p0 -> []p0)) -> p0."""
    return Implies(And(Dia(P0), Box(Implies(P0, Box(P0)))), P0)


def d_ax() -> Formula:
    """[]p0 -> <>p0 (seriality)."""
    return Implies(Box(P0), Dia(P0))


def four() -> Formula:
    """[]p0 -> [][]p0 (transitivity)."""
    return Implies(Box(P0), Box(Box(P0)))


def d45() -> Formula:
    """Conjunction of the seriality, transitivity and Euclidean axioms."""
    return big_and([d_ax(), four(), five()])


def alt_n(n: int) -> Formula:
    """(p0 & ... & pn) -> OR_{i<j} <>(pi & pj).

    Note: for n >= 1 this is valid exactly on reflexive frames (set every
    pi to {w} and the consequent forces a loop at w; with a loop, w itself
    witnesses every disjunct).  See alt_dia_n for the variant that bounds
    the successor count.
    """
    ante = big_and([Atom(i) for i in range(n + 1)])
    cons = big_or([Dia(And(Atom(i), Atom(j)))
                   for i in range(n + 1) for j in range(i + 1, n + 1)], BOT)
    return Implies(ante, cons)


def alt_dia_n(n: int) -> Formula:
    """(<>p0 & ... & <>pn) -> OR_{i<j} <>(pi & pj): valid exactly on
    frames where every world has at most n successors (pigeonhole on the
    n+1 witnesses)."""
    ante = big_and([Dia(Atom(i)) for i in range(n + 1)])
    cons = big_or([Dia(And(Atom(i), Atom(j)))
                   for i in range(n + 1) for j in range(i + 1, n + 1)], BOT)
    return Implies(ante, cons)


def trs_m(m: int) -> Formula:
    """Within-m possibility implies within-(m+1) possibility.  After
    expanding the bounded modalities this weakening direction is an
    instance of a propositional tautology, hence valid on every frame;
    trs_collapse_m is the direction with frame content."""
    return Implies(dia_le(m, P0), dia_le(m + 1, P0))


def trs_collapse_m(m: int) -> Formula:
    """Within-(m+1) possibility implies within-m possibility: valid
    exactly on frames whose reachability stabilizes within m steps."""
    return Implies(dia_le(m + 1, P0), dia_le(m, P0))


def diamond_collapse(n: int) -> Formula:
    """Exactly-(n+1)-step possibility implies within-n possibility; holds
    wherever point-generated diversity is at most n, because a shortest
    path of length n+1 passes through n+1 pairwise non-duplicate worlds."""
    return Implies(dia_iter(n + 1, P0), dia_le(n, P0))


def phi_sq1() -> Formula:
    """[](<>p0 -> []<>p0), a Sahlqvist example."""
    return Box(Implies(Dia(P0), Box(Dia(P0))))


def phi_sq2() -> Formula:
    """<><>p0 -> []<>p0, a Sahlqvist example."""
    return Implies(Dia(Dia(P0)), Box(Dia(P0)))


@dataclass(frozen=True)
class SchemaInstance:
    name: str
    parameters: tuple
    formula: Formula
    note: str = ""


_AT_NOTE = ("the world-proposition conjunct is generated at exact grade n; "
            "a bounded-grade variant is sometimes written but not separately "
            "defined, so the exact grade is the pinned reading")
_R_NOTE = ("parenthesization pinned as: for-all p exists q ( within-n(p -> "
           "necessarily q) and for-all r (within-n(p -> necessarily r) -> "
           "within-n(q -> r)) )")
_T_NOTE = "box spelling; t_dia is the diamond spelling"


def schema(name: str, n: int | None = None,
           phi: Formula | None = None) -> SchemaInstance:
    """Build a named schema instance; `n` parameterizes the graded
    schemes, `phi` feeds the substitution-style ones."""
    name = name.lower()
    needs_n = {"at", "r", "q", "alt", "altdia", "trs", "trscollapse", "dc"}
    if name in needs_n and n is None:
        raise ValueError(f"schema {name!r} needs a grade parameter")
    if name == "k":
        return SchemaInstance("K", (), k())
    if name == "dual":
        return SchemaInstance("Dual", (), dual())
    if name == "bc":
        body = phi if phi is not None else P0
        return SchemaInstance("Bc", (0, body), bc(0, body))
    if name == "q":
        body = phi if phi is not None else P0
        return SchemaInstance("Q", (n, body), q_n(n, body))
    if name == "at":
        return SchemaInstance("At", (n,), at_n(n), _AT_NOTE)
    if name == "r":
        return SchemaInstance("R", (n,), r_n(n), _R_NOTE)
    if name == "5":
        return SchemaInstance("5", (), five())
    if name == "t":
        return SchemaInstance("T", (), t(), _T_NOTE)
    if name == "tdia":
        return SchemaInstance("Tdia", (), t_dia(), _T_NOTE)
    if name == "m":
        return SchemaInstance("M", (), m_ax())
    if name == "e":
        return SchemaInstance("E", (), e_ax())
    if name == "qvb":
        return SchemaInstance("Qvb", (), q_vb())
    if name == "d45":
        return SchemaInstance("D45", (), d45())
    if name == "alt":
        return SchemaInstance("Alt", (n,), alt_n(n))
    if name == "altdia":
        return SchemaInstance("AltDia", (n,), alt_dia_n(n))
    if name == "trs":
        return SchemaInstance("Trs", (n,), trs_m(n))
    if name == "trscollapse":
        return SchemaInstance("TrsCollapse", (n,), trs_collapse_m(n))
    if name == "dc":
        return SchemaInstance("DiamondCollapse", (n,), diamond_collapse(n))
    if name == "phi1":
        return SchemaInstance("Phi1", (), phi_sq1())
    if name == "phi2":
        return SchemaInstance("Phi2", (), phi_sq2())
    raise ValueError(f"unknown schema {name!r}")


SCHEMA_NAMES = ("k", "dual", "bc", "q", "at", "r", "5", "t", "tdia", "m",
                "e", "qvb", "d45", "alt", "altdia", "trs", "trscollapse",
                "dc", "phi1", "phi2")


# ---------------------------------------------------------------------------
# Polarity and the Sahlqvist classifier

@dataclass(frozen=True)
class Polarity:
    positive: bool
    negative: bool


def positive_negative_occurrence(phi: Formula, p: Var) -> Polarity:
    """Whether p occurs free under an even (positive) and/or odd
    (negative) number of negations.  Implication antecedents count as one
    negation through their expansion."""
    pos = False
    neg = False

    def walk(f: Formula, sign: bool) -> None:
        nonlocal pos, neg
        if isinstance(f, Atom):
            if f.var == p:
                if sign:
                    pos = True
                else:
                    neg = True
        elif isinstance(f, _Const):
            pass
        elif isinstance(f, Not):
            walk(f.sub, not sign)
        elif isinstance(f, Or):
            walk(f.left, sign)
            walk(f.right, sign)
        elif isinstance(f, Dia):
            walk(f.sub, sign)
        elif isinstance(f, Exists):
            if f.var != p:
                walk(f.body, sign)
        else:
            raise TypeError(f"not a formula node: {f!r}")

    walk(phi, True)
    return Polarity(pos, neg)


@dataclass(frozen=True)
class SahlqvistReport:
    is_sahlqvist: bool
    trace: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.is_sahlqvist


# Implemented definition (quantifier-free formulas only).  A Sahlqvist
# antecedent is built from boxed atoms, negative formulas and the
# constants, closed under conjunction, disjunction and diamond; a
# Sahlqvist implication is antecedent -> positive; Sahlqvist formulas are
# closed under box and conjunction.  On the primitive AST this class has
# an exact negation-normal-form characterization, which is what the
# checker walks: a formula is Sahlqvist iff its NNF lies in the grammar
#
#   S ::= diamond-chain over a negated atom | positive formula
#       | T | F | S & S | S | S | [] S
#
# (negating an antecedent turns boxed atoms into diamonded negated atoms,
# negative parts into positive parts, and the antecedent closure under
# &,|,<> into closure under |,&,[] -- the same operations the outer
# closure contributes.)  The classifier is conservative: anything outside
# the grammar is rejected even if frame-equivalent to a Sahlqvist formula.

def _nnf(phi: Formula, negated: bool):
    if isinstance(phi, Atom):
        return ("lit", phi.var, not negated)
    if isinstance(phi, _Const):
        return ("const", phi.is_top != negated)
    if isinstance(phi, Not):
        return _nnf(phi.sub, not negated)
    if isinstance(phi, Or):
        return ("and" if negated else "or",
                _nnf(phi.left, negated), _nnf(phi.right, negated))
    if isinstance(phi, Dia):
        return ("box" if negated else "dia", _nnf(phi.sub, negated))
    raise TypeError(f"not a quantifier-free formula node: {phi!r}")


def _nnf_formula(t) -> Formula:
    kind = t[0]
    if kind == "lit":
        return Atom(t[1]) if t[2] else Not(Atom(t[1]))
    if kind == "const":
        return TOP if t[1] else BOT
    if kind == "and":
        return And(_nnf_formula(t[1]), _nnf_formula(t[2]))
    if kind == "or":
        return Or(_nnf_formula(t[1]), _nnf_formula(t[2]))
    if kind == "dia":
        return Dia(_nnf_formula(t[1]))
    return Box(_nnf_formula(t[1]))


def _all_positive(t) -> bool:
    kind = t[0]
    if kind == "lit":
        return t[2]
    if kind == "const":
        return True
    if kind in ("and", "or"):
        return _all_positive(t[1]) and _all_positive(t[2])
    return _all_positive(t[1])


def _dia_negated_atom_chain(t) -> bool:
    while t[0] == "dia":
        t = t[1]
    return t[0] == "lit" and not t[2]


def _co_antecedent(t, trace: list[str], depth: int) -> bool:
    pad = "  " * depth
    shown = to_text(_nnf_formula(t))
    if t[0] == "const":
        trace.append(f"{pad}{shown}: constant")
        return True
    if _dia_negated_atom_chain(t):
        trace.append(f"{pad}{shown}: diamond chain over a negated atom "
                     "(negated boxed atom)")
        return True
    if _all_positive(t):
        trace.append(f"{pad}{shown}: positive formula")
        return True
    if t[0] in ("and", "or"):
        trace.append(f"{pad}{shown}: {t[0]} of two parts")
        return (_co_antecedent(t[1], trace, depth + 1)
                and _co_antecedent(t[2], trace, depth + 1))
    if t[0] == "box":
        trace.append(f"{pad}{shown}: box over a part")
        return _co_antecedent(t[1], trace, depth + 1)
    trace.append(f"{pad}{shown}: REJECTED (a diamond over a non-positive, "
                 "non-atomic part has no Sahlqvist reading)")
    return False


def sahlqvist_check(phi: Formula) -> SahlqvistReport:
    """Classify a quantifier-free formula against the implemented
    Sahlqvist grammar; quantified input is rejected with an error."""
    if phi.qd:
        raise ValueError("the Sahlqvist classifier takes quantifier-free "
                         "formulas only")
    trace: list[str] = []
    ok = _co_antecedent(_nnf(phi, False), trace, 0)
    trace.append("sahlqvist" if ok else "not sahlqvist")
    return SahlqvistReport(ok, tuple(trace))
