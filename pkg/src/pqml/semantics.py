"""Extension computation, satisfaction and validity.

The evaluator follows the semantic clauses literally: negation is
complement, disjunction is union, diamond is the preimage operator, and
the existential quantifier is the union over the admissible family (the
full powerset for a bare Kripke frame).

Because an extension only depends on the valuation's restriction to the
formula's free variables, results are memoized per (subformula, restricted
valuation).  The quantifier recursion revisits subformulas under many
near-identical valuations, and this sharing is what makes nested
quantifiers affordable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EvaluationError, GuardrailError
from .frames import MAX_POWERSET_WORLDS, GeneralFrame, KripkeFrame, Model, bits_of
from .syntax import (Atom, Dia, Exists, Formula, Not, Or, Substitution, Var,
                     _Const, substitute, var_name)


class Evaluator:
    """Evaluation context for one general frame; carries the memo table.

    The memo table is keyed by (node, valuation restricted to the node's
    free variables); values are deterministic, so sharing one evaluator
    across formulas is safe and profitable.
    """

    def __init__(self, frame: GeneralFrame | KripkeFrame,
                 max_worlds: int = MAX_POWERSET_WORLDS, force: bool = False):
        if isinstance(frame, KripkeFrame):
            frame = GeneralFrame.full(frame)
        self.frame = frame
        self.base = frame.base
        self.max_worlds = max_worlds
        self.force = force
        self._memo: dict = {}

    def extension(self, phi: Formula, valuation: dict) -> int:
        missing = phi.free_vars - set(valuation)
        if missing:
            names = ", ".join(var_name(v) for v in sorted(missing))
            raise EvaluationError(f"unbound free variable(s): {names}")
        for v in phi.free_vars:
            if not self.frame.contains(valuation[v]):
                raise EvaluationError(
                    f"valuation of {var_name(v)} is not an admissible set")
        if phi.qd and self.frame.is_full and self.base.n > self.max_worlds \
                and not self.force:
            raise GuardrailError(
                f"quantified evaluation over the full powerset of "
                f"{self.base.n} worlds exceeds the guardrail of "
                f"{self.max_worlds}")
        return self._eval(phi, valuation)

    def _eval(self, phi: Formula, valuation: dict) -> int:
        key = (phi, tuple(valuation[v] for v in phi.fv_sorted))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(phi, Atom):
            out = valuation[phi.var]
        elif isinstance(phi, _Const):
            out = self.base.universe if phi.is_top else 0
        elif isinstance(phi, Not):
            out = self.base.universe & ~self._eval(phi.sub, valuation)
        elif isinstance(phi, Or):
            out = self._eval(phi.left, valuation) | self._eval(phi.right, valuation)
        elif isinstance(phi, Dia):
            out = self.base.m_diamond(self._eval(phi.sub, valuation))
        elif isinstance(phi, Exists):
            out = 0
            inner = dict(valuation)
            universe = self.base.universe
            for x in self.frame.iter_family(self.max_worlds, self.force):
                inner[phi.var] = x
                out |= self._eval(phi.body, inner)
                if out == universe:
                    break
        else:
            raise TypeError(f"not a formula node: {phi!r}")
        self._memo[key] = out
        return out


def extension(phi: Formula, frame: GeneralFrame, valuation: dict, *,
              max_worlds: int = MAX_POWERSET_WORLDS, force: bool = False) -> int:
    """The world set where phi is true, quantifiers ranging over the
    frame's admissible family."""
    return Evaluator(frame, max_worlds, force).extension(phi, valuation)


def extension_full(phi: Formula, frame: KripkeFrame, valuation: dict, *,
                   max_worlds: int = MAX_POWERSET_WORLDS,
                   force: bool = False) -> int:
    """Extension with quantifiers over the full powerset."""
    return Evaluator(GeneralFrame.full(frame), max_worlds, force).extension(
        phi, valuation)


def holds_at(phi: Formula, model: Model, world, **kw) -> bool:
    w = model.base.index(world)
    return bool(extension(phi, model.frame, model.valuation, **kw) & (1 << w))


@dataclass(frozen=True)
class ValidityResult:
    valid: bool
    valuation: dict | None = None  # least failing valuation, by mask order
    world: int | None = None       # least world where it fails

    def __bool__(self) -> bool:
        return self.valid


def _validity(phi: Formula, frame: GeneralFrame, max_worlds: int,
              force: bool, max_valuations: int) -> ValidityResult:
    fv = phi.fv_sorted
    ev = Evaluator(frame, max_worlds, force)
    universe = frame.base.universe
    if not fv:  # sentence: one evaluation settles it
        ext = ev.extension(phi, {})
        if ext != universe:
            return ValidityResult(False, {}, next(bits_of(universe & ~ext)))
        return ValidityResult(True)
    family = list(frame.iter_family(max_worlds, force))
    total = len(family) ** len(fv)
    if total > max_valuations and not force:
        raise GuardrailError(
            f"validity check would enumerate {total} valuations "
            f"(limit {max_valuations})")
    for choice in itertools.product(family, repeat=len(fv)):
        valuation = dict(zip(fv, choice))
        ext = ev.extension(phi, valuation)
        if ext != universe:
            world = next(bits_of(universe & ~ext))
            return ValidityResult(False, valuation, world)
    return ValidityResult(True)


def valid_on_kripke(phi: Formula, frame: KripkeFrame, *,
                    max_worlds: int = MAX_POWERSET_WORLDS, force: bool = False,
                    max_valuations: int = 1 << 22) -> ValidityResult:
    """Validity over the full powerset: every valuation of the free
    variables, every world.  Sentences take a single evaluation."""
    return _validity(phi, GeneralFrame.full(frame), max_worlds, force,
                     max_valuations)


def valid_on_general(phi: Formula, frame: GeneralFrame, *,
                     max_worlds: int = MAX_POWERSET_WORLDS, force: bool = False,
                     max_valuations: int = 1 << 22) -> ValidityResult:
    """Validity with valuations and quantifiers over the admissible family."""
    return _validity(phi, frame, max_worlds, force, max_valuations)


def check_substitution_lemma(phi: Formula, sigma: Substitution,
                             frame: GeneralFrame, valuation: dict, **kw) -> bool:
    """Whether evaluating phi under the pushed-forward valuation
    p -> extension(sigma(p)) agrees with evaluating sigma(phi) directly."""
    ev = Evaluator(frame, **kw)
    pushed = {}
    for v in phi.free_vars:
        image = sigma.get(v, Atom(v))
        ext = ev.extension(image, valuation)
        if not frame.is_full and not frame.contains(ext):
            raise EvaluationError(
                f"extension of substituted {var_name(v)} leaves the "
                f"admissible family; the frame is not closed under semantics")
        pushed[v] = ext
    lhs = ev.extension(phi, pushed)
    rhs = ev.extension(substitute(sigma, phi), valuation)
    return lhs == rhs
