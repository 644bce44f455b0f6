"""Quantifier elimination over duplicate classes.

The engine rewrites any formula, relative to a valuation and one duplicate
class, into a quantifier- and modality-free Boolean formula over the free
variables that has the same extension inside that class.  Gluing the
per-class results back together evaluates the formula without streaming
the powerset at quantifiers, which is the fast path.

Key facts the implementation leans on (and the test suite re-checks):

* Valuations that agree on all capped per-cell cardinalities (cells =
  atoms over the free variables crossed with duplicate classes, cap 2^n)
  produce identical breakdown formulas at quantifier depth below n.
* Consequently the quantifier case may replace the union over all subsets
  of W by one canonical witness per capped cell-count profile; the cap is
  2^(qd(body)+1).  A powerset-exhaustive mode is kept behind a flag as an
  oracle for the profile enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EvaluationError, GuardrailError, InternalInvariantError, PqmlError
from .diversity import DuplicateStructure, LocalKind, duplicate_structure, \
    m_diamond_quotient
from .frames import GeneralFrame, KripkeFrame, bits_of, lowest_bits, popcount
from .semantics import Evaluator
from .syntax import (BOT, TOP, Atom, Dia, Exists, Formula, Not, Or, Var,
                     _Const, atoms_over, big_or, var_name)


def atom_extensions(n_worlds: int, variables: tuple[Var, ...],
                    valuation: dict) -> list[int]:
    """Extensions of atoms_over(variables) under the valuation, in the
    canonical atom order.  They partition the world set."""
    k = len(variables)
    out = [0] * (1 << k)
    for i in range(n_worlds):
        code = 0
        for j, v in enumerate(variables):
            if not (valuation[v] >> i) & 1:
                code |= 1 << (k - 1 - j)
        out[code] |= 1 << i
    return out


@dataclass(frozen=True)
class CardinalityProfile:
    """Capped cell counts of a valuation: for each atom over the measured
    variables and each duplicate class, the size of the intersection,
    stored exactly below the cap and clamped at the cap with a flag."""

    cap: int
    cells: tuple  # cells[atom_index][class_index] = (count, capped)

    @classmethod
    def measure(cls, valuation: dict, variables, ds: DuplicateStructure,
                n: int) -> "CardinalityProfile":
        vs = tuple(sorted(variables))
        cap = 1 << n
        aexts = atom_extensions(_universe_size(ds), vs, valuation)
        rows = []
        for aext in aexts:
            row = []
            for d_mask in ds.classes:
                count = popcount(aext & d_mask)
                row.append((min(count, cap), count >= cap))
            rows.append(tuple(row))
        prof = cls(cap, tuple(rows))
        prof._check_consistency(ds)
        return prof

    def _check_consistency(self, ds: DuplicateStructure) -> None:
        for j, d_mask in enumerate(ds.classes):
            stored = sum(self.cells[a][j][0] for a in range(len(self.cells)))
            if stored > popcount(d_mask):
                raise InternalInvariantError("profile counts exceed class size")


def _universe_size(ds: DuplicateStructure) -> int:
    mask = 0
    for d in ds.classes:
        mask |= d
    return mask.bit_length()


def approx_equiv(u: dict, v: dict, n: int, variables, ds: DuplicateStructure) -> bool:
    """Valuation equivalence at level n: per atom-and-class cell, the two
    cardinalities are equal or both at least 2^n."""
    if sorted(u) != sorted(v):
        raise ValueError("valuations must share a domain")
    return (CardinalityProfile.measure(u, variables, ds, n)
            == CardinalityProfile.measure(v, variables, ds, n))


def extend_witness(u: dict, v: dict, n: int, p: Var, x: int,
                   ds: DuplicateStructure) -> int:
    """Given u ~n v and a fresh variable p, build Y so that
    u[X/p] ~(n-1) v[Y/p].

    Per cell (atom of the shared domain x duplicate class) with parts
    A (u-side) and B (v-side): match |A & X| exactly while it is below
    2^(n-1); otherwise match the complement count while it is below
    2^(n-1); otherwise take exactly 2^(n-1) elements.  Choices are the
    least-index elements of B.  The postcondition is machine-checked.
    """
    if n < 1:
        raise ValueError("extend_witness needs n >= 1")
    if p in u or p in v:
        raise ValueError(f"{var_name(p)} must be fresh")
    if not approx_equiv(u, v, n, sorted(u), ds):
        raise PqmlError("precondition failed: valuations are not "
                        f"equivalent at level {n}")
    vs = tuple(sorted(u))
    n_worlds = _universe_size(ds)
    aexts_u = atom_extensions(n_worlds, vs, u)
    aexts_v = atom_extensions(n_worlds, vs, v)
    half = 1 << (n - 1)
    y = 0
    for code in range(len(aexts_u)):
        for d_mask in ds.classes:
            a_cell = aexts_u[code] & d_mask
            b_cell = aexts_v[code] & d_mask
            inter = popcount(a_cell & x)
            rest = popcount(a_cell) - inter
            if inter < half:
                pick = inter
            elif rest < half:
                pick = popcount(b_cell) - rest
            else:
                pick = half
            y |= lowest_bits(b_cell, pick)
    u2 = dict(u)
    u2[p] = x
    v2 = dict(v)
    v2[p] = y
    if not approx_equiv(u2, v2, n - 1, vs + (p,), ds):
        raise InternalInvariantError("extend_witness postcondition failed")
    return y


def build_invariant_Y(frame: GeneralFrame, valuation: dict, p: Var, x: int,
                      w: int, n: int, ds: DuplicateStructure) -> int:
    """Build Y with valuation[X/p] ~n valuation[Y/p] and w in X iff w in Y.

    Per cell C of the atom-by-class partition: keep C & X exactly while
    either side of the split is below 2^n; otherwise shrink the majority
    side to the cap, keeping w on its side of the split.  On a finite
    frame this always succeeds; the postconditions are machine-checked.
    """
    vs = tuple(sorted(valuation))
    if p in valuation:
        raise ValueError(f"{var_name(p)} must be fresh")
    n_worlds = _universe_size(ds)
    cap = 1 << n
    aexts = atom_extensions(n_worlds, vs, valuation)
    y = 0
    for code in range(len(aexts)):
        for d_mask in ds.classes:
            cell = aexts[code] & d_mask
            if not cell:
                continue
            c_in = cell & x
            c_out = cell & ~x
            if popcount(c_in) < cap or popcount(c_out) < cap:
                y |= c_in
            elif (x >> w) & 1 and (cell >> w) & 1:
                # keep w, drop cap-many elements of the complement side
                y |= cell & ~lowest_bits(c_out, cap)
            else:
                y |= lowest_bits(c_in, cap)
    u2 = dict(valuation)
    u2[p] = x
    v2 = dict(valuation)
    v2[p] = y
    if not approx_equiv(u2, v2, n, vs + (p,), ds):
        raise InternalInvariantError("build_invariant_Y postcondition failed")
    if bool((x >> w) & 1) != bool((y >> w) & 1):
        raise InternalInvariantError("build_invariant_Y lost the pivot world")
    return y


def _cell_count_reps(size: int, cap: int) -> list[int]:
    """Representative intersection counts for one cell: every count with
    either side of the split below the cap, plus one canonical count for
    the both-sides-large region."""
    reps = set(range(0, min(size, cap - 1) + 1))
    reps.update(range(max(0, size - cap + 1), size + 1))
    if size >= 2 * cap:
        reps.add(cap)
    return sorted(reps)


class BreakdownEngine:
    """Per-frame context for breakdown computations.

    exhaustive_exists switches the quantifier case to the full powerset
    union (the oracle for the profile enumeration).
    """

    def __init__(self, frame: KripkeFrame, ds: DuplicateStructure | None = None,
                 exhaustive_exists: bool = False,
                 max_candidates: int = 1 << 20):
        self.frame = frame
        self.ds = ds if ds is not None else duplicate_structure(frame)
        self.exhaustive = exhaustive_exists
        self.max_candidates = max_candidates
        self._memo: dict = {}
        self._bool_memo: dict = {}

    # -- Boolean evaluation of breakdown outputs (no modality, no quantifier)
    def _bool_ext(self, beta: Formula, valuation: dict) -> int:
        key = (beta, tuple(valuation[v] for v in beta.fv_sorted))
        hit = self._bool_memo.get(key)
        if hit is not None:
            return hit
        if isinstance(beta, Atom):
            out = valuation[beta.var]
        elif isinstance(beta, _Const):
            out = self.frame.universe if beta.is_top else 0
        elif isinstance(beta, Not):
            out = self.frame.universe & ~self._bool_ext(beta.sub, valuation)
        elif isinstance(beta, Or):
            out = self._bool_ext(beta.left, valuation) \
                | self._bool_ext(beta.right, valuation)
        else:
            raise InternalInvariantError(
                "breakdown produced a non-Boolean formula")
        self._bool_memo[key] = out
        return out

    def analyze(self, phi: Formula, valuation: dict):
        """Per-class breakdown formulas plus the reconstructed extension
        (the union over classes of each class formula's extension inside
        the class)."""
        missing = phi.free_vars - set(valuation)
        if missing:
            names = ", ".join(var_name(v) for v in sorted(missing))
            raise EvaluationError(f"unbound free variable(s): {names}")
        return self._analyze(phi, valuation)

    def _analyze(self, phi: Formula, valuation: dict):
        key = (phi, tuple(valuation[v] for v in phi.fv_sorted))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        classes = self.ds.classes
        k = len(classes)
        if isinstance(phi, Atom):
            out = ((phi,) * k, valuation[phi.var])
        elif isinstance(phi, _Const):
            out = ((phi,) * k, self.frame.universe if phi.is_top else 0)
        elif isinstance(phi, Not):
            sub_fs, sub_ext = self._analyze(phi.sub, valuation)
            out = (tuple(Not(f) for f in sub_fs),
                   self.frame.universe & ~sub_ext)
        elif isinstance(phi, Or):
            lf, lext = self._analyze(phi.left, valuation)
            rf, rext = self._analyze(phi.right, valuation)
            out = (tuple(Or(a, b) for a, b in zip(lf, rf)), lext | rext)
        elif isinstance(phi, Dia):
            out = self._analyze_dia(phi, valuation)
        elif isinstance(phi, Exists):
            out = self._analyze_exists(phi, valuation)
        else:
            raise TypeError(f"not a formula node: {phi!r}")
        self._memo[key] = out
        return out

    def _analyze_dia(self, phi: Dia, valuation: dict):
        sub_fs, x = self._analyze(phi.sub, valuation)
        ds = self.ds
        fs = []
        for i, d_mask in enumerate(ds.classes):
            kind = ds.local_kind[i]
            if kind in (LocalKind.FULL, LocalKind.EMPTY):
                triggered = any(x & ds.classes[j]
                                for j in bits_of(ds.quotient_rel[i]))
                fs.append(TOP if triggered else BOT)
                continue
            external = any(j != i and x & ds.classes[j]
                           for j in bits_of(ds.quotient_rel[i]))
            if external:
                fs.append(TOP)
            elif kind is LocalKind.COIDENTITY:
                inside = popcount(x & d_mask)
                if inside >= 2:
                    fs.append(TOP)
                elif inside == 1:
                    fs.append(Not(sub_fs[i]))
                else:
                    fs.append(BOT)
            else:  # IDENTITY
                fs.append(sub_fs[i])
        ext = m_diamond_quotient(ds, self.frame, x)
        return tuple(fs), ext

    def _analyze_exists(self, phi: Exists, valuation: dict):
        ds = self.ds
        fv = phi.fv_sorted
        atoms = atoms_over(fv)
        aexts = atom_extensions(self.frame.n, fv, valuation)
        union = 0
        inner = {v: valuation[v] for v in fv}
        for x in self._exists_candidates(phi, aexts):
            inner[phi.var] = x
            _, ext = self._analyze(phi.body, inner)
            union |= ext
        fs = []
        ext = 0
        for i, d_mask in enumerate(ds.classes):
            chosen = [atoms[c] for c in range(len(atoms))
                      if aexts[c] & union & d_mask]
            fs.append(big_or(chosen, BOT))
            for c in range(len(atoms)):
                if aexts[c] & union & d_mask:
                    ext |= aexts[c] & d_mask
        return tuple(fs), ext

    def _exists_candidates(self, phi: Exists, aexts: list[int]):
        if self.exhaustive:
            return range(1 << self.frame.n)
        cap = 1 << (phi.body.qd + 1)
        cells = []
        for aext in aexts:
            for d_mask in self.ds.classes:
                cell = aext & d_mask
                if cell:
                    cells.append(cell)
        choice_lists = []
        total = 1
        for cell in cells:
            reps = _cell_count_reps(popcount(cell), cap)
            choice_lists.append([lowest_bits(cell, a) for a in reps])
            total *= len(reps)
            if total > self.max_candidates:
                raise GuardrailError(
                    f"quantifier case would enumerate over {total} witness "
                    f"candidates; use the exhaustive mode or a smaller frame")
        return (self._combine(parts) for parts in itertools.product(*choice_lists))

    @staticmethod
    def _combine(parts) -> int:
        out = 0
        for m in parts:
            out |= m
        return out

    def breakdown(self, phi: Formula, valuation: dict, class_index: int) -> Formula:
        """The Boolean formula equal to phi inside the given class under
        the given valuation."""
        fs, _ = self.analyze(phi, valuation)
        return fs[class_index]

    def extension(self, phi: Formula, valuation: dict) -> int:
        """Extension of phi with powerset quantifiers, computed through
        the per-class breakdown."""
        _, ext = self.analyze(phi, valuation)
        return ext


def breakdown(phi: Formula, valuation: dict, class_index: int,
              frame: KripkeFrame, ds: DuplicateStructure | None = None) -> Formula:
    return BreakdownEngine(frame, ds).breakdown(phi, valuation, class_index)


def fast_extension(phi: Formula, frame: KripkeFrame, valuation: dict,
                   ds: DuplicateStructure | None = None) -> int:
    """Powerset-quantified extension via the breakdown; must agree with
    the direct evaluator."""
    return BreakdownEngine(frame, ds).extension(phi, valuation)


@dataclass(frozen=True)
class InvarianceReport:
    """Outcome of a corpus-bounded invariant-subdomain check.  A pass means
    the corpus found no difference, not a proof of invariance."""

    passed: bool
    formulas_checked: int
    valuations_checked: int
    failure: tuple | None = None  # (phi, valuation, world, ext_family, ext_full)

    def __str__(self) -> str:
        if self.passed:
            return (f"passed corpus: {self.formulas_checked} formulas, "
                    f"{self.valuations_checked} valuations (no proof of "
                    f"full invariance)")
        phi, valuation, world, ext_b, ext_full = self.failure
        return (f"failed on {phi!r} at world {world}: family gives "
                f"{ext_b:#x}, powerset gives {ext_full:#x}")


def invariant_subdomain_check(frame: GeneralFrame, corpus,
                              max_valuations: int = 1 << 16) -> InvarianceReport:
    """Compare evaluation over the admissible family with evaluation over
    the full powerset, for every corpus formula and every valuation of its
    free variables drawn from the family.  Reports the first violation
    (formula order, then valuation order, then least world)."""
    if frame.is_full:
        corpus = list(corpus)
        return InvarianceReport(True, len(corpus), 0)
    family = list(frame.admissible)
    ev_fam = Evaluator(frame)
    ev_full = Evaluator(GeneralFrame.full(frame.base))
    formulas = 0
    valuations = 0
    for phi in corpus:
        formulas += 1
        fv = phi.fv_sorted
        total = len(family) ** len(fv)
        if total > max_valuations:
            raise GuardrailError(
                f"{total} valuations for {phi!r} exceed the limit")
        for choice in itertools.product(family, repeat=len(fv)):
            valuations += 1
            valuation = dict(zip(fv, choice))
            ext_b = ev_fam.extension(phi, valuation)
            ext_full = ev_full.extension(phi, valuation)
            if ext_b != ext_full:
                world = next(bits_of(ext_b ^ ext_full))
                return InvarianceReport(
                    False, formulas, valuations,
                    (phi, valuation, world, ext_b, ext_full))
    return InvarianceReport(True, formulas, valuations)
