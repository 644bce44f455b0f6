"""Finite Kripke frames, general frames with admissible families, models.

World sets are bitmasks over the frame's world indices (bit i = world i),
so membership, complement, union and the diamond preimage are single int
operations.  A frame's `universe` is the all-ones mask.

An admissible family is either an explicit sorted tuple of masks or the
full powerset, which is kept as a flag and streamed on demand (never
materialized above the guardrail size).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import EvaluationError, FrameFormatError, GuardrailError
from .syntax import var_name

# Powerset-quantified evaluation refuses world sets above this size unless
# explicitly forced: the quantifier clause streams 2^|W| subsets.
MAX_POWERSET_WORLDS = 20


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits_of(mask: int):
    """Indices of set bits, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_of(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def lowest_bits(mask: int, k: int) -> int:
    """The k lowest set bits of mask (canonical least-index choice)."""
    out = 0
    for i in bits_of(mask):
        if k == 0:
            break
        out |= 1 << i
        k -= 1
    if k:
        raise ValueError("mask has fewer set bits than requested")
    return out


class KripkeFrame:
    """Immutable finite frame: world names plus successor masks."""

    __slots__ = ("names", "rel", "n", "universe", "pred", "_index")

    def __init__(self, names, relation):
        """`names`: world names in index order; `relation`: iterable of
        (source, target) pairs given as names or indices."""
        names = tuple(str(x) for x in names)
        if not names:
            raise FrameFormatError("a frame needs at least one world")
        if len(set(names)) != len(names):
            raise FrameFormatError("world names must be unique")
        self.names = names
        self.n = len(names)
        self.universe = (1 << self.n) - 1
        self._index = {name: i for i, name in enumerate(names)}
        rows = [0] * self.n
        for src, dst in relation:
            i = self.index(src)
            j = self.index(dst)
            rows[i] |= 1 << j
        self.rel = tuple(rows)
        pred = [0] * self.n
        for i, row in enumerate(self.rel):
            for j in bits_of(row):
                pred[j] |= 1 << i
        self.pred = tuple(pred)

    def index(self, world) -> int:
        if isinstance(world, int):
            if not 0 <= world < self.n:
                raise FrameFormatError(f"world index {world} out of range")
            return world
        try:
            return self._index[str(world)]
        except KeyError:
            raise FrameFormatError(f"unknown world {world!r}") from None

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits_of(self.rel[i])]

    def successors(self, w) -> int:
        """R[w] as a mask."""
        return self.rel[self.index(w)]

    def successors_of_set(self, x: int) -> int:
        """R[X]: the image of X under the relation."""
        out = 0
        for i in bits_of(x):
            out |= self.rel[i]
        return out

    def m_diamond(self, x: int) -> int:
        """The diamond preimage: worlds with at least one successor in X."""
        out = 0
        for u in bits_of(x):
            out |= self.pred[u]
        return out

    def reachable(self, w, depth: int | None = None) -> int:
        """Worlds reachable from w in at most `depth` steps (including w);
        unbounded when depth is None."""
        seen = 1 << self.index(w)
        steps = 0
        while depth is None or steps < depth:
            nxt = seen | self.successors_of_set(seen)
            if nxt == seen:
                break
            seen = nxt
            steps += 1
        return seen

    def restrict(self, keep_mask: int) -> "KripkeFrame":
        """Subframe on the given world set, relation restricted."""
        keep = list(bits_of(keep_mask))
        if not keep:
            raise FrameFormatError("cannot restrict a frame to no worlds")
        names = [self.names[i] for i in keep]
        new_of_old = {old: new for new, old in enumerate(keep)}
        edges = [(new_of_old[i], new_of_old[j])
                 for i in keep for j in bits_of(self.rel[i] & keep_mask)]
        return KripkeFrame(names, edges)

    def generated_subframe(self, w) -> "KripkeFrame":
        return self.restrict(self.reachable(w))

    def set_names(self, x: int) -> list[str]:
        return [self.names[i] for i in bits_of(x)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, KripkeFrame)
                and self.names == other.names and self.rel == other.rel)

    def __hash__(self) -> int:
        return hash((self.names, self.rel))

    def __repr__(self) -> str:
        return f"KripkeFrame({self.n} worlds, {len(self.edges())} edges)"


@dataclass(frozen=True)
class ClosureReport:
    boolean_closed: bool
    mdia_closed: bool
    witnesses: tuple = ()

    @property
    def closed(self) -> bool:
        return self.boolean_closed and self.mdia_closed


def check_closure(frame: KripkeFrame, family) -> ClosureReport:
    """Check a family for closure under complement, union and the diamond
    preimage.  Witnesses report the first failure per operation, scanning
    the family in ascending mask order."""
    fam = sorted(set(family))
    if not fam:
        raise FrameFormatError("admissible family must be non-empty")
    have = set(fam)
    universe = frame.universe
    witnesses = []
    boolean_closed = True
    for x in fam:
        comp = universe & ~x
        if comp not in have:
            boolean_closed = False
            witnesses.append(("complement", (x,), comp))
            break
    if boolean_closed:
        done = False
        for x in fam:
            for y in fam:
                if (x | y) not in have:
                    boolean_closed = False
                    witnesses.append(("union", (x, y), x | y))
                    done = True
                    break
            if done:
                break
    mdia_closed = True
    for x in fam:
        img = frame.m_diamond(x)
        if img not in have:
            mdia_closed = False
            witnesses.append(("m_diamond", (x,), img))
            break
    return ClosureReport(boolean_closed, mdia_closed, tuple(witnesses))


def close_family(frame: KripkeFrame, family, max_blocks: int = 16):
    """Least family containing `family` that is closed under complement,
    union and the diamond preimage.

    A finite field of sets is exactly the set of unions of the blocks of a
    partition of W, and the diamond preimage distributes over union, so
    the fixpoint runs on the partition: refine blocks by each block's
    diamond preimage until stable, then materialize all block unions.
    """
    fam = sorted(set(family))
    if not fam:
        raise FrameFormatError("admissible family must be non-empty")
    universe = frame.universe
    # partition of W by membership signature across the family
    sig: dict[tuple, int] = {}
    for i in range(frame.n):
        key = tuple((x >> i) & 1 for x in fam)
        sig[key] = sig.get(key, 0) | (1 << i)
    blocks = sorted(sig.values())
    changed = True
    while changed:
        changed = False
        for b in list(blocks):
            splitter = frame.m_diamond(b)
            refined = []
            for blk in blocks:
                inside = blk & splitter
                outside = blk & ~splitter
                if inside and outside:
                    refined.extend((inside, outside))
                    changed = True
                else:
                    refined.append(blk)
            blocks = sorted(refined)
    if len(blocks) > max_blocks:
        raise GuardrailError(
            f"closure would contain 2^{len(blocks)} sets; "
            f"raise max_blocks to force")
    out = set()
    for code in range(1 << len(blocks)):
        m = 0
        for j, blk in enumerate(blocks):
            if (code >> j) & 1:
                m |= blk
        out.add(m)
    assert universe in out
    return tuple(sorted(out))


class GeneralFrame:
    """A Kripke frame plus an admissible family of world sets.

    `admissible` is a sorted tuple of masks, or None meaning the full
    powerset (kept lazy).  `closure_certified` is only set after the
    closure conditions have been machine-checked.
    """

    __slots__ = ("base", "admissible", "closure_certified", "_members")

    def __init__(self, base: KripkeFrame, admissible="full", certify: bool = False):
        self.base = base
        self._members = None
        if admissible == "full" or admissible is None:
            self.admissible = None
            self.closure_certified = True
            return
        fam = tuple(sorted(set(admissible)))
        if not fam:
            raise FrameFormatError("admissible family must be non-empty")
        if fam[0] < 0 or fam[-1] > base.universe:
            raise FrameFormatError("admissible sets must live in the frame's universe")
        self.admissible = fam
        self.closure_certified = False
        if certify:
            report = check_closure(base, fam)
            if not report.closed:
                raise FrameFormatError(
                    f"family is not closed: {report.witnesses}")
            self.closure_certified = True

    @classmethod
    def full(cls, base: KripkeFrame) -> "GeneralFrame":
        return cls(base, "full")

    @property
    def is_full(self) -> bool:
        return self.admissible is None

    @property
    def n(self) -> int:
        return self.base.n

    def family_size(self) -> int:
        return (1 << self.n) if self.is_full else len(self.admissible)

    def iter_family(self, max_worlds: int = MAX_POWERSET_WORLDS,
                    force: bool = False):
        """Stream the admissible sets; guards the powerset blowup."""
        if self.is_full:
            if self.n > max_worlds and not force:
                raise GuardrailError(
                    f"powerset over {self.n} worlds exceeds the guardrail "
                    f"of {max_worlds}; pass a larger limit to force")
            return iter(range(1 << self.n))
        return iter(self.admissible)

    def contains(self, x: int) -> bool:
        if self.is_full:
            return 0 <= x <= self.base.universe
        if self._members is None:
            self._members = frozenset(self.admissible)
        return x in self._members

    def check_closure(self) -> ClosureReport:
        if self.is_full:
            return ClosureReport(True, True)
        return check_closure(self.base, self.admissible)

    def certified(self) -> "GeneralFrame":
        """A closure-certified copy (raises if the family is not closed)."""
        if self.is_full:
            return self
        return GeneralFrame(self.base, self.admissible, certify=True)

    def generated_subframe(self, w) -> "GeneralFrame":
        keep = self.base.reachable(w)
        return self._restricted(keep)

    def _restricted(self, keep: int) -> "GeneralFrame":
        sub = self.base.restrict(keep)
        if self.is_full:
            return GeneralFrame.full(sub)
        keep_list = list(bits_of(keep))
        down = {old: new for new, old in enumerate(keep_list)}
        fam = set()
        for x in self.admissible:
            m = 0
            for i in bits_of(x & keep):
                m |= 1 << down[i]
            fam.add(m)
        return GeneralFrame(sub, fam)

    def __repr__(self) -> str:
        fam = "full" if self.is_full else f"{len(self.admissible)} sets"
        return f"GeneralFrame({self.base!r}, admissible={fam})"


def is_quantifiable_finite(frame: GeneralFrame) -> bool:
    """Whether the admissible family is closed under the semantics of every
    formula.  For a finite family this follows from Boolean and diamond
    closure: each quantifier clause is a finite union of family members,
    so closure under semantics follows by induction on formulas."""
    report = frame.check_closure()
    return report.closed


class Model:
    """A general frame with a valuation (finite partial map Var -> mask)."""

    __slots__ = ("frame", "valuation")

    def __init__(self, frame: GeneralFrame | KripkeFrame, valuation=None):
        if isinstance(frame, KripkeFrame):
            frame = GeneralFrame.full(frame)
        self.frame = frame
        val = dict(valuation or {})
        for v, x in val.items():
            if not frame.contains(x):
                raise EvaluationError(
                    f"valuation of {var_name(v)} is not an admissible set")
        self.valuation = val

    @property
    def base(self) -> KripkeFrame:
        return self.frame.base


def truncated_submodel(model: Model, w, depth: int) -> Model:
    """Restrict a model to the worlds reachable from w in at most `depth`
    steps: relation, admissible family and valuation all restricted."""
    base = model.base
    keep = base.reachable(w, depth)
    sub = model.frame._restricted(keep)
    keep_list = list(bits_of(keep))
    down = {old: new for new, old in enumerate(keep_list)}
    val = {}
    for v, x in model.valuation.items():
        m = 0
        for i in bits_of(x & keep):
            m |= 1 << down[i]
        val[v] = m
    return Model(sub, val)


# ---------------------------------------------------------------------------
# JSON frame format
#
# {"worlds": ["w0", ...],
#  "relation": [["w0", "w1"], ...],
#  "admissible": [["w0"], ["w0", "w1"], ...]}   -- or "full", or absent

def frame_to_obj(frame: GeneralFrame) -> dict:
    base = frame.base
    obj = {
        "worlds": list(base.names),
        "relation": [[base.names[i], base.names[j]] for i, j in base.edges()],
    }
    if frame.is_full:
        obj["admissible"] = "full"
    else:
        obj["admissible"] = [base.set_names(x) for x in frame.admissible]
    return obj


def frame_from_obj(obj: dict) -> GeneralFrame:
    try:
        worlds = obj["worlds"]
        relation = obj.get("relation", [])
    except (TypeError, KeyError) as exc:
        raise FrameFormatError(f"bad frame object: {exc}") from exc
    base = KripkeFrame(worlds, [tuple(pair) for pair in relation])
    admissible = obj.get("admissible", "full")
    if admissible == "full":
        return GeneralFrame.full(base)
    fam = [mask_of(base.index(nm) for nm in names) for names in admissible]
    return GeneralFrame(base, fam)


def frame_to_json(frame: GeneralFrame, indent: int | None = None) -> str:
    return json.dumps(frame_to_obj(frame), indent=indent, sort_keys=False)


def frame_from_json(text: str) -> GeneralFrame:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameFormatError(f"bad frame JSON: {exc}") from exc
    return frame_from_obj(obj)


def load_frame_file(path: str) -> GeneralFrame:
    with open(path, "r", encoding="utf-8") as handle:
        return frame_from_json(handle.read())


def frame_to_dot(frame: KripkeFrame | GeneralFrame, name: str = "frame") -> str:
    base = frame.base if isinstance(frame, GeneralFrame) else frame
    lines = [f"digraph {name} {{"]
    for nm in base.names:
        lines.append(f'  "{nm}";')
    for i, j in base.edges():
        lines.append(f'  "{base.names[i]}" -> "{base.names[j]}";')
    lines.append("}")
    return "\n".join(lines)
