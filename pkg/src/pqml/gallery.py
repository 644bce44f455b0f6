"""Frame gallery: the recurring concrete shapes, built deterministically,
plus the finite shift-isomorphism check on recession windows.

Infinite structures appear only as finite windows and say so in their
caveat notes; no output pretends to reproduce a result that needs the
infinite original.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FrameFormatError, GuardrailError
from .frames import GeneralFrame, KripkeFrame, Model, truncated_submodel
from .semantics import holds_at
from .syntax import Formula


@dataclass(frozen=True)
class GalleryEntry:
    id: str
    params: tuple
    frame: GeneralFrame
    provenance: str
    caveat: str = ""

    @property
    def base(self) -> KripkeFrame:
        return self.frame.base


def cyclic(n: int) -> GalleryEntry:
    if n < 1:
        raise FrameFormatError("cyclic needs at least one world")
    names = [str(i) for i in range(n)]
    edges = [(i, (i + 1) % n) for i in range(n)]
    return GalleryEntry(
        f"cyclic:{n}", (n,), GeneralFrame.full(KripkeFrame(names, edges)),
        "directed cycle: highly symmetric, yet swapping any two worlds "
        "alone breaks an edge, so no two distinct worlds are duplicates")


def clique(n: int) -> GalleryEntry:
    if n < 1:
        raise FrameFormatError("clique needs at least one world")
    names = [str(i) for i in range(n)]
    edges = [(i, j) for i in range(n) for j in range(n)]
    return GalleryEntry(
        f"clique:{n}", (n,), GeneralFrame.full(KripkeFrame(names, edges)),
        "universally connected clique: every transposition is an "
        "automorphism, one duplicate class")


def identity(n: int) -> GalleryEntry:
    if n < 1:
        raise FrameFormatError("identity needs at least one world")
    names = [str(i) for i in range(n)]
    edges = [(i, i) for i in range(n)]
    return GalleryEntry(
        f"identity:{n}", (n,), GeneralFrame.full(KripkeFrame(names, edges)),
        "identity relation: one duplicate class of local kind identity "
        "(for two or more worlds)")


def chain(n: int) -> GalleryEntry:
    if n < 1:
        raise FrameFormatError("chain needs at least one world")
    names = [str(i) for i in range(n)]
    edges = [(i, i + 1) for i in range(n - 1)]
    return GalleryEntry(
        f"chain:{n}", (n,), GeneralFrame.full(KripkeFrame(names, edges)),
        "irreflexive chain 0 -> 1 -> ... -> n-1")


def d45_point(k: int) -> GalleryEntry:
    """A root looking at a clique (the root is not in the clique), and the
    clique fully connected: the serial, transitive, Euclidean
    point-generated shape.  Two duplicate classes: the root and the
    clique."""
    if k < 1:
        raise FrameFormatError("d45_point needs a non-empty clique")
    names = ["r"] + [f"c{i}" for i in range(k)]
    edges = [(0, j) for j in range(1, k + 1)]
    edges += [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]
    return GalleryEntry(
        f"d45:{k}", (k,), GeneralFrame.full(KripkeFrame(names, edges)),
        "point looking at a clique: serial, transitive and Euclidean; "
        "exactly two duplicate classes (root, clique)")


def k5_frame(u: int, rest: int) -> GalleryEntry:
    """Root sees a non-empty part U of a clique W; W is fully connected.
    The generic point-generated Euclidean shape.  Duplicate classes:
    the root, U, and W minus U."""
    if u < 1:
        raise FrameFormatError("k5_frame needs non-empty U")
    if rest < 0:
        raise FrameFormatError("k5_frame needs a non-negative remainder")
    names = ["r"] + [f"u{i}" for i in range(u)] + [f"v{i}" for i in range(rest)]
    w = u + rest
    edges = [(0, j) for j in range(1, u + 1)]  # root sees U only
    edges += [(i, j) for i in range(1, w + 1) for j in range(1, w + 1)]
    return GalleryEntry(
        f"k5:{u},{rest}", (u, rest), GeneralFrame.full(KripkeFrame(names, edges)),
        "root seeing a non-empty part of a clique: the generic "
        "point-generated Euclidean shape; duplicate classes are the root, "
        "the seen part and the unseen part")


def div4_frame(b: int, a: int, c_extra: int) -> GalleryEntry:
    """Root sees B and A; everything in B and C sees all of C, where A is
    the reflexive part of C.  At most four duplicate classes: root, B, A,
    C minus A."""
    if a < 1:
        raise FrameFormatError("div4_frame needs non-empty A")
    if b < 0 or c_extra < 0:
        raise FrameFormatError("div4_frame sizes must be non-negative")
    names = (["r"] + [f"b{i}" for i in range(b)]
             + [f"a{i}" for i in range(a)] + [f"c{i}" for i in range(c_extra)])
    b_ix = list(range(1, 1 + b))
    a_ix = list(range(1 + b, 1 + b + a))
    c_ix = a_ix + list(range(1 + b + a, 1 + b + a + c_extra))
    edges = [(0, j) for j in b_ix + a_ix]
    edges += [(i, j) for i in b_ix + c_ix for j in c_ix]
    return GalleryEntry(
        f"div4:{b},{a},{c_extra}", (b, a, c_extra),
        GeneralFrame.full(KripkeFrame(names, edges)),
        "diversity-four shape: root sees B and the reflexive part A of a "
        "final cluster C; B and C see all of C")


def euclid_window(n: int) -> GalleryEntry:
    """Worlds 0..n plus an extra world w; the numbers form a clique and w
    sees the even numbers.  Finite window of the infinite frame over all
    naturals; here the admissible family is the full powerset."""
    if n < 0:
        raise FrameFormatError("euclid_window needs n >= 0")
    names = [str(i) for i in range(n + 1)] + ["w"]
    edges = [(i, j) for i in range(n + 1) for j in range(n + 1)]
    extra = n + 1
    edges += [(extra, j) for j in range(0, n + 1, 2)]
    return GalleryEntry(
        f"euclid:{n}", (n,), GeneralFrame.full(KripkeFrame(names, edges)),
        "a world seeing the even members of a clique of naturals",
        caveat="finite window 0..n with the full powerset; the infinite "
               "original carries the finite/cofinite family, which no "
               "finite frame reproduces")


def recession_window(lo: int, hi: int) -> GalleryEntry:
    """Integer window lo..hi with x -> y iff y >= x-1.  Finite window of
    the recession frame over all integers."""
    if lo > hi:
        raise FrameFormatError("recession_window needs lo <= hi")
    ints = list(range(lo, hi + 1))
    names = [str(i) for i in ints]
    edges = [(i - lo, j - lo) for i in ints for j in ints if j >= i - 1]
    return GalleryEntry(
        f"recession:{lo},{hi}", (lo, hi),
        GeneralFrame.full(KripkeFrame(names, edges)),
        "window of the recession relation on the integers "
        "(x sees y iff y >= x-1)",
        caveat="finite window; the infinite original carries the "
               "eventually-settled family and its boundary worlds have "
               "no counterpart here")


_CONSTRUCTORS = {
    "cyclic": (cyclic, 1),
    "clique": (clique, 1),
    "identity": (identity, 1),
    "chain": (chain, 1),
    "d45": (d45_point, 1),
    "k5": (k5_frame, 2),
    "div4": (div4_frame, 3),
    "euclid": (euclid_window, 1),
    "recession": (recession_window, 2),
}


def resolve(spec: str) -> GalleryEntry:
    """Build a gallery entry from an id such as "cyclic:5" or "k5:1,2"."""
    name, _, argtext = spec.partition(":")
    name = name.strip().lower()
    if name not in _CONSTRUCTORS:
        raise FrameFormatError(
            f"unknown gallery frame {name!r}; known: "
            + ", ".join(sorted(_CONSTRUCTORS)))
    builder, arity = _CONSTRUCTORS[name]
    if not argtext:
        raise FrameFormatError(f"gallery frame {name!r} needs {arity} "
                               f"integer parameter(s), e.g. {name}:3")
    try:
        args = [int(a) for a in argtext.split(",")]
    except ValueError:
        raise FrameFormatError(f"bad parameters {argtext!r} for {name!r}") \
            from None
    if len(args) != arity:
        raise FrameFormatError(
            f"gallery frame {name!r} needs {arity} parameter(s), "
            f"got {len(args)}")
    return builder(*args)


def catalog() -> list[GalleryEntry]:
    """Representative instances of every constructor."""
    return [
        cyclic(3), cyclic(5), clique(2), clique(4), identity(3), chain(3),
        d45_point(3), k5_frame(1, 2), div4_frame(1, 1, 1), euclid_window(6),
        recession_window(-4, 4),
    ]


# ---------------------------------------------------------------------------
# Shift isomorphism on recession windows

@dataclass(frozen=True)
class ShiftCheck:
    """Outcome of one shift comparison.  `full_agree` is only meaningful
    when the truncation depth covers the formula's modal depth; it is None
    otherwise."""

    isomorphic: bool
    truncated_agree: bool
    full_agree: bool | None
    holds_at_n: bool

    @property
    def passed(self) -> bool:
        return self.isomorphic and self.truncated_agree \
            and self.full_agree is not False


def _window_frame(lo: int, hi: int) -> GeneralFrame:
    key = (lo, hi)
    hit = _WINDOW_CACHE.get(key)
    if hit is None:
        hit = _WINDOW_CACHE[key] = recession_window(lo, hi).frame
    return hit


_WINDOW_CACHE: dict[tuple[int, int], GeneralFrame] = {}


def _shift_models(lo: int, hi: int, n: int, m: int, d: int,
                  valuation: dict[int, set[int]]):
    delta = m - n
    if not (lo <= n <= hi and lo <= m <= hi):
        raise GuardrailError(f"points {n}, {m} outside window [{lo}, {hi}]")
    if n - d < lo:
        raise GuardrailError(
            f"window too small: depth-{d} truncation from {n} clips at "
            f"the boundary {lo}")
    frame1 = _window_frame(lo, hi)
    frame2 = _window_frame(lo + delta, hi + delta)
    val1 = {v: _mask_of_ints(frame1.base, xs) for v, xs in valuation.items()}
    val2 = {v: _mask_of_ints(frame2.base, [x + delta for x in xs])
            for v, xs in valuation.items()}
    model1 = Model(frame1, val1)
    model2 = Model(frame2, val2)
    trunc1 = truncated_submodel(model1, str(n), d)
    trunc2 = truncated_submodel(model2, str(m), d)
    return model1, model2, trunc1, trunc2, _shift_isomorphic(trunc1, trunc2, delta)


def shift_isomorphism_check(lo: int, hi: int, n: int, m: int, d: int,
                            phi: Formula, valuation: dict[int, set[int]],
                            **kw) -> ShiftCheck:
    """Check the shift argument at finite scale: the depth-d truncation at
    n inside the window (lo, hi) must be isomorphic, via adding m-n, to
    the depth-d truncation at m inside the shifted window, with the
    valuation shifted alongside; and the formula's truth must transfer.

    The valuation maps variables to explicit sets of window integers.
    Raises when the truncation would clip at the left boundary (window
    too small for this depth).
    """
    model1, model2, trunc1, trunc2, isomorphic = _shift_models(
        lo, hi, n, m, d, valuation)
    at_n = holds_at(phi, trunc1, str(n), **kw)
    at_m = holds_at(phi, trunc2, str(m), **kw)
    truncated_agree = at_n == at_m
    full_agree = None
    if d >= phi.md:
        full_agree = (holds_at(phi, model1, str(n), **kw)
                      == holds_at(phi, model2, str(m), **kw))
    return ShiftCheck(isomorphic, truncated_agree, full_agree, at_n)


def shift_isomorphism_sweep(lo: int, hi: int, max_d: int, formulas,
                            valuation: dict[int, set[int]]) -> tuple[int, list]:
    """Run the shift check for every depth up to max_d, every interior
    pair of points, and every formula; models are shared across the
    formula corpus.  Returns (number of checks, list of failures)."""
    from .semantics import Evaluator

    formulas = list(formulas)
    checks = 0
    failures = []
    for d in range(max_d + 1):
        for n in range(lo + d, hi + 1):
            for m in range(lo + d, hi + 1):
                model1, model2, trunc1, trunc2, iso = _shift_models(
                    lo, hi, n, m, d, valuation)
                if not iso:
                    failures.append((d, n, m, None, "not isomorphic"))
                ev1 = Evaluator(trunc1.frame)
                ev2 = Evaluator(trunc2.frame)
                bit1 = 1 << trunc1.base.index(str(n))
                bit2 = 1 << trunc2.base.index(str(m))
                for phi in formulas:
                    checks += 1
                    t1 = bool(ev1.extension(phi, trunc1.valuation) & bit1)
                    t2 = bool(ev2.extension(phi, trunc2.valuation) & bit2)
                    if t1 != t2:
                        failures.append((d, n, m, phi, "truth differs"))
    return checks, failures


def _mask_of_ints(base: KripkeFrame, xs) -> int:
    mask = 0
    for x in xs:
        mask |= 1 << base.index(str(x))
    return mask


def _shift_isomorphic(model1: Model, model2: Model, delta: int) -> bool:
    ints1 = sorted(int(nm) for nm in model1.base.names)
    ints2 = sorted(int(nm) for nm in model2.base.names)
    if [x + delta for x in ints1] != ints2:
        return False
    edges1 = sorted((int(model1.base.names[i]) + delta,
                     int(model1.base.names[j]) + delta)
                    for i, j in model1.base.edges())
    edges2 = sorted((int(model2.base.names[i]), int(model2.base.names[j]))
                    for i, j in model2.base.edges())
    if edges1 != edges2:
        return False
    if model1.frame.is_full != model2.frame.is_full:
        return False
    if not model1.frame.is_full:
        fam1 = {tuple(sorted(int(nm) + delta
                             for nm in model1.base.set_names(x)))
                for x in model1.frame.admissible}
        fam2 = {tuple(sorted(int(nm) for nm in model2.base.set_names(x)))
                for x in model2.frame.admissible}
        if fam1 != fam2:
            return False
    if sorted(model1.valuation) != sorted(model2.valuation):
        return False
    for v in model1.valuation:
        xs1 = sorted(int(nm) + delta
                     for nm in model1.base.set_names(model1.valuation[v]))
        xs2 = sorted(int(nm)
                     for nm in model2.base.set_names(model2.valuation[v]))
        if xs1 != xs2:
            return False
    return True
