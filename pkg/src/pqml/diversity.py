"""Duplicate worlds, duplicate classes, diversity, and the quotient view.

Two worlds are duplicates when swapping them (and fixing everything else)
is an automorphism of the frame.  This is an equivalence; its classes
interact with the relation rigidly: between two distinct classes either
all cross pairs are related or none, and inside a class the relation is
one of exactly four shapes.  That rigidity is what the quotient-based
diamond computation and the breakdown module exploit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InternalInvariantError
from .frames import KripkeFrame, bits_of, popcount


class LocalKind(Enum):
    """Shape of the relation restricted to one duplicate class."""
    FULL = "full"            # D x D
    EMPTY = "empty"          # no edges
    COIDENTITY = "coidentity"  # everything but the loops (|D| >= 2)
    IDENTITY = "identity"      # exactly the loops (|D| >= 2)


def are_duplicates(frame: KripkeFrame, w, u) -> bool:
    """Whether exchanging w and u is an automorphism.  A world is a
    duplicate of itself."""
    i = frame.index(w)
    j = frame.index(u)
    if i == j:
        return True
    rel = frame.rel
    bi, bj = 1 << i, 1 << j
    swap_mask = bi | bj
    # rows of all other worlds must treat i and j identically
    for a in range(frame.n):
        if a == i or a == j:
            continue
        row = rel[a]
        if bool(row & bi) != bool(row & bj):
            return False
    # swapped row of i must equal row of j
    row_i = rel[i]
    row_j = rel[j]
    swapped = row_i & ~swap_mask
    if row_i & bi:
        swapped |= bj
    if row_i & bj:
        swapped |= bi
    return swapped == row_j


@dataclass(frozen=True)
class DuplicateStructure:
    """Partition of the worlds into duplicate classes plus the quotient.

    classes: masks ordered by least member; class_of: world -> class index;
    quotient_rel: per class, the bitmask of successor classes (all-or-
    nothing across distinct classes, and a class sees itself iff its local
    relation is non-empty)."""

    classes: tuple[int, ...]
    class_of: tuple[int, ...]
    local_kind: tuple[LocalKind, ...]
    quotient_rel: tuple[int, ...]

    @property
    def diversity(self) -> int:
        return len(self.classes)


def _local_kind(frame: KripkeFrame, d_mask: int) -> LocalKind:
    members = list(bits_of(d_mask))
    if len(members) == 1:
        w = members[0]
        return LocalKind.FULL if frame.rel[w] & (1 << w) else LocalKind.EMPTY
    full = all(frame.rel[w] & d_mask == d_mask for w in members)
    if full:
        return LocalKind.FULL
    empty = all(frame.rel[w] & d_mask == 0 for w in members)
    if empty:
        return LocalKind.EMPTY
    coid = all(frame.rel[w] & d_mask == d_mask & ~(1 << w) for w in members)
    if coid:
        return LocalKind.COIDENTITY
    ident = all(frame.rel[w] & d_mask == (1 << w) for w in members)
    if ident:
        return LocalKind.IDENTITY
    raise InternalInvariantError(
        "relation restricted to a duplicate class is none of the four "
        "possible shapes; are_duplicates is broken")


def duplicate_structure(frame: KripkeFrame) -> DuplicateStructure:
    reps: list[int] = []       # representative world per class
    members: list[int] = []    # class masks
    class_of = [0] * frame.n
    for w in range(frame.n):
        for idx, rep in enumerate(reps):
            if are_duplicates(frame, rep, w):
                members[idx] |= 1 << w
                class_of[w] = idx
                break
        else:
            reps.append(w)
            members.append(1 << w)
            class_of[w] = len(reps) - 1

    kinds = [_local_kind(frame, m) for m in members]

    k = len(members)
    quotient = [0] * k
    for i in range(k):
        if kinds[i] is not LocalKind.EMPTY:
            quotient[i] |= 1 << i
        for j in range(k):
            if i == j:
                continue
            related = bool(frame.rel[reps[i]] & members[j])
            # all-or-nothing across distinct classes, verified
            for w in bits_of(members[i]):
                row = frame.rel[w] & members[j]
                if related and row != members[j] or not related and row:
                    raise InternalInvariantError(
                        "cross-class relation is not all-or-nothing; "
                        "are_duplicates is broken")
            if related:
                quotient[i] |= 1 << j
    return DuplicateStructure(tuple(members), tuple(class_of),
                              tuple(kinds), tuple(quotient))


def diversity(frame: KripkeFrame) -> int:
    """Number of duplicate classes."""
    return duplicate_structure(frame).diversity


def diversity_generated(frame: KripkeFrame) -> int:
    """Largest diversity among the point-generated subframes."""
    best = 0
    seen: set[int] = set()
    for w in range(frame.n):
        keep = frame.reachable(w)
        if keep in seen:
            continue
        seen.add(keep)
        best = max(best, diversity(frame.restrict(keep)))
    return best


def m_diamond_quotient(ds: DuplicateStructure, frame: KripkeFrame,
                       x: int) -> int:
    """Diamond preimage computed class-by-class from the quotient data;
    must coincide with the direct definition."""
    out = 0
    for i, d_mask in enumerate(ds.classes):
        kind = ds.local_kind[i]
        if kind in (LocalKind.FULL, LocalKind.EMPTY):
            triggered = any(x & ds.classes[j] for j in bits_of(ds.quotient_rel[i]))
            if triggered:
                out |= d_mask
            continue
        external = any(j != i and x & ds.classes[j]
                       for j in bits_of(ds.quotient_rel[i]))
        if external:
            out |= d_mask
        elif kind is LocalKind.COIDENTITY:
            inside = popcount(x & d_mask)
            if inside >= 2:
                out |= d_mask
            elif inside == 1:
                out |= d_mask & ~x
            # inside == 0: nothing
        else:  # IDENTITY
            out |= x & d_mask
    return out


def quotient_to_dot(ds: DuplicateStructure, frame: KripkeFrame,
                    name: str = "quotient") -> str:
    """DOT view of the quotient: classes as nodes labeled with their
    members and local kind, quotient relation as edges."""
    lines = [f"digraph {name} {{"]
    for i, d_mask in enumerate(ds.classes):
        label = "{" + ",".join(frame.set_names(d_mask)) + "} " \
            + ds.local_kind[i].value
        lines.append(f'  D{i} [label="{label}"];')
    for i in range(len(ds.classes)):
        for j in bits_of(ds.quotient_rel[i]):
            lines.append(f"  D{i} -> D{j};")
    lines.append("}")
    return "\n".join(lines)
