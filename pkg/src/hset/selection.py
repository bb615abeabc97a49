# File: src/hset/selection.py

import logging
from dataclasses import dataclass, field

import numpy as np

from src.errors import AntipodalViolationError, BaseNotAntipodalError, VectorNotInSetError
from src.leech.engine import MinimalVectorSet, Shape, entries_in_range
from src.leech.stats import pair_scan
from src.utils.helpers import make_rng

logger = logging.getLogger(__name__)

RULES = ("canonical", "seeded", "explicit")


@dataclass(eq=False)
class HSelection:
    """
    One vector out of every antipodal pair of a base set.

    `choice[p]` is 0 when pair p contributes its lower-positioned member and 1
    when it contributes the negation; `realized` lists base positions in the
    selection's own vector order.
    """

    base: MinimalVectorSet
    choice: np.ndarray
    realized: np.ndarray
    label: str = ""

    def __len__(self) -> int:
        return int(self.realized.size)

    @property
    def vectors(self) -> np.ndarray:
        return self.base.vectors[self.realized]

    @property
    def shapes(self) -> np.ndarray:
        return self.base.shapes[self.realized]

    @property
    def dimension(self) -> int:
        return self.base.dimension


def antipodal_pairs(base: MinimalVectorSet) -> np.ndarray:
    """
    Canonical pair order: (p, q) with x_q = -x_p and p < q, ascending in p.

    Raises:
        BaseNotAntipodalError: If some -x is missing from the base.
    """
    neg = base.negation_positions()
    missing = np.flatnonzero(neg < 0)
    if missing.size:
        raise BaseNotAntipodalError(
            f"{base.label} is not closed under negation: -x missing for {missing.size} vectors (first at {missing[0]})")
    firsts = np.flatnonzero(np.arange(neg.size) < neg)
    return np.stack([firsts, neg[firsts]], axis=1)


def _lex_greater(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise a > b in lexicographic order."""
    diff = a.astype(np.int16) - b.astype(np.int16)
    first = np.argmax(diff != 0, axis=1)
    return diff[np.arange(diff.shape[0]), first] > 0


def make_hset(base: MinimalVectorSet, rule: str = "canonical", seed: int = None, bits=None) -> HSelection:
    """
    Picks one vector per antipodal pair of the base.

    Args:
        base (MinimalVectorSet): A set closed under negation (M_n).
        rule (str): 'canonical' takes the lexicographically larger vector,
            'seeded' draws each pick from the seeded generator, 'explicit' uses `bits`.
        seed (int): Seed for the 'seeded' rule.
        bits: One 0/1 pick per pair for the 'explicit' rule.

    Returns:
        HSelection: Vectors in ascending base order.
    """
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}, got {rule!r}")
    pairs = antipodal_pairs(base)
    if rule == "canonical":
        choice = _lex_greater(base.vectors[pairs[:, 1]], base.vectors[pairs[:, 0]]).astype(np.uint8)
        label = f"H_{base.dimension}[canonical]"
    elif rule == "seeded":
        if seed is None:
            raise ValueError("the seeded rule needs a seed")
        choice = make_rng(seed).integers(0, 2, size=pairs.shape[0]).astype(np.uint8)
        label = f"H_{base.dimension}[seed:{seed}]"
    else:
        choice = np.asarray(bits, dtype=np.uint8)
        if choice.shape != (pairs.shape[0],) or np.any(choice > 1):
            raise ValueError(f"explicit rule needs {pairs.shape[0]} bits")
        label = f"H_{base.dimension}[explicit]"
    realized = np.sort(pairs[np.arange(pairs.shape[0]), choice])
    logger.info("Selected %s: %d of %d vectors", label, realized.size, len(base))
    return HSelection(base=base, choice=choice, realized=realized, label=label)


def selection_from_vectors(vectors, base: MinimalVectorSet, label: str = "H[explicit]") -> HSelection:
    """
    HSelection from an explicit vector list, keeping the list's order.

    Raises:
        VectorNotInSetError: A vector is not in the base.
        AntipodalViolationError: A pair is hit twice or not at all.
    """
    vectors = np.asarray(vectors)
    in_range = entries_in_range(vectors)
    if not np.all(in_range):
        i = int(np.flatnonzero(~in_range)[0])
        raise VectorNotInSetError(f"vector {i} {tuple(int(v) for v in vectors[i])} is not in {base.label}")
    vectors = vectors.astype(np.int8)
    index = base.index
    realized = np.empty(vectors.shape[0], dtype=np.int64)
    for i, row in enumerate(vectors):
        pos = index.get(row.tobytes())
        if pos is None:
            raise VectorNotInSetError(f"vector {i} {tuple(int(v) for v in row)} is not in {base.label}")
        realized[i] = pos
    pairs = antipodal_pairs(base)
    pair_of = np.empty(len(base), dtype=np.int64)
    pair_of[pairs[:, 0]] = np.arange(pairs.shape[0])
    pair_of[pairs[:, 1]] = np.arange(pairs.shape[0])
    hits = np.bincount(pair_of[realized], minlength=pairs.shape[0])
    if np.any(hits > 1):
        p = int(np.flatnonzero(hits > 1)[0])
        raise AntipodalViolationError(f"pair {p} of {base.label} is hit {hits[p]} times (x and -x both present or repeated)")
    if np.any(hits == 0):
        raise AntipodalViolationError(f"{int((hits == 0).sum())} antipodal pairs of {base.label} have no member")
    choice = (pairs[pair_of[realized], 1] == realized).astype(np.uint8)
    ordered = np.empty(pairs.shape[0], dtype=np.uint8)
    ordered[pair_of[realized]] = choice
    return HSelection(base=base, choice=ordered, realized=realized, label=label)


@dataclass
class HSetReport:
    size: int
    expected_size: int
    both_members: int
    missing_pairs: int
    repeated: int
    shape_counts: dict
    ip_support: dict = field(default_factory=dict)
    diameter_squared: int = None

    @property
    def pair_complete(self) -> bool:
        return self.both_members == 0 and self.missing_pairs == 0 and self.repeated == 0

    @property
    def valid(self) -> bool:
        if not self.pair_complete:
            return False
        if self.ip_support and (32 in self.ip_support or -32 in self.ip_support):
            return False
        return True

    @property
    def failures(self) -> list:
        out = []
        if self.both_members:
            out.append(f"antipodal-violation: {self.both_members} pairs have both x and -x")
        if self.missing_pairs:
            out.append(f"antipodal-violation: {self.missing_pairs} pairs have no member")
        if self.repeated:
            out.append(f"duplicate vectors: {self.repeated}")
        if self.ip_support and -32 in self.ip_support:
            out.append("inner product -32 present")
        return out


def validate_hset(h: HSelection, scan_pairs: bool = True) -> HSetReport:
    """
    Checks an H-selection: pair completeness, inner-product support,
    diameter and shape counts. Failures go into the report.

    Args:
        h (HSelection): Selection to check; `realized` may be arbitrary.
        scan_pairs (bool): Run the O(N^2) inner-product scan.

    Returns:
        HSetReport: The findings.
    """
    base = h.base
    neg = base.negation_positions()
    total_pairs = int((neg >= 0).sum() // 2)
    present = np.zeros(len(base), dtype=bool)
    present[h.realized] = True
    repeated = int(h.realized.size - np.unique(h.realized).size)
    lower = np.flatnonzero((neg >= 0) & (np.arange(neg.size) < neg))
    both = int((present[lower] & present[neg[lower]]).sum())
    missing = int((~present[lower] & ~present[neg[lower]]).sum())
    counts = np.bincount(h.shapes, minlength=len(Shape))
    report = HSetReport(size=len(h), expected_size=total_pairs, both_members=both, missing_pairs=missing,
                        repeated=repeated, shape_counts={s: int(counts[s]) for s in Shape})
    if scan_pairs and len(h) > 1:
        scan = pair_scan(h.vectors)
        report.ip_support = scan.support
        report.diameter_squared = scan.diameter_squared
    logger.info("Validated %s: %d vectors, pair-complete=%s", h.label, len(h), report.pair_complete)
    return report
