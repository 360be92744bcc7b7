"""Rebuild a candidate exchange from an accepted word and check it.

Lengths come from letter frequencies (exact rationals), the interval
order from adjacency constraints read off special factors: a
right-special factor's two extensions are the two intervals meeting at
a domain discontinuity, so they must sit side by side; left-special
factors force the same in the image.  Flips are taken where the
accepted labeling carries minus marks.  The initial point is pinned by
walking the word's longest admissible prefix through the candidate's
cylinder tree and taking a midpoint.

Nothing irrational survives a finite sample, so the candidate is
rational by construction and judged by how far its exact cylinder
measures sit from the empirical ones (residual) and how long its
regenerated coding tracks the input (verify_roundtrip).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .exact import Interval, ZERO, ONE, rational
from .iet import (
    CodingConfig,
    IETSpec,
    _advance_pieces,
    _merge_intervals,
    _piece_source,
    _restrict_pieces,
    build_iet,
    natural_coding,
)
from .rauzy import EvolutionReport
from .words import FactorSet, special_factors

__all__ = ["AdjacencyError", "EmpiricalMeasure", "cylinder_measures",
           "reconstruct_iet", "verify_roundtrip"]


class AdjacencyError(ValueError):
    """No letter order makes every constrained pair adjacent."""

    def __init__(self, side: str, pairs):
        self.side = side
        self.pairs = frozenset(pairs)
        listing = ", ".join(sorted("{%s}" % ",".join(sorted(p)) for p in pairs))
        super().__init__(f"no {side} order keeps {listing} adjacent")


@dataclass(frozen=True)
class EmpiricalMeasure:
    depth: int
    weights: dict  # factor -> Fraction, all lengths 1..depth

    def level(self, n: int) -> dict:
        return {w: f for w, f in self.weights.items() if len(w) == n}


def cylinder_measures(word: str, depth: int) -> EmpiricalMeasure:
    """Sliding-window factor frequencies, exact over the prefix."""
    if depth < 1:
        raise ValueError("depth must be positive")
    if len(word) < 100 * depth:
        raise ValueError(
            f"need at least {100 * depth} symbols for depth {depth}, "
            f"got {len(word)}")
    fs = FactorSet(word, depth)
    weights = {}
    for n in range(1, depth + 1):
        windows = len(word) - n + 1
        for w, c in fs.counts(n).items():
            weights[w] = Fraction(c, windows)
    return EmpiricalMeasure(depth, weights)


def _arrangement(letters, pairs):
    """Lexicographically first order of letters making each pair adjacent."""
    for cand in permutations(letters):
        ok = True
        for p in pairs:
            a, b = sorted(p)
            if abs(cand.index(a) - cand.index(b)) != 1:
                ok = False
                break
        if ok:
            return cand
    return None


def _irreducible(perm) -> bool:
    return all(set(perm[:j]) != set(range(1, j + 1)) for j in range(1, len(perm)))


def reconstruct_iet(word: str, report: EvolutionReport, depth: int):
    """Candidate exchange and its measure residual, from an accepted word."""
    if not report.accepted:
        raise ValueError("reconstruction needs an accepted validator report")
    em = cylinder_measures(word, depth)
    letters = sorted(set(word))
    k = len(letters)
    if k > 6:
        raise ValueError(f"alphabet of size {k} is too large")
    fs = FactorSet(word, depth)
    dom_pairs = set()
    img_pairs = set()
    for n in range(1, depth):
        for _, exts, valence in special_factors(fs, n, "right"):
            if valence == 2:
                dom_pairs.add(frozenset(exts))
        for _, exts, valence in special_factors(fs, n, "left"):
            if valence == 2:
                img_pairs.add(frozenset(exts))
    dom = _arrangement(letters, dom_pairs)
    if dom is None:
        raise AdjacencyError("domain", dom_pairs)
    img = None
    fallback = None
    for cand in permutations(letters):
        if any(abs(cand.index(min(p)) - cand.index(max(p))) != 1 for p in img_pairs):
            continue
        if fallback is None:
            fallback = cand
        if _irreducible(tuple(dom.index(c) + 1 for c in cand)):
            img = cand
            break
    if img is None:
        img = fallback
    if img is None:
        raise AdjacencyError("image", img_pairs)
    perm = [dom.index(c) + 1 for c in img]
    marked_letters = {w[0] for ms in (report.marks or {}).values() for w in ms}
    flips = [c in marked_letters for c in dom]
    lengths = [rational(em.weights[c].numerator, em.weights[c].denominator)
               for c in dom]
    T = build_iet(lengths, perm, flips)
    residual = _measure_residual(T, em, dom)
    return T, residual


def _as_fraction(x) -> Fraction:
    if x.coef:
        raise ValueError("expected a rational scalar")
    return x.rat


def _candidate_levels(T: IETSpec, depth: int, dom):
    """Exact cylinder measures of the candidate, keyed by word letters."""
    config = CodingConfig.natural(T)
    levels = {}
    state = [("", [(Interval(ZERO, ONE), 1, ZERO)])]
    for n in range(1, depth + 1):
        out = {}
        nxt = []
        for w, pieces in state:
            for i in range(1, T.k + 1):
                hit = _restrict_pieces(config, str(i), pieces)
                if not hit:
                    continue
                total = Fraction(0)
                for img, _, _ in hit:
                    total += _as_fraction(img.hi - img.lo)
                label = w + dom[i - 1]
                out[label] = total
                nxt.append((label, _advance_pieces(T, hit)))
        levels[n] = out
        state = nxt
    return levels


def _measure_residual(T: IETSpec, em: EmpiricalMeasure, dom) -> Fraction:
    cand = _candidate_levels(T, em.depth, dom)
    worst = Fraction(0)
    for n in range(1, em.depth + 1):
        emp = em.level(n)
        diff = Fraction(0)
        for w in set(emp) | set(cand[n]):
            diff += abs(emp.get(w, Fraction(0)) - cand[n].get(w, Fraction(0)))
        worst = max(worst, diff / 2)
    return worst


def _prefix_pieces(T: IETSpec, config: CodingConfig, coded: str):
    """Walk the cylinder tree along coded; stop at the last nonempty level."""
    pieces = [(Interval(ZERO, ONE), 1, ZERO)]
    depth = 0
    best = None
    for letter in coded:
        if letter not in config.sets:
            break
        hit = _restrict_pieces(config, letter, pieces)
        if not hit:
            break
        depth += 1
        best = hit
        pieces = _advance_pieces(T, hit)
    if best is None:
        return 0, ()
    return depth, _merge_intervals([_piece_source(p) for p in best])


def verify_roundtrip(word: str, candidate: IETSpec, n: int):
    """Regenerate a coding from the candidate; longest common prefix."""
    if n > len(word):
        raise ValueError(f"asked for {n} symbols, word has {len(word)}")
    letters = sorted(set(word))
    to_candidate = {c: str(i + 1) for i, c in enumerate(letters)}
    from_candidate = {v: c for c, v in to_candidate.items()}
    coded = "".join(to_candidate[c] for c in word[:n])
    config = CodingConfig.natural(candidate)
    depth, intervals = _prefix_pieces(candidate, config, coded)
    if depth == 0:
        raise ValueError("empty cylinder: candidate rejects the first letter")
    widest = intervals[0]
    for iv in intervals[1:]:
        if ((iv.hi - iv.lo) - (widest.hi - widest.lo)).sign() > 0:
            widest = iv
    x0 = widest.lo + (widest.hi - widest.lo) * Fraction(1, 2)
    regen = natural_coding(candidate, x0, n)
    match = 0
    for c_in, c_out in zip(word[:n], regen):
        if from_candidate.get(c_out) != c_in:
            break
        match += 1
    return match, n
