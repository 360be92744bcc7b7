"""Interval exchange transformations with exact arithmetic.

Conventions, fixed once for the whole package:

* The domain is [0,1); every interval is half-open [a, b).
* ``permutation`` lists, slot by slot, which source interval occupies
  each image slot: sigma[j] = i means the j-th interval of the image
  (counted from 0) is the image of X_i.  Indices are 1-based to match
  the usual lambda_1..lambda_k notation.
* A flipped interval is reflected onto its image slot.  Interior points
  map by x -> refl_i - x; the owned left endpoint maps to the left
  endpoint of the image slot, which keeps T a bijection of [0,1).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

from .exact import ExactScalar, Interval, ONE, ZERO, as_scalar, compare

__all__ = [
    "BoundaryHit",
    "CodingConfig",
    "DomainError",
    "IETSpec",
    "RegularityReport",
    "apply",
    "apply_inverse",
    "build_iet",
    "check_idoc",
    "check_regular",
    "coding_with_sets",
    "cylinder",
    "displacement",
    "essential_codings",
    "mechanical_word",
    "natural_coding",
    "orbit",
]

DEFAULT_LETTERS = "123456789"


class DomainError(ValueError):
    """Point outside [0,1)."""


class BoundaryHit(Exception):
    """Orbit point landed on a characteristic-set boundary in strict mode."""

    def __init__(self, step: int, point: ExactScalar):
        super().__init__(f"orbit hits a set boundary at step {step} (x = {point})")
        self.step = step
        self.point = point


class IETSpec:
    """Immutable exchange of k intervals, all derived data precomputed."""

    def __init__(self, lengths, permutation, flips=None):
        lengths = tuple(self._coerce(x) for x in lengths)
        k = len(lengths)
        if k < 1:
            raise ValueError("need at least one interval")
        permutation = tuple(int(p) for p in permutation)
        if sorted(permutation) != list(range(1, k + 1)):
            raise ValueError(f"permutation {permutation} is not a bijection of 1..{k}")
        if flips is None:
            flips = (False,) * k
        flips = tuple(bool(f) for f in flips)
        if len(flips) != k:
            raise ValueError("flips length does not match lengths")
        for lam in lengths:
            if lam.sign() <= 0:
                raise ValueError(f"non-positive interval length {lam}")
        total = ZERO
        for lam in lengths:
            total = total + lam
        if total != ONE:
            raise ValueError(f"interval lengths sum to {total}, not 1")

        self.lengths = lengths
        self.permutation = permutation
        self.flips = flips
        self.k = k

        # left[i] = a_{i+1}: source endpoints a_1=0 .. a_{k+1}=1
        left = [ZERO]
        for lam in lengths:
            left.append(left[-1] + lam)
        self.left = tuple(left)

        inv = [0] * (k + 1)
        for slot, i in enumerate(permutation, start=1):
            inv[i] = slot
        self.slot_of = tuple(inv)  # slot_of[i] = image slot of X_i, 1-based

        # slot_start[j] = left endpoint of image slot j+1
        starts = [ZERO]
        for i in permutation:
            starts.append(starts[-1] + lengths[i - 1])
        self.slot_start = tuple(starts)

        self.dest_lo = tuple(self.slot_start[self.slot_of[i] - 1] for i in range(1, k + 1))
        self.disp = tuple(self.dest_lo[i - 1] - self.left[i - 1] for i in range(1, k + 1))
        # reflection point: flipped branch sends interior x to refl - x
        self.refl = tuple(self.dest_lo[i - 1] + self.left[i] for i in range(1, k + 1))

    @staticmethod
    def _coerce(x) -> ExactScalar:
        s = as_scalar(x)
        if s is None:
            raise TypeError(f"not an exact scalar: {x!r}")
        return s

    def interval(self, i: int) -> Interval:
        """Source interval X_i, 1-based."""
        self._check_index(i)
        return Interval(self.left[i - 1], self.left[i])

    def image_interval(self, i: int) -> Interval:
        self._check_index(i)
        return Interval(self.dest_lo[i - 1], self.dest_lo[i - 1] + self.lengths[i - 1])

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.k:
            raise IndexError(f"interval index {i} out of 1..{self.k}")

    def index_of(self, x: ExactScalar) -> int:
        """1-based i with x in X_i."""
        x = self._domain(x)
        for i in range(1, self.k + 1):
            if compare(x, self.left[i]) < 0:
                return i
        raise AssertionError("unreachable: partition covers [0,1)")

    def _domain(self, x) -> ExactScalar:
        x = self._coerce(x)
        if x.sign() < 0 or compare(x, ONE) >= 0:
            raise DomainError(f"point {x} outside [0,1)")
        return x

    def apply(self, x) -> ExactScalar:
        x = self._domain(x)
        i = self.index_of(x)
        if not self.flips[i - 1]:
            return x + self.disp[i - 1]
        if x == self.left[i - 1]:
            return self.dest_lo[i - 1]
        return self.refl[i - 1] - x

    def apply_inverse(self, y) -> ExactScalar:
        y = self._domain(y)
        j = 1
        while compare(y, self.slot_start[j]) >= 0:
            j += 1
        i = self.permutation[j - 1]
        if not self.flips[i - 1]:
            return y - self.disp[i - 1]
        if y == self.dest_lo[i - 1]:
            return self.left[i - 1]
        return self.refl[i - 1] - y

    def __repr__(self) -> str:
        lam = ", ".join(str(x) for x in self.lengths)
        return f"IETSpec(k={self.k}, lengths=({lam}), perm={self.permutation}, flips={self.flips})"


def build_iet(lengths, permutation, flips=None) -> IETSpec:
    return IETSpec(lengths, permutation, flips)


def displacement(T: IETSpec, i: int) -> ExactScalar:
    T._check_index(i)
    if T.flips[i - 1]:
        raise ValueError(f"interval {i} is flipped; no translation displacement")
    return T.disp[i - 1]


def apply(T: IETSpec, x) -> ExactScalar:
    return T.apply(x)


def apply_inverse(T: IETSpec, y) -> ExactScalar:
    return T.apply_inverse(y)


def orbit(T: IETSpec, x0, n: int) -> list[ExactScalar]:
    if n < 0:
        raise ValueError("orbit length must be >= 0")
    pts = []
    x = T._domain(x0)
    for _ in range(n):
        pts.append(x)
        x = T.apply(x)
    return pts


class _IntOrbit:
    """Orbit stepper on integer pairs, for long codings.

    All scalars of one exchange live in a single quadratic field, so a
    point is (A + B*sqrt(d))/D with a common denominator D fixed up
    front.  Steps and comparisons are then pure integer arithmetic;
    results are bit-identical to the ExactScalar path.
    """

    def __init__(self, T: IETSpec, extra=()):
        import math
        scalars = list(T.left) + list(T.disp) + list(T.refl) + list(T.dest_lo)
        scalars += list(extra)
        ds = {s.d for s in scalars if s.d}
        if len(ds) > 1:
            raise ValueError("points span two quadratic fields")
        self.d = ds.pop() if ds else 0
        D = 1
        for s in scalars:
            D = math.lcm(D, s.rat.denominator, s.coef.denominator)
        self.D = D
        self.T = T
        self.left = [self.encode(s) for s in T.left]
        self.disp = [self.encode(s) for s in T.disp]
        self.refl = [self.encode(s) for s in T.refl]
        self.dest_lo = [self.encode(s) for s in T.dest_lo]

    def encode(self, s: ExactScalar):
        D = self.D
        return (s.rat.numerator * (D // s.rat.denominator),
                s.coef.numerator * (D // s.coef.denominator))

    def decode(self, p) -> ExactScalar:
        from fractions import Fraction
        return ExactScalar(Fraction(p[0], self.D), Fraction(p[1], self.D), self.d)

    def sign(self, a: int, b: int) -> int:
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        lhs, rhs = a * a, b * b * self.d
        if lhs == rhs:
            return 0
        if lhs > rhs:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def less(self, p, q) -> bool:
        return self.sign(p[0] - q[0], p[1] - q[1]) < 0

    def index_of(self, p) -> int:
        left = self.left
        for i in range(1, self.T.k + 1):
            if self.less(p, left[i]):
                return i
        raise AssertionError("unreachable: partition covers [0,1)")

    def step(self, p, i: int):
        if not self.T.flips[i - 1]:
            d = self.disp[i - 1]
            return (p[0] + d[0], p[1] + d[1])
        lo = self.left[i - 1]
        if p == lo:
            return self.dest_lo[i - 1]
        r = self.refl[i - 1]
        return (r[0] - p[0], r[1] - p[1])


def natural_coding(T: IETSpec, x0, n: int, letters: str | None = None) -> str:
    if letters is None:
        letters = DEFAULT_LETTERS
    if len(letters) < T.k:
        raise ValueError(f"need {T.k} letters, got {len(letters)}")
    x0 = T._domain(x0)
    stepper = _IntOrbit(T, (x0,))
    p = stepper.encode(x0)
    out = []
    for _ in range(n):
        i = stepper.index_of(p)
        out.append(letters[i - 1])
        p = stepper.step(p, i)
    return "".join(out)


class CodingConfig:
    """Partition of [0,1) into labeled unions of half-open intervals."""

    def __init__(self, sets):
        pieces = []
        self.sets = {}
        for letter, ivs in sets:
            ivs = tuple(ivs)
            if letter in self.sets:
                raise ValueError(f"duplicate letter {letter!r}")
            if not ivs:
                raise ValueError(f"letter {letter!r} has no intervals")
            for iv in ivs:
                if not (iv.lo_closed and not iv.hi_closed):
                    raise ValueError(f"characteristic pieces must be half-open [a,b): {iv}")
                if iv.is_empty:
                    raise ValueError(f"empty piece for letter {letter!r}")
                pieces.append((iv, letter))
            self.sets[letter] = ivs
        pieces.sort(key=cmp_to_key(lambda p, q: compare(p[0].lo, q[0].lo)))
        cursor = ZERO
        for iv, letter in pieces:
            if compare(iv.lo, cursor) != 0:
                raise ValueError(f"partition gap or overlap at {cursor} (next piece {iv})")
            cursor = iv.hi
        if cursor != ONE:
            raise ValueError(f"partition stops at {cursor}, not 1")
        self.pieces = tuple(pieces)
        self.letters = tuple(self.sets)
        # interior boundary points, where one-sided limits may disagree
        bounds = []
        for iv, _ in pieces[1:]:
            bounds.append(iv.lo)
        self.boundaries = tuple(bounds)

    @classmethod
    def natural(cls, T: IETSpec, letters: str | None = None) -> "CodingConfig":
        if letters is None:
            letters = DEFAULT_LETTERS
        if len(letters) < T.k:
            raise ValueError(f"need {T.k} letters, got {len(letters)}")
        return cls((letters[i - 1], (T.interval(i),)) for i in range(1, T.k + 1))

    def letter_at(self, x: ExactScalar) -> str:
        for iv, letter in self.pieces:
            if iv.contains(x):
                return letter
        raise DomainError(f"point {x} outside [0,1)")

    def letter_at_limit(self, x: ExactScalar, side: int) -> str:
        for iv, letter in self.pieces:
            if iv.contains_limit(x, side):
                return letter
        raise DomainError(f"limit point {x}{'+' if side > 0 else '-'} outside (0,1)")

    def on_boundary(self, x: ExactScalar) -> bool:
        return any(compare(x, b) == 0 for b in self.boundaries)


def coding_with_sets(T: IETSpec, config: CodingConfig, x0, n: int, strict: bool = True) -> str:
    x0 = T._domain(x0)
    cuts = [iv.lo for iv, _ in config.pieces] + [ONE]
    stepper = _IntOrbit(T, tuple(cuts) + (x0,))
    cut_reps = [stepper.encode(c) for c in cuts]
    piece_letters = [letter for _, letter in config.pieces]
    bound_reps = [stepper.encode(b) for b in config.boundaries]
    p = stepper.encode(x0)
    out = []
    for step in range(n):
        if strict and p in bound_reps:
            raise BoundaryHit(step, stepper.decode(p))
        for j in range(len(piece_letters)):
            if stepper.less(p, cut_reps[j + 1]):
                out.append(piece_letters[j])
                break
        p = stepper.step(p, stepper.index_of(p))
    return "".join(out)


def _branch_at_limit(T: IETSpec, x: ExactScalar, side: int) -> int:
    """Interval index whose closure contains x + side*epsilon."""
    if side > 0:
        return T.index_of(x)
    for i in range(1, T.k + 1):
        if compare(x, T.left[i - 1]) > 0 and compare(x, T.left[i]) <= 0:
            return i
    raise DomainError(f"limit point {x}- outside (0,1)")


def essential_codings(T: IETSpec, config: CodingConfig, x0, n: int) -> frozenset[str]:
    """Codings stable on one-sided neighborhoods of x0.

    A signed point (x, s) stands for x + s*epsilon.  Flipped branches
    reverse the sign; set membership of a signed point never depends on
    endpoint ownership, so boundary hits resolve deterministically.
    """
    x0 = T._domain(x0)
    sides = [1] if x0.sign() == 0 else [1, -1]
    words = set()
    for s0 in sides:
        x, s = x0, s0
        out = []
        for _ in range(n):
            out.append(config.letter_at_limit(x, s))
            i = _branch_at_limit(T, x, s)
            if not T.flips[i - 1]:
                x = x + T.disp[i - 1]
            else:
                x, s = T.refl[i - 1] - x, -s
        words.add("".join(out))
    return frozenset(words)


@dataclass(frozen=True)
class RegularityReport:
    depth: int
    verdict: str  # "no-collision-up-to-depth" | "collision"
    witness: object = None

    @property
    def collided(self) -> bool:
        return self.verdict == "collision"


def check_regular(T: IETSpec, depth: int) -> RegularityReport:
    """Forward orbits of the endpoints versus the interior discontinuities.

    Collisions with a_1 = 0 are excluded: T always maps some endpoint
    to 0 (the start of the first image slot), so counting 0 as a target
    would reject every exchange at depth 1.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    targets = {T.left[j]: j + 1 for j in range(1, T.k)}
    for i in range(1, T.k + 1):
        x = T.left[i - 1]
        for n in range(1, depth + 1):
            x = T.apply(x)
            j = targets.get(x)
            if j is not None:
                return RegularityReport(depth, "collision", (i, n, j))
    return RegularityReport(depth, "no-collision-up-to-depth")


def check_idoc(T: IETSpec, depth: int) -> RegularityReport:
    """Backward orbits of the interior discontinuities, pairwise disjoint."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    seen: dict[ExactScalar, tuple[int, int]] = {}
    for i in range(2, T.k + 1):
        if T.left[i - 1] in seen:
            return RegularityReport(depth, "collision", ((i, 0), seen[T.left[i - 1]]))
        seen[T.left[i - 1]] = (i, 0)
    for i in range(2, T.k + 1):
        x = T.left[i - 1]
        for n in range(1, depth + 1):
            x = T.apply_inverse(x)
            prev = seen.get(x)
            if prev is not None and prev != (i, n):
                return RegularityReport(depth, "collision", ((i, n), prev))
            seen[x] = (i, n)
    return RegularityReport(depth, "no-collision-up-to-depth")


def mechanical_word(alpha, x0, u_len, n: int) -> str:
    """Coding of the rotation x -> x + alpha by the arc U = [0, u_len)."""
    alpha = IETSpec._coerce(alpha)
    u_len = IETSpec._coerce(u_len)
    if alpha.sign() <= 0 or compare(alpha, ONE) >= 0:
        raise ValueError("need 0 < alpha < 1")
    if u_len.sign() <= 0 or compare(u_len, ONE) >= 0:
        raise ValueError("need 0 < u_len < 1")
    T = build_iet([ONE - alpha, alpha], (2, 1))
    config = CodingConfig([
        ("a", (Interval(ZERO, u_len),)),
        ("b", (Interval(u_len, ONE),)),
    ])
    # rational alpha makes orbits hit the arc boundary; membership under
    # the half-open convention is still well defined, so no strict check
    return coding_with_sets(T, config, x0, n, strict=False)


def _advance_pieces(T: IETSpec, pieces):
    """Push (image interval, sign, offset) pieces through one step of T.

    Each piece knows the affine map back to the source points:
    source = sign * y + offset for y in the image interval.
    """
    out = []
    for img, s, b in pieces:
        for i in range(1, T.k + 1):
            part = img.intersect(T.interval(i))
            if part is None:
                continue
            if not T.flips[i - 1]:
                d = T.disp[i - 1]
                moved = Interval(part.lo + d, part.hi + d, part.lo_closed, part.hi_closed)
                out.append((moved, s, b - s * d))
            else:
                lo_pt = T.left[i - 1]
                refl = T.refl[i - 1]
                keep = part
                if part.lo == lo_pt and part.lo_closed:
                    # the owned left endpoint relocates to the slot start;
                    # peel it off as an exact singleton piece
                    single = Interval.singleton(T.dest_lo[i - 1])
                    src = s * lo_pt + b
                    out.append((single, 1, src - T.dest_lo[i - 1]))
                    if part.lo == part.hi:
                        continue
                    keep = Interval(part.lo, part.hi, False, part.hi_closed)
                moved = Interval(refl - keep.hi, refl - keep.lo,
                                 keep.hi_closed, keep.lo_closed)
                out.append((moved, -s, b + s * refl))
    return out


def _restrict_pieces(config: CodingConfig, letter: str, pieces):
    sets = config.sets.get(letter)
    if sets is None:
        raise ValueError(f"letter {letter!r} not in the coding config")
    out = []
    for img, s, b in pieces:
        for u in sets:
            part = img.intersect(u)
            if part is not None:
                out.append((part, s, b))
    return out


def _piece_source(piece) -> Interval:
    img, s, b = piece
    if s == 1:
        return Interval(img.lo + b, img.hi + b, img.lo_closed, img.hi_closed)
    return Interval(b - img.hi, b - img.lo, img.hi_closed, img.lo_closed)


def _interval_cmp(a: Interval, b: Interval) -> int:
    c = compare(a.lo, b.lo)
    if c:
        return c
    # closed endpoint first so a touching singleton is absorbed
    return (not a.lo_closed) - (not b.lo_closed)


def _merge_intervals(ivs: list[Interval]) -> tuple[Interval, ...]:
    ivs = sorted(ivs, key=cmp_to_key(_interval_cmp))
    merged: list[Interval] = []
    for iv in ivs:
        if merged:
            prev = merged[-1]
            c = compare(prev.hi, iv.lo)
            if c > 0 or (c == 0 and (prev.hi_closed or iv.lo_closed)):
                if compare(iv.hi, prev.hi) > 0:
                    merged[-1] = Interval(prev.lo, iv.hi, prev.lo_closed, iv.hi_closed)
                elif compare(iv.hi, prev.hi) == 0 and iv.hi_closed and not prev.hi_closed:
                    merged[-1] = Interval(prev.lo, prev.hi, prev.lo_closed, True)
                continue
        merged.append(iv)
    return tuple(merged)


def cylinder(T: IETSpec, config: CodingConfig, w: str) -> tuple[Interval, ...]:
    """Maximal intervals of points whose coding starts with w (exact)."""
    if not w:
        raise ValueError("cylinder word must be nonempty")
    pieces = [(Interval(ZERO, ONE), 1, ZERO)]
    for idx, letter in enumerate(w):
        pieces = _restrict_pieces(config, letter, pieces)
        if not pieces:
            return ()
        if idx < len(w) - 1:
            pieces = _advance_pieces(T, pieces)
    return _merge_intervals([_piece_source(p) for p in pieces])
