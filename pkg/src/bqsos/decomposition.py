"""Sums-of-squares machinery for order lattices: trace-bounded square
enumeration, minimal-length search, n-square decidability by meet in the
middle, and the fixed-point lower-bound iteration.

Hot paths work on integer coordinate tuples scaled by the order's common
denominator; every comparison is exact.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .fields import Element, FieldError, FieldMismatch, SIGN_PATTERNS, biquad_sign, quad_sign
from .orders import OrderLattice


class DecompositionError(FieldError):
    pass


class NotTotallyNonnegative(DecompositionError):
    pass


class CapTooSmall(DecompositionError):
    pass


EXACT = "exact"
NOT_SUM_OF_SQUARES = "not_sum_of_squares"
UNDETERMINED = "undetermined"

CACHE_VERSION = 1


def _isqrt_frac(x):
    """Largest integer v with v*v <= x, for a nonnegative Fraction or int."""
    x = Fraction(x)
    if x < 0:
        return -1
    return isqrt(x.numerator * x.denominator) // x.denominator


def _tnn_test(field):
    """A fast total-nonnegativity predicate on scaled coordinate tuples."""
    if field.degree == 2:
        n = field.n

        def tnn(v):
            a, b = v
            if a < 0:
                return False
            return quad_sign(a, b, n) >= 0 and quad_sign(a, -b, n) >= 0

    else:
        m, s, t0 = field.m, field.s, field.t0

        def tnn(v):
            a, b, c, d = v
            if a < 0:
                return False
            for em, es, et in SIGN_PATTERNS:
                if biquad_sign(a, em * b, es * c, et * d, m, s, t0) < 0:
                    return False
            return True

    return tnn


def _sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def _add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def scaled_coords(order, x):
    """Coordinates of x times order.den, or None if x is not in the order."""
    if x.field != order.field:
        raise FieldMismatch(f"{x.field} vs {order.field}")
    if order.den % x.den:
        return None
    k = order.den // x.den
    v = tuple(c * k for c in x.num)
    return v if order.contains_scaled(v) else None


def _unscale(order, v):
    return Element.make(order.field, v, order.den)


def _enumerate_roots(order, atr_cap):
    """Scaled coordinate tuples of all nonzero x in the order with
    abs_trace(x*x) <= atr_cap, one per {x, -x} pair (first nonzero
    coordinate positive)."""
    field, D = order.field, order.den
    weights = (1,) + field.radicands
    dim = field.degree
    budget = Fraction(atr_cap) * D * D
    roots = []
    vec = [0] * dim

    def walk(i, rem, leading_zero):
        if i == dim:
            if not leading_zero:
                v = tuple(vec)
                if order.contains_scaled(v):
                    roots.append(v)
            return
        w = weights[i]
        vmax = _isqrt_frac(rem / w)
        for v in range(0 if leading_zero else -vmax, vmax + 1):
            vec[i] = v
            walk(i + 1, rem - v * v * w, leading_zero and v == 0)
        vec[i] = 0

    walk(0, budget, True)
    return roots


def _square_scaled(order, root):
    """Scaled coordinates of root**2 given scaled coordinates of root."""
    D = order.den
    u = order.field.mul_coords(root, root)
    out = []
    for c in u:
        if c % D:
            raise DecompositionError("square left the order lattice")
        out.append(c // D)
    return tuple(out)


class SquareSet:
    """Nonzero squares of order elements under an absolute-trace cap.

    `squares` holds (root, square) Element pairs with sign-canonical roots,
    sorted by descending abs_trace of the square; `scaled` holds the same
    data as integer tuples over the order denominator.
    """

    def __init__(self, order, bound, scaled_pairs):
        self.order = order
        self.bound = Fraction(bound)
        seen = {}
        for root, sq in scaled_pairs:
            seen.setdefault(sq, root)
        items = sorted(seen.items(), key=lambda kv: (-kv[0][0], kv[0], kv[1]))
        self.scaled = tuple((root, sq) for sq, root in items)
        self.squares = tuple(
            (_unscale(order, root), _unscale(order, sq)) for root, sq in self.scaled
        )

    def __len__(self):
        return len(self.scaled)

    def restrict_dominated(self, alpha_scaled, tnn):
        """The subset of squares dominated by the given scaled value."""
        pairs = [
            (root, sq)
            for root, sq in self.scaled
            if sq[0] <= alpha_scaled[0] and tnn(_sub(alpha_scaled, sq))
        ]
        out = SquareSet.__new__(SquareSet)
        out.order = self.order
        out.bound = Fraction(alpha_scaled[0], self.order.den)
        out.scaled = tuple(pairs)
        out.squares = tuple(
            (_unscale(self.order, root), _unscale(self.order, sq)) for root, sq in pairs
        )
        return out


def enumerate_squares_traced(order, atr_cap):
    """All nonzero squares x*x of order elements with abs_trace <= atr_cap."""
    atr_cap = Fraction(atr_cap)
    pairs = []
    for root in _enumerate_roots(order, atr_cap):
        sq = _square_scaled(order, root)
        pairs.append((root, sq))
    return SquareSet(order, atr_cap, pairs)


def enumerate_squares_dominated(order, alpha):
    """The set of nonzero squares x*x with alpha - x*x totally nonnegative."""
    if not alpha.is_totally_nonnegative():
        raise NotTotallyNonnegative(f"{alpha} is not totally nonnegative")
    av = scaled_coords(order, alpha)
    tnn = _tnn_test(order.field)
    cap = alpha.abs_trace()
    pairs = []
    for root in _enumerate_roots(order, cap):
        sq = _square_scaled(order, root)
        if av is not None:
            diff = _sub(av, sq)
        else:
            # alpha outside the order: fall back to exact Element arithmetic.
            diff_elem = alpha - _unscale(order, sq)
            if not diff_elem.is_totally_nonnegative():
                continue
            pairs.append((root, sq))
            continue
        if tnn(diff):
            pairs.append((root, sq))
    return SquareSet(order, cap, pairs)


@dataclass
class LengthResult:
    status: str
    k: int = None
    witness: tuple = None
    nodes: int = 0
    millis: float = 0.0

    @property
    def is_exact(self):
        return self.status == EXACT


def _ceil_frac(x):
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)


def _dfs_search(alpha_scaled, squares, k, tnn, D, counter):
    """A representation of alpha as a sum of at most k squares, or None."""
    atrs = [sq[0] for _, sq in squares]
    n = len(squares)
    chosen = []

    def rec(res, start, remaining):
        counter[0] += 1
        if not any(res):
            return True
        if remaining == 0:
            return False
        # Any nonzero sum of squares of order elements has abs_trace >= 1.
        if res[0] < D:
            return False
        for i in range(start, n):
            a = atrs[i]
            if a * remaining < res[0]:
                return False
            if a > res[0]:
                continue
            diff = _sub(res, squares[i][1])
            if tnn(diff):
                chosen.append(squares[i][0])
                if rec(diff, i, remaining - 1):
                    return True
                chosen.pop()
        return False

    if rec(alpha_scaled, 0, k):
        return tuple(chosen)
    return None


def _mitm_levels_extend(alpha_scaled, squares, seen, frontier, tnn, counter):
    """One more level of sums-of-squares values dominated by alpha."""
    new = {}
    cap = alpha_scaled[0]
    for v in frontier:
        roots_v = seen[v][1]
        for root, sq in squares:
            if v[0] + sq[0] > cap:
                continue
            w = _add(v, sq)
            if w in seen or w in new:
                continue
            counter[0] += 1
            if tnn(_sub(alpha_scaled, w)):
                new[w] = (root,) + roots_v
    return new


def is_sum_of_n_squares(order, alpha, n, square_set=None, _state=None):
    """Whether alpha is a sum of at most n squares of order elements.

    Returns (answer, witness) where witness is a tuple of root Elements
    when the answer is True.  Meet in the middle: level sets of sums of at
    most floor(n/2) and ceil(n/2) squares dominated by alpha are built and
    intersected against alpha.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if alpha.is_zero():
        return True, ()
    if not alpha.is_totally_nonnegative():
        return False, None
    av = scaled_coords(order, alpha)
    if av is None:
        return False, None
    tnn = _tnn_test(order.field)
    if _state is None:
        _state = {}
    if "squares" in _state:
        square_set = _state["squares"]
    else:
        if square_set is None:
            square_set = enumerate_squares_dominated(order, alpha)
        else:
            square_set = square_set.restrict_dominated(av, tnn)
        _state["squares"] = square_set
    squares = square_set.scaled
    if n == 0 or not squares:
        return False, None

    counter = _state.setdefault("counter", [0])
    zero = (0,) * order.field.degree
    seen = _state.setdefault("seen", {zero: (0, ())})
    frontiers = _state.setdefault("frontiers", [[zero]])

    lo, hi = n // 2, n - n // 2
    while len(frontiers) <= hi:
        level = len(frontiers)
        new = _mitm_levels_extend(av, squares, seen, frontiers[-1], tnn, counter)
        for w, roots in new.items():
            seen[w] = (level, roots)
        frontiers.append(list(new))
        if not new:
            break

    for v, (lv, roots_v) in seen.items():
        if lv > lo:
            continue
        entry = seen.get(_sub(av, v))
        if entry is not None and entry[0] <= hi:
            roots = roots_v + entry[1]
            witness = tuple(_unscale(order, r) for r in roots)
            return True, witness
    return False, None


def length(order, alpha, max_n=None, method="dfs", square_set=None):
    """Minimal number of squares of order elements summing to alpha.

    Iterative deepening ("dfs") or meet in the middle ("mitm").  When alpha
    is totally nonnegative but no representation with at most
    ceil(abs_trace(alpha)) squares exists, the status is NotSumOfSquares:
    every nonzero square in an order has abs_trace at least 1.  A smaller
    max_n that is exhausted first yields Undetermined.
    """
    start = time.monotonic()
    counter = [0]

    def done(status, k=None, witness=None):
        return LengthResult(
            status=status,
            k=k,
            witness=witness,
            nodes=counter[0],
            millis=(time.monotonic() - start) * 1000.0,
        )

    if alpha.is_zero():
        return done(EXACT, 0, ())
    if not alpha.is_totally_nonnegative():
        return done(NOT_SUM_OF_SQUARES)
    av = scaled_coords(order, alpha)
    if av is None:
        return done(NOT_SUM_OF_SQUARES)

    tnn = _tnn_test(order.field)
    if square_set is None:
        square_set = enumerate_squares_dominated(order, alpha)
    else:
        square_set = square_set.restrict_dominated(av, tnn)
    squares = square_set.scaled
    if not squares:
        return done(NOT_SUM_OF_SQUARES)

    cutoff = _ceil_frac(alpha.abs_trace())
    limit = cutoff if max_n is None else min(max_n, cutoff)

    if method == "mitm":
        state = {"counter": counter}
        for k in range(1, limit + 1):
            ok, witness = is_sum_of_n_squares(
                order, alpha, k, square_set=square_set, _state=state
            )
            if ok:
                return done(EXACT, len(witness), witness)
    elif method == "dfs":
        for k in range(1, limit + 1):
            roots = _dfs_search(av, squares, k, tnn, order.den, counter)
            if roots is not None:
                witness = tuple(_unscale(order, r) for r in roots)
                return done(EXACT, len(witness), witness)
    else:
        raise ValueError(f"unknown method {method!r}")

    if max_n is not None and max_n < cutoff:
        return done(UNDETERMINED)
    return done(NOT_SUM_OF_SQUARES)


def _level_sets(order, atr_cap, cache_dir=None, max_levels=None):
    """Level sets of sums of at most k squares with abs_trace <= atr_cap.

    Returns (levels, stabilized) where levels[k] maps each value first seen
    at level k+1 to a witness tuple of scaled roots; iteration stops at the
    fixed point (or at max_levels)."""
    atr_cap = Fraction(atr_cap)
    if atr_cap < 1:
        raise CapTooSmall(f"cap {atr_cap} admits no squares")
    cached = load_level_cache(cache_dir, order, atr_cap) if cache_dir else None
    base = enumerate_squares_traced(order, atr_cap)
    if not len(base):
        raise CapTooSmall(f"cap {atr_cap} admits no squares")
    cap_scaled = atr_cap * order.den

    if cached is not None:
        levels, stabilized = cached
        if stabilized:
            return levels, True
    else:
        levels = [{sq: (root,) for root, sq in reversed(base.scaled)}]
    seen = {}
    for lv in levels:
        seen.update(lv)

    stabilized = False
    while max_levels is None or len(levels) < max_levels:
        new = {}
        for v, roots in levels[-1].items():
            for root, sq in base.scaled:
                if v[0] + sq[0] > cap_scaled:
                    continue
                # sums of squares are automatically totally nonnegative
                w = _add(v, sq)
                if w not in seen and w not in new:
                    new[w] = (root,) + roots
        if not new:
            stabilized = True
            break
        levels.append(new)
        seen.update(new)
    if cache_dir:
        save_level_cache(cache_dir, order, atr_cap, levels, stabilized)
    return levels, stabilized


def pythagoras_lower_bound(order, atr_cap, cache_dir=None):
    """Fixed-point iteration: grow sums of squares under the trace cap until
    no new values appear.  Returns (n, witnesses): the stabilization level
    and the (element, roots) pairs first realized there, each of exact
    length n."""
    levels, _ = _level_sets(order, atr_cap, cache_dir=cache_dir)
    n = len(levels)
    witnesses = [
        (_unscale(order, v), tuple(_unscale(order, r) for r in roots))
        for v, roots in sorted(levels[-1].items())
    ]
    return n, witnesses


@dataclass
class ProfileRow:
    element: Element
    length: int
    witness: tuple


def length_profile(order, atr_cap, cache_dir=None):
    """Exact lengths of every sum of squares with abs_trace <= atr_cap.

    The level of first appearance equals the true length: any
    representation of such a value has all partial sums dominated by it,
    hence within the cap."""
    levels, _ = _level_sets(order, atr_cap, cache_dir=cache_dir)
    rows = []
    for k, level in enumerate(levels, start=1):
        for v, roots in sorted(level.items()):
            rows.append(
                ProfileRow(
                    element=_unscale(order, v),
                    length=k,
                    witness=tuple(_unscale(order, r) for r in roots),
                )
            )
    return rows


def _cache_path(cache_dir, order, atr_cap):
    atr_cap = Fraction(atr_cap)
    name = f"levels_{order.basis_hash()}_{atr_cap.numerator}_{atr_cap.denominator}.json"
    return os.path.join(cache_dir, name)


def save_level_cache(cache_dir, order, atr_cap, levels, stabilized):
    os.makedirs(cache_dir, exist_ok=True)
    atr_cap = Fraction(atr_cap)
    payload = {
        "version": CACHE_VERSION,
        "radicands": list(order.field.radicands),
        "order_label": order.label,
        "basis_hash": order.basis_hash(),
        "den": order.den,
        "cap": [atr_cap.numerator, atr_cap.denominator],
        "stabilized": stabilized,
        "levels": [
            [[list(v), [list(r) for r in roots]] for v, roots in sorted(level.items())]
            for level in levels
        ],
    }
    path = _cache_path(cache_dir, order, atr_cap)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)
    return path


def load_level_cache(cache_dir, order, atr_cap):
    path = _cache_path(cache_dir, order, Fraction(atr_cap))
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("version") != CACHE_VERSION:
        return None
    if payload.get("basis_hash") != order.basis_hash():
        return None
    if payload.get("cap") != [Fraction(atr_cap).numerator, Fraction(atr_cap).denominator]:
        return None
    levels = [
        {tuple(v): tuple(tuple(r) for r in roots) for v, roots in level}
        for level in payload["levels"]
    ]
    return levels, bool(payload.get("stabilized"))
