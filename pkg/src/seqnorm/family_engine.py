"""Engine for the implicitly defined admissible-family norm (space "x2").

The norm satisfies the fixed-point equation

    ||x|| = max( ||x||_inf ,
                 sup { (1/f(l)) * sum_i |||E_i x|||_{m_i} } )

with the sup over admissible families, where the triple norm is

    |||y|||_m = sup { (1/m) * sum_j ||F_j y|| : F_1 < ... < F_m }.

On finitely supported vectors the fixed point is well defined by recursion on
support size: a partition piece equal to the whole vector is dominated by any
two-way split (each level of the construction is a norm, so the triangle
inequality holds), hence every supremum is attained among strictly smaller
restrictions.  The same monotonicity lets partition pieces be taken as
consecutive runs covering the whole set, which is exact because the inner
suprema carry no cardinality budget.

Search modes
------------
``exhaustive``
    Family sets range over arbitrary subsets of the support.  Exact by
    definition; accepted only up to ``max_support`` points (default 12).
``segment``
    Family sets are restricted to consecutive runs of support points with
    free gaps between sets.  A certified lower bound for the exhaustive
    value, fast at any support size, and exact on constant patterns -- but
    not in general: omitting a small interior point from a set can relax the
    cardinality budget enough to win (frozen counterexample in the tests).
    The modes are cross-validated and strict gaps are reported as
    diagnostics by the acceptance suite.

Both searches prune with an exact dominance rule: the admissibility budget
forces the next scale m to be at least max(2, 2**consumed), so once that
floor reaches the number of remaining support points every later triple norm
degenerates to l1/floor, and a single merged final set (all remaining points)
dominates any further splitting while using fewer sets.  The pruning
preserves "best family sum with at most k sets" exactly, which is the
quantity all the seminorms are derived from.

Memoization is keyed by coefficient pattern (absolute coefficients in index
order), which is sound because the norm is 1-unconditional and 1-subsymmetric;
both properties are themselves under test.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

from .admissible import AdmissibleFamily
from .core import CoefficientPattern, EQ_TOL, FiniteVector, IndexSet, f
from .witness import FamilyWitness, PartitionWitness, SupWitness, Witness

# The pattern recursion nests a handful of frames per support point.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 50_000))

_NEG = float("-inf")
# Floors beyond this many bits overflow floats; the contribution is zero.
_FLOOR_BITS_CAP = 1020


class SupportLimitError(ValueError):
    """Exhaustive mode rejected a vector whose support exceeds the limit."""


class IterationCapError(RuntimeError):
    """Level iteration exceeded its cap without stabilizing."""


@dataclass(frozen=True)
class SearchMode:
    kind: str
    max_support: int = 12

    def __post_init__(self) -> None:
        if self.kind not in ("exhaustive", "segment"):
            raise ValueError(f"unknown search mode {self.kind!r}")


def Exhaustive(max_support: int = 12) -> SearchMode:
    return SearchMode("exhaustive", max_support)


def SegmentDP() -> SearchMode:
    return SearchMode("segment", 0)


def _floor_after(consumed: int) -> int:
    """Smallest admissible scale for the next set after `consumed` points."""
    return 2 if consumed <= 1 else (1 << consumed)


@lru_cache(maxsize=32)
def _mask_bits(r: int) -> tuple[tuple[int, ...], ...]:
    """Bit positions of every mask over r bits, ascending."""
    return tuple(
        tuple(i for i in range(r) if mask >> i & 1) for mask in range(1 << r)
    )


def _is_constant(p: CoefficientPattern) -> bool:
    return len(p) > 1 and min(p) == max(p)


def _ratio(l1: float, fl: int) -> float:
    if fl.bit_length() > _FLOOR_BITS_CAP:
        return 0.0
    return l1 / fl


def _upto(exact: tuple[float, ...], n: int) -> tuple[float, ...]:
    """Cumulative max: best family sum with at most k sets, k = 0..n."""
    out = [0.0] * (n + 1)
    best = 0.0
    for k in range(1, n + 1):
        if k < len(exact) and exact[k] > best:
            best = exact[k]
        out[k] = best
    return tuple(out)


def _merge_chunk(best: list[float], tnv: float, rest: tuple[float, ...]) -> None:
    """Fold `take this chunk then continue per rest` into the best-per-k list."""
    for j, v in enumerate(rest):
        if v == _NEG:
            continue
        k = j + 1
        if k >= len(best):
            best.extend([_NEG] * (k - len(best) + 1))
        cand = tnv + v
        if cand > best[k]:
            best[k] = cand


class FamilyEngine:
    """Shared-memo evaluator for the family norm and its seminorms.

    All operations are pure; the caches only ever receive idempotent inserts,
    so an instance may be shared across threads and reused across vectors.
    """

    def __init__(self, mode: SearchMode):
        self.mode = mode
        self._norm_memo: dict[CoefficientPattern, float] = {}
        self._bps_memo: dict[tuple[CoefficientPattern, int], float] = {}
        self._tn_memo: dict[tuple[CoefficientPattern, int], float] = {}
        self._sums_memo: dict[CoefficientPattern, tuple[float, ...]] = {}
        self._sums_m0_memo: dict[tuple[CoefficientPattern, int], tuple[float, ...]] = {}
        self._ones_norm: dict[int, float] = {0: 0.0, 1: 1.0}
        self._ones_bps: dict[tuple[int, int], float] = {}
        self._ones_tn: dict[tuple[int, int], float] = {}

    # ------------------------------------------------------------------
    # public operations
    # ------------------------------------------------------------------

    def norm(self, x: FiniteVector, with_witness: bool = False):
        self._check_support(x)
        p = x.pattern()
        value = self._norm_pattern(p)
        if not with_witness:
            return value
        return value, self._build_witness(x, p, value)

    def triple_norm(self, x: FiniteVector, m: int) -> float:
        if m < 2:
            raise ValueError("the triple norm is defined for m >= 2")
        self._check_support(x)
        return _ratio(self._bps(x.pattern(), m), m)

    def best_partition_sum(self, x: FiniteVector, m: int) -> float:
        if m < 1:
            raise ValueError("need m >= 1")
        self._check_support(x)
        return self._bps(x.pattern(), m)

    def norm_ell(self, x: FiniteVector, ell: int) -> float:
        """Best family value at exactly `ell` pairs (trailing empty sets allowed)."""
        if ell < 1:
            raise ValueError("need ell >= 1")
        self._check_support(x)
        p = x.pattern()
        if not p:
            return 0.0
        sums = self._family_sums(p)
        return sums[min(ell, len(p))] / f(ell)

    def norm_ell_m0(self, x: FiniteVector, ell: int, m0: int) -> float:
        """Like norm_ell but the first (nonempty) set's scale must be >= m0."""
        if ell < 1:
            raise ValueError("need ell >= 1")
        if m0 < 2:
            raise ValueError("need m0 >= 2")
        self._check_support(x)
        p = x.pattern()
        if not p:
            return 0.0
        sums = self._family_sums(p) if m0 == 2 else self._family_sums_m0(p, m0)
        return sums[min(ell, len(p))] / f(ell)

    def evaluate_family(self, x: FiniteVector, fam: AdmissibleFamily) -> float:
        """Value of one explicit family: a certified lower bound for the norm."""
        fam.validate()
        total = 0.0
        for m, E in fam.pairs:
            sub = x.restrict(E).pattern()
            if sub:
                total += _ratio(self._bps(sub, m), m)
        return total / f(fam.length)

    def fixed_point_residual(self, x: FiniteVector) -> float:
        """|LHS - RHS| of the implicit equation, the RHS supremum re-evaluated
        one step with the computed norm as the piece oracle."""
        self._check_support(x)
        p = x.pattern()
        value = self._norm_pattern(p)
        rhs = self._one_step_value(p, self._norm_pattern, {}, {})
        return abs(value - rhs)

    def iterate_levels(self, x: FiniteVector) -> list[float]:
        """Level values of the inductive norm construction, up to stabilization.

        Starts every restriction at its sup norm and applies the one-step map
        to all of them simultaneously until nothing moves by >= 1e-12.  An
        independent route to the fixed point the recursion computes directly.
        """
        self._check_support(x)
        p = x.pattern()
        if not p:
            return [0.0]
        closure = self._closure(p)
        values = {q: max(q) for q in closure}
        levels = [values[p]]
        cap = 10 * len(p)
        for _ in range(cap):
            values, delta = self._level_step(closure, values)
            levels.append(values[p])
            if delta < EQ_TOL:
                return levels
        raise IterationCapError(
            f"no stabilization within {cap} levels; last value {levels[-1]}"
        )

    # ------------------------------------------------------------------
    # pattern-level core
    # ------------------------------------------------------------------

    def _check_support(self, x: FiniteVector) -> None:
        if self.mode.kind == "exhaustive" and x.support_size > self.mode.max_support:
            raise SupportLimitError(
                f"support {x.support_size} exceeds exhaustive limit "
                f"{self.mode.max_support}; use segment mode"
            )

    def _norm_pattern(self, p: CoefficientPattern) -> float:
        n = len(p)
        if n == 0:
            return 0.0
        if n == 1:
            return p[0]
        hit = self._norm_memo.get(p)
        if hit is not None:
            return hit
        if n == 2:
            # Closed form: the best family value is (a+b)/2 <= max(a, b).
            value = max(p)
        else:
            sums = self._family_sums(p)
            value = max(p)
            for k in range(1, n + 1):
                cand = sums[k] / f(k)
                if cand > value:
                    value = cand
        self._norm_memo[p] = value
        return value

    def _norm_ones_len(self, n: int) -> float:
        hit = self._ones_norm.get(n)
        if hit is not None:
            return hit
        exact = self._search_const(n, self._tn_ones, 2)
        value = 1.0
        for k in range(1, len(exact)):
            cand = exact[k] / f(k)
            if cand > value:
                value = cand
        self._ones_norm[n] = value
        return value

    def _bps(self, p: CoefficientPattern, m: int) -> float:
        """Best sum of piece norms over partitions into at most m runs."""
        n = len(p)
        if n == 0:
            return 0.0
        if m >= n:
            return sum(p)
        if m == 1:
            return self._norm_pattern(p)
        if _is_constant(p):
            return p[0] * self._bps_ones(n, m)
        key = (p, m)
        hit = self._bps_memo.get(key)
        if hit is not None:
            return hit
        best = _NEG
        for t in range(1, n):
            cand = self._norm_pattern(p[:t]) + self._bps(p[t:], m - 1)
            if cand > best:
                best = cand
        self._bps_memo[key] = best
        return best

    def _bps_ones(self, n: int, m: int) -> float:
        if n == 0:
            return 0.0
        if m >= n:
            return float(n)
        if m == 1:
            return self._norm_ones_len(n)
        key = (n, m)
        hit = self._ones_bps.get(key)
        if hit is not None:
            return hit
        best = _NEG
        for t in range(1, n):
            cand = self._norm_ones_len(t) + self._bps_ones(n - t, m - 1)
            if cand > best:
                best = cand
        self._ones_bps[key] = best
        return best

    def _tn_best(self, p: CoefficientPattern, fl: int) -> float:
        """max over admissible scales m >= fl of |||p|||_m.

        Beyond the support size the value is l1/m and strictly decreasing,
        so the scan stops at len(p).
        """
        n = len(p)
        if n == 0:
            return 0.0
        if fl >= n:
            return _ratio(sum(p), fl)
        if _is_constant(p):
            return p[0] * self._tn_ones(n, fl)
        key = (p, fl)
        hit = self._tn_memo.get(key)
        if hit is not None:
            return hit
        best = _NEG
        for m in range(fl, n + 1):
            cand = self._bps(p, m) / m
            if cand > best:
                best = cand
        self._tn_memo[key] = best
        return best

    def _tn_ones(self, n: int, fl: int) -> float:
        if fl >= n:
            return _ratio(float(n), fl)
        key = (n, fl)
        hit = self._ones_tn.get(key)
        if hit is not None:
            return hit
        best = _NEG
        for m in range(fl, n + 1):
            cand = self._bps_ones(n, m) / m
            if cand > best:
                best = cand
        self._ones_tn[key] = best
        return best

    # ------------------------------------------------------------------
    # family search: best sums per exact set count
    # ------------------------------------------------------------------

    def _family_sums(self, p: CoefficientPattern) -> tuple[float, ...]:
        hit = self._sums_memo.get(p)
        if hit is not None:
            return hit
        exact = self._search(p, self._tn_best, 2)
        out = _upto(exact, len(p))
        self._sums_memo[p] = out
        return out

    def _family_sums_m0(self, p: CoefficientPattern, m0: int) -> tuple[float, ...]:
        key = (p, m0)
        hit = self._sums_m0_memo.get(key)
        if hit is not None:
            return hit
        exact = self._search(p, self._tn_best, m0)
        out = _upto(exact, len(p))
        self._sums_m0_memo[key] = out
        return out

    def _search(
        self,
        p: CoefficientPattern,
        tn: Callable[[CoefficientPattern, int], float],
        first_floor: int,
    ) -> tuple[float, ...]:
        """Dispatch the mode-appropriate search.

        `tn` evaluates the best triple norm of a candidate set at a given
        admissibility floor; `first_floor` overrides the floor of the first
        set (used by the m0-constrained seminorm, where the merged-tail
        shortcut is disabled for the first set because later floors may drop
        back below it).
        """
        if _is_constant(p):
            return self._search_const(len(p), lambda t, fl: tn(p[:t], fl), first_floor)
        if self.mode.kind == "exhaustive":
            return self._search_subsets(p, tn, first_floor)
        return self._search_runs(p, tn, first_floor)

    def _search_subsets(self, p, tn, first_floor) -> tuple[float, ...]:
        n = len(p)
        suffix = self._suffix_sums(p)
        memo: dict[tuple[int, int], tuple[float, ...]] = {}

        def cont(q: int, c: int) -> tuple[float, ...]:
            r = n - q
            if r == 0:
                return (0.0,)
            key = (q, c)
            hit = memo.get(key)
            if hit is not None:
                return hit
            fl = max(first_floor, 2) if c == 0 else _floor_after(c)
            if fl >= r and (c > 0 or first_floor <= 2):
                out = (0.0, _ratio(suffix[q], fl))
            else:
                best = [0.0]
                bits = _mask_bits(r)
                for mask in range(1, 1 << r):
                    rel = bits[mask]
                    sub = tuple(p[q + i] for i in rel)
                    tnv = tn(sub, fl)
                    rest = cont(q + rel[-1] + 1, c + len(rel))
                    _merge_chunk(best, tnv, rest)
                out = tuple(best)
            memo[key] = out
            return out

        return cont(0, 0)

    def _search_runs(self, p, tn, first_floor) -> tuple[float, ...]:
        n = len(p)
        suffix = self._suffix_sums(p)
        memo: dict[tuple[int, int], tuple[float, ...]] = {}

        def cont(q: int, c: int) -> tuple[float, ...]:
            r = n - q
            if r == 0:
                return (0.0,)
            key = (q, c)
            hit = memo.get(key)
            if hit is not None:
                return hit
            fl = max(first_floor, 2) if c == 0 else _floor_after(c)
            if fl >= r and (c > 0 or first_floor <= 2):
                out = (0.0, _ratio(suffix[q], fl))
            else:
                # skip the current point, or take a run starting at it
                best = list(cont(q + 1, c))
                for t in range(1, r + 1):
                    tnv = tn(p[q : q + t], fl)
                    rest = cont(q + t, c + t)
                    _merge_chunk(best, tnv, rest)
                out = tuple(best)
            memo[key] = out
            return out

        return cont(0, 0)

    def _search_const(self, n, tn_len, first_floor) -> tuple[float, ...]:
        """Packed search for constant patterns.

        Gaps are free and same-length sets are interchangeable on a constant
        pattern, so families may be packed flush left: only the multiset of
        lengths (in order) matters.
        """
        arrays: list[tuple[float, ...]] = [(0.0,)] * (n + 1)
        for c in range(n - 1, -1, -1):
            r = n - c
            fl = max(first_floor, 2) if c == 0 else _floor_after(c)
            if fl >= r and (c > 0 or first_floor <= 2):
                arrays[c] = (0.0, tn_len(r, fl))
                continue
            best = [0.0]
            for t in range(1, r + 1):
                tnv = tn_len(t, fl)
                rest = arrays[c + t]
                _merge_chunk(best, tnv, rest)
            arrays[c] = tuple(best)
        return arrays[0]

    @staticmethod
    def _suffix_sums(p: CoefficientPattern) -> list[float]:
        n = len(p)
        suffix = [0.0] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] + p[i]
        return suffix

    # ------------------------------------------------------------------
    # one-step evaluation under an arbitrary value assignment
    # ------------------------------------------------------------------

    def _one_step_value(
        self,
        p: CoefficientPattern,
        norm_of: Callable[[CoefficientPattern], float],
        bps_cache: dict,
        tn_cache: dict,
    ) -> float:
        """One application of the right-hand side with pieces valued by `norm_of`."""
        n = len(p)
        if n == 0:
            return 0.0
        if n == 1:
            return p[0]

        def bps_v(z: CoefficientPattern, m: int) -> float:
            if not z:
                return 0.0
            if m >= len(z):
                return sum(z)
            if m == 1:
                return norm_of(z)
            key = (z, m)
            hit = bps_cache.get(key)
            if hit is not None:
                return hit
            best = _NEG
            for t in range(1, len(z)):
                cand = norm_of(z[:t]) + bps_v(z[t:], m - 1)
                if cand > best:
                    best = cand
            bps_cache[key] = best
            return best

        def tn_v(z: CoefficientPattern, fl: int) -> float:
            if not z:
                return 0.0
            if fl >= len(z):
                return _ratio(sum(z), fl)
            key = (z, fl)
            hit = tn_cache.get(key)
            if hit is not None:
                return hit
            best = _NEG
            for m in range(fl, len(z) + 1):
                cand = bps_v(z, m) / m
                if cand > best:
                    best = cand
            tn_cache[key] = best
            return best

        if _is_constant(p):
            exact = self._search_const(n, lambda t, fl: tn_v(p[:t], fl), 2)
        elif self.mode.kind == "exhaustive":
            exact = self._search_subsets(p, tn_v, 2)
        else:
            exact = self._search_runs(p, tn_v, 2)
        value = max(p)
        for k in range(1, len(exact)):
            if exact[k] == _NEG:
                continue
            cand = exact[k] / f(k)
            if cand > value:
                value = cand
        return value

    def _closure(self, p: CoefficientPattern) -> list[CoefficientPattern]:
        """Every sub-pattern the one-step map can touch, smallest first."""
        n = len(p)
        seen: set[CoefficientPattern] = set()
        if self.mode.kind == "exhaustive":
            bits = _mask_bits(n)
            for mask in range(1, 1 << n):
                seen.add(tuple(p[i] for i in bits[mask]))
        else:
            for a in range(n):
                for b in range(a + 1, n + 1):
                    seen.add(p[a:b])
        return sorted(seen, key=lambda q: (len(q), q))

    def _level_step(self, closure, values) -> tuple[dict, float]:
        bps_cache: dict = {}
        tn_cache: dict = {}
        norm_of = values.__getitem__
        new_values = {}
        delta = 0.0
        for q in closure:
            rhs = self._one_step_value(q, norm_of, bps_cache, tn_cache)
            prev = values[q]
            nv = rhs if rhs > prev else prev
            new_values[q] = nv
            if nv - prev > delta:
                delta = nv - prev
        return new_values, delta

    # ------------------------------------------------------------------
    # witness extraction
    # ------------------------------------------------------------------

    def _build_witness(self, x: FiniteVector, p: CoefficientPattern, value: float) -> Witness:
        n = len(p)
        if n == 0:
            return SupWitness(0.0, None)
        sup = max(p)
        if value <= sup:
            return SupWitness(sup, x.indices[p.index(sup)])
        chunks = self._trace_family(p, value)
        pairs = []
        children = []
        for positions, m in chunks:
            E = IndexSet.of(x.indices[i] for i in positions)
            sub = tuple(p[i] for i in positions)
            pairs.append((m, E))
            children.append(self._build_partition_witness(x.restrict(E), sub, m))
        fam_value = sum(ch.value for ch in children) / f(len(pairs))
        return FamilyWitness(value=fam_value, pairs=tuple(pairs), children=tuple(children))

    def _build_partition_witness(
        self, piece_vec: FiniteVector, sub: CoefficientPattern, m: int
    ) -> PartitionWitness:
        widths = self._trace_partition(sub, m)
        pieces = []
        total = 0.0
        start = 0
        for width in widths:
            seg = IndexSet.of(piece_vec.indices[start : start + width])
            seg_pat = sub[start : start + width]
            seg_norm = self._norm_pattern(seg_pat)
            total += seg_norm
            pieces.append(
                (seg, self._build_witness(piece_vec.restrict(seg), seg_pat, seg_norm))
            )
            start += width
        return PartitionWitness(value=total / m, m=m, divisor=float(m), pieces=tuple(pieces))

    def _trace_partition(self, p: CoefficientPattern, m: int) -> list[int]:
        """Piece widths of an optimal partition of p into at most m runs."""
        n = len(p)
        if n == 0:
            return []
        if m >= n:
            return [1] * n
        if m == 1:
            return [n]
        target = self._bps(p, m)
        tol = EQ_TOL * max(1.0, abs(target))
        for t in range(1, n):
            if self._norm_pattern(p[:t]) + self._bps(p[t:], m - 1) >= target - tol:
                return [t] + self._trace_partition(p[t:], m - 1)
        raise AssertionError("partition retrace failed")

    def _trace_family(self, p: CoefficientPattern, value: float) -> list[tuple[tuple[int, ...], int]]:
        """Recover an optimal family as (positions, scale) pairs."""
        n = len(p)
        suffix = self._suffix_sums(p)
        memo: dict[tuple[int, int], tuple[float, ...]] = {}

        def cont(q: int, c: int) -> tuple[float, ...]:
            r = n - q
            if r == 0:
                return (0.0,)
            key = (q, c)
            hit = memo.get(key)
            if hit is not None:
                return hit
            fl = _floor_after(c)
            if fl >= r:
                out = (0.0, _ratio(suffix[q], fl))
            else:
                best = [0.0]
                for sub, positions in self._chunks(p, q):
                    tnv = self._tn_best(sub, fl)
                    rest = cont(positions[-1] + 1, c + len(positions))
                    _merge_chunk(best, tnv, rest)
                out = tuple(best)
            memo[key] = out
            return out

        exact = cont(0, 0)
        best_k, best_v = None, _NEG
        for k in range(1, len(exact)):
            if exact[k] == _NEG:
                continue
            cand = exact[k] / f(k)
            if cand > best_v:
                best_k, best_v = k, cand
        if best_k is None or abs(best_v - value) > EQ_TOL * max(1.0, value):
            raise AssertionError(
                f"family retrace reproduces {best_v}, norm says {value}"
            )

        chunks: list[tuple[tuple[int, ...], int]] = []
        q, c, k = 0, 0, best_k
        while k > 0:
            r = n - q
            fl = _floor_after(c)
            target = cont(q, c)[k]
            tol = EQ_TOL * max(1.0, abs(target))
            if fl >= r:
                chunks.append((tuple(range(q, n)), fl))
                break
            found = False
            for sub, positions in self._chunks(p, q):
                tnv = self._tn_best(sub, fl)
                rest = cont(positions[-1] + 1, c + len(positions))
                if k - 1 < len(rest) and rest[k - 1] != _NEG and tnv + rest[k - 1] >= target - tol:
                    chunks.append((positions, self._best_scale(sub, fl)))
                    q, c, k = positions[-1] + 1, c + len(positions), k - 1
                    found = True
                    break
            if not found:
                raise AssertionError("family retrace lost the optimum")
        return chunks

    def _chunks(
        self, p: CoefficientPattern, q: int
    ) -> Iterator[tuple[CoefficientPattern, tuple[int, ...]]]:
        """Candidate next sets starting at or after position q."""
        n = len(p)
        if self.mode.kind == "exhaustive":
            r = n - q
            bits = _mask_bits(r)
            for mask in range(1, 1 << r):
                rel = bits[mask]
                positions = tuple(q + i for i in rel)
                yield tuple(p[i] for i in positions), positions
        else:
            for s in range(q, n):
                for t in range(1, n - s + 1):
                    yield p[s : s + t], tuple(range(s, s + t))

    def _best_scale(self, sub: CoefficientPattern, fl: int) -> int:
        """The scale m achieving tn_best for this set at this floor."""
        n = len(sub)
        if fl >= n:
            return fl
        target = self._tn_best(sub, fl)
        tol = EQ_TOL * max(1.0, abs(target))
        for m in range(fl, n + 1):
            if self._bps(sub, m) / m >= target - tol:
                return m
        raise AssertionError("scale retrace failed")


# ----------------------------------------------------------------------
# module-level functional surface
# ----------------------------------------------------------------------

_ENGINES: dict[SearchMode, FamilyEngine] = {}


def get_engine(mode: SearchMode | None = None) -> FamilyEngine:
    mode = mode or Exhaustive()
    eng = _ENGINES.get(mode)
    if eng is None:
        eng = _ENGINES[mode] = FamilyEngine(mode)
    return eng


def norm_x2(x: FiniteVector, mode: SearchMode | None = None, with_witness: bool = False):
    return get_engine(mode).norm(x, with_witness=with_witness)


def triple_norm(x: FiniteVector, m: int, mode: SearchMode | None = None) -> float:
    return get_engine(mode).triple_norm(x, m)


def best_partition_sum(x: FiniteVector, m: int, mode: SearchMode | None = None) -> float:
    return get_engine(mode).best_partition_sum(x, m)


def norm_ell(x: FiniteVector, ell: int, mode: SearchMode | None = None) -> float:
    return get_engine(mode).norm_ell(x, ell)


def norm_ell_m0(x: FiniteVector, ell: int, m0: int, mode: SearchMode | None = None) -> float:
    return get_engine(mode).norm_ell_m0(x, ell, m0)


def evaluate_family(x: FiniteVector, fam: AdmissibleFamily, mode: SearchMode | None = None) -> float:
    return get_engine(mode).evaluate_family(x, fam)


def iterate_levels_x2(x: FiniteVector, mode: SearchMode | None = None) -> list[float]:
    return get_engine(mode).iterate_levels(x)


def check_fixed_point_x2(x: FiniteVector, mode: SearchMode | None = None) -> float:
    return get_engine(mode).fixed_point_residual(x)
