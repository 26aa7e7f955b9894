"""Exact minimization of descent-step quadratic forms via s-t minimum cut.

The objective s.t + t'Qt over binary t maps onto an undirected flow
network on n+3 vertices whose cut weights equal the objective up to a
constant: middle edges carry -q_ij, and each variable hangs off the
source or the sink depending on the sign of its linear coefficient.  A
minimum cut therefore yields a global minimizer, computed here by FIFO
push-relabel with the gap heuristic on dense float capacities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import SellingMatrix
from .errors import InvalidForm, IterationOverrun, NonFiniteInput

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(func):
            return func

        return deco


class BinaryQuadraticForm:
    """Objective Q(t) = s.t + t'Qt minimized over binary vectors t.

    q may be a SellingMatrix or a raw symmetric matrix with nonpositive
    off-diagonal entries; t = 0 always achieves Q(0) = 0, so the minimum
    is never positive.
    """

    __slots__ = ("s", "q")

    def __init__(self, s, q):
        if isinstance(q, SellingMatrix):
            qm = q.q
        else:
            qm = np.asarray(q, dtype=float)
            if qm.ndim != 2 or qm.shape[0] != qm.shape[1]:
                raise InvalidForm(f"quadratic part must be square, got shape {qm.shape}")
            if not np.all(np.isfinite(qm)):
                raise NonFiniteInput("quadratic part must be finite")
            if np.abs(qm - qm.T).max() > 1e-12 * max(1.0, np.abs(qm).max()):
                raise InvalidForm("quadratic part must be symmetric")
            off = qm - np.diag(np.diag(qm))
            worst = float(off.max()) if off.size else 0.0
            if worst > 1e-9 * max(1.0, float(np.abs(qm).max())):
                raise InvalidForm(f"positive off-diagonal entry {worst:.3e}")
            qm = qm.copy()
            qm[off > 0.0] = 0.0  # rounding-level positives
        s = np.asarray(s, dtype=float)
        if s.shape != (qm.shape[0],):
            raise InvalidForm(f"linear part has length {s.size}, expected {qm.shape[0]}")
        if not np.all(np.isfinite(s)):
            raise NonFiniteInput("linear part must be finite")
        self.s = s
        self.q = qm

    @property
    def dim(self) -> int:
        return self.s.size

    def value(self, t) -> float:
        """Evaluate Q(t) for a binary (or real) coefficient vector."""
        t = np.asarray(t, dtype=float)
        return float(self.s @ t + t @ self.q @ t)


class FlowNetwork:
    """Undirected capacitated network; vertex 0 is the source, V-1 the sink."""

    __slots__ = ("capacities",)

    def __init__(self, capacities):
        cap = np.asarray(capacities, dtype=float)
        if cap.ndim != 2 or cap.shape[0] != cap.shape[1] or cap.shape[0] < 3:
            raise InvalidForm(f"capacity matrix has shape {cap.shape}")
        if not np.all(np.isfinite(cap)):
            raise NonFiniteInput("capacities must be finite")
        if cap.min() < 0.0:
            raise InvalidForm("capacities must be nonnegative")
        if np.abs(cap - cap.T).max() > 0.0:
            raise InvalidForm("capacities must be symmetric (undirected network)")
        if cap[0, -1] != 0.0:
            raise InvalidForm("direct source-sink edge must have zero weight")
        both = (cap[0, 1:-1] > 0.0) & (cap[1:-1, -1] > 0.0)
        if np.any(both):
            i = int(np.argmax(both)) + 1
            raise InvalidForm(f"vertex {i} has both a source and a sink edge")
        self.capacities = cap

    @property
    def vertex_count(self) -> int:
        return self.capacities.shape[0]


@dataclass(frozen=True)
class CutResult:
    """A source side, its recomputed crossing weight, and the max-flow value."""

    source_side: frozenset
    weight: float
    indicator: np.ndarray = field(repr=False)
    flow: float = 0.0


def build_network(form: BinaryQuadraticForm) -> FlowNetwork:
    """Encode a binary quadratic form as an undirected s-t flow network.

    Middle vertices 1..n+1 stand for the variables; w[i][j] = -q[i][j]
    between them.  The terminal edge of variable i carries d_i = s_i plus
    the row sum of q (zero for Selling matrices), hung off the sink when
    d_i >= 0 and off the source otherwise, so exactly one terminal edge
    per variable crosses any cut.
    """
    if not isinstance(form, BinaryQuadraticForm):
        form = BinaryQuadraticForm(*form)
    k = form.dim
    cap = np.zeros((k + 2, k + 2))
    mid = -(form.q - np.diag(np.diag(form.q)))
    mid[mid < 0.0] = 0.0  # clamped positives in q show up as -0.0 here
    cap[1:-1, 1:-1] = mid
    d = form.s + form.q.sum(axis=1)
    pos = d >= 0.0
    cap[1:-1, -1] = np.where(pos, d, 0.0)
    cap[-1, 1:-1] = cap[1:-1, -1]
    cap[0, 1:-1] = np.where(pos, 0.0, -d)
    cap[1:-1, 0] = cap[0, 1:-1]
    return FlowNetwork(cap)


@njit(cache=True)
def _max_flow(res):  # pragma: no cover - exercised via min_cut
    """FIFO push-relabel with gap relabeling; res holds residual capacities.

    res is modified in place; returns (flow into sink, max leftover excess
    on middle vertices).  Saturating updates subtract equal floats, so
    exhausted arcs reach exactly zero and strict positivity identifies
    residual arcs.
    """
    V = res.shape[0]
    s = 0
    t = V - 1
    height = np.zeros(V, np.int64)
    excess = np.zeros(V)
    count = np.zeros(2 * V + 2, np.int64)
    in_q = np.zeros(V, np.uint8)
    queue = np.empty(V + 1, np.int64)
    head = 0
    tail = 0

    height[s] = V
    count[0] = V - 1
    count[V] = 1
    for v in range(V):
        c = res[s, v]
        if c > 0.0 and v != s:
            res[s, v] = 0.0
            res[v, s] += c
            excess[v] += c
            excess[s] -= c
            if v != t and in_q[v] == 0:
                queue[tail] = v
                tail = (tail + 1) % (V + 1)
                in_q[v] = 1

    while head != tail:
        u = queue[head]
        head = (head + 1) % (V + 1)
        in_q[u] = 0
        while excess[u] > 0.0:
            hu = height[u]
            for v in range(V):
                if res[u, v] > 0.0 and hu == height[v] + 1:
                    if excess[u] <= res[u, v]:
                        send = excess[u]
                    else:
                        send = res[u, v]
                    res[u, v] -= send
                    res[v, u] += send
                    excess[u] -= send
                    excess[v] += send
                    if v != s and v != t and in_q[v] == 0:
                        queue[tail] = v
                        tail = (tail + 1) % (V + 1)
                        in_q[v] = 1
                    if excess[u] == 0.0:
                        break
            if excess[u] > 0.0:
                old = height[u]
                newh = 2 * V + 1
                for v in range(V):
                    if res[u, v] > 0.0 and height[v] + 1 < newh:
                        newh = height[v] + 1
                if newh > 2 * V:
                    break  # no residual arc at all; excess is stranded
                count[old] -= 1
                height[u] = newh
                count[newh] += 1
                if count[old] == 0 and 0 < old < V:
                    # Gap: nothing at height `old`, so vertices strictly
                    # between it and V can never reach the sink again.
                    for w in range(V):
                        if w != s and old < height[w] < V:
                            count[height[w]] -= 1
                            height[w] = V + 1
                            count[V + 1] += 1

    worst = 0.0
    for v in range(1, V - 1):
        e = excess[v] if excess[v] >= 0.0 else -excess[v]
        if e > worst:
            worst = e
    return excess[t], worst


@njit(cache=True)
def _source_reachable(res):  # pragma: no cover - exercised via min_cut
    """Vertices reachable from the source through strictly positive residuals."""
    V = res.shape[0]
    seen = np.zeros(V, np.uint8)
    stack = np.empty(V, np.int64)
    stack[0] = 0
    top = 1
    seen[0] = 1
    while top > 0:
        top -= 1
        u = stack[top]
        for v in range(V):
            if seen[v] == 0 and res[u, v] > 0.0:
                seen[v] = 1
                stack[top] = v
                top += 1
    return seen


def min_cut(net: FlowNetwork) -> CutResult:
    """Compute a minimum s-t cut of an undirected flow network.

    Returns the source-reachable side of the residual graph after max
    flow (the canonical minimal source side), with the cut weight
    recomputed directly from the original capacities.
    """
    cap = net.capacities
    res = cap.copy()
    flow, leftover = _max_flow(res)
    if leftover > 1e-7 * max(1.0, abs(flow)):
        raise IterationOverrun(
            f"max-flow left excess {leftover:.3e} on middle vertices"
        )
    seen = _source_reachable(res) != 0
    if seen[-1]:
        raise IterationOverrun("sink reachable after max-flow termination")
    weight = float(cap[np.ix_(seen, ~seen)].sum())
    side = frozenset(int(i) for i in np.flatnonzero(seen))
    indicator = seen[1:-1].astype(np.int64)
    return CutResult(source_side=side, weight=weight, indicator=indicator, flow=float(flow))


def minimize_form(form: BinaryQuadraticForm):
    """Return (t, value) with t a global binary minimizer of the form.

    The value is clamped at zero since t = 0 is always feasible; among
    multiple minimizers the minimal source-reachable cut side is returned.
    """
    result = min_cut(build_network(form))
    t = result.indicator
    value = form.value(t)
    return t, min(value, 0.0)
