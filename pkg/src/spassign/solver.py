"""Exact constrained maximum-similarity assignment.

Two independent exact methods are provided. The primary solver formulates
the problem as min-cost max-flow on the agent/paper network (unit-capacity
pair arcs, agent arcs of capacity agent_load, paper arcs of capacity
paper_load) and runs successive shortest augmenting paths with Johnson
potentials. Costs are the negated integer similarities shifted by a
constant so reduced costs stay non-negative and Dijkstra applies; total
unimodularity of the network makes every optimum integral.

The second method is a textbook O(n^3) Hungarian matching for the
one-to-one load-1 case. It shares no code with the flow solver and exists
to cross-check it.
"""

import heapq
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import SCALE, Assignment, Bipartition
from .errors import InfeasibleError, ModeError, PreconditionError


@dataclass(frozen=True)
class AssignmentProblem:
    """An instance plus the extra constraints of one solve.

    Forbidden pairs always include authorship; a partition constraint
    additionally forbids every pair whose agent and paper sit in the same
    subset.
    """

    instance: object
    agent_load: int
    paper_load: int
    partition: object = None
    extra_forbidden: frozenset = field(default_factory=frozenset)

    @classmethod
    def unconstrained(cls, instance, k=None):
        return cls.with_loads(instance, k, k)

    @classmethod
    def with_loads(cls, instance, agent_load=None, paper_load=None, partition=None,
                   extra_forbidden=()):
        return cls(
            instance,
            instance.agent_load if agent_load is None else agent_load,
            instance.paper_load if paper_load is None else paper_load,
            partition,
            frozenset(extra_forbidden),
        )

    def allowed_mask(self):
        inst = self.instance
        allowed = np.ones((inst.n, inst.m), dtype=bool)
        for a, p in inst.authorship:
            allowed[a, p] = False
        for a, p in self.extra_forbidden:
            allowed[a, p] = False
        if self.partition is not None:
            agent_side = np.full(inst.n, -1, dtype=np.int64)
            for idx, s in enumerate(self.partition.agent_subsets()):
                for a in s:
                    agent_side[a] = idx
            sides, _ = paper_sides(inst, self.partition)
            paper_side = np.array(
                [-2 if s is None else s for s in sides], dtype=np.int64
            )
            allowed &= agent_side[:, None] != paper_side[None, :]
        return allowed

    @property
    def forbidden_pairs(self):
        allowed = self.allowed_mask()
        return frozenset(zip(*np.nonzero(~allowed)))


def min_cost_assignment(micros, allowed, agent_load, paper_load):
    """Maximum-weight b-matching on a bipartite graph, exact integers.

    Every paper receives exactly ``paper_load`` reviews; every agent gives
    at most ``agent_load``. Returns (set of pairs, total weight in
    micro-units). Raises InfeasibleError naming the papers that cannot be
    served.
    """
    micros = np.asarray(micros, dtype=np.int64)
    n, m = micros.shape
    need = m * paper_load
    if n * agent_load < need:
        raise InfeasibleError(
            f"total agent capacity {n * agent_load} is below the "
            f"{need} reviews required by {m} papers"
        )

    num_v = n + m + 2
    src = n + m
    snk = n + m + 1
    to, cap, cost = [], [], []
    adj = [[] for _ in range(num_v)]

    def add_arc(u, v, c, w):
        adj[u].append(len(to))
        to.append(v)
        cap.append(c)
        cost.append(w)
        adj[v].append(len(to))
        to.append(u)
        cap.append(0)
        cost.append(-w)

    shift = int(micros.max(initial=0))
    for i in range(n):
        add_arc(src, i, agent_load, 0)
    pair_arcs = []
    for i in range(n):
        row = micros[i]
        arow = allowed[i]
        for j in range(m):
            if arow[j]:
                pair_arcs.append((len(to), i, j))
                add_arc(i, n + j, 1, shift - int(row[j]))
    for j in range(m):
        add_arc(n + j, snk, paper_load, 0)

    big = 1 << 62
    pot = [0] * num_v
    flow = 0
    while flow < need:
        dist = [big] * num_v
        dist[src] = 0
        prev = [-1] * num_v
        done = [False] * num_v
        heap = [(0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            if u == snk:
                break
            pu = pot[u]
            for aid in adj[u]:
                if cap[aid] <= 0:
                    continue
                v = to[aid]
                if done[v]:
                    continue
                nd = d + cost[aid] + pu - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    prev[v] = aid
                    heapq.heappush(heap, (nd, v))
        if not done[snk]:
            break
        reached = dist[snk]
        for v in range(num_v):
            pot[v] += dist[v] if done[v] else reached
        v = snk
        while v != src:
            aid = prev[v]
            cap[aid] -= 1
            cap[aid ^ 1] += 1
            v = to[aid ^ 1]
        flow += 1

    if flow < need:
        served = [0] * m
        for aid, i, j in pair_arcs:
            if cap[aid] == 0:
                served[j] += 1
        short = [j for j in range(m) if served[j] < paper_load]
        raise InfeasibleError(
            f"papers {short} cannot each reach {paper_load} reviewers: "
            f"allowed reviewer capacity is exhausted"
        )

    pairs = set()
    total = 0
    for aid, i, j in pair_arcs:
        used = (aid < len(cap)) and cap[aid] == 0
        if used:
            pairs.add((i, j))
            total += int(micros[i, j])
    assert len(pairs) == need, "flow solution is not integral"
    return pairs, total


def solve_max_similarity(problem):
    """Globally optimal assignment for the given problem, with its value.

    The returned assignment satisfies every load and partition constraint;
    the value is its exact total similarity. Deterministic: arcs enter the
    network in lexicographic (agent, paper) order and ties are broken by
    vertex index.
    """
    inst = problem.instance
    allowed = problem.allowed_mask()
    pairs, total = min_cost_assignment(
        inst.micros, allowed, problem.agent_load, problem.paper_load
    )
    return Assignment.of(pairs), Fraction(total, SCALE)


def hungarian_max_matching(micros, allowed):
    """Maximum-weight perfect matching on a square matrix, exact integers.

    Augmenting-path (Hungarian) method with integer potentials. Forbidden
    cells get a penalty large enough that a minimum-cost matching uses one
    only if no feasible perfect matching exists, which is then reported.
    Returns (pairs, total weight).
    """
    micros = np.asarray(micros, dtype=np.int64)
    n, m = micros.shape
    if n != m:
        raise PreconditionError("matching requires a square matrix")
    penalty = n * int(micros.max(initial=0)) + 1
    cost = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(n):
            cost[i + 1][j + 1] = -int(micros[i, j]) if allowed[i, j] else penalty

    big = 1 << 62
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match = [0] * (n + 1)  # match[j] = row assigned to column j; 0 = free
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [big] * (n + 1)
        way = [0] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = big
            j1 = -1
            row = cost[i0]
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = row[j] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1

    pairs = set()
    total = 0
    for j in range(1, n + 1):
        i = match[j] - 1
        jj = j - 1
        if not allowed[i, jj]:
            raise InfeasibleError(
                f"paper {jj} has no eligible reviewer left: no perfect "
                f"matching avoids the forbidden pairs"
            )
        pairs.add((i, jj))
        total += int(micros[i, jj])
    return pairs, total


def solve_k1_matching(problem):
    """Load-1 optimum via the Hungarian method; cross-checks the flow solver."""
    inst = problem.instance
    if not inst.one_to_one:
        raise ModeError("load-1 matching requires a one-to-one instance")
    if problem.agent_load != 1 or problem.paper_load != 1:
        raise PreconditionError("this entry point solves loads of exactly 1")
    allowed = problem.allowed_mask()
    pairs, total = hungarian_max_matching(inst.micros, allowed)
    return Assignment.of(pairs), Fraction(total, SCALE)
