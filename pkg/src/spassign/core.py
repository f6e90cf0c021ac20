"""Domain model: instances, assignments, partitions, and quality metrics.

Similarity scores are stored as integer multiples of 1/SCALE (micro-units)
so that totals, ratios, and guarantee checks are exact rationals; floats
never enter an optimality comparison. All objects here are immutable after
construction and safe to share across threads; the operations are pure
functions.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidAssignmentError, PreconditionError

SCALE = 10**6


def to_fraction(micros):
    return Fraction(int(micros), SCALE)


class Instance:
    """Agents, submissions, similarities, authorship, and review loads.

    In one-to-one mode agent i authors exactly paper i, n == m, and the
    agent and paper loads coincide. In general mode authorship is an
    arbitrary bipartite relation, papers need exactly ``paper_load``
    reviews, and agents review at most ``agent_load`` papers. Papers with
    no author are permitted in general mode (they arise when heavy authors
    are removed from the reviewer pool) and carry no conflicts.
    """

    def __init__(self, micros, authorship, agent_load, paper_load, one_to_one):
        micros = np.array(micros, dtype=np.int64)
        if micros.ndim != 2:
            raise PreconditionError("similarity matrix must be two-dimensional")
        n, m = micros.shape
        if n < 1 or m < 1:
            raise PreconditionError("instance needs at least one agent and one paper")
        if micros.min() < 0 or micros.max() > SCALE:
            raise PreconditionError("similarities must lie in [0, 1]")
        if agent_load < 1 or paper_load < 1:
            raise PreconditionError("loads must be positive")
        authorship = frozenset((int(a), int(p)) for a, p in authorship)
        for a, p in authorship:
            if not (0 <= a < n and 0 <= p < m):
                raise PreconditionError(f"authorship pair ({a}, {p}) out of range")
        if one_to_one:
            if n != m:
                raise PreconditionError("one-to-one mode requires n == m")
            if authorship != frozenset((i, i) for i in range(n)):
                raise PreconditionError("one-to-one mode requires identity authorship")
            if agent_load != paper_load:
                raise PreconditionError("one-to-one mode requires equal loads")
        if n * agent_load < m * paper_load:
            raise PreconditionError(
                f"infeasible loads: total agent capacity {n * agent_load} < "
                f"required reviews {m * paper_load}"
            )
        micros.setflags(write=False)
        self.micros = micros
        self.n = n
        self.m = m
        self.authorship = authorship
        self.agent_load = agent_load
        self.paper_load = paper_load
        self.one_to_one = one_to_one
        authors = [[] for _ in range(m)]
        papers = [[] for _ in range(n)]
        for a, p in sorted(authorship):
            authors[p].append(a)
            papers[a].append(p)
        self._authors_of = tuple(tuple(v) for v in authors)
        self._papers_of = tuple(tuple(v) for v in papers)

    @classmethod
    def make_one_to_one(cls, micros, load):
        n = len(micros)
        return cls(micros, [(i, i) for i in range(n)], load, load, True)

    @classmethod
    def make_general(cls, micros, authorship, agent_load, paper_load):
        return cls(micros, authorship, agent_load, paper_load, False)

    def authors_of(self, paper):
        return self._authors_of[paper]

    def papers_of(self, agent):
        return self._papers_of[agent]

    def similarity(self, agent, paper):
        return to_fraction(self.micros[agent, paper])


@dataclass(frozen=True)
class Assignment:
    """A set of (agent, paper) review pairs."""

    pairs: frozenset

    @classmethod
    def of(cls, pairs):
        return cls(frozenset((int(a), int(p)) for a, p in pairs))

    def sorted_pairs(self):
        return sorted(self.pairs)

    def reviewers_of(self, paper):
        return sorted(a for a, p in self.pairs if p == paper)

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class Bipartition:
    """Two disjoint agent subsets covering all agents."""

    subset_1: frozenset
    subset_2: frozenset

    @classmethod
    def of(cls, subset_1, subset_2):
        return cls(frozenset(subset_1), frozenset(subset_2))

    def agent_subsets(self):
        return (self.subset_1, self.subset_2)

    def paper_subsets(self):
        # Paper sides follow their authors (identity in one-to-one mode).
        return None

    def side_of(self, agent):
        if agent in self.subset_1:
            return 0
        if agent in self.subset_2:
            return 1
        return None


@dataclass(frozen=True)
class MultiPartition:
    """Ordered family of disjoint agent subsets covering all agents."""

    subsets: tuple

    @classmethod
    def of(cls, subsets):
        return cls(tuple(frozenset(s) for s in subsets))

    def agent_subsets(self):
        return self.subsets

    def paper_subsets(self):
        return None

    def side_of(self, agent):
        for idx, s in enumerate(self.subsets):
            if agent in s:
                return idx
        return None

    def sizes(self):
        return tuple(len(s) for s in self.subsets)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass(frozen=True)
class Report:
    """Quality metrics of one assignment relative to the unconstrained optimum."""

    total_similarity: Fraction
    opt_similarity: Fraction
    loss_fraction: Fraction
    maxmin_value: Fraction
    subset_sizes: tuple

    @classmethod
    def build(cls, total, opt, maxmin, subset_sizes):
        if opt > 0:
            loss = 1 - Fraction(total) / Fraction(opt)
        else:
            loss = Fraction(0)
        return cls(Fraction(total), Fraction(opt), loss, Fraction(maxmin), tuple(subset_sizes))


def _check_pairs(instance, assignment):
    for a, p in assignment.pairs:
        if not (0 <= a < instance.n and 0 <= p < instance.m):
            raise InvalidAssignmentError(f"pair ({a}, {p}) outside instance range")


def total_similarity(instance, assignment):
    """Sum of similarities over the assigned pairs, as an exact rational."""
    _check_pairs(instance, assignment)
    total = 0
    micros = instance.micros
    for a, p in assignment.pairs:
        total += int(micros[a, p])
    return Fraction(total, SCALE)


def maxmin_value(instance, assignment):
    """Minimum over papers of the total similarity assigned to that paper."""
    _check_pairs(instance, assignment)
    per_paper = [0] * instance.m
    micros = instance.micros
    for a, p in assignment.pairs:
        per_paper[p] += int(micros[a, p])
    return Fraction(min(per_paper), SCALE)


def paper_sides(instance, partition):
    """Subset index per paper, or None where a paper is unconstrained.

    Component-based partitions carry explicit paper subsets; otherwise the
    side of a paper is the common side of its authors. Returns the side
    list and the papers whose authors straddle subsets.
    """
    subsets = partition.paper_subsets()
    if subsets is not None:
        sides = [None] * instance.m
        for idx, s in enumerate(subsets):
            for p in s:
                if 0 <= p < instance.m:
                    sides[p] = idx
        return sides, []
    # Derive sides from authors; a paper whose authors straddle subsets is
    # itself a violation.
    agent_side = {}
    for idx, s in enumerate(partition.agent_subsets()):
        for a in s:
            agent_side[a] = idx
    sides = [None] * instance.m
    straddles = []
    for p in range(instance.m):
        author_sides = {agent_side.get(a) for a in instance.authors_of(p)}
        author_sides.discard(None)
        if len(author_sides) == 1:
            sides[p] = author_sides.pop()
        elif len(author_sides) > 1:
            straddles.append(p)
    return sides, straddles


def validate(instance, assignment, partition=None):
    """Report every violated load, conflict, or partition constraint.

    Violations are data, not exceptions; a feasible input yields an empty
    list. When a partition is supplied, subset disjointness, coverage,
    balance, and the crossing requirement for every assigned pair are all
    checked.
    """
    violations = []
    n, m = instance.n, instance.m
    in_range = []
    for a, p in sorted(assignment.pairs):
        if 0 <= a < n and 0 <= p < m:
            in_range.append((a, p))
        else:
            violations.append(Violation("index-range", f"pair ({a}, {p}) out of range"))

    for a, p in in_range:
        if (a, p) in instance.authorship:
            violations.append(Violation("self-review", f"agent {a} reviews own paper {p}"))

    paper_count = [0] * m
    agent_count = [0] * n
    for a, p in in_range:
        paper_count[p] += 1
        agent_count[a] += 1
    for p in range(m):
        if paper_count[p] != instance.paper_load:
            violations.append(
                Violation(
                    "paper-load",
                    f"paper {p} has {paper_count[p]} reviewers, needs {instance.paper_load}",
                )
            )
    for a in range(n):
        if instance.one_to_one:
            bad = agent_count[a] != instance.agent_load
        else:
            bad = agent_count[a] > instance.agent_load
        if bad:
            violations.append(
                Violation(
                    "agent-load",
                    f"agent {a} assigned {agent_count[a]} papers, load {instance.agent_load}",
                )
            )

    if partition is None:
        return violations

    subsets = partition.agent_subsets()
    seen = set()
    for idx, s in enumerate(subsets):
        overlap = seen & s
        if overlap:
            violations.append(
                Violation("partition-overlap", f"agents {sorted(overlap)} in multiple subsets")
            )
        seen |= s
    missing = set(range(n)) - seen
    if missing:
        violations.append(
            Violation("partition-coverage", f"agents {sorted(missing)} in no subset")
        )
    extra = {a for a in seen if not (0 <= a < n)}
    if extra:
        violations.append(
            Violation("partition-coverage", f"unknown agents {sorted(extra)} in partition")
        )

    sizes = [len(s) for s in subsets]
    if isinstance(partition, Bipartition):
        if instance.one_to_one and sizes[0] != sizes[1]:
            violations.append(
                Violation("partition-balance", f"subset sizes {sizes[0]} != {sizes[1]}")
            )
    elif isinstance(partition, MultiPartition):
        if sizes and max(sizes) - min(sizes) > 1:
            violations.append(
                Violation("partition-balance", f"subset sizes {sizes} differ by more than 1")
            )

    agent_side = {}
    for idx, s in enumerate(subsets):
        for a in s:
            agent_side[a] = idx
    paper_side, straddles = paper_sides(instance, partition)
    for p in straddles:
        violations.append(
            Violation("paper-straddle", f"authors of paper {p} lie in different subsets")
        )
    for a, p in in_range:
        sa = agent_side.get(a)
        sp = paper_side[p]
        if sa is not None and sp is not None and sa == sp:
            violations.append(
                Violation(
                    "intra-subset-pair",
                    f"agent {a} reviews paper {p} inside subset {sa}",
                )
            )
    return violations


def pad_one_to_one(instance, target_n):
    """Extend a one-to-one instance with all-zero dummy agents/papers.

    Returns the padded instance and the tuple of dummy indices. Dummies
    keep load feasibility intact while contributing nothing to any
    objective.
    """
    if not instance.one_to_one:
        raise PreconditionError("padding is defined for one-to-one instances")
    if target_n < instance.n:
        raise PreconditionError("cannot pad to a smaller size")
    if target_n == instance.n:
        return instance, ()
    n = instance.n
    micros = np.zeros((target_n, target_n), dtype=np.int64)
    micros[:n, :n] = instance.micros
    padded = Instance.make_one_to_one(micros, instance.agent_load)
    return padded, tuple(range(n, target_n))
