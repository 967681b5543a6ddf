"""Recognition and construction of population monotonic allocation schemes.

A vertex cover game admits such a scheme exactly when every component of the
graph is a tree of diameter at most 3, i.e. a star or a pisces (two stars
joined by an edge between their centers).  The non-pendant edge of a pisces
is its free rider: any cover of the accompanying edges covers it for free.

The constructive scheme splits each chosen cover vertex's unit cost equally
among the non-free-rider coalition edges it covers; an accompanied free rider
pays nothing and a lone free rider pays the full unit.  The dual-side checks
certify allocations against the fractional cover relaxation of the coalition
subgraph: feasibility (nonnegative, per-vertex load at most one), optimality
(total equal to the coalition cost), and membership in the tight face with
unit load exactly at every chosen cover vertex and zeros on accompanied free
riders.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (ContractViolation, MalformedScheme, NotPopulationMonotonic,
                     OracleCapError)
from .game import DEFAULT_EDGE_CAP, VertexCoverGame, all_coalitions
from .graph import Coalition, Graph, SubgraphView, find_forbidden_subgraph

ZERO = Fraction(0)
ONE = Fraction(1)

FORBIDDEN = ("K3", "C4", "P5")


@lru_cache(maxsize=None)
def unit_share(k: int) -> Fraction:
    return Fraction(1, k)


def fraction_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ComponentClassification:
    """Shape of one connected component of a population-monotonic graph.

    cover holds the single center of a star (or the designated endpoint of a
    lone edge), or both bases of a pisces in label order; pendants maps each
    cover vertex to its non-free-rider incident edges.
    """

    kind: str  # "star" | "pisces" | "single-edge"
    edges: Coalition
    cover: tuple[str, ...]
    free_rider: int | None
    pendants: dict[str, tuple[int, ...]]


def _component_shape(graph: Graph, view: SubgraphView, comp: Coalition):
    """Classify one component as star/pisces/single edge, or None if neither."""
    comp_vertices = sorted({w for i in comp for w in graph.edges[i]})
    if len(comp) != len(comp_vertices) - 1:
        return None  # has a cycle
    non_pendant = [v for v in comp_vertices if view.degree(v) >= 2]
    if len(comp) == 1:
        i = next(iter(comp))
        center = min(graph.edges[i])
        return ComponentClassification("single-edge", comp, (center,), None, {center: (i,)})
    if len(non_pendant) == 1:
        center = non_pendant[0]
        return ComponentClassification("star", comp, (center,), None,
                                       {center: tuple(sorted(comp))})
    if len(non_pendant) == 2:
        pair = set(non_pendant)
        riders = [i for i in comp if set(graph.edges[i]) == pair]
        if not riders:
            return None
        rider = riders[0]
        pendants = {b: tuple(i for i in view.incident[b] if i != rider)
                    for b in non_pendant}
        return ComponentClassification("pisces", comp, tuple(non_pendant), rider, pendants)
    return None  # diameter exceeds 3


def _classify(graph: Graph):
    """All component shapes, or a forbidden-subgraph witness."""
    view = SubgraphView(graph, graph.players())
    shapes = []
    for comp in view.components():
        shape = _component_shape(graph, view, comp)
        if shape is None:
            for pattern in FORBIDDEN:
                witness = find_forbidden_subgraph(graph, pattern)
                if witness is not None:
                    return None, (pattern, witness)
            raise AssertionError("unclassifiable component without a forbidden subgraph")
        shapes.append(shape)
    return shapes, None


def recognize_population_monotonic(graph: Graph):
    """(True, None) when every component is a star or pisces, else
    (False, (pattern, vertex sequence)) with a concrete forbidden subgraph."""
    shapes, witness = _classify(graph)
    return witness is None, witness


def classify_components(graph: Graph):
    """Component classifications plus the cover system.

    Raises NotPopulationMonotonic (with the witness) on unrecognizable graphs.
    """
    shapes, witness = _classify(graph)
    if witness is not None:
        raise NotPopulationMonotonic(*witness)
    return shapes, CoverSystem(graph, shapes)


class CoverSystem:
    """Global minimum cover made of centers and bases, with a deterministic
    per-coalition selector.

    The selector picks, inside each component of the coalition subgraph, the
    vertex that covers it (both bases when the component is itself a pisces);
    a component that is a lone free rider gets the smaller endpoint label.
    """

    def __init__(self, graph: Graph, comps) -> None:
        self.graph = graph
        self.components = list(comps)
        self.cover = tuple(sorted(v for c in self.components for v in c.cover))
        self.free_riders = frozenset(
            c.free_rider for c in self.components if c.free_rider is not None)
        anchor: dict[int, str] = {}
        comp_of: dict[int, int] = {}
        sides: dict[int, tuple[frozenset[int], frozenset[int]]] = {}
        for pos, c in enumerate(self.components):
            for i in c.edges:
                comp_of[i] = pos
            for v, es in c.pendants.items():
                for i in es:
                    anchor[i] = v
            if c.kind == "pisces":
                b1, b2 = c.cover
                sides[pos] = (frozenset(c.pendants[b1]), frozenset(c.pendants[b2]))
        self._anchor = anchor
        self._comp_of = comp_of
        self._sides = sides
        self._cover_memo: dict[Coalition, tuple[str, ...]] = {}

    def component_of(self, i: int) -> ComponentClassification:
        return self.components[self._comp_of[i]]

    def anchor(self, i: int) -> str:
        """The unique global-cover vertex covering a non-free-rider edge."""
        try:
            return self._anchor[i]
        except KeyError:
            raise ContractViolation(f"edge {i} is a free rider") from None

    def is_free_rider(self, i: int) -> bool:
        return i in self.free_riders

    def accompanied(self, coalition, i: int) -> bool:
        """Does free rider i share a vertex with another coalition edge?"""
        c = self.component_of(i)
        return any(j in coalition for j in c.edges if j != i)

    def cover_for(self, coalition) -> tuple[str, ...]:
        """Deterministic minimum cover of the coalition subgraph within the
        global cover, as a sorted label tuple."""
        s = coalition if isinstance(coalition, frozenset) else frozenset(coalition)
        hit = self._cover_memo.get(s)
        if hit is not None:
            return hit
        chosen: set[str] = set()
        buckets: dict[int, list[int]] = {}
        for i in s:
            buckets.setdefault(self._comp_of[i], []).append(i)
        for pos, edges_in in buckets.items():
            c = self.components[pos]
            if c.kind != "pisces":
                chosen.add(c.cover[0])
                continue
            b1, b2 = c.cover
            side1, side2 = self._sides[pos]
            has1 = any(i in side1 for i in edges_in)
            has2 = any(i in side2 for i in edges_in)
            if has1:
                chosen.add(b1)
            if has2:
                chosen.add(b2)
            if not has1 and not has2:
                chosen.add(min(b1, b2))  # lone free rider
        result = tuple(sorted(chosen))
        self._cover_memo[s] = result
        return result

    def split_count(self, coalition, i: int) -> int:
        """Number of non-free-rider coalition edges sharing i's covering vertex
        (at least 1 since i itself counts)."""
        s = coalition if isinstance(coalition, frozenset) else frozenset(coalition)
        if i not in s:
            raise ContractViolation(f"edge {i} is not in the coalition")
        v = self.anchor(i)
        return sum(1 for j in self.graph.incident_edges(v)
                   if j in s and j not in self.free_riders)


class AllocationScheme:
    """Per-coalition payment vectors, backed by a rule (lazy) or a full table.

    Vectors are cached per coalition and returned by reference; callers must
    treat them as read-only.
    """

    def __init__(self, graph: Graph, *, rule=None, table=None) -> None:
        if (rule is None) == (table is None):
            raise ValueError("exactly one of rule= or table= is required")
        self.graph = graph
        self._players = graph.players()
        self._rule = rule
        self._cache: dict[Coalition, dict[int, Fraction]] = {}
        if table is not None:
            for s, vec in table.items():
                self._cache[frozenset(s)] = {int(i): Fraction(v) for i, v in vec.items()}

    @property
    def lazy(self) -> bool:
        return self._rule is not None

    def allocation(self, coalition) -> dict[int, Fraction]:
        s = coalition if isinstance(coalition, frozenset) else frozenset(coalition)
        hit = self._cache.get(s)
        if hit is not None:
            return hit
        if not s:
            raise ContractViolation("the empty coalition has no allocation")
        if not s <= self._players:
            raise ContractViolation("coalition contains unknown players")
        if self._rule is None:
            members = ",".join(str(i) for i in sorted(s))
            raise MalformedScheme(f"scheme is missing coalition {{{members}}}")
        vec = self._rule(s)
        self._cache[s] = vec
        return vec

    def materialize(self, *, max_edges: int = DEFAULT_EDGE_CAP):
        """Full table over every nonempty coalition (capped by edge count)."""
        n = self.graph.n_edges
        if n > max_edges:
            raise OracleCapError(
                f"materializing a scheme over {n} edges exceeds the {max_edges}-edge cap")
        coalitions = all_coalitions(n)
        out: dict[Coalition, dict[int, Fraction]] = {}
        for m in range(1, 1 << n):
            s = coalitions[m]
            out[s] = dict(self.allocation(s))
        return out


def construct_pmas(graph: Graph) -> AllocationScheme:
    """Rule-backed scheme for a population-monotonic graph.

    Per coalition: an accompanied free rider pays 0, a lone free rider pays 1,
    and every other edge pays 1/k where k counts the non-free-rider coalition
    edges at its covering vertex.
    """
    _, cover = classify_components(graph)
    comp_of = cover._comp_of
    sides = cover._sides
    classifications = cover.components

    def rule(s: Coalition) -> dict[int, Fraction]:
        alloc: dict[int, Fraction] = {}
        buckets: dict[int, list[int]] = {}
        for i in s:
            buckets.setdefault(comp_of[i], []).append(i)
        for pos, edges_in in buckets.items():
            c = classifications[pos]
            if c.kind != "pisces":
                pay = unit_share(len(edges_in))
                for i in edges_in:
                    alloc[i] = pay
                continue
            side1, side2 = sides[pos]
            at1 = [i for i in edges_in if i in side1]
            at2 = [i for i in edges_in if i in side2]
            has_rider = len(at1) + len(at2) < len(edges_in)
            if has_rider and not at1 and not at2:
                alloc[c.free_rider] = ONE
                continue
            if at1:
                pay = unit_share(len(at1))
                for i in at1:
                    alloc[i] = pay
            if at2:
                pay = unit_share(len(at2))
                for i in at2:
                    alloc[i] = pay
            if has_rider:
                alloc[c.free_rider] = ZERO
        return alloc

    return AllocationScheme(graph, rule=rule)


@dataclass(frozen=True)
class Violation:
    """First failed scheme constraint, with both sides of the comparison."""

    kind: str  # "efficiency" | "monotonicity"
    coalition: Coalition
    superset: Coalition | None
    edge: int | None
    lhs: Fraction
    rhs: Fraction

    def __str__(self) -> str:
        members = sorted(self.coalition)
        if self.kind == "efficiency":
            return (f"efficiency violated on {members}: allocations sum to "
                    f"{self.lhs}, cost is {self.rhs}")
        return (f"monotonicity violated: edge {self.edge} pays {self.lhs} in "
                f"{members} but {self.rhs} in {sorted(self.superset)}")

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind, "coalition": sorted(self.coalition)}
        if self.superset is not None:
            out["superset"] = sorted(self.superset)
        if self.edge is not None:
            out["edge"] = self.edge
        out["lhs"] = fraction_str(Fraction(self.lhs))
        out["rhs"] = fraction_str(Fraction(self.rhs))
        return out


def verify_pmas(game: VertexCoverGame, scheme: AllocationScheme, *,
                max_edges: int = DEFAULT_EDGE_CAP):
    """Exhaustively check a candidate scheme: efficiency on every nonempty
    coalition, then monotonicity on every covering pair (covering pairs
    suffice by transitivity).

    Returns (True, None) or (False, first Violation); efficiency is scanned
    in ascending coalition bitmask order, monotonicity in ascending (superset,
    dropped edge) order.  A missing or misindexed coalition raises
    MalformedScheme.
    """
    n = game.n
    if n > max_edges:
        raise OracleCapError(f"verifying over {n} edges exceeds the {max_edges}-edge cap")
    table = game.cost_table(max_edges)
    size = 1 << n
    coalitions = all_coalitions(n)
    vec: list[dict[int, Fraction] | None] = [None] * size
    for m in range(1, size):
        s = coalitions[m]
        a = scheme.allocation(s)
        if a.keys() != s:
            raise MalformedScheme(
                f"allocation for {sorted(s)} is not indexed by its members")
        a = _as_fractions(a)
        # exact sum as an integer over the common denominator; Fraction's
        # _numerator/_denominator slots skip the property descriptors
        den = 1
        total = 0
        for value in a.values():
            d = value._denominator
            if den % d:
                den = den * d // math.gcd(den, d)
        if den == 1:
            for value in a.values():
                total += value._numerator
        else:
            for value in a.values():
                total += value._numerator * (den // value._denominator)
        if total != table[m] * den:
            return False, Violation("efficiency", s, None, None,
                                    Fraction(total, den), Fraction(table[m]))
        vec[m] = a
    for t in range(1, size):
        at = vec[t]
        rem = t
        while rem:
            bit = rem & -rem
            rem ^= bit
            sm = t ^ bit
            if sm == 0:
                continue
            for i, x in vec[sm].items():
                y = at[i]
                if x is y:
                    continue
                if x < y:
                    return False, Violation("monotonicity", coalitions[sm],
                                            coalitions[t], i, x, y)
    return True, None


def _as_fractions(x):
    """The allocation with every value a true Fraction (no-op in the common
    case; coerces ints or other exact rationals)."""
    for value in x.values():
        if type(value) is not Fraction:
            return {i: Fraction(v) for i, v in x.items()}
    return x


def _scaled_profile(graph: Graph, coalition, x):
    """Exact per-vertex loads of an allocation as integers over a common
    denominator; comparisons against 0/1 then reduce to integer arithmetic.

    Returns (loads, den, total, negative) with loads[v]/den the true rational
    load at v and total/den the payment sum.  Raises when x is not indexed by
    the coalition.
    """
    s = coalition if isinstance(coalition, frozenset) else frozenset(coalition)
    if x.keys() != s:
        raise ContractViolation("allocation must be indexed by the coalition")
    x = _as_fractions(x)
    # Fraction's _numerator/_denominator slots skip the property descriptors
    den = 1
    for value in x.values():
        d = value._denominator
        if den % d:
            den = den * d // math.gcd(den, d)
    loads: dict[str, int] = {}
    total = 0
    negative = False
    edges = graph.edges
    get = loads.get
    if den == 1:
        for i, value in x.items():
            num = value._numerator
            if num < 0:
                negative = True
            total += num
            u, w = edges[i]
            loads[u] = get(u, 0) + num
            loads[w] = get(w, 0) + num
    else:
        for i, value in x.items():
            num = value._numerator * (den // value._denominator)
            if num < 0:
                negative = True
            total += num
            u, w = edges[i]
            loads[u] = get(u, 0) + num
            loads[w] = get(w, 0) + num
    return loads, den, total, negative


def check_dual_feasible(graph: Graph, coalition, x) -> bool:
    """Feasibility for the fractional-cover dual on the coalition subgraph:
    nonnegative payments with per-vertex load at most one."""
    loads, den, _, negative = _scaled_profile(graph, coalition, x)
    if negative:
        return False
    for load in loads.values():
        if load > den:
            return False
    return True


def check_dual_optimal(game: VertexCoverGame, coalition, x) -> bool:
    """Dual feasibility plus total payment equal to the coalition cost
    (the dual optimum on the bipartite subgraphs in scope)."""
    s = coalition if isinstance(coalition, frozenset) else frozenset(coalition)
    loads, den, total, negative = _scaled_profile(game.graph, s, x)
    if negative:
        return False
    for load in loads.values():
        if load > den:
            return False
    return total == game.gamma(s) * den


def check_pi_star(graph: Graph, coalition, x, cover: CoverSystem) -> bool:
    """Membership in the tight optimal face: dual feasible, unit load exactly
    at every selected cover vertex, zero on accompanied free riders."""
    s = coalition if isinstance(coalition, frozenset) else frozenset(coalition)
    loads, den, _, negative = _scaled_profile(graph, s, x)
    if negative:
        return False
    for load in loads.values():
        if load > den:
            return False
    for vertex in cover.cover_for(s):
        if loads[vertex] != den:
            return False
    for i in s:
        if i in cover.free_riders and x[i] != 0 and cover.accompanied(s, i):
            return False
    return True


# --- scheme serialization --------------------------------------------------------


def coalition_key(coalition) -> str:
    return ",".join(str(i) for i in sorted(coalition))


def scheme_table_to_jsonable(table) -> dict:
    """Deterministic JSON object for a materialized table: coalition keys
    ordered by index tuple, rationals rendered as "p/q"."""
    out: dict = {}
    for s in sorted(table, key=lambda c: tuple(sorted(c))):
        vec = table[s]
        out[coalition_key(s)] = {str(i): fraction_str(vec[i]) for i in sorted(vec)}
    return out


def scheme_to_json(scheme: AllocationScheme, *, max_edges: int = DEFAULT_EDGE_CAP) -> str:
    return json.dumps(scheme_table_to_jsonable(scheme.materialize(max_edges=max_edges)),
                      indent=2)


def scheme_from_json(graph: Graph, text: str) -> AllocationScheme:
    """Parse the JSON scheme format back into a table-backed scheme."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedScheme(f"scheme file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise MalformedScheme("scheme JSON must be an object keyed by coalitions")
    table: dict[Coalition, dict[int, Fraction]] = {}
    for key, vec in raw.items():
        try:
            s = frozenset(int(p) for p in key.split(","))
            entries = {int(i): Fraction(v) for i, v in vec.items()}
        except (ValueError, TypeError, ZeroDivisionError, AttributeError) as exc:
            raise MalformedScheme(f"bad scheme entry for coalition {key!r}: {exc}") from exc
        table[s] = entries
    return AllocationScheme(graph, table=table)
