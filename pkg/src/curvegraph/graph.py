"""Oriented graphs induced by a length function on a catalog.

There is an edge u -> v exactly when u and v are disjoint and L(u) < L(v).
Pairs whose intersection count is not certified never get an edge; they are
listed instead, as are disjoint pairs with equal lengths.
"""

import hashlib
import json
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .catalog import LengthOracle
from .errors import ExtensionNotFound, PreconditionError, WindowTooSmall
from .intersection import geometric_intersection
from .mapping_class import (MappingClassWord, TwistTarget, homology_matrix, humphries_curves,
                            twist_power)
from .words import a, b, canonical_class

TIE_TOL = 1e-12


def _tied(x, y, tol):
    return abs(x - y) <= tol * max(abs(x), abs(y), 1.0)


@dataclass
class OrientedGraph:
    catalog: object
    lengths: dict
    edges: frozenset
    ties: list = field(default_factory=list)
    uncertified: list = field(default_factory=list)
    tie_tol: float = TIE_TOL

    def __post_init__(self):
        self.succ = {i: [] for i in self.lengths}
        for u, v in sorted(self.edges):
            self.succ[u].append(v)

    def has_edge(self, u, v):
        return (u, v) in self.edges

    def precedes(self, u, v):
        """Edge predicate for lengths given explicitly (works for curves outside the window)."""
        return self.lengths[u] < self.lengths[v] and not _tied(self.lengths[u], self.lengths[v], self.tie_tol)

    def to_json(self):
        return {
            "catalog": catalog_hash(self.catalog),
            "edges": [list(e) for e in sorted(self.edges)],
            "ties": [list(e) for e in self.ties],
            "uncertified": [list(e) for e in self.uncertified],
        }

    def to_dot(self):
        lines = ["digraph G {"]
        for e in self.catalog.entries:
            shape = "doublecircle" if e.separating else "circle"
            lines.append(f'  {e.id} [label="{e.id}:{self.lengths[e.id]:.4f}", shape={shape}];')
        for u, v in sorted(self.edges):
            lines.append(f"  {u} -> {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def catalog_hash(cat):
    data = {k: v for k, v in cat.to_json().items() if k != "intersections"}
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()


def build_graph(cat, lengths=None, tie_tol=TIE_TOL):
    """G_L on the catalog; ``lengths`` defaults to the catalog's hyperbolic lengths."""
    L = cat.lengths() if lengths is None else {int(k): float(v) for k, v in dict(lengths).items()}
    ids = [e.id for e in cat.entries]
    if set(L) != set(ids):
        raise PreconditionError("length assignment must be total on the catalog")
    edges, ties, unc = set(), [], []
    for i in ids:
        row = cat.row(i)
        for j in ids[i + 1:]:
            cnt, cert = row[j]
            if not cert:
                unc.append((i, j))
                continue
            if cnt:
                continue
            if _tied(L[i], L[j], tie_tol):
                ties.append((i, j))
            elif L[i] < L[j]:
                edges.add((i, j))
            else:
                edges.add((j, i))
    return OrientedGraph(cat, L, frozenset(edges), ties, unc, tie_tol)


def graph_distance(G, u, v):
    """Length of a shortest directed path, or math.inf."""
    if u == v:
        return 0
    dist = {u: 0}
    q = deque([u])
    while q:
        x = q.popleft()
        for y in G.succ[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == v:
                    return dist[y]
                q.append(y)
    return math.inf


def distances_from(G, u):
    dist = {u: 0}
    q = deque([u])
    while q:
        x = q.popleft()
        for y in G.succ[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def is_automorphism(G, phi):
    """Check (u,v) in G <=> (phi u, phi v) in G over the domain of ``phi``.

    ``phi`` maps ids to ids and must be injective; a partial map is checked
    on the pairs it is defined on. Returns (ok, violation) where the
    violation is (u, v, edge_before, edge_after) or None.
    """
    phi = {int(k): int(v) for k, v in dict(phi).items()}
    if len(set(phi.values())) != len(phi):
        raise PreconditionError("map is not injective")
    ids = sorted(phi)
    for u in ids:
        for v in ids:
            if u == v:
                continue
            before = (u, v) in G.edges
            after = (phi[u], phi[v]) in G.edges
            if before != after:
                return False, (u, v, before, after)
    return True, None


def induced_map(cat, mc):
    """Ids whose image under the mapping class is in the catalog, with the image id."""
    from .mapping_class import apply
    out = {}
    for e in cat.entries:
        j = cat.id_of(apply(mc, e.curve))
        if j is not None:
            out[e.id] = j
    return out


def is_tournament(G, ids):
    ids = list(ids)
    for x, u in enumerate(ids):
        for v in ids[x + 1:]:
            if ((u, v) in G.edges) == ((v, u) in G.edges):
                return False
    return True


def orientation_differences(G1, G2):
    """Pairs oriented one way in G1 and the other way in G2."""
    return sorted((u, v) for u, v in G1.edges if (v, u) in G2.edges)


def extend_to_pants(cat, G, start):
    """Extend a disjoint set to 3g-3 curves with strictly increasing lengths after ``start``."""
    g = cat.genus
    n = 3 * g - 3
    start = [int(x) for x in start]
    if len(start) >= n:
        raise PreconditionError(f"start already has {len(start)} >= {n} curves")
    if len(set(start)) != len(start):
        raise PreconditionError("start has repeated curves")
    for x, u in enumerate(start):
        for v in start[x + 1:]:
            if not cat.disjoint(u, v):
                raise PreconditionError(f"start curves {u} and {v} are not certified disjoint")
    L = G.lengths
    order = sorted(L, key=lambda i: (L[i], i))
    best = list(start)

    def grow(chosen, floor):
        nonlocal best
        if len(chosen) == n:
            return chosen
        if len(chosen) > len(best):
            best = list(chosen)
        for c in order:
            if c in chosen or (floor is not None and not G.precedes(floor, c)):
                continue
            if all(cat.disjoint(c, u) for u in chosen):
                done = grow(chosen + [c], c)
                if done:
                    return done
        return None

    top = max(start, key=lambda i: (L[i], i)) if start else None
    found = grow(list(start), top)
    if found is None:
        raise ExtensionNotFound("no completion inside the catalog window", best)
    return found


# -- the non-separating criterion ------------------------------------------

@dataclass
class ProbeReport:
    alpha: int
    separating: bool
    beta1: int
    beta2: int
    gamma0: object = None
    gammas: list = field(default_factory=list)
    searched: int = 0
    qualifying: list = field(default_factory=list)
    horizon: float = math.inf

    def to_json(self):
        out = {"alpha": self.alpha, "separating": self.separating, "beta1": self.beta1,
               "beta2": self.beta2, "horizon": self.horizon}
        if self.separating:
            out["searched"] = self.searched
            out["qualifying"] = list(self.qualifying)
        else:
            out["gamma0"] = self.gamma0
            out["gammas"] = self.gammas
        return out


def _twist_target(cat, e):
    """TwistTarget for a catalog entry reached from a chain curve, else None."""
    g = cat.genus
    chain = humphries_curves(g)
    seed = cat.seeds[e.seed]
    if seed not in chain:
        return None
    return TwistTarget(chain.index(seed) + 1, MappingClassWord(g, e.twists))


def nonseparating_probe(cat, G, alpha, K=5):
    """Run the construction behind the separating/non-separating criterion at ``alpha``.

    Non-separating alpha: pick beta1, beta2 with d(alpha, beta_i) = 1 and a
    gamma0 disjoint from alpha meeting both, then report gamma_k =
    T_beta1^k gamma0 for the first K admissible k. Separating alpha: pick
    beta1, beta2 on the two sides and search the window exhaustively for a
    gamma that would satisfy the criterion (there should be none).
    """
    if not isinstance(K, int) or K < 1:
        raise PreconditionError("K must be a positive integer")
    ea = cat.entries[alpha]
    nbrs = [v for v in G.succ[alpha]]
    nbrs.sort(key=lambda i: (G.lengths[i], i))
    if ea.separating:
        return _separating_probe(cat, G, alpha, nbrs)
    for b1 in nbrs:
        target = _twist_target(cat, cat.entries[b1])
        if target is None:
            continue
        for b2 in nbrs:
            if b2 == b1:
                continue
            for c in sorted(range(len(cat)), key=lambda i: (G.lengths[i], i)):
                if not cat.disjoint(alpha, c) or c == alpha:
                    continue
                i1, ok1 = cat.intersection(b1, c)
                i2, ok2 = cat.intersection(b2, c)
                if ok1 and ok2 and i1 > 0 and i2 > 0:
                    gam = _gamma_sequence(cat, G, alpha, b1, b2, target, c, K)
                    return ProbeReport(alpha, False, b1, b2, c, gam, horizon=cat.stability_horizon)
    raise WindowTooSmall("no beta1, beta2, gamma0 configuration in the catalog window")


def _gamma_sequence(cat, G, alpha, b1, b2, target, c0, K, kmax=200):
    h = cat.holonomy
    length = LengthOracle(h)
    A = cat.entries[alpha].curve
    B1 = cat.entries[b1].curve
    B2 = cat.entries[b2].curve
    la_, l1, l2 = G.lengths[alpha], G.lengths[b1], G.lengths[b2]
    out, seen = [], set()
    gam = cat.entries[c0].curve
    for k in range(1, kmax + 1):
        gam = twist_power(target, 1, gam)
        if gam in seen:
            raise PreconditionError("twist sequence repeated a class")
        seen.add(gam)
        lg = length(gam)
        ia = geometric_intersection(h, A, gam)
        i1 = geometric_intersection(h, B1, gam)
        i2 = geometric_intersection(h, B2, gam)
        edge_a = ia.count == 0 and ia.certified and la_ < lg and not _tied(la_, lg, G.tie_tol)
        edge_1 = i1.count == 0 and l1 < lg and not _tied(l1, lg, G.tie_tol)
        edge_2 = i2.count == 0 and l2 < lg and not _tied(l2, lg, G.tie_tol)
        certified = ia.certified and i1.certified and i2.certified
        # the proof drops finitely many initial terms; we keep the admissible ones
        if edge_a and not edge_1 and not edge_2 and i1.count > 0 and i2.count > 0 and certified:
            out.append({"k": k, "word": list(gam.word), "length": lg, "id": cat.id_of(gam),
                        "i_alpha": ia.count, "i_beta1": i1.count, "i_beta2": i2.count,
                        "d_alpha": 1, "d_beta1_is_1": False, "d_beta2_is_1": False})
            if len(out) == K:
                return out
    raise WindowTooSmall(f"only {len(out)} admissible gamma_k for k <= {kmax}")


def _sides(cat, e):
    """Homology subspaces of the two sides of a separating entry reached from a handle commutator."""
    g = cat.genus
    seed = cat.seeds[e.seed]
    for k in range(1, g + 1):
        if seed == canonical_class((a(k), b(k), -a(k), -b(k)), g):
            M = np.array(homology_matrix(MappingClassWord(g, e.twists)), dtype=float)
            inside = [2 * k - 2, 2 * k - 1]
            outside = [i for i in range(2 * g) if i not in inside]
            return M[:, inside], M[:, outside]
    return None


def _in_span(basis, v):
    x, *_ = np.linalg.lstsq(basis, v, rcond=None)
    return np.allclose(basis @ x, v, atol=1e-9)


def _separating_probe(cat, G, alpha, nbrs):
    sides = _sides(cat, cat.entries[alpha])
    if sides is None:
        raise WindowTooSmall("separating entry does not come from a handle commutator")

    def side(i):
        v = np.array(cat.entries[i].homology, dtype=float)
        if not v.any():
            return None
        if _in_span(sides[0], v):
            return 0
        if _in_span(sides[1], v):
            return 1
        return None

    pair = None
    for x, u in enumerate(nbrs):
        for v in nbrs[x + 1:]:
            su, sv = side(u), side(v)
            if su is not None and sv is not None and su != sv and cat.disjoint(u, v):
                pair = (u, v)
                break
        if pair:
            break
    if pair is None:
        raise WindowTooSmall("no beta pair on opposite sides in the window")
    b1, b2 = pair
    top = max(G.lengths[b1], G.lengths[b2])
    searched, qual = 0, []
    for c in range(len(cat)):
        if c in (alpha, b1, b2) or not G.lengths[c] > top:
            continue
        searched += 1
        if (alpha, c) in G.edges and (b1, c) not in G.edges and (b2, c) not in G.edges:
            qual.append(c)
    return ProbeReport(alpha, True, b1, b2, searched=searched, qualifying=qual,
                       horizon=cat.stability_horizon)
