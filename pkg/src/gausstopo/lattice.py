"""Lattice geometry, cluster and surface-code graphs, nullifiers.

Cluster nodes are labelled 1-based (row, col) with node id
(row-1)*cols + (col-1).  The measurement pattern puts p-measurements on
(odd, odd) sites, q-measurements on (even, even) sites and keeps the
mixed-parity sites, which become the surface-code modes.

The surface-code lattice Lambda = (V, E, F) is recovered from an
even x even cluster: p-measured sites are the vertices, q-measured sites
the faces, kept sites the edges.
"""

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .engine import GaussGraph, symplectic_form
from .errors import ValidationError
from . import engine

BOUNDARIES = ("torus", "planar")


@dataclass(frozen=True)
class LatticeSpec:
    """Square-lattice geometry and squeezing.

    Parameters
    ----------
    rows, cols : int
        Lattice dimensions.  Planar lattices allow dimensions down to 1;
        a torus needs at least 2 in each direction.
    boundary : str
        'torus' or 'planar'.
    log_s : float
        Base-e log of the squeezing parameter s.
    """

    rows: int
    cols: int
    boundary: str = "torus"
    log_s: float = 0.0

    def __post_init__(self):
        if self.boundary not in BOUNDARIES:
            raise ValidationError("boundary must be one of %s" % (BOUNDARIES,))
        low = 2 if self.boundary == "torus" else 1
        if self.rows < low or self.cols < low:
            raise ValidationError("lattice dimensions too small for %s boundary" % self.boundary)

    @property
    def s(self):
        return float(np.exp(self.log_s))

    @property
    def n_nodes(self):
        return self.rows * self.cols

    @property
    def even_parity(self):
        """True when both dimensions are even (torus spectrum formulas)."""
        return self.rows % 2 == 0 and self.cols % 2 == 0

    def node_id(self, row, col):
        """0-based node id from 1-based (row, col) labels, with torus wrap."""
        if self.boundary == "torus":
            row = (row - 1) % self.rows + 1
            col = (col - 1) % self.cols + 1
        if not (1 <= row <= self.rows and 1 <= col <= self.cols):
            raise ValidationError("(%d, %d) outside the lattice" % (row, col))
        return (row - 1) * self.cols + (col - 1)


def cluster_adjacency(spec):
    """Square-lattice adjacency A_d (4-regular on a torus).

    Multi-edges from wrapping dims < 3 saturate at 1 (simple-graph
    convention); self-loops are dropped.
    """
    rows, cols = spec.rows, spec.cols
    n = rows * cols
    adj = np.zeros((n, n))
    torus = spec.boundary == "torus"
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            for dr, dc in ((0, 1), (1, 0)):
                rr, cc = r + dr, c + dc
                if torus or (rr < rows and cc < cols):
                    j = (rr % rows) * cols + (cc % cols)
                    if j != i:
                        adj[i, j] = adj[j, i] = 1.0
    return adj


def cluster_graph(spec):
    """Cluster-state graph Z = A_d + i s^-2 I."""
    s = spec.s
    return GaussGraph(cluster_adjacency(spec), s ** -2 * np.eye(spec.n_nodes))


def measurement_pattern(spec):
    """Return (q_nodes, p_nodes, kept_nodes) as sorted 0-based id lists."""
    q_nodes, p_nodes, kept = [], [], []
    for row in range(1, spec.rows + 1):
        for col in range(1, spec.cols + 1):
            i = (row - 1) * spec.cols + (col - 1)
            if row % 2 == 1 and col % 2 == 1:
                p_nodes.append(i)
            elif row % 2 == 0 and col % 2 == 0:
                q_nodes.append(i)
            else:
                kept.append(i)
    return q_nodes, p_nodes, kept


def surface_code_adjacency(spec):
    """Degree-6 surface-code mode adjacency A_SC on the rows x cols mode grid.

    Square lattice plus both diagonals through every plaquette whose
    lower-left corner (x, y) has x + y even.  The wrap is consistent only
    for even dimensions on a torus.
    """
    n, m = spec.rows, spec.cols
    total = n * m
    torus = spec.boundary == "torus"
    adj = np.zeros((total, total))

    def idx(x, y):
        return (x % n) * m + (y % m)

    for x in range(n):
        for y in range(m):
            i = idx(x, y)
            for dx, dy in ((0, 1), (1, 0)):
                xx, yy = x + dx, y + dy
                if torus or (xx < n and yy < m):
                    j = idx(xx, yy)
                    if j != i:
                        adj[i, j] = adj[j, i] = 1.0
            if (x + y) % 2 == 0 and (torus or (x + 1 < n and y + 1 < m)):
                for (xa, ya), (xb, yb) in (((x, y), (x + 1, y + 1)),
                                           ((x + 1, y), (x, y + 1))):
                    i2, j2 = idx(xa, ya), idx(xb, yb)
                    if i2 != j2:
                        adj[i2, j2] = adj[j2, i2] = 1.0
    return adj


def surface_code_graph_analytic(spec):
    """Closed-form surface-code graph V = 0, U = s^2 A_SC + (s^-2 + 2s^2) I.

    `spec` dimensions count surface-code modes.  Exact on an even x even
    torus; a planar spec returns the bulk pattern and warns that the
    boundary rows are approximate.
    """
    if spec.boundary == "planar":
        warnings.warn("planar closed form is the bulk pattern; boundary modes are approximate")
    s = spec.s
    adj = surface_code_adjacency(spec)
    u = s ** 2 * adj + (s ** -2 + 2 * s ** 2) * np.eye(spec.n_nodes)
    return GaussGraph(None, u)


def kept_mode_adjacency(spec):
    """Surface-code adjacency on the kept cluster modes.

    Two kept modes are adjacent exactly when they neighbor a common
    p-measured node.  This is the graph the measurement pipeline produces;
    on a torus it is the same bulk graph as `surface_code_adjacency` with a
    diagonal torus identification.
    """
    adj_cluster = cluster_adjacency(spec)
    _, p_nodes, kept = measurement_pattern(spec)
    pos = {k: i for i, k in enumerate(kept)}
    m = len(kept)
    adj = np.zeros((m, m))
    for pk in p_nodes:
        nbrs = np.flatnonzero(adj_cluster[pk])
        nbrs = [pos[j] for j in nbrs if j in pos]
        for a in nbrs:
            for b in nbrs:
                if a != b:
                    adj[a, b] = 1.0
    return adj


def map_cluster_to_surface(spec):
    """Run the measurement pipeline on the cluster state.

    Returns
    -------
    graph : GaussGraph
        State of the kept modes (p-measured then q-measured nodes removed).
    index_map : list of (row, col)
        1-based cluster coordinates of each kept mode, in mode order.
    """
    graph = cluster_graph(spec)
    q_nodes, p_nodes, kept = measurement_pattern(spec)
    kind = {}
    for i in p_nodes:
        kind[i] = "p"
    for i in q_nodes:
        kind[i] = "q"
    for node in sorted(kind, reverse=True):
        if kind[node] == "p":
            graph = engine.measure_p(graph, node)
        else:
            graph = engine.measure_q(graph, node)
    index_map = [(k // spec.cols + 1, k % spec.cols + 1) for k in kept]
    return graph, index_map


def rescale_gauge(graph, weight, eps):
    """Undo a uniform edge weight g by local q-squeezes.

    The input must have the form Z = weight * V0 + i eps I; the output is
    Z / weight = V0 + i (eps / weight) I together with the effective
    squeezing s_tilde = sqrt(weight / eps).

    Returns
    -------
    (GaussGraph, float)
    """
    if not 0.0 < weight <= 0.25:
        raise ValidationError("weight must lie in (0, 1/4]")
    if eps <= 0:
        raise ValidationError("eps must be positive")
    n = graph.n_modes
    u = graph.u_part
    if np.abs(u - eps * np.eye(n)).max() > 1e-10 * max(1.0, eps):
        raise ValidationError("graph does not have the form Z = w V0 + i eps I")
    root = np.sqrt(weight)
    a = root * np.eye(n)
    d = np.eye(n) / root
    zero = np.zeros((n, n))
    out = engine.apply_symplectic(graph, a, zero, zero, d)
    return out, float(np.sqrt(weight / eps))


class SurfaceGraph:
    """Oriented surface-code lattice Lambda = (V, E, F) from a cluster spec.

    Vertices are the p-measured cluster sites, faces the q-measured sites
    and edges the kept sites (the surface-code modes, indexed in kept-mode
    order so nullifier vectors act directly on pipeline states).
    """

    def __init__(self, spec):
        if spec.boundary == "torus" and not spec.even_parity:
            raise ValidationError("torus surface graph requires even dimensions")
        self.spec = spec
        q_nodes, p_nodes, kept = measurement_pattern(spec)
        self.vertices = list(range(len(p_nodes)))
        self.faces = list(range(len(q_nodes)))
        self.edges = list(range(len(kept)))
        self._vertex_site = p_nodes
        self._face_site = q_nodes
        self._edge_site = kept
        kept_pos = {k: i for i, k in enumerate(kept)}
        cols, rows = spec.cols, spec.rows
        torus = spec.boundary == "torus"

        def site(r0, c0):
            # 0-based coordinates with optional wrap; None when off-lattice
            if torus:
                r0 %= rows
                c0 %= cols
            if not (0 <= r0 < rows and 0 <= c0 < cols):
                return None
            return r0 * cols + c0

        # edge endpoints: the (up to) two vertex neighbors of each kept site
        vertex_pos = {k: i for i, k in enumerate(p_nodes)}
        self.edge_endpoints = []
        for k in kept:
            r0, c0 = k // cols, k % cols
            ends = []
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                sid = site(r0 + dr, c0 + dc)
                if sid in vertex_pos:
                    ends.append(vertex_pos[sid])
            self.edge_endpoints.append(tuple(sorted(set(ends))))
        # face boundaries with the sign pattern N,S:+ / E,W:- required by
        # the positive commutator closed form on neighboring faces
        self.face_boundaries = []
        for k in q_nodes:
            r0, c0 = k // cols, k % cols
            boundary = []
            for dr, dc, sign in ((-1, 0, 1.0), (1, 0, 1.0), (0, -1, -1.0), (0, 1, -1.0)):
                sid = site(r0 + dr, c0 + dc)
                if sid in kept_pos:
                    boundary.append((kept_pos[sid], sign))
            self.face_boundaries.append(boundary)
        # edges incident on each vertex
        self.vertex_edges = [[] for _ in self.vertices]
        for e, ends in enumerate(self.edge_endpoints):
            for v in ends:
                self.vertex_edges[v].append(e)
        # vertex neighbors through a shared edge
        self.vertex_neighbors = [set() for _ in self.vertices]
        for ends in self.edge_endpoints:
            if len(ends) == 2:
                a, b = ends
                self.vertex_neighbors[a].add(b)
                self.vertex_neighbors[b].add(a)
        self.adjacency_sc = kept_mode_adjacency(spec)

    @property
    def n_modes(self):
        return len(self.edges)

    def valence(self, v):
        """Vertex valence V(v)."""
        return len(self.vertex_edges[v])

    def vertex_coords(self, v):
        """Integer coordinates of vertex v on the unit-edge-length lattice."""
        k = self._vertex_site[v]
        return (k // self.spec.cols) // 2, (k % self.spec.cols) // 2

    def face_coords(self, f):
        """Integer coordinates of face f on the dual lattice."""
        k = self._face_site[f]
        return (k // self.spec.cols - 1) // 2, (k % self.spec.cols - 1) // 2

    def lattice_distance(self, coords_a, coords_b, dual=False):
        """Euclidean distance between lattice coordinates, min over wraps."""
        rows = self.spec.rows // 2
        cols = self.spec.cols // 2
        da = abs(coords_a[0] - coords_b[0])
        db = abs(coords_a[1] - coords_b[1])
        if self.spec.boundary == "torus":
            da = min(da, rows - da)
            db = min(db, cols - db)
        return float(np.hypot(da, db))

    def to_json(self):
        record = {
            "rows": self.spec.rows,
            "cols": self.spec.cols,
            "boundary": self.spec.boundary,
            "edge_endpoints": [list(e) for e in self.edge_endpoints],
            "face_boundaries": [[[e, s] for e, s in fb] for fb in self.face_boundaries],
        }
        return json.dumps(record)


class NullifierSet:
    """Vertex and face nullifier coefficient vectors over (q.., p..).

    Each nullifier is eta = c . r with r = (q_1..q_N, p_1..p_N) and
    [eta, eta^dagger] = 1.
    """

    def __init__(self, vertex_nullifiers, face_nullifiers, norm_sprime, norm_sv):
        self.vertex_nullifiers = vertex_nullifiers
        self.face_nullifiers = face_nullifiers
        self.norm_sprime = norm_sprime
        self.norm_sv = norm_sv


def nullifier_vectors(sg, s):
    """Build the finitely squeezed nullifier set for a surface graph.

    Vertex nullifiers use the general form with next-nearest q-terms of
    weight s^2/s_v^2 (the inner sum over neighbor-incident edges includes
    the edges shared with v); face nullifiers carry the signed p - iq/s^2
    pattern.  Incomplete boundary vertices/faces simply omit missing modes.
    """
    n = sg.n_modes
    norm_sv = []
    vertex_nullifiers = []
    for v in sg.vertices:
        val = sg.valence(v)
        s_v = np.sqrt(val * s ** 2 + s ** -2)
        norm_sv.append(float(s_v))
        pref = s_v / np.sqrt(2 * val * (1 + (s / s_v) ** 2))
        vec = np.zeros(2 * n, dtype=complex)
        for e in sg.vertex_edges[v]:
            vec[e] += pref
            vec[n + e] += pref * 1j / s_v ** 2
        for v2 in sg.vertex_neighbors[v]:
            for e in sg.vertex_edges[v2]:
                vec[e] += pref * s ** 2 / s_v ** 2
        vertex_nullifiers.append(vec)
    face_nullifiers = []
    for fb in sg.face_boundaries:
        size = len(fb)
        pref = s / np.sqrt(2 * size)
        vec = np.zeros(2 * n, dtype=complex)
        for e, sign in fb:
            vec[n + e] += pref * sign
            vec[e] += -1j * pref * sign / s ** 2
        face_nullifiers.append(vec)
    return NullifierSet(vertex_nullifiers, face_nullifiers,
                        float(np.sqrt(5 * s ** 2 + s ** -2)), norm_sv)


def commutator(vec_a, vec_b, omega=None):
    """[eta_a, eta_b^dagger] for coefficient vectors over (q.., p..)."""
    if omega is None:
        omega = symplectic_form(vec_a.size // 2)
    val = 1j * (vec_a @ omega @ np.conj(vec_b))
    return complex(val)


def nullifier_commutators(ns):
    """All pairwise commutators of a nullifier set.

    Returns
    -------
    dict with keys 'vertex' ([a_v, a_v'^dag]), 'face' ([b_f, b_f'^dag]),
    'cross' ([a_v, b_f]) and 'cross_dagger' ([a_v, b_f^dag]).
    """
    all_vecs = ns.vertex_nullifiers + ns.face_nullifiers
    if not all_vecs:
        return {"vertex": np.zeros((0, 0)), "face": np.zeros((0, 0)),
                "cross": np.zeros((0, 0)), "cross_dagger": np.zeros((0, 0))}
    omega = symplectic_form(all_vecs[0].size // 2)
    nv = len(ns.vertex_nullifiers)
    nf = len(ns.face_nullifiers)
    vert = np.array([[commutator(ns.vertex_nullifiers[i], ns.vertex_nullifiers[j], omega)
                      for j in range(nv)] for i in range(nv)])
    face = np.array([[commutator(ns.face_nullifiers[i], ns.face_nullifiers[j], omega)
                      for j in range(nf)] for i in range(nf)]) if nf else np.zeros((0, 0))
    # [a, b] uses the plain (non-conjugated) second vector
    cross = np.array([[1j * (av @ omega @ bf) for bf in ns.face_nullifiers]
                      for av in ns.vertex_nullifiers]) if nv and nf else np.zeros((nv, nf))
    cross_dag = np.array([[commutator(av, bf, omega) for bf in ns.face_nullifiers]
                          for av in ns.vertex_nullifiers]) if nv and nf else np.zeros((nv, nf))
    return {"vertex": vert, "face": face, "cross": cross, "cross_dagger": cross_dag}


def nullifier_expectation(cov, vec):
    """<eta^dagger eta> on the state, from Gamma + (i/2) Omega."""
    n = cov.n_modes
    omega = symplectic_form(n)
    mat = cov.gamma + 0.5j * omega
    return float(np.real(np.conj(vec) @ mat @ vec))


def w_closed_form(d, s):
    """Torus vertex-commutator closed form w(d), d the Euclidean distance."""
    denom = 4 * (1 + 5 * s ** 4)
    if np.isclose(d, 0):
        return 1.0
    if np.isclose(d, 1):
        return (1 + 8 * s ** 4) / denom
    if np.isclose(d, np.sqrt(2)):
        return 2 * s ** 4 / denom
    if np.isclose(d, 2):
        return s ** 4 / denom
    return 0.0


def x_closed_form(d):
    """Torus face-commutator closed form x(d)."""
    if np.isclose(d, 0):
        return 1.0
    if np.isclose(d, 1):
        return 0.25
    return 0.0
