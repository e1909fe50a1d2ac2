"""Triangular mesh data model: connectivity, edge topology, boundary
classification, validation, uniform refinement and text file I/O.

Vertex indices are 0-based everywhere in memory.  The text file format
(see :func:`read_mesh`) stores them 1-based; the conversion happens once
at read/write time and nowhere else.
"""

import numpy as np

__all__ = [
    "LOCAL_EDGES",
    "Mesh",
    "MeshError",
    "MeshFormatError",
    "MeshTopologyError",
    "EdgeTopology",
    "BoundaryEdges",
    "build_edge_topology",
    "classify_boundary",
    "validate_mesh",
    "signed_areas",
    "uniform_refine",
    "read_mesh",
    "write_mesh",
]

# Local edge i is the edge opposite local vertex i.  Rows give the
# (start, end) local vertex indices in the counterclockwise traversal
# of the element: (1,2), (2,0), (0,1).
LOCAL_EDGES = np.array([[1, 2], [2, 0], [0, 1]])

INTERIOR, DIRICHLET, NEUMANN = 0, 1, 2


class MeshError(ValueError):
    """Invalid mesh data."""


class MeshFormatError(MeshError):
    """Malformed mesh file."""


class MeshTopologyError(MeshError):
    """Inconsistent mesh connectivity."""


class Mesh:
    """Conforming triangulation with per-element boundary markers.

    Attributes
    ----------
    nodes : (N, 2) float array
        Vertex coordinates.
    elements : (NT, 3) int array
        Vertex indices of each triangle, in counterclockwise order.
    boundary_markers : (NT, 3) int array
        Marker of the edge opposite each local vertex: 0 interior,
        1 Dirichlet, 2 Neumann.

    All arrays are copied on construction and frozen afterwards; a mesh
    never changes once built (refinement returns a new mesh).
    """

    def __init__(self, nodes, elements, boundary_markers=None):
        self.nodes = np.array(nodes, dtype=float)
        self.elements = np.array(elements, dtype=np.int64)
        if boundary_markers is None:
            boundary_markers = np.zeros_like(self.elements)
        self.boundary_markers = np.array(boundary_markers, dtype=np.int64)

        if self.nodes.ndim != 2 or self.nodes.shape[1] != 2:
            raise MeshError("nodes must be an (N, 2) array")
        if self.elements.ndim != 2 or self.elements.shape[1] != 3:
            raise MeshError("elements must be an (NT, 3) array")
        if self.boundary_markers.shape != self.elements.shape:
            raise MeshError("boundary_markers must match elements in shape")
        for arr in (self.nodes, self.elements, self.boundary_markers):
            arr.setflags(write=False)

    @property
    def num_nodes(self):
        return self.nodes.shape[0]

    @property
    def num_elements(self):
        return self.elements.shape[0]

    def __repr__(self):
        return "Mesh({} nodes, {} elements)".format(
            self.num_nodes, self.num_elements)


class EdgeTopology:
    """Global edge numbering of a mesh.

    Attributes
    ----------
    edges : (NE, 2) int array
        Vertex pairs, each stored ascending (start < end) and the rows
        sorted lexicographically.  The global orientation of an edge is
        start -> end.
    elem_to_edge : (NT, 3) int array
        Global edge index of each local edge.
    sign_edge : (NT, 3) int array
        +1 where the element traverses the edge in global orientation,
        -1 where it traverses it reversed.  An element with +1 is the
        edge's minus side K-, one with -1 its plus side K+.
    """

    def __init__(self, edges, elem_to_edge, sign_edge):
        self.edges = edges
        self.elem_to_edge = elem_to_edge
        self.sign_edge = sign_edge
        for arr in (edges, elem_to_edge, sign_edge):
            arr.setflags(write=False)

    @property
    def num_edges(self):
        return self.edges.shape[0]

    def __repr__(self):
        return "EdgeTopology({} edges)".format(self.num_edges)


class BoundaryEdges:
    """Boundary edges of one marker kind, split Dirichlet/Neumann.

    The rows of ``dirichlet`` and ``neumann`` are vertex pairs stored
    ascending and sorted lexicographically, exactly like the rows of
    :attr:`EdgeTopology.edges`.  ``sign_*`` is +1 where the owning
    element traverses the edge in global orientation (so the global
    edge normal points out of the domain) and -1 otherwise; ``ind_*``
    gives each edge's global index.
    """

    def __init__(self, dirichlet, sign_dirichlet, ind_dirichlet,
                 neumann, sign_neumann, ind_neumann):
        self.dirichlet = dirichlet
        self.sign_dirichlet = sign_dirichlet
        self.ind_dirichlet = ind_dirichlet
        self.neumann = neumann
        self.sign_neumann = sign_neumann
        self.ind_neumann = ind_neumann
        for arr in (dirichlet, sign_dirichlet, ind_dirichlet,
                    neumann, sign_neumann, ind_neumann):
            arr.setflags(write=False)

    @property
    def num_dirichlet(self):
        return self.dirichlet.shape[0]

    @property
    def num_neumann(self):
        return self.neumann.shape[0]


def signed_areas(mesh):
    """Signed area of every element (positive for counterclockwise)."""
    p = mesh.nodes[mesh.elements]
    d1 = p[:, 1] - p[:, 0]
    d2 = p[:, 2] - p[:, 0]
    return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def _local_edge_pairs(mesh):
    """All element edges as ascending vertex pairs, shape (NT, 3, 2)."""
    start = mesh.elements[:, LOCAL_EDGES[:, 0]]
    end = mesh.elements[:, LOCAL_EDGES[:, 1]]
    lo = np.minimum(start, end)
    hi = np.maximum(start, end)
    return np.stack([lo, hi], axis=-1)


def validate_mesh(mesh):
    """Check mesh invariants; return a list of violation messages.

    An empty list means the mesh is valid: all vertex indices in range,
    all elements counterclockwise with positive area, every vertex
    referenced, markers in {0, 1, 2} and nonzero exactly on the edges
    that lie on the domain boundary.
    """
    violations = []
    elems = mesh.elements

    out = (elems < 0) | (elems >= mesh.num_nodes)
    for t in np.flatnonzero(out.any(axis=1)):
        violations.append("element {}: vertex index out of range".format(t))
    if violations:
        return violations  # remaining checks would index out of bounds

    areas = signed_areas(mesh)
    for t in np.flatnonzero(areas <= 0):
        violations.append(
            "element {}: non-positive signed area {:g} "
            "(vertices must be distinct and counterclockwise)".format(
                t, areas[t]))

    used = np.zeros(mesh.num_nodes, dtype=bool)
    used[elems] = True
    for v in np.flatnonzero(~used):
        violations.append("vertex {}: not referenced by any element".format(v))

    markers = mesh.boundary_markers
    bad = ~np.isin(markers, (INTERIOR, DIRICHLET, NEUMANN))
    for t, i in zip(*np.nonzero(bad)):
        violations.append(
            "element {}, edge {}: marker {} not in {{0, 1, 2}}".format(
                t, i, markers[t, i]))

    pairs = _local_edge_pairs(mesh).reshape(-1, 2)
    uniq, inverse, counts = np.unique(
        pairs, axis=0, return_inverse=True, return_counts=True)
    adjacency = counts[inverse].reshape(markers.shape)
    for t, i in zip(*np.nonzero((markers != INTERIOR) & (adjacency != 1))):
        violations.append(
            "element {}, edge {}: marker {} on interior edge ({}, {})".format(
                t, i, markers[t, i], *sorted(elems[t, LOCAL_EDGES[i]])))
    for t, i in zip(*np.nonzero((markers == INTERIOR) & (adjacency == 1))):
        violations.append(
            "element {}, edge {}: boundary edge ({}, {}) left "
            "unmarked".format(t, i, *sorted(elems[t, LOCAL_EDGES[i]])))
    for e in np.flatnonzero(counts > 2):
        violations.append(
            "edge ({}, {}): shared by {} elements".format(
                uniq[e, 0], uniq[e, 1], counts[e]))

    return violations


def build_edge_topology(mesh):
    """Number the edges of a mesh and orient them globally.

    Edges are the unique vertex pairs of the triangulation, stored
    ascending and sorted lexicographically; every element records the
    global index of each of its local edges and a sign telling whether
    the local (counterclockwise) direction agrees with the global one.

    Raises
    ------
    MeshTopologyError
        If an edge is shared by more than two elements.
    """
    pairs = _local_edge_pairs(mesh)
    edges, inverse, counts = np.unique(
        pairs.reshape(-1, 2), axis=0, return_inverse=True, return_counts=True)
    bad = np.flatnonzero(counts > 2)
    if bad.size:
        e = bad[0]
        raise MeshTopologyError(
            "edge ({}, {}) is shared by {} elements".format(
                edges[e, 0], edges[e, 1], counts[e]))
    elem_to_edge = inverse.reshape(mesh.num_elements, 3).astype(np.int64)

    start = mesh.elements[:, LOCAL_EDGES[:, 0]]
    end = mesh.elements[:, LOCAL_EDGES[:, 1]]
    sign_edge = np.where(start < end, 1, -1).astype(np.int64)
    return EdgeTopology(edges, elem_to_edge, sign_edge)


def _locate_edges(topo, rows):
    """Global indices of ascending vertex pairs in topo.edges."""
    n = int(topo.edges[:, 1].max()) + 1 if topo.num_edges else 1
    keys = topo.edges[:, 0] * n + topo.edges[:, 1]
    wanted = rows[:, 0] * n + rows[:, 1]
    ind = np.searchsorted(keys, wanted)
    return ind


def classify_boundary(mesh, topo):
    """Split the marked boundary edges into Dirichlet and Neumann sets.

    Raises
    ------
    MeshError
        If a nonzero marker sits on an edge shared by two elements.
    """
    adjacency = np.bincount(topo.elem_to_edge.ravel(),
                            minlength=topo.num_edges)
    start = mesh.elements[:, LOCAL_EDGES[:, 0]]
    end = mesh.elements[:, LOCAL_EDGES[:, 1]]

    parts = {}
    for kind in (DIRICHLET, NEUMANN):
        t, i = np.nonzero(mesh.boundary_markers == kind)
        shared = adjacency[topo.elem_to_edge[t, i]] != 1
        if shared.any():
            k = np.flatnonzero(shared)[0]
            raise MeshError(
                "marker {} on interior edge ({}, {})".format(
                    kind, *sorted((start[t[k], i[k]], end[t[k], i[k]]))))
        a = start[t, i]
        b = end[t, i]
        sign = np.where(a < b, 1, -1).astype(np.int64)
        rows = np.stack([np.minimum(a, b), np.maximum(a, b)], axis=-1)
        order = np.lexsort((rows[:, 1], rows[:, 0]))
        rows = rows[order]
        sign = sign[order]
        parts[kind] = (rows, sign, _locate_edges(topo, rows))

    return BoundaryEdges(*parts[DIRICHLET], *parts[NEUMANN])


def uniform_refine(mesh):
    """Split every element into four via the edge midpoints.

    Midpoint vertices are appended after the existing ones, one per
    parent edge in global edge order, so the refined mesh has
    N + NE vertices and 4 NT elements.  A child edge lying on a parent
    boundary edge inherits that edge's marker; the new interior edges
    get marker 0.
    """
    topo = build_edge_topology(mesh)
    midpoints = mesh.nodes[topo.edges].mean(axis=1)
    nodes = np.vstack([mesh.nodes, midpoints])

    v = mesh.elements
    m = mesh.num_nodes + topo.elem_to_edge  # midpoint of local edge i
    b = mesh.boundary_markers
    zero = np.zeros(mesh.num_elements, dtype=np.int64)

    elements = np.vstack([
        np.column_stack([v[:, 0], m[:, 2], m[:, 1]]),
        np.column_stack([m[:, 2], v[:, 1], m[:, 0]]),
        np.column_stack([m[:, 1], m[:, 0], v[:, 2]]),
        np.column_stack([m[:, 0], m[:, 1], m[:, 2]]),
    ])
    markers = np.vstack([
        np.column_stack([zero, b[:, 1], b[:, 2]]),
        np.column_stack([b[:, 0], zero, b[:, 2]]),
        np.column_stack([b[:, 0], b[:, 1], zero]),
        np.column_stack([zero, zero, zero]),
    ])
    return Mesh(nodes, elements, markers)


def _parse_fields(lines, lineno, count, conv, what):
    """Parse one whitespace-separated line into `count` values."""
    if lineno >= len(lines):
        raise MeshFormatError(
            "line {}: expected {} but file ended".format(lineno + 1, what))
    fields = lines[lineno].split()
    if len(fields) != count:
        raise MeshFormatError(
            "line {}: expected {} ({} fields), got {} fields".format(
                lineno + 1, what, count, len(fields)))
    try:
        return [conv(f) for f in fields]
    except ValueError:
        raise MeshFormatError(
            "line {}: could not parse {}: {!r}".format(
                lineno + 1, what, lines[lineno])) from None


def read_mesh(path):
    """Read a mesh from the plain text format.

    The format is line oriented::

        N NT
        x y        (N vertex lines)
        i j k      (NT element lines, 1-based vertex indices, CCW)
        m1 m2 m3   (NT marker lines, edge opposite each vertex)

    Vertex indices are converted to 0-based on read.  Anything beyond
    the expected lines is rejected.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()

    n, nt = _parse_fields(lines, 0, 2, int, "vertex and element counts")
    if n < 1 or nt < 1:
        raise MeshFormatError("line 1: counts must be positive")

    nodes = [_parse_fields(lines, 1 + k, 2, float, "vertex coordinates")
             for k in range(n)]
    elements = [_parse_fields(lines, 1 + n + k, 3, int, "element vertices")
                for k in range(nt)]
    markers = [_parse_fields(lines, 1 + n + nt + k, 3, int, "edge markers")
               for k in range(nt)]

    used = 1 + n + 2 * nt
    for k in range(used, len(lines)):
        if lines[k].strip():
            raise MeshFormatError(
                "line {}: trailing content {!r}".format(k + 1, lines[k]))

    elements = np.array(elements, dtype=np.int64)
    if (elements < 1).any() or (elements > n).any():
        t = np.flatnonzero(((elements < 1) | (elements > n)).any(axis=1))[0]
        raise MeshFormatError(
            "line {}: vertex index out of range 1..{}".format(
                1 + n + t + 1, n))
    return Mesh(nodes, elements - 1, markers)


def write_mesh(mesh, path):
    """Write a mesh in the format read by :func:`read_mesh`."""
    with open(path, "w") as fh:
        fh.write("{} {}\n".format(mesh.num_nodes, mesh.num_elements))
        for x, y in mesh.nodes:
            fh.write("{:.17g} {:.17g}\n".format(x, y))
        for tri in mesh.elements + 1:
            fh.write("{} {} {}\n".format(*tri))
        for row in mesh.boundary_markers:
            fh.write("{} {} {}\n".format(*row))
