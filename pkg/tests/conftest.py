"""Shared fixtures: the 16-element reference mesh with its hand-checked
topology tables, and random-mesh generators for property tests."""

import numpy as np
import pytest
from scipy.spatial import Delaunay

import bdmfem as bf

# Independently tabulated topology of the 16-element reference mesh
# (1-based vertex and edge numbering, as printed by `inspect --dump`).

REFERENCE_EDGES_1B = np.array([
    [1, 2], [1, 4], [1, 6],
    [2, 3], [2, 4], [2, 5], [2, 7],
    [3, 5], [3, 8],
    [4, 6], [4, 7],
    [5, 7], [5, 8],
    [6, 7], [6, 9], [6, 11],
    [7, 8], [7, 9], [7, 10], [7, 12],
    [8, 10], [8, 13],
    [9, 11], [9, 12],
    [10, 12], [10, 13],
    [11, 12],
    [12, 13],
])

REFERENCE_ELEM2EDGE_1B = np.array([
    [1, 2, 5], [3, 10, 2], [14, 11, 10], [7, 5, 11],
    [4, 6, 8], [7, 12, 6], [17, 13, 12], [9, 8, 13],
    [14, 15, 18], [16, 23, 15], [27, 24, 23], [20, 18, 24],
    [17, 19, 21], [20, 25, 19], [28, 26, 25], [22, 21, 26],
])

REFERENCE_SIGNEDGE = np.array([
    [-1, 1, -1], [1, -1, -1], [1, -1, 1], [-1, 1, 1],
    [-1, 1, -1], [1, -1, -1], [1, -1, 1], [-1, 1, 1],
    [-1, 1, -1], [1, -1, -1], [1, -1, 1], [-1, 1, 1],
    [-1, 1, -1], [1, -1, -1], [1, -1, 1], [-1, 1, 1],
])


@pytest.fixture(scope="session")
def paper_mesh():
    return bf.builtin_mesh("paper")


@pytest.fixture(scope="session")
def paper_topo(paper_mesh):
    return bf.build_edge_topology(paper_mesh)


@pytest.fixture(scope="session")
def paper_coeffs(paper_mesh):
    return bf.barycentric_gradients(paper_mesh)


def random_mesh(seed=0, n=40):
    """Delaunay triangulation of random points in (-1,1)^2, counter-
    clockwise, with every boundary edge marked Dirichlet."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1, 1, size=(n, 2))
    tri = Delaunay(pts)
    elems = tri.simplices.astype(np.int64)
    # enforce counterclockwise orientation
    d1 = pts[elems[:, 1]] - pts[elems[:, 0]]
    d2 = pts[elems[:, 2]] - pts[elems[:, 0]]
    flip = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0] < 0
    elems[flip] = elems[flip][:, [0, 2, 1]]
    mesh = bf.Mesh(pts, elems)
    return mark_boundary_dirichlet(mesh)


def mark_boundary_dirichlet(mesh, neumann_where=None):
    """Mark boundary edges Dirichlet, or Neumann where the predicate
    on the edge midpoint says so."""
    topo = bf.build_edge_topology(mesh)
    adjacency = np.bincount(topo.elem_to_edge.ravel(),
                            minlength=topo.num_edges)
    markers = np.zeros_like(mesh.elements)
    on_boundary = adjacency[topo.elem_to_edge] == 1
    markers[on_boundary] = 1
    if neumann_where is not None:
        mids = mesh.nodes[topo.edges].mean(axis=1)
        neu = neumann_where(mids)[topo.elem_to_edge] & on_boundary
        markers[neu] = 2
    return bf.Mesh(mesh.nodes, mesh.elements, markers)


def random_triangle(rng):
    """A non-degenerate counterclockwise triangle, vertices in (-1,1)."""
    while True:
        p = rng.uniform(-1, 1, size=(3, 2))
        area = 0.5 * _cross2(p[1] - p[0], p[2] - p[0])
        if abs(area) > 0.05:
            return p if area > 0 else p[[0, 2, 1]]


def _cross2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def integrate_triangle_exact(p, f, order=8):
    """Integrate f over a triangle with a collapsed-square Gauss rule.

    The Duffy substitution x = xi, y = eta (1 - xi) maps the unit
    square onto the reference simplex with Jacobian (1 - xi); an
    `order`-point tensor Gauss rule then integrates any polynomial
    integrand of degree <= 2*order - 2 exactly.  Entirely independent
    of the triangle rules under test.
    """
    gx, gw = np.polynomial.legendre.leggauss(order)
    gx = (gx + 1) / 2
    gw = gw / 2
    xi, eta = np.meshgrid(gx, gx, indexing="ij")
    wq = np.outer(gw, gw) * (1 - xi)
    lam2 = xi
    lam3 = eta * (1 - xi)
    points = (np.multiply.outer(1 - lam2 - lam3, p[0])
              + np.multiply.outer(lam2, p[1])
              + np.multiply.outer(lam3, p[2]))
    area = 0.5 * abs(_cross2(p[1] - p[0], p[2] - p[0]))
    vals = f(points.reshape(-1, 2)).reshape(xi.shape)
    return 2 * area * (wq * vals).sum()


def integrate_segment_exact(p0, p1, f, order=8):
    """Gauss integration of f along a segment (exact for polynomials
    of degree <= 2*order - 1 in arclength)."""
    gx, gw = np.polynomial.legendre.leggauss(order)
    t = (gx + 1) / 2
    points = np.outer(1 - t, p0) + np.outer(t, p1)
    length = np.hypot(*(np.asarray(p1) - np.asarray(p0)))
    return length / 2 * (gw * f(points)).sum()


def edge_elements(topo):
    """Map each edge to the (element, slot) pairs that contain it."""
    owners = [[] for _ in range(topo.num_edges)]
    for t in range(topo.elem_to_edge.shape[0]):
        for i in range(3):
            owners[topo.elem_to_edge[t, i]].append((t, i))
    return owners
