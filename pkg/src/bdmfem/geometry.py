"""Per-element barycentric coordinate data and per-edge geometry.

On a triangle with counterclockwise vertices z_1, z_2, z_3 the
barycentric coordinate of vertex i is the affine function

    lambda_i(x, y) = (a_i x + b_i y + c_i) / (2 |K|),

with a_i = y_{i+1} - y_{i+2} and b_i = x_{i+2} - x_{i+1} (indices
cyclic).  Its gradient is (a_i, b_i) / (2|K|) and the 90-degree
clockwise rotation of the gradient is (b_i, -a_i) / (2|K|).  The
constants c_i are never needed.
"""

import numpy as np

__all__ = [
    "DegenerateElementError",
    "BarycentricCoefficients",
    "EdgeGeometry",
    "barycentric_gradients",
    "edge_geometry",
    "barycentric_coordinates",
]


class DegenerateElementError(ValueError):
    """An element with non-positive area or an edge of zero length."""


class BarycentricCoefficients:
    """Coefficients a, b and areas for all elements of a mesh.

    Attributes
    ----------
    a, b : (NT, 3) float arrays
        Gradient coefficients per local vertex, see module docstring.
    area : (NT,) float array
        Element areas (all positive).
    """

    def __init__(self, a, b, area):
        self.a = a
        self.b = b
        self.area = area
        for arr in (a, b, area):
            arr.setflags(write=False)

    def grad(self):
        """Gradients of the barycentric coordinates, shape (NT, 3, 2)."""
        return np.stack([self.a, self.b], axis=-1) / (2 * self.area)[:, None, None]

    def rot(self):
        """Rotated gradients (b_i, -a_i) / (2|K|), shape (NT, 3, 2)."""
        return np.stack([self.b, -self.a], axis=-1) / (2 * self.area)[:, None, None]


class EdgeGeometry:
    """Lengths, unit tangents and unit normals of the global edges.

    The tangent points from the edge's start vertex to its end vertex
    (global orientation); the normal is the tangent rotated clockwise
    by 90 degrees, n = (t_y, -t_x), so it points out of the minus-side
    element K-.
    """

    def __init__(self, length, tangent, normal):
        self.length = length
        self.tangent = tangent
        self.normal = normal
        for arr in (length, tangent, normal):
            arr.setflags(write=False)


def barycentric_gradients(mesh):
    """Compute :class:`BarycentricCoefficients` for every element.

    Raises
    ------
    DegenerateElementError
        If any element has non-positive area.
    """
    x = mesh.nodes[mesh.elements, 0]
    y = mesh.nodes[mesh.elements, 1]
    nxt = [1, 2, 0]
    prv = [2, 0, 1]
    a = y[:, nxt] - y[:, prv]
    b = x[:, prv] - x[:, nxt]
    area = 0.5 * (a[:, 1] * b[:, 2] - a[:, 2] * b[:, 1])
    bad = np.flatnonzero(area <= 0)
    if bad.size:
        raise DegenerateElementError(
            "element {}: signed area {:g} is not positive".format(
                bad[0], area[bad[0]]))
    return BarycentricCoefficients(a, b, area)


def edge_geometry(mesh, topo):
    """Compute :class:`EdgeGeometry` for every global edge.

    Raises
    ------
    DegenerateElementError
        If any edge has zero length.
    """
    d = mesh.nodes[topo.edges[:, 1]] - mesh.nodes[topo.edges[:, 0]]
    length = np.hypot(d[:, 0], d[:, 1])
    bad = np.flatnonzero(length == 0)
    if bad.size:
        raise DegenerateElementError(
            "edge ({}, {}): zero length".format(*topo.edges[bad[0]]))
    tangent = d / length[:, None]
    normal = np.column_stack([tangent[:, 1], -tangent[:, 0]])
    return EdgeGeometry(length, tangent, normal)


def barycentric_coordinates(mesh, coeffs, elements, points):
    """Barycentric coordinates of physical points, by area ratios.

    Parameters
    ----------
    elements : (n,) int array
        Element index for each query point.
    points : (n, 2) float array
        Physical coordinates.

    Returns
    -------
    (n, 3) float array
        lambda_i(p) for each point; the rows sum to 1 and are all
        nonnegative exactly when the point lies inside its element.
    """
    elements = np.asarray(elements)
    points = np.asarray(points, dtype=float)
    tri = mesh.nodes[mesh.elements[elements]]  # (n, 3, 2)
    lam = np.empty((points.shape[0], 3))
    for i in range(3):
        p1 = tri[:, (i + 1) % 3]
        p2 = tri[:, (i + 2) % 3]
        lam[:, i] = ((p1[:, 0] - points[:, 0]) * (p2[:, 1] - points[:, 1])
                     - (p2[:, 0] - points[:, 0]) * (p1[:, 1] - points[:, 1]))
    lam /= (2 * coeffs.area[elements])[:, None]
    return lam
