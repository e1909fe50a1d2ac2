"""Mesh data model, edge topology, boundary classification, refinement
and the text file format."""

import numpy as np
import pytest

import bdmfem as bf
from conftest import (REFERENCE_EDGES_1B, REFERENCE_ELEM2EDGE_1B,
                      REFERENCE_SIGNEDGE, random_mesh)


def single_triangle():
    return bf.Mesh([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
                   [[0, 1, 2]], [[1, 1, 1]])


class TestTopology:

    def test_reference_edge_table(self, paper_topo):
        assert paper_topo.num_edges == 28
        assert np.array_equal(paper_topo.edges + 1, REFERENCE_EDGES_1B)

    def test_reference_elem_to_edge(self, paper_topo):
        assert np.array_equal(paper_topo.elem_to_edge + 1,
                              REFERENCE_ELEM2EDGE_1B)

    def test_reference_sign_edge(self, paper_topo):
        assert np.array_equal(paper_topo.sign_edge, REFERENCE_SIGNEDGE)

    def test_single_triangle(self):
        topo = bf.build_edge_topology(single_triangle())
        assert np.array_equal(topo.edges, [[0, 1], [0, 2], [1, 2]])
        # local edges (1,2), (2,0), (0,1) against ascending global pairs
        assert np.array_equal(topo.elem_to_edge, [[2, 1, 0]])
        assert np.array_equal(topo.sign_edge, [[1, -1, 1]])

    def test_edges_sorted_and_ascending(self):
        topo = bf.build_edge_topology(random_mesh(seed=3))
        assert (topo.edges[:, 0] < topo.edges[:, 1]).all()
        order = np.lexsort((topo.edges[:, 1], topo.edges[:, 0]))
        assert np.array_equal(order, np.arange(topo.num_edges))

    def test_edge_count_identity(self):
        # 3 NT = 2 * interior + boundary
        mesh = random_mesh(seed=7)
        topo = bf.build_edge_topology(mesh)
        adjacency = np.bincount(topo.elem_to_edge.ravel(),
                                minlength=topo.num_edges)
        interior = (adjacency == 2).sum()
        boundary = (adjacency == 1).sum()
        assert 3 * mesh.num_elements == 2 * interior + boundary
        assert interior + boundary == topo.num_edges

    def test_interior_signs_opposite(self):
        mesh = random_mesh(seed=11)
        topo = bf.build_edge_topology(mesh)
        sign_sum = np.zeros(topo.num_edges)
        np.add.at(sign_sum, topo.elem_to_edge.ravel(),
                  topo.sign_edge.ravel())
        adjacency = np.bincount(topo.elem_to_edge.ravel(),
                                minlength=topo.num_edges)
        assert (sign_sum[adjacency == 2] == 0).all()

    def test_element_permutation_invariance(self, paper_mesh, paper_topo):
        rng = np.random.default_rng(5)
        perm = rng.permutation(paper_mesh.num_elements)
        shuffled = bf.Mesh(paper_mesh.nodes, paper_mesh.elements[perm],
                           paper_mesh.boundary_markers[perm])
        topo = bf.build_edge_topology(shuffled)
        assert np.array_equal(topo.edges, paper_topo.edges)
        assert np.array_equal(topo.elem_to_edge,
                              paper_topo.elem_to_edge[perm])
        assert np.array_equal(topo.sign_edge, paper_topo.sign_edge[perm])

    def test_non_manifold_edge_rejected(self):
        mesh = bf.Mesh([[0, 0], [1, 0], [0, 1], [0, -1], [-1, 0]],
                       [[0, 1, 2], [0, 3, 1], [0, 1, 4]])
        with pytest.raises(bf.MeshTopologyError, match=r"\(0, 1\)"):
            bf.build_edge_topology(mesh)


class TestValidation:

    def test_reference_mesh_valid(self, paper_mesh):
        assert bf.validate_mesh(paper_mesh) == []

    def test_index_out_of_range(self):
        mesh = bf.Mesh([[0, 0], [1, 0], [0, 1]], [[0, 1, 7]])
        assert any("out of range" in v for v in bf.validate_mesh(mesh))

    def test_clockwise_element(self):
        mesh = bf.Mesh([[0, 0], [1, 0], [0, 1]], [[0, 2, 1]], [[1, 1, 1]])
        assert any("area" in v for v in bf.validate_mesh(mesh))

    def test_unreferenced_vertex(self):
        mesh = bf.Mesh([[0, 0], [1, 0], [0, 1], [5, 5]], [[0, 1, 2]],
                       [[1, 1, 1]])
        assert any("vertex 3" in v for v in bf.validate_mesh(mesh))

    def test_bad_marker_value(self):
        mesh = bf.Mesh([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]], [[1, 9, 1]])
        assert any("marker 9" in v for v in bf.validate_mesh(mesh))

    def test_marker_on_interior_edge(self):
        mesh = bf.Mesh([[0, 0], [1, 0], [1, 1], [0, 1]],
                       [[0, 1, 2], [0, 2, 3]],
                       [[1, 1, 1], [1, 1, 1]])  # (0,2) is interior
        assert any("interior edge (0, 2)" in v for v in bf.validate_mesh(mesh))

    def test_unmarked_boundary_edge(self):
        mesh = bf.Mesh([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]], [[1, 0, 1]])
        assert any("unmarked" in v for v in bf.validate_mesh(mesh))

    def test_classify_raises_on_interior_marker(self):
        mesh = bf.Mesh([[0, 0], [1, 0], [1, 1], [0, 1]],
                       [[0, 1, 2], [0, 2, 3]],
                       [[1, 1, 1], [1, 1, 1]])
        topo = bf.build_edge_topology(mesh)
        with pytest.raises(bf.MeshError, match="interior"):
            bf.classify_boundary(mesh, topo)


class TestBoundary:

    def test_reference_split(self, paper_mesh, paper_topo):
        bd = bf.classify_boundary(paper_mesh, paper_topo)
        assert bd.num_dirichlet == 6
        assert bd.num_neumann == 2
        # the Neumann segment is the top edge y = 1
        assert np.array_equal(bd.neumann + 1, [[1, 2], [2, 3]])
        assert (paper_mesh.nodes[bd.neumann][:, :, 1] == 1).all()
        assert np.array_equal(bd.ind_neumann + 1, [1, 4])

    def test_signs_match_topology(self, paper_mesh, paper_topo):
        bd = bf.classify_boundary(paper_mesh, paper_topo)
        # both top elements traverse their boundary edge descending
        assert np.array_equal(bd.sign_neumann, [-1, -1])
        # every sign equals the owning element's sign_edge entry
        adjacency_sign = np.zeros(paper_topo.num_edges, dtype=int)
        boundary_edges = np.bincount(paper_topo.elem_to_edge.ravel(),
                                     minlength=paper_topo.num_edges) == 1
        np.add.at(adjacency_sign, paper_topo.elem_to_edge.ravel(),
                  paper_topo.sign_edge.ravel())
        for rows, signs, inds in ((bd.dirichlet, bd.sign_dirichlet,
                                   bd.ind_dirichlet),
                                  (bd.neumann, bd.sign_neumann,
                                   bd.ind_neumann)):
            assert np.array_equal(paper_topo.edges[inds], rows)
            assert boundary_edges[inds].all()
            assert np.array_equal(adjacency_sign[inds], signs)

    def test_rows_sorted(self):
        mesh = random_mesh(seed=13)
        topo = bf.build_edge_topology(mesh)
        bd = bf.classify_boundary(mesh, topo)
        assert bd.num_dirichlet > 0
        d = bd.dirichlet
        keys = d[:, 0] * mesh.num_nodes + d[:, 1]
        assert (np.diff(keys) > 0).all()


class TestRefinement:

    def test_counts(self, paper_mesh):
        fine = bf.uniform_refine(paper_mesh)
        assert fine.num_nodes == 13 + 28
        assert fine.num_elements == 64
        assert bf.build_edge_topology(fine).num_edges == 104
        finer = bf.uniform_refine(fine)
        assert finer.num_elements == 256

    def test_six_levels(self, paper_mesh):
        mesh = paper_mesh
        for _ in range(6):
            mesh = bf.uniform_refine(mesh)
        assert mesh.num_elements == 16 * 4 ** 6 == 65536

    def test_area_preserved(self):
        mesh = random_mesh(seed=17)
        fine = bf.uniform_refine(mesh)
        assert bf.validate_mesh(fine) == []
        assert np.isclose(bf.signed_areas(fine).sum(),
                          bf.signed_areas(mesh).sum(), rtol=1e-13)
        # children have a quarter of the parent area
        child = bf.signed_areas(fine).reshape(4, mesh.num_elements)
        assert np.allclose(child, bf.signed_areas(mesh) / 4, rtol=1e-12)

    def test_markers_inherited(self, paper_mesh):
        fine = bf.uniform_refine(paper_mesh)
        assert bf.validate_mesh(fine) == []
        for kind in (1, 2):
            coarse_edges = _marked_edge_set(paper_mesh, kind)
            fine_edges = _marked_edge_set(fine, kind)
            assert len(fine_edges) == 2 * len(coarse_edges)
            # each child edge joins a parent endpoint to the midpoint
            for a, b in fine_edges:
                pa, pb = fine.nodes[a], fine.nodes[b]
                mid = tuple((pa + pb) / 2)
                assert any(
                    np.allclose((fine.nodes[c] + fine.nodes[d]) / 2, pa)
                    or np.allclose((fine.nodes[c] + fine.nodes[d]) / 2, pb)
                    for c, d in coarse_edges)
        # the Neumann segment stays on y = 1
        topo = bf.build_edge_topology(fine)
        bd = bf.classify_boundary(fine, topo)
        assert bd.num_neumann == 4
        assert (fine.nodes[bd.neumann][:, :, 1] == 1).all()

    def test_boundary_polygon_preserved(self):
        mesh = random_mesh(seed=23)
        fine = bf.uniform_refine(mesh)
        # boundary vertices of the refined mesh lie on parent boundary
        # segments, so the total boundary length is unchanged
        assert np.isclose(_boundary_length(mesh), _boundary_length(fine),
                          rtol=1e-12)


def _marked_edge_set(mesh, kind):
    t, i = np.nonzero(mesh.boundary_markers == kind)
    le = bf.mesh.LOCAL_EDGES
    pairs = set()
    for tt, ii in zip(t, i):
        a, b = mesh.elements[tt, le[ii]]
        pairs.add((min(a, b), max(a, b)))
    return pairs


def _boundary_length(mesh):
    topo = bf.build_edge_topology(mesh)
    adjacency = np.bincount(topo.elem_to_edge.ravel(),
                            minlength=topo.num_edges)
    d = mesh.nodes[topo.edges[:, 1]] - mesh.nodes[topo.edges[:, 0]]
    return np.hypot(d[:, 0], d[:, 1])[adjacency == 1].sum()


class TestMeshIO:

    def test_round_trip(self, tmp_path, paper_mesh):
        path = tmp_path / "square.mesh"
        bf.write_mesh(paper_mesh, path)
        back = bf.read_mesh(path)
        assert np.array_equal(back.nodes, paper_mesh.nodes)
        assert np.array_equal(back.elements, paper_mesh.elements)
        assert np.array_equal(back.boundary_markers,
                              paper_mesh.boundary_markers)

    def test_round_trip_random_coordinates(self, tmp_path):
        mesh = random_mesh(seed=29)
        path = tmp_path / "random.mesh"
        bf.write_mesh(mesh, path)
        back = bf.read_mesh(path)
        assert np.array_equal(back.nodes, mesh.nodes)  # bitwise

    def test_trailing_garbage_rejected(self, tmp_path, paper_mesh):
        path = tmp_path / "bad.mesh"
        bf.write_mesh(paper_mesh, path)
        with open(path, "a") as fh:
            fh.write("stray tokens here\n")
        with pytest.raises(bf.MeshFormatError, match="trailing"):
            bf.read_mesh(path)

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "short.mesh"
        path.write_text("3 1\n0 0\n1 0\n")
        with pytest.raises(bf.MeshFormatError, match="line 4"):
            bf.read_mesh(path)

    def test_bad_field_count(self, tmp_path):
        path = tmp_path / "fields.mesh"
        path.write_text("3 1\n0 0\n1 0 9\n0 1\n1 2 3\n1 1 1\n")
        with pytest.raises(bf.MeshFormatError, match="line 3"):
            bf.read_mesh(path)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "alpha.mesh"
        path.write_text("3 1\n0 zero\n1 0\n0 1\n1 2 3\n1 1 1\n")
        with pytest.raises(bf.MeshFormatError, match="line 2"):
            bf.read_mesh(path)

    def test_index_out_of_range(self, tmp_path):
        path = tmp_path / "range.mesh"
        path.write_text("3 1\n0 0\n1 0\n0 1\n1 2 5\n1 1 1\n")
        with pytest.raises(bf.MeshFormatError, match="out of range"):
            bf.read_mesh(path)

    def test_mesh_arrays_frozen(self, paper_mesh):
        with pytest.raises(ValueError):
            paper_mesh.nodes[0, 0] = 99.0
