import json

import numpy as np
import pytest

from lisamatch import graphio
from lisamatch.core import (AffinityMatrix, DegenerateInputError, DomainError, GraphKind,
                            Matching, ParseError)
from lisamatch.graphgen import dense_euclidean, gen_points, make_instance


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestEdgeList:
    def test_unweighted(self, tmp_path):
        a = graphio.load_edge_list(write(tmp_path, "0 1\n1 2\n"))
        assert a.order == 3
        np.testing.assert_array_equal(a.to_dense(), [[0, 1, 0], [1, 0, 1], [0, 1, 0]])

    def test_mirrored_duplicate_collapses(self, tmp_path):
        a = graphio.load_edge_list(write(tmp_path, "1 2 0.5\n2 1 0.5\n"), base=1, weighted=True)
        assert a.order == 2
        assert a.nnz == 1
        assert a.get(0, 1) == 0.5

    def test_last_weight_wins(self, tmp_path):
        a = graphio.load_edge_list(write(tmp_path, "0 1 0.5\n1 0 0.25\n"), weighted=True)
        assert a.get(0, 1) == 0.25

    def test_comments_and_first_appearance(self, tmp_path):
        a = graphio.load_edge_list(write(tmp_path, "# header\n7 3\n\n3 9\n"))
        # 7 -> 0, 3 -> 1, 9 -> 2
        assert a.get(0, 1) == 1 and a.get(1, 2) == 1 and a.get(0, 2) == 0

    def test_self_loop_warning(self, tmp_path):
        with pytest.warns(UserWarning, match="1 self-loop"):
            a = graphio.load_edge_list(write(tmp_path, "0 0\n0 1\n"))
        assert a.nnz == 1

    def test_malformed_line_number(self, tmp_path):
        with pytest.raises(ParseError, match=":2:"):
            graphio.load_edge_list(write(tmp_path, "0 1\n0 x\n"))
        with pytest.raises(ParseError, match=":3:"):
            graphio.load_edge_list(write(tmp_path, "0 1\n1 2\n1 2 3 4\n"))

    def test_negative_weight(self, tmp_path):
        with pytest.raises(DomainError):
            graphio.load_edge_list(write(tmp_path, "0 1 -1\n"), weighted=True)

    def test_empty(self, tmp_path):
        with pytest.raises(DegenerateInputError):
            graphio.load_edge_list(write(tmp_path, "# nothing\n"))

    def test_unsymmetric_without_symmetrize(self, tmp_path):
        with pytest.raises(DomainError):
            graphio.load_edge_list(write(tmp_path, "0 1\n"), symmetrize=False)
        a = graphio.load_edge_list(write(tmp_path, "0 1\n1 0\n"), symmetrize=False)
        assert a.nnz == 1

    @pytest.mark.parametrize("kind", [GraphKind.SPARSE_WEIGHTED, GraphKind.SPARSE_BINARY])
    def test_round_trip_up_to_first_appearance(self, tmp_path, kind):
        a = make_instance(kind, 80, 1).a
        path = tmp_path / "e.txt"
        graphio.save_edge_list(a, path, base=1)
        back = graphio.load_edge_list(path, base=1, weighted=True)
        order = []
        for line in path.read_text().split("\n"):
            for tok in line.split()[:2]:
                if int(tok) - 1 not in order:
                    order.append(int(tok) - 1)
        # loaded node k is original node order[k]
        inverse = np.empty(len(order), dtype=int)
        inverse[order] = np.arange(len(order))
        assert back == a.relabeled(inverse)
        assert graphio.load_edge_list(path, base=1, weighted=True) == back


class TestMatrixFormat:
    def test_identity_pattern(self, tmp_path):
        eye = AffinityMatrix.from_edges(3, [0, 1, 2], [0, 1, 2])
        graphio.save_matrix(eye, tmp_path / "i.gm")
        assert graphio.load_matrix(tmp_path / "i.gm") == eye

    @pytest.mark.parametrize("kind", list(GraphKind)[:3])
    def test_round_trip(self, tmp_path, kind):
        inst = make_instance(kind, 60, 5)
        graphio.save_matrix(inst.b, tmp_path / "b.gm")
        assert graphio.load_matrix(tmp_path / "b.gm") == inst.b

    def test_header(self, tmp_path):
        graphio.save_matrix(dense_euclidean(gen_points(4, 0)), tmp_path / "d.gm")
        assert (tmp_path / "d.gm").read_text().splitlines()[0].startswith("gm-matrix v1 4 ")

    def test_bad_header(self, tmp_path):
        with pytest.raises(ParseError):
            graphio.load_matrix(write(tmp_path, "not a matrix\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            graphio.load_matrix(tmp_path / "absent.gm")


class TestPointsAndMatchings:
    def test_points_round_trip(self, tmp_path):
        p = gen_points(100, 4)
        graphio.save_points(p, tmp_path / "p.txt")
        assert graphio.load_points(tmp_path / "p.txt") == p

    def test_matching_json(self, tmp_path):
        m = Matching((2, 0, 1), 3)
        assert graphio.matching_to_json(m)["pairs"] == [[0, 2], [1, 0], [2, 1]]
        graphio.save_matching(m, tmp_path / "m.json", algorithm="lisa", seconds=0.5)
        assert json.loads((tmp_path / "m.json").read_text())["pairs"] == [[0, 2], [1, 0], [2, 1]]
        assert graphio.load_matching(tmp_path / "m.json") == m

    def test_matching_bad_json(self, tmp_path):
        with pytest.raises(ParseError):
            graphio.load_matching(write(tmp_path, "{", "m.json"))

    def test_float_repr_round_trip(self, tmp_path):
        r = np.random.default_rng(0)
        vals = np.concatenate([[0.1, 1e-300, 5e-324, 1.7976931348623157e308],
                               r.random(10**6) * 10.0 ** r.integers(-20, 20, 10**6)])
        n = len(vals)
        a = AffinityMatrix.from_edges(n + 1, np.zeros(n, dtype=int), np.arange(1, n + 1), vals)
        graphio.save_matrix(a, tmp_path / "big.gm")
        back = graphio.load_matrix(tmp_path / "big.gm")
        assert np.array_equal(back.upper_entries()[2], a.upper_entries()[2])
