import numpy as np
import pytest

from qclab import adjacency
from qclab.errors import ParseError
from qclab.graph import AdjacencyMatrix
from qclab.sdpa import build_sdpa_model, export_sdpa, read_sdpa, validate_sdpa

from fixtures import ten_node_graph


def toy_adjacency():
    entries = np.array([[1.0, 1.0], [1.0, 1.0]])
    return AdjacencyMatrix(n=2, entries=entries, loops_added=True)


class TestExportStructure:
    def test_constraint_count_formula(self):
        # 2 n^2 absolute-value rows + 1 density row + n^2 upper bounds
        n = 2
        model = build_sdpa_model(toy_adjacency(), lam=0.5, gamma=0.9, eta=1)
        assert model.n_constraints == 2 * n * n + 1 + n * n

    def test_block_structure(self):
        model = build_sdpa_model(toy_adjacency(), lam=0.5, gamma=0.9, eta=1)
        assert model.block_dims == (4, -(4 * 4 + 1))

    def test_eta_zero_omits_density_row(self):
        n = 2
        model = build_sdpa_model(toy_adjacency(), lam=0.5, gamma=0.9, eta=0)
        assert model.n_constraints == 2 * n * n + n * n
        assert model.block_dims == (4, -(4 * 4))

    def test_density_rhs(self):
        model = build_sdpa_model(toy_adjacency(), lam=0.5, gamma=0.9, eta=2)
        assert model.rhs[2 * 4] == pytest.approx(0.9 * 4)

    def test_larger_graph(self):
        g = ten_node_graph()
        a = adjacency(g, with_loops=True)
        model = build_sdpa_model(a, lam=0.3, gamma=0.9, eta=5)
        assert model.n_constraints == 2 * 100 + 1 + 100


class TestRoundTrip:
    @pytest.mark.parametrize("eta", [0, 1, 5])
    def test_read_back_identical(self, eta):
        a = adjacency(ten_node_graph(), with_loops=True)
        model = build_sdpa_model(a, lam=0.31622776601683794, gamma=0.9, eta=eta)
        text = export_sdpa(a, lam=0.31622776601683794, gamma=0.9, eta=eta)
        back = read_sdpa(text)
        assert back == model

    def test_grammar_checker_accepts_exports(self):
        a = adjacency(ten_node_graph(), with_loops=True)
        text = export_sdpa(a, lam=0.5, gamma=0.8, eta=4)
        stats = validate_sdpa(text)
        assert stats["constraints"] == 301
        assert stats["blocks"] == (20, -401)


class TestGrammarChecker:
    def test_rejects_bad_block_index(self):
        text = "1\n1\n3\n1\n1 2 1 1 1.0\n"
        with pytest.raises(ParseError):
            validate_sdpa(text)

    def test_rejects_lower_triangle_entry(self):
        text = "1\n1\n3\n1\n1 1 2 1 1.0\n"
        with pytest.raises(ParseError):
            validate_sdpa(text)

    def test_rejects_off_diagonal_in_lp_block(self):
        text = "1\n1\n-3\n1\n1 1 1 2 1.0\n"
        with pytest.raises(ParseError):
            validate_sdpa(text)

    def test_rejects_short_entry_line(self):
        text = "1\n1\n3\n1\n1 1 1 1\n"
        with pytest.raises(ParseError):
            validate_sdpa(text)

    def test_rejects_rhs_count_mismatch(self):
        text = "2\n1\n3\n1\n"
        with pytest.raises(ParseError):
            validate_sdpa(text)

    def test_accepts_comment_lines(self):
        text = '* comment\n"more\n1\n1\n3\n1\n1 1 1 1 1.0\n'
        stats = validate_sdpa(text)
        assert stats["constraints"] == 1

    def test_accepts_braced_block_dims(self):
        text = "1\n2\n{3, -2}\n1\n1 1 1 1 1.0\n"
        model = read_sdpa(text)
        assert model.block_dims == (3, -2)
