"""The plain-text network description format."""

import math

import numpy as np
import pytest

from temporank import (
    ContinuousTemporalNetwork,
    DiscreteTemporalNetwork,
    NetworkFormatError,
    dumps_network,
    load_network,
    loads_network,
    save_network,
    synthetic_five_node,
)
from temporank.timefuncs import TimeFunction

CONTINUOUS = """\
# a two-node demo
nodes 2
interval 0.0 1.0
edge 1 2 0.5*(sin(2*pi*t)+1)
edge 2 1 t**2
"""

DISCRETE = """\
nodes 3
instant 0.0
1 2 1.5
2 3 0.25
instant 1.0
1 2 2.0
"""


class TestLoad:
    def test_continuous_file(self):
        net = loads_network(CONTINUOUS)
        assert isinstance(net, ContinuousTemporalNetwork)
        assert net.n == 2
        assert net.interval == (0.0, 1.0)
        assert net.edges[(0, 1)](0.25) == pytest.approx(1.0)
        assert net.edges[(1, 0)](0.5) == 0.25

    def test_symmetric_keyword_mirrors_edges(self):
        net = loads_network("nodes 2\nsymmetric\ninterval 0 1\nedge 1 2 t\n")
        assert set(net.edges) == {(0, 1), (1, 0)}

    def test_discrete_file(self):
        net = loads_network(DISCRETE)
        assert isinstance(net, DiscreteTemporalNetwork)
        assert np.array_equal(net.instants, np.array([0.0, 1.0]))
        assert net.snapshot_at(1)[0, 1] == 1.5
        assert net.snapshot_at(1)[1, 2] == 0.25
        assert net.snapshot_at(2)[0, 1] == 2.0

    def test_initial_block(self):
        net = loads_network("nodes 2\ninitial\n1 2 3.0\ninstant 0.0\n2 1 1.0\n")
        assert net.initial_adjacency[0, 1] == 3.0
        assert net.snapshot_at(1)[1, 0] == 1.0

    def test_empty_instant_block_is_fine(self):
        net = loads_network("nodes 2\ninstant 0.0\ninstant 1.0\n1 2 1.0\n")
        assert net.snapshot_at(1).nnz == 0

    def test_expression_with_spaces_survives(self):
        net = loads_network("nodes 2\ninterval 0 1\nedge 1 2 0.5 * (t + 1)\n")
        assert net.edges[(0, 1)](1.0) == 1.0

    def test_load_from_path(self, tmp_path):
        path = tmp_path / "net.txt"
        path.write_text(CONTINUOUS)
        assert load_network(path).n == 2
        assert load_network(str(path)).n == 2


class TestErrors:
    @pytest.mark.parametrize("text,fragment", [
        ("interval 0 1\nedge 1 2 t\n", "before `nodes`"),
        ("nodes 2\nnodes 2\n", "duplicate `nodes`"),
        ("nodes 0\n", "must be positive"),
        ("nodes 2\nedge 1 2 t\n", "missing `interval`"),
        ("nodes 2\ninterval 1 1\nedge 1 2 t\n", "empty"),
        ("nodes 2\ninterval 0 1\ninterval 0 2\nedge 1 2 t\n", "duplicate `interval`"),
        ("nodes 2\ninterval 0 1\nedge 1 3 t\n", "outside 1..2"),
        ("nodes 2\ninterval 0 1\nedge 1 2 t\nedge 1 2 t\n", "duplicate edge"),
        ("nodes 2\nsymmetric\ninterval 0 1\nedge 1 2 t\nedge 2 1 t\n", "already implied"),
        ("nodes 2\ninterval 0 1\nedge 1 2 tan(t)\n", "bad edge expression"),
        ("nodes 2\ninterval 0 1\nedge 1 2 t\ninstant 0\n", "cannot mix"),
        ("nodes 2\ninstant 0\n1 2 1\nedge 1 2 t\n", "cannot mix"),
        ("nodes 2\nsymmetric\ninstant 0\n1 2 1\n", "applies only to edge files"),
        ("nodes 2\n1 2 1.0\n", "unknown construct"),
        ("nodes 2\ninstant 0\n1 2 -1.0\n", "nonnegative"),
        ("nodes 2\ninstant 0\n1 2 1\n1 2 2\n", "duplicate entry"),
        ("nodes 2\ninstant 0\n1 2\n", "expected `<i> <j> <w>`"),
        ("nodes 2\ninstant zero\n", "not a number"),
        ("nodes 2\n", "neither edges nor instants"),
        ("", "missing `nodes`"),
        ("nodes 2\ninstant 1\n1 2 1\ninstant 0\n1 2 1\n", "not strictly increasing"),
    ])
    def test_grammar_violations(self, text, fragment):
        with pytest.raises(NetworkFormatError, match=fragment):
            loads_network(text)

    def test_errors_carry_line_numbers(self):
        with pytest.raises(NetworkFormatError, match="line 3"):
            loads_network("nodes 2\ninterval 0 1\nedge 1 5 t\n")

    def test_opaque_callable_cannot_be_written(self):
        net = ContinuousTemporalNetwork(
            n=2, interval=(0.0, 1.0),
            edges={(0, 1): TimeFunction.from_callable(lambda t: t)})
        with pytest.raises(NetworkFormatError, match="opaque callable"):
            dumps_network(net)

    def test_non_network_rejected(self):
        with pytest.raises(NetworkFormatError):
            dumps_network({"not": "a network"})


class TestRoundTrip:
    def test_continuous_round_trip(self):
        net = loads_network(CONTINUOUS)
        again = loads_network(dumps_network(net))
        assert again.n == net.n
        assert again.interval == net.interval
        for pair, fn in net.edges.items():
            assert again.edges[pair].source == fn.source

    def test_synthetic_round_trip_preserves_values(self):
        net = synthetic_five_node()
        again = loads_network(dumps_network(net))
        ts = np.linspace(0.0, 1.0, 11)
        for pair, fn in net.edges.items():
            assert np.array_equal(again.edges[pair](ts), fn(ts))

    def test_discrete_round_trip_is_exact_with_awkward_floats(self, rng, tmp_path):
        # shortest round-trip reprs must reproduce every bit
        n = 4
        instants = np.array([0.1, 0.2 + 1e-13, math.pi])
        snapshots = []
        for _ in instants:
            A = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
            A[0, 1] = 1.0 / 3.0
            snapshots.append(A)
        net = DiscreteTemporalNetwork(n, instants, tuple(snapshots),
                                      initial_adjacency=np.eye(n) * 0.7)
        path = tmp_path / "net.txt"
        save_network(net, path)
        again = load_network(path)
        assert np.array_equal(again.instants, net.instants)
        assert np.array_equal(again.initial_adjacency.toarray(),
                              net.initial_adjacency.toarray())
        for k in range(1, 4):
            assert np.array_equal(again.snapshot_at(k).toarray(),
                                  net.snapshot_at(k).toarray())

    def test_save_to_file_object(self):
        import io
        buffer = io.StringIO()
        save_network(loads_network(DISCRETE), buffer)
        assert loads_network(buffer.getvalue()).n == 3
