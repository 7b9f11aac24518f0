import numpy as np
import pytest

from nettomo import io as nio
from nettomo.io import FileFormatError
from nettomo.netgraph import RoutingMatrix
from nettomo.topogen import TopoConfig, make_instance

from conftest import EIGHT_LINK_PATHS


def test_graph_round_trip(fig2_network):
    text = nio.format_graph(fig2_network)
    assert text.splitlines()[0] == "boundary: n1 n2 n5 n6"
    back = nio.parse_graph(text)
    assert back.edges == fig2_network.edges and back.boundary == fig2_network.boundary


def test_graph_integer_nodes():
    net = make_instance(TopoConfig(40, 2.5, 4, 1)).network
    back = nio.parse_graph(nio.format_graph(net))
    assert set(back.edges) == set(net.edges) and back.boundary == net.boundary


@pytest.mark.parametrize("text", ["0 1 0\n", "boundary: 0 1\n0 1\n", "boundary: 0 1\n0 1 x\n",
                                  "boundary: 0 9\n0 1 0\n", "boundary: 0\nboundary: 1\n0 1 0\n"])
def test_graph_errors(text):
    with pytest.raises(FileFormatError):
        nio.parse_graph(text)


def test_routing_json_and_csv_agree():
    rm = RoutingMatrix.from_paths(EIGHT_LINK_PATHS, 8)
    js = nio.format_routing(rm)
    csv_text = "\n".join(",".join(map(str, row)) for row in rm.entries) + "\n"
    assert nio.parse_routing(js) == rm
    assert nio.parse_routing(csv_text) == rm
    assert nio.parse_routing(js).paths[1].links == (0, 2, 3)


@pytest.mark.parametrize("text", ["", "{", '{"n": 3}', '{"n": 0, "paths": [[0]]}',
                                  '{"n": 2, "paths": [[0, 5]]}', '{"n": 2, "paths": [[]]}',
                                  "1,0\n1\n", "1,2\n", "0,0\n"])
def test_routing_errors(text):
    with pytest.raises(FileFormatError):
        nio.parse_routing(text)


def test_vector_round_trip():
    v = np.array([0.1, 2.0, 0.0])
    assert np.array_equal(nio.parse_vector(nio.format_vector(v, "y"), "y"), v)
    with pytest.raises(FileFormatError):
        nio.parse_vector("z\n1\n")
    with pytest.raises(FileFormatError):
        nio.parse_vector("x\n1\n", "y")
    with pytest.raises(FileFormatError):
        nio.parse_vector("y\nabc\n")
    with pytest.raises(FileFormatError):
        nio.parse_vector("y\nnan\n")


def test_atomic_write(tmp_path):
    target = tmp_path / "out.txt"
    nio.write_text(target, "hello\n")
    assert target.read_text() == "hello\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]


def test_dumps_is_sorted():
    assert nio.dumps({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'
