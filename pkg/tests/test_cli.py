import json
import subprocess
import sys
from fractions import Fraction as Fr

import pytest

from helpers import ingredients, realize
from semitoric.cli import main
from semitoric.moves import Chop
from semitoric.semitoricfan import apply_move, standard_fan

TRIANGLE = {"vectors": [[1, 0], [0, 1], [-1, -1]]}
DOUBLE_WINDING = {"vectors": [[1, 0], [0, 1], [-1, -1], [1, 0], [-1, 1], [0, -1]]}
CHOPPED_SQUARE = {"vectors": [[1, 0], [1, 1], [0, 1], [-1, 1], [-1, 0], [0, -1]]}


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def as_json(out):
    return json.loads(out)


def test_validate(capsys, write):
    code, out = run(capsys, "validate", write("t.json", TRIANGLE))
    assert code == 0 and as_json(out)["valid"]
    code, out = run(capsys, "validate", write("f.json", DOUBLE_WINDING))
    assert code == 1 and as_json(out)["reason"] == "winding=2"
    code, _ = run(capsys, "validate", write("bad.json", "{not json"))
    assert code == 2
    code, _ = run(capsys, "validate", write("odd.json", {"colour": "blue"}))
    assert code == 2
    code, out = run(capsys, "validate", write("s.json", standard_fan(1).to_json()))
    assert code == 0 and as_json(out)["kind"] == "semitoric_fan"
    bad_labels = {"vectors": [[0, -1], [1, 0], [0, 1], [-1, 0]], "labels": ["D", "H", "D", "D"]}
    code, out = run(capsys, "validate", write("h.json", bad_labels))
    assert code == 1 and "top boundary" in as_json(out)["reason"]


def test_validate_polygons(capsys, write):
    poly = realize(standard_fan(1), scale=2)
    code, out = run(capsys, "validate", write("p.json", poly.to_json()))
    assert code == 0 and as_json(out)["kind"] == "polygon"
    broken = poly.to_json()
    broken["markers"][0]["lambda"] = "1/3"
    code, out = run(capsys, "validate", write("q.json", broken))
    assert code == 1 and not as_json(out)["valid"]


def test_reduce(capsys, write, tmp_path):
    trace = tmp_path / "trace.json"
    code, out = run(capsys, "reduce", write("c.json", CHOPPED_SQUARE), "--verify", "--out", str(trace))
    assert code == 0
    result = as_json(out)
    assert result["summary"] == "Rectangle, 2 moves" and result["verified"]
    assert [m["move"] for m in json.loads(trace.read_text())] == ["unchop", "unchop"]
    code, _ = run(capsys, "reduce", write("f.json", DOUBLE_WINDING))
    assert code == 1


def test_normalize(capsys, write):
    code, out = run(capsys, "normalize", write("s.json", standard_fan(2).to_json()), "--verify")
    assert code == 0 and as_json(out)["summary"] == "standard c=2, 0 moves"
    chopped = apply_move(standard_fan(1), Chop(0))
    code, out = run(capsys, "normalize", write("c.json", chopped.to_json()), "--verify")
    result = as_json(out)
    assert code == 0 and result["summary"] == "standard c=1, 1 moves"
    assert result["fan"] == standard_fan(1).to_json()


def test_enumerate(capsys, tmp_path):
    code, out = run(capsys, "enumerate", "--d", "3", "--bound", "2")
    assert code == 0 and as_json(out)["solutions"][0]["word"] == [-1, -1, -1]
    code, out = run(capsys, "enumerate", "--d", "4", "--bound", "1", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "word,weight,winding,model" and len(out.splitlines()) == 6
    code, out = run(capsys, "enumerate", "--d", "5", "--bound", "2", "--check")
    assert code == 0 and as_json(out)["equivalence"]["counterexamples"] == []
    assert run(capsys, "enumerate", "--d", "30", "--bound", "9")[0] == 1
    assert run(capsys, "enumerate", "--d", "0", "--bound", "1")[0] == 2


def test_distance(capsys, write):
    m = ingredients(realize(standard_fan(1), scale=2), Fr(1, 4))
    n = ingredients(realize(standard_fan(1), scale=2), Fr(1, 2))
    a, b = write("m.json", m.to_json()), write("n.json", n.to_json())
    code, out = run(capsys, "distance", a, a)
    assert code == 0 and as_json(out)["distance"] == 0
    code, out = run(capsys, "distance", a, b, "--measure", "lebesgue")
    result = as_json(out)
    assert result["distance"] == pytest.approx(float(n.h[0] - m.h[0])) and result["measure"] == "lebesgue"
    assert result["truncation_tail_bound"] > 0
    two = write("two.json", ingredients(realize(standard_fan(2))).to_json())
    code, out = run(capsys, "distance", a, two)
    assert code == 1 and "m_f" in as_json(out)["error"]
    p = write("p.json", realize(standard_fan(0)).to_json())
    code, out = run(capsys, "distance", p, p, "--measure", "lebesgue")
    assert code == 0 and as_json(out)["distance"] == "0"


def test_path(capsys, write, tmp_path):
    m = ingredients(realize(apply_move(standard_fan(1), Chop(1)), scale=2))
    n = ingredients(realize(standard_fan(1), scale=2))
    a, b = write("m.json", m.to_json()), write("n.json", n.to_json())
    code, out = run(capsys, "path", a, b, "--steps", "12")
    samples = as_json(out)
    assert code == 0 and len(samples) == 13
    assert samples[0] == m.to_json() and samples[-1] == n.to_json()
    target = tmp_path / "path.json"
    code, out = run(capsys, "path", a, b, "--steps", "12", "--out", str(target))
    assert code == 0 and as_json(out)["samples"] == 13 and json.loads(target.read_text()) == samples
    two = write("two.json", ingredients(realize(standard_fan(2))).to_json())
    assert run(capsys, "path", a, two)[0] == 1
    assert run(capsys, "path", a, b, "--steps", "0")[0] == 2


def test_render(capsys, write, tmp_path):
    target = tmp_path / "out.svg"
    code, _ = run(capsys, "render", write("t.json", TRIANGLE), write("s.json", standard_fan(1).to_json()),
                  "--out", str(target))
    assert code == 0 and target.read_text().startswith("<svg")
    code, out = run(capsys, "render")
    assert code == 0 and 'width="240"' in out


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["distance", "a.json", "b.json", "--measure", "counting"]) == 2
    assert main(["validate", "/nonexistent/file.json"]) == 2
    capsys.readouterr()


def test_output_is_byte_deterministic(tmp_path):
    fan = tmp_path / "fan.json"
    fan.write_text(json.dumps(apply_move(standard_fan(2), Chop(0)).to_json()))
    m = ingredients(realize(apply_move(standard_fan(1), Chop(1)), scale=2))
    n = ingredients(realize(standard_fan(1), scale=2))
    (tmp_path / "m.json").write_text(json.dumps(m.to_json()))
    (tmp_path / "n.json").write_text(json.dumps(n.to_json()))
    commands = [
        ["normalize", str(fan)],
        ["enumerate", "--d", "5", "--bound", "2", "--format", "csv"],
        ["distance", str(tmp_path / "m.json"), str(tmp_path / "n.json")],
        ["path", str(tmp_path / "m.json"), str(tmp_path / "n.json"), "--steps", "8"],
        ["render", str(fan)],
    ]
    for argv in commands:
        outputs = {subprocess.run([sys.executable, "-m", "semitoric", *argv], capture_output=True,
                                  check=True).stdout for _ in range(2)}
        assert len(outputs) == 1
