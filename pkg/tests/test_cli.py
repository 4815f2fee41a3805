import json
import subprocess
import sys

import pytest

from scrollfano import __version__
from scrollfano.cli import cache_dir, main


@pytest.fixture(autouse=True)
def private_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("SCROLLFANO_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_census_json(capsys):
    code, out, _ = run(capsys, "census", "c12", "--json", "-")
    assert code == 0
    data = json.loads(out)
    assert data["class_count"] == 3
    assert data["status"] == "pass"
    assert "timing_seconds" not in data
    assert sorted(c["label"] for c in data["classes"]) == ["F", "F1", "F1v"]


def test_census_timing_flag(capsys):
    code, out, _ = run(capsys, "census", "c12", "--json", "-", "--timing")
    assert code == 0 and "census" in json.loads(out)["timing_seconds"]


def test_census_summary_and_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "census", "syz", "--json", str(path))
    assert code == 0
    assert "PASS" in out and "FAIL" not in out
    assert json.loads(path.read_text())["class_count"] == 5


def test_cache_is_used_and_corruption_is_ignored(capsys, private_cache):
    run(capsys, "census", "c12")
    files = list(private_cache.glob("census-c12-*.json"))
    assert len(files) == 1 and f"v{__version__}" in files[0].name
    first = run(capsys, "census", "c12", "--json", "-")[1]
    files[0].write_text('{"digest": "0", "graph": {}}')
    code, again, _ = run(capsys, "census", "c12", "--json", "-")
    assert code == 0 and again == first
    files[0].write_text("not json")
    assert run(capsys, "census", "c12", "--json", "-")[1] == first


def test_cache_status_and_clear(capsys, private_cache):
    run(capsys, "census", "c12")
    code, out, _ = run(capsys, "cache", "status")
    assert code == 0 and "cached graphs: 1" in out
    assert str(cache_dir()) in out
    run(capsys, "cache", "clear")
    assert not list(private_cache.glob("*.json"))


def test_depth_limit_exit_code(capsys):
    code, out, _ = run(capsys, "census", "nonsyz", "--depth", "0", "--no-cache", "--json", "-")
    assert code == 3
    assert json.loads(out)["status"] == "mismatch"


def test_bad_scenario_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "census", str(tmp_path / "missing.json"))
    assert code == 2 and "error" in err
    bad = tmp_path / "bad.json"
    data = json.loads((__import__("importlib.resources").resources.files("scrollfano") / "data" / "c12.json").read_text())
    data["glue_gens"] = [["1/3", "0"]]
    bad.write_text(json.dumps(data))
    assert run(capsys, "census", str(bad))[0] == 2


def test_walls_command(capsys):
    code, out, _ = run(capsys, "walls", "syz", "--json", "-")
    walls = {tuple(w["vector"]) for w in json.loads(out)["walls"]}
    assert code == 0
    assert {(1, 2, 0), (1, -2, 0), (1, 0, 2), (1, 0, -2)} <= walls
    code, out, _ = run(capsys, "walls", "syz", "--region", "5,4,4;5,-4,4;5,-4,-4;5,4,-4", "--kind", "Pex",
                       "--json", "-")
    assert code == 0 and all(w["kind"] == "Pex" for w in json.loads(out)["walls"])


def test_orbits_command(capsys):
    code, out, _ = run(capsys, "orbits", "syz", "--kind", "pex", "--bound", "20", "--json", "-")
    data = json.loads(out)
    assert code == 0 and data["movable_only"] and len(data["orbits"]) == 4


def test_relations_command(capsys):
    code, out, _ = run(capsys, "relations", "nonsyz", "--json", "-")
    data = json.loads(out)
    assert code == 0 and len(data["relators"]) == 1 and len(data["relators"][0]) == 6


def test_surface_lines_command(capsys):
    code, out, _ = run(capsys, "surface-lines", "syz")
    assert code == 0 and "[4, 7, 4]" in out


def test_worked_example_small_prime(capsys):
    code, out, _ = run(capsys, "verify-appendix", "syz", "--prime", "7", "--json", "-")
    data = json.loads(out)
    assert code == 0 and data["prime"] == 7
    assert all(c["passed"] is None for c in data["checks"])


def test_slice_export_formats(capsys, tmp_path):
    code, csv_text, _ = run(capsys, "slice", "syz", "--level", "24", "--chambers", "nef")
    assert code == 0
    lines = csv_text.splitlines()
    assert lines[0] == "object_type,id,x_num,x_den,y_num,y_den"
    assert any(l.startswith("wall,") for l in lines)
    out = tmp_path / "s.json"
    run(capsys, "slice", "syz", "--level", "24", "--chambers", "nef", "--format", "json", "--output", str(out))
    objs = json.loads(out.read_text())
    assert {o["object_type"] for o in objs} == {"boundary", "chamber", "wall"}
    assert run(capsys, "slice", "c12")[0] == 2


def test_slice_is_deterministic(capsys):
    a = run(capsys, "slice", "nonsyz", "--chambers", "nef")[1]
    b = run(capsys, "slice", "nonsyz", "--chambers", "nef")[1]
    assert a == b


def test_reports_do_not_depend_on_threads(capsys):
    a = run(capsys, "verify-appendix", "syz", "--prime", "5", "--json", "-")[1]
    b = run(capsys, "--threads", "3", "verify-appendix", "syz", "--prime", "5", "--json", "-")[1]
    assert a == b


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "scrollfano.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and __version__ in out.stdout
