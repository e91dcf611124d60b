import io
import json
import shutil
import subprocess

import pytest

from latticeiv.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return json.loads(out)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_lattice_info():
    info = call_json("lattice", "info", "--name", "E8(-1)")
    assert info["rank"] == 8 and info["determinant"] == 1 and info["signature"] == [0, 8, 0]


def test_lattice_sum_and_rescale(tmp_path):
    s = call_json("lattice", "sum", "--name", "U", "--name", "A1")
    assert s["gram"] == [[0, 1, 0], [1, 0, 0], [0, 0, 2]]
    r = call_json("lattice", "rescale", "--name", "U", "--n", "2")
    assert r["gram"] == [[0, 2], [2, 0]]


def test_lattice_complement_and_transvection(tmp_path):
    vs = write(tmp_path, "v.json", [[1, 1]])
    c = call_json("lattice", "complement", "--name", "U", "--vectors", vs)
    assert len(c["basis"]) == 1
    lat = write(tmp_path, "l.json", {"gram": [[0, 1, 0], [1, 0, 0], [0, 0, -2]]})
    t = call_json("lattice", "transvect", "--lattice", lat, "--e", "1,0,0", "--f", "0,0,1")
    assert len(t["matrix"]) == 3


def test_enum_roots_of_a2():
    vs = call_json("enum", "--name", "A2", "--norm", "2")
    assert len(vs) == 3


def test_enum_with_pairing_in_an_indefinite_lattice(tmp_path):
    named = write(tmp_path, "n.json", {"h": [1, 1]})
    vs = call_json("enum", "--name", "U", "--norm", "0", "--pair", "h:1", "--vectors", named, "--box", "3")
    assert sorted(map(tuple, vs)) == [(0, 1), (1, 0)]
    code, _, err = call("enum", "--name", "U", "--norm", "0")
    assert code == 2 and "box" in err


def test_roots():
    r = call_json("roots", "--name", "E8(-1)")
    assert r["components"] == [{"type": "E8", "rank": 8}]


def test_fan_commands(tmp_path):
    inp = write(tmp_path, "f.json", {"pi": {"rays": [[1, 0], [0, 1]]}, "hyperplanes": [[1, -1]]})
    fan = call_json("fan", "hyperplanes", "--input", inp)
    assert len(fan["cones"]) == 6
    pts = write(tmp_path, "p.json", {"pi": {"rays": [[1, 0], [0, 1]]}, "form": [[0, 1], [1, 0]], "points": [[1, 0], [0, 1]]})
    assert len(call_json("fan", "points", "--input", pts)["cones"]) == 6
    sup = write(tmp_path, "s.json", {
        "fan": {"cones": [{"rays": [[1, 0, 0], [0, 1, 0], [1, 1, 1]]}]},
        "sigma": {"rays": [[1, 0, 0]]},
        "form": [[0, 1, 0], [1, 0, 0], [0, 0, -2]],
        "hyperplanes": [[0, 0, 1]],
    })
    rep = call_json("fan", "support", "--input", sup)
    assert rep["support_space"] == [[1, 0, 0]] and rep["isotropic_center"] == [[1, 0, 0]]


def test_qcartier(tmp_path):
    form = write(tmp_path, "q.json", [[-2, 0], [0, -2]])
    arr = write(tmp_path, "a.json", {"functionals": [[1, 0], [0, 1]]})
    assert call_json("qcartier", "--form", form, "--arr", arr) == {"proportional": True, "c": "-1/2"}
    arr1 = write(tmp_path, "a1.json", {"functionals": [[1, 0]]})
    assert call_json("qcartier", "--form", form, "--arr", arr1)["proportional"] is False


def test_plcheck_and_weylpoint(tmp_path):
    fan = write(tmp_path, "fan.json", {"cones": [{"rays": [[1, 0], [2, 1]]}, {"rays": [[2, 1], [1, 2]]}, {"rays": [[1, 2], [0, 1]]}]})
    arr = write(tmp_path, "arr.json", {"functionals": [[1, -2], [2, -1]], "multiplicities": [1, 1]})
    gens = write(tmp_path, "g.json", [[[0, 1], [1, 0]]])
    base = write(tmp_path, "b.json", {"rays": [[1, 0], [2, 1]]})
    out = call_json("plcheck", "--fan", fan, "--arr", arr, "--gens", gens, "--base", base, "--solve-rho")
    assert out["solvable"] and out["invariant"] and out["continuous"]
    ch = write(tmp_path, "c.json", {"rays": [[2, 1], [1, 2]]})
    wall = write(tmp_path, "w.json", {"functionals": [[1, -1]]})
    assert call_json("weylpoint", "--chamber", ch, "--arr", wall) == {"point": [4, 5]}


def test_k3_reports():
    s = call_json("k3", "--g", "3", "--report", "section33")
    assert s["corank"] == 1 and s["qcartier"] is None and s["quotient_signature"] == [0, 17, 0]
    sp = call_json("k3", "--g", "4", "--report", "spans")
    assert sp["span_type"]["name"] == "I(2)+I(-2)"
    arr = call_json("k3", "--g", "5", "--report", "k3arr")
    assert arr["pairs"] == 0


def test_enriques():
    out = call_json("enriques", "--check", "pair")
    assert len(out["isotropic_pair"]) == 2


def test_triangle(tmp_path):
    t = call_json("triangle", "--p", "2,3,7")
    assert t["rank"] == 10 and t["k"] == 8 and t["signature"] == [1, 9, 0]
    e = call_json("triangle", "--p", "3,3,4", "--example", "affine-e7")
    assert e["embedding"]["critical"] and e["embedding"]["k_of_j"] == 7
    ident = write(tmp_path, "j.json", {"matrix": [[int(i == j) for j in range(10)] for i in range(10)],
                                        "target": {"gram": t_gram()}})
    out = call_json("triangle", "--p", "2,3,7", "--embed", ident)
    assert out["embedding"]["critical"] is False


def t_gram():
    from latticeiv.triangle import triangle_context

    return [list(r) for r in triangle_context(2, 3, 7).q_lattice.gram]


def test_series(tmp_path):
    s = call_json("series", "s_k", "--input", write(tmp_path, "s.json", {"a": 1, "k": 2, "z": 0.5, "N": 1000}))
    assert 0 < abs(s["value"][0] - 9.8696044011) <= s["tail_bound"]
    p = call_json("series", "product", "--input", write(tmp_path, "p.json", {"walls": [{"f": [1]}], "z": [[0, 1]]}))
    assert "convergence" in p
    e = call_json("series", "eisenstein", "--input", write(tmp_path, "e.json", {"k": 4, "w": [0.3, 0.2], "tau": [0.1, 1.2], "N": 40}))
    assert e["N"] == 40
    code, _, err = call("series", "s_k", "--input", write(tmp_path, "bad.json", {"a": 1}))
    assert code == 1 and "missing" in err


def test_exit_codes(tmp_path):
    assert call("bogus")[0] == 2
    assert call("lattice", "info")[0] == 2
    assert call("lattice", "info", "--name", "Q7")[0] == 1
    assert call("triangle", "--p", "2,3,6")[0] == 1
    assert call("triangle", "--p", "2,3")[0] == 2
    assert call("lattice", "info", "--lattice", str(tmp_path / "none.json"))[0] == 1


def test_text_format():
    code, out, _ = call("--format", "text", "lattice", "info", "--name", "U")
    assert code == 0 and out.startswith("label:")


def test_output_is_deterministic():
    a = call("k3", "--g", "4", "--report", "spans")[1]
    b = call("k3", "--g", "4", "--report", "spans")[1]
    assert a == b


def test_acceptance_subcommand_subset():
    code, out, _ = call("--format", "text", "paper-checks", "--only", "4,9")
    assert code == 0
    assert out.count("[PASS]") == 2


@pytest.mark.skipif(shutil.which("latticeiv") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["latticeiv", "lattice", "info", "--name", "U"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["determinant"] == -1
