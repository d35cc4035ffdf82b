import json
import subprocess
import sys

from relpres.cli import main, run


def report(argv):
    code, rep, _ = run(argv)
    return code, rep


def test_classify_single_letter_word():
    code, rep = report(["classify", "--free", "g,h", "g t h"])
    assert code == 0 and rep["schema"] == 1
    c = rep["result"]["classification"]
    assert c["unimodular"] and c["complexity_le_one"]


def test_decompose_two_syllables_has_p_two():
    code, rep = report(["decompose", "--abelian", "g1,g2", "--vars", "x,y", "g1 x g2 y"])
    assert code == 0
    assert rep["result"]["cosets"]["p"] == 2


def test_centre_braid_relator():
    code, rep = report(["centre", "--free", "g", "t g t g^-1 t^-1 g^-1"])
    assert code == 0
    assert rep["result"]["centre"]["verdict"] == "ONE_RELATOR_CENTRE_CASE"


def test_centre_with_missing_hypothesis_exits_two(tmp_path):
    g = tmp_path / "G.txt"
    g.write_text("generators: g, h\n")
    code, rep = report(["centre", "--group", str(g), "g t"])
    assert code == 2 and rep["result"]["centre"]["verdict"] == "UNKNOWN"


def test_centre_with_required_hypothesis_is_an_error(tmp_path):
    g = tmp_path / "G.txt"
    g.write_text("generators: g, h\n")
    code, rep = report(["centre", "--group", str(g), "--require-hypotheses", "g t"])
    assert code == 1 and rep["error"]["code"] == "HYPOTHESIS_UNVERIFIED"


def test_diagram_failing_euler_test_is_malformed(tmp_path):
    f = tmp_path / "d.json"
    f.write_text(json.dumps({"faces": [{"id": "A", "boundary": [{"corner": "a"}, {"edge": "e", "dir": 1}]}]}))
    code, rep = report(["diagram", "check", str(f), "--abelian", "a,b", "--relator", "a t"])
    assert code == 1 and rep["error"]["code"] == "MALFORMED"


def test_diagram_with_embedded_presentation_passes(tmp_path):
    f = tmp_path / "d.json"
    f.write_text(
        json.dumps(
            {
                "presentation": {"H": {"generators": ["a"], "class": "free"}, "variables": ["t"], "relators": ["a t"]},
                "faces": [
                    {"id": "P", "boundary": [{"corner": "a"}, {"edge": "e", "dir": 1}]},
                    {"id": "Q", "boundary": [{"corner": "a^-1"}, {"edge": "e", "dir": -1}]},
                ],
                "phi": {"P": ["a"], "images": ["a"]},
            }
        )
    )
    code, rep = report(["diagram", "check", str(f)])
    assert code == 0
    assert rep["result"]["diagram"]["status"] == "PASS"
    assert rep["result"]["phi_reduced"]["verdict"] == "NOT_PHI_REDUCED"


def test_products_verify_family(tmp_path):
    f = tmp_path / "fam.json"
    f.write_text(json.dumps({"I": list("abcdef"), "omega": ["abde", "bcef", "def"]}))
    code, rep = report(["products", "verify", str(f), "--depth", "2"])
    assert code in (0, 2)
    assert rep["result"]["tree"] == "((DEF * B) *_{B*D*E} ABDE) *_{B*E*F} BCEF"


def test_products_verify_semidirect(tmp_path):
    f = tmp_path / "asp.json"
    spec = {"A": {"generators": ["a"], "class": "cyclic"}, "B": {"generators": ["b"], "class": "cyclic"},
            "phi": [["b"]], "N": ["a^2"], "psi": ["b"]}
    f.write_text(json.dumps({"asp": spec}))
    code, rep = report(["products", "verify", str(f)])
    assert code == 0
    assert rep["result"]["asp"]["abelianization"]["rank"] == 1


def test_products_verify_amalgam(tmp_path):
    f = tmp_path / "afp.json"
    spec = {"A": {"generators": ["x"], "class": "cyclic"}, "B": {"generators": ["y"], "class": "cyclic"},
            "a": "x^2", "b": "y^3"}
    f.write_text(json.dumps({"afp": spec}))
    code, rep = report(["products", "verify", str(f)])
    assert code == 0 and rep["result"]["afp_centre"]["in_A"] == ["x^2"]


def test_parse_error_carries_position(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"I": [\n  "a",, ]}')
    code, rep = report(["products", "verify", str(f)])
    assert code == 1 and rep["error"]["code"] == "PARSE_ERROR" and rep["error"]["line"] == 2


def test_bad_word_is_a_parse_error():
    code, rep = report(["classify", "--free", "g", "g z"])
    assert code == 1 and rep["error"]["code"] == "UNDECLARED_GENERATOR"


def test_nonpositive_limits_are_rejected():
    code, rep = report(["classify", "--free", "g", "--depth", "0", "g t"])
    assert code == 1 and rep["error"]["code"] == "BAD_CONFIG"


def test_seed_is_recorded_and_reports_are_deterministic():
    a = report(["selftest", "--only", "10", "--seed", "7"])
    b = report(["selftest", "--only", "10", "--seed", "7"])
    assert a[1]["config"]["seed"] == 7
    strip = lambda r: [{k: v for k, v in c.items() if k != "seconds"} for c in r["result"]["criteria"]]  # noqa: E731
    assert strip(a[1]) == strip(b[1]) and a[0] == 0


def test_output_flag_writes_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["classify", "--free", "g", "g t", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["schema"] == 1
    assert capsys.readouterr().out == ""


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "relpres", "classify", "--free", "g", "g t"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["classification"]["unimodular"]
