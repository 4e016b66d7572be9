import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symtensor.cli import main
from symtensor.exactfield import field_make
from symtensor.fileio import TensorFileError, digest, load_tensor, save_tensor, tensor_to_dict
from symtensor.instances import SHAPES, random_tensor

FIELDS = [(11, 1), (101, 1), (7, 2), (5, 3)]


@given(st.sampled_from(FIELDS), st.sampled_from(sorted(SHAPES)), st.integers(0, 10**6))
def test_round_trip(pe, shape, s):
    A = random_tensor(field_make(*pe), shape, s)
    text = save_tensor(A)
    B = load_tensor(text)
    assert B == A
    assert save_tensor(B) == text
    assert digest(B) == digest(A)


def test_extension_entries_are_coefficient_lists():
    A = random_tensor(field_make(7, 2), "genus4", 0)
    entry = tensor_to_dict(A)["blocks"][0]["slices"][0][0][0]
    assert isinstance(entry, list) and len(entry) == 2


def _mutate(A, fn):
    data = tensor_to_dict(A)
    fn(data)
    return json.dumps(data)


@pytest.mark.parametrize(
    "mutation",
    [
        lambda d: d.pop("p"),
        lambda d: d.update(p=9),
        lambda d: d.update(modulus=[1, 1]),
        lambda d: d["blocks"][0]["slices"].pop(),
        lambda d: d["blocks"][0]["slices"][0][0].__setitem__(1, 5) or d["blocks"][0]["slices"][0][1].__setitem__(0, 6),
        lambda d: d["blocks"][0]["slices"][0][0].__setitem__(0, "x"),
        lambda d: d["blocks"][0]["slices"][0][0].__setitem__(0, True),
    ],
)
def test_malformed_files_rejected(mutation):
    A = random_tensor(field_make(11), "genus4", 1)
    with pytest.raises(TensorFileError):
        load_tensor(_mutate(A, mutation))


def test_not_json_rejected():
    with pytest.raises(TensorFileError):
        load_tensor("{not json")
    with pytest.raises(TensorFileError):
        load_tensor("[1, 2]")


@pytest.fixture
def genus3_file(tmp_path, genus3):
    path = tmp_path / "g3.json"
    path.write_text(save_tensor(genus3.tensor))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_seed_command_writes_loadable_tensor(tmp_path, capsys, genus3):
    out = tmp_path / "seeded.json"
    code, _, _ = run(capsys, "seed", "--shape", "genus3", "--field", "101", "--seed", "1", "--out", out)
    assert code == 0
    assert load_tensor(out.read_text()) == genus3.tensor


def test_cayley_command(genus3_file, capsys, genus3):
    code, out, _ = run(capsys, "cayley", genus3_file)
    assert code == 0
    rep = json.loads(out)
    assert rep["cayley"]["count"] == 8 and rep["cayley"]["complete"]
    assert rep["input_digest"] == digest(genus3.tensor)
    assert rep["checks"][0]["pass"] is True
    assert set(rep) >= {"tool_version", "input_digest", "shape", "cayley", "secants", "hyperplanes", "checks"}


def test_pipeline_command(genus3_file, capsys):
    code, out, _ = run(capsys, "pipeline", "--shape", "genus3", genus3_file)
    assert code == 0
    rep = json.loads(out)
    assert len(rep["hyperplanes"]) == 28
    assert all(c["pass"] for c in rep["checks"])
    assert all(len(h["contact_points"]) == 2 for h in rep["hyperplanes"])


def test_tangents_and_secants_commands(genus3_file, capsys):
    code, out, _ = run(capsys, "secants", genus3_file)
    assert code == 0 and json.loads(out)["secants"]["count"] == 28
    code, out, _ = run(capsys, "tangents", genus3_file)
    assert code == 0 and "contact_points" in json.loads(out)["hyperplanes"][0]


def test_singularities_command(tmp_path, capsys, accidental_example):
    path = tmp_path / "acc.json"
    path.write_text(save_tensor(accidental_example))
    code, out, _ = run(capsys, "singularities", "--max-ext-degree", "1", path)
    assert code == 0
    kinds = {r["kind"] for r in json.loads(out)["singularities"]}
    assert "essential" in kinds


def test_failed_check_exits_one(tmp_path, capsys, cayley_cubic):
    path = tmp_path / "cubic.json"
    path.write_text(save_tensor(cayley_cubic))
    code, out, _ = run(capsys, "cayley", path)
    assert code == 1
    assert json.loads(out)["checks"][0]["pass"] is False
    code, _, err = run(capsys, "secants", path)
    assert code == 1 and "CayleyIncomplete" in err


def test_usage_errors_exit_two(tmp_path, genus3_file, capsys):
    assert run(capsys, "pipeline", "--shape", "genus4", genus3_file)[0] == 2
    assert run(capsys, "cayley", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "cayley", bad)[0] == 2
    assert run(capsys, "seed", "--shape", "genus3", "--field", "9")[0] == 2
    assert run(capsys, "seed", "--shape", "genus3", "--field", "x")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "cayley", "--threads", "0", genus3_file)[0] == 2
    assert run(capsys, "cayley", "--max-ext-degree", "0", genus3_file)[0] == 2


def test_stdin_input(monkeypatch, capsys, genus3):
    monkeypatch.setattr("sys.stdin", io.StringIO(save_tensor(genus3.tensor)))
    code, out, _ = run(capsys, "cayley", "-")
    assert code == 0 and json.loads(out)["cayley"]["count"] == 8


def test_threads_from_environment(monkeypatch, genus3_file, capsys):
    monkeypatch.setenv("SYMTENSOR_THREADS", "3")
    assert run(capsys, "cayley", genus3_file)[0] == 0


def test_verify_command(capsys):
    code, out, _ = run(capsys, "verify", "--claim", "g3-bitangents")
    assert code == 0
    rep = json.loads(out)
    assert rep["field"] == [101, 1] and all(c["pass"] for c in rep["checks"])


def test_verify_on_given_tensor(genus3_file, capsys):
    code, out, _ = run(capsys, "verify", "--claim", "psi-gauss-diagram", genus3_file)
    assert code == 0
    assert json.loads(out)["checks"][0]["claim_id"] == "psi-gauss-diagram"
