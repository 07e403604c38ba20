import json

import numpy as np
import pytest

from hopftwist import catalog
from hopftwist.cli import run
from hopftwist.serialize import algebra_from_doc, parse_document


def _capture(capsys):
    out = capsys.readouterr()
    return out.out, out.err


def test_verify_paper_suite_passes_and_names_many_checks(capsys):
    code = run(["verify", "--suite", "paper"])
    out, _ = _capture(capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["suite"] == "paper"
    assert doc["overall"] is True
    assert len(doc["checks"]) >= 20
    ids = [c["id"] for c in doc["checks"]]
    assert len(ids) == len(set(ids))
    waived = [c for c in doc["checks"] if c["waived"]]
    assert [c["id"] for c in waived] == ["05.twist.c-d4.noncommutativity"]


def test_check_hopf_flags_broken_associativity(tmp_path, capsys):
    code = run(["catalog", "emit", "c-z2"])
    out, _ = _capture(capsys)
    assert code == 0
    doc = json.loads(out)
    # an off-diagonal product entry: scaling it breaks associativity
    doc["mul"][0][1] = [[0.3, 0.0], [0.0, 0.0]]
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(doc))
    code = run(["check-hopf", str(broken)])
    out, err = _capture(capsys)
    assert code == 1
    payload = json.loads(out)
    assert payload["passed"] is False
    failing = [name for name, residual in payload["checks"] if residual > 1e-9]
    assert "associativity" in failing


def test_catalog_emit_roundtrips_through_check_hopf(tmp_path, capsys):
    code = run(["catalog", "emit", "c-z2"])
    out, _ = _capture(capsys)
    assert code == 0
    host = algebra_from_doc(parse_document(out))
    assert host.dim == 2
    assert np.array_equal(host.mul, catalog.algebra("c-z2").mul)
    path = tmp_path / "c-z2.json"
    path.write_text(out)
    assert run(["check-hopf", str(path)]) == 0
    _capture(capsys)


def test_catalog_list_names_everything(capsys):
    assert run(["catalog", "list"]) == 0
    out, _ = _capture(capsys)
    doc = json.loads(out)
    assert set(doc["hosts"]) == set(catalog.host_names())
    assert set(doc["cocycles"]) == set(catalog.cocycle_names())
    assert set(doc["triples"]) == set(catalog.triple_names())


def test_unknown_names_and_flags_exit_2(capsys):
    assert run(["check-hopf", "no-such-host"]) == 2
    _capture(capsys)
    assert run(["verify", "--suite", "unknown"]) == 2
    _capture(capsys)
    assert run(["--tolerance", "-1", "catalog", "list"]) == 2
    _capture(capsys)
    assert run(["no-such-command"]) == 2
    _capture(capsys)
    assert run(["catalog", "emit", "c-z2", "--no-such-flag"]) == 2
    _capture(capsys)


def test_math_failure_exits_1_and_reports_on_stderr(tmp_path, capsys):
    from hopftwist import SpectralTriple
    from hopftwist.serialize import canonical_dumps, triple_to_doc

    scene = catalog.triple_scene("z2z2-torus")
    bad_dirac = np.diag([0.0, 1.0, 2.0, 3.0]).astype(np.complex128)
    bad_dirac[0, 1] = bad_dirac[1, 0] = 0.4
    st = SpectralTriple(4, scene["triple"].generators, bad_dirac)
    path = tmp_path / "bad-triple.json"
    path.write_text(canonical_dumps(triple_to_doc(st)))
    code = run(
        [
            "deform-triple",
            str(path),
            "--host",
            "g-z2z2",
            "--cocycle",
            "klein-bicharacter",
        ]
    )
    _, err = _capture(capsys)
    assert code == 1
    assert "check failed" in err


def test_out_flag_writes_the_payload_to_a_file(tmp_path, capsys):
    target = tmp_path / "pw.json"
    assert run(["peter-weyl", "c-s3", "--out", str(target)]) == 0
    _capture(capsys)
    doc = json.loads(target.read_text())
    dims = sorted(b["dimension"] for b in doc["blocks"])
    assert dims == [1, 1, 2]


def test_flags_are_accepted_before_and_after_the_subcommand(capsys):
    assert run(["--seed", "11", "catalog", "emit", "c-z2"]) == 0
    first, _ = _capture(capsys)
    assert run(["catalog", "emit", "c-z2", "--seed", "11"]) == 0
    second, _ = _capture(capsys)
    assert first == second


def test_cheap_commands_are_byte_deterministic(capsys):
    outputs = []
    for _ in range(2):
        assert run(["peter-weyl", "g-d4"]) == 0
        out, _ = _capture(capsys)
        outputs.append(out)
    assert outputs[0] == outputs[1]
    assert outputs[0].endswith("\n")


def test_text_format_renders_human_readable_lines(capsys):
    assert run(["check-hopf", "c-s3", "--format", "text"]) == 0
    out, _ = _capture(capsys)
    assert "PASS" in out
    assert "associativity" in out


def test_twist_subcommand_emits_transcript_and_algebra(capsys):
    assert run(["twist", "--host", "c-d4", "--cocycle", "klein-induced"]) == 0
    out, _ = _capture(capsys)
    doc = json.loads(out)
    assert doc["transcript"]["report"]["passed"] is True
    twisted = algebra_from_doc(doc["twisted"])
    assert twisted.dim == 8


def test_deform_triple_accepts_a_scene_name(capsys):
    assert run(["deform-triple", "z2z2-torus"]) == 0
    out, _ = _capture(capsys)
    doc = json.loads(out)
    assert doc["dirac_unchanged"] is True
    assert doc["commutator_identity"] <= 1e-9
    assert doc["passed"] is True


def test_check_membership_reports_twisted_verdicts(capsys):
    assert run(["check-membership", "d4-regular", "--twisted"]) == 0
    out, _ = _capture(capsys)
    doc = json.loads(out)
    assert doc["member"] is True
    assert doc["twisted"]["member"] is True
