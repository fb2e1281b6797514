import json

import pytest

from cak.cli import main
from cak.corpus import get_bundle
from cak.serialize import dumps, bundle_to_objs, loads, model_from_obj, dist_from_obj


@pytest.fixture()
def emitted(tmp_path):
    """Write one bundle's artifacts to disk and return their paths."""

    def _emit(name):
        bundle = get_bundle(name)
        paths = {}
        for stem, obj in bundle_to_objs(bundle).items():
            p = tmp_path / f"{name}.{stem}.json"
            p.write_text(dumps(obj), encoding="utf-8")
            paths[stem] = str(p)
        return paths

    return _emit


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    out = json.loads(captured.out) if captured.out else None
    return code, out, captured.err


def test_solve_reports_state(capsys, emitted):
    paths = emitted("chain-vs-independent")
    code, out, err = run(capsys, "solve", paths["low"], "--context", '{"U1": 1, "U2": 0}')
    assert code == 0
    assert out["state"] == {"X1": 1, "X2": 1}
    assert "X1=1" in err


def test_solve_with_intervention(capsys, emitted):
    paths = emitted("disjunctive-merge")
    code, out, _ = run(
        capsys,
        "solve",
        paths["low"],
        "--context",
        '{"U1": 0, "U2": 0, "U3": 1}',
        "--intervene",
        '{"X3": 0}',
    )
    assert code == 0
    assert out["state"] == {"X1": 0, "X2": 0, "X3": 0}


def test_solve_full_intervention_echoes_values(capsys, emitted):
    paths = emitted("chain-vs-independent")
    code, out, _ = run(
        capsys,
        "solve",
        paths["low"],
        "--context",
        '{"U1": 0, "U2": 0}',
        "--intervene",
        '{"X1": 1, "X2": 0}',
    )
    assert code == 0
    assert out["state"] == {"X1": 1, "X2": 0}


def test_solve_bad_context_exits_2(capsys, emitted):
    paths = emitted("chain-vs-independent")
    code, out, err = run(capsys, "solve", paths["low"], "--context", '{"U1": 1}')
    assert code == 2
    assert "error" in out


def test_solve_out_of_domain_value_exits_2(capsys, emitted):
    paths = emitted("chain-vs-independent")
    code, out, _ = run(capsys, "solve", paths["low"], "--context", '{"U1": 7, "U2": 0}')
    assert code == 2
    assert "outside its domain" in out["error"]


def test_invalid_model_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(
        dumps(
            {
                "exogenous": [{"name": "U", "domain": [0, 1]}],
                "endogenous": [
                    {"name": "X1", "domain": [0, 1], "equation": "X2"},
                    {"name": "X2", "domain": [0, 1], "equation": "X1"},
                ],
            }
        ),
        encoding="utf-8",
    )
    code, out, _ = run(capsys, "solve", str(bad), "--context", '{"U": 0}')
    assert code == 2
    assert "cycle" in out["error"]


def test_check_uniform_exit_codes(capsys, emitted):
    good = emitted("chain-vs-independent")
    code, out, _ = run(
        capsys, "check", "uniform", good["low"], good["high"], "--tau", good["tau"], "--omega", good["omega"]
    )
    assert code == 0 and out["verdict"] is True

    bad = emitted("chain-vs-independent-identity-omega")
    code, out, _ = run(
        capsys, "check", "uniform", bad["low"], bad["high"], "--tau", bad["tau"], "--omega", bad["omega"]
    )
    assert code == 1 and out["verdict"] is False
    assert "counterexample" in out


def test_check_exact_requires_inputs(capsys, emitted):
    paths = emitted("unrelated-pair-forward")
    code, out, _ = run(capsys, "check", "exact", paths["low"], paths["high"], "--tau", paths["tau"])
    assert code == 2
    code, out, _ = run(
        capsys,
        "check",
        "exact",
        paths["low"],
        paths["high"],
        "--tau",
        paths["tau"],
        "--omega",
        paths["omega"],
        "--dists",
        paths["low_dist"],
        paths["high_dist"],
    )
    assert code == 0 and out["verdict"] is True


def test_check_abstraction_surjectivity_failure(capsys, emitted):
    paths = emitted("gated-extension")
    code, out, _ = run(capsys, "check", "abstraction", paths["low"], paths["high"], "--tau", paths["tau"])
    assert code == 1
    assert out["detail"].startswith("(a)")
    assert out["counterexample"]["unreached_high_state"]["G"] == 0


def test_check_strong_pixel_counterexample(capsys, emitted):
    paths = emitted("pixel2-two-counter")
    code, out, _ = run(capsys, "check", "strong", paths["low"], paths["high"], "--tau", paths["tau"])
    assert code == 1
    single = out["counterexample"]["first_missing_single"]
    assert set(single) in ({"TH"}, {"LH"})


def test_check_constructive_with_searched_partition_and_witness(capsys, emitted):
    paths = emitted("pixel2-merged")
    code, out, _ = run(
        capsys, "check", "constructive", paths["low"], paths["high"], "--tau", paths["tau"], "--witness"
    )
    assert code == 0
    assert out["witness"]["partition"]["cells"]["TLH"] == ["X11", "X12", "X21"]
    assert out["witness"]["partition"]["marginal"] == ["X22"]


def test_check_constructive_with_explicit_partition(capsys, emitted, tmp_path):
    from cak.corpus import build_voting, voting_natural_partition
    from cak.serialize import partition_to_obj

    paths = emitted("voting-4-2-1")
    partition, _ = voting_natural_partition(build_voting())
    ppath = tmp_path / "partition.json"
    ppath.write_text(dumps(partition_to_obj(partition)), encoding="utf-8")
    code, out, _ = run(
        capsys,
        "check",
        "constructive",
        paths["low"],
        paths["high"],
        "--tau",
        paths["tau"],
        "--partition",
        str(ppath),
    )
    assert code == 0 and out["verdict"] is True


def test_derive_omega_single_and_table(capsys, emitted):
    paths = emitted("disjunctive-merge")
    code, out, err = run(
        capsys,
        "derive-omega",
        paths["low"],
        paths["high"],
        "--tau",
        paths["tau"],
        "--intervention",
        '{"X3": 0}',
    )
    assert code == 0
    assert out["defined"] is True and out["image"] == {}

    code, out, _ = run(
        capsys,
        "derive-omega",
        paths["low"],
        paths["high"],
        "--tau",
        paths["tau"],
        "--intervention",
        '{"X1": 0, "X2": 0}',
    )
    assert code == 0
    assert out["defined"] is False and out["image"] is None

    code, out, _ = run(capsys, "derive-omega", paths["low"], paths["high"], "--tau", paths["tau"])
    assert code == 0
    assert len(out["induced_low"]) == 24
    assert len(out["induced_high"]) == 9


def test_to_uev_writes_equivalent_model(capsys, emitted, tmp_path):
    paths = emitted("unrelated-pair-forward")
    out_model = tmp_path / "m.uev.json"
    out_dist = tmp_path / "d.uev.json"
    code, out, err = run(
        capsys,
        "to-uev",
        paths["low"],
        "--dist",
        paths["low_dist"],
        "--out-model",
        str(out_model),
        "--out-dist",
        str(out_dist),
    )
    assert code == 0
    assert out["equivalent"] is True
    model = model_from_obj(loads(out_model.read_text(encoding="utf-8")))
    dist = dist_from_obj(loads(out_dist.read_text(encoding="utf-8")))
    from cak import check_uev

    assert check_uev(model).verdict
    assert dist.total() == 1


def test_corpus_list_and_emit(capsys, tmp_path):
    code, out, _ = run(capsys, "corpus", "list")
    assert code == 0
    names = [row["name"] for row in out["bundles"]]
    assert "voting-4-2-1" in names and "disjunctive-merge" in names

    code, out, _ = run(capsys, "corpus", "emit", "chain-vs-independent", "--out-dir", str(tmp_path))
    assert code == 0
    assert (tmp_path / "chain-vs-independent.low.json").exists()


def test_reports_are_byte_stable_apart_from_timing(capsys, emitted):
    paths = emitted("chain-vs-independent")
    argv = ["check", "uniform", paths["low"], paths["high"], "--tau", paths["tau"], "--omega", paths["omega"], "--quiet"]
    _, first, err1 = run(capsys, *argv)
    _, second, err2 = run(capsys, *argv)
    first.pop("timing_ms")
    second.pop("timing_ms")
    assert first == second
    assert err1 == "" and err2 == ""


def test_size_cap_flag_exits_2(capsys, emitted, monkeypatch):
    from cak.errors import ENV_MAX_INTERVENTIONS

    # main() writes the flag into the environment; setenv records the
    # pre-test state so the write is undone afterwards.
    monkeypatch.setenv(ENV_MAX_INTERVENTIONS, "10000000")
    paths = emitted("disjunctive-merge")
    code, out, _ = run(
        capsys,
        "--max-interventions",
        "5",
        "derive-omega",
        paths["low"],
        paths["high"],
        "--tau",
        paths["tau"],
    )
    assert code == 2
    assert "cap" in out["error"]
