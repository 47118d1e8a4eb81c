import json

import pytest

from cbckit.cli import SplitMix64, main, sample_batch
from cbckit.core import parse, total_storage

INVALID_LAYOUT = "cbc m=3 n=3\n0: 0 1\n1: 0 1\n2: 0 1\n"
INTRO_LAYOUT = "cbc m=3 n=3\n0: 0 1\n1: 0 1 2\n2: 0\n"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def invalid_file(tmp_path):
    path = tmp_path / "bad.cbc"
    path.write_text(INVALID_LAYOUT)
    return str(path)


@pytest.fixture
def intro_file(tmp_path):
    path = tmp_path / "intro.cbc"
    path.write_text(INTRO_LAYOUT)
    return str(path)


@pytest.fixture
def table1_file(tmp_path, capsys):
    path = tmp_path / "table1.cbc"
    code, _, _ = run(capsys, "construct", "-n", "43", "-k", "4", "-m", "6", "--out", str(path))
    assert code == 0
    return str(path)


def test_construct_table1(capsys):
    code, out, err = run(capsys, "construct", "-n", "43", "-k", "4", "-m", "6")
    assert code == 0
    system = parse(out)
    assert total_storage(system) == 124
    assert "verdict: optimal" in err
    assert "lower=124" in err


def test_construct_m_plus_one(capsys):
    code, out, err = run(capsys, "construct", "-n", "7", "-k", "4", "-m", "6")
    assert code == 0
    assert total_storage(parse(out)) == 10
    assert "verdict: optimal" in err


def test_construct_gap_case(capsys):
    code, out, err = run(capsys, "construct", "-n", "54", "-k", "5", "-m", "8")
    assert code == 0
    assert total_storage(parse(out)) == 162
    assert "verdict: gap <= 1 (lower bound 161)" in err


def test_construct_unsupported_exits_2(capsys):
    code, _, err = run(capsys, "construct", "-n", "9", "-k", "4", "-m", "6")
    assert code == 2
    assert "no construction covers" in err


def test_construct_out_of_range_exits_2(capsys):
    code, _, err = run(capsys, "construct", "-n", "4", "-k", "2", "-m", "3", "--method", "trivial")
    assert code == 2


def test_construct_uniform_method(capsys):
    code, out, err = run(
        capsys, "construct", "-k", "5", "-m", "8", "-c", "2", "--method", "uniform"
    )
    assert code == 0
    system = parse(out)
    assert system.n == 8 and total_storage(system) == 16


def test_construct_json(capsys):
    code, out, _ = run(capsys, "construct", "-n", "43", "-k", "4", "-m", "6", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["N"] == 124 and payload["verdict"] == "optimal"
    assert total_storage(parse(payload["layout"])) == 124


def test_verify_valid_layout(capsys, table1_file):
    code, out, _ = run(capsys, "verify", table1_file, "-k", "4")
    assert code == 0
    assert out == "valid CBC for k=4, N=124\n"


def test_verify_invalid_layout(capsys, invalid_file):
    code, out, _ = run(capsys, "verify", invalid_file, "-k", "3")
    assert code == 1
    assert "{0,1} contains 3 items" in out


def test_verify_malformed_exits_2(capsys, tmp_path):
    path = tmp_path / "broken.cbc"
    path.write_text("cbc m=2 n=1\n0: 5\n")
    code, _, err = run(capsys, "verify", str(path), "-k", "2")
    assert code == 2
    assert "outside" in err


def test_verify_json(capsys, invalid_file):
    code, out, _ = run(capsys, "verify", invalid_file, "-k", "3", "--json")
    assert code == 1
    payload = json.loads(out)
    assert payload["valid"] is False
    assert payload["witness"]["servers"] == [0, 1]


def test_bound_exact(capsys):
    code, out, _ = run(capsys, "bound", "-n", "43", "-k", "4", "-m", "6")
    assert code == 0
    assert "exact N = 124" in out


def test_bound_gap(capsys):
    code, out, _ = run(capsys, "bound", "-n", "54", "-k", "5", "-m", "8")
    assert code == 0
    assert "lower bound 161" in out and "upper bound 162" in out


def test_bound_json(capsys):
    code, out, _ = run(capsys, "bound", "-n", "60", "-k", "4", "-m", "6", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["exact"] == 180
    assert "large-n" in payload["source"]


def test_bound_param_error_exits_2(capsys):
    code, _, _ = run(capsys, "bound", "-n", "5", "-k", "9", "-m", "6")
    assert code == 2


def test_plan_intro_example(capsys, intro_file):
    code, out, _ = run(capsys, "plan", intro_file, "-k", "3", "0", "1", "2")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3
    servers = [int(line.rsplit(" ", 1)[1]) for line in lines]
    assert len(set(servers)) == 3


def test_plan_single_item_least_server(capsys, intro_file):
    code, out, _ = run(capsys, "plan", intro_file, "-k", "3", "0")
    assert code == 0
    assert out == "item 0 ← server 0\n"


def test_plan_unplannable_exits_1(capsys, invalid_file):
    code, out, _ = run(capsys, "plan", invalid_file, "-k", "3", "0", "1", "2")
    assert code == 1
    assert "cover only 2 servers" in out


def test_plan_too_many_items_exits_2(capsys, intro_file):
    code, _, _ = run(capsys, "plan", intro_file, "-k", "2", "0", "1", "2")
    assert code == 2


def test_simulate_deterministic(capsys, table1_file):
    runs = []
    for _ in range(2):
        code, out, _ = run(capsys, "simulate", table1_file, "-k", "4", "--batches", "200", "--seed", "42")
        assert code == 0
        runs.append(out)
    assert runs[0] == runs[1]
    assert "max reads in one batch per server: 1" in runs[0]


def test_simulate_total_reads(capsys, table1_file):
    code, out, _ = run(capsys, "simulate", table1_file, "-k", "4", "--batches", "50", "--seed", "7")
    assert code == 0
    assert "total reads: 200" in out  # k * batches


def test_simulate_trivial_layout(capsys, tmp_path):
    path = tmp_path / "trivial.cbc"
    path.write_text("cbc m=4 n=4\n0: 0\n1: 1\n2: 2\n3: 3\n")
    code, out, _ = run(capsys, "simulate", str(path), "-k", "2", "--batches", "100", "--seed", "1")
    assert code == 0
    assert "max reads in one batch per server: 1" in out


def test_simulate_invalid_layout_exits_1(capsys, invalid_file):
    code, _, err = run(capsys, "simulate", invalid_file, "-k", "3", "--batches", "5", "--seed", "0")
    assert code == 1
    assert "unplannable" in err


def test_search_known_values(capsys):
    code, out, _ = run(capsys, "search", "-n", "5", "-k", "2", "-m", "3")
    assert code == 0
    assert out.startswith("optimal N = 7")
    code, out, _ = run(capsys, "search", "-n", "3", "-k", "2", "-m", "3")
    assert out.startswith("optimal N = 3")
    code, out, _ = run(capsys, "search", "-n", "4", "-k", "2", "-m", "3")
    assert out.startswith("optimal N = 5")


def test_search_budget_exits_3(capsys):
    code, _, err = run(capsys, "search", "-n", "5", "-k", "2", "-m", "3", "--budget", "0")
    assert code == 3
    assert "budget" in err


def test_construct_verify_pipeline(capsys, tmp_path):
    cases = [(3, 2, 3), (7, 4, 6), (43, 4, 6), (61, 4, 6), (52, 5, 8)]
    for i, (n, k, m) in enumerate(cases):
        path = tmp_path / f"case{i}.cbc"
        code, _, _ = run(capsys, "construct", "-n", str(n), "-k", str(k), "-m", str(m), "--out", str(path))
        assert code == 0
        code, out, _ = run(capsys, "verify", str(path), "-k", str(k))
        assert code == 0, (n, k, m)


def test_construct_and_bound_agree(capsys):
    for n, k, m in [(3, 2, 3), (7, 4, 6), (43, 4, 6), (60, 4, 6)]:
        code, out, _ = run(capsys, "construct", "-n", str(n), "-k", str(k), "-m", str(m), "--json")
        assert code == 0
        built = json.loads(out)
        code, out, _ = run(capsys, "bound", "-n", str(n), "-k", str(k), "-m", str(m), "--json")
        bound = json.loads(out)
        assert bound["exact"] == built["N"]


def test_splitmix_reference_sequence():
    # Pin the generator so alternate implementations can cross-check.
    rng = SplitMix64(42)
    first = [rng.next_u64() for _ in range(3)]
    assert first == [
        13679457532755275413,
        2949826092126892291,
        5139283748462763858,
    ]
    assert sample_batch(SplitMix64(42), 10, 3) == sample_batch(SplitMix64(42), 10, 3)


def test_sample_batch_is_a_k_subset():
    rng = SplitMix64(7)
    for _ in range(50):
        batch = sample_batch(rng, 9, 4)
        assert len(batch) == 4
        assert len(set(batch)) == 4
        assert all(0 <= x < 9 for x in batch)
