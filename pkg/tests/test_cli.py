import json

import pytest

from ucycles.classes.module import parameter_grid
from ucycles.cli.module import ExitCode, RunConfig, build_parser, main
from ucycles.core.module import registry

NONINJECTIVE = ["--class", "noninjective", "-n", "3", "-k", "3"]
DE_BRUIJN = ["--class", "all_words", "-n", "3", "-k", "2", "--symbols", "01"]
RESULT_KEYS = {
    "class",
    "n",
    "k",
    "params",
    "length",
    "cycle",
    "verdict",
    "reasons",
    "degree_violations",
    "components",
}
SMALL_GRID = list(parameter_grid(sorted(registry()), range(2, 5), range(2, 4), cap=100))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_exit_codes_are_stable():
    assert [int(code) for code in ExitCode] == [0, 1, 2, 3, 4]


def test_run_config_from_namespace():
    args = build_parser().parse_args(["generate", *NONINJECTIVE, "--json"])
    cfg = RunConfig.from_namespace(args)
    assert cfg.class_name == "noninjective"
    assert (cfg.n, cfg.k) == (3, 3)
    assert cfg.output == "json"
    assert cfg.cap == 10**7
    assert cfg.word_class().label == "noninjective(n=3, k=3)"


def test_generate(capsys):
    code, out, _ = run(capsys, "generate", *NONINJECTIVE)
    assert code == ExitCode.OK
    assert len(out.strip()) == 21


def test_generate_de_bruijn(capsys):
    code, out, _ = run(capsys, "generate", *DE_BRUIJN)
    assert code == ExitCode.OK
    assert out == "00010111\n"


def test_generate_canonical(capsys):
    code, out, _ = run(capsys, "generate", *NONINJECTIVE, "--canonical")
    cycle = out.strip()
    assert code == ExitCode.OK
    assert cycle == min(cycle[i:] + cycle[:i] for i in range(len(cycle)))


def test_generate_json_is_stable(capsys):
    _, first, _ = run(capsys, "generate", *NONINJECTIVE, "--json")
    _, second, _ = run(capsys, "generate", *NONINJECTIVE, "--json")
    assert first == second
    data = json.loads(first)
    assert data["class"] == "noninjective"
    assert (data["n"], data["k"], data["length"]) == (3, 3, 21)
    assert data["params"] == {}
    assert data["verdict"] is True
    assert data["reasons"] == []
    assert list(data) == sorted(data)


def test_generate_without_cycle(capsys):
    code, out, _ = run(capsys, "generate", "--class", "illegal_ranking", "-n", "3")
    assert code == ExitCode.NEGATIVE
    assert "reasons: disconnected" in out
    assert "112 121 211" in out


def test_generate_without_cycle_json(capsys):
    code, out, _ = run(
        capsys, "generate", "--class", "illegal_ranking", "-n", "3", "--json"
    )
    data = json.loads(out)
    assert code == ExitCode.NEGATIVE
    assert data["verdict"] is False
    assert data["reasons"] == ["disconnected"]
    assert data["degree_violations"] == []
    assert len(data["components"]) > 1


def class_argv(word_class):
    argv = ["--class", word_class.name, "-n", str(word_class.n)]
    argv += ["-k", str(word_class.k)]
    for key, value in word_class.params:
        if key == "categories":
            argv += ["--categories", ",".join(str(size) for size in value)]
        else:
            argv += [f"--{key}", str(value)]
    return argv


@pytest.mark.parametrize(
    "argv, expected",
    [
        (NONINJECTIVE, ExitCode.OK),
        (["--class", "illegal_ranking", "-n", "3"], ExitCode.NEGATIVE),
    ],
)
def test_generate_json_keys(capsys, argv, expected):
    code, out, _ = run(capsys, "generate", *argv, "--json")
    data = json.loads(out)
    assert code == expected
    assert RESULT_KEYS <= set(data)
    if code == ExitCode.OK:
        assert data["degree_violations"] == []
        assert len(data["components"]) == 1
    else:
        assert data["length"] is None
        assert data["cycle"] is None


def test_exists_json_keys(capsys):
    argv = ["--class", "all_words", "-n", "1", "-k", "3", "--json"]
    code, out, _ = run(capsys, "exists", *argv)
    data = json.loads(out)
    assert code == ExitCode.OK
    assert RESULT_KEYS <= set(data)
    assert data["verdict"] is None
    assert data["reasons"] == ["word_length_below_two"]

    _, out, _ = run(capsys, "exists", *NONINJECTIVE, "--json")
    assert RESULT_KEYS <= set(json.loads(out))


@pytest.mark.parametrize(
    "word_class", SMALL_GRID, ids=[word_class.label for word_class in SMALL_GRID]
)
def test_generate_output_is_reproducible(capsys, word_class):
    for extra in ([], ["--json"], ["--canonical"]):
        first = run(capsys, "generate", *class_argv(word_class), *extra)
        second = run(capsys, "generate", *class_argv(word_class), *extra)
        assert first == second
        assert first[0] in (ExitCode.OK, ExitCode.NEGATIVE)


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", *NONINJECTIVE, "AAACACCCBBBAABABBCBCC")
    assert code == ExitCode.OK
    assert out == "valid\n"

    code, out, _ = run(capsys, "verify", *DE_BRUIJN, "11101000")
    assert code == ExitCode.OK


def test_verify_reports_defect(capsys):
    doubled = "AAACACCCBBBAABABBCBCC" * 2
    code, out, _ = run(capsys, "verify", *NONINJECTIVE, doubled)
    assert code == ExitCode.NEGATIVE
    assert out.startswith("invalid: DuplicateWindow index=0 other_index=21")

    code, out, _ = run(capsys, "verify", *NONINJECTIVE, doubled, "--json")
    assert json.loads(out)["reason"]["kind"] == "DuplicateWindow"


def test_verify_rejects_foreign_symbols(capsys):
    code, _, err = run(capsys, "verify", *NONINJECTIVE, "AAZ")
    assert code == ExitCode.USAGE
    assert "'Z'" in err


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--class", "illegal_ranking", "-n", "3")
    assert code == ExitCode.OK
    assert out.splitlines() == ["14", "formula: 14", "enumeration: 14"]


@pytest.mark.parametrize(
    "argv, theorem, engine",
    [
        (["--class", "nonsurjective", "-n", "5", "-k", "2"], "NotExists", "false"),
        (
            ["--class", "alternating", "-n", "5", "--kv", "2", "--kc", "2"],
            "Exists",
            "true",
        ),
        (["--class", "legal_ranking", "-n", "3"], "Unsettled", "true"),
    ],
)
def test_exists(capsys, argv, theorem, engine):
    code, out, _ = run(capsys, "exists", *argv)
    lines = out.splitlines()
    assert code == ExitCode.OK
    assert lines[0].startswith(f"theorem: {theorem}")
    assert lines[1].startswith(f"engine: {engine}")


def test_exists_for_single_letters(capsys):
    code, out, _ = run(capsys, "exists", "--class", "all_words", "-n", "1", "-k", "3")
    assert code == ExitCode.OK
    assert "engine: n/a" in out


def test_exists_json(capsys):
    code, out, _ = run(
        capsys, "exists", "--class", "injective", "-n", "3", "-k", "3", "--json"
    )
    data = json.loads(out)
    assert code == ExitCode.OK
    assert data["theorem"]["verdict"] == "NotExists"
    assert data["verdict"] is False
    assert data["concordant"] is True


def test_graph(capsys):
    code, out, _ = run(capsys, "graph", "--class", "all_words", "-n", "2", "-k", "2")
    assert code == ExitCode.OK
    assert out.startswith('digraph "all_words_n2_k2" {')
    assert '  "A" -> "B" [label="AB"];' in out.splitlines()


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "--class", "illegal_ranking", "-n", "5")
    assert code == ExitCode.OK
    assert "0 mismatches" in out


def test_sweep(capsys):
    code, out, _ = run(
        capsys, "sweep", "--class", "alternating", "--n-max", "4", "--k-max", "3"
    )
    lines = out.splitlines()
    assert code == ExitCode.OK
    assert len(lines) == 9
    assert all(line.endswith(" ok") for line in lines)


def test_sweep_json(capsys):
    argv = ["--class", "nonsurjective", "--n-max", "4", "--k-max", "3", "--json"]
    code, out, _ = run(capsys, "sweep", *argv)
    data = json.loads(out)
    assert code == ExitCode.OK
    assert data["contradictions"] == 0
    assert len(data["cases"]) == 6


def test_classes(capsys):
    code, out, _ = run(capsys, "classes")
    names = [line.split()[0] for line in out.splitlines()]
    assert code == ExitCode.OK
    assert names == sorted(names)
    assert "nonpassword" in names


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["generate"],
        ["generate", "--class", "no_such_class", "-n", "3", "-k", "2"],
        ["generate", "--class", "all_words", "-n", "5", "-k", "4", "--cap", "100"],
        ["generate", "--class", "all_words", "-n", "1", "-k", "2"],
        ["count", "--class", "password", "-n", "3", "--categories", "a,b"],
        ["count", "--class", "alternating", "-n", "3", "--kv", "2"],
        ["count", "--class", "all_words", "-n", "3", "-k", "2", "--cap", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == ExitCode.USAGE
    assert out == ""
    assert err


def test_help_exits_cleanly(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == ExitCode.OK
    assert "generate" in out
