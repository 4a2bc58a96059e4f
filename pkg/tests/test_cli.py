import pytest

from equikit.cli import main

DEEPSETS_CFG = """\
[model]
group = symmetric:4
activation = relu
seed = 7
tol = 1e-9

[reps]
0 = tensor:3(defining)
1 = tensor:3(defining)
2 = trivial:3
"""

GOLDEN_PERMUTATION_THRESHOLD = """\
pointwise map sign_threshold:3, permutation X = rows [0 1 0; 0 0 1; 1 0 0]
v           = (2.1, 3.4, 0.2)
X v         = (3.4, 0.2, 2.1)
s(X v)      = (+1, -1, -1)
X^-1 s(X v) = (-1, +1, -1)
s(v)        = (-1, +1, -1)
X^-1 s(X v) == s(v): the pointwise map is equivariant
"""

GOLDEN_BIAS_COUNTEREXAMPLE = """\
pointwise map sign_threshold:3 with bias b = (-1, 0, 0)
v             = (2.1, 3.4, 0.2)
X v           = (3.4, 0.2, 2.1)
s_b(X v)      = (-1, -1, -1)
X^-1 s_b(X v) = (-1, -1, -1)
s_b(v)        = (-1, +1, -1)
X^-1 s_b(X v) != s_b(v): the biased map is not equivariant
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_golden_values(capsys):
    code, out, _ = run(capsys, "count", "--structure", "toeplitz", "--k", "3", "--n", "4")
    assert (code, out) == (0, "29\n")
    code, out, _ = run(capsys, "count", "--structure", "bttb", "--k", "2", "--m1", "3", "--m2", "3")
    assert (code, out) == (0, "59\n")
    code, out, _ = run(capsys, "count", "--structure", "dense", "--k", "1", "--n", "5")
    assert (code, out) == (0, "25\n")


def test_count_missing_argument_is_config_error(capsys):
    code, _, err = run(capsys, "count", "--structure", "toeplitz", "--k", "3")
    assert code == 2
    assert "error" in err


def test_demo_permutation_threshold_golden(capsys):
    code, out, _ = run(capsys, "demo", "--example", "permutation-threshold")
    assert code == 0
    assert out == GOLDEN_PERMUTATION_THRESHOLD


def test_demo_bias_counterexample_golden(capsys):
    code, out, _ = run(capsys, "demo", "--example", "bias-counterexample")
    assert code == 0
    assert out == GOLDEN_BIAS_COUNTEREXAMPLE


def test_demo_decolor_flip(capsys):
    code, out, _ = run(capsys, "demo", "--example", "decolor-flip")
    assert code == 0
    assert "bit-exact" in out


def test_demo_antisymmetry(capsys):
    code, out, _ = run(capsys, "demo", "--example", "antisymmetry")
    assert code == 0
    assert "antisymmetric within 1e-10" in out


def test_demo_decolor_flip_image_files(tmp_path, capsys):
    src = tmp_path / "img.txt"
    src.write_text("2 3\n0 0 0\n9 0 0\n0 0 0\n1 2 3\n")
    dst = tmp_path / "out.txt"
    code, out, _ = run(capsys, "demo", "--example", "decolor-flip",
                       "--image", str(src), "--out", str(dst))
    assert code == 0
    assert "bit-exact" in out
    # both nonzero source pixels sit in column 1, so the decolored flip
    # is white down column 1 and black down column 0
    assert dst.read_text() == "2 3\n0 0 0\n255 255 255\n0 0 0\n255 255 255\n"
    code, _, err = run(capsys, "demo", "--example", "antisymmetry",
                       "--image", str(src))
    assert code == 2


def test_basis_reports_dimensions(tmp_path, capsys):
    cfg = tmp_path / "deepsets.cfg"
    cfg.write_text(DEEPSETS_CFG)
    code, out, _ = run(capsys, "basis", "--config", str(cfg))
    assert code == 0
    assert "group symmetric:4 (order 24)" in out
    assert "intertwiner dim 18" in out
    assert "intertwiner dim 9" in out


def test_basis_single_layer_and_print(tmp_path, capsys):
    cfg = tmp_path / "deepsets.cfg"
    cfg.write_text(DEEPSETS_CFG)
    code, out, _ = run(capsys, "basis", "--config", str(cfg), "--layer", "2", "--print")
    assert code == 0
    assert "intertwiner dim 18" not in out
    assert out.count("basis element") == 9


def test_basis_output_is_deterministic(tmp_path, capsys):
    cfg = tmp_path / "deepsets.cfg"
    cfg.write_text(DEEPSETS_CFG)
    _, out1, _ = run(capsys, "basis", "--config", str(cfg))
    _, out2, _ = run(capsys, "basis", "--config", str(cfg))
    assert out1 == out2


def test_basis_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "broken.cfg"
    cfg.write_text("[model]\ngroup = symmetric:4\n")
    code, _, err = run(capsys, "basis", "--config", str(cfg))
    assert code == 2
    assert "reps" in err

    cfg.write_text("[model]\ngroup = dodeca:4\n\n[reps]\n0 = defining\n1 = defining\n")
    code, _, err = run(capsys, "basis", "--config", str(cfg))
    assert code == 2

    cfg.write_text(
        "[model]\ngroup = cyclic:3\nactivaton = relu\n\n[reps]\n0 = defining\n1 = defining\n"
    )
    code, _, err = run(capsys, "basis", "--config", str(cfg))
    assert code == 2
    assert "model.activaton" in err

    code, _, err = run(capsys, "basis", "--config", str(tmp_path / "missing.cfg"))
    assert code == 2


def test_train_check_round_trip(tmp_path, capsys):
    model = tmp_path / "model.txt"
    code, out, _ = run(
        capsys, "train", "--task", "center-of-mass", "--m", "3",
        "--steps", "200", "--lr", "0.5", "--seed", "1",
        "--train-samples", "200", "--test-samples", "50",
        "--out", str(model),
    )
    assert code == 0
    assert "parameters 28 vs dense" in out
    assert model.exists()

    code, out, _ = run(capsys, "check", "--model", str(model))
    assert code == 0
    assert "PASS" in out


def test_check_tampered_model_exits_1(tmp_path, capsys):
    model = tmp_path / "model.txt"
    run(
        capsys, "train", "--task", "center-of-mass", "--m", "3",
        "--steps", "50", "--lr", "0.5", "--seed", "1",
        "--train-samples", "80", "--test-samples", "20",
        "--out", str(model),
    )
    lines = model.read_text().splitlines()
    row = next(i + 1 for i, ln in enumerate(lines) if ln.startswith("weight-matrix:"))
    tokens = lines[row].split()
    tokens[0] = "2.25"
    lines[row] = " ".join(tokens)
    model.write_text("\n".join(lines) + "\n")

    code, out, _ = run(capsys, "check", "--model", str(model))
    assert code == 1
    assert "FAIL" in out
    assert "witness" in out


def test_check_unreadable_model_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("garbage\n")
    code, _, err = run(capsys, "check", "--model", str(bad))
    assert code == 2
    assert "error" in err


def test_train_unknown_task_exits_2(capsys):
    code, _, err = run(capsys, "train", "--task", "orbit-count")
    assert code == 2
    assert "task" in err


def test_exact_flag_prints_17_digits(capsys):
    code, out, _ = run(
        capsys, "--exact", "train", "--task", "center-of-mass", "--m", "3",
        "--steps", "5", "--lr", "0.1", "--seed", "0",
        "--train-samples", "40", "--test-samples", "10",
    )
    assert code == 0
    mse_line = next(ln for ln in out.splitlines() if ln.startswith("test mse"))
    digits = mse_line.split()[-1].replace(".", "").replace("-", "").lstrip("0")
    assert len(digits.split("e")[0]) >= 15


def test_argparse_rejects_unknown_subcommand():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
