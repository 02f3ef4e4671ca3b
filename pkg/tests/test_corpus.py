import shutil

from fbcp.cli import run
from fbcp.corpus import default_root, discover, load_case, missing_coverage, read_manifest, render_case, run_corpus

ROOT = default_root()


def test_corpus_passes():
    s = run_corpus(ROOT)
    assert s.passed, s.render()
    assert len(s.results) == len(discover(ROOT))


def test_manifest_covers_every_tag():
    cases = discover(ROOT)
    assert missing_coverage(ROOT, cases) == []
    manifest = read_manifest(ROOT)
    assert len(manifest) >= 18
    assert all(manifest.values())


def test_seven_class_case_has_21_distinct():
    case = load_case(ROOT / "seven-class" / "all-pairs.bog")
    txt, _ = render_case(case)
    assert len(case.invocations) == 21
    assert txt.count("Distinct") >= 21


def test_bless_then_detect_drift(tmp_path):
    root = tmp_path / "corpus"
    shutil.copytree(ROOT / "free-dimension", root / "free-dimension")
    (root / "MANIFEST").write_text("free-dimension-formula: free-dimension/descriptors\n")
    for f in (root / "free-dimension").glob("*.expected.*"):
        f.unlink()
    assert not run_corpus(root).passed
    assert run_corpus(root, bless=True).passed
    assert run_corpus(root).passed
    target = root / "free-dimension" / "descriptors.expected.txt"
    target.write_text(target.read_text().replace("8/9", "2/3", 1))
    s = run_corpus(root)
    assert not s.passed
    diff = s.first_failure().diff
    assert diff.startswith("---") and "-" in diff and "+" in diff
    assert "first divergence" in s.render()


def test_coverage_gap_fails(tmp_path):
    root = tmp_path / "corpus"
    shutil.copytree(ROOT / "free-dimension", root / "free-dimension")
    (root / "MANIFEST").write_text("free-dimension-formula: free-dimension/descriptors\nmissing-tag:\n")
    s = run_corpus(root)
    assert s.coverage_missing == ["missing-tag"] and not s.passed


def test_cli_exit_status(tmp_path, capsys):
    assert run(["corpus", "--root", str(ROOT)]) == 0
    root = tmp_path / "c"
    root.mkdir()
    (root / "MANIFEST").write_text("x:\n")
    assert run(["corpus", "--root", str(root)]) == 1


def test_deterministic_across_jobs():
    a = [(c.name, render_case(c)) for c in discover(ROOT)]
    b = [(c.name, render_case(c)) for c in discover(ROOT)]
    assert a == b
    s1, s4 = run_corpus(ROOT, jobs=1), run_corpus(ROOT, jobs=4)
    assert s1.render() == s4.render()
