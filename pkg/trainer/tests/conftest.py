import pytest

from harness import patchscore_cli, separable_corpus


@pytest.fixture(scope="session")
def separable_manifest(tmp_path_factory):
    """Full upstream pipeline on the separable corpus; yields paths dict."""
    base = tmp_path_factory.mktemp("separable")
    root = separable_corpus(base / "data", n_images=60)
    out = base / "store"
    for args in (
        ("extract", "--index", root, "--out", out, "--sides", "32"),
        ("score", "--store", out, "--criterion", "entropy"),
        ("select", "--store", out, "--criterion", "entropy", "--band", "high",
         "--quantile", "0.45", "--seed", "5"),
    ):
        result = patchscore_cli(*args)
        assert result.returncode == 0, result.stderr
    manifest = out / "manifest_entropy_high_q45_32.csv"
    assert manifest.is_file()
    return {"root": root, "store": out, "manifest": manifest}
