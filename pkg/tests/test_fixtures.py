import importlib.util
from pathlib import Path

from conftest import CORPUS

SCRIPT = Path(__file__).resolve().parents[1] / "scripts" / "make_fixtures.py"


def test_corpus_regenerates_identically(tmp_path):
    spec = importlib.util.spec_from_file_location("make_fixtures", SCRIPT)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.make_corpus(tmp_path)
    for sub in ("images", "gt"):
        bundled = sorted((CORPUS / sub).iterdir())
        assert [p.name for p in bundled] == sorted(p.name for p in (tmp_path / sub).iterdir())
        for p in bundled:
            assert p.read_bytes() == (tmp_path / sub / p.name).read_bytes(), p.name
