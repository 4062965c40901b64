import json

import pytest

from fplab.config import RunConfig


def test_defaults():
    cfg = RunConfig()
    assert cfg.model == "classical"
    assert cfg.n % 2 == 1


def test_from_file_and_unknown_keys(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"model": "fractional:1.5", "n": 513}))
    cfg = RunConfig.from_file(str(path))
    assert cfg.model == "fractional:1.5"
    assert cfg.n == 513
    path.write_text(json.dumps({"modle": "typo"}))
    with pytest.raises(ValueError, match="unknown config keys"):
        RunConfig.from_file(str(path))


def test_override_precedence():
    cfg = RunConfig(model="classical", n=513)
    out = cfg.override(model="fractional:1.0", n=None, seed=7)
    # None means "not set on the command line": keep the file value
    assert out.model == "fractional:1.0"
    assert out.n == 513
    assert out.seed == 7
    with pytest.raises(ValueError):
        cfg.override(bogus=1)


def test_persist_resolved(tmp_path):
    cfg = RunConfig(outdir=str(tmp_path / "run"))
    path = cfg.persist()
    data = json.loads(open(path).read())
    assert data["model"] == "classical"
    assert data["outdir"] == cfg.outdir
