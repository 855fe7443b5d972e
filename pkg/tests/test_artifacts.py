import os

import pytest

from modgalrep.artifacts import MAGIC, Pipeline, RunConfig, ap_crt
from modgalrep.cli import main
from modgalrep.numeric import ConfigExcludedError


def test_runconfig_guards():
    with pytest.raises(ConfigExcludedError):
        RunConfig(form="e4delta", ell=11)       # exceptional prime
    with pytest.raises(ConfigExcludedError):
        RunConfig(form="delta", ell=691)        # exceptional prime
    with pytest.raises(ConfigExcludedError):
        RunConfig(form="delta", ell=9)          # not prime
    with pytest.raises(ConfigExcludedError):
        RunConfig(form="delta", ell=7)          # below 11
    with pytest.raises(ConfigExcludedError):
        RunConfig(form="nosuch", ell=11)


def test_stage_keys_differ_by_config(tmp_path):
    a = RunConfig(form="delta", ell=11, cache=str(tmp_path))
    b = RunConfig(form="delta", ell=11, prec=999, cache=str(tmp_path))
    assert a.key("periods") != b.key("periods")
    # qexp ignores prec (it is exact mod p), so those keys match
    assert a.key("qexp") == b.key("qexp")


def test_qexp_artifact_deterministic_and_cached(tmp_path):
    cfg = RunConfig(form="delta", ell=11, B=256, cache=str(tmp_path))
    pipe = Pipeline(cfg)
    path = pipe.ensure("qexp")
    with open(path, "rb") as fh:
        first = fh.read()
    assert first.startswith(MAGIC.encode())
    # cache hit: mtime unchanged
    mtime = os.path.getmtime(path)
    pipe.ensure("qexp")
    assert os.path.getmtime(path) == mtime
    # byte-identical rebuild from scratch
    os.remove(path)
    Pipeline(RunConfig(form="delta", ell=11, B=256,
                       cache=str(tmp_path))).ensure("qexp")
    with open(path, "rb") as fh:
        again = fh.read()
    assert again == first


def test_periods_artifact_roundtrip(tmp_path):
    cfg = RunConfig(form="delta", ell=11, prec=300, cache=str(tmp_path))
    pipe = Pipeline(cfg)
    path = pipe.ensure("periods")
    with open(path, "rb") as fh:
        first = fh.read()
    os.remove(path)
    Pipeline(RunConfig(form="delta", ell=11, prec=300,
                       cache=str(tmp_path))).ensure("periods")
    with open(path, "rb") as fh:
        assert fh.read() == first


def test_cli_excluded_config(tmp_path, capsys):
    rc = main(["poly", "--form", "e4delta", "--ell", "11",
               "--cache", str(tmp_path), "--quiet"])
    assert rc == 4


def test_cli_nonprime_p(tmp_path):
    # rejected before any pipeline work happens
    rc = main(["ap", "--ell", "11", "--p", "1000004",
               "--cache", str(tmp_path), "--quiet"])
    assert rc == 2


def test_cli_stage_runs(tmp_path, capsys):
    rc = main(["qexp", "--ell", "11", "--B", "128",
               "--cache", str(tmp_path), "--quiet"])
    assert rc == 0
    out = capsys.readouterr().out.strip()
    assert os.path.exists(out)
