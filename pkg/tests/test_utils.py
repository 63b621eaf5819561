import gzip

from geo4.utils import DummyProgress, Progress, available_cpu_count, open_text


def test_available_cpu_count():
    assert available_cpu_count() >= 1


def test_open_text_compressed(tmp_path):
    path = tmp_path / "catalog.json.gz"
    with open_text(path, "w") as f:
        print("χ = 1", file=f)
    with gzip.open(path, "rt", encoding="utf-8") as f:
        assert f.read() == "χ = 1\n"
    with open_text(path) as f:
        assert f.read() == "χ = 1\n"


def test_open_text_plain(tmp_path):
    path = tmp_path / "region.json"
    path.write_text("{}", encoding="utf-8")
    with open_text(str(path)) as f:
        assert f.read() == "{}"


def test_progress(capsys):
    p = Progress(every=0)
    p.start(400)
    p.update(100)
    p.stop(400)
    err = capsys.readouterr().err
    assert "100/400 points" in err
    assert err.endswith("\n")
    assert "[####################] 100%" in err


def test_progress_without_total(capsys):
    p = Progress(every=0, unit="classes")
    p.update(7)
    assert "7 classes" in capsys.readouterr().err
    assert p.bar(7) == ""


def test_progress_bar():
    p = Progress(width=4)
    p.start(8)
    assert p.bar(0) == "[    ]   0%"
    assert p.bar(8) == "[####] 100%"
    assert p.bar(9) == "[####] 100%"


def test_dummy_progress(capsys):
    p = DummyProgress()
    p.start(10)
    p.update(5)
    p.stop(10)
    assert capsys.readouterr().err == ""
