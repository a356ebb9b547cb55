import pytest

from dgmlab.parallel import pmap, worker_count


def test_worker_count_honors_env(monkeypatch):
    monkeypatch.setenv("DGM_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("DGM_THREADS", "0")
    assert worker_count() == 1
    monkeypatch.setenv("DGM_THREADS", "10000")
    assert worker_count() == 32


def test_worker_count_rejects_garbage(monkeypatch):
    monkeypatch.setenv("DGM_THREADS", "many")
    with pytest.raises(ValueError):
        worker_count()


def test_pmap_preserves_order(monkeypatch):
    items = list(range(40))
    for n in ("1", "4"):
        monkeypatch.setenv("DGM_THREADS", n)
        assert pmap(lambda v: v * v, items) == [v * v for v in items]
