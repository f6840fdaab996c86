import pytest

from lib.errors import WorkerFailureException
from lib.pool import make_batches, run_batches


def test_make_batches_covers_range_in_order():
    batches = make_batches(10, 3, min_batch_size=1)
    assert batches == [(0, 4), (4, 8), (8, 10)]
    assert make_batches(0, 4) == []
    assert make_batches(100, 4) == [(0, 64), (64, 100)]


@pytest.mark.parametrize("workers", [1, 2, 3, 8])
def test_results_keep_item_order(workers):
    result = run_batches(lambda start, end: list(range(start, end)), 50, workers, min_batch_size=1)
    assert result == list(range(50))


def test_failed_batch_raises_after_all_finish(capsys):
    seen = []

    def work(start, end):
        seen.append(start)
        if start == 0:
            raise RuntimeError("boom")
        return list(range(start, end))

    with pytest.raises(WorkerFailureException):
        run_batches(work, 12, parallel_workers=3, label="test batch", min_batch_size=1)
    assert sorted(seen) == [0, 4, 8]
    assert "Worker test batch 1 failed with error: boom" in capsys.readouterr().err


def test_inline_run_propagates_the_original_error():
    def work(start, end):
        raise KeyError("inline")

    with pytest.raises(KeyError):
        run_batches(work, 5, parallel_workers=1)
