import io
import os
import sys
import time
import logging
from contextlib import contextmanager
from typing import Iterator, Optional, TextIO

from xopen import xopen


logger = logging.getLogger(__name__)


def available_cpu_count() -> int:
    """
    Return the number of CPUs this process may run on. This can be smaller
    than the number of CPUs of the machine when an affinity mask or cpuset is
    in effect, as on many cluster nodes.
    """
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # not available on macOS and Windows
        return os.cpu_count() or 1


@contextmanager
def open_text(path, mode: str = "r") -> Iterator[TextIO]:
    """
    Open a UTF-8 text file for reading or writing. Compressed files (.gz, .bz2,
    .xz) are handled transparently by xopen.
    """
    binary_mode = mode.replace("t", "").replace("b", "") + "b"
    raw = xopen(path, binary_mode)
    logger.debug("Opening '%s', mode '%s' with xopen resulted in %s", path, mode, raw)
    with io.TextIOWrapper(raw, encoding="utf-8") as f:
        yield f


class Progress:
    """
    Print a progress bar for a coverage run to sys.stderr.

    The number of points is usually known in advance (``start``); without it,
    only the count and the rate are shown.
    """

    def __init__(self, every: float = 1, unit: str = "points", width: int = 20):
        """
        every: minimum time to wait in seconds between progress updates
        """
        self._every = every
        self._unit = unit
        self._width = width
        self._total: Optional[int] = None
        self._done = 0
        self._start_time = time.time()
        self._last_print = self._start_time - every

    def __repr__(self):
        return f"Progress(done={self._done}, total={self._total})"

    def start(self, total: int) -> None:
        self._total = total
        self._start_time = time.time()
        self._last_print = self._start_time - self._every

    def bar(self, done: int) -> str:
        """
        >>> p = Progress(width=10)
        >>> p.start(200)
        >>> p.bar(50)
        '[##        ]  25%'
        """
        if not self._total:
            return ""
        fraction = min(1.0, done / self._total)
        filled = int(fraction * self._width)
        return "[" + "#" * filled + " " * (self._width - filled) + f"] {fraction * 100:3.0f}%"

    def _line(self, done: int, elapsed: float) -> str:
        minutes, seconds = divmod(int(elapsed), 60)
        hours, minutes = divmod(minutes, 60)
        rate = done / elapsed if elapsed > 0 else 0.0
        of_total = f"/{self._total:,d}" if self._total else ""
        parts = [self.bar(done), f"{hours:02d}:{minutes:02d}:{seconds:02d}",
            f"{done:,d}{of_total} {self._unit}", f"{rate:,.1f} {self._unit}/s"]
        return " ".join(part for part in parts if part)

    def update(self, done: int) -> None:
        self._done = done
        now = time.time()
        if now - self._last_print < self._every:
            return
        self._last_print = now
        print("\r" + self._line(done, now - self._start_time), end="", file=sys.stderr)

    def stop(self, done: int) -> None:
        """
        Print final progress reflecting the final count
        """
        self._done = done
        print("\r" + self._line(done, time.time() - self._start_time), file=sys.stderr)


class DummyProgress(Progress):
    """
    Does not print anything
    """
    def update(self, done: int) -> None:
        pass

    def stop(self, done: int) -> None:
        pass
