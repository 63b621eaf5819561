"""
Run realization over all allowed points of a region, on one core or on a
pool of worker processes.
"""
import logging
import multiprocessing
from abc import ABC, abstractmethod
from typing import Iterable, List, Optional

from .construct import serialize
from .geography import (
    GeographyError, NotCovered, PPXVerdict, Realizer, RegionSpec, ppx_admissible,
)
from .invariants import LatticePoint
from .report import CoverageReport, PointOutcome
from .utils import DummyProgress, Progress

logger = logging.getLogger(__name__)


def realize_point(realizer: Realizer, point: LatticePoint, with_ppx: bool = True) -> PointOutcome:
    ppx = None
    if with_ppx:
        verdict = ppx_admissible(point)
        if verdict is not PPXVerdict.NOT_APPLICABLE:
            ppx = verdict.value
    try:
        certificate = realizer.realize(point)
    except NotCovered as e:
        return PointOutcome(point, reason=str(e), trace=tuple(e.trace), ppx=ppx)
    except GeographyError as e:
        return PointOutcome(point, reason=str(e), ppx=ppx)
    return PointOutcome(
        point, expression=serialize(certificate.expr), route=certificate.route,
        checks=certificate.checks, ppx=ppx)


class CoverageRunner(ABC):
    """
    Realize a sequence of lattice points
    """
    def __init__(self, realizer: Realizer, progress: Optional[Progress] = None):
        self._realizer = realizer
        self._progress = progress if progress is not None else DummyProgress()

    @abstractmethod
    def run(self, points: Iterable[LatticePoint]) -> List[PointOutcome]:
        pass

    @abstractmethod
    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()


class SerialCoverageRunner(CoverageRunner):
    """
    Realize points on a single core
    """

    def run(self, points: Iterable[LatticePoint]) -> List[PointOutcome]:
        todo = list(points)
        self._progress.start(len(todo))
        outcomes = []
        for point in todo:
            outcomes.append(realize_point(self._realizer, point))
            self._progress.update(len(outcomes))
        self._progress.stop(len(outcomes))
        return outcomes

    def close(self) -> None:
        pass


# Realizer of a worker process, set by the pool initializer
_worker_realizer: Optional[Realizer] = None


def _init_worker(realizer: Realizer) -> None:
    global _worker_realizer
    _worker_realizer = realizer


def _realize_in_worker(point: LatticePoint) -> PointOutcome:
    assert _worker_realizer is not None
    return realize_point(_worker_realizer, point)


class ParallelCoverageRunner(CoverageRunner):
    """
    Realize points in a pool of worker processes. Each worker receives the
    realizer once, when it starts; points are then sent in chunks. Outcomes
    carry their coordinates, so the order in which they arrive does not matter.
    """

    def __init__(
        self,
        realizer: Realizer,
        n_workers: int,
        progress: Optional[Progress] = None,
        chunksize: int = 64,
    ):
        super().__init__(realizer, progress)
        self._n_workers = n_workers
        self._chunksize = chunksize
        self._pool = multiprocessing.Pool(n_workers, initializer=_init_worker, initargs=(realizer,))

    def run(self, points: Iterable[LatticePoint]) -> List[PointOutcome]:
        todo = list(points)
        self._progress.start(len(todo))
        outcomes = []
        for outcome in self._pool.imap_unordered(_realize_in_worker, todo, self._chunksize):
            outcomes.append(outcome)
            self._progress.update(len(outcomes))
        self._progress.stop(len(outcomes))
        return outcomes

    def close(self) -> None:
        self._pool.close()
        self._pool.join()


def make_runner(realizer: Realizer, cores: int = 1, progress: Optional[Progress] = None) -> CoverageRunner:
    if cores > 1:
        logger.debug("Starting %d worker processes", cores)
        return ParallelCoverageRunner(realizer, cores, progress)
    return SerialCoverageRunner(realizer, progress)


def verify_coverage(
    region: RegionSpec,
    realizer: Optional[Realizer] = None,
    runner: Optional[CoverageRunner] = None,
) -> CoverageReport:
    """
    Realize every allowed point of the region up to its chi_max. The region is
    fully covered iff no point is left unrealized.
    """
    realizer = realizer if realizer is not None else Realizer()
    points = list(region.points())
    logger.debug("Region %s has %d allowed points", region.name, len(points))
    report = CoverageReport(region)
    if runner is None:
        with SerialCoverageRunner(realizer) as serial:
            outcomes = serial.run(points)
    else:
        outcomes = runner.run(points)
    for outcome in outcomes:
        report.add(outcome)
    logger.info(
        "Realized %d of %d allowed points of region %s", len(report.realized), report.n, region.name)
    return report
