"""Lumped CTMC assembly, strong-lumpability checks, transient solution by
uniformization, and the throughput/reliability measures."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.stats import poisson

from .statespace import TransitionSystem


def _fmt(x: float) -> str:
    return format(x, ".12g")


class LumpabilityError(RuntimeError):
    """The partition is not strongly lumpable at the requested tolerance."""

    def __init__(self, detail: dict):
        super().__init__(f"strong lumpability violated: {detail}")
        self.detail = detail


class TransientBudgetError(RuntimeError):
    """Requested accuracy needs more uniformization terms than allowed."""


class Generator:
    """Sparse CTMC infinitesimal generator.

    Off-diagonal entries are nonnegative rates; every diagonal entry is the
    negated row sum, so rows sum to zero exactly.
    """

    def __init__(self, n: int, offdiag: dict[tuple[int, int], float]):
        self.n = n
        self._entries = dict(offdiag)
        rows = np.fromiter((i for i, _ in self._entries), dtype=np.int64, count=len(self._entries))
        cols = np.fromiter((j for _, j in self._entries), dtype=np.int64, count=len(self._entries))
        data = np.fromiter(self._entries.values(), dtype=np.float64, count=len(self._entries))
        if np.any(data < 0):
            raise ValueError("negative off-diagonal rate")
        self.offdiag = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
        self.diagonal = -np.asarray(self.offdiag.sum(axis=1)).ravel()
        self.matrix = (self.offdiag + sp.diags(self.diagonal)).tocsr()
        self._uniformized = None

    @property
    def max_exit_rate(self) -> float:
        return float(-self.diagonal.min()) if self.n else 0.0

    def entries(self):
        """Off-diagonal entries as sorted (i, j, rate) triples."""
        return tuple((i, j, self._entries[(i, j)]) for i, j in sorted(self._entries))

    def write_coo(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"{self.n}\n")
            for i, j, rate in self.entries():
                fh.write(f"{i} {j} {rate!r}\n")


def build_generator(ts: TransitionSystem) -> Generator:
    """Q[i, j] = total rate of the i -> j edges; self-loops cancel and are
    dropped."""
    acc: dict[tuple[int, int], float] = {}
    for src, dst, _label, rate in ts.edges:
        if src == dst:
            continue
        acc[(src, dst)] = acc.get((src, dst), 0.0) + rate
    return Generator(len(ts.states), acc)


def _class_outflows(gen: Generator, partition: np.ndarray, state: int) -> dict[int, float]:
    indptr, indices, data = gen.offdiag.indptr, gen.offdiag.indices, gen.offdiag.data
    sums: dict[int, float] = {}
    for k in range(indptr[state], indptr[state + 1]):
        cls = int(partition[indices[k]])
        sums[cls] = sums.get(cls, 0.0) + data[k]
    return sums


def check_strong_lumpability(
    gen: Generator, partition: Sequence[int], tol: float = 1e-9
) -> tuple[bool, dict | None]:
    """Check that cumulative outflow rates into every class are constant
    within each class.

    The diagonal never participates (flows inside a state's own class count
    only the off-diagonal part).  Members are compared against the first
    state of their class at tolerance ``tol``.  Returns (ok, counterexample).
    """
    part = np.asarray(partition, dtype=np.int64)
    if len(part) != gen.n:
        raise ValueError("partition must cover all states")
    reference: dict[int, dict[int, float]] = {}
    rep: dict[int, int] = {}
    for i in range(gen.n):
        sums = _class_outflows(gen, part, i)
        cls = int(part[i])
        if cls not in reference:
            reference[cls] = sums
            rep[cls] = i
            continue
        ref = reference[cls]
        for target in ref.keys() | sums.keys():
            a = ref.get(target, 0.0)
            b = sums.get(target, 0.0)
            if abs(a - b) > tol:
                return False, {
                    "class": cls,
                    "states": (rep[cls], i),
                    "target_class": target,
                    "rates": (a, b),
                }
    return True, None


def lump_generator(gen: Generator, partition: Sequence[int], tol: float = 1e-9) -> Generator:
    """The lumped generator of a strongly lumpable partition.

    Entry [C, C'] is the representative row sum into C'; flows inside a class
    contribute to the diagonal only.
    """
    ok, detail = check_strong_lumpability(gen, partition, tol)
    if not ok:
        raise LumpabilityError(detail)
    part = np.asarray(partition, dtype=np.int64)
    classes = sorted(set(int(c) for c in part))
    if classes != list(range(len(classes))):
        raise ValueError("class ids must be 0..m-1")
    rep: dict[int, int] = {}
    for i, cls in enumerate(part):
        rep.setdefault(int(cls), i)
    acc: dict[tuple[int, int], float] = {}
    for cls in classes:
        for target, rate in sorted(_class_outflows(gen, part, rep[cls]).items()):
            if target != cls and rate:
                acc[(cls, target)] = rate
    return Generator(len(classes), acc)


def transient(
    gen: Generator,
    pi0: Sequence[float],
    t: float,
    eps: float = 1e-9,
    max_terms: int = 2_000_000,
    details: dict | None = None,
) -> np.ndarray:
    """Transient distribution pi0 * exp(Q t) by uniformization.

    The Poisson series is truncated once the neglected mass is below ``eps``,
    which bounds the total-variation error by ``eps``; the result is
    renormalized.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    if not eps > 0:
        raise ValueError("eps must be positive")
    pi = np.array(pi0, dtype=np.float64)
    if pi.shape != (gen.n,):
        raise ValueError(f"pi0 must have length {gen.n}")
    lam = 1.02 * gen.max_exit_rate
    if t == 0 or lam == 0:
        if details is not None:
            details.update(raw_mass=float(pi.sum()), terms=0)
        return pi
    mu = lam * t
    kmax = int(poisson.ppf(1.0 - eps, mu))
    while poisson.sf(kmax, mu) >= eps:
        kmax += 1
    if kmax + 1 > max_terms:
        raise TransientBudgetError(
            f"{kmax + 1} uniformization terms needed, budget is {max_terms}"
        )
    if gen._uniformized is None:
        gen._uniformized = (sp.eye(gen.n, format="csr") + gen.matrix / lam).T.tocsr()
    pt = gen._uniformized
    weights = poisson.pmf(np.arange(kmax + 1), mu)
    vec = pi.copy()
    acc = weights[0] * vec
    for k in range(1, kmax + 1):
        vec = pt @ vec
        acc += weights[k] * vec
    raw_mass = float(acc.sum())
    if details is not None:
        details.update(raw_mass=raw_mass, terms=kmax + 1)
    np.clip(acc, 0.0, None, out=acc)
    return acc / acc.sum()


def throughput(ts: TransitionSystem, pi: Sequence[float], tag: str) -> float:
    """Expected firing rate of edges labeled ``tag`` under distribution pi."""
    rates = np.zeros(len(ts.states))
    found = False
    for src, _dst, label, rate in ts.edges:
        if label == tag:
            rates[src] += rate
            found = True
    if not found:
        warnings.warn(f"no edge labeled {tag!r}; throughput is 0", stacklevel=2)
        return 0.0
    return float(np.dot(np.asarray(pi), rates))


def reliability(ts: TransitionSystem, pi: Sequence[float]) -> float:
    """Probability of not yet having reached a final (absorbing) state."""
    pi = np.asarray(pi)
    return float(1.0 - sum(pi[i] for i in ts.final_states()))


@dataclass
class MeasureSeries:
    """Per-time throughput X(t), reliability R(t), and conditional X/R."""

    times: list[float]
    throughput: list[float]
    reliability: list[float]
    conditional: list[float | None]

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,throughput,reliability,conditional\n")
            for t, x, r, c in zip(self.times, self.throughput, self.reliability, self.conditional):
                cond = "" if c is None else _fmt(c)
                fh.write(f"{_fmt(t)},{_fmt(x)},{_fmt(r)},{cond}\n")


def default_grid(points: int = 60, start: float = 1.0, stop: float = 1e4) -> list[float]:
    return list(np.logspace(np.log10(start), np.log10(stop), points))


def measure_series(
    ts: TransitionSystem,
    gen: Generator,
    grid: Sequence[float],
    eps: float = 1e-9,
    tag: str = "as",
) -> MeasureSeries:
    """Measures over a strictly increasing time grid, solved incrementally."""
    grid = list(grid)
    if any(b <= a for a, b in zip(grid, grid[1:])) or (grid and grid[0] < 0):
        raise ValueError("grid must be strictly increasing and start at t >= 0")
    rates = np.zeros(len(ts.states))
    for src, _dst, label, rate in ts.edges:
        if label == tag:
            rates[src] += rate
    finals = list(ts.final_states())
    pi = np.zeros(len(ts.states))
    pi[0] = 1.0
    prev = 0.0
    xs, rs, cs = [], [], []
    for t in grid:
        pi = transient(gen, pi, t - prev, eps)
        prev = t
        x = float(np.dot(pi, rates))
        r = float(1.0 - pi[finals].sum()) if finals else 1.0
        xs.append(x)
        rs.append(r)
        cs.append(x / r if r >= 1e-12 else None)
    return MeasureSeries(times=grid, throughput=xs, reliability=rs, conditional=cs)
