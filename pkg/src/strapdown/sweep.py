"""Experiment sweeps over algorithm × N × m_T × stop rule × seed × fc, with CSV output.

Config files are flat ``key = value`` text; a repeated key builds a list.
``#`` starts a comment. Recognised keys::

    algorithm   one id per line (required, repeatable)
    fc          coning frequency in Hz (repeatable)
    N           samples per update interval (repeatable)
    m_T         ``N+k``, a fixed degree, or ``default`` (repeatable)
    stop        ``dpc:1e-14``, ``hot:1e-14`` or ``maxiter:k`` (repeatable)
    seed        noise seed (repeatable)
    arw         angle random walk in deg/sqrt(h)
    alpha_deg, fs, duration, kind, n_nodes, timing (on/off), out
"""

from __future__ import annotations

import csv
import io
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from strapdown.algorithms import ALGORITHMS, AlgorithmConfig, check_algorithm, fixed_samples
from strapdown.coning import ConingParams, NoiseParams, simulate
from strapdown.errors import ConfigError
from strapdown.stopping import StopRule

CSV_HEADER = ("algorithm", "fc_hz", "fs_hz", "N", "n", "m_T", "stop", "iters_mean", "drift_rad", "seed", "wall_ms")


@dataclass(frozen=True)
class MtRule:
    """Truncation degree: ``N + offset``, a fixed value, or the family default."""

    offset: int | None = None
    fixed: int | None = None

    @classmethod
    def parse(cls, text: str) -> MtRule:
        t = text.replace(" ", "")
        if t.lower() == "default":
            return cls()
        if t.upper().startswith("N"):
            rest = t[1:]
            return cls(offset=int(rest) if rest else 0)
        return cls(fixed=int(t))

    def resolve(self, N: int) -> int | None:
        if self.fixed is not None:
            return self.fixed
        if self.offset is not None:
            return N + self.offset
        return None

    def label(self) -> str:
        if self.fixed is not None:
            return str(self.fixed)
        if self.offset is not None:
            return f"N+{self.offset}"
        return "default"


@dataclass(frozen=True)
class SweepConfig:
    algorithms: tuple[str, ...]
    fc: tuple[float, ...] = (10.0,)
    N: tuple[int, ...] = (8,)
    m_t: tuple[MtRule, ...] = (MtRule(),)
    stop: tuple[StopRule, ...] = (StopRule(),)
    seeds: tuple[int, ...] = (0,)
    arw: float = 0.0  # deg/sqrt(h)
    alpha_deg: float = 1.0
    fs: float = 1000.0
    duration: float = 1.0
    kind: str = "increment"
    n_nodes: int | None = None
    timing: bool = True
    out: str | None = None

    def __post_init__(self):
        if not self.algorithms:
            raise ConfigError("algorithm", "at least one algorithm is required")
        for name in self.algorithms:
            check_algorithm(name)
        for label, values in (("fc", self.fc), ("N", self.N), ("m_T", self.m_t), ("stop", self.stop), ("seed", self.seeds)):
            if not values:
                raise ConfigError(label, "list must not be empty")
        if any(not f > 0 for f in self.fc):
            raise ConfigError("fc", f"coning frequencies must be positive, got {list(self.fc)}")
        if any(n < 1 for n in self.N):
            raise ConfigError("N", f"sample counts must be >= 1, got {list(self.N)}")
        if not self.fs > 0:
            raise ConfigError("fs", f"sampling frequency must be positive, got {self.fs}")
        if not self.duration > 0:
            raise ConfigError("duration", f"duration must be positive, got {self.duration}")
        if self.arw < 0:
            raise ConfigError("arw", f"angle random walk must be non-negative, got {self.arw}")
        if self.kind not in ("increment", "rate"):
            raise ConfigError("kind", f"expected 'increment' or 'rate', got {self.kind!r}")


_LIST_KEYS = {"algorithm": "algorithms", "fc": "fc", "N": "N", "m_T": "m_t", "stop": "stop", "seed": "seeds"}
_SCALAR_KEYS = {"arw", "alpha_deg", "fs", "duration", "kind", "n_nodes", "timing", "out"}


def _convert(key: str, value: str):
    try:
        if key == "fc":
            return float(value)
        if key in ("N", "seed", "n_nodes"):
            return int(value)
        if key == "m_T":
            return MtRule.parse(value)
        if key == "stop":
            return StopRule.parse(value)
        if key in ("arw", "alpha_deg", "fs", "duration"):
            return float(value)
        if key == "timing":
            flag = value.lower()
            if flag not in ("on", "off", "true", "false", "1", "0", "yes", "no"):
                raise ValueError(f"not a boolean: {value!r}")
            return flag in ("on", "true", "1", "yes")
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from None
    return value


def parse_config(text: str) -> SweepConfig:
    lists: dict[str, list] = {}
    scalars: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError("line", f"line {lineno}: expected key = value, got {raw!r}")
        if key in _LIST_KEYS:
            lists.setdefault(_LIST_KEYS[key], []).append(_convert(key, value))
        elif key in _SCALAR_KEYS:
            scalars[key] = _convert(key, value)
        else:
            raise ConfigError(key, f"line {lineno}: unknown key")
    kwargs = {k: tuple(v) for k, v in lists.items()}
    kwargs.update(scalars)
    kwargs.setdefault("algorithms", ())
    return SweepConfig(**kwargs)


def load_config(path: str | Path) -> SweepConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


@dataclass(frozen=True)
class SweepRow:
    algorithm: str
    fc_hz: float
    fs_hz: float
    N: int
    n: int
    m_T: int
    stop: str
    iters_mean: float
    drift_rad: float
    seed: int
    wall_ms: float

    def same_as(self, other: SweepRow) -> bool:
        """Field-wise equality that treats NaN as equal to NaN."""
        for f in fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            if isinstance(a, float) and isinstance(b, float) and math.isnan(a) and math.isnan(b):
                continue
            if a != b:
                return False
        return True


@dataclass(frozen=True)
class Cell:
    algorithm: str
    N: int
    m_t: int | None
    stop: StopRule
    seed: int
    fc: float
    params: dict = field(default_factory=dict, compare=False)


def cells(cfg: SweepConfig) -> list[Cell]:
    """Cells in output order: algorithm > N > m_T > stop > seed > fc.

    The closed-form baselines ignore N, m_T and the stop rule, so they
    contribute one cell per (seed, fc).
    """
    common = dict(
        alpha_deg=cfg.alpha_deg,
        fs=cfg.fs,
        duration=cfg.duration,
        arw=cfg.arw,
        kind=cfg.kind,
        n_nodes=cfg.n_nodes,
        timing=cfg.timing,
    )
    out = []
    for name in cfg.algorithms:
        own = fixed_samples(name)
        n_list = (own,) if own is not None else cfg.N
        mt_list = (MtRule(fixed=0),) if own is not None else cfg.m_t
        stop_list = (StopRule(),) if own is not None else cfg.stop
        for N in n_list:
            for rule in mt_list:
                for stop in stop_list:
                    for seed in cfg.seeds:
                        for fc in cfg.fc:
                            out.append(Cell(name, N, rule.resolve(N), stop, seed, fc, common))
    return out


def run_cell(cell: Cell) -> SweepRow:
    """Simulate one cell; a solver failure is logged and reported as NaN drift."""
    p = cell.params
    algo = AlgorithmConfig(cell.algorithm, m_t=cell.m_t, stop=cell.stop, n_nodes=p["n_nodes"])
    is_classic = algo.engine == "classic"
    m_t = algo.resolved_m_t(cell.N)
    stop_label = "none" if is_classic else cell.stop.label()
    start = time.perf_counter()
    try:
        coning = ConingParams(math.radians(p["alpha_deg"]), cell.fc, p["fs"], cell.N, p["duration"])
        noise = NoiseParams.from_deg_per_sqrt_hour(p["arw"], cell.seed)
        res = simulate(coning, algo, noise, p["kind"])
        drift, iters = res.drift, res.iters_mean
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        print(
            f"cell {cell.algorithm} fc={cell.fc:g} N={cell.N} m_T={m_t} stop={stop_label} seed={cell.seed} failed: {exc}",
            file=sys.stderr,
        )
        drift = iters = float("nan")
    wall = (time.perf_counter() - start) * 1e3 if p["timing"] else 0.0
    return SweepRow(cell.algorithm, cell.fc, p["fs"], cell.N, cell.N - 1, m_t, stop_label, iters, drift, cell.seed, wall)


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> list[SweepRow]:
    """Run every cell; rows come back in sweep order whatever ``jobs`` is."""
    todo = cells(cfg)
    if jobs <= 1 or len(todo) <= 1:
        return [run_cell(c) for c in todo]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_cell, todo, chunksize=max(1, len(todo) // (4 * jobs))))


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def format_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([_fmt(getattr(r, name)) for name in CSV_HEADER])
    return buf.getvalue()


def emit_csv(rows, path: str | Path | None = None) -> str:
    """Write rows as CSV to ``path`` (stdout if ``None``) and return the text."""
    text = format_csv(rows)
    if path is None:
        sys.stdout.write(text)
        return text
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV to {path}: {exc.strerror}") from None
    return text


_INT_COLS = {"N", "n", "m_T", "seed"}
_STR_COLS = {"algorithm", "stop"}


def parse_csv(text: str) -> list[SweepRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    rows = []
    for rec in reader:
        values = {}
        for name, cell in zip(CSV_HEADER, rec):
            values[name] = cell if name in _STR_COLS else int(cell) if name in _INT_COLS else float(cell)
        rows.append(SweepRow(**values))
    return rows


# -- presets ------------------------------------------------------------------

_FIG9_ALGOS = (
    "QuatTaylor",
    "RotTaylor",
    "RotTaylor-T2",
    "RotTaylor-T2s",
    "QuatFIter-np",
    "RodFIter-np",
    "RotFIter-np-T2",
    "RotFIter-np-T3",
    "QuatFIter",
    "RotFIter-T3",
    "RotFIter-T2",
    "Classic2",
    "Classic3",
)
_FREQ_GRID = (1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 40.0, 50.0, 70.0, 100.0, 150.0, 200.0)


def _iter_rules(k: int) -> tuple[StopRule, ...]:
    return tuple(StopRule(kind="maxiter", max_iter=j) for j in range(1, k + 1))


PRESETS: dict[str, SweepConfig] = {
    # accuracy after each of seven iterations
    "fig3": SweepConfig(("QuatFIter",), N=(3, 8), stop=_iter_rules(7)),
    "fig5": SweepConfig(
        ("QuatFIter-np", "QuatFIter"), m_t=(MtRule(offset=5), MtRule(offset=2)), stop=_iter_rules(7)
    ),
    "fig6": SweepConfig(("QuatFIter-np", "QuatTaylor"), m_t=(MtRule(offset=9),), stop=_iter_rules(15)),
    "fig7": SweepConfig(
        ("RotTaylor-T2s", "RotTaylor", "Classic2", "Classic3"),
        N=(2, 3, 5, 8),
        m_t=(MtRule(offset=9),),
        stop=(StopRule(kind="hot"),),
    ),
    "fig9": SweepConfig(_FIG9_ALGOS, fc=_FREQ_GRID),
    # two update intervals at 100 Hz with generous truncation
    "fig10": SweepConfig(
        ("QuatFIter-np", "RodFIter-np", "RotTaylor", "QuatFIter"),
        fc=(100.0,),
        m_t=(MtRule(offset=29), MtRule(offset=49)),
        duration=0.016,
    ),
    "fig12": SweepConfig(_FIG9_ALGOS, fc=_FREQ_GRID, arw=0.001, duration=10.0),
}


def preset(name: str, seed: int | None = None) -> SweepConfig:
    try:
        cfg = PRESETS[name]
    except KeyError:
        raise ConfigError("preset", f"unknown preset {name!r}; expected one of {sorted(PRESETS)}") from None
    return cfg if seed is None else replace(cfg, seeds=(seed,))


__all__ = [
    "ALGORITHMS",
    "CSV_HEADER",
    "MtRule",
    "PRESETS",
    "SweepConfig",
    "SweepRow",
    "cells",
    "emit_csv",
    "format_csv",
    "load_config",
    "parse_config",
    "parse_csv",
    "preset",
    "run_cell",
    "run_sweep",
]
