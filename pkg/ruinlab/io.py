"""Run manifests and their on-disk layout.

A run directory ``<out>/<run_id>/`` holds::

    manifest.json    spec echo, engine version, reports, overrides
    estimates.csv    y,T,p_hat,ci_low,ci_high,n_paths,n_ruined,seed,n_steps,jump_adapted,index_start,confidence
    bounds.csv       y,alpha,bound,mc_estimate,mc_ci_hi
    paths/<k>.csv    t,r_hat,stoch_exp,I,J,Z  (optional path dumps)

The run id is a content hash of the canonical spec JSON and the engine
version, so identical specs map to the same directory.
"""

import csv
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version as _pkg_version
from pathlib import Path
from typing import Any, Mapping, Sequence

from ._errors import CorruptFile, IoFailure, SchemaMismatch, SpecError
from .estimate import RuinEstimate
from .model import ExperimentSpec
from .simulate import SimulatedPath

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MANIFEST_FILE = "manifest.json"
ESTIMATES_FILE = "estimates.csv"
BOUNDS_FILE = "bounds.csv"
PATHS_DIR = "paths"

ESTIMATE_COLUMNS = tuple(f.name for f in fields(RuinEstimate))
BOUND_COLUMNS = ("y", "alpha", "bound", "mc_estimate", "mc_ci_hi")
PATH_COLUMNS = ("t", "r_hat", "stoch_exp", "I", "J", "Z")


def engine_version() -> str:
    try:
        return _pkg_version("ruinlab")
    except PackageNotFoundError:
        return "0+unknown"


def run_id_for(spec: ExperimentSpec, engine: str) -> str:
    """First 16 hex digits of the SHA-256 of the canonical spec and the engine version."""
    payload = json.dumps({"spec": spec.to_dict(), "engine": engine}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class BoundRow:
    """One row of a bound sweep, paired with the Monte Carlo estimate when available."""
    y: float
    alpha: float
    bound: float
    mc_estimate: float | None = None
    mc_ci_hi: float | None = None


@dataclass
class RunManifest:
    """Everything needed to audit and reproduce a run.

    ``reports`` holds the serialized analytic reports by name (``"beta"``,
    ``"certain"``, ``"bound"``, ``"slope"``, ...). ``created`` does not enter
    the run id.
    """
    spec: ExperimentSpec
    command: str = ""
    engine: str = field(default_factory=engine_version)
    created: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    overrides: list[str] = field(default_factory=list)
    reports: dict[str, Any] = field(default_factory=dict)
    estimates: list[RuinEstimate] = field(default_factory=list)
    bound_rows: list[BoundRow] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    @property
    def run_id(self) -> str:
        return run_id_for(self.spec, self.engine)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "run_id": self.run_id,
            "engine": self.engine,
            "command": self.command,
            "created": self.created,
            "overrides": list(self.overrides),
            "spec": self.spec.to_dict(),
            "reports": self.reports,
        }


## Writing


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _write_csv(path: Path, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _path_rows(path: SimulatedPath) -> list[tuple]:
    z = path.disc_integral
    return [
        (path.times[k], path.r_hat[k], path.stoch_exp[k], path.i_func[k], path.j[k],
         None if z is None else z[k])
        for k in range(path.times.size)
    ]


def write_run(
    manifest: RunManifest,
    out_dir: str | Path,
    paths: Mapping[int, SimulatedPath] | None = None,
) -> list[Path]:
    """Write ``manifest`` under ``out_dir/<run_id>/`` and return the files written.

    ``estimates.csv`` and ``bounds.csv`` are only written when there are
    rows; an empty run leaves ``manifest.json`` alone.

    Raises
    ------
    IoFailure
        If a file cannot be written.
    """
    run_dir = Path(out_dir) / manifest.run_id
    written = []
    target = run_dir
    try:
        run_dir.mkdir(parents=True, exist_ok=True)
        for stale in (ESTIMATES_FILE, BOUNDS_FILE):
            (run_dir / stale).unlink(missing_ok=True)

        target = run_dir / MANIFEST_FILE
        target.write_text(json.dumps(encode_nonfinite(manifest.to_dict()), indent=2, sort_keys=True, allow_nan=False) + "\n", encoding="utf-8")
        written.append(target)

        if manifest.estimates:
            target = run_dir / ESTIMATES_FILE
            rows = [[getattr(e, c) for c in ESTIMATE_COLUMNS] for e in manifest.estimates]
            _write_csv(target, ESTIMATE_COLUMNS, rows)
            written.append(target)

        if manifest.bound_rows:
            target = run_dir / BOUNDS_FILE
            rows = [[getattr(r, c) for c in BOUND_COLUMNS] for r in manifest.bound_rows]
            _write_csv(target, BOUND_COLUMNS, rows)
            written.append(target)

        if paths:
            (run_dir / PATHS_DIR).mkdir(exist_ok=True)
            for k, path in sorted(paths.items()):
                target = run_dir / PATHS_DIR / f"{k}.csv"
                _write_csv(target, PATH_COLUMNS, _path_rows(path))
                written.append(target)
    except OSError as err:
        raise IoFailure(target, err.strerror or str(err)) from err

    logger.info("run %s written to %s (%d files)", manifest.run_id, run_dir, len(written))
    return written


## Reading


def _parse(value: str, kind: type) -> Any:
    if value == "":
        return None
    if kind is bool:
        if value not in ("true", "false"):
            raise ValueError(f"not a boolean: {value!r}")
        return value == "true"
    return kind(value)


_ESTIMATE_TYPES = {
    "y": float, "T": float, "p_hat": float, "ci_low": float, "ci_high": float,
    "n_paths": int, "n_ruined": int, "seed": int, "n_steps": int,
    "jump_adapted": bool, "index_start": int, "confidence": float,
}


def _read_csv(path: Path, columns: Sequence[str], types: Mapping[str, type]) -> list[dict[str, Any]]:
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None or tuple(header) != tuple(columns):
                raise CorruptFile(f"{path}: expected columns {','.join(columns)}, got {header}")
            rows = []
            for lineno, raw in enumerate(reader, start=2):
                if len(raw) != len(columns):
                    raise CorruptFile(f"{path}:{lineno}: expected {len(columns)} fields, got {len(raw)}")
                try:
                    rows.append({c: _parse(v, types[c]) for c, v in zip(columns, raw)})
                except ValueError as err:
                    raise CorruptFile(f"{path}:{lineno}: {err}") from err
            return rows
    except OSError as err:
        raise IoFailure(path, err.strerror or str(err)) from err


def read_run(run_dir: str | Path) -> RunManifest:
    """Rebuild a :class:`RunManifest` from a directory written by :func:`write_run`.

    Missing ``estimates.csv`` or ``bounds.csv`` load as empty lists. Path
    dumps are not read back.

    Raises
    ------
    SchemaMismatch
        On an unknown schema version or when the stored run id does not
        match the experiment and engine version.
    CorruptFile
        On malformed JSON or CSV content.
    IoFailure
        If ``manifest.json`` cannot be read.
    """
    run_dir = Path(run_dir)
    manifest_path = run_dir / MANIFEST_FILE
    try:
        text = manifest_path.read_text(encoding="utf-8")
    except OSError as err:
        raise IoFailure(manifest_path, err.strerror or str(err)) from err
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as err:
        raise CorruptFile(f"{manifest_path}: {err}") from err
    if not isinstance(tree, dict):
        raise CorruptFile(f"{manifest_path}: top level must be an object")

    if tree.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(f"{manifest_path}: schema version {tree.get('schema_version')!r}, expected {SCHEMA_VERSION}")
    try:
        spec = ExperimentSpec.from_dict(tree["spec"])
    except KeyError as err:
        raise CorruptFile(f"{manifest_path}: missing key {err}") from err
    except SpecError as err:
        raise CorruptFile(f"{manifest_path}: spec does not validate: {err}") from err

    manifest = RunManifest(
        spec=spec,
        command=tree.get("command", ""),
        engine=tree.get("engine", ""),
        created=tree.get("created", ""),
        overrides=list(tree.get("overrides", [])),
        reports=decode_nonfinite(dict(tree.get("reports", {}))),
    )
    if tree.get("run_id") != manifest.run_id:
        raise SchemaMismatch(
            f"{manifest_path}: run id {tree.get('run_id')!r} does not match content hash {manifest.run_id}"
        )

    estimates_path = run_dir / ESTIMATES_FILE
    if estimates_path.exists():
        manifest.estimates = [RuinEstimate(**row) for row in _read_csv(estimates_path, ESTIMATE_COLUMNS, _ESTIMATE_TYPES)]
    bounds_path = run_dir / BOUNDS_FILE
    if bounds_path.exists():
        manifest.bound_rows = [BoundRow(**row) for row in _read_csv(bounds_path, BOUND_COLUMNS, dict.fromkeys(BOUND_COLUMNS, float))]
    return manifest


_NONFINITE = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def encode_nonfinite(value: Any) -> Any:
    """Copy of a JSON tree with ``inf``, ``-inf`` and ``nan`` replaced by strings.

    numpy scalars and arrays are converted through ``tolist``.
    """
    if isinstance(value, float):
        if math.isfinite(value):
            return float(value)
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, Mapping):
        return {k: encode_nonfinite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_nonfinite(v) for v in value]
    if hasattr(value, "tolist"):
        return encode_nonfinite(value.tolist())
    return value


def decode_nonfinite(value: Any) -> Any:
    """Inverse of :func:`encode_nonfinite`."""
    if isinstance(value, str):
        return _NONFINITE.get(value, value)
    if isinstance(value, dict):
        return {k: decode_nonfinite(v) for k, v in value.items()}
    if isinstance(value, list):
        return [decode_nonfinite(v) for v in value]
    return value
