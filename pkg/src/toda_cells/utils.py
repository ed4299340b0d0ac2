import os
import re
import time
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import typer
import yaml
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.table import Table

from toda_cells.errors import ConfigError, DomainError
from toda_cells.models import CriterionResult, Status

# Diagnostics go to stderr; stdout carries only the artifact.
console = Console(stderr=True)

CONFIG_FILENAME = "toda-cells.yaml"

ENV_OVERRIDES: Dict[str, str] = {
    "TODA_CELLS_BUDGET": "budget_seconds",
    "TODA_CELLS_BLOWUP": "blowup_threshold",
    "TODA_CELLS_E8_SAMPLES": "e8_samples",
    "TODA_CELLS_SEED": "seed",
}


class Settings(BaseModel):
    """Runtime knobs for long checks and the integrator."""

    budget_seconds: float = 120.0
    blowup_threshold: float = 1e9
    e8_samples: int = 200
    seed: int = 0
    drift_tolerance: float = 1e-7


def expand_vars(value: Any, extra_vars: Dict[str, str] = {}) -> Any:
    """
    Expand shell-style variables like ${VAR} and ${VAR:-default} in strings.
    Recursively handles lists and dictionaries.
    """
    if isinstance(value, str):
        pattern = r"\$\{([^}:]+)(?::-([^}]*))?\}"

        def replace(match: re.Match) -> str:
            var_name = match.group(1)
            default = match.group(2)
            val = extra_vars.get(var_name) or os.environ.get(var_name)
            if val is not None:
                return str(val)
            if default is not None:
                return default
            return ""

        return re.sub(pattern, replace, value)
    if isinstance(value, list):
        return [expand_vars(item, extra_vars) for item in value]
    if isinstance(value, dict):
        return {k: expand_vars(v, extra_vars) for k, v in value.items()}
    return value


def detect_config_file(
    cwd: Optional[Path] = None, home: Optional[Path] = None
) -> Optional[Path]:
    """Find a settings file: ./toda-cells.yaml first, then the user config."""
    if cwd is None:
        cwd = Path.cwd()
    if home is None:
        home = Path.home()

    project_file = cwd / CONFIG_FILENAME
    if project_file.exists():
        return project_file

    user_file = home / ".config" / "toda-cells" / "config.yaml"
    if user_file.exists():
        return user_file
    return None


def load_settings(
    path: Optional[Path] = None, environ: Optional[Dict[str, str]] = None
) -> Settings:
    """Load settings from YAML, then apply environment overrides.

    Args:
        path: Explicit settings file. When omitted the usual locations are searched.
        environ: Environment mapping (defaults to os.environ).

    Raises:
        ConfigError: If the file is unreadable or a value fails validation.
    """
    if environ is None:
        environ = dict(os.environ)

    data: Dict[str, Any] = {}
    source = path if path is not None else detect_config_file()
    if source is not None:
        if not source.exists():
            raise ConfigError(f"Config file not found: {source}")
        try:
            loaded = yaml.safe_load(source.read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in {source}: {e}") from e
        if not isinstance(loaded, dict):
            raise ConfigError(f"{source} must contain a mapping")
        data = expand_vars(loaded, environ)

    for var, field in ENV_OVERRIDES.items():
        if environ.get(var):
            data[field] = environ[var]

    try:
        return Settings.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid settings: {e}") from e


class Deadline:
    """Wall-clock budget shared by a sequence of checks."""

    def __init__(self, seconds: float) -> None:
        self.seconds = seconds
        self.started = time.monotonic()

    def remaining(self) -> float:
        return self.seconds - (time.monotonic() - self.started)

    def expired(self) -> bool:
        return self.remaining() <= 0


class Tally:
    """Track verification outcomes."""

    def __init__(self) -> None:
        self.results: list[CriterionResult] = []

    def record(
        self,
        name: str,
        status: Status,
        measured: str = "",
        expected: str = "",
        seconds: float = 0.0,
    ) -> CriterionResult:
        """Record one criterion outcome."""
        result = CriterionResult(
            name=name,
            status=status,
            measured=measured,
            expected=expected,
            seconds=round(seconds, 3),
        )
        self.results.append(result)
        return result

    def count(self, status: Status) -> int:
        return sum(1 for r in self.results if r.status == status)

    @property
    def ok(self) -> bool:
        return self.count("FAIL") == 0

    def lines(self) -> list[str]:
        """One deterministic line per criterion (no timings)."""
        out = []
        for r in self.results:
            line = f"{r.status} {r.name}"
            if r.measured or r.expected:
                line += f": measured={r.measured} expected={r.expected}"
            out.append(line)
        return out

    def print_summary(self, target: Optional[Console] = None) -> None:
        """Print a summary table of outcomes."""
        target = target or console
        table = Table(title="verification")
        table.add_column("criterion")
        table.add_column("status")
        table.add_column("seconds", justify="right")
        colors = {"PASS": "green", "FAIL": "red", "SKIP": "yellow"}
        for r in self.results:
            color = colors[r.status]
            table.add_row(r.name, f"[{color}]{r.status}[/{color}]", f"{r.seconds:.2f}")
        target.print(table)
        target.print(
            f"{self.count('PASS')} passed, {self.count('FAIL')} failed,"
            f" {self.count('SKIP')} skipped"
        )


def ensure_dir(directory: Path) -> None:
    """Ensure a directory exists, creating it if necessary."""
    if not directory.exists():
        os.makedirs(directory)


def write_artifact(text: str, out: Optional[Path]) -> None:
    """Write text to a file or, when out is None, to standard output."""
    if out is None:
        typer.echo(text, nl=not text.endswith("\n"))
        return
    ensure_dir(out.parent)
    out.write_text(text, encoding="utf-8")


def star_string(subset: Iterable[int], rank: int) -> str:
    """Render J as '(*0*)': 0 where alpha_i is in J, * elsewhere."""
    members = set(subset)
    return "(" + "".join("0" if i in members else "*" for i in range(1, rank + 1)) + ")"


def parse_subset(text: str, rank: int) -> frozenset[int]:
    """Parse '(*0*)', '*0*' or '2,3' into a subset of 1..rank."""
    raw = text.strip()
    if raw.startswith("(") and raw.endswith(")"):
        raw = raw[1:-1]
    if raw and set(raw) <= {"*", "0"}:
        if len(raw) != rank:
            raise DomainError(f"Star string {text!r} has length {len(raw)}, rank is {rank}")
        return frozenset(i + 1 for i, ch in enumerate(raw) if ch == "0")
    if not raw:
        return frozenset()
    try:
        members = frozenset(int(part) for part in raw.split(","))
    except ValueError as e:
        raise DomainError(f"Cannot parse subset {text!r}") from e
    if not all(1 <= i <= rank for i in members):
        raise DomainError(f"Subset {text!r} is not contained in 1..{rank}")
    return members
