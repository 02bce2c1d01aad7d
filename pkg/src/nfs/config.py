"""Line-oriented run configuration: `section.key = value`, `#` comments.

Unknown keys are errors so typos never pass silently. Every field has a
default except the grid geometry, which should be stated explicitly in any
real run (defaults target the standard five-dimensional desk scenario).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import ConfigError

MEAN_POLICIES = ("reject", "project")
KERNEL_TYPES = ("gaussian", "file")
SOURCE_TYPES = ("gaussian-diff", "file")


@dataclass
class KernelConfig:
    type: str = "gaussian"
    sigma: float = 1.0
    amplitude: float = 1.0
    file: str = ""


@dataclass
class SourceConfig:
    type: str = "gaussian-diff"
    centers: tuple[float, float] = (1.0, -1.0)
    widths: tuple[float, float] = (1.0, 1.0)
    amplitude: float = 1.0
    file: str = ""


@dataclass
class RunConfig:
    dimension: int = 5
    n: int = 8
    half_width: float = 4.0 * 3.141592653589793
    epsilon: float | None = None  # None == "auto"
    rho: float = 1.0
    tol_fp: float = 1e-10
    max_iter: int = 200
    seed: int = 42
    slack: float = 0.05
    output_dir: str = "out"
    mean_policy: str = "reject"
    trials: int = 50
    sequence_count: int = 8
    kernel: KernelConfig = field(default_factory=KernelConfig)
    source: SourceConfig = field(default_factory=SourceConfig)
    coeffs: tuple[float, ...] = (1.0,)
    coeffs2: tuple[float, ...] | None = None

    def validate(self) -> None:
        if not (1 <= self.dimension <= 7):
            raise ConfigError(f"dimension must lie in [1, 7], got {self.dimension}")
        if self.n < 4 or (self.n & (self.n - 1)) != 0:
            raise ConfigError(f"n must be a power of two >= 4, got {self.n}")
        if not (self.half_width > 0):
            raise ConfigError(f"half_width must be positive, got {self.half_width}")
        if self.epsilon is not None and self.epsilon < 0:
            raise ConfigError(f"epsilon must be nonnegative, got {self.epsilon}")
        if not (0.0 < self.rho <= 1.0):
            raise ConfigError(f"rho must lie in (0, 1], got {self.rho}")
        if not (self.tol_fp > 0):
            raise ConfigError(f"tol_fp must be positive, got {self.tol_fp}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")
        if self.slack < 0:
            raise ConfigError(f"slack must be nonnegative, got {self.slack}")
        if self.mean_policy not in MEAN_POLICIES:
            raise ConfigError(f"mean_policy must be one of {MEAN_POLICIES}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.sequence_count < 1:
            raise ConfigError(f"sequence.count must be >= 1, got {self.sequence_count}")
        if self.kernel.type not in KERNEL_TYPES:
            raise ConfigError(f"kernel.type must be one of {KERNEL_TYPES}")
        if self.source.type not in SOURCE_TYPES:
            raise ConfigError(f"source.type must be one of {SOURCE_TYPES}")
        if self.kernel.type == "gaussian" and not (self.kernel.sigma > 0):
            raise ConfigError(f"kernel.sigma must be positive, got {self.kernel.sigma}")
        if self.source.type == "gaussian-diff":
            for w in self.source.widths:
                if not (w > 0):
                    raise ConfigError(f"source widths must be positive, got {w}")
        if not self.coeffs or not any(self.coeffs):
            raise ConfigError("nonlinearity.coeffs must not be identically zero")


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _parse_floats(key: str, value: str) -> tuple[float, ...]:
    return tuple(_parse_float(key, part.strip()) for part in value.split(","))


def _parse_pair(key: str, value: str) -> tuple[float, float]:
    parts = _parse_floats(key, value)
    if len(parts) != 2:
        raise ConfigError(f"{key}: expected exactly two values, got {len(parts)}")
    return parts


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text; unknown keys are rejected."""
    cfg = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        _apply(cfg, key, value, lineno)
    cfg.validate()
    return cfg


def _apply(cfg: RunConfig, key: str, value: str, lineno: int) -> None:
    match key:
        case "grid.dimension":
            cfg.dimension = _parse_int(key, value)
        case "grid.n":
            cfg.n = _parse_int(key, value)
        case "grid.half_width":
            cfg.half_width = _parse_float(key, value)
        case "run.epsilon":
            cfg.epsilon = None if value == "auto" else _parse_float(key, value)
        case "run.rho":
            cfg.rho = _parse_float(key, value)
        case "run.tol_fp":
            cfg.tol_fp = _parse_float(key, value)
        case "run.max_iter":
            cfg.max_iter = _parse_int(key, value)
        case "run.seed":
            cfg.seed = _parse_int(key, value)
        case "run.slack":
            cfg.slack = _parse_float(key, value)
        case "run.output_dir":
            cfg.output_dir = value
        case "run.mean_policy":
            cfg.mean_policy = value
        case "run.trials":
            cfg.trials = _parse_int(key, value)
        case "sequence.count":
            cfg.sequence_count = _parse_int(key, value)
        case "kernel.type":
            cfg.kernel.type = value
        case "kernel.sigma":
            cfg.kernel.sigma = _parse_float(key, value)
        case "kernel.amplitude":
            cfg.kernel.amplitude = _parse_float(key, value)
        case "kernel.file":
            cfg.kernel.file = value
            cfg.kernel.type = "file"
        case "source.type":
            cfg.source.type = value
        case "source.centers":
            cfg.source.centers = _parse_pair(key, value)
        case "source.widths":
            cfg.source.widths = _parse_pair(key, value)
        case "source.amplitude":
            cfg.source.amplitude = _parse_float(key, value)
        case "source.file":
            cfg.source.file = value
            cfg.source.type = "file"
        case "nonlinearity.coeffs":
            cfg.coeffs = _parse_floats(key, value)
        case "nonlinearity.coeffs2":
            cfg.coeffs2 = _parse_floats(key, value)
        case _:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")


def echo_config(cfg: RunConfig) -> str:
    """Render the fully resolved configuration for report auditability."""
    lines = [
        f"grid.dimension = {cfg.dimension}",
        f"grid.n = {cfg.n}",
        f"grid.half_width = {cfg.half_width:.17g}",
        "run.epsilon = auto" if cfg.epsilon is None else f"run.epsilon = {cfg.epsilon:.17g}",
        f"run.rho = {cfg.rho:.17g}",
        f"run.tol_fp = {cfg.tol_fp:.17g}",
        f"run.max_iter = {cfg.max_iter}",
        f"run.seed = {cfg.seed}",
        f"run.slack = {cfg.slack:.17g}",
        f"run.output_dir = {cfg.output_dir}",
        f"run.mean_policy = {cfg.mean_policy}",
        f"run.trials = {cfg.trials}",
        f"sequence.count = {cfg.sequence_count}",
        f"kernel.type = {cfg.kernel.type}",
    ]
    if cfg.kernel.type == "gaussian":
        lines += [
            f"kernel.sigma = {cfg.kernel.sigma:.17g}",
            f"kernel.amplitude = {cfg.kernel.amplitude:.17g}",
        ]
    else:
        lines.append(f"kernel.file = {cfg.kernel.file}")
    lines.append(f"source.type = {cfg.source.type}")
    if cfg.source.type == "gaussian-diff":
        lines += [
            "source.centers = " + ",".join(f"{c:.17g}" for c in cfg.source.centers),
            "source.widths = " + ",".join(f"{w:.17g}" for w in cfg.source.widths),
            f"source.amplitude = {cfg.source.amplitude:.17g}",
        ]
    else:
        lines.append(f"source.file = {cfg.source.file}")
    lines.append("nonlinearity.coeffs = " + ",".join(f"{c:.17g}" for c in cfg.coeffs))
    if cfg.coeffs2 is not None:
        lines.append(
            "nonlinearity.coeffs2 = " + ",".join(f"{c:.17g}" for c in cfg.coeffs2)
        )
    return "\n".join(lines)
