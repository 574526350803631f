"""Command configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .scalar import ParseError, Scalar

COMMANDS = ("validate", "metrics", "lc", "verify")
FORMATS = ("text", "json")
SUITES = ("all", "metrics", "connection")


class ConfigError(ValueError):
    pass


@dataclass
class CommandConfig:
    """
    One CLI invocation.  λ parameters stay as strings in the scalar grammar
    until the command needs them; ``q0`` values are only used for evaluated
    columns and positivity spot checks.
    """

    command: str
    preset: str = "podles-cp1"
    lambda1: str | None = None
    lambda2: str | None = None
    degree: int | None = None
    q0: list = field(default_factory=list)
    fmt: str = "text"
    force: bool = False
    suite: str = "all"
    scan_samples: int = 6
    evaluate: bool = False
    canonical: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.degree is not None and self.degree < 1:
            raise ConfigError("degree bound must be at least 1")
        if self.scan_samples < 1:
            raise ConfigError("--samples must be at least 1")
        if (self.lambda1 is None) != (self.lambda2 is None):
            raise ConfigError("--lambda1 and --lambda2 go together")
        for name in ("lambda1", "lambda2"):
            text = getattr(self, name)
            if text is None:
                continue
            try:
                val = Scalar.parse(text)
            except ParseError as exc:
                raise ConfigError(f"--{name}: {exc}") from None
            if not val:
                raise ConfigError(f"--{name} must be nonzero")
        try:
            self.q0 = [Fraction(x) for x in self.q0]
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad q0 value: {exc}") from None

    @property
    def lambdas(self):
        if self.lambda1 is None:
            return None
        return Scalar.parse(self.lambda1), Scalar.parse(self.lambda2)
