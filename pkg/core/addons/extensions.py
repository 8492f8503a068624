# addons/extensions.py
from pathlib import Path
from typing import List, Literal, Optional
import logging

from decouple import config
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import UsageError

LOG_FORMAT = "%(asctime)s %(levelname)s: %(message)s"

# orders the acceptance identities are stated at
MINIMUM_ORDERS = {'order_inert': 20, 'order_split': 12, 'order_ramified': 20}


def setup_logging(log_file=None, level=logging.INFO):
    """Console logging at INFO plus one file handler; repeated calls do not stack handlers"""
    logging.basicConfig(level=level)
    root = logging.getLogger()
    if log_file:
        target = str(Path(log_file).resolve())
        if not any(isinstance(h, logging.FileHandler) and h.baseFilename == target for h in root.handlers):
            handler = logging.FileHandler(target)
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            root.addHandler(handler)
    return logging.getLogger("lab")


def _split_list(value):
    if isinstance(value, str):
        return [int(x) for x in value.replace(' ', '').split(',') if x]
    return value


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    precision: int = Field(30, ge=15, description="mpmath working precision in decimal digits")
    order_inert: int = Field(20, ge=1, description="Series order for the inert identity")
    order_split: int = Field(12, ge=1, description="Series order for the split identity")
    order_ramified: int = Field(20, ge=1, description="Series order for the ramified identity")
    seed: int = Field(20240101, description="Seed of every randomized property check")
    workers: int = Field(4, ge=1, description="Worker threads for the suite pool")
    out: str = Field("results", description="Directory for emitted artifacts")
    format: Literal['json', 'csv'] = Field("json", description="Artifact format")
    log_file: Optional[str] = Field("lab.log", description="Log file, empty to disable")
    primes: List[int] = Field(default_factory=lambda: [3, 5, 7], description="Primes for the local suites")
    discriminants: List[int] = Field(default_factory=lambda: [3, 4, 7], description="D with -D fundamental")

    @field_validator('primes', 'discriminants', mode='before')
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)

    @field_validator('format', mode='before')
    @classmethod
    def lower_format(cls, value):
        return value.lower() if isinstance(value, str) else value

    @classmethod
    def from_env(cls):
        load_dotenv()
        return {
            'precision': config('LAB_PRECISION', default=30, cast=int),
            'order_inert': config('LAB_ORDER_INERT', default=20, cast=int),
            'order_split': config('LAB_ORDER_SPLIT', default=12, cast=int),
            'order_ramified': config('LAB_ORDER_RAMIFIED', default=20, cast=int),
            'seed': config('LAB_SEED', default=20240101, cast=int),
            'workers': config('LAB_WORKERS', default=4, cast=int),
            'out': config('LAB_OUT', default='results'),
            'format': config('LAB_FORMAT', default='json'),
            'log_file': config('LAB_LOG_FILE', default='lab.log'),
            'primes': config('LAB_PRIMES', default='3,5,7'),
            'discriminants': config('LAB_DISCRIMINANTS', default='3,4,7'),
        }

    @classmethod
    def load(cls, path=None, **overrides):
        """Environment defaults, then the key = value file, then explicit overrides (None skipped)"""
        values = cls.from_env()
        if path:
            values.update(read_config_file(path))
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            raise UsageError("invalid configuration", details=e.errors(include_url=False, include_context=False))

    def override(self, **changes):
        """Validated copy with the non-None changes applied"""
        values = self.model_dump()
        values.update({k: v for k, v in changes.items() if v is not None})
        try:
            return RunConfig(**values)
        except ValidationError as e:
            raise UsageError("invalid configuration", details=e.errors(include_url=False, include_context=False))

    def order_for(self, variant):
        return getattr(self, f"order_{variant}")

    def below_minimum(self):
        """Orders set lower than the acceptance identities need"""
        return sorted(k for k, v in MINIMUM_ORDERS.items() if getattr(self, k) < v)


def _unquote(value):
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value


def read_config_file(path):
    """TOML-style key = value lines; # comments, [sections] ignored, keys may use dashes"""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read config file {path}: {e}")
    values = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#') or (line.startswith('[') and line.endswith(']')):
            continue
        if '=' not in line:
            raise UsageError(f"{path}:{number}: expected key = value", details={'line': raw})
        key, value = (s.strip() for s in line.split('=', 1))
        if value[:1] not in "\"'" and '#' in value:
            value = value.split('#', 1)[0].strip()
        value = _unquote(value)
        if value.startswith('[') and value.endswith(']'):
            value = ','.join(_unquote(x.strip()) for x in value[1:-1].split(',') if x.strip())
        values[key.replace('-', '_').lower()] = value
    return values
