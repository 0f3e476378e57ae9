"""
Parser for flat ``key=value`` model config files.

Tokens are whitespace separated and may share a line; ``#`` starts a
comment. Exactly one of ``family=<tag>`` or ``spec=<kind>`` selects what is
built:

    family=poisson_gamma alpha=1 beta=1 lambdas=1,1
    family=independent law_1=poisson:2 law_2=geometric:0.5
    spec=linear_ce n=2 a=0.5 b=1 c=0.5 d=1
    spec=linear_ce n=3 slopes=0,0.3,0.3;0.3,0,0.3;0.3,0.3,0 intercepts=1,1,1
    spec=linear_poisson a=0.5 b=1 c=0.5 d=1
    spec=car n=2 thin_12=bernoulli:0.25 thin_21=bernoulli:0.333 innov_1=poisson:2 innov_2=poisson:3
    spec=random_coeff n=2 beta_12=2,3 beta_21=2,4 innov_1=negbinomial:4,0.5 innov_2=negbinomial:3,0.5

Laws are written ``kind:p1,p2`` with positional parameters; indices in
``thin_ij``, ``innov_i`` and ``beta_ij`` are 1-based.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union
import logging
import re

from pydantic import ValidationError

from compat import CARSpec, LinearPoissonSpec, RandomCoeffSpec
from config.exceptions import ConfigSchemaError, CountCompatError, IncompatibleParametersError
from distributions import make_distribution
from families import FamilyDescriptor, FamilyType, make_family
from lince import LinearCESpec


logger = logging.getLogger(__name__)

ModelConfig = Union[FamilyDescriptor, LinearCESpec, LinearPoissonSpec, CARSpec, RandomCoeffSpec]

LAW_PARAMETERS: Dict[str, Tuple[str, ...]] = {
    "poisson": ("lam",),
    "negbinomial": ("r", "p"),
    "geometric": ("p",),
    "bernoulli": ("p",),
    "theta_ratio": ("theta_num", "theta_den"),
    "beta_nb": ("r", "alpha1", "alpha2"),
    "degenerate": ("k",),
}

SPEC_KINDS = ("linear_ce", "linear_poisson", "car", "random_coeff")

LIST_KEYS = {"lambdas", "rs", "intercepts"}
INT_KEYS = {"n", "size", "k"}

INDEXED_KEY = re.compile(r"^(thin|beta|innov|law)_(\d+)$")


@dataclass(frozen=True)
class Entry:
    """One ``key=value`` token and the line it came from."""
    key: str
    value: str
    line: int


class ConfigFile:
    """Tokenized config with line-anchored error reporting."""

    def __init__(self, entries: List[Entry], source: str):
        self.source = source
        self.entries: Dict[str, Entry] = {}
        for entry in entries:
            if entry.key in self.entries:
                raise self.error(entry, f"duplicate key '{entry.key}' (first on line {self.entries[entry.key].line})")
            self.entries[entry.key] = entry

    @classmethod
    def from_text(cls, text: str, source: str = "<config>") -> "ConfigFile":
        entries = []
        for number, raw in enumerate(text.splitlines(), start=1):
            content = raw.split("#", 1)[0].strip()
            for token in content.split():
                key, sep, value = token.partition("=")
                if not sep or not key or not value:
                    raise ConfigSchemaError(f"{source}:{number}: expected key=value, got '{token}'")
                entries.append(Entry(key=key.strip().lower(), value=value.strip(), line=number))
        if not entries:
            raise ConfigSchemaError(f"{source}: config is empty")
        return cls(entries, source)

    def error(self, entry: Entry, message: str) -> ConfigSchemaError:
        return ConfigSchemaError(f"{self.source}:{entry.line}: {message}")

    def anchor(self) -> str:
        first = min(entry.line for entry in self.entries.values())
        return f"{self.source}:{first}"

    def take(self, key: str) -> Entry:
        entry = self.entries.get(key)
        if entry is None:
            raise ConfigSchemaError(f"{self.anchor()}: missing required key '{key}'")
        return entry

    def number(self, entry: Entry) -> Union[int, float]:
        try:
            return int(entry.value) if entry.key in INT_KEYS else float(entry.value)
        except ValueError:
            raise self.error(entry, f"'{entry.key}' must be a number, got '{entry.value}'") from None

    def numbers(self, entry: Entry) -> List[float]:
        try:
            return [float(v) for v in entry.value.split(",")]
        except ValueError:
            raise self.error(entry, f"'{entry.key}' must be a comma-separated list, got '{entry.value}'") from None

    def law(self, entry: Entry):
        kind, _, raw = entry.value.partition(":")
        names = LAW_PARAMETERS.get(kind)
        if names is None:
            raise self.error(entry, f"unknown law '{kind}' (known: {', '.join(LAW_PARAMETERS)})")
        values = raw.split(",") if raw else []
        if len(values) != len(names):
            raise self.error(entry, f"law '{kind}' takes {len(names)} parameter(s) {names}, got '{raw}'")
        try:
            params = {
                name: int(value) if name == "k" else float(value)
                for name, value in zip(names, values)
            }
        except ValueError:
            raise self.error(entry, f"non-numeric parameter in '{entry.value}'") from None
        try:
            return make_distribution(kind, **params)
        except CountCompatError as e:
            raise self.error(entry, str(e)) from e

    def indexed(self, prefix: str, n: int) -> Dict[Tuple[int, ...], Entry]:
        """``prefix_ij`` / ``prefix_i`` entries keyed by 0-based index tuples."""
        out = {}
        for entry in self.entries.values():
            match = INDEXED_KEY.match(entry.key)
            if match is None or match.group(1) != prefix:
                continue
            digits = match.group(2)
            index = tuple(int(ch) - 1 for ch in digits) if len(digits) > 1 else (int(digits) - 1,)
            if any(i < 0 or i >= n for i in index):
                raise self.error(entry, f"index in '{entry.key}' outside 1..{n}")
            out[index] = entry
        return out


def _check_keys(config: ConfigFile, allowed: set, head: str) -> None:
    for entry in config.entries.values():
        if entry.key == head or entry.key in allowed:
            continue
        match = INDEXED_KEY.match(entry.key)
        if match is not None and match.group(1) in allowed:
            continue
        raise config.error(entry, f"unexpected key '{entry.key}'")


def _family(config: ConfigFile) -> FamilyDescriptor:
    head = config.take("family")
    try:
        family = FamilyType(head.value)
    except ValueError:
        known = ", ".join(t.value for t in FamilyType)
        raise config.error(head, f"unknown family '{head.value}' (known: {known})") from None
    params: Dict[str, Any] = {}
    laws = config.indexed("law", 9)
    if family is FamilyType.INDEPENDENT:
        if not laws:
            raise config.error(head, "independent family needs law_1, law_2, ...")
        params["laws"] = [config.law(laws[(i,)]) for i in sorted(k[0] for k in laws)]
    elif laws:
        raise config.error(next(iter(laws.values())), "law_i keys only apply to the independent family")
    for entry in config.entries.values():
        if entry.key == "family":
            continue
        match = INDEXED_KEY.match(entry.key)
        if match is not None:
            if match.group(1) != "law":
                raise config.error(entry, f"unexpected key '{entry.key}' in a family config")
            continue
        if entry.key in LIST_KEYS:
            params[entry.key] = config.numbers(entry)
        else:
            params[entry.key] = config.number(entry)
    if family is FamilyType.THETA:
        _check_theta_order(config, params)
    descriptor = FamilyDescriptor(family=family, params=params)
    try:
        make_family(descriptor)
    except CountCompatError as e:
        raise type(e)(f"{config.source}:{head.line}: {e}") from e
    return descriptor


def _check_theta_order(config: ConfigFile, params: Dict[str, Any]):
    # only the pairs present; missing keys are reported by make_family
    for upper, lower in (("theta1", "theta2"), ("theta3", "theta4")):
        if upper in params and lower in params and not params[lower] < params[upper]:
            entry = config.entries[lower]
            raise IncompatibleParametersError(
                f"{config.source}:{entry.line}: {lower} < {upper} violated "
                f"({upper}={params[upper]}, {lower}={params[lower]})"
            )


def _laws_matrix(config: ConfigFile, prefix: str, n: int, parse) -> List[List[Any]]:
    entries = config.indexed(prefix, n)
    matrix: List[List[Any]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                if (i, j) in entries:
                    raise config.error(entries[(i, j)], f"diagonal entry '{prefix}_{i + 1}{j + 1}' is not allowed")
                continue
            if (i, j) not in entries:
                raise ConfigSchemaError(f"{config.anchor()}: missing '{prefix}_{i + 1}{j + 1}'")
            matrix[i][j] = parse(entries[(i, j)])
    return matrix


def _innovations(config: ConfigFile, n: int) -> List[Any]:
    entries = config.indexed("innov", n)
    missing = [i + 1 for i in range(n) if (i,) not in entries]
    if missing:
        raise ConfigSchemaError(f"{config.anchor()}: missing innovation(s) {', '.join(f'innov_{i}' for i in missing)}")
    return [config.law(entries[(i,)]) for i in range(n)]


def _beta_pair(config: ConfigFile, entry: Entry) -> Tuple[float, float]:
    values = config.numbers(entry)
    if len(values) != 2:
        raise config.error(entry, f"'{entry.key}' needs two Beta parameters, got '{entry.value}'")
    return values[0], values[1]


def _spec(config: ConfigFile):
    head = config.take("spec")
    kind = head.value
    if kind not in SPEC_KINDS:
        raise config.error(head, f"unknown spec '{kind}' (known: {', '.join(SPEC_KINDS)})")
    if kind == "linear_poisson":
        _check_keys(config, {"a", "b", "c", "d"}, "spec")
        return LinearPoissonSpec(**{k: config.number(config.take(k)) for k in "abcd"})
    n = int(config.number(config.take("n")))
    if n < 2:
        raise config.error(config.take("n"), f"n must be at least 2, got {n}")
    if kind == "linear_ce":
        if n == 2 and "slopes" not in config.entries:
            _check_keys(config, {"n", "a", "b", "c", "d"}, "spec")
            a, b, c, d = (config.number(config.take(k)) for k in "abcd")
            return LinearCESpec.bivariate(a, b, c, d)
        _check_keys(config, {"n", "slopes", "intercepts"}, "spec")
        slopes_entry = config.take("slopes")
        rows = slopes_entry.value.split(";")
        try:
            slopes = [[float(v) for v in row.split(",")] for row in rows]
        except ValueError:
            raise config.error(slopes_entry, "slopes must be ';'-separated rows of numbers") from None
        return LinearCESpec(n=n, slopes=slopes, intercepts=config.numbers(config.take("intercepts")))
    if kind == "car":
        _check_keys(config, {"n", "thin", "innov"}, "spec")
        return CARSpec(n=n, thinning=_laws_matrix(config, "thin", n, config.law), innovation=_innovations(config, n))
    _check_keys(config, {"n", "beta", "innov"}, "spec")
    betas = _laws_matrix(config, "beta", n, lambda entry: _beta_pair(config, entry))
    return RandomCoeffSpec(n=n, beta_params=betas, innovation=_innovations(config, n))


def parse_config_text(text: str, source: str = "<config>") -> ModelConfig:
    """Parse config text (see the module docstring for the schema)."""
    config = ConfigFile.from_text(text, source)
    has_family, has_spec = "family" in config.entries, "spec" in config.entries
    if has_family == has_spec:
        raise ConfigSchemaError(f"{config.anchor()}: exactly one of 'family=' or 'spec=' is required")
    try:
        result = _family(config) if has_family else _spec(config)
    except ValidationError as e:
        raise ConfigSchemaError(f"{config.anchor()}: invalid parameters: {e}") from e
    logger.info(f"Parsed {type(result).__name__} from {source}")
    return result


def parse_model_config(path: Union[str, Path]) -> ModelConfig:
    """
    Read and validate a model config file.

    Returns:
        FamilyDescriptor, LinearCESpec, LinearPoissonSpec, CARSpec or RandomCoeffSpec

    Raises:
        ConfigSchemaError: Schema violations and unknown tags
        IncompatibleParametersError, ParameterDomainError: Family invariants
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigSchemaError(f"Cannot read config {path}: {e}") from e
    return parse_config_text(text, str(path))
