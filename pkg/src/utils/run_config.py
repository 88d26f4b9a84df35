"""
Run Configuration Module
Loads the YAML run configuration, applies overrides and expands the settings matrix
"""

import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import yaml

from ..clients.chat_client import ClientConfig
from ..environment.genesis import (
    SUPPORTED_SHOTS,
    GenerationSettings,
    Instance,
    InstructionVariant,
    LexiconMode,
    derive_seed,
    gen_instance,
)
from ..environment.state_machine import EnvConfig, QueryOrdering
from ..exceptions import ConfigError
from ..prompting.messages import RenderStyle

logger = logging.getLogger(__name__)

DEFAULT_VARIANT_LABELS = {
    InstructionVariant.NORMAL.value: "Normal Instruction",
    InstructionVariant.COUNTER_LANGUAGE_INSTRUCTION.value: "Counter-Intuitive Instruction (On NL)",
    InstructionVariant.COUNTER_OUTPUT_FORMAT.value: "Counter-Intuitive Instruction (Truth Values Switching)",
}
PROTOCOLS = ("final", "intermediate", "compressed")
AGENTS = ("oracle", "copylast", "random", "forgetful", "http")


@dataclass
class RunConfig:
    lexicon_modes: List[str] = field(default_factory=lambda: ["nl+nl", "sl+sl"])
    variants: List[str] = field(default_factory=lambda: [v.value for v in InstructionVariant])
    shots: List[int] = field(default_factory=lambda: list(SUPPORTED_SHOTS))
    distractors: List[bool] = field(default_factory=lambda: [False])
    samples: int = 50
    base_seed: int = 0
    num_boxes: int = 10
    num_keys: int = 10
    query_ordering: str = QueryOrdering.INTERLEAVED.value
    protocol: str = "final"
    k: Optional[int] = None
    per_step: bool = False
    style: str = RenderStyle.TRADITIONAL.value
    agent: str = "oracle"
    forget_p: float = 0.1
    agent_seed: int = 0
    concurrency: int = 4
    distractor_file: Optional[str] = None
    out: str = "runs/default"
    variant_labels: Dict[str, str] = field(default_factory=lambda: dict(DEFAULT_VARIANT_LABELS))
    client: ClientConfig = field(default_factory=ClientConfig)

    def __post_init__(self):
        if isinstance(self.client, dict):
            self.client = ClientConfig.from_dict(self.client)
        self.validate()

    def validate(self):
        """
        Check every field that can come from YAML or CLI

        Raises:
            ConfigError: On the first invalid field
        """
        for key in self.lexicon_modes:
            LexiconMode.from_key(key)
        for variant in self.variants:
            try:
                InstructionVariant(variant)
            except ValueError as e:
                raise ConfigError(f"Unknown instruction variant '{variant}'") from e
        bad_shots = [n for n in self.shots if n not in SUPPORTED_SHOTS]
        if bad_shots:
            raise ConfigError(f"Unsupported shot counts {bad_shots}, expected a subset of {SUPPORTED_SHOTS}")
        if not (self.lexicon_modes and self.variants and self.shots and self.distractors):
            raise ConfigError("Settings matrix has an empty axis")
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol must be one of {PROTOCOLS}, got '{self.protocol}'")
        if self.protocol == "compressed" and (self.k is None or self.k < 1):
            raise ConfigError("Compressed initialization needs k >= 1")
        if self.agent not in AGENTS:
            raise ConfigError(f"agent must be one of {AGENTS}, got '{self.agent}'")
        if self.agent_seed < 0:
            raise ConfigError(f"agent_seed must be >= 0, got {self.agent_seed}")
        if self.concurrency < 1:
            raise ConfigError(f"concurrency must be >= 1, got {self.concurrency}")
        try:
            RenderStyle(self.style)
        except ValueError as e:
            raise ConfigError(f"Unknown style '{self.style}'") from e
        self.env_config()

    def env_config(self) -> EnvConfig:
        return EnvConfig(self.num_boxes, self.num_keys, QueryOrdering(self.query_ordering))

    def variant_label(self, variant: str) -> str:
        return self.variant_labels.get(variant, DEFAULT_VARIANT_LABELS.get(variant, variant))

    def to_dict(self) -> dict:
        data = asdict(self)
        data["client"] = self.client.to_dict()
        return data

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)


def load_run_config(path=None, overrides: Optional[dict] = None, use_env: bool = True) -> RunConfig:
    """
    Resolve the run configuration

    Defaults, then the YAML file, then SITTRACK_* variables (client fields),
    then explicit overrides; None-valued overrides are ignored.

    Args:
        path: YAML file or None
        overrides: Field overrides, typically from CLI flags
        use_env: Apply environment overrides to the client section

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: On unreadable files, unknown keys or invalid values
    """
    data = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Cannot read config {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config {path} must be a mapping")

    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"Unknown config keys: {sorted(unknown)}")

    client = ClientConfig.from_dict(data.pop("client", None))
    if use_env:
        client = client.with_env_overrides()

    overrides = {key: value for key, value in (overrides or {}).items() if value is not None}
    client_overrides = overrides.pop("client", {}) or {}
    if client_overrides:
        client = ClientConfig(**{**client.to_dict(), **client_overrides})

    unknown = set(overrides) - known
    if unknown:
        raise ConfigError(f"Unknown override keys: {sorted(unknown)}")

    labels = dict(DEFAULT_VARIANT_LABELS)
    labels.update(data.pop("variant_labels", None) or {})
    data.update(overrides)
    data["variant_labels"] = labels

    try:
        config = RunConfig(client=client, **data)
    except TypeError as e:
        raise ConfigError(f"Invalid config: {e}") from e
    logger.info(f"Resolved run config: protocol={config.protocol}, agent={config.agent}, "
                f"samples={config.samples}, seed={config.base_seed}")
    return config


@dataclass(frozen=True)
class Cell:
    mode: LexiconMode
    variant: InstructionVariant
    n_shots: int
    distractors_on: bool

    def settings(self, env: EnvConfig) -> GenerationSettings:
        return GenerationSettings(env, self.mode, self.variant, self.n_shots, self.distractors_on)

    def seed_key(self, env: EnvConfig) -> str:
        # variant and lexicon mode are left out so those cells share ground truth
        flag = "distract" if self.distractors_on else "plain"
        return f"{env.num_boxes}x{env.num_keys}-{env.query_ordering.value}-{self.n_shots}shot-{flag}"


def expand_cells(config: RunConfig) -> List[Cell]:
    """Cells of the settings matrix in a fixed order"""
    return [
        Cell(LexiconMode.from_key(mode), InstructionVariant(variant), int(n_shots), bool(flag))
        for flag in config.distractors
        for variant in config.variants
        for mode in config.lexicon_modes
        for n_shots in config.shots
    ]


def generate_instances(config: RunConfig, pool: Optional[Sequence[str]] = None) -> List[Instance]:
    """
    Every instance of the matrix, samples per cell

    Args:
        config: Resolved run configuration
        pool: Distractor sentences (default: bundled pool)

    Returns:
        Instances in cell order, then sample order
    """
    env = config.env_config()
    instances = []
    for cell in expand_cells(config):
        settings = cell.settings(env)
        key = cell.seed_key(env)
        for sample_index in range(config.samples):
            seed = derive_seed(config.base_seed, key, sample_index)
            instances.append(gen_instance(seed, settings, pool))
    logger.info(f"Generated {len(instances)} instances over {len(expand_cells(config))} cells")
    return instances


def write_resolved_config(config: RunConfig, directory) -> Path:
    path = Path(directory) / "resolved_config.yaml"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(config.to_yaml(), encoding="utf-8")
    return path
