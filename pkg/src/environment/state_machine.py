"""
Environment State Machine Module
Ground truth for the box-and-key environment: states, step actions and enumeration
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Set, Tuple

from ..exceptions import ConfigError, OutOfRange, RepeatedTarget

# One index digit per argument, see the extraction grammar
MAX_ENTITIES = 10


class QueryOrdering(str, Enum):
    INTERLEAVED = "interleaved"
    BOXES_THEN_KEYS = "boxes_then_keys"


class StateKind(str, Enum):
    BOX = "box"
    KEY = "key"


@dataclass(frozen=True)
class EnvConfig:
    """
    Size and query ordering of one environment

    Args:
        num_boxes: Number of boxes (1..10)
        num_keys: Number of keys (1..10)
        query_ordering: Order in which states are queried and answered
    """
    num_boxes: int = 10
    num_keys: int = 10
    query_ordering: QueryOrdering = QueryOrdering.INTERLEAVED

    def __post_init__(self):
        for name in ("num_boxes", "num_keys"):
            value = getattr(self, name)
            if not isinstance(value, int) or not 1 <= value <= MAX_ENTITIES:
                raise ConfigError(f"{name} must be an integer in [1, {MAX_ENTITIES}], got {value!r}")
        # accept plain strings coming from YAML / JSON
        object.__setattr__(self, "query_ordering", QueryOrdering(self.query_ordering))

    @property
    def total_states(self) -> int:
        return self.num_boxes + self.num_keys

    def to_dict(self) -> dict:
        return {
            "num_boxes": self.num_boxes,
            "num_keys": self.num_keys,
            "query_ordering": self.query_ordering.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EnvConfig":
        return cls(
            num_boxes=int(data.get("num_boxes", 10)),
            num_keys=int(data.get("num_keys", 10)),
            query_ordering=QueryOrdering(data.get("query_ordering", QueryOrdering.INTERLEAVED.value)),
        )


@dataclass(frozen=True, order=True)
class StateId:
    kind: StateKind
    index: int

    def __str__(self):
        return f"{self.kind.value.capitalize()}{self.index}"


@dataclass(frozen=True)
class StepAction:
    """Open one box and retrieve one key; the two indices are independent"""
    box: int
    key: int

    def to_dict(self) -> dict:
        return {"box": self.box, "key": self.key}

    @classmethod
    def from_dict(cls, data: dict) -> "StepAction":
        return cls(box=int(data["box"]), key=int(data["key"]))


@dataclass(frozen=True)
class GroundState:
    opened: Tuple[bool, ...]
    obtained: Tuple[bool, ...]

    @property
    def steps_applied(self) -> int:
        return sum(self.opened)

    def value_of(self, state_id: StateId) -> bool:
        flags = self.opened if state_id.kind is StateKind.BOX else self.obtained
        return flags[state_id.index]


def initial_state(config: EnvConfig) -> GroundState:
    """Step-0: nothing opened, nothing obtained"""
    return GroundState(
        opened=(False,) * config.num_boxes,
        obtained=(False,) * config.num_keys,
    )


def apply_step(state: GroundState, action: StepAction) -> GroundState:
    """
    Apply one step action and return the new state

    Args:
        state: Current ground state (left untouched)
        action: Box to open and key to retrieve

    Returns:
        New GroundState with opened[box] and obtained[key] set

    Raises:
        OutOfRange: If an index exceeds the environment
        RepeatedTarget: If the box is already open or the key already obtained
    """
    if not 0 <= action.box < len(state.opened):
        raise OutOfRange(f"box index {action.box} outside [0, {len(state.opened) - 1}]")
    if not 0 <= action.key < len(state.obtained):
        raise OutOfRange(f"key index {action.key} outside [0, {len(state.obtained) - 1}]")
    if state.opened[action.box]:
        raise RepeatedTarget(f"box {action.box} is already opened")
    if state.obtained[action.key]:
        raise RepeatedTarget(f"key {action.key} is already obtained")

    opened = list(state.opened)
    obtained = list(state.obtained)
    opened[action.box] = True
    obtained[action.key] = True
    return GroundState(opened=tuple(opened), obtained=tuple(obtained))


def replay(config: EnvConfig, actions: Iterable[StepAction], start: GroundState = None) -> GroundState:
    """Apply a sequence of actions starting from start (default: Step-0)"""
    state = start if start is not None else initial_state(config)
    for action in actions:
        state = apply_step(state, action)
    return state


def query_order(config: EnvConfig) -> List[StateId]:
    """State ids in the order they are queried"""
    boxes = [StateId(StateKind.BOX, i) for i in range(config.num_boxes)]
    keys = [StateId(StateKind.KEY, i) for i in range(config.num_keys)]

    if config.query_ordering is QueryOrdering.BOXES_THEN_KEYS:
        return boxes + keys

    # Interleaved: (Box i, Key i) pairs, leftovers of the longer side appended
    ordered = []
    for i in range(max(config.num_boxes, config.num_keys)):
        if i < config.num_boxes:
            ordered.append(boxes[i])
        if i < config.num_keys:
            ordered.append(keys[i])
    return ordered


def enumerate_states(state: GroundState, config: EnvConfig) -> List[Tuple[StateId, bool]]:
    """
    Enumerate every queried state with its truth value

    Args:
        state: Ground state to read
        config: Environment config (provides the ordering)

    Returns:
        List of (StateId, bool) of length num_boxes + num_keys
    """
    return [(state_id, state.value_of(state_id)) for state_id in query_order(config)]


def changed_states(action: StepAction) -> Set[StateId]:
    """The two states a step action touches"""
    return {StateId(StateKind.BOX, action.box), StateId(StateKind.KEY, action.key)}


def true_count(state: GroundState) -> int:
    return sum(state.opened) + sum(state.obtained)

