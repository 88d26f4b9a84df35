"""
Answer Parsing Module
Extracts predicted state atoms from free-form model output and keys them by queried state
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..environment.genesis import Lexicon
from ..environment.state_machine import StateId, StateKind

logger = logging.getLogger(__name__)

# Normative extraction grammar; do not widen
STATE_ATOM_PATTERN = r"([a-zA-Z0-9]+)\(([a-zA-Z0-9]+-\d)\)=(True|true|False|false)"
_STATE_ATOM_RE = re.compile(STATE_ATOM_PATTERN)


@dataclass(frozen=True)
class RawAtom:
    functor: str
    argument: str
    truth_token: str
    byte_offset: int

    @property
    def value(self) -> bool:
        return self.truth_token.lower() == "true"

    @property
    def key(self) -> Tuple[str, str]:
        return (self.functor, self.argument)

    def to_dict(self) -> dict:
        return {
            "functor": self.functor,
            "argument": self.argument,
            "truth_token": self.truth_token,
            "byte_offset": self.byte_offset,
        }


@dataclass
class PredictionAnomalies:
    duplicate_conflicts: int = 0
    duplicate_agreements: int = 0
    unknown_atoms: List[RawAtom] = field(default_factory=list)
    missing_states: List[StateId] = field(default_factory=list)

    @property
    def is_clean(self) -> bool:
        return not (self.duplicate_conflicts or self.duplicate_agreements
                    or self.unknown_atoms or self.missing_states)

    def to_dict(self) -> dict:
        return {
            "duplicate_conflicts": self.duplicate_conflicts,
            "duplicate_agreements": self.duplicate_agreements,
            "unknown_atoms": [atom.to_dict() for atom in self.unknown_atoms],
            "missing_states": [state_id_to_str(s) for s in self.missing_states],
        }


@dataclass
class PredictionMap:
    """
    Parsed prediction for one query

    entries holds every (functor, argument) seen (last occurrence wins);
    by_state restricts it to the queried states.
    """
    entries: Dict[Tuple[str, str], bool]
    by_state: Dict[StateId, bool]
    anomalies: PredictionAnomalies

    @property
    def predicted_count(self) -> int:
        return len(self.by_state)

    def to_dict(self) -> dict:
        return {
            "by_state": {state_id_to_str(s): v for s, v in sorted(self.by_state.items())},
            "anomalies": self.anomalies.to_dict(),
        }


def state_id_to_str(state_id: StateId) -> str:
    return f"{state_id.kind.value}:{state_id.index}"


def state_id_from_str(text: str) -> StateId:
    kind, index = text.split(":")
    return StateId(StateKind(kind), int(index))


def extract_states(text) -> List[RawAtom]:
    """
    Find all state atoms in model output

    Args:
        text: Raw output (str; bytes are decoded leniently; None gives no atoms)

    Returns:
        RawAtoms in order of appearance, tokens exactly as written
    """
    if text is None:
        return []
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8", errors="replace")

    lead = len(text) - len(text.lstrip())
    stripped = text.strip()
    lead_bytes = len(text[:lead].encode("utf-8", errors="replace"))

    atoms = []
    for match in _STATE_ATOM_RE.finditer(stripped):
        offset = lead_bytes + len(stripped[:match.start()].encode("utf-8", errors="replace"))
        atoms.append(RawAtom(
            functor=match.group(1),
            argument=match.group(2),
            truth_token=match.group(3),
            byte_offset=offset,
        ))
    return atoms


def normalize(atoms: Sequence[RawAtom], reference_query: Sequence[StateId], lexicon: Lexicon) -> PredictionMap:
    """
    Bucket atoms by (functor, argument) and check them against the query

    Args:
        atoms: Extracted atoms
        reference_query: State ids queried at this step
        lexicon: Lexicon used to render the query

    Returns:
        PredictionMap with anomaly counts
    """
    lookup = {(lexicon.functor_for(s.kind), lexicon.argument(s)): s for s in reference_query}

    entries: Dict[Tuple[str, str], bool] = {}
    anomalies = PredictionAnomalies()
    for atom in atoms:
        if atom.key in entries:
            if entries[atom.key] == atom.value:
                anomalies.duplicate_agreements += 1
            else:
                anomalies.duplicate_conflicts += 1
        entries[atom.key] = atom.value
        if atom.key not in lookup:
            anomalies.unknown_atoms.append(atom)

    by_state = {lookup[key]: value for key, value in entries.items() if key in lookup}
    anomalies.missing_states = [s for s in reference_query if s not in by_state]

    if anomalies.duplicate_conflicts:
        logger.debug(f"{anomalies.duplicate_conflicts} conflicting duplicate atoms, last one kept")
    return PredictionMap(entries=entries, by_state=by_state, anomalies=anomalies)


def parse_prediction(text: Optional[str], reference_query: Sequence[StateId], lexicon: Lexicon) -> PredictionMap:
    return normalize(extract_states(text), reference_query, lexicon)
