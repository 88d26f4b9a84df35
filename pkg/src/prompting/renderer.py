"""
Prompt Rendering Module
Renders instructions, steps, queries and answers in the environment's text format
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ..environment.genesis import InstructionVariant, Lexicon
from ..environment.state_machine import (
    EnvConfig,
    GroundState,
    StateId,
    StateKind,
    StepAction,
    apply_step,
    enumerate_states,
    query_order,
)

SYSTEM_MESSAGE = "You are a helpful assistant."
STEP_ZERO_TEXT = "Step-0: Initialization. Do nothing."
QUESTION_PREFIX = "Question: "
ANSWER_PREFIX = "Answer: "

QUEST_PREAMBLE = (
    "Instructions: As an agent, you need to find the way to go out of this quest. "
    "Currently, there are several boxes in front of you and there is a key inside each box. "
    "You can use only one of these keys to open the door and finish this quest."
)


@dataclass(frozen=True)
class AnswerAtom:
    """One rendered state assignment F(prefix-i)=Token"""
    state_id: StateId
    functor: str
    argument: str
    token: str

    @property
    def truth(self) -> bool:
        # rendered-token space: compared against parsed tokens as-is
        return self.token == "True"

    def render(self) -> str:
        return f"{self.functor}({self.argument})={self.token}"


@dataclass(frozen=True)
class DemoBlock:
    step_text: str
    question_text: str
    answer_text: str


@dataclass(frozen=True)
class PromptBundle:
    instruction: str
    demo_blocks: Tuple[DemoBlock, ...]
    bare_steps: Tuple[str, ...]
    test_step: str
    test_question: str


def render_truth(value: bool, variant: InstructionVariant) -> str:
    """Truth literal for a state value; counterintuitive variants flip it"""
    if variant.flips_truth:
        value = not value
    return "True" if value else "False"


def _atom(lexicon: Lexicon, state_id: StateId, token: str) -> str:
    return f"{lexicon.functor_for(state_id.kind)}({lexicon.argument(state_id)})={token}"


def render_instruction(lexicon: Lexicon, variant: InstructionVariant, env: EnvConfig) -> str:
    """
    Render the instruction block

    Args:
        lexicon: Surface tokens of the instance
        variant: Normal or one of the counterintuitive variants
        env: Environment size

    Returns:
        Instruction text
    """
    box = StateId(StateKind.BOX, min(3, env.num_boxes - 1))
    key = StateId(StateKind.KEY, min(1, env.num_keys - 1))
    box_arg = lexicon.argument(box)
    key_arg = lexicon.argument(key)

    parts = [QUEST_PREAMBLE, f"There are {env.num_boxes} boxes and {env.num_keys} keys here."]
    if lexicon.mode.is_synthetic:
        parts.append(f"Boxes are identified as {lexicon.box_prefix}-X and "
                     f"Keys are identified as {lexicon.key_prefix}-X.")

    if variant is InstructionVariant.COUNTER_LANGUAGE_INSTRUCTION:
        # literals keep their usual place, the prose carries the negation
        parts += [
            f"{_atom(lexicon, box, 'True')} means that {box_arg} has Not been opened.",
            f"{_atom(lexicon, key, 'True')} means that {key_arg} has Not been obtained.",
            f"{_atom(lexicon, box, 'False')} means that {box_arg} has been opened.",
            f"{_atom(lexicon, key, 'False')} means that {key_arg} has been obtained.",
        ]
    else:
        held = render_truth(True, variant)
        not_held = render_truth(False, variant)
        parts += [
            f"{_atom(lexicon, box, held)} means that {box_arg} has been opened.",
            f"{_atom(lexicon, key, held)} means that {key_arg} has been obtained.",
            f"{_atom(lexicon, box, not_held)} means that {box_arg} has not been opened.",
            f"{_atom(lexicon, key, not_held)} means that {key_arg} has not been obtained.",
        ]
    return " ".join(parts)


def render_step(step_index: int, action: Optional[StepAction], lexicon: Optional[Lexicon],
                distractor: Optional[str] = None) -> str:
    """
    Render one step line

    Args:
        step_index: 0 for initialization, otherwise the 1-based step number
        action: Step action (ignored for step 0)
        lexicon: Surface tokens (ignored for step 0)
        distractor: Optional sentence appended after the action

    Returns:
        Step text
    """
    if step_index == 0:
        return STEP_ZERO_TEXT
    text = (f"Step-{step_index}: Open {lexicon.box_prefix}-{action.box} "
            f"and retrieve {lexicon.key_prefix}-{action.key}.")
    if distractor:
        text = f"{text} {distractor}"
    return text


def render_query(env: EnvConfig, lexicon: Lexicon) -> str:
    atoms = [_atom(lexicon, state_id, "?") for state_id in query_order(env)]
    return QUESTION_PREFIX + " ".join(atoms)


def expected_atoms(state: GroundState, env: EnvConfig, lexicon: Lexicon,
                   variant: InstructionVariant) -> List[AnswerAtom]:
    """Rendered expectation for every queried state, in query order"""
    return [
        AnswerAtom(
            state_id=state_id,
            functor=lexicon.functor_for(state_id.kind),
            argument=lexicon.argument(state_id),
            token=render_truth(value, variant),
        )
        for state_id, value in enumerate_states(state, env)
    ]


def render_answer(state: GroundState, env: EnvConfig, lexicon: Lexicon,
                  variant: InstructionVariant) -> str:
    atoms = expected_atoms(state, env, lexicon, variant)
    return ANSWER_PREFIX + ", ".join(atom.render() for atom in atoms)


def compose_bundle(env: EnvConfig, lexicon: Lexicon, variant: InstructionVariant,
                   steps: Sequence[StepAction], start_state: GroundState,
                   demo_count: int, query_step: int,
                   distractors: Optional[Sequence[str]] = None) -> PromptBundle:
    """
    Lay out one prompt: Step-0 and demo_count answered steps, bare steps, test step

    Args:
        env: Environment config
        lexicon: Surface tokens
        variant: Instruction variant (demo answers use its truth rendering)
        steps: Step actions, numbered from 1
        start_state: State rendered as the Step-0 answer
        demo_count: Answered steps after Step-0
        query_step: Step number that carries the test question
        distractors: One sentence per step, or None

    Returns:
        PromptBundle
    """
    if not 1 <= query_step <= len(steps):
        raise ValueError(f"query_step {query_step} outside [1, {len(steps)}]")
    if not 0 <= demo_count < query_step:
        raise ValueError(f"demo_count {demo_count} must be in [0, {query_step - 1}]")

    def distractor_for(index):
        return distractors[index - 1] if distractors else None

    question = render_query(env, lexicon)
    state = start_state
    demo_blocks = [DemoBlock(STEP_ZERO_TEXT, question, render_answer(state, env, lexicon, variant))]
    for index in range(1, demo_count + 1):
        state = apply_step(state, steps[index - 1])
        demo_blocks.append(DemoBlock(
            render_step(index, steps[index - 1], lexicon, distractor_for(index)),
            question,
            render_answer(state, env, lexicon, variant),
        ))

    bare_steps = tuple(
        render_step(index, steps[index - 1], lexicon, distractor_for(index))
        for index in range(demo_count + 1, query_step)
    )

    return PromptBundle(
        instruction=render_instruction(lexicon, variant, env),
        demo_blocks=tuple(demo_blocks),
        bare_steps=bare_steps,
        test_step=render_step(query_step, steps[query_step - 1], lexicon, distractor_for(query_step)),
        test_question=question,
    )
