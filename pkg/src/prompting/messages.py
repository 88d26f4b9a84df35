"""
Chat Message Assembly
Turns a PromptBundle into the traditional or the faked multi-round message list
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List

from .renderer import SYSTEM_MESSAGE, PromptBundle


class RenderStyle(str, Enum):
    TRADITIONAL = "traditional"
    FAKED_MULTI_ROUND = "faked"


class Role(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True)
class ChatMessage:
    role: Role
    content: str

    def to_dict(self) -> dict:
        return {"role": self.role.value, "content": self.content}

    @classmethod
    def from_dict(cls, data: dict) -> "ChatMessage":
        return cls(role=Role(data["role"]), content=data["content"])


MessageList = List[ChatMessage]


def assemble(bundle: PromptBundle, style: RenderStyle) -> MessageList:
    """
    Build the chat message list for one query

    Args:
        bundle: Rendered prompt parts
        style: TRADITIONAL (one user message) or FAKED_MULTI_ROUND
            (demo answers attributed to the assistant)

    Returns:
        List of ChatMessage starting with the system message
    """
    messages = [ChatMessage(Role.SYSTEM, SYSTEM_MESSAGE)]
    test_lines = list(bundle.bare_steps) + [bundle.test_step, bundle.test_question]

    if style is RenderStyle.TRADITIONAL:
        lines = [bundle.instruction]
        for block in bundle.demo_blocks:
            lines += [block.step_text, block.question_text, block.answer_text]
        lines += test_lines
        messages.append(ChatMessage(Role.USER, "\n".join(lines)))
        return messages

    messages.append(ChatMessage(Role.USER, bundle.instruction))
    for block in bundle.demo_blocks:
        messages.append(ChatMessage(Role.USER, f"{block.step_text}\n{block.question_text}"))
        messages.append(ChatMessage(Role.ASSISTANT, block.answer_text))
    messages.append(ChatMessage(Role.USER, "\n".join(test_lines)))
    return messages


def messages_to_dicts(messages: Iterable[ChatMessage]) -> List[dict]:
    return [message.to_dict() for message in messages]


def messages_from_dicts(items: Iterable[dict]) -> MessageList:
    return [ChatMessage.from_dict(item) for item in items]
