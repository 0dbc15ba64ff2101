"""Few-shot chat prompt construction and response interpretation.

Each task has one fixed system instruction (byte-frozen below) and its
built-in examples are delivered as alternating user/assistant turns, which
makes the expected output format unambiguous to a chat model. The target
comment goes last, as a user turn, in cleaned form.
"""
from __future__ import annotations

from dataclasses import dataclass

from .taxonomy import Label, TaskKind, builtin_examples, parse_label

SYSTEM_PROMPTS: dict[TaskKind, str] = {
    TaskKind.PREDICTION: (
        "You are an assistant trained to categorize comments into"
        " Predictive Incremental, Predictive Decremental, Predictive"
        " Neutral, or Non-Predictive. Just give us one label per row."
    ),
    TaskKind.REGRET: (
        "You are an assistant trained to categorize comments about"
        " cryptocurrencies into three types of regret. Just give us one"
        " label per row: Regret by Action, Regret by Inaction, and No"
        " Regret."
    ),
    TaskKind.HOPE: (
        "You are an assistant trained to categorize comments about"
        " cryptocurrencies into four types of hope. Just give us one label"
        " per row: Generalized Hope, Not Hope, Realistic Hope, and"
        " Unrealistic Hope."
    ),
}


@dataclass(frozen=True)
class PromptMessages:
    system_text: str
    turns: tuple[tuple[str, str], ...]  # (role, content)

    def as_chat(self) -> list[dict[str, str]]:
        """Wire-format message list for a chat-completions request."""
        messages = [{"role": "system", "content": self.system_text}]
        messages.extend(
            {"role": role, "content": content} for role, content in self.turns
        )
        return messages


def build_prompt(task: TaskKind, clean_text: str) -> PromptMessages:
    """Assemble the few-shot prompt for one cleaned comment."""
    if not clean_text:
        raise ValueError("clean_text must be non-empty")
    turns: list[tuple[str, str]] = []
    for example in builtin_examples(task):
        turns.append(("user", example.comment_text))
        turns.append(("assistant", example.label.value))
    turns.append(("user", clean_text))
    return PromptMessages(
        system_text=SYSTEM_PROMPTS[task], turns=tuple(turns)
    )


def interpret_response(task: TaskKind, response_text: str) -> Label:
    """Parse a model response into a vocabulary label.

    Propagates UnknownLabelError / AmbiguousLabelError from parse_label.
    """
    return parse_label(task, response_text)
