from pathlib import Path

import pytest

from cryptopulse.prompting import SYSTEM_PROMPTS, build_prompt, interpret_response
from cryptopulse.taxonomy import (
    AmbiguousLabelError,
    Label,
    TaskKind,
    builtin_examples,
)

GOLDEN_DIR = Path(__file__).parent / "golden"

_GOLDEN_FILES = {
    TaskKind.PREDICTION: "system_prediction.txt",
    TaskKind.REGRET: "system_regret.txt",
    TaskKind.HOPE: "system_hope.txt",
}


def test_system_prompts_match_golden_files_byte_for_byte():
    for task, name in _GOLDEN_FILES.items():
        golden = (GOLDEN_DIR / name).read_text(encoding="utf-8")
        assert SYSTEM_PROMPTS[task] == golden


def test_build_prompt_system_text():
    prompt = build_prompt(TaskKind.PREDICTION, "anything")
    assert prompt.system_text == (
        "You are an assistant trained to categorize comments into"
        " Predictive Incremental, Predictive Decremental, Predictive"
        " Neutral, or Non-Predictive. Just give us one label per row."
    )


def test_build_prompt_turn_structure():
    prompt = build_prompt(TaskKind.HOPE, "some cleaned comment")
    # 4 hope examples as user/assistant pairs, then the target user turn.
    assert len(prompt.turns) == 2 * 4 + 1
    roles = [role for role, _ in prompt.turns]
    assert roles == ["user", "assistant"] * 4 + ["user"]
    examples = builtin_examples(TaskKind.HOPE)
    for i, example in enumerate(examples):
        assert prompt.turns[2 * i] == ("user", example.comment_text)
        assert prompt.turns[2 * i + 1] == ("assistant", example.label.value)
    assert prompt.turns[-1] == ("user", "some cleaned comment")


def test_build_prompt_prediction_has_five_example_pairs():
    prompt = build_prompt(TaskKind.PREDICTION, "x")
    assert len(prompt.turns) == 2 * 5 + 1


def test_build_prompt_passes_target_through():
    assert build_prompt(TaskKind.REGRET, "x y z").turns[-1] == ("user", "x y z")


def test_build_prompt_rejects_empty_target():
    with pytest.raises(ValueError):
        build_prompt(TaskKind.REGRET, "")


def test_build_prompt_is_deterministic():
    a = build_prompt(TaskKind.HOPE, "same text")
    b = build_prompt(TaskKind.HOPE, "same text")
    assert a == b


def test_as_chat_wire_shape():
    messages = build_prompt(TaskKind.REGRET, "target").as_chat()
    assert messages[0] == {
        "role": "system",
        "content": SYSTEM_PROMPTS[TaskKind.REGRET],
    }
    assert messages[-1] == {"role": "user", "content": "target"}
    assert all(set(m) == {"role", "content"} for m in messages)


def test_interpret_response():
    assert (
        interpret_response(TaskKind.PREDICTION, "Non-Predictive")
        is Label.NON_PREDICTIVE
    )
    assert (
        interpret_response(TaskKind.HOPE, "Label: Realistic Hope")
        is Label.REALISTIC_HOPE
    )
    with pytest.raises(AmbiguousLabelError):
        interpret_response(
            TaskKind.REGRET, "Regret by Action and Regret by Inaction"
        )
