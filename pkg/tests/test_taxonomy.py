import pytest

from cryptopulse.taxonomy import (
    AmbiguousLabelError,
    Label,
    TaskKind,
    UnknownLabelError,
    builtin_examples,
    canonical_string,
    labels_for,
    parse_label,
)


def test_exactly_three_task_kinds():
    assert [t.value for t in TaskKind] == ["prediction", "hope", "regret"]


def test_vocabulary_sizes_and_order():
    assert labels_for(TaskKind.PREDICTION) == [
        Label.PREDICTIVE_INCREMENTAL,
        Label.PREDICTIVE_DECREMENTAL,
        Label.PREDICTIVE_NEUTRAL,
        Label.NON_PREDICTIVE,
    ]
    assert labels_for(TaskKind.REGRET) == [
        Label.REGRET_BY_ACTION,
        Label.REGRET_BY_INACTION,
        Label.NO_REGRET,
    ]
    assert len(labels_for(TaskKind.HOPE)) == 4
    assert len(Label) == 11


def test_every_label_belongs_to_its_task_vocabulary():
    for label in Label:
        assert label in labels_for(label.task)


def test_canonical_strings():
    expected = {
        Label.PREDICTIVE_INCREMENTAL: "Predictive Incremental",
        Label.PREDICTIVE_DECREMENTAL: "Predictive Decremental",
        Label.PREDICTIVE_NEUTRAL: "Predictive Neutral",
        Label.NON_PREDICTIVE: "Non-Predictive",
        Label.GENERALIZED_HOPE: "Generalized Hope",
        Label.NOT_HOPE: "Not Hope",
        Label.REALISTIC_HOPE: "Realistic Hope",
        Label.UNREALISTIC_HOPE: "Unrealistic Hope",
        Label.REGRET_BY_ACTION: "Regret by Action",
        Label.REGRET_BY_INACTION: "Regret by Inaction",
        Label.NO_REGRET: "No Regret",
    }
    for label, surface in expected.items():
        assert canonical_string(label) == surface


def test_parse_round_trips_all_labels():
    for label in Label:
        assert parse_label(label.task, canonical_string(label)) is label


def test_parse_trims_strips_period_and_ignores_case():
    # "  regret by inaction.\n" -> trim -> strip one period -> casefold
    assert (
        parse_label(TaskKind.REGRET, "  regret by inaction.\n")
        is Label.REGRET_BY_INACTION
    )
    assert parse_label(TaskKind.PREDICTION, "NON-PREDICTIVE") is Label.NON_PREDICTIVE


def test_parse_decorated_responses_resolve_via_substring():
    assert parse_label(TaskKind.REGRET, "No Regret..") is Label.NO_REGRET
    assert (
        parse_label(TaskKind.PREDICTION, "The label is Non-Predictive.")
        is Label.NON_PREDICTIVE
    )


def test_parse_unknown_label():
    with pytest.raises(UnknownLabelError):
        parse_label(TaskKind.HOPE, "banana")


def test_parse_substring_fallback():
    assert (
        parse_label(TaskKind.HOPE, "Label: Realistic Hope")
        is Label.REALISTIC_HOPE
    )
    # Nested canonical ("Realistic Hope" inside "Unrealistic Hope") must
    # resolve to the longer match, not to an ambiguity.
    assert (
        parse_label(TaskKind.HOPE, "Label: Unrealistic Hope")
        is Label.UNREALISTIC_HOPE
    )


def test_parse_ambiguous_label():
    with pytest.raises(AmbiguousLabelError):
        parse_label(
            TaskKind.REGRET, "Regret by Action and Regret by Inaction"
        )


def test_parse_never_returns_label_outside_task():
    responses = [
        "Predictive Incremental", "Not Hope", "No Regret", "nonsense",
        "the answer is Regret by Action.", "Hope", "Generalized Hope!",
    ]
    for task in TaskKind:
        for response in responses:
            try:
                label = parse_label(task, response)
            except (UnknownLabelError, AmbiguousLabelError):
                continue
            assert label in labels_for(task)


def test_builtin_example_counts():
    # Four prediction table rows, one of which holds two sentences joined
    # by "or" and is stored as two examples.
    assert len(builtin_examples(TaskKind.PREDICTION)) == 5
    assert len(builtin_examples(TaskKind.REGRET)) == 3
    assert len(builtin_examples(TaskKind.HOPE)) == 4


def test_builtin_examples_verbatim_rows():
    prediction = builtin_examples(TaskKind.PREDICTION)
    assert prediction[0].comment_text == (
        "Profits are expected to double by the end of the year."
    )
    assert prediction[0].label is Label.PREDICTIVE_INCREMENTAL
    assert prediction[2].comment_text == (
        "The company expects revenue to remain consistent in the upcoming"
        " quarter."
    )
    assert prediction[3].comment_text == (
        "There is uncertainty regarding future market conditions."
    )
    assert prediction[2].label is Label.PREDICTIVE_NEUTRAL
    assert prediction[3].label is Label.PREDICTIVE_NEUTRAL

    regret = builtin_examples(TaskKind.REGRET)
    assert (
        regret[2].comment_text
        == "I'm glad I didn't invest in that coin, it's crashing."
    )
    assert regret[2].label is Label.NO_REGRET


def test_builtin_examples_self_consistent():
    for task in TaskKind:
        for example in builtin_examples(task):
            assert example.task is task
            assert example.label.task is task
            assert example.label in labels_for(task)
