import pytest
from hypothesis import given, strategies as st

from visassist.intent import (
    CommandText,
    Intent,
    IntentKind,
    Unresolved,
    classify,
    extract_object_name,
    normalize_command,
    parse_command,
    resolve_phrase,
    tokenize,
)
from visassist.vocabulary import VOCABULARY_SIZE, AliasTable, ClassVocabulary

S, D, R, N, U = (IntentKind.SCENE, IntentKind.DISCOVERY, IntentKind.READ,
                 IntentKind.NEWS, IntentKind.UNKNOWN)


@pytest.mark.parametrize(
    "command,kind",
    [
        ("What is in front of me?", S),
        ("describe the room", S),
        ("What do you see", S),
        ("Where is my laptop?", D),
        ("where are the cups", D),
        ("Where's my phone", D),
        ("find the remote", D),
        ("Search for a bottle", D),
        ("Read this for me", R),
        ("what does the text say", R),
        ("Tell me the news", N),
        ("read the news", N),
        ("find the news", N),
        ("read what is in front of me", R),
        ("where is the text", R),
        ("find what is in front of me", D),
        ("hello there", U),
        ("", U),
        ("!!!", U),
        ("where", U),
        ("reading glasses", U),
        ("newspaper", U),
    ],
)
def test_cascade(command, kind):
    assert classify(normalize_command(command).tokens) is kind


def test_tokenize():
    assert tokenize("Where's my  CELL-phone?") == ("wheres", "my", "cellphone")
    assert tokenize("hair_drier") == ("hairdrier",)
    assert tokenize("") == ()


@given(st.text())
def test_tokenize_is_idempotent(text):
    once = tokenize(text)
    assert tokenize(" ".join(once)) == once


@given(st.text(max_size=60))
def test_parse_is_total_and_deterministic(text):
    vocab, aliases = ClassVocabulary.load(), AliasTable.load()
    a = parse_command(text, vocab, aliases)
    assert a == parse_command(text, vocab, aliases)
    assert (a.kind is D) == (a.object_name is not None)


@pytest.mark.parametrize(
    "command,expected",
    [
        ("where is my laptop", "laptop"),
        ("where is the cup", "cup"),
        ("where is my cellphone", "cell phone"),
        ("where is my cell phone", "cell phone"),
        ("find the remote control", "remote"),
        ("where is the chair", "chair"),
        ("where is the spoon", "spoon"),
        ("find my phone please", "cell phone"),
        ("search for bottle", "bottle"),
        ("find a teddy bear", "teddy bear"),
        ("wheres the TV", "tv"),
        ("where is the dog and the cat", "cat"),
        ("find laptop", "laptop"),
    ],
)
def test_object_names(vocab, aliases, command, expected):
    assert parse_command(command, vocab, aliases).object_name == expected


@pytest.mark.parametrize(
    "command,phrase",
    [
        ("can you find the extension box", "extension box"),
        ("where is the power strip", "power strip"),
        ("where is my unicorn", "unicorn"),
        ("where is", ""),
    ],
)
def test_unresolved_names(vocab, aliases, command, phrase):
    intent = parse_command(command, vocab, aliases)
    assert intent.object_name == Unresolved(phrase)
    assert not intent.resolved


def test_longest_span_wins(vocab, aliases):
    # "dining table" beats both "table" (alias) and nothing
    assert resolve_phrase(("big", "dining", "table"), vocab, aliases) == "dining table"
    assert resolve_phrase(("table",), vocab, aliases) == "dining table"
    # equal length: leftmost
    assert resolve_phrase(("cat", "dog"), vocab, aliases) == "cat"


def test_without_aliases_only_labels_resolve(vocab):
    assert parse_command("where is my cellphone", vocab).object_name == Unresolved("cellphone")
    assert parse_command("where is my cell phone", vocab).object_name == "cell phone"


def test_every_label_round_trips(vocab, aliases):
    assert len(vocab) == VOCABULARY_SIZE
    for label in vocab:
        for template in ("where is the {}", "find {}", "where are my {}?", "Search for {}"):
            intent = parse_command(template.format(label), vocab, aliases)
            assert intent == Intent(D, label), template.format(label)


def test_alias_targets_are_labels(vocab, aliases):
    assert aliases.unknown_targets(vocab) == []
    for phrase in aliases.mapping:
        assert parse_command(f"where is my {phrase}", vocab, aliases).object_name == aliases.get(phrase)


def test_non_discovery_intents_carry_no_object(vocab, aliases):
    for cmd in ("read this", "what is in front of me", "news", "blah"):
        assert parse_command(cmd, vocab, aliases).object_name is None


def test_intent_invariant():
    with pytest.raises(ValueError):
        Intent(D)
    with pytest.raises(ValueError):
        Intent(S, "cup")


def test_intent_to_dict():
    assert Intent(D, "cup").to_dict() == {"kind": "discovery", "object_name": "cup", "resolved": True}
    assert Intent(D, Unresolved("box")).to_dict() == {"kind": "discovery", "object_name": "box", "resolved": False}
    assert Intent(N).to_dict() == {"kind": "news"}


def test_accepts_prenormalized_command(vocab, aliases):
    cmd = normalize_command("Where is the CUP?")
    assert isinstance(cmd, CommandText) and cmd.text == "where is the cup"
    assert extract_object_name(cmd, vocab, aliases) == "cup"
    assert parse_command(cmd, vocab, aliases) == parse_command(cmd.raw, vocab, aliases)


def test_vocabulary_validation(tmp_path):
    with pytest.raises(ValueError):
        ClassVocabulary(tuple(f"l{i}" for i in range(79)))
    with pytest.raises(ValueError):
        ClassVocabulary(("cup",) * 80)
    path = tmp_path / "labels.txt"
    path.write_text("\n".join(f"thing {i}" for i in range(80)))
    custom = ClassVocabulary.load(path)
    assert parse_command("where is the thing 7", custom).object_name == "thing 7"
