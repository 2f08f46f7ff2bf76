from __future__ import annotations

import random

import pytest

from ucdoc.lexer import TokenKind, dedent_block, escape_string, lex


def kinds(source):
    tokens, errors = lex(source)
    assert errors == []
    return [t.kind for t in tokens]


def test_punctuation_and_words():
    tokens, errors = lex('usecase "T" { id: t-1 [x, 3a] (1) -> }')
    assert errors == []
    assert [t.kind for t in tokens] == [
        TokenKind.IDENT, TokenKind.STRING, TokenKind.LBRACE,
        TokenKind.IDENT, TokenKind.COLON, TokenKind.IDENT,
        TokenKind.LBRACKET, TokenKind.IDENT, TokenKind.COMMA,
        TokenKind.BRANCH, TokenKind.RBRACKET,
        TokenKind.LPAREN, TokenKind.INT, TokenKind.RPAREN,
        TokenKind.ARROW, TokenKind.RBRACE, TokenKind.EOF,
    ]


def test_comments_are_skipped():
    assert kinds("a # comment with " + '"' + " and { tokens\nb") == [
        TokenKind.IDENT, TokenKind.IDENT, TokenKind.EOF]


def test_arrow_survives_ident_rules():
    # '-' continues an identifier only when followed by alphanumerics,
    # so "a->b" must lex as ident, arrow, ident.
    tokens, errors = lex("a->b")
    assert errors == []
    assert [(t.kind, t.text) for t in tokens[:3]] == [
        (TokenKind.IDENT, "a"), (TokenKind.ARROW, "->"), (TokenKind.IDENT, "b")]


def test_dotted_idents():
    tokens, _ = lex("employment.monitor_performance")
    assert tokens[0].text == "employment.monitor_performance"
    # A trailing dot is not part of the identifier.
    tokens, errors = lex("abc.")
    assert tokens[0].text == "abc"
    assert errors and errors[0].code == "lex.invalid_char"


def test_int_vs_branch():
    tokens, _ = lex("12 3a 4a1")
    assert [(t.kind, t.text) for t in tokens[:3]] == [
        (TokenKind.INT, "12"), (TokenKind.BRANCH, "3a"),
        (TokenKind.BRANCH, "4a1")]
    assert tokens[0].value == 12


def test_string_escapes():
    tokens, errors = lex(r'"a\\b\"c\nd\te\rf"')
    assert errors == []
    assert tokens[0].value == 'a\\b"c\nd\te\rf'


def test_unknown_escape_is_reported():
    tokens, errors = lex(r'"a\qb"')
    assert [e.code for e in errors] == ["lex.bad_escape"]
    assert tokens[0].value == "aqb"


def test_unterminated_string():
    _, errors = lex('"abc\nnext')
    assert [e.code for e in errors] == ["lex.unterminated_string"]
    _, errors = lex('"abc')
    assert [e.code for e in errors] == ["lex.unterminated_string"]


def test_invalid_character():
    _, errors = lex("a = b")
    assert [e.code for e in errors] == ["lex.invalid_char"]
    assert "line 1, column 3" in errors[0].render()


def test_triple_quoted_raw():
    source = '"""\n    line one\n      indented\n\n    last\n    """'
    tokens, errors = lex(source)
    assert errors == []
    assert tokens[0].value == "line one\n  indented\n\nlast"


def test_triple_quoted_single_line():
    tokens, errors = lex('"""inline"""')
    assert errors == []
    assert tokens[0].value == "inline"


def test_triple_quoted_keeps_raw_backslashes():
    tokens, errors = lex('"""a\\nb"""')
    assert errors == []
    assert tokens[0].value == "a\\nb"


@pytest.mark.parametrize("content,expected", [
    ("x", "x"),
    ("\n  a\n  b\n  ", "a\nb"),
    ("\n  a\n\n  b\n", "a\n\nb"),
    ("a\nb", "a\nb"),
])
def test_dedent_block(content, expected):
    assert dedent_block(content) == expected


def test_escape_string_round_trip():
    rng = random.Random(20240817)
    alphabet = 'ab"\\\n\t\r #{}[]()->é情'
    for _ in range(300):
        value = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        tokens, errors = lex(escape_string(value))
        assert errors == []
        assert tokens[0].kind is TokenKind.STRING
        assert tokens[0].value == value


def test_positions():
    tokens, _ = lex("a\n  b")
    assert (tokens[0].span.line, tokens[0].span.column) == (1, 1)
    assert (tokens[1].span.line, tokens[1].span.column) == (2, 3)
