"""
Profile-driven tokenizer.

Maximal runs of supported characters become word or number tokens. Every other
non-whitespace codepoint becomes a token of its own: punctuation is kind
"other", anything else is kind "foreign". Whitespace only separates.
"""

import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import List

from ctxspell.language_profile import WHITE_SPACE, LanguageProfile


class TokenKind(str, Enum):
    WORD = "word"
    NUMBER = "number"
    FOREIGN = "foreign"
    OTHER = "other"


@dataclass(frozen=True)
class Token:
    text: str
    kind: TokenKind
    char_start: int
    char_len: int

    @property
    def char_end(self) -> int:
        return self.char_start + self.char_len


def _single_char_kind(ch: str) -> TokenKind:
    if unicodedata.category(ch).startswith("P"):
        return TokenKind.OTHER
    return TokenKind.FOREIGN


def _emit_gap(text: str, start: int, end: int, tokens: List[Token]) -> None:
    for pos in range(start, end):
        ch = text[pos]
        if ch in WHITE_SPACE:
            continue
        tokens.append(Token(ch, _single_char_kind(ch), pos, 1))


def tokenize(text: str, profile: LanguageProfile) -> List[Token]:
    tokens: List[Token] = []
    digits = profile.digit_set
    cursor = 0
    for match in profile.run_pattern.finditer(text):
        _emit_gap(text, cursor, match.start(), tokens)
        run = match.group()
        kind = TokenKind.NUMBER if all(ch in digits for ch in run) else TokenKind.WORD
        tokens.append(Token(run, kind, match.start(), len(run)))
        cursor = match.end()
    _emit_gap(text, cursor, len(text), tokens)
    return tokens


def word_texts(tokens: List[Token]) -> List[str]:
    """Texts of word and number tokens, the units n-gram statistics are kept over."""
    return [token.text for token in tokens if token.kind in (TokenKind.WORD, TokenKind.NUMBER)]
