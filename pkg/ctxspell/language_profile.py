"""
Language profiles

A profile lists the characters a language is written with: letters (both cases
where the script has case), digits, and optional extra sentence terminators.
Profiles are plain-text data files so that a new language needs no code change.

File format (UTF-8, one key=value per line, '#' starts a comment):

    language=en
    case_sensitive=true
    letters=0061-007A,0041-005A
    digits=0030-0039
    terminators=U+3002

Items inside a value are comma separated. An item is either a codepoint range
(`0061-007A` or `U+0061-U+007A`), a single codepoint (`U+00E9`), or literal
characters (`àâæç`).
"""

import logging
import re
import unicodedata
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

logger = logging.getLogger(__name__)

_RANGE_RE = re.compile(r"^(?:U\+)?([0-9A-Fa-f]{4,6})-(?:U\+)?([0-9A-Fa-f]{4,6})$")
_CODEPOINT_RE = re.compile(r"^U\+([0-9A-Fa-f]{4,6})$")
_KNOWN_KEYS = ("language", "case_sensitive", "letters", "digits", "terminators")

# Unicode White_Space property (PropList.txt); str.isspace also accepts U+001C-U+001F
WHITE_SPACE = frozenset(
    "\u0009\u000a\u000b\u000c\u000d\u0020\u0085\u00a0\u1680"
    "\u2000\u2001\u2002\u2003\u2004\u2005\u2006\u2007\u2008\u2009\u200a"
    "\u2028\u2029\u202f\u205f\u3000"
)


class ProfileError(ValueError):
    """Base class for profile loading problems."""


class ProfileParseError(ProfileError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ProfileValidationError(ProfileError):
    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


def _is_punctuation(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


@dataclass(frozen=True)
class LanguageProfile:
    language_code: str
    letters: Tuple[str, ...]
    digits: Tuple[str, ...]
    case_sensitive: bool
    terminators: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        validate_profile(self)

    @cached_property
    def letter_set(self) -> frozenset:
        return frozenset(self.letters)

    @cached_property
    def digit_set(self) -> frozenset:
        return frozenset(self.digits)

    @cached_property
    def supported_set(self) -> frozenset:
        return self.letter_set | self.digit_set

    @cached_property
    def run_pattern(self) -> "re.Pattern[str]":
        """Regex matching a maximal run of supported characters."""
        chars = "".join(re.escape(ch) for ch in self.letters + self.digits)
        return re.compile(f"[{chars}]+")


def validate_profile(profile: LanguageProfile) -> None:
    """Raise ProfileValidationError naming the first violated rule."""
    if not profile.language_code:
        raise ProfileValidationError("language-code", "language code is empty")
    if not profile.letters:
        raise ProfileValidationError("letters-nonempty", "letters set is empty")

    overlap = set(profile.letters) & set(profile.digits)
    if overlap:
        shown = ", ".join(sorted(repr(ch) for ch in overlap)[:5])
        raise ProfileValidationError("disjoint", f"characters listed as both letter and digit: {shown}")

    for ch in profile.letters + profile.digits:
        if ch in WHITE_SPACE or _is_punctuation(ch):
            raise ProfileValidationError(
                "no-whitespace-punctuation",
                f"U+{ord(ch):04X} {unicodedata.name(ch, '?')} is whitespace or punctuation",
            )

    if profile.case_sensitive:
        letter_set = set(profile.letters)
        for ch in profile.letters:
            if ch.isupper():
                lower = ch.lower()
                if len(lower) == 1 and lower not in letter_set:
                    raise ProfileValidationError(
                        "case-closure",
                        f"uppercase U+{ord(ch):04X} has lowercase U+{ord(lower):04X} missing from letters",
                    )


def _dedupe(chars: Iterable[str]) -> Tuple[str, ...]:
    return tuple(dict.fromkeys(chars))


def parse_char_items(value: str, line_number: int = 0) -> List[str]:
    """Expand a comma separated list of ranges, codepoints and literal chars."""
    chars: List[str] = []
    for raw_item in value.split(","):
        item = raw_item.strip()
        if not item:
            continue
        range_match = _RANGE_RE.match(item)
        if range_match:
            start, end = (int(group, 16) for group in range_match.groups())
            if start > end:
                raise ProfileParseError(line_number, f"range {item!r} is reversed")
            chars.extend(chr(cp) for cp in range(start, end + 1))
            continue
        codepoint_match = _CODEPOINT_RE.match(item)
        if codepoint_match:
            chars.append(chr(int(codepoint_match.group(1), 16)))
            continue
        chars.extend(item)
    return chars


def parse_profile(text: str, source: str = "<string>") -> LanguageProfile:
    values: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ProfileParseError(line_number, f"expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        if key not in _KNOWN_KEYS:
            raise ProfileParseError(line_number, f"unknown key {key!r}")
        if key in values:
            raise ProfileParseError(line_number, f"duplicate key {key!r}")
        values[key] = value.strip()
        lines[key] = line_number

    for required in ("language", "letters"):
        if required not in values:
            raise ProfileParseError(0, f"missing required key {required!r} in {source}")

    case_raw = values.get("case_sensitive", "false").lower()
    if case_raw not in ("true", "false"):
        raise ProfileParseError(lines.get("case_sensitive", 0), f"case_sensitive must be true or false, got {case_raw!r}")

    return LanguageProfile(
        language_code=values["language"],
        letters=_dedupe(parse_char_items(values["letters"], lines["letters"])),
        digits=_dedupe(parse_char_items(values.get("digits", ""), lines.get("digits", 0))),
        case_sensitive=case_raw == "true",
        terminators=_dedupe(parse_char_items(values.get("terminators", ""), lines.get("terminators", 0))),
    )


def load_profile(path: Union[str, Path]) -> LanguageProfile:
    path = Path(path)
    profile = parse_profile(path.read_text(encoding="utf-8"), source=str(path))
    logger.debug(
        "profile loaded language=%s letters=%d digits=%d",
        profile.language_code, len(profile.letters), len(profile.digits),
    )
    return profile


def _format_items(chars: Tuple[str, ...]) -> str:
    """Collapse runs of consecutive codepoints into ranges, keeping order."""
    items: List[str] = []
    i = 0
    while i < len(chars):
        j = i
        while j + 1 < len(chars) and ord(chars[j + 1]) == ord(chars[j]) + 1:
            j += 1
        if j > i:
            items.append(f"{ord(chars[i]):04X}-{ord(chars[j]):04X}")
        else:
            items.append(f"U+{ord(chars[i]):04X}")
        i = j + 1
    return ",".join(items)


def save_profile(profile: LanguageProfile, path: Union[str, Path]) -> None:
    lines = [
        f"language={profile.language_code}",
        f"case_sensitive={'true' if profile.case_sensitive else 'false'}",
        f"letters={_format_items(profile.letters)}",
        f"digits={_format_items(profile.digits)}",
    ]
    if profile.terminators:
        lines.append(f"terminators={_format_items(profile.terminators)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def is_supported(profile: LanguageProfile, ch: str) -> bool:
    return ch in profile.supported_set


def is_letter(profile: LanguageProfile, ch: str) -> bool:
    return ch in profile.letter_set


def is_digit(profile: LanguageProfile, ch: str) -> bool:
    return ch in profile.digit_set


def is_letters_only(profile: LanguageProfile, text: str) -> bool:
    letters = profile.letter_set
    return bool(text) and all(ch in letters for ch in text)
