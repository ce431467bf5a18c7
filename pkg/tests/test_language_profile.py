import os

import pytest

from ctxspell.language_profile import (
    LanguageProfile,
    ProfileParseError,
    ProfileValidationError,
    is_digit,
    is_letter,
    is_letters_only,
    is_supported,
    load_profile,
    parse_profile,
    save_profile,
)

SHIPPED = ["en", "de", "fr", "es", "ru", "hi", "th"]


def test_english_profile(en_profile):
    """Basic Latin letters in both cases and ASCII digits."""
    assert en_profile.language_code == "en"
    assert len(en_profile.letters) == 52
    assert len(en_profile.digits) == 10
    assert en_profile.case_sensitive is True


def test_hindi_profile_has_no_case(profiles_dir):
    profile = load_profile(os.path.join(profiles_dir, "hi.profile"))
    assert profile.case_sensitive is False
    assert "क" in profile.letter_set
    assert "०" in profile.digit_set
    assert "।" in profile.terminators


@pytest.mark.parametrize("code", SHIPPED)
def test_shipped_profiles_load(profiles_dir, code):
    profile = load_profile(os.path.join(profiles_dir, f"{code}.profile"))
    assert profile.language_code == code
    assert not set(profile.letters) & set(profile.digits)


def test_is_supported(en_profile):
    assert is_supported(en_profile, "q")
    assert is_supported(en_profile, "7")
    assert not is_supported(en_profile, "!")
    assert not is_supported(en_profile, "ф")


def test_letter_and_digit_membership(en_profile):
    assert is_letter(en_profile, "Q")
    assert not is_letter(en_profile, "5")
    assert is_digit(en_profile, "5")
    assert is_letters_only(en_profile, "Hello")
    assert not is_letters_only(en_profile, "mp3")
    assert not is_letters_only(en_profile, "")


def test_letter_listed_as_digit_is_rejected():
    text = "language=xx\ncase_sensitive=false\nletters=a,b,c\ndigits=a,0\n"
    with pytest.raises(ProfileValidationError) as excinfo:
        parse_profile(text)
    assert excinfo.value.rule == "disjoint"


def test_punctuation_is_rejected():
    with pytest.raises(ProfileValidationError) as excinfo:
        parse_profile("language=xx\nletters=a,b,!\n")
    assert excinfo.value.rule == "no-whitespace-punctuation"


def test_missing_lowercase_is_rejected():
    with pytest.raises(ProfileValidationError) as excinfo:
        parse_profile("language=xx\ncase_sensitive=true\nletters=A,b\n")
    assert excinfo.value.rule == "case-closure"


def test_empty_letters_is_rejected():
    with pytest.raises(ProfileValidationError):
        LanguageProfile("xx", (), ("0",), False)


def test_parse_error_reports_line_number():
    text = "# comment\nlanguage=xx\nthis line is wrong\n"
    with pytest.raises(ProfileParseError) as excinfo:
        parse_profile(text)
    assert excinfo.value.line_number == 3


def test_unknown_key_is_a_parse_error():
    with pytest.raises(ProfileParseError):
        parse_profile("language=xx\nletters=abc\nalphabet=abc\n")


def test_literal_and_codepoint_items():
    profile = parse_profile("language=xx\nletters=U+00E9,ab,0063-0064\n")
    assert profile.letters == ("é", "a", "b", "c", "d")


@pytest.mark.parametrize("code", SHIPPED)
def test_save_then_load_keeps_inventory(tmp_path, profiles_dir, code):
    original = load_profile(os.path.join(profiles_dir, f"{code}.profile"))
    path = tmp_path / f"{code}.profile"
    save_profile(original, path)
    reloaded = load_profile(path)
    assert reloaded.letters == original.letters
    assert reloaded.digits == original.digits
    assert reloaded.terminators == original.terminators
    assert reloaded.case_sensitive == original.case_sensitive
