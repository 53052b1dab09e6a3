"""Part-of-speech tag inventory shared by the lexicon and the shallow NLP stage."""

from enum import Enum


class PosTag(Enum):
    WhQ = "Wh-Q"
    Aux = "Aux"
    Noun = "Noun"
    Verb = "Verb"
    Adjective = "Adjective"
    Adverb = "Adverb"
    Det = "Det"
    Prep = "Prep"
    Pron = "Pron"
    Punct = "Punct"
    Unknown = "Unknown"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: str) -> "PosTag":
        """Accept the display value ("Wh-Q"), the member name ("WhQ"), or "IN" for Prep."""
        text = text.strip()
        if text == "IN":
            return cls.Prep
        try:
            return cls(text)
        except ValueError:
            pass
        try:
            return cls[text]
        except KeyError:
            raise ValueError(f"unknown part-of-speech tag {text!r}") from None


CONTENT_TAGS = frozenset({PosTag.Noun, PosTag.Verb, PosTag.Adjective, PosTag.Adverb})
