"""Marked groups, Cayley balls and explicit limit witnesses."""

__version__ = "0.1.0"

from .balls import BallCertificate, ball, balls_agree, first_divergence, girth, growth, relations_up_to
from .marked import GenerationError, MarkedGroup
from .parsing import parse_group
from .words import Word, parse_sentence, parse_word

__all__ = ["BallCertificate", "GenerationError", "MarkedGroup", "Word", "ball", "balls_agree",
           "first_divergence", "girth", "growth", "parse_group", "parse_sentence", "parse_word",
           "relations_up_to", "__version__"]
