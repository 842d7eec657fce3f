# Syntax Module
from app.syntax.parser import Equation, SourceProgram, desugar, parse, parse_term
from app.syntax.printer import print_term

__all__ = ["Equation", "SourceProgram", "desugar", "parse", "parse_term", "print_term"]
