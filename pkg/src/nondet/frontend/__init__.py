"""Text formats and the command line tool."""

from .errors import FrontendError, ParseError, SemanticError, UnknownNameError
from .lang import (
    Program,
    compile_program,
    format_predicate,
    format_program,
    parse_predicate,
    parse_program,
    predicate_set,
    program_to_quilt,
)
from .structure import format_structure, parse_structure
from .varspace import VarSpace
