# Syntax first; the execution models build on it
from app.models.syntax_model import Program
from app.models.term_model import Formula, LinearForm, Term
from app.models.state_model import Chunk, CState, SCState, SState
from app.models.outcome_model import Angelic, Demonic, IndexDomain, Msg, Single
from app.models.choice_model import ChoiceScript, ExhaustionPolicy

__all__ = [
    "Program",
    "Formula",
    "LinearForm",
    "Term",
    "Chunk",
    "CState",
    "SCState",
    "SState",
    "Angelic",
    "Demonic",
    "IndexDomain",
    "Msg",
    "Single",
    "ChoiceScript",
    "ExhaustionPolicy",
]
