"""Text rendering of chunks, states and symbolic terms for traces."""

from collections import Counter

from app.core.constants import POINTS_TO
from app.models.state_model import Chunk, CState, Heap, SState
from app.models.term_model import EqF, Formula, Lit, LtF, NotF, Sym, Term, TermAdd, TermSub


SymbolNames = dict[int, str]


def symbol_names(symbols: tuple[Sym, ...]) -> SymbolNames:
    """Display names from hints, primed on repeats in id order."""
    seen: Counter[str] = Counter()
    names: SymbolNames = {}
    for symbol in sorted(symbols, key=lambda s: s.id):
        base = symbol.hint or "s"
        names[symbol.id] = base + "'" * seen[base]
        seen[base] += 1
    return names


def render_value(value, names: SymbolNames | None = None) -> str:
    if isinstance(value, int):
        return str(value)
    return render_term(value, names or {})


def render_term(t: Term, names: SymbolNames) -> str:
    if isinstance(t, Lit):
        return str(t.value)
    if isinstance(t, Sym):
        return names.get(t.id, f"s{t.id}")
    operator = "+" if isinstance(t, TermAdd) else "-"
    right = render_term(t.right, names)
    if isinstance(t.right, (TermAdd, TermSub)):
        right = f"({right})"
    return f"{render_term(t.left, names)} {operator} {right}"


def render_formula(f: Formula, names: SymbolNames) -> str:
    if isinstance(f, NotF):
        if isinstance(f.operand, EqF):
            return f"{render_term(f.operand.left, names)} != {render_term(f.operand.right, names)}"
        return f"!({render_formula(f.operand, names)})"
    operator = "=" if isinstance(f, EqF) else "<"
    assert isinstance(f, (EqF, LtF))
    return f"{render_term(f.left, names)} {operator} {render_term(f.right, names)}"


def render_chunk(chunk: Chunk, names: SymbolNames | None = None) -> str:
    args = [render_value(a, names) for a in chunk.args]
    if chunk.predicate == POINTS_TO and len(args) == 2:
        return f"{args[0]} |-> {args[1]}"
    return f"{chunk.predicate}({', '.join(args)})"


def render_heap(heap: Heap, names: SymbolNames | None = None) -> str:
    if not heap:
        return "0"
    return "{[" + ", ".join(render_chunk(c, names) for c in heap) + "]}"


def render_concrete(step: str, state: CState) -> str:
    store = ", ".join(f"{name}:{value}" for name, value in state.store.items())
    return f"{step} | s: {{{store}}} | h: {render_heap(state.heap)}"


def render_symbolic(step: str, state: SState) -> str:
    used = state.used()
    names = symbol_names(used)
    facts = [names[s.id] for s in used]
    facts += [
        render_formula(f, names)
        for f in state.pc
        if not (isinstance(f, EqF) and isinstance(f.left, Sym) and f.left == f.right)
    ]
    store = ", ".join(f"{name}:{render_term(value, names)}" for name, value in state.store.items())
    return f"{step} | Φ:{{{', '.join(facts)}}} | s:{{{store}}} | h:{render_heap(state.heap, names)}"
