"""One-sided subshifts given by finite presentations.

Every presentation reduces to the same small interface: a finite set of tail
types (finite abstractions of points) and a ``step`` function giving the tail
type of ``a x`` from the tail type of ``x``. Language membership, left
extension sets and the atoms of the snapshot algebras are all derived from
that interface.
"""

import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .config import settings
from .errors import AtomLimitError, InputError

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
EMPTY: Word = ()


def shortlex(word: Word) -> Tuple[int, Word]:
    return (len(word), word)


@dataclass(frozen=True)
class Symbol:
    id: int
    display: str


class Alphabet:
    """Ordered table of printable symbol tokens."""

    def __init__(self, tokens: Sequence[str]) -> None:
        if not tokens:
            raise InputError("alphabet must not be empty")
        seen = set()
        for token in tokens:
            if token in seen:
                raise InputError(f"duplicate alphabet symbol {token!r}")
            seen.add(token)
        self.tokens: Tuple[str, ...] = tuple(tokens)
        self._index = {token: i for i, token in enumerate(self.tokens)}
        self._longest_first = sorted(self.tokens, key=len, reverse=True)

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(range(len(self.tokens)))

    def symbols(self) -> List[Symbol]:
        return [Symbol(i, token) for i, token in enumerate(self.tokens)]

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise InputError(f"symbol {token!r} is not in the alphabet") from None

    def parse_word(self, text: str) -> Word:
        """Split ``text`` into alphabet tokens, longest match first.

        ``ε`` and the empty string denote the empty word.
        """
        text = text.strip()
        if text in ("", "ε"):
            return EMPTY
        word: List[int] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            for token in self._longest_first:
                if text.startswith(token, pos):
                    word.append(self._index[token])
                    pos += len(token)
                    break
            else:
                raise InputError(f"foreign symbol at {text[pos:]!r} in word {text!r}")
        return tuple(word)

    def format_word(self, word: Word) -> str:
        if not word:
            return "ε"
        separator = "" if all(len(t) == 1 for t in self.tokens) else "."
        return separator.join(self.tokens[s] for s in word)

    def check_word(self, word: Iterable[int]) -> Word:
        word = tuple(word)
        for s in word:
            if not 0 <= s < len(self.tokens):
                raise InputError(f"symbol id {s} is outside the alphabet of size {len(self.tokens)}")
        return word


@dataclass(frozen=True)
class SftWindow:
    """The first M symbols of a point of a shift of finite type."""

    word: Word

    def sort_key(self) -> tuple:
        return (0, self.word)


@dataclass(frozen=True)
class SoficStateSet:
    """The set of graph states from which a point is readable."""

    states: FrozenSet[int]

    def sort_key(self) -> tuple:
        return (1, tuple(sorted(self.states)))


TailType = Union[SftWindow, SoficStateSet]


@dataclass(frozen=True)
class Indeterminate:
    """A window whose extensions do not all share one tail type."""

    window: Word
    candidates: Tuple[TailType, ...]
    current: Optional[TailType] = None


class Subshift(ABC):
    """Finitely presented one-sided subshift.

    Shifts compare by identity: operands built from two separate presentations
    never mix, even if the presentations describe the same set.
    """

    kind = "subshift"

    def __init__(self, name: str, alphabet: Alphabet) -> None:
        self.name = name
        self.alphabet = alphabet
        self._cache: Dict = {}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"

    @abstractmethod
    def step(self, t: TailType, a: int) -> Optional[TailType]:
        """Tail type of ``a x`` for ``x`` of type ``t``; None when ``a x`` is not a point."""

    @abstractmethod
    def _compute_realizable(self) -> List[TailType]:
        ...

    def describe_type(self, t: TailType) -> str:
        return repr(t)

    # derived operations

    def realizable_tail_types(self) -> Tuple[TailType, ...]:
        if "realizable" not in self._cache:
            types = sorted(self._compute_realizable(), key=lambda t: t.sort_key())
            logger.debug("%s: %d realizable tail types", self.name, len(types))
            self._cache["realizable"] = tuple(types)
        return self._cache["realizable"]

    def prepend(self, t: TailType, word: Word) -> Optional[TailType]:
        for a in reversed(word):
            t = self.step(t, a)
            if t is None:
                return None
        return t

    def admits(self, t: TailType, word: Word) -> bool:
        return self.prepend(t, word) is not None

    def left_extensions(self, t: TailType, length: int) -> Tuple[Word, ...]:
        """All words ``mu`` with ``|mu| <= length`` such that ``mu x`` is a point, shortlex ordered."""
        key = ("left", t, length)
        if key in self._cache:
            return self._cache[key]
        words: List[Word] = [EMPTY]
        frontier: List[Tuple[Word, TailType]] = [(EMPTY, t)]
        for _ in range(length):
            nxt: List[Tuple[Word, TailType]] = []
            for word, s in frontier:
                for a in self.alphabet:
                    r = self.step(s, a)
                    if r is not None:
                        nxt.append(((a, *word), r))
            frontier = nxt
            words.extend(w for w, _ in frontier)
        result = tuple(sorted(words, key=shortlex))
        self._cache[key] = result
        return result

    def exact_extensions(self, t: TailType, length: int) -> Tuple[Word, ...]:
        return tuple(w for w in self.left_extensions(t, length) if len(w) == length)

    def is_in_language(self, word: Word) -> bool:
        word = self.alphabet.check_word(word)
        return any(self.admits(t, word) for t in self.realizable_tail_types())

    def enumerate_language(self, k: int) -> Tuple[Word, ...]:
        if k < 0:
            raise InputError("word length must be non-negative")
        key = ("lang", k)
        if key not in self._cache:
            words = set()
            for t in self.realizable_tail_types():
                words.update(self.exact_extensions(t, k))
            self._cache[key] = tuple(sorted(words))
        return self._cache[key]

    def language_up_to(self, k: int) -> Tuple[Word, ...]:
        words: List[Word] = []
        for n in range(k + 1):
            words.extend(self.enumerate_language(n))
        return tuple(words)

    def tail_type_of_window(self, word: Word) -> Union[TailType, Indeterminate]:
        """Tail type shared by every point with prefix ``word``.

        For a shift of finite type the type is the window of the first M
        symbols of the point, which are the first M symbols of ``word`` when
        it is long enough: on the golden mean shift ``01`` gives window ``0``.

        When the points with this prefix have different tail types an
        ``Indeterminate`` listing all of them is returned instead.
        """
        word = self.alphabet.check_word(word)
        if not self.is_in_language(word):
            raise InputError(f"window {self.alphabet.format_word(word)} is not in the language of {self.name}")
        candidates = {self.prepend(t, word) for t in self.realizable_tail_types() if self.admits(t, word)}
        ordered = tuple(sorted(candidates, key=lambda t: t.sort_key()))
        if len(ordered) == 1:
            return ordered[0]
        logger.warning("%s: window %s does not determine its tail type yet", self.name, self.alphabet.format_word(word))
        return Indeterminate(window=word, candidates=ordered, current=self._window_hint(word))

    def _window_hint(self, word: Word) -> Optional[TailType]:
        return None


class ForbiddenWords(Subshift):
    """Shift of finite type given by a finite list of forbidden words."""

    kind = "forbidden"

    def __init__(self, name: str, alphabet: Alphabet, forbidden: Iterable[Word]) -> None:
        super().__init__(name, alphabet)
        words = []
        for word in forbidden:
            word = alphabet.check_word(word)
            if not word:
                raise InputError("forbidden words must be nonempty")
            words.append(word)
        self.forbidden: Tuple[Word, ...] = tuple(sorted(set(words), key=shortlex))
        self.memory = max((len(w) for w in self.forbidden), default=1) - 1
        self._forbidden_set = frozenset(self.forbidden)
        if not self.realizable_tail_types():
            raise InputError(f"shift {name} has no points")

    def has_forbidden_factor(self, word: Word) -> bool:
        n = len(word)
        return any(word[i:j] in self._forbidden_set for i in range(n) for j in range(i + 1, n + 1))

    def _has_forbidden_prefix(self, word: Word) -> bool:
        return any(word[:j] in self._forbidden_set for j in range(1, len(word) + 1))

    def step(self, t: SftWindow, a: int) -> Optional[SftWindow]:
        extended = (a, *t.word)
        if self._has_forbidden_prefix(extended):
            return None
        return SftWindow(extended[: self.memory])

    def window_graph(self) -> nx.DiGraph:
        """Graph on factor-free windows of length M; edges follow the shift."""
        graph = nx.DiGraph()
        m = self.memory
        windows = [w for w in product(range(len(self.alphabet)), repeat=m) if not self.has_forbidden_factor(w)]
        graph.add_nodes_from(windows)
        for u in windows:
            for a in self.alphabet:
                extended = (*u, a)
                if not self.has_forbidden_factor(extended):
                    graph.add_edge(u, extended[1:], label=a)
        return graph

    def _compute_realizable(self) -> List[SftWindow]:
        graph = self.window_graph()
        return [SftWindow(w) for w in _nodes_on_infinite_paths(graph)]

    def describe_type(self, t: SftWindow) -> str:
        return f"window {self.alphabet.format_word(t.word)}"


class VertexShift(ForbiddenWords):
    """Shift given by a 0/1 transition matrix on the alphabet, trimmed to its essential part."""

    kind = "matrix"

    def __init__(self, name: str, alphabet: Alphabet, matrix: Sequence[Sequence[int]]) -> None:
        n = len(alphabet)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise InputError(f"transition matrix must be {n}x{n}")
        if any(v not in (0, 1) for row in matrix for v in row):
            raise InputError("transition matrix entries must be 0 or 1")
        self.matrix: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in matrix)
        graph = nx.DiGraph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from((a, b) for a in range(n) for b in range(n) if matrix[a][b])
        kept = trim_to_essential(graph)
        if not kept:
            raise InputError(f"transition matrix of {name} has no essential part")
        self.essential_symbols: Tuple[int, ...] = tuple(sorted(kept))
        forbidden = [(a,) for a in range(n) if a not in kept]
        forbidden += [(a, b) for a in kept for b in kept if not matrix[a][b]]
        super().__init__(name, alphabet, forbidden)


class LabeledGraph(Subshift):
    """Sofic shift: label sequences of infinite paths in a finite labeled graph."""

    kind = "graph"

    def __init__(
        self,
        name: str,
        alphabet: Alphabet,
        states: Sequence[str],
        edges: Iterable[Tuple[str, int, str]],
    ) -> None:
        super().__init__(name, alphabet)
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(states)
        for source, label, target in edges:
            alphabet.check_word((label,))
            graph.add_edge(source, target, label=label)
        trim_to_essential(graph)
        if graph.number_of_nodes() == 0:
            raise InputError(f"graph of {name} has no essential part")
        self.graph = graph
        self.states: Tuple[str, ...] = tuple(s for s in states if s in graph)
        index = {s: i for i, s in enumerate(self.states)}
        # predecessors[a][q] = states p with an edge p -a-> q
        self._predecessors: Dict[int, Dict[int, FrozenSet[int]]] = {}
        self._relations: Dict[int, FrozenSet[Tuple[int, int]]] = {}
        for a in alphabet:
            pairs = {(index[p], index[q]) for p, q, label in graph.edges(data="label") if label == a}
            self._relations[a] = frozenset(pairs)
            table: Dict[int, set] = {}
            for p, q in pairs:
                table.setdefault(q, set()).add(p)
            self._predecessors[a] = {q: frozenset(ps) for q, ps in table.items()}

    def step(self, t: SoficStateSet, a: int) -> Optional[SoficStateSet]:
        table = self._predecessors[a]
        result = frozenset().union(*(table.get(q, frozenset()) for q in t.states))
        if not result:
            return None
        return SoficStateSet(result)

    def relation(self, word: Word) -> FrozenSet[Tuple[int, int]]:
        """Pairs ``(p, q)`` joined by a path labeled ``word``."""
        current = frozenset((i, i) for i in range(len(self.states)))
        for a in word:
            current = compose(current, self._relations[a])
        return current

    def relation_monoid(self) -> nx.DiGraph:
        """Cayley graph of the nonzero transition relations, grown from the identity."""
        if "monoid" in self._cache:
            return self._cache["monoid"]
        identity = frozenset((i, i) for i in range(len(self.states)))
        graph = nx.DiGraph()
        graph.add_node(identity)
        queue = deque([identity])
        while queue:
            r = queue.popleft()
            for a in self.alphabet:
                s = compose(r, self._relations[a])
                if not s:
                    continue
                if s not in graph:
                    if graph.number_of_nodes() >= settings.max_relations:
                        raise AtomLimitError(
                            f"transition relation monoid of {self.name} exceeds {settings.max_relations} elements"
                        )
                    graph.add_node(s)
                    queue.append(s)
                graph.add_edge(r, s, label=a)
        logger.debug("%s: relation monoid has %d nonzero elements", self.name, graph.number_of_nodes())
        self._cache["monoid"] = graph
        return graph

    def _compute_realizable(self) -> List[SoficStateSet]:
        # domains shrink along edges, so every cycle keeps one domain
        monoid = self.relation_monoid()
        types = set()
        for component in nx.strongly_connected_components(monoid):
            r = next(iter(component))
            if len(component) > 1 or monoid.has_edge(r, r):
                types.update(SoficStateSet(domain(s)) for s in component)
        return list(types)

    def _window_hint(self, word: Word) -> Optional[SoficStateSet]:
        return SoficStateSet(domain(self.relation(word)))

    def describe_type(self, t: SoficStateSet) -> str:
        return "states {" + ",".join(self.states[i] for i in sorted(t.states)) + "}"


def compose(r: FrozenSet[Tuple[int, int]], s: FrozenSet[Tuple[int, int]]) -> FrozenSet[Tuple[int, int]]:
    forward: Dict[int, List[int]] = {}
    for q, q2 in s:
        forward.setdefault(q, []).append(q2)
    return frozenset((p, q2) for p, q in r for q2 in forward.get(q, ()))


def domain(r: FrozenSet[Tuple[int, int]]) -> FrozenSet[int]:
    return frozenset(p for p, _ in r)


def trim_to_essential(graph: nx.DiGraph) -> set:
    """Remove stranded vertices in place until every vertex has an in- and out-edge."""
    while True:
        stranded = [v for v in graph if graph.in_degree(v) == 0 or graph.out_degree(v) == 0]
        if not stranded:
            return set(graph.nodes)
        graph.remove_nodes_from(stranded)


def _nodes_on_infinite_paths(graph: nx.DiGraph) -> List:
    cyclic = set()
    for component in nx.strongly_connected_components(graph):
        v = next(iter(component))
        if len(component) > 1 or graph.has_edge(v, v):
            cyclic.update(component)
    live = set(cyclic)
    for v in cyclic:
        live.update(nx.ancestors(graph, v))
    return sorted(live)
