"""
Bounded mechanical checks of the word and path facts the undirected
encoding relies on, plus the one-letter criterion and the approximate-Dyck
characterizations. Every suite returns a SuiteReport; none of them raises
on a failed check.
"""
import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from cfl_reach import solve_dyck
from constants import DEFAULT_SEED, LEMMA3_PATH_LENGTH, LEMMA5_WORD_LENGTH, \
    LEMMA7_SAMPLE, LEMMA_SOURCE_SAMPLE, LEMMA_SUITE_BUDGET, \
    LEMMA_SUITE_EXPANSIONS, LEMMA_SUITE_PATHS, LEMMA_VARPI_LENGTH, \
    PROP1_MAX_VERTICES, PROP1_RANDOM_SAMPLES, Q_VALIDATE_LENGTH
from errors import DecompositionError
from graph_model import Alphabet, Edge, Instance, LabeledGraph, Word
from one_letter import ParityIndex, prop1_check
from oracle import EnumerationBudget, NominalTag, dyck_paths, \
    is_dyck_factor, is_dyck_prefix, is_dyck_word, iter_words, \
    nominal_tag_of, nominal_walks, path_label
from reductions import CompiledReduction, compile_dyck2_to_undirected
from regular import LETTERS, ONE_BAR, ONE_ZERO_VARPI_PLUS, VARPI, \
    VARPI_MINUS_ZERO_ONE_BAR, ONE, ZERO, ZERO_BAR, automaton, segment_shape
from util import candidate_edges, random_dyck_instance
from word_lab import format_bits, in_Q, in_Q_init, is_dyck, mu, \
    nominal_decompose, reduce

logger = logging.getLogger(__name__)

DYCK2 = Alphabet.dyck(2)


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    violations: List[str] = field(default_factory=list)
    truncated: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def check(self, ok: bool, describe: Callable[[], str]) -> None:
        """
        Count one check and keep a description of it when it failed.
        """
        self.checked += 1
        if not ok:
            self.violations.append(describe())


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = DEFAULT_SEED
    budget: EnumerationBudget = EnumerationBudget(LEMMA_SUITE_BUDGET,
                                                  LEMMA_SUITE_PATHS,
                                                  LEMMA_SUITE_EXPANSIONS)
    sample: int = LEMMA7_SAMPLE
    prop1_samples: int = PROP1_RANDOM_SAMPLES
    word_length: Optional[int] = None
    sources: Optional[Tuple[Instance, ...]] = None


def small_sources(max_edges: int = 2) -> List[Instance]:
    """
    :return: every directed dyck(2) graph on two vertices with at most
            max_edges edges, marked 0 -> 1
    """
    candidates = candidate_edges(2, DYCK2, True)
    out = []
    for k in range(max_edges + 1):
        for edges in itertools.combinations(candidates, k):
            out.append(Instance(LabeledGraph(True, 2, DYCK2, edges), 0, 1))
    return out


def lemma_sources(rng: random.Random,
                  sample: int = LEMMA_SOURCE_SAMPLE) -> List[Instance]:
    return small_sources() + [random_dyck_instance(rng, 3, 2, density=0.15)
                              for _ in range(sample)]


def _compiled(config: SuiteConfig, rng: random.Random) \
        -> Iterator[CompiledReduction]:
    sources = config.sources
    if sources is None:
        sources = lemma_sources(rng)
    for source in sources:
        yield compile_dyck2_to_undirected(source)


class NominalCatalog(object):
    """
    The approximate-Dyck nominal paths of one compiled undirected gadget
    graph, grouped by tag. Paths fitting no tag are kept apart.
    """

    def __init__(self, red: CompiledReduction, budget: EnumerationBudget):
        self._by_tag = {}
        self.strays = []
        self.truncated = 0
        for x in range(red.source.graph.vertex_count):
            walks = nominal_walks(red, x, budget)
            self.truncated += walks.truncated
            for walk in walks.paths:
                tag = nominal_tag_of(red, walk)
                if tag is None:
                    self.strays.append(walk)
                else:
                    self._by_tag.setdefault(tag, []).append(walk)

    def tags(self) -> List[NominalTag]:
        return list(self._by_tag)

    def paths(self, tag: NominalTag) -> List[Tuple[Edge, ...]]:
        return self._by_tag.get(tag, [])

    def labels(self, tag: NominalTag) -> List[Word]:
        return [path_label(p) for p in self.paths(tag)]


def _varpi_words(length: int = LEMMA_VARPI_LENGTH) -> List[Word]:
    return list(automaton(VARPI).words(length))


def suite_q_validate(config: SuiteConfig) -> SuiteReport:
    """
    Compare the reduced-shape tests for Dyck words, their prefixes and
    their factors with direct stack scans, on every four-letter word up to
    the configured length.
    """
    report = SuiteReport("q-validate")
    length = config.word_length or Q_VALIDATE_LENGTH
    for w in iter_words(LETTERS, length):
        pairs = ((in_Q(w), is_dyck_factor(w), "Q"),
                 (in_Q_init(w), is_dyck_prefix(w), "Q_init"),
                 (is_dyck(w), is_dyck_word(w), "Dyck"))
        for fast, brute, name in pairs:
            report.check(fast == brute, lambda: "{}: '{}' characterized {} "
                         "but scanned {}".format(name, format_bits(w), fast,
                                                 brute))
    logger.info("q-validate: %d checks up to length %d", report.checked,
                length)
    return report


def suite_lemma5(config: SuiteConfig) -> SuiteReport:
    """
    Prefixing 1 0 to a varpi word, or appending 0bar 1bar, and landing in
    Q leaves a reduced word of the shape 1 0 varpi+, or varpi- 0bar 1bar.
    """
    report = SuiteReport("lemma5")
    length = config.word_length or LEMMA5_WORD_LENGTH
    plus = automaton(ONE_ZERO_VARPI_PLUS)
    minus = automaton(VARPI_MINUS_ZERO_ONE_BAR)
    for rho in automaton(VARPI).words(length):
        head = (ONE, ZERO) + rho
        if in_Q(head):
            report.check(plus.accepts(reduce(head)), lambda: "1 0 . '{}' "
                         "reduces outside 1 0 varpi+".format(format_bits(rho)))
        tail = rho + (ZERO_BAR, ONE_BAR)
        if in_Q(tail):
            report.check(minus.accepts(reduce(tail)), lambda: "'{}' . 0bar "
                         "1bar reduces outside varpi- 0bar 1bar".format(
                             format_bits(rho)))
    return report


def suite_lemma6(config: SuiteConfig) -> SuiteReport:
    """
    Every approximate-Dyck nominal path fits exactly one tag; paths
    returning to their start reduce into varpi; paths crossing an l_k or
    l_k bar gadget reduce into that letter's segment shape.
    """
    report = SuiteReport("lemma6")
    rng = random.Random(config.seed)
    varpi = automaton(VARPI)
    for red in _compiled(config, rng):
        catalog = NominalCatalog(red, config.budget)
        report.truncated += catalog.truncated
        for walk in catalog.strays:
            report.check(False, lambda: "nominal path {} fits no tag".format(
                format_bits(path_label(walk))))
        for tag in catalog.tags():
            if isinstance(tag, int):
                shape, name = varpi, "varpi"
            else:
                shape = automaton(segment_shape(tag.label))
                name = red.source.graph.describe(tag)
            for label in catalog.labels(tag):
                report.check(shape.accepts(reduce(label)),
                             lambda: "'{}' reduces outside the shape of "
                             "{}".format(format_bits(label), name))
    return report


def suite_lemma7(config: SuiteConfig) -> SuiteReport:
    """
    Sandwich a varpi word between a path crossing an opening gadget and
    one crossing a closing gadget: for matching letters a result in Q
    reduces into varpi, for different letters it is never in Q. A varpi
    word followed by a path crossing a closing gadget is never a Dyck
    prefix.
    """
    report = SuiteReport("lemma7")
    rng = random.Random(config.seed)
    varpi = automaton(VARPI)
    middles = _varpi_words()
    for red in _compiled(config, rng):
        catalog = NominalCatalog(red, config.budget)
        report.truncated += catalog.truncated
        edges = [t for t in catalog.tags() if not isinstance(t, int)]
        opens = [e for e in edges if e.label.is_open]
        closes = [e for e in edges if e.label.is_close]
        for up, down in itertools.product(opens, closes):
            ups, downs = catalog.labels(up), catalog.labels(down)
            if not ups or not downs:
                report.truncated += 1
                continue
            same = up.label.letter == down.label.letter
            for _ in range(config.sample):
                w = rng.choice(ups) + rng.choice(middles) + rng.choice(downs)
                if same:
                    if in_Q(w):
                        report.check(varpi.accepts(reduce(w)),
                                     lambda: "'{}' reduces outside "
                                     "varpi".format(format_bits(w)))
                else:
                    report.check(not in_Q(w), lambda: "'{}' crosses l{} "
                                 "then l{}bar but is in Q".format(
                                     format_bits(w), up.label.letter,
                                     down.label.letter))
        for down in closes:
            downs = catalog.labels(down)
            if not downs:
                report.truncated += 1
                continue
            for _ in range(config.sample):
                w = rng.choice(middles) + rng.choice(downs)
                report.check(not in_Q_init(w), lambda: "'{}' ends crossing "
                             "a closing gadget but is a Dyck prefix".format(
                                 format_bits(w)))
    return report


def suite_lemma4(config: SuiteConfig) -> SuiteReport:
    """
    Decompose every enumerated Dyck path between original vertices: the
    decomposition must succeed and the recovered source path must open as
    many letters as it closes.
    """
    report = SuiteReport("lemma4")
    rng = random.Random(config.seed)
    for red in _compiled(config, rng):
        n = red.source.graph.vertex_count
        for s, t in itertools.product(range(n), repeat=2):
            found = dyck_paths(red.target, s, t, config.budget)
            report.truncated += found.truncated
            for path in found.paths:
                try:
                    ancestor = nominal_decompose(path, red, start=s).ancestor()
                except DecompositionError as exc:
                    report.check(False, lambda: "path {} -> {} of length {}: "
                                 "{}".format(s, t, len(path), exc))
                    continue
                balance = mu(e.label for e in ancestor)
                report.check(balance == 0, lambda: "ancestor of a Dyck path "
                             "{} -> {} has mu {}".format(s, t, balance))
    return report


def _source_walks(graph: LabeledGraph, max_len: int) \
        -> Iterator[Tuple[Edge, ...]]:
    frontier = [(e,) for e in graph.edges()]
    for _ in range(max_len):
        yield from frontier
        frontier = [walk + (e,) for walk in frontier
                    for e in graph.edges() if e.source == walk[-1].target]


def suite_lemma3(config: SuiteConfig) -> SuiteReport:
    """
    For source paths whose label is no factor of a Dyck word, sampled
    gadget paths following them (with returning detours at the visited
    vertices) never carry a label in Q.
    """
    report = SuiteReport("lemma3")
    rng = random.Random(config.seed)
    for red in _compiled(config, rng):
        catalog = NominalCatalog(red, config.budget)
        report.truncated += catalog.truncated
        for rho in _source_walks(red.source.graph, LEMMA3_PATH_LENGTH):
            if is_dyck_factor(path_label(rho)):
                continue
            if not all(catalog.paths(e) for e in rho):
                report.truncated += 1
                continue
            vertices = [e.source for e in rho] + [rho[-1].target]
            for _ in range(config.sample):
                member = ()
                for i, v in enumerate(vertices):
                    loops = catalog.paths(v)
                    if loops and rng.random() < 0.5:
                        member += rng.choice(loops)
                    if i < len(rho):
                        member += rng.choice(catalog.paths(rho[i]))
                label = path_label(member)
                report.check(not in_Q(label), lambda: "path following "
                             "'{}' has label in Q".format(" ".join(
                                 red.source.graph.alphabet.format_label(
                                     e.label) for e in rho)))
    return report


def _prop1_graphs() -> Iterator[LabeledGraph]:
    alphabet = Alphabet.dyck(1)
    for n, loops in ((3, True), (4, False)):
        candidates = [e for e in candidate_edges(n, alphabet, False)
                      if loops or e.source != e.target]
        for mask in range(1 << len(candidates)):
            edges = [e for i, e in enumerate(candidates) if mask >> i & 1]
            yield LabeledGraph(False, n, alphabet, edges)


def _prop1_compare(report: SuiteReport, inst: Instance) -> None:
    index = solve_dyck(inst)
    parity = ParityIndex.from_instance(inst)
    n = inst.graph.vertex_count
    for s, t in itertools.product(range(n), repeat=2):
        marked = inst.with_marks(s, t)
        fast = prop1_check(marked, parity)
        slow = index.query(s, t)
        report.check(fast == slow, lambda: "{} -> {} in {!r}: criterion {} "
                     "saturation {}".format(s, t, inst.graph, fast, slow))


def suite_prop1(config: SuiteConfig) -> SuiteReport:
    """
    The one-letter undirected criterion against saturation, on every
    3-vertex graph, every loop-free 4-vertex graph and a seeded sample of
    larger ones, for all marked pairs.
    """
    report = SuiteReport("prop1")
    rng = random.Random(config.seed)
    if config.sources is not None:
        instances = list(config.sources)
    else:
        instances = [Instance(g, 0, 0) for g in _prop1_graphs()]
        for _ in range(config.prop1_samples):
            n = rng.randint(1, PROP1_MAX_VERTICES)
            instances.append(random_dyck_instance(
                rng, n, 1, directed=False, density=rng.uniform(0.1, 0.5)))
    for inst in instances:
        _prop1_compare(report, inst)
    logger.info("prop1: %d instances, %d comparisons", len(instances),
                report.checked)
    return report


SUITES: Dict[str, Callable[[SuiteConfig], SuiteReport]] = {
    "lemma3": suite_lemma3,
    "lemma4": suite_lemma4,
    "lemma5": suite_lemma5,
    "lemma6": suite_lemma6,
    "lemma7": suite_lemma7,
    "prop1": suite_prop1,
    "q-validate": suite_q_validate,
}


def run_suite(name: str, config: Optional[SuiteConfig] = None) \
        -> SuiteReport:
    if config is None:
        config = SuiteConfig()
    try:
        suite = SUITES[name]
    except KeyError:
        raise KeyError("unknown suite '{}', expected one of {}".format(
            name, ", ".join(SUITES)))
    report = suite(config)
    logger.info("%s: %d checks, %d violations, %d truncated enumerations",
                name, report.checked, len(report.violations),
                report.truncated)
    return report
