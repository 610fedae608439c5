"""
Command-line front end: solve and replay instances, compile reductions,
check reduction equivalence, evaluate words, run the oracles and the
property suites.

Graph files:

    graph directed|undirected
    vertices <N>
    alphabet dyck <n> | alphabet neardyck <m>
    edge <u> <label> <v>          (any number)
    mark <s> <t>
    partition and <u> ...         (optional; unlisted vertices are OR)

Labels are l<k> / l<k>bar for dyck alphabets and v<i> / v<i>bar / dot for
neardyck ones. Update scripts hold one `ins <u> <label> <v>`,
`del <u> <label> <v>` or `query` per line. `#` starts a comment.

Exit status is 0 when every verdict passes, 1 when one fails and 2 on
malformed input or an unsuitable instance.
"""
import argparse
import logging
import random
import sys
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from alternating import kappa_table, solve_alternating
from cfl_reach import ENGINE_CFL, ENGINE_DYCK, ENGINE_NEAR_DYCK, \
    ENGINE_WRAP_ONLY, solve_dyck, solve_for
from constants import DEFAULT_MAX_EXPANSIONS, DEFAULT_MAX_PATHS, \
    DEFAULT_SEED, FUZZ_RUNS, FUZZ_SCRIPT_LENGTH, KAPPA_MAX_VERTICES, \
    LEMMA7_SAMPLE, LEMMA_SUITE_BUDGET, LEMMA_SUITE_EXPANSIONS, \
    LEMMA_SUITE_PATHS, PROP1_RANDOM_SAMPLES, REPORT_KEY_WIDTH
from errors import DyckLabError, InstanceKindError, UpdateError
from graph_model import Alphabet, Edge, Instance, OpKind, Word, \
    format_script, format_word, parse_graph, parse_script_numbered, \
    parse_word, serialize_graph
from one_letter import Prop1Tracker, build_distance_gadget, prop1_check
from oracle import EnumerationBudget, brute_dyck_search, dyck_count, \
    dyck_paths, enumerate_nominal_paths, exhaustive_words, path_label, \
    bfs_distance, is_dyck_word
from reductions import ALTERNATING, AnswerTracker, ReductionChain, \
    ReductionKind, compile_reduction, format_vertex_map, fuzz_equivalence, \
    run_equivalence, translate_updates
from suites import SUITES, SuiteConfig, run_suite
from word_lab import FOUR_LETTERS, format_bits, gamma_exponent, in_Q, \
    in_Q_init, in_regular, is_dyck, is_near_dyck, mu, parse_bits, \
    phi_neardyck, phi_undirected, reduce, theta

logger = logging.getLogger(__name__)

ENGINE_PROP1 = "prop1"
ENGINES = (ENGINE_DYCK, ENGINE_WRAP_ONLY, ENGINE_NEAR_DYCK, ENGINE_CFL,
           ENGINE_PROP1)
KINDS = [kind.value for kind in ReductionKind]


def _flag(value: bool) -> str:
    return "true" if value else "false"


@dataclass
class RunReport:
    """
    What a command found: query answers, translated update counts, named
    values and an overall verdict. Plain rendering puts tables and answers
    first and aligns the named values; machine rendering prints one
    key=value record per line.
    """
    answers: List[bool] = field(default_factory=list)
    counts: List[int] = field(default_factory=list)
    values: List[Tuple[str, object]] = field(default_factory=list)
    text: List[str] = field(default_factory=list)
    verdict: Optional[bool] = None

    def add(self, key: str, value: object) -> None:
        self.values.append((key, value))

    @staticmethod
    def _show(value: object) -> str:
        if isinstance(value, bool):
            return _flag(value)
        return str(value)

    def _verdict(self) -> str:
        return "pass" if self.verdict else "fail"

    def render(self, machine: bool = False) -> str:
        if machine:
            records = [("answer.{}".format(i), a)
                       for i, a in enumerate(self.answers, start=1)]
            records += [("count.{}".format(i), c)
                        for i, c in enumerate(self.counts, start=1)]
            records += self.values
            if self.verdict is not None:
                records.append(("verdict", self._verdict()))
            return "".join("{}={}\n".format(k, self._show(v))
                           for k, v in records)
        out = list(self.text)
        out += [_flag(a) for a in self.answers]
        out += ["{} {}".format(k.ljust(REPORT_KEY_WIDTH), self._show(v))
                for k, v in self.values]
        if self.verdict is not None:
            out.append("{} {}".format("verdict".ljust(REPORT_KEY_WIDTH),
                                      self._verdict()))
        return "".join(line if line.endswith("\n") else line + "\n"
                       for line in out)


def _read(path: str) -> bytes:
    with open(path, "rb") as f:
        return f.read()


def _load_graph(path: str) -> Instance:
    return parse_graph(_read(path))


def _load_script(path: str, inst: Instance):
    return parse_script_numbered(_read(path), inst.graph.alphabet,
                                 inst.graph.vertex_count)


def _solve_marked(inst: Instance, engine: str) -> bool:
    if engine == ENGINE_PROP1:
        return prop1_check(inst)
    return solve_for(inst, engine).query(inst.source, inst.sink)


def cmd_solve(args) -> RunReport:
    inst = _load_graph(args.graph)
    report = RunReport()
    if args.engine is None and inst.partition is not None:
        report.answers.append(solve_alternating(inst)[0])
    else:
        report.answers.append(_solve_marked(inst, args.engine))
    return report


def _tracker(inst: Instance, engine: Optional[str]):
    if engine == ENGINE_PROP1:
        return Prop1Tracker(inst)
    if engine is None:
        if inst.partition is not None:
            engine = ALTERNATING
        elif inst.graph.alphabet.is_dyck:
            engine = ENGINE_DYCK
        else:
            engine = ENGINE_NEAR_DYCK
    return AnswerTracker(inst, engine)


def cmd_replay(args) -> RunReport:
    inst = _load_graph(args.graph)
    script = _load_script(args.script, inst)
    tracker = _tracker(inst, args.engine)
    report = RunReport()
    for line, op in script:
        if op.kind == OpKind.QUERY:
            report.answers.append(tracker.answer())
            continue
        try:
            tracker.apply(op)
        except UpdateError as exc:
            raise UpdateError("line {}: {}".format(line, exc))
    return report


def _kinds(text: str) -> List[ReductionKind]:
    try:
        return [ReductionKind(k) for k in text.split(",")]
    except ValueError:
        raise InstanceKindError("unknown reduction kind in '{}', expected "
                                "{}".format(text, ", ".join(KINDS)))


def _compile(kinds: Sequence[ReductionKind], inst: Instance):
    if len(kinds) == 1:
        return compile_reduction(kinds[0], inst)
    return ReductionChain(inst, kinds)


def cmd_reduce(args) -> RunReport:
    inst = _load_graph(args.graph)
    red = _compile(_kinds(args.kind), inst)
    target_text = serialize_graph(red.target)
    last = red.stages[-1] if isinstance(red, ReductionChain) else red
    report = RunReport()
    if args.out:
        with open(args.out, "w") as f:
            f.write(target_text)
        map_path = args.map or args.out + ".map"
        report.add("vertices", red.target.graph.vertex_count)
        report.add("edges", red.target.graph.edge_count())
    else:
        report.text.append(target_text)
        map_path = args.map
    if map_path:
        with open(map_path, "w") as f:
            f.write(format_vertex_map(last))
    if args.script:
        ops = [op for _, op in _load_script(args.script, inst)]
        translated = format_script(translate_updates(red, ops),
                                   red.target.graph.alphabet)
        with open(args.script_out or args.script + ".target", "w") as f:
            f.write(translated)
    return report


def _equivalence_report(report: RunReport, run, label: str = "") -> None:
    report.counts.extend(run.counts)
    for step, src, dst in run.answers:
        report.add("{}query.{}".format(label, step),
                   "{} {}".format(_flag(src), _flag(dst)))
    for step in run.mismatches:
        report.add("{}mismatch".format(label), step)
    for step in run.bound_violations:
        report.add("{}bound".format(label), step)


def cmd_verify_equiv(args) -> RunReport:
    kinds = _kinds(args.kind)
    report = RunReport()
    if args.fuzz:
        if len(kinds) != 1:
            raise InstanceKindError("fuzzing takes a single reduction kind")
        rng = random.Random(args.seed)
        runs = fuzz_equivalence(kinds[0], rng, args.fuzz, args.length)
        failed = [i for i, run in enumerate(runs, start=1) if not run.passed]
        report.add("runs", len(runs))
        report.add("queries", sum(len(run.answers) for run in runs))
        report.add("failed", len(failed))
        for i in failed:
            _equivalence_report(report, runs[i - 1], "run.{}.".format(i))
        report.counts = []
        report.verdict = not failed
        return report
    if not args.graph or not args.script:
        raise InstanceKindError("verify-equiv needs a graph and a script, "
                                "or --fuzz")
    inst = _load_graph(args.graph)
    ops = [op for _, op in _load_script(args.script, inst)]
    run = run_equivalence(_compile(kinds, inst), ops)
    _equivalence_report(report, run)
    report.verdict = run.passed
    return report


def _word_alphabet(tokens: Sequence[str], letters: Optional[int]) \
        -> Alphabet:
    if any(t == "dot" or t.startswith("v") for t in tokens):
        if letters is None:
            indexes = [int(t[1:].replace("bar", "")) for t in tokens
                       if t.startswith("v")]
            letters = max(indexes, default=0) + 1
        return Alphabet.near_dyck(letters)
    if letters is None:
        indexes = [int(t[1:].replace("bar", "")) for t in tokens
                   if t.startswith("l")]
        letters = max(indexes, default=1)
    return Alphabet.dyck(letters)


def _parse_any_word(tokens: Sequence[str], letters: Optional[int]) \
        -> Tuple[Word, Alphabet]:
    if all(t in ("0", "0bar", "1", "1bar") for t in tokens):
        return parse_bits(" ".join(tokens)), FOUR_LETTERS
    alphabet = _word_alphabet(tokens, letters)
    return parse_word(" ".join(tokens), alphabet), alphabet


def _show_word(w: Word, alphabet: Alphabet) -> str:
    if alphabet == FOUR_LETTERS:
        return format_bits(w) or "eps"
    return format_word(w, alphabet) or "eps"


def cmd_word(args) -> RunReport:
    w, alphabet = _parse_any_word(args.word, args.letters)
    report = RunReport()
    op = args.op
    if op == "reduce":
        report.add("reduced", _show_word(reduce(w), alphabet))
    elif op == "dyck":
        report.answers.append(is_dyck(w))
    elif op == "neardyck":
        report.answers.append(is_near_dyck(w))
    elif op == "q":
        report.answers.append(in_Q(w))
    elif op == "qinit":
        report.answers.append(in_Q_init(w))
    elif op == "regular":
        report.answers.append(in_regular(w, args.which))
    elif op == "mu":
        report.add("mu", mu(w))
    elif op == "theta":
        element = theta(w)
        exponent = gamma_exponent(element)
        report.add("theta", element)
        report.add("gamma", "-" if exponent is None else exponent)
    elif op == "phi":
        if alphabet.is_dyck:
            report.add("phi", format_bits(phi_undirected(w)))
        else:
            report.add("phi", format_word(phi_neardyck(w, alphabet.size),
                                          Alphabet.dyck(2)))
    return report


def _budget(args) -> EnumerationBudget:
    return EnumerationBudget(args.max_length, args.max_paths,
                             args.max_expansions)


def _parse_tag(text: str, red) -> object:
    tokens = text.split()
    if len(tokens) == 1:
        return int(tokens[0])
    if len(tokens) != 3:
        raise InstanceKindError("a tag is a vertex or '<x> <label> <y>'")
    alphabet = red.source.graph.alphabet
    return Edge(int(tokens[0]), alphabet.parse_label(tokens[1]),
                int(tokens[2]))


def cmd_oracle(args) -> RunReport:
    report = RunReport()
    if args.what == "words":
        alphabet = Alphabet.dyck(args.letters)
        words = exhaustive_words(alphabet.labels(), args.max_length,
                                 is_dyck_word)
        report.add("words", len(words))
        report.add("recursion", sum(dyck_count(args.letters, k)
                                    for k in range(args.max_length + 1)))
        return report
    if not args.graph:
        raise InstanceKindError("oracle {} needs a graph".format(args.what))
    inst = _load_graph(args.graph)
    budget = _budget(args)
    if args.what == "paths":
        start = inst.source if args.start is None else args.start
        end = inst.sink if args.end is None else args.end
        found = dyck_paths(inst, start, end, budget)
        for path in found.paths:
            report.text.append(format_word(path_label(path),
                                           inst.graph.alphabet) or "eps")
        report.add("paths", len(found.paths))
        report.add("truncated", found.truncated)
    elif args.what == "reach":
        brute = brute_dyck_search(inst, budget)
        solved = solve_dyck(inst).pairs()
        report.add("brute", len(brute.pairs))
        report.add("solved", len(solved))
        report.add("truncated", brute.truncated)
        report.verdict = brute.pairs <= solved
    elif args.what == "nominal":
        red = compile_reduction(ReductionKind.DYCK2_TO_UNDIRECTED, inst)
        found = enumerate_nominal_paths(red, _parse_tag(args.tag, red),
                                        budget)
        for path in found.paths:
            report.text.append(format_bits(path_label(path)))
        report.add("paths", len(found.paths))
        report.add("truncated", found.truncated)
    return report


def cmd_suite(args) -> RunReport:
    sources = None
    if args.graph:
        sources = tuple(_load_graph(path) for path in args.graph)
    config = SuiteConfig(seed=args.seed,
                         budget=EnumerationBudget(args.max_length,
                                                  args.max_paths,
                                                  args.max_expansions),
                         sample=args.sample, prop1_samples=args.samples,
                         word_length=args.length, sources=sources)
    result = run_suite(args.name, config)
    report = RunReport()
    report.add("suite", result.name)
    report.add("checked", result.checked)
    report.add("violations", len(result.violations))
    report.add("truncated", result.truncated)
    for message in result.violations[:args.show]:
        report.text.append("violation: " + message)
    report.verdict = result.passed
    return report


def cmd_alternating(args) -> RunReport:
    inst = _load_graph(args.graph)
    accepted, trace = solve_alternating(inst)
    kappas = None
    if inst.graph.vertex_count <= KAPPA_MAX_VERTICES:
        kappas = kappa_table(inst)
    report = RunReport()
    report.text.append(trace.format_table(kappas))
    report.answers.append(accepted)
    report.add("rounds", len(trace.layers) - 1)
    return report


def cmd_distance(args) -> RunReport:
    inst = _load_graph(args.graph)
    gadget = build_distance_gadget(inst.graph)
    found = gadget.distance(args.start, args.end)
    direct = bfs_distance(inst.graph, args.start, args.end)
    report = RunReport()
    report.add("gadget", "-" if found is None else found)
    report.add("bfs", "-" if direct is None else direct)
    report.verdict = found == direct
    return report


def _budget_flags(parser: argparse.ArgumentParser, length: int,
                  paths: int, expansions: int) -> None:
    parser.add_argument("--max-length", type=int, default=length,
                        help="longest walk to enumerate")
    parser.add_argument("--max-paths", type=int, default=paths,
                        help="stop after this many walks")
    parser.add_argument("--max-expansions", type=int, default=expansions,
                        help="stop after extending this many partial walks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dycklab", description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed of every randomized run (default "
                             "%(default)s)")
    parser.add_argument("--machine", action="store_true",
                        help="print key=value records")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for solver detail")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="answer the marked pair of a graph")
    p.add_argument("graph")
    p.add_argument("--engine", choices=ENGINES)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("replay", help="apply an update script, answering "
                                      "every query")
    p.add_argument("graph")
    p.add_argument("script")
    p.add_argument("--engine", choices=ENGINES)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("reduce", help="compile a reduction target")
    p.add_argument("kind", help="one of {}, or several joined by commas"
                   .format(", ".join(KINDS)))
    p.add_argument("graph")
    p.add_argument("--out", help="target graph file (default: stdout)")
    p.add_argument("--map", help="vertex name map file (default: "
                                 "<out>.map)")
    p.add_argument("--script", help="source update script to translate")
    p.add_argument("--script-out", help="translated script file (default: "
                                        "<script>.target)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify-equiv", help="replay a script on a source "
                                            "and its target side by side")
    p.add_argument("kind")
    p.add_argument("graph", nargs="?")
    p.add_argument("script", nargs="?")
    p.add_argument("--fuzz", type=int, metavar="RUNS",
                   help="check RUNS random instances and scripts instead "
                        "(e.g. {})".format(FUZZ_RUNS))
    p.add_argument("--length", type=int, default=FUZZ_SCRIPT_LENGTH,
                   help="fuzz script length")
    p.set_defaults(func=cmd_verify_equiv)

    p = sub.add_parser("word", help="evaluate a word")
    p.add_argument("op", choices=["reduce", "dyck", "neardyck", "q", "qinit",
                                  "regular", "mu", "theta", "phi"])
    p.add_argument("word", nargs="*",
                   help="tokens 0 0bar 1 1bar, or l<k>[bar], or v<i>[bar] "
                        "and dot")
    p.add_argument("--which", default="varpi",
                   choices=["omega+", "omega-", "omega", "varpi+", "varpi-",
                            "varpi"])
    p.add_argument("--letters", type=int, help="alphabet size")
    p.set_defaults(func=cmd_word)

    p = sub.add_parser("oracle", help="brute-force enumeration")
    p.add_argument("what", choices=["paths", "reach", "nominal", "words"])
    p.add_argument("graph", nargs="?")
    p.add_argument("--from", dest="start", type=int)
    p.add_argument("--to", dest="end", type=int)
    p.add_argument("--tag", default="0",
                   help="nominal tag: a vertex or '<x> <label> <y>'")
    p.add_argument("--letters", type=int, default=2)
    _budget_flags(p, 8, DEFAULT_MAX_PATHS, DEFAULT_MAX_EXPANSIONS)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("suite", help="run a bounded property suite")
    p.add_argument("name", choices=list(SUITES))
    p.add_argument("--graph", action="append",
                   help="dyck source graph to use instead of the built-in "
                        "ones (repeatable)")
    p.add_argument("--sample", type=int, default=LEMMA7_SAMPLE)
    p.add_argument("--samples", type=int, default=PROP1_RANDOM_SAMPLES,
                   help="random instances for prop1")
    p.add_argument("--length", type=int, help="word length bound")
    p.add_argument("--show", type=int, default=10,
                   help="violations to print")
    _budget_flags(p, LEMMA_SUITE_BUDGET, LEMMA_SUITE_PATHS,
                  LEMMA_SUITE_EXPANSIONS)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("alternating", help="layer table and kappa of an "
                                           "alternating instance")
    p.add_argument("graph")
    p.set_defaults(func=cmd_alternating)

    p = sub.add_parser("distance", help="distance through the one-letter "
                                        "gadget next to BFS")
    p.add_argument("graph")
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="end", type=int, required=True)
    p.set_defaults(func=cmd_distance)
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    began = time.perf_counter()
    try:
        report = args.func(args)
    except (DyckLabError, OSError, KeyError, ValueError) as exc:
        print("error: {}".format(exc), file=sys.stderr)
        return 2
    logger.info("%s finished in %.3fs", args.command,
                time.perf_counter() - began)
    sys.stdout.write(report.render(args.machine))
    return 0 if report.verdict is not False else 1


if __name__ == "__main__":
    sys.exit(main())
