"""Command-line front end.

Subcommands: compile, count, enumerate, ground, obdd, bench, check, snf,
types, config, extend.  A sentence comes from exactly one of --sentence
(file), --inline (text) or --bench (built-in name, with --i/--j for the
parametric family).  Exit codes: 0 ok, 1 usage, 2 parse error, 3 resource
cap exceeded, 4 validation mismatch.
"""

import argparse
import sys

from . import benchgen
from .circuit import (
    enumerate_models,
    evaluate,
    export_dot,
    export_nnf,
    model_count,
    verify_dnnf,
)
from .cnf import export_dimacs
from .compiler import CompileOptions, CompilerContext, compile_circuit
from .errors import ResourceCapError
from .ground import (
    BRUTE_FORCE_CAP,
    AtomTable,
    brute_force_count,
    eval_ground,
    ground,
)
from .obdd import export_obdd, obdd_count, to_obdd, validate_order
from .snf import UnsupportedPrefixError, to_snf
from .syntax import ParseError, format_sentence, parse_sentence
from .types import TypeTables

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_MISMATCH = 4

ENUM_DEFAULT_LIMIT = 1000
CHECK_ENUM_LIMIT = 10000


class _UsageError(SystemExit):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        raise SystemExit(EXIT_USAGE)


def _add_source_args(p):
    p.add_argument("--sentence", metavar="FILE", help="sentence source file")
    p.add_argument("--inline", metavar="TEXT", help="sentence source text")
    p.add_argument("--bench", metavar="NAME", help="built-in benchmark name")
    p.add_argument("--i", type=int, help="unary count for ui-bj")
    p.add_argument("--j", type=int, help="binary count for ui-bj")


def _add_compile_args(p):
    p.add_argument("--no-stage1-cache", action="store_true")
    p.add_argument("--no-stage2-cache", action="store_true")
    p.add_argument("--no-postprocess", action="store_true")
    p.add_argument("--stats", action="store_true")


def build_parser():
    parser = _Parser(prog="fo2kc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, extra in [
        ("compile", "compile to a circuit and write it out"),
        ("count", "compile and print the exact model count"),
        ("enumerate", "compile and print models over the original vocabulary"),
        ("ground", "write the propositional grounding as DIMACS"),
        ("obdd", "compile, transform to an OBDD, dump it and print its count"),
        ("check", "cross-validate counts, structure and enumeration"),
        ("snf", "print the normalized sentence"),
        ("types", "print unary/binary type tables"),
        ("config", "probe configuration satisfiability"),
        ("extend", "compile with extendability-check tracing"),
    ]:
        p = sub.add_parser(name, help=extra)
        _add_source_args(p)
        if name in ("compile", "count", "enumerate", "obdd", "check", "extend"):
            p.add_argument("--n", required=True, help="domain size")
            _add_compile_args(p)
        if name == "ground":
            p.add_argument("--n", required=True, help="domain size")
        if name in ("compile", "ground", "obdd"):
            p.add_argument("--out", metavar="PATH", help="output path")
        if name == "compile":
            p.add_argument("--format", choices=["nnf", "dot"], default="nnf")
        if name == "enumerate":
            p.add_argument("--limit", type=int, default=ENUM_DEFAULT_LIMIT)
        if name == "check":
            p.add_argument("--limit", type=int, default=CHECK_ENUM_LIMIT,
                           help="enumeration cross-check cap")
        if name == "snf":
            p.add_argument("--print", dest="do_print", action="store_true",
                           default=True)
        if name == "types":
            p.add_argument("--dump", action="store_true", default=True)
        if name == "config":
            p.add_argument("--counts", required=True,
                           help="comma-separated census, e.g. 2,0,1")
            p.add_argument("--probe", action="store_true", default=True)
        if name == "extend":
            p.add_argument("--trace", action="store_true", default=True)

    bench = sub.add_parser("bench", help="benchmark utilities / size-time sweep")
    bench.add_argument("action", nargs="?", choices=["list", "emit", "sweep"],
                       default="sweep")
    bench.add_argument("name", nargs="?", help="benchmark name (emit)")
    _add_source_args(bench)
    bench.add_argument("--n", help="domain size or range (sweep)")
    _add_compile_args(bench)
    return parser


def _load_sentence(args):
    sources = [s for s in (args.sentence, args.inline, args.bench) if s]
    if len(sources) != 1:
        raise _UsageError(EXIT_USAGE)
    if args.bench:
        text = benchgen.generate(args.bench, args.i, args.j)
    elif args.inline:
        text = args.inline
    else:
        with open(args.sentence, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_sentence(text)


def _parse_n_range(spec):
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(spec)]


def _options(args):
    return CompileOptions(
        enable_stage1_cache=not getattr(args, "no_stage1_cache", False),
        enable_stage2_cache=not getattr(args, "no_stage2_cache", False),
        enable_postprocess=not getattr(args, "no_postprocess", False),
        enable_stats=getattr(args, "stats", False),
    )


def _open_out(path):
    if path:
        return open(path, "w", encoding="utf-8"), True
    return sys.stdout, False


def _single_n(args):
    values = _parse_n_range(args.n)
    if len(values) != 1:
        raise _UsageError(EXIT_USAGE)
    return values[0]


def cmd_compile(args):
    sentence = _load_sentence(args)
    snf = to_snf(sentence)
    n = _single_n(args)
    options = _options(args)
    circuit, table, stats = compile_circuit(snf, n, options)
    sink, close = _open_out(args.out)
    try:
        if args.format == "dot":
            export_dot(circuit, sink, table)
        else:
            export_nnf(circuit, sink)
    finally:
        if close:
            sink.close()
    if options.enable_stats:
        out = sys.stdout if close else sys.stderr
        out.write(stats.to_text())
    return EXIT_OK


def cmd_count(args):
    sentence = _load_sentence(args)
    snf = to_snf(sentence)
    n = _single_n(args)
    options = _options(args)
    circuit, _, stats = compile_circuit(snf, n, options)
    print(model_count(circuit))
    if options.enable_stats:
        sys.stderr.write(stats.to_text())
    return EXIT_OK


def _literal_lines(models, snf, table, original, n):
    """Render projected models as ground-literal lines, original order."""
    orig_table = AtomTable(original.vocabulary, n)
    for model in models:
        projected = snf.project_model(model, table)
        parts = []
        for var in range(1, orig_table.num_vars + 1):
            atom = orig_table.atom(var)
            text = orig_table.describe(var)
            parts.append(text if projected[atom] else "~" + text)
        yield " ".join(parts)


def cmd_enumerate(args):
    sentence = _load_sentence(args)
    snf = to_snf(sentence)
    n = _single_n(args)
    circuit, table, _ = compile_circuit(snf, n, _options(args))
    models = enumerate_models(circuit, args.limit)
    for line in _literal_lines(models, snf, table, sentence, n):
        print(line)
    return EXIT_OK


def cmd_ground(args):
    sentence = _load_sentence(args)
    n = _single_n(args)
    formula, table = ground(sentence, n)
    sink, close = _open_out(args.out)
    try:
        export_dimacs(formula, table, sink)
    finally:
        if close:
            sink.close()
    return EXIT_OK


def cmd_obdd(args):
    sentence = _load_sentence(args)
    snf = to_snf(sentence)
    n = _single_n(args)
    options = _options(args)
    # block tags must stay intact for the transform
    options.enable_postprocess = False
    circuit, table, _ = compile_circuit(snf, n, options)
    diagram = to_obdd(circuit, table)
    sink, close = _open_out(args.out)
    try:
        export_obdd(diagram, sink)
    finally:
        if close:
            sink.close()
    print(obdd_count(diagram))
    return EXIT_OK


def cmd_snf(args):
    sentence = _load_sentence(args)
    snf = to_snf(sentence)
    print(format_sentence(snf.to_sentence()), end="")
    if snf.aux_preds:
        print("introduced predicates:")
        for p in sorted(snf.aux_preds):
            name, arity = snf.vocabulary.predicates[p]
            print("  %s/%d" % (name, arity))
    else:
        print("introduced predicates: none")
    return EXIT_OK


def cmd_types(args):
    sentence = _load_sentence(args)
    snf = to_snf(sentence)
    tables = TypeTables(snf)
    print(tables.dump(), end="")
    return EXIT_OK


def cmd_config(args):
    sentence = _load_sentence(args)
    snf = to_snf(sentence)
    ctx = CompilerContext(snf)
    counts = tuple(int(v) for v in args.counts.split(","))
    store = ctx.store
    print("delta=%d" % store.delta)
    template = store.find_template(counts)
    if template is None:
        print("unsat")
    else:
        print("template=%s" % ",".join(str(v) for v in template))
    return EXIT_OK


def cmd_extend(args):
    sentence = _load_sentence(args)
    snf = to_snf(sentence)
    n = _single_n(args)

    def trace(stage, position, bits, info, verdict):
        print("%s %s bits=%d config=%s -> %s"
              % (stage, position, bits,
                 ",".join(str(v) for v in info) if info else "-",
                 "extendable" if verdict else "pruned"))

    compile_circuit(snf, n, _options(args), trace=trace)
    return EXIT_OK


def cmd_bench(args):
    if args.action == "list":
        for name in benchgen.benchmark_names():
            print(name)
        return EXIT_OK
    if args.action == "emit":
        if not args.name:
            raise _UsageError(EXIT_USAGE)
        print(benchgen.generate(args.name, args.i, args.j), end="")
        return EXIT_OK
    sentence = _load_sentence(args)
    if not args.n:
        raise _UsageError(EXIT_USAGE)
    snf = to_snf(sentence)
    ctx = CompilerContext(snf)
    options = _options(args)
    print("n nodes edges expanded seconds")
    for n in _parse_n_range(args.n):
        _, _, stats = compile_circuit(snf, n, options, context=ctx)
        print("%d %d %d %d %.3f" % (n, stats.nodes_after, stats.edges_after,
                                    stats.expanded_calls, stats.seconds))
    return EXIT_OK


def cmd_check(args):
    sentence = _load_sentence(args)
    snf = to_snf(sentence)
    n = _single_n(args)
    options = _options(args)
    ctx = CompilerContext(snf)
    ok = True

    def report(name, passed, note=""):
        nonlocal ok
        status = "ok" if passed else "FAIL"
        suffix = " (%s)" % note if note else ""
        print("check %-24s %s%s" % (name, status, suffix))
        if not passed:
            ok = False

    circuit, table, _ = compile_circuit(snf, n, options, context=ctx)
    rep = verify_dnnf(circuit)
    report("dnnf-structure", rep.fully_verified)
    count = model_count(circuit, verify=False)

    raw, _ = compile_circuit(
        snf, n, CompileOptions(enable_postprocess=False,
                               enable_stage1_cache=options.enable_stage1_cache,
                               enable_stage2_cache=options.enable_stage2_cache),
        context=ctx)[:2]
    diagram = to_obdd(raw, table)
    validate_order(diagram)
    report("obdd-count", obdd_count(diagram) == count)

    try:
        oracle = brute_force_count(sentence, n)
    except ResourceCapError:
        report("oracle-count", True, "skipped: over brute-force cap")
    else:
        report("oracle-count", oracle == count,
               "oracle=%d circuit=%d" % (oracle, count))

    if count <= args.limit:
        snf_formula, snf_table = ground(snf.to_sentence(), n)
        forward = True
        for model in enumerate_models(circuit):
            if not eval_ground(snf_formula, model):
                forward = False
                break
        report("enumeration-forward", forward)
        if snf_table.num_vars <= BRUTE_FORCE_CAP:
            from .ground import brute_force_models

            backward = True
            grounding_models = brute_force_models(snf.to_sentence(), n,
                                                  limit=args.limit)
            if len(grounding_models) != count:
                backward = False
            else:
                for model in grounding_models:
                    if not evaluate(circuit, model):
                        backward = False
                        break
            report("enumeration-backward", backward)
        else:
            report("enumeration-backward", True, "skipped: over atom cap")
    else:
        report("enumeration", True, "skipped: count %d over limit" % count)

    return EXIT_OK if ok else EXIT_MISMATCH


_COMMANDS = {
    "compile": cmd_compile,
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "ground": cmd_ground,
    "obdd": cmd_obdd,
    "snf": cmd_snf,
    "types": cmd_types,
    "config": cmd_config,
    "extend": cmd_extend,
    "bench": cmd_bench,
    "check": cmd_check,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError:
        sys.stderr.write("fo2kc: usage error: exactly one sentence source "
                         "and a single --n are required\n")
        return EXIT_USAGE
    except ParseError as exc:
        sys.stderr.write("fo2kc: parse error: %s\n" % exc)
        return EXIT_PARSE
    except UnsupportedPrefixError as exc:
        sys.stderr.write("fo2kc: parse error: %s\n" % exc)
        return EXIT_PARSE
    except ResourceCapError as exc:
        sys.stderr.write("fo2kc: resource cap: %s\n" % exc)
        return EXIT_CAP
    except ValueError as exc:
        sys.stderr.write("fo2kc: error: %s\n" % exc)
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write("fo2kc: i/o error: %s\n" % exc)
        return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
