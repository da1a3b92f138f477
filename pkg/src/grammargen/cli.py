"""Command-line workflow: induce, fit, sample, evaluate, fold, coarsen,
vectorize, filters.

Every command writes a manifest (inputs with digests, seed, version, wall
time) next to its output. A plain-text key=value file passed via --config
supplies flag defaults; explicit flags override it. Exit codes: 0 success,
2 bad usage/config, 3 input validation, 4 runtime failure, 1 unexpected.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .coarsen import get_coarsener, molecule_coarsener, rna_coarsener
from .errors import ConfigError, GrammargenError, ParseError
from .estimator import Hyperparams, fit as fit_model, load_model, save_model
from .evalkit import EvalConfig, evaluate, rna_validity_filters
from .graphs import LabeledGraph, graph_from_dict, graph_to_dict
from .grammar import CipParams, induce, load_grammar, save_grammar
from .kernel import KernelParams, vectorize
from .rna import format_dot_bracket, nussinov_fold, parse_dot_bracket, structure_to_graph
from .sampler import SamplerConfig, run_chains
from .synthetic import cloverleaf_family, hairpin_family

log = logging.getLogger("grammargen")


# -- input handling -----------------------------------------------------------


def _read_graphs(path: str, lenient: bool = False):
    """Load graphs from .json (array), .jsonl (sample stream), or
    dot-bracket records (converted to nucleotide graphs)."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    suffix = p.suffix.lower()
    if suffix == ".jsonl":
        graphs = []
        for ln, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}: invalid JSON ({exc})", ln) from None
            graphs.append(graph_from_dict(obj.get("graph", obj)))
        return graphs
    if suffix == ".json":
        obj = json.loads(text)
        if isinstance(obj, dict):
            obj = obj.get("graphs", [obj])
        return [graph_from_dict(d) for d in obj]
    # dot-bracket records
    records = _parse_records(text, path, lenient)
    return [structure_to_graph(s) for _, s in records]


def _parse_records(text: str, path: str, lenient: bool):
    if not lenient:
        return parse_dot_bracket(text)
    records = []
    lines = text.splitlines()
    block = []
    starts = []
    for i, line in enumerate(lines):
        if line.strip().startswith(">"):
            if block:
                starts.append(block)
            block = [i]
        elif line.strip():
            block.append(i)
    if block:
        starts.append(block)
    for block in starts:
        chunk = "\n".join(lines[i] for i in block)
        try:
            records.extend(parse_dot_bracket(chunk))
        except GrammargenError as exc:
            log.warning("%s: skipping record (%s)", path, exc)
    return records


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(args, output: str, inputs, started: float) -> None:
    manifest = {
        "tool": "grammargen",
        "version": __version__,
        "command": args.command,
        "argv": sys.argv[1:],
        "seed": getattr(args, "seed", None),
        "inputs": {p: _sha256(p) for p in inputs if p and Path(p).exists()},
        "output": output,
        "wall_time_s": round(time.time() - started, 6),
    }
    path = Path(str(output) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _emit(text: str, output):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------------


def _cmd_induce(args) -> int:
    started = time.time()
    graphs = _read_graphs(args.corpus, args.lenient)
    coarsener = get_coarsener(args.coarsener)
    radii = [int(r) for r in str(args.radius).split(",")]
    grid = [
        CipParams(
            radius=r,
            thickness=args.thickness,
            base_thickness=args.base_thickness,
            coarsened=coarsener is not None,
        )
        for r in radii
    ]
    gr = induce(graphs, coarsener, grid, args.min_count, coarsener_name=args.coarsener)
    save_grammar(gr, args.output)
    log.info(
        "induced %d productions over %d interfaces from %d graphs",
        gr.n_productions(),
        sum(len(m) for m in gr.productions.values()),
        len(graphs),
    )
    _write_manifest(args, args.output, [args.corpus], started)
    return 0


def _cmd_fit(args) -> int:
    started = time.time()
    graphs = _read_graphs(args.corpus, args.lenient)
    kp = KernelParams(args.max_radius, args.max_distance, args.feature_bits)
    vectors = [vectorize(g, kp) for g in graphs]
    hp = Hyperparams(nu=args.nu, epochs=args.epochs, eta0=args.eta0, seed=args.seed)
    model = fit_model(vectors, hp)
    save_model(model, args.output)
    _write_manifest(args, args.output, [args.corpus], started)
    return 0


def _cmd_sample(args) -> int:
    started = time.time()
    gr = load_grammar(args.grammar)
    model = load_model(args.model)
    seeds = _read_graphs(args.seed_graphs, args.lenient)
    coarsener = get_coarsener(gr.coarsener_name)
    kp = KernelParams(args.max_radius, args.max_distance, args.feature_bits)
    cfg = SamplerConfig(
        steps=args.steps,
        burn_in=args.burn_in,
        sample_interval=args.interval,
        n_attempts=args.n_attempts,
        seed=args.seed,
        transformer=args.transformer,
        kernel=kp,
    )
    chains = run_chains(seeds, gr, model, coarsener, cfg, args.chains, args.threads)
    lines = []
    for ci, records in enumerate(chains):
        for rec in records:
            lines.append(
                json.dumps(
                    {
                        "chain": ci,
                        "step": rec.step,
                        "score": rec.score,
                        "accepted": rec.accepted,
                        "graph": graph_to_dict(rec.graph),
                    },
                    separators=(",", ":"),
                    sort_keys=True,
                )
            )
    _emit("\n".join(lines) + ("\n" if lines else ""), args.output)
    if args.output:
        _write_manifest(
            args, args.output, [args.grammar, args.model, args.seed_graphs], started
        )
    return 0


def _cmd_evaluate(args) -> int:
    started = time.time()
    real = _read_graphs(args.real, args.lenient)
    gen = _read_graphs(args.gen, args.lenient)
    cfg = EvalConfig(
        kernel=KernelParams(args.max_radius, args.max_distance, args.feature_bits),
        hyper=Hyperparams(nu=args.nu, epochs=args.epochs, seed=args.seed),
        folds=args.folds,
        reps=args.reps,
        seed=args.seed,
    )
    report = evaluate(real, gen, cfg)
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    _emit(text, args.output)
    if args.output:
        _write_manifest(args, args.output, [args.real, args.gen], started)
    return 0


def _cmd_fold(args) -> int:
    started = time.time()
    records = []
    if args.sequence:
        records.append(("seq", args.sequence))
    if args.input:
        text = Path(args.input).read_text(encoding="utf-8")
        for name, seq in _iter_fasta(text):
            records.append((name, seq))
    if not records:
        raise ConfigError("fold requires --sequence or an input file")
    folded = [
        (name, nussinov_fold(seq, minloop=args.minloop, wobble=not args.no_wobble))
        for name, seq in records
    ]
    _emit(format_dot_bracket(folded), args.output)
    if args.output:
        _write_manifest(args, args.output, [args.input], started)
    return 0


def _iter_fasta(text: str):
    """FASTA-like records; a trailing dot-bracket line is ignored."""
    name = None
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            name = line[1:].strip()
        elif set(line) <= set("().[]"):
            continue
        else:
            if name is None:
                raise ParseError("sequence before '>' header", ln)
            yield name, line.upper()


def _cmd_coarsen(args) -> int:
    started = time.time()
    graphs = _read_graphs(args.input, args.lenient)
    coarsener = get_coarsener(args.coarsener)
    if coarsener is None:
        raise ConfigError("coarsen requires --coarsener rna or mol")
    out = []
    for g in graphs:
        res = coarsener(g)
        out.append(
            {
                "coarse": graph_to_dict(res.coarse),
                "base_to_coarse": {str(k): v for k, v in sorted(res.base_to_coarse.items())},
            }
        )
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.output)
    if args.output:
        _write_manifest(args, args.output, [args.input], started)
    return 0


def _cmd_vectorize(args) -> int:
    started = time.time()
    graphs = _read_graphs(args.input, args.lenient)
    kp = KernelParams(args.max_radius, args.max_distance, args.feature_bits)
    lines = [vectorize(g, kp).to_svmlight() for g in graphs]
    _emit("\n".join(lines) + ("\n" if lines else ""), args.output)
    if args.output:
        _write_manifest(args, args.output, [args.input], started)
    return 0


def _cmd_filters(args) -> int:
    started = time.time()
    graphs = _read_graphs(args.input, args.lenient)
    results = []
    for i, g in enumerate(graphs):
        ok, reasons = rna_validity_filters(g)
        results.append({"index": i, "pass": ok, "violations": reasons})
    passed = sum(1 for r in results if r["pass"])
    report = {
        "results": results,
        "pass_fraction": passed / len(results) if results else 0.0,
    }
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.output)
    if args.output:
        _write_manifest(args, args.output, [args.input], started)
    return 0


def _cmd_synth(args) -> int:
    started = time.time()
    if args.family == "hairpin":
        structures = hairpin_family(args.count, seed=args.seed)
    else:
        structures = cloverleaf_family(args.count, seed=args.seed)
    records = [(f"{args.family}-{i}", s) for i, s in enumerate(structures)]
    _emit(format_dot_bracket(records), args.output)
    if args.output:
        _write_manifest(args, args.output, [], started)
    return 0


# -- parser ---------------------------------------------------------------------


def _add_kernel_flags(sp):
    sp.add_argument("--max-radius", type=int, default=3)
    sp.add_argument("--max-distance", type=int, default=3)
    sp.add_argument("--feature-bits", type=int, default=16)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--log-level", default="warning")
    common.add_argument("--config", help="key=value file of flag defaults")
    common.add_argument(
        "--lenient", action="store_true", help="skip invalid records instead of failing"
    )

    parser = argparse.ArgumentParser(prog="grammargen")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("induce", parents=[common], help="induce a grammar")
    sp.add_argument("corpus")
    sp.add_argument("--radius", default="0,1", help="comma-separated core radii")
    sp.add_argument("--thickness", type=int, default=1)
    sp.add_argument("--base-thickness", type=int, default=2)
    sp.add_argument("--coarsener", default="none", choices=["rna", "mol", "none"])
    sp.add_argument("--min-count", type=int, default=1)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_induce)

    sp = sub.add_parser("fit", parents=[common], help="fit a one-class model")
    sp.add_argument("corpus")
    sp.add_argument("--nu", type=float, default=0.5)
    sp.add_argument("--epochs", type=int, default=20)
    sp.add_argument("--eta0", type=float, default=0.5)
    _add_kernel_flags(sp)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=_cmd_fit)

    sp = sub.add_parser("sample", parents=[common], help="run MH chains")
    sp.add_argument("--grammar", required=True)
    sp.add_argument("--model", required=True)
    sp.add_argument("--seed-graphs", required=True)
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--burn-in", type=int, default=100)
    sp.add_argument("--interval", type=int, default=50)
    sp.add_argument("--n-attempts", type=int, default=30)
    sp.add_argument("--transformer", default="none")
    sp.add_argument("--chains", type=int, default=1)
    _add_kernel_flags(sp)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_sample)

    sp = sub.add_parser("evaluate", parents=[common], help="evaluation report")
    sp.add_argument("--real", required=True)
    sp.add_argument("--gen", required=True)
    sp.add_argument("--folds", type=int, default=5)
    sp.add_argument("--reps", type=int, default=7)
    sp.add_argument("--nu", type=float, default=0.5)
    sp.add_argument("--epochs", type=int, default=20)
    _add_kernel_flags(sp)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_evaluate)

    sp = sub.add_parser("fold", parents=[common], help="Nussinov folding")
    sp.add_argument("input", nargs="?")
    sp.add_argument("--sequence")
    sp.add_argument("--minloop", type=int, default=3)
    sp.add_argument("--no-wobble", action="store_true")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_fold)

    sp = sub.add_parser("coarsen", parents=[common], help="contract a corpus")
    sp.add_argument("input")
    sp.add_argument("--coarsener", default="rna", choices=["rna", "mol"])
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_coarsen)

    sp = sub.add_parser("vectorize", parents=[common], help="emit sparse vectors")
    sp.add_argument("input")
    _add_kernel_flags(sp)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_vectorize)

    sp = sub.add_parser("filters", parents=[common], help="RNA validity filters")
    sp.add_argument("input")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_filters)

    sp = sub.add_parser("synth", parents=[common], help="synthetic RNA corpora")
    sp.add_argument("--family", default="hairpin", choices=["hairpin", "cloverleaf"])
    sp.add_argument("--count", type=int, default=50)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_synth)

    return parser


def _apply_config(argv):
    """Inject key=value pairs from --config as flags before explicit ones."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise ConfigError("--config requires a file path")
    path = argv[idx + 1]
    injected = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        flag = "--" + key.strip().replace("_", "-")
        value = value.strip()
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                injected.append(flag)
        else:
            injected.extend([flag, value])
    # insert right after the subcommand so explicit flags override
    return argv[:1] + injected + argv[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(argv)
        parser = build_parser()
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=getattr(logging, args.log_level.upper(), logging.WARNING),
            format="%(levelname)s %(name)s: %(message)s",
        )
        return args.func(args)
    except GrammargenError as exc:
        log.error("%s", exc)
        print(f"grammargen: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"grammargen: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
