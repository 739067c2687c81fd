# Copyright (C) 2026 The evo_transformers Authors.
# All rights reserved.
# Licensed under the BSD 3-Clause License (the "License"); you may
# not use this file except in compliance with the License. You may
# obtain a copy of the License at
# https://opensource.org/licenses/BSD-3-Clause
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" basis,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied. See the License for the specific language governing
# permissions and limitations under the License.
# See the AUTHORS file for names of contributors.
"""
evo_transformers command line

Usage:
    evo-transformers compile <program> [options]
    evo-transformers train <program> <corpus> [options]
    evo-transformers search <corpus> [options]
    evo-transformers ablate <program> <corpus> [<flag>...] [options]
    evo-transformers analyze (fit|speedup|savings|pareto) <input>... [options]
    evo-transformers -h | --help

Programs are `.dna` files or names from the seed library (transformer,
primer, primer_ez, primer_verbatim, transformer_gelu, transformer_pp).

Options:
    -h --help                  Show this screen.
    --min-params=<n>           Lower bound on stack parameters, e.g. 0.5M.
    --max-params=<n>           Upper bound on stack parameters, e.g. 1.5M.
    --scale-unit=<int>         Scale unit used without parameter bounds [default: 8].
    --seq-len=<int>            Sequence length [default: 64].
    --batch-tokens=<int>       Tokens per training batch [default: 4096].
    --layers=<int>             Decoder blocks in the stack [default: 2].
    --vocab=<int>              Vocabulary size [default: 256].
    --untied                   Separate output projection.
    --no-guards                Disable the numeric guards of the kernels.
    --budget=<b>               Steps (500), seconds (300s) or hours (7h) [default: 500].
    --warmup=<int>             Warmup steps [default: 50].
    --lr=<float>               Peak learning rate [default: 0.01].
    --eval-interval=<float>    Budget between validation samples [default: 50].
    --seed=<int>               Master seed [default: 0].
    --run-dir=<dir>            Run directory, by default under $EVO_TRANSFORMERS_RUN_ROOT.
    --strict                   Exit 1 on degenerate records and unreached targets.
    --dot=<path>               Write the compiled block as Graphviz DOT.
    --flattened                Print the flattened listing of the program.
    --causality-trials=<int>   Perturbation trials of the causality check [default: 100].
    --seed-program=<p>         Program copied into the population [default: transformer].
    --population=<int>         Population size [default: 100].
    --tournament=<int>         Tournament size [default: 10].
    --candidates=<int>         Candidates after the initial population [default: 300].
    --hurdles=<int>            Number of halving hurdles [default: 4].
    --workers=<int>            Concurrent training workers [default: 1].
    --top=<int>                Programs written at the end of a search [default: 10].
    --proxy-fraction=<f>       Share of the budget a candidate trains for (default 7/24).
    --median-window=<int>      Hurdle medians over the latest entries only.
    --random-init              Start the search from random programs.
    --resume                   Continue the search in --run-dir.
    --mode=<m>                 insertion or ablation [default: insertion].
    --variable-seq-len         Skip modifications that assume a fixed sequence length.
    --compute=<col>            Compute column of loss curves, step or wall_seconds [default: step].
    --frontier                 Fit the lower convex hull of the points only.
    --plain                    Plain least squares instead of the Huber fit.
    --tolerance=<f>            Relative exponent gap accepted as parallel [default: 0.1].
    --out=<dir>                Run directory of analyze, overrides --run-dir.
    --log-level=<int>          0 warnings, 1 info, 2 debug [default: 1].
"""

import collections
import dataclasses
import logging
import os
import sys
from typing import Any, Dict, List, Optional

import docopt

from .analysis.curves import LossCurve
from .analysis.pareto import pareto_front, read_points_csv
from .analysis.power_law import fit_power_law, frontier_points, \
    savings_from_offset
from .analysis.report import write_csv, write_json
from .analysis.speedup import speedup_report
from .compiler.causality import verify_causality
from .compiler.dump import dump_dot, dump_text
from .compiler.flatten import emit_flattened
from .compiler.graph import compile_program
from .compiler.resize import stack_parameter_count
from .config import DEFAULT_PROXY_FRACTION, CompileConfig, EvalConfig, \
    SearchConfig, StackConfig, TrainConfig, config_hash, config_to_dict, \
    default_run_root, parse_budget, parse_count
from .errors import ContractViolation, EvoTransformersError, \
    ModificationNotApplicable, NotReached
from .evolution.search import run_search
from .program.dna import Dna
from .program.listing import load_program, serialize_program
from .run_directory import RunDirectory
from .seeds.library import SEED_LIBRARY, get_seed
from .seeds.modifications import apply_modification, apply_modifications, \
    parse_flags
from .training.corpus import Corpus
from .training.fitness import evaluate_program
from .utils import set_stderr_verbose_level

__all__ = ['main', 'load_program_arg', 'eval_config_from_args']

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2


def load_program_arg(source: str) -> Dna:
    if os.path.exists(source):
        return load_program(source)
    if source in SEED_LIBRARY:
        return get_seed(source)
    raise ValueError(f"{source!r} is neither a program file nor a seed name")


def _program_stem(source: str) -> str:
    return os.path.splitext(os.path.basename(source))[0]


def _optional_int(text: Optional[str]) -> Optional[int]:
    return None if text is None else int(text)


def eval_config_from_args(args: Dict[str, Any]) -> EvalConfig:
    seq_len = int(args['--seq-len'])
    seed = int(args['--seed'])
    min_params = parse_count(args['--min-params']) \
        if args['--min-params'] else None
    max_params = parse_count(args['--max-params']) \
        if args['--max-params'] else None
    bounded = min_params is not None or max_params is not None
    budget, unit = parse_budget(args['--budget'])
    warmup = int(args['--warmup'])
    if unit == "steps":
        budget = int(budget)
        warmup = max(1, min(warmup, budget))
    compile_config = CompileConfig(
        scale_unit=None if bounded else int(args['--scale-unit']),
        seq_len=seq_len,
        numeric_guards=not args['--no-guards'],
        seed=seed)
    stack = StackConfig(int(args['--layers']), int(args['--vocab']),
                        not args['--untied'])
    train = TrainConfig(batch_tokens=int(args['--batch-tokens']),
                        seq_len=seq_len,
                        budget=budget,
                        budget_unit=unit,
                        warmup_steps=warmup,
                        peak_lr=float(args['--lr']),
                        eval_interval=float(args['--eval-interval']),
                        seed=seed)
    return EvalConfig(compile_config, stack, train, min_params, max_params)


def _open_run(args: Dict[str, Any], command: str, stem: str,
              payload: Dict[str, Any], resume: bool) -> RunDirectory:
    root = args['--run-dir'] or os.path.join(
        default_run_root(), f"{command}-{stem}-{config_hash(payload)[:8]}")
    return RunDirectory.create(root, payload, resume)


def cmd_compile(args: Dict[str, Any]) -> int:
    dna = load_program_arg(args['<program>'])
    eval_config = eval_config_from_args(args)
    graph = compile_program(dna, eval_config.compile, eval_config.min_params,
                            eval_config.max_params, eval_config.stack)
    stack_params = stack_parameter_count(dna, graph.config,
                                         eval_config.stack)
    report = verify_causality(graph,
                              trials=int(args['--causality-trials']),
                              seed=int(args['--seed']))
    ops = collections.Counter(node.label for node in graph.nodes)
    print(f"program: {args['<program>']}")
    print(f"scale_unit: {graph.scale_unit}")
    print(f"d_model: {graph.d_model}")
    print(f"nodes: {len(graph.nodes)}")
    print(f"block_parameters: {graph.parameter_count()}")
    print(f"stack_parameters: {stack_params}")
    print("causality: " + (
        f"passed ({report.trials} trials, {report.skipped} skipped)"
        if report.passed else f"VIOLATED ({report.first_violation})"))
    print("ops: " + " ".join(f"{k}={v}" for k, v in sorted(ops.items())))
    print(dump_text(graph))
    if args['--flattened']:
        print(emit_flattened(dna, graph.scale_unit, graph.config))
    if args['--dot']:
        with open(args['--dot'], "w") as f:
            f.write(dump_dot(graph))
    return EXIT_OK if report.passed else EXIT_INTERNAL


def cmd_train(args: Dict[str, Any]) -> int:
    dna = load_program_arg(args['<program>'])
    eval_config = eval_config_from_args(args)
    corpus = Corpus.from_file(args['<corpus>'])
    payload = {
        "command": "train",
        "program": serialize_program(dna),
        "eval": config_to_dict(eval_config),
        "corpus": corpus.name,
        "corpus_tokens": len(corpus),
    }
    run = _open_run(args, "train", _program_stem(args['<program>']), payload,
                    resume=True)
    run.write_text("program.dna", serialize_program(dna))
    result = evaluate_program(dna, eval_config, corpus)
    result.write_csv(run.path("curve.csv"))
    run.write_json("record.json", {"record": result.record.to_dict()})
    record = result.record
    print(f"run: {run.root}")
    print(f"loss: {record.loss:.6f} perplexity: {record.perplexity:.4f} "
          f"steps: {record.steps} degenerate: {record.degenerate}")
    if record.degenerate and args['--strict']:
        return EXIT_USAGE
    return EXIT_OK


def cmd_search(args: Dict[str, Any]) -> int:
    seed_dna = load_program_arg(args['--seed-program'])
    eval_config = eval_config_from_args(args)
    corpus = Corpus.from_file(args['<corpus>'])
    proxy = float(args['--proxy-fraction']) if args['--proxy-fraction'] \
        else DEFAULT_PROXY_FRACTION
    search_config = SearchConfig(
        population_size=int(args['--population']),
        tournament_size=int(args['--tournament']),
        candidates=int(args['--candidates']),
        hurdles=int(args['--hurdles']),
        proxy_fraction=proxy,
        workers=int(args['--workers']),
        top_n=int(args['--top']),
        median_window=_optional_int(args['--median-window']),
        random_init=bool(args['--random-init']),
        seed=int(args['--seed']))
    if args['--resume'] and not args['--run-dir']:
        raise ValueError("--resume needs --run-dir")
    root = args['--run-dir'] or os.path.join(
        default_run_root(), f"search-{_program_stem(args['--seed-program'])}"
        f"-seed{search_config.seed}")
    result = run_search(seed_dna, search_config, eval_config, corpus, root,
                        bool(args['--resume']))
    print(f"run: {result.run.root}")
    if result.stalled is not None:
        print(f"stalled: {result.stalled}")
    for rank, entry in enumerate(result.best):
        print(f"{rank:3d} candidate {entry.candidate_id:6d} "
              f"perplexity {entry.record.perplexity:.4f}")
    return EXIT_OK


def _ablation_rows(base: Dna, flags, mode: str, variable_seq_len: bool):
    """(name, flag, program) per variant; the baseline comes first and
    inapplicable flags come back with program None."""
    applicable = []
    for flag in flags:
        try:
            apply_modification(base, flag, variable_seq_len)
            applicable.append(flag)
        except ModificationNotApplicable as e:
            logger.warning("skipping %s: %s", flag.name, e)
    skipped = [(f"-{f.name}" if mode == "ablation" else f"+{f.name}", f, None)
               for f in flags if f not in applicable]
    if mode == "insertion":
        rows = [("baseline", None, base)]
        rows += [(f"+{f.name}", f,
                  apply_modification(base, f, variable_seq_len))
                 for f in applicable]
    else:
        rows = [("baseline",
                 None, apply_modifications(base, applicable, variable_seq_len))]
        rows += [(f"-{f.name}", f,
                  apply_modifications(base,
                                      [g for g in applicable if g is not f],
                                      variable_seq_len)) for f in applicable]
    return rows + skipped


def cmd_ablate(args: Dict[str, Any]) -> int:
    mode = args['--mode']
    if mode not in ("insertion", "ablation"):
        raise ValueError(f"--mode must be insertion or ablation, got {mode}")
    base = load_program_arg(args['<program>'])
    flags = parse_flags(args['<flag>'])
    eval_config = eval_config_from_args(args)
    corpus = Corpus.from_file(args['<corpus>'])
    payload = {
        "command": "ablate",
        "mode": mode,
        "flags": [f.name for f in flags],
        "program": serialize_program(base),
        "eval": config_to_dict(eval_config),
        "corpus": corpus.name,
    }
    run = _open_run(args, "ablate", _program_stem(args['<program>']),
                    payload, resume=True)
    rows = _ablation_rows(base, flags, mode, bool(args['--variable-seq-len']))
    table: List[Dict[str, Any]] = []
    baseline_pplx = None
    for name, flag, dna in rows:
        if dna is None:
            table.append({"variant": name, "flag": flag.name,
                          "skipped": True})
            continue
        record = evaluate_program(dna, eval_config, corpus).record
        if flag is None:
            baseline_pplx = record.perplexity
            delta = 0.0
        elif mode == "insertion":
            delta = (baseline_pplx - record.perplexity) / baseline_pplx
        else:
            delta = (record.perplexity - baseline_pplx) / baseline_pplx
        table.append({
            "variant": name,
            "flag": flag.name if flag else "",
            "skipped": False,
            "perplexity": record.perplexity,
            "loss": record.loss,
            "degenerate": record.degenerate,
            "delta": delta,
        })
    columns = ("variant", "flag", "skipped", "perplexity", "loss",
               "degenerate", "delta")
    write_csv(run.path("ablation.csv"), columns,
              [[row.get(c, "") for c in columns] for row in table])
    run.write_json("ablation.json", {"mode": mode, "rows": table})
    for row in table:
        if row["skipped"]:
            print(f"{row['variant']:<32} skipped")
        else:
            print(f"{row['variant']:<32} pplx {row['perplexity']:10.4f} "
                  f"delta {row['delta']:+.4f}")
    return EXIT_OK


def _curves(args: Dict[str, Any]) -> List[LossCurve]:
    return [
        LossCurve.from_csv(path, args['--compute'])
        for path in args['<input>']
    ]


def _fit(curve: LossCurve, args: Dict[str, Any]):
    data = frontier_points(curve) if args['--frontier'] else curve
    return fit_power_law(data, robust=not args['--plain'])


def cmd_analyze(args: Dict[str, Any]) -> int:
    mode = next(m for m in ("fit", "speedup", "savings", "pareto")
                if args[m])
    payload = {
        "command": "analyze",
        "mode": mode,
        "inputs": [os.path.abspath(path) for path in args['<input>']],
        "compute": args['--compute'],
        "frontier": bool(args['--frontier']),
        "plain": bool(args['--plain']),
        "tolerance": float(args['--tolerance']),
    }
    if args['--out']:
        args = dict(args, **{'--run-dir': args['--out']})
    run = _open_run(args, "analyze", mode, payload, resume=True)
    out = run.root
    stamp = {"hash": run.config_hash}
    print(f"run: {out}")
    code = EXIT_OK
    if mode == "fit":
        fits = [(c.label, _fit(c, args)) for c in _curves(args)]
        write_json(os.path.join(out, "fits.json"),
                   dict({label: fit for label, fit in fits}, **stamp))
        write_csv(os.path.join(out, "fits.csv"),
                  ("label", "a", "k", "residual", "ok"),
                  [(label, f.a, f.k, f.residual, f.ok) for label, f in fits])
        for label, f in fits:
            print(f"{label}: a={f.a:.6g} k={f.k:.6g} residual={f.residual:.3g}"
                  f"{'' if f.ok else ' FAILED'}")
            if not f.ok and args['--strict']:
                code = EXIT_USAGE
    elif mode == "speedup":
        baseline, treatment = _two(_curves(args))
        try:
            crossing = speedup_report(baseline, treatment)
            result = {
                "reached": True,
                "factor": crossing.factor,
                "target_loss": crossing.target_loss,
                "crossing_compute": crossing.compute,
                "baseline_compute": crossing.baseline_compute,
            }
            print(f"speedup {crossing.factor:.6g} (treatment reaches "
                  f"{crossing.target_loss:.6g} at {crossing.compute:.6g})")
        except NotReached as e:
            result = {"reached": False, "target_loss": e.target,
                      "best_loss": e.best_loss}
            print(str(e))
            if args['--strict']:
                code = EXIT_USAGE
        write_json(os.path.join(out, "speedup.json"), dict(result, **stamp))
    elif mode == "savings":
        baseline, treatment = _two(_curves(args))
        fit_b, fit_t = _fit(baseline, args), _fit(treatment, args)
        law = savings_from_offset(fit_b, fit_t, float(args['--tolerance']))
        losses = sorted(set(baseline.loss) | set(treatment.loss))
        write_json(os.path.join(out, "savings.json"), {
            "baseline": fit_b,
            "treatment": fit_t,
            "savings": law,
            **stamp
        })
        write_csv(os.path.join(out, "savings.csv"),
                  ("loss", "baseline_compute", "treatment_compute",
                   "savings"),
                  [(loss, law.baseline_compute(loss), law.treatment_compute(loss),
                    law.savings_at_loss(loss)) for loss in losses])
        print(f"b={law.b:.6g} k={law.k:.6g} "
              f"coefficient={law.coefficient:.6g}")
    else:
        points = [p for path in args['<input>'] for p in read_points_csv(path)]
        front = pareto_front(points)
        write_json(os.path.join(out, "pareto.json"),
                   {"front": [dataclasses.asdict(p) for p in front], **stamp})
        write_csv(os.path.join(out, "pareto.csv"),
                  ("label", "inference_seconds", "loss"),
                  [(p.label, p.inference_seconds, p.loss) for p in front])
        for p in front:
            print(f"{p.label}: {p.inference_seconds:.6g} s, loss {p.loss:.6g}")
    return code


def _two(curves: List[LossCurve]):
    if len(curves) != 2:
        raise ValueError(f"expected a baseline and a treatment curve, got "
                         f"{len(curves)} inputs")
    return curves


COMMANDS = {
    "compile": cmd_compile,
    "train": cmd_train,
    "search": cmd_search,
    "ablate": cmd_ablate,
    "analyze": cmd_analyze,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = docopt.docopt(__doc__, argv=argv)
    except docopt.DocoptExit as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    set_stderr_verbose_level(int(args['--log-level']))
    command = next(name for name in COMMANDS if args[name])
    try:
        return COMMANDS[command](args)
    except ContractViolation as e:
        logger.error("internal error: %s", e)
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (EvoTransformersError, ValueError, OSError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
