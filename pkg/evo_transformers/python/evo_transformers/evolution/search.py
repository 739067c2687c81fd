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
"""Regularized Evolution with hurdles.

The coordinator owns the population, the random generator and the run
directory. Workers only train: children are drawn and mutated on the
coordinator thread and their results are folded back in completion order, so
with one worker and a step budget a search is a pure function of its config.

Candidate ids are handed out when a result is logged, which keeps the log
numbering dense even when workers finish out of order. After every logged
candidate the population, the generator state and the hurdle history are
checkpointed; resuming truncates the log back to the checkpoint.
"""

import concurrent.futures
import dataclasses
import logging
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..config import EvalConfig, SearchConfig, config_to_dict
from ..errors import MutationStall
from ..program.dna import Dna
from ..program.listing import parse_canonical, serialize_program
from ..run_directory import RunDirectory
from ..training.corpus import Corpus
from ..training.fitness import evaluate_fitness
from ..training.record import FitnessRecord
from .hurdles import HurdleSchedule, build_hurdles
from .mutation import mutate, random_dna
from .population import Individual, Population

__all__ = [
    'SearchLogEntry', 'SearchResult', 'RegularizedEvolution', 'run_search',
    'proxy_eval_config', 'LOG_FILE', 'CHECKPOINT_FILE', 'TOP_DIR'
]

LOG_FILE = "search_log.jsonl"
CHECKPOINT_FILE = "checkpoint.json"
TOP_DIR = "top"

# tournaments drawn before a run of stalled parents is an error
MAX_PARENT_DRAWS = 100

Evaluator = Callable[..., FitnessRecord]


@dataclasses.dataclass(frozen=True)
class SearchLogEntry:
    candidate_id: int
    parent_id: Optional[int]
    mutation: str
    record: FitnessRecord
    program: str
    started: float
    finished: float

    def to_dict(self) -> Dict[str, Any]:
        d = self.record.to_dict()
        d.update(candidate_id=self.candidate_id,
                 parent_id=self.parent_id,
                 mutation=self.mutation,
                 fitness=self.record.fitness,
                 program=self.program,
                 started=self.started,
                 finished=self.finished)
        return d

    @staticmethod
    def from_dict(d: Dict[str, Any]) -> 'SearchLogEntry':
        return SearchLogEntry(d["candidate_id"], d["parent_id"],
                              d["mutation"], FitnessRecord.from_dict(d),
                              d["program"], d["started"], d["finished"])


@dataclasses.dataclass
class SearchResult:
    run: RunDirectory
    entries: List[SearchLogEntry]
    best: List[SearchLogEntry]
    # why the search ended before its candidate count, if it did
    stalled: Optional[str] = None


def proxy_eval_config(eval_config: EvalConfig,
                      search_config: SearchConfig) -> EvalConfig:
    """Shrinks the training budget by ``proxy_fraction``."""
    train = eval_config.train
    total = train.budget * search_config.proxy_fraction
    if train.budget_unit == "steps":
        total = max(1, int(round(total)))
    train = dataclasses.replace(train,
                                budget=total,
                                warmup_steps=min(train.warmup_steps,
                                                 max(1, int(total))))
    return dataclasses.replace(eval_config, train=train)


def _structure_key(program: str) -> str:
    # metadata differs between copies of one program
    return "\n".join(line for line in program.splitlines()
                     if not line.startswith("metadata:"))


@dataclasses.dataclass
class _Pending:
    dna: Dna
    parent_id: Optional[int]
    mutation: str
    started: float


class RegularizedEvolution:
    def __init__(self,
                 seed_dna: Dna,
                 search_config: SearchConfig,
                 eval_config: EvalConfig,
                 corpus: Corpus,
                 run: RunDirectory,
                 evaluate: Optional[Evaluator] = None):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.seed_dna = seed_dna
        self.config = search_config
        self.eval_config = proxy_eval_config(eval_config, search_config)
        self.corpus = corpus
        self.run_dir = run
        self.evaluate = evaluate or evaluate_fitness
        train = self.eval_config.train
        self.schedule: HurdleSchedule = build_hurdles(
            search_config.hurdles, train.budget, search_config.median_window,
            1.0 if train.budget_unit == "steps" else 0.0)
        self.rng = np.random.default_rng(search_config.seed)
        self.population = Population(search_config.population_size)
        self.next_id = 0
        self.stalled: Optional[str] = None
        # serialized program -> (record, fitnesses at the hurdles)
        self._initial_cache: Dict[str, Tuple[FitnessRecord,
                                             List[float]]] = {}

    @property
    def total_candidates(self) -> int:
        return self.config.population_size + self.config.candidates

    # persistence

    def checkpoint(self):
        self.run_dir.write_json(
            CHECKPOINT_FILE, {
                "next_candidate": self.next_id,
                "population": [{
                    "candidate_id": ind.candidate_id,
                    "program": serialize_program(ind.dna),
                    "record": ind.record.to_dict(),
                } for ind in self.population],
                "rng": self.rng.bit_generator.state,
                "hurdles": self.schedule.to_dict(),
                "stalled": self.stalled,
            })

    def restore(self) -> bool:
        if not self.run_dir.exists(CHECKPOINT_FILE):
            self.run_dir.truncate_jsonl(LOG_FILE, lambda e: False)
            return False
        state = self.run_dir.read_json(CHECKPOINT_FILE)
        self.next_id = state["next_candidate"]
        self.population = Population(self.config.population_size, [
            Individual(m["candidate_id"], parse_canonical(m["program"]),
                       FitnessRecord.from_dict(m["record"]))
            for m in state["population"]
        ])
        self.rng.bit_generator.state = state["rng"]
        self.schedule = HurdleSchedule.from_dict(state["hurdles"])
        kept = self.run_dir.truncate_jsonl(
            LOG_FILE, lambda e: e["candidate_id"] < self.next_id)
        self.logger.info("resumed at candidate %d, %d log entries kept",
                         self.next_id, kept)
        return True

    # evaluation

    def _train(self, dna: Dna, hook, ticket: int) -> FitnessRecord:
        return self.evaluate(dna, self.eval_config, self.corpus, hook,
                             self.schedule.thresholds, ticket)

    def _commit(self, pending: _Pending,
                record: FitnessRecord) -> SearchLogEntry:
        candidate_id = self.next_id
        self.next_id += 1
        dna = pending.dna.with_metadata(
            birth_step=candidate_id,
            lineage_id=pending.dna.metadata.lineage_id
            if pending.parent_id is not None else candidate_id,
            parent_id=pending.parent_id)
        record = record.with_candidate(candidate_id)
        self.population.add(Individual(candidate_id, dna, record))
        entry = SearchLogEntry(candidate_id, pending.parent_id,
                               pending.mutation, record,
                               serialize_program(dna), pending.started,
                               time.time())
        self.run_dir.append_jsonl(LOG_FILE, entry.to_dict())
        self.checkpoint()
        self.logger.info(
            "candidate %d (parent %s, %s): fitness %.4f, hurdle %d%s",
            candidate_id, pending.parent_id, pending.mutation,
            record.fitness, record.hurdle,
            ", degenerate" if record.degenerate else "")
        return entry

    def initialize(self):
        """Fills the population with seed copies or random programs."""
        while self.next_id < self.config.population_size:
            if self.config.random_init:
                dna = random_dna(self.rng, self.seed_dna.num_instructions(),
                                 len(self.seed_dna.subprograms))
                kind = "random"
            else:
                dna, kind = self.seed_dna, "seed"
            started = time.time()
            key = serialize_program(dna)
            cached = self._initial_cache.get(key)
            if cached is None:
                seen: List[float] = []

                def hook(i: int, fitness: float) -> bool:
                    seen.append(fitness)
                    return True

                record = self._train(dna, hook, self.next_id)
                self._initial_cache[key] = cached = (record, seen)
            record, seen = cached
            # initial members train to the end; their hurdle fitnesses only
            # seed the medians
            for i, fitness in enumerate(seen):
                self.schedule.record(i, fitness)
            self._commit(_Pending(dna, None, kind, started), record)

    def _spawn(self) -> _Pending:
        for _ in range(MAX_PARENT_DRAWS):
            parent = self.population.tournament(self.rng,
                                                self.config.tournament_size)
            try:
                child, mutations = mutate(parent.dna, self.rng,
                                          self.eval_config.compile,
                                          self.config.max_mutation_attempts)
            except MutationStall:
                self.logger.info("parent %d stalled, drawing another",
                                 parent.candidate_id)
                continue
            return _Pending(child, parent.candidate_id,
                            "+".join(str(m) for m in mutations), time.time())
        raise MutationStall(
            f"{MAX_PARENT_DRAWS} parents in a row could not be mutated")

    def evolve(self):
        workers = max(1, self.config.workers)
        tickets = iter(range(self.next_id, 1 << 62))
        with concurrent.futures.ThreadPoolExecutor(workers) as pool:
            inflight: Dict[concurrent.futures.Future, Tuple[int,
                                                            _Pending]] = {}
            while self.next_id < self.total_candidates:
                while self.stalled is None and len(inflight) < workers and \
                        self.next_id + len(inflight) < self.total_candidates:
                    try:
                        pending = self._spawn()
                    except MutationStall as e:
                        self.logger.warning(
                            "search stalled before candidate %d: %s",
                            self.next_id + len(inflight), e)
                        self.stalled = str(e)
                        break
                    ticket = next(tickets)
                    future = pool.submit(self._train, pending.dna,
                                         self.schedule.gate, ticket)
                    inflight[future] = (ticket, pending)
                if not inflight:
                    break
                done, _ = concurrent.futures.wait(
                    inflight, return_when=concurrent.futures.FIRST_COMPLETED)
                for future in sorted(done, key=lambda f: inflight[f][0]):
                    ticket, pending = inflight.pop(future)
                    error = future.exception()
                    if error is None:
                        record = future.result()
                    else:
                        self.logger.warning("worker on ticket %d crashed: %s",
                                            ticket, error)
                        record = FitnessRecord.degenerate_record(
                            None, self.eval_config.stack.vocab, str(error))
                    self._commit(pending, record)

    def top(self, entries: List[SearchLogEntry]) -> List[SearchLogEntry]:
        best, seen = [], set()
        for entry in sorted(entries,
                            key=lambda e: (e.record.fitness, e.candidate_id)):
            key = _structure_key(entry.program)
            if key in seen:
                continue
            seen.add(key)
            best.append(entry)
            if len(best) >= self.config.top_n:
                break
        return best

    def emit_top(self, best: List[SearchLogEntry]):
        for rank, entry in enumerate(best):
            self.run_dir.write_text(
                f"{TOP_DIR}/rank{rank:02d}_candidate{entry.candidate_id}.dna",
                entry.program)
        self.run_dir.write_json(
            f"{TOP_DIR}/top.json", {
                "top": [{
                    "rank": rank,
                    "candidate_id": e.candidate_id,
                    "fitness": e.record.fitness,
                    "loss": e.record.loss,
                } for rank, e in enumerate(best)],
                "stalled": self.stalled,
            })

    def run(self, resume: bool = False) -> SearchResult:
        if resume:
            self.restore()
        self.initialize()
        self.evolve()
        if self.stalled is not None:
            self.checkpoint()
        entries = [
            SearchLogEntry.from_dict(e)
            for e in self.run_dir.read_jsonl(LOG_FILE)
        ]
        best = self.top(entries)
        self.emit_top(best)
        if best:
            self.logger.info("search done: %d candidates, best %d at %.4f",
                             len(entries), best[0].candidate_id,
                             best[0].record.fitness)
        return SearchResult(self.run_dir, entries, best, self.stalled)


def run_search(seed_dna: Dna,
               search_config: SearchConfig,
               eval_config: EvalConfig,
               corpus: Corpus,
               run_dir: str,
               resume: bool = False,
               evaluate: Optional[Evaluator] = None) -> SearchResult:
    """Runs (or resumes) a search in ``run_dir``.

    Args:
        seed_dna: program copied into the initial population.
        search_config: population, tournament, candidate count, hurdles,
            workers and top-N.
        eval_config: per-candidate compile, stack and training settings;
            the training budget is scaled by ``proxy_fraction``.
        corpus: training corpus.
        run_dir: run directory; created with a config snapshot.
        resume: continue from the checkpoint in ``run_dir``.
        evaluate: replaces ``evaluate_fitness``; same signature.
    Returns:
        SearchResult with every log entry and the top-N distinct programs.
    """
    payload = {
        "search": config_to_dict(search_config),
        "eval": config_to_dict(eval_config),
        "seed_program": serialize_program(seed_dna),
        "corpus": corpus.name,
        "corpus_tokens": len(corpus),
    }
    run = RunDirectory.create(run_dir, payload, resume)
    search = RegularizedEvolution(seed_dna, search_config, eval_config,
                                  corpus, run, evaluate)
    return search.run(resume)
