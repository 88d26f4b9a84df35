"""
Batch Runner Module
Runs trials concurrently up to a bound and yields them in input order
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Optional

from tqdm import tqdm

from ..environment.genesis import Instance
from ..exceptions import ClientAuthError, ConfigError
from ..prompting.messages import RenderStyle
from .protocols import Protocol, Trial, make_trial_id, run_compressed_init, run_final_query, run_intermediate_probing


@dataclass(frozen=True)
class TrialSpec:
    instance: Instance
    protocol: Protocol = Protocol.FINAL
    style: RenderStyle = RenderStyle.TRADITIONAL
    k: Optional[int] = None
    per_step: bool = False

    def trial_id(self, model_label: str) -> str:
        return make_trial_id(self.instance, self.protocol, self.style, model_label, self.k, self.per_step)


def run_trial(spec: TrialSpec, client) -> Trial:
    if spec.protocol is Protocol.FINAL:
        return run_final_query(spec.instance, client, spec.style)
    if spec.protocol is Protocol.INTERMEDIATE:
        return run_intermediate_probing(spec.instance, client, spec.style)
    if spec.k is None:
        raise ConfigError("Compressed initialization needs k")
    return run_compressed_init(spec.instance, spec.k, client, spec.style, per_step=spec.per_step)


class BatchRunner:
    """Runs trial specs against one client"""

    def __init__(self, client, concurrency: int = 1, show_progress: bool = True):
        """
        Initialize Batch Runner

        Args:
            client: ChatCompletionClient or ScriptedAgent
            concurrency: Maximum trials in flight
            show_progress: Show a tqdm progress bar
        """
        if concurrency < 1:
            raise ConfigError(f"Concurrency must be >= 1, got {concurrency}")
        self.client = client
        self.concurrency = concurrency
        self.show_progress = show_progress
        self.logger = logging.getLogger(__name__)

    def pending(self, specs: Iterable[TrialSpec], completed_ids=frozenset()) -> List[TrialSpec]:
        specs = list(specs)
        todo = [s for s in specs if s.trial_id(self.client.name) not in completed_ids]
        skipped = len(specs) - len(todo)
        if skipped:
            self.logger.info(f"Resuming: skipping {skipped} completed trials")
        return todo

    def run(self, specs: Iterable[TrialSpec], completed_ids=frozenset(),
            on_trial: Optional[Callable[[Trial], None]] = None) -> Iterator[Trial]:
        """
        Run all pending specs

        Args:
            specs: Trial specs in output order
            completed_ids: Trial ids to skip
            on_trial: Called with each finished trial, in input order

        Yields:
            Trials in input order

        Raises:
            ClientAuthError: Aborts the batch; unstarted trials are cancelled
        """
        todo = self.pending(specs, completed_ids)
        self.logger.info(f"Running {len(todo)} trials with concurrency {self.concurrency}")

        with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
            futures = [pool.submit(run_trial, spec, self.client) for spec in todo]
            try:
                for future in tqdm(futures, desc="Trials", disable=not self.show_progress):
                    trial = future.result()
                    if on_trial is not None:
                        on_trial(trial)
                    yield trial
            except ClientAuthError:
                self.logger.error("Authentication failed, aborting run")
                for future in futures:
                    future.cancel()
                raise
