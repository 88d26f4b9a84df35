"""
Command Line Interface
Subcommands to generate instances, run protocols and report on transcripts
"""

import argparse
import logging
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from ..clients.chat_client import ChatCompletionClient
from ..clients.scripted_agents import AgentKind, ScriptedAgent, ScriptedAgentKind
from ..environment.distractor_pool import load_sentence_pool
from ..environment.genesis import Instance
from ..exceptions import ClientAuthError, ConfigError, EmptyInput, EmptyPool, SchemaVersionError
from ..probing.protocols import Protocol
from ..probing.runner import BatchRunner, TrialSpec
from ..prompting.messages import RenderStyle
from .reporting import load_trials, write_report
from .run_config import AGENTS, PROTOCOLS, RunConfig, generate_instances, load_run_config, write_resolved_config
from .storage import INSTANCE_KIND, TRIAL_KIND, JsonlWriter, completed_ids, read_payloads, write_records

logger = logging.getLogger(__name__)

STEPWISE_PROTOCOLS = ["intermediate", "compressed"]
INSTANCES_FILE = "instances.jsonl"
TRANSCRIPTS_FILE = "transcripts.jsonl"
REPORT_DIR = "report"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--seed", type=int, help="Base seed")
    common.add_argument("--samples", type=int, help="Samples per cell")
    common.add_argument("--distractor-file", help="Distractor sentences, one per line")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    runner = argparse.ArgumentParser(add_help=False)
    runner.add_argument("--instances", help=f"Instance file (default: <out>/{INSTANCES_FILE})")
    runner.add_argument("--transcripts", help=f"Transcript file (default: <out>/{TRANSCRIPTS_FILE})")
    runner.add_argument("--k", type=int, help="Steps folded into Step-0 for compressed initialization")
    runner.add_argument("--style", choices=[s.value for s in RenderStyle])
    runner.add_argument("--agent", choices=AGENTS)
    runner.add_argument("--forget-p", type=float, help="Forgetting probability of the forgetful agent")
    runner.add_argument("--agent-seed", type=int, help="Seed of the random and forgetful agents")
    runner.add_argument("--concurrency", type=int, help="Trials and requests in flight")
    runner.add_argument("--no-progress", action="store_true", help="Hide the progress bar")

    parser = argparse.ArgumentParser(description="Situation tracking evaluation harness")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("generate", parents=[common], help="Write the instance file")

    run = sub.add_parser("run", parents=[common, runner], help="Run a protocol over the instance file")
    run.add_argument("--protocol", choices=PROTOCOLS)
    run.add_argument("--per-step", action="store_true", default=None,
                     help="Probe every remaining step under compressed initialization")

    probe = sub.add_parser("probe", parents=[common, runner], help="Step-wise probing over the instance file")
    probe.add_argument("--protocol", choices=STEPWISE_PROTOCOLS,
                       help="Step-wise protocol (default: the config's, else intermediate)")

    report = sub.add_parser("report", parents=[common], help="Tables and plots from transcripts")
    report.add_argument("--transcripts", nargs="+", help=f"Transcript files (default: <out>/{TRANSCRIPTS_FILE})")
    report.add_argument("--report-dir", help=f"Report directory (default: <out>/{REPORT_DIR})")
    report.add_argument("--no-plots", action="store_true", help="Skip SVG figures")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "out": args.out,
        "base_seed": args.seed,
        "samples": args.samples,
        "distractor_file": args.distractor_file,
        "protocol": getattr(args, "protocol", None),
        "k": getattr(args, "k", None),
        "per_step": getattr(args, "per_step", None),
        "style": getattr(args, "style", None),
        "agent": getattr(args, "agent", None),
        "forget_p": getattr(args, "forget_p", None),
        "agent_seed": getattr(args, "agent_seed", None),
        "concurrency": getattr(args, "concurrency", None),
    }
    if args.command == "probe":
        # every probed step gets its own query under both probe protocols
        overrides["per_step"] = True
    if overrides["concurrency"] is not None:
        overrides["client"] = {"max_concurrent": overrides["concurrency"]}
    config = load_run_config(args.config, overrides)
    if args.command == "probe" and config.protocol not in STEPWISE_PROTOCOLS:
        config = replace(config, protocol="intermediate")
    return config


def make_client(config: RunConfig):
    if config.agent == "http":
        return ChatCompletionClient(config.client)
    return ScriptedAgent(ScriptedAgentKind(AgentKind(config.agent), p=config.forget_p, seed=config.agent_seed))


def cmd_generate(config: RunConfig) -> Path:
    """
    Write every instance of the settings matrix

    Args:
        config: Resolved run configuration

    Returns:
        Path of the instance file
    """
    pool = load_sentence_pool(config.distractor_file) if config.distractor_file else None
    instances = generate_instances(config, pool)
    out_dir = Path(config.out)
    path = out_dir / INSTANCES_FILE
    write_records(path, INSTANCE_KIND, (i.to_record() for i in instances), config=config.to_dict())
    write_resolved_config(config, out_dir)
    return path


def cmd_run(config: RunConfig, instances_path=None, transcripts_path=None, client=None,
            show_progress: bool = True) -> Path:
    """
    Run the configured protocol over an instance file, resuming where it stopped

    Args:
        config: Resolved run configuration
        instances_path: Instance file (default: <out>/instances.jsonl)
        transcripts_path: Transcript file to append to (default: <out>/transcripts.jsonl)
        client: Client override (default: built from config.agent)
        show_progress: Show a progress bar

    Returns:
        Path of the transcript file
    """
    out_dir = Path(config.out)
    instances_path = Path(instances_path) if instances_path else out_dir / INSTANCES_FILE
    transcripts_path = Path(transcripts_path) if transcripts_path else out_dir / TRANSCRIPTS_FILE
    if not instances_path.exists():
        raise ConfigError(f"Instance file {instances_path} not found, run 'generate' first")

    instances = [Instance.from_record(p) for p in read_payloads(instances_path, INSTANCE_KIND)]
    protocol = Protocol(config.protocol)
    if protocol is Protocol.COMPRESSED:
        usable = [i for i in instances if config.k < i.num_steps]
        if len(usable) < len(instances):
            logger.warning(f"Skipping {len(instances) - len(usable)} instances with too few steps for k={config.k}")
        instances = usable

    specs = [
        TrialSpec(instance, protocol, RenderStyle(config.style), config.k if protocol is Protocol.COMPRESSED else None,
                  config.per_step and protocol is Protocol.COMPRESSED)
        for instance in instances
    ]

    client = client if client is not None else make_client(config)
    runner = BatchRunner(client, config.concurrency, show_progress=show_progress)
    resolved = config.to_dict()
    issued = answered = 0
    try:
        with JsonlWriter(transcripts_path, append=True) as writer:
            for trial in runner.run(specs, completed_ids(transcripts_path)):
                writer.write(TRIAL_KIND, trial.to_record(), config=resolved)
                issued += trial.issued
                answered += trial.answered
    finally:
        client.close()

    write_resolved_config(config, out_dir)
    if issued:
        logger.info(f"Response rate {answered}/{issued} ({answered / issued:.1%})")
    return transcripts_path


def cmd_report(config: RunConfig, transcript_paths: Optional[List] = None, report_dir=None,
               make_plots: bool = True) -> dict:
    """
    Tables and figures from transcript files

    Raises:
        EmptyInput: If no transcript records are found
    """
    out_dir = Path(config.out)
    paths = [Path(p) for p in transcript_paths] if transcript_paths else [out_dir / TRANSCRIPTS_FILE]
    missing = [p for p in paths if not p.exists()]
    if missing:
        raise EmptyInput(f"Transcript files not found: {', '.join(str(p) for p in missing)}")

    report_dir = Path(report_dir) if report_dir else out_dir / REPORT_DIR
    outputs = write_report(load_trials(paths), report_dir, config.variant_labels, make_plots=make_plots)
    outputs['resolved_config'] = write_resolved_config(config, report_dir)
    return outputs


def main(argv: Optional[List[str]] = None) -> int:
    """
    CLI entry point

    Returns:
        0 on success, 2 on configuration/schema/authentication/input errors, 1 on IO errors
    """
    args = build_parser().parse_args(argv)
    if args.log_level:
        logging.getLogger().setLevel(args.log_level)

    try:
        config = resolve_config(args)
        if args.command == "generate":
            cmd_generate(config)
        elif args.command in ("run", "probe"):
            cmd_run(config, args.instances, args.transcripts, show_progress=not args.no_progress)
        else:
            cmd_report(config, args.transcripts, args.report_dir, make_plots=not args.no_plots)
    except (ConfigError, SchemaVersionError, ClientAuthError, EmptyInput, EmptyPool) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 2
    except OSError as e:
        logger.error(f"IO error: {e}")
        return 1
    return 0
