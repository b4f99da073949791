import logging
from typing import Optional

import click

from msgprol.cli import deps
from msgprol.core.errors import ConfigurationError
from msgprol.core.logging import kv
from msgprol.data.checkpoint import save_checkpoint
from msgprol.msann.ledger import write_ledger_csv
from msgprol.msann.training import run_training
from msgprol.schemas.training import TrainConfig

logger = logging.getLogger(__name__)


@click.command("train-msann")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), required=True, help="JSON run config with a 'training' section.")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Overrides the config seed.")
@click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Output directory.")
@click.option("--gamma", type=click.IntRange(min=1), default=None, help="Recursion count per cycle.")
@click.option("--levels", "--L", "levels", type=click.IntRange(min=0), default=None, help="Hierarchy depth L.")
@click.option("--k", "k", type=click.IntRange(min=1), default=None, help="Batches per level visit.")
def train_msann(config_path: str, seed: Optional[int], out: Optional[str],
                gamma: Optional[int], levels: Optional[int], k: Optional[int]):
    """Train a multiscale autoencoder and write its cost ledger."""
    config = deps.load_run_config(config_path)
    if config.training is None:
        raise ConfigurationError("train-msann needs a config with a 'training' section.")

    overrides = {"seed": deps.resolve_seed(seed, config, config.training.seed)}
    for name, value in (("gamma", gamma), ("levels", levels), ("k", k)):
        if value is not None:
            overrides[name] = value
    cfg = TrainConfig.model_validate({**config.training.model_dump(), **overrides})
    out_dir = deps.get_output_dir(out, config)

    result = run_training(cfg, deps.get_data_dir())

    write_ledger_csv(result.ledger, out_dir / "ledger.csv")
    deps.write_json(result.summary, out_dir / "summary.json")
    if cfg.checkpoint:
        save_checkpoint(result.hierarchy, out_dir / "checkpoint")

    summary = result.summary
    tenth = "N/A" if summary.cost_to_tenth_initial_mse is None else f"{summary.cost_to_tenth_initial_mse:.6g}"
    logger.info(kv(event="train_msann.done", out=out_dir))
    click.echo(f"final_mse={summary.final_mse:.6e} cost_to_tenth={tenth} total_cost={summary.total_cost:.6g} out={out_dir}")
