import logging
from typing import Optional

import click

from msgprol.cli import deps
from msgprol.core.errors import ConfigurationError
from msgprol.core.logging import kv
from msgprol.data.matrix_csv import write_matrix_csv
from msgprol.graph.core import graph_from_spec
from msgprol.graph.prolongation import ProlongationProblem, orthogonality_defect, solve
from msgprol.schemas.prolongation import SolveReport

logger = logging.getLogger(__name__)


@click.command("solve-prolongation")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), required=True, help="JSON run config with a 'problem' section.")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Overrides the config seed.")
@click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Output directory.")
def solve_prolongation(config_path: str, seed: Optional[int], out: Optional[str]):
    """Optimize a prolongation map starting from the minimal eigenvalue matching."""
    config = deps.load_run_config(config_path)
    if config.problem is None:
        raise ConfigurationError("solve-prolongation needs a config with a 'problem' section.")
    problem = config.problem
    optimizer = problem.optimizer.model_copy(update={"seed": deps.resolve_seed(seed, config, problem.optimizer.seed)})
    out_dir = deps.get_output_dir(out, config)

    prob = ProlongationProblem(
        g1=graph_from_spec(problem.g1),
        g2=graph_from_spec(problem.g2),
        s=problem.s,
        alpha=problem.alpha,
        beta=problem.beta,
    )
    result = solve(prob, optimizer, problem.init)
    final = result.map

    write_matrix_csv(final.p, out_dir / "prolongation.csv")
    report = SolveReport(
        objective=final.objective_value,
        diffusion_term=result.final_terms[0],
        locality_term=result.final_terms[1],
        alpha=final.alpha,
        beta=final.beta,
        s=final.s,
        iters=final.iters,
        provenance=final.provenance,
        initial_objective=result.initial_objective,
        initial_diffusion_term=result.initial_terms[0],
        initial_locality_term=result.initial_terms[1],
        matching_cost=result.matching.cost if result.matching is not None else None,
        n1=prob.n1,
        n2=prob.n2,
        orthogonality_defect=orthogonality_defect(final.p),
    )
    deps.write_json(report, out_dir / "report.json")
    logger.info(kv(event="solve.done", objective=report.objective, iters=report.iters))
    click.echo(f"objective={report.objective:.6e} initial={report.initial_objective:.6e} iters={report.iters} out={out_dir}")
