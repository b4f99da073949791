import logging
from typing import Optional

import click

from msgprol.cli import deps
from msgprol.core.logging import kv
from msgprol.data.matrix_csv import write_matrix_csv
from msgprol.graph.core import laplacian, make_lineage, manhattan
from msgprol.schemas.graph import GraphFamilyEnum, LineageManifest, LineageMemberEntry

logger = logging.getLogger(__name__)

GENERATED_FAMILIES = [f.value for f in GraphFamilyEnum if f != GraphFamilyEnum.custom]


@click.command("lineage")
@click.option("--family", type=click.Choice(GENERATED_FAMILIES), required=True, help="Graph family to generate.")
@click.option("--depth", type=click.IntRange(min=1), required=True, help="Number of lineage members.")
@click.option("--base", "base_size", type=click.IntRange(min=1), required=True, help="Size (or grid side) of the first member.")
@click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Output directory.")
def lineage(family: str, depth: int, base_size: int, out: Optional[str]):
    """Write Laplacian and distance matrices of a generated lineage."""
    out_dir = deps.get_output_dir(out)
    members = make_lineage(family, depth, base_size)

    entries = []
    for level, graph in enumerate(members):
        lap_name, dist_name = f"laplacian_{level}.csv", f"distance_{level}.csv"
        write_matrix_csv(laplacian(graph).data, out_dir / lap_name)
        write_matrix_csv(manhattan(graph).data, out_dir / dist_name)
        entries.append(LineageMemberEntry(
            level=level, size=graph.n, edge_count=graph.edge_count,
            laplacian_file=lap_name, distance_file=dist_name,
        ))

    manifest = LineageManifest(
        family=GraphFamilyEnum(family), depth=depth, base_size=base_size,
        sizes=members.sizes, members=entries,
    )
    deps.write_json(manifest, out_dir / "manifest.json")
    logger.info(kv(event="lineage.done", family=family, sizes=members.sizes))
    click.echo(f"family={family} sizes={members.sizes} out={out_dir}")
