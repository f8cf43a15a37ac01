"""Sign-region maps over the collider table.

Fixing the two diagonal entries P(C=1|0,0) and P(C=1|1,1) and sweeping the
off-diagonal pair traces out where the bias is positive, negative or zero.
This script classifies a few handpicked tables, then exports the three
grid families as CSV (ready for any plotting tool) and prints coarse ASCII
previews.
"""

from pathlib import Path

from colliderbias import (
    ColliderCpt,
    EdgeCpt,
    GridFamily,
    GridFixed,
    classify_effects,
    emit_grid,
)
from colliderbias.cli import grid_to_csv

GLYPH = {1: "+", 0: "0", -1: "-"}


def preview(grid, column: int) -> None:
    for j in reversed(range(grid.resolution)):   # p01 upward
        row = "".join(GLYPH[int(grid.cells[i, j, column])] for i in range(grid.resolution))
        print("   " + row)


print("effect-pattern classification at a few tables:")
for label, cpt in [
    ("reinforcing ", ColliderCpt(given_00=0.15, given_01=0.25, given_10=0.25, given_11=0.75)),
    ("antagonistic", ColliderCpt(given_00=0.5, given_01=0.3, given_10=0.7, given_11=0.5)),
    ("crossover   ", ColliderCpt(given_00=0.5, given_01=0.6, given_10=0.3, given_11=0.8)),
]:
    effects = classify_effects(cpt)
    print(f"  {label}: {effects.pattern.value:<18s} "
          f"rr@c={effects.rr_interaction_canonical.label:<8s} "
          f"or={effects.or_interaction.label:<8s} rd={effects.rd_interaction.label}")
print()

out_dir = Path(__file__).resolve().parent / "out"
out_dir.mkdir(exist_ok=True)

fixed = GridFixed(p_c00=0.15, p_c11=0.75, p_left=0.5, p_right=0.5)
fixed_child = GridFixed(
    p_c00=0.15, p_c11=0.75, p_left=0.5, p_right=0.5,
    p_d_given_c=EdgeCpt(given_0=0.2, given_1=0.7),
)

for family, fix, column, title in [
    (GridFamily.STRATUM, fixed, 0, "stratum sign at C=1"),
    (GridFamily.STRATUM, fixed, 1, "stratum sign at C=0"),
    (GridFamily.CHILD_STRATUM, fixed_child, 0, "child-stratum sign at D=1"),
    (GridFamily.REGRESSION, fixed, 0, "regression-adjustment sign"),
]:
    grid = emit_grid(family, fix, 41)
    print(f"{title} (axes: P(C=1|1,0) rightward, P(C=1|0,1) upward):")
    preview(grid, column)
    print()

for family, fix in [
    (GridFamily.STRATUM, fixed),
    (GridFamily.CHILD_STRATUM, fixed_child),
    (GridFamily.REGRESSION, fixed),
]:
    grid = emit_grid(family, fix, 200)
    path = out_dir / f"signs_{family.value}.csv"
    path.write_text(grid_to_csv(grid))
    print(f"wrote {path.relative_to(out_dir.parent)} "
          f"({grid.resolution}x{grid.resolution} cells, "
          f"{len(grid.zero_loci)} zero loci in the header)")
