"""Acceptance: the adder stats bundle renders all four figure families."""
from PIL import Image

from ftcb_viz.cli import render_all


def report(ok, text):
    line = f"ACCEPTANCE 12: {'PASS' if ok else 'FAIL'} - {text}"
    print(line)
    assert ok, line


class TestCriterion12:
    def test_adder_bundle_renders_all_families(self, adder_bench_dir, tmp_path):
        families = ["density", "weights", "graph", "opt"]
        snapshots = []
        for run in ("first", "second"):
            out = tmp_path / run
            written, warnings = render_all(adder_bench_dir, out, families)
            shapes = {}
            for path in sorted(written):
                img = Image.open(path)
                shapes[path.name] = (img.size, hash(tuple(img.histogram())))
            snapshots.append((shapes, sorted(w for w in warnings)))
        shapes, warnings = snapshots[0]
        names = set(shapes)
        has_all = (any("t_density" in n for n in names)
                   and any("weights" in n for n in names)
                   and any("graph" in n for n in names)
                   and "opt_summary.png" in names)
        density_rows = {name: size[1] for name, (size, _) in shapes.items()
                        if "density" in name}
        rows_ok = all(rows == 64 for rows in density_rows.values())
        idempotent = snapshots[0] == snapshots[1]
        report(has_all and rows_ok and idempotent and len(density_rows) == 2,
               f"four figure families rendered; density rows {density_rows}; "
               f"rerender idempotent")
