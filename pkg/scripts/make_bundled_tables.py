"""Regenerate the bundled character tables under data/.

Everything here comes from explicit permutation generators through the
class-matrix method, so the files can be rebuilt from scratch at any
time.  Run from anywhere:

    python scripts/make_bundled_tables.py
"""

from pathlib import Path

from chartab.oracle import brute_force_table
from chartab.tableio import save_table

ROOT = Path(__file__).resolve().parent.parent

GROUPS = {
    "v4.tbl": ("V4", ["(1,2)(3,4)", "(1,3)(2,4)"]),
    "s3.tbl": ("S3", ["(1,2,3)", "(1,2)"]),
    "d10.tbl": ("D10", ["(1,2,3,4,5)", "(2,5)(3,4)"]),
    "a4.tbl": ("A4", ["(1,2,3)", "(1,2)(3,4)"]),
    "s4.tbl": ("S4", ["(1,2,3,4)", "(1,2)"]),
    "a5.tbl": ("A5", ["(1,2,3,4,5)", "(3,4,5)"]),
    "s5.tbl": ("S5", ["(1,2,3,4,5)", "(1,2)"]),
    "a6.tbl": ("A6", ["(1,2,3,4,5)", "(2,3,4,5,6)"]),
}


def main() -> None:
    tables_dir = ROOT / "data" / "tables"
    tables_dir.mkdir(parents=True, exist_ok=True)
    for fname, (ident, gens) in sorted(GROUPS.items()):
        t = brute_force_table(gens, ident)
        save_table(t, tables_dir / fname)
        print(f"{fname}: {ident}, {t.nclasses} classes, order {t.order}")

    # the symmetric group on 3 points again, under the name the large
    # verification scripts use for the direct product factor
    monster_dir = ROOT / "data" / "monster"
    monster_dir.mkdir(parents=True, exist_ok=True)
    t = brute_force_table(["(1,2,3)", "(1,2)"], "Sym(3)")
    save_table(t, monster_dir / "sym3.tbl")
    print(f"sym3.tbl: {t.identifier}, {t.nclasses} classes, order {t.order}")


if __name__ == "__main__":
    main()
