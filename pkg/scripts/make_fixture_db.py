"""Regenerate data/fixture_db.jsonl from the synthetic app corpus."""

import argparse
import tempfile
from pathlib import Path

from contrast_mend.fixtures import build_corpus
from contrast_mend.pipeline import build_db

DEFAULT_OUT = Path(__file__).resolve().parent.parent / "data" / "fixture_db.jsonl"


def make(out: Path, n_apps: int = 100, seed: int = 7) -> int:
    with tempfile.TemporaryDirectory() as tmp:
        build_corpus(tmp, n_apps=n_apps, seed=seed)
        db = build_db(tmp)
    db.check_consistency()
    db.save(out)
    return len(db)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT)
    parser.add_argument("--apps", type=int, default=100)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    print(f"{make(args.out, args.apps, args.seed)} records -> {args.out}")


if __name__ == "__main__":
    main()
