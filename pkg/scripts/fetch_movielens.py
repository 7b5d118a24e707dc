"""Materialise MovieLens-100k as ``u.data`` / ``u.item`` under ``data/ml-100k``.

grouplens.org is often unreachable from build machines, so the ratings are
taken from the copy bundled in the RecBole wheel (``dataset_example/ml-100k``),
which only needs a package index.  The ratings file is checked against a pinned
digest so every experiment runs on the same snapshot.

    python3 scripts/fetch_movielens.py [--dest data/ml-100k]
"""
import argparse
import hashlib
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

WHEEL = "recbole==1.2.1"
INTER = "recbole/dataset_example/ml-100k/ml-100k.inter"
ITEM = "recbole/dataset_example/ml-100k/ml-100k.item"
INTER_SHA256 = "4edb74e2a81178c2ba9ff381495f754f996c4aea351b1272ca36b43da0935eff"

DEFAULT_DEST = Path(__file__).resolve().parents[1] / "data" / "ml-100k"


def fetch(dest: Path) -> Path:
    dest.mkdir(parents=True, exist_ok=True)
    if (dest / "u.data").exists() and (dest / "u.item").exists():
        return dest
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "-d", tmp, WHEEL],
            check=True,
        )
        wheel = next(Path(tmp).glob("*.whl"))
        with zipfile.ZipFile(wheel) as zf:
            inter = zf.read(INTER)
            item = zf.read(ITEM).decode("utf-8")
    digest = hashlib.sha256(inter).hexdigest()
    if digest != INTER_SHA256:
        raise SystemExit(f"unexpected ratings digest {digest}")

    # header line is RecBole's typed column list; the rest is u.data verbatim
    lines = inter.decode("utf-8").splitlines()[1:]
    (dest / "u.data").write_text("\n".join(lines) + "\n")

    rows = []
    for line in item.splitlines()[1:]:
        fields = line.split("\t")
        item_id, title = fields[0], fields[1]
        year = fields[2] if len(fields) > 2 else ""
        rows.append(f"{item_id}|{title} ({year})" if year else f"{item_id}|{title}")
    (dest / "u.item").write_text("\n".join(rows) + "\n", encoding="latin-1", errors="replace")
    return dest


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", type=Path, default=DEFAULT_DEST)
    args = ap.parse_args()
    out = fetch(args.dest)
    print(f"MovieLens-100k ready in {out}")


if __name__ == "__main__":
    main()
