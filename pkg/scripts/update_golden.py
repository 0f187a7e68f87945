"""Regenerate the golden CLI outputs under tests/golden from the files in data/.

Run after an intentional change to report formatting, then review the diff.
"""

import argparse
import io
from pathlib import Path

from morleyduality.cli import run

ROOT = Path(__file__).resolve().parent.parent

# (golden name, argv relative to the repo root)
CASES = [
    ("e1_check.txt", ["check", "--input", "data/e1.txt"]),
    ("e2_check.txt", ["check", "--input", "data/e2.txt"]),
    ("e3_check.txt", ["check", "--input", "data/e3.txt"]),
    ("weighted_check.txt", ["check", "--input", "data/weighted.txt"]),
    ("control_check.txt", ["check", "--input", "data/control.txt"]),
    ("e1_nabla3.txt", ["nabla", "--input", "data/e1.txt", "--nu", "3"]),
    ("e1_homology.txt", ["homology", "--input", "data/e1.txt", "--nu", "3"]),
    ("e2_hilbert.txt", ["hilbert", "--input", "data/e2.txt"]),
    ("e3_delta.txt", ["delta", "--input", "data/e3.txt"]),
]


def render(argv):
    buf = io.StringIO()
    code = run(argv, buf)
    return f"exit {code}\n" + buf.getvalue()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=ROOT / "tests" / "golden")
    ap.add_argument("--check", action="store_true", help="only report differences")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    stale = 0
    for name, argv in CASES:
        text = render(argv)
        path = args.out / name
        if args.check:
            same = path.exists() and path.read_text() == text
            stale += not same
            print(f"{'ok   ' if same else 'STALE'} {name}")
        else:
            path.write_text(text)
            print(f"wrote {path}")
    raise SystemExit(1 if stale else 0)


if __name__ == "__main__":
    main()
