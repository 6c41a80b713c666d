"""Regenerate the versioned test-signal coefficient tables (columns n, re, im)."""

import csv
from pathlib import Path

from linfstab.perconv import SIGNAL_TABLE_BANDWIDTH, TestSignalKind, exact_test_signal

OUT = Path(__file__).resolve().parents[1] / "src" / "linfstab" / "data"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for kind in TestSignalKind:
        sig = exact_test_signal(kind, SIGNAL_TABLE_BANDWIDTH)
        path = OUT / f"signal_{kind.value}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "re", "im"])
            for n, c in zip(sig.indices, sig.coeffs):
                w.writerow([int(n), repr(float(c.real)), repr(float(c.imag))])
        print(path)


if __name__ == "__main__":
    main()
