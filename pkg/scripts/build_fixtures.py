"""Regenerate the CSV fixtures under tests/data from the keel-ds wheel.

Usage:
    pip download --no-deps keel-ds==0.2.5 -d /tmp/keel
    python scripts/build_fixtures.py /tmp/keel/keel_ds-0.2.5-py3-none-any.whl

keel-ds only ships one-vs-rest variants of New-thyroid (both of them
hyper-vs-rest), so the 3-class newthyroid.csv cannot be rebuilt from it. Drop
a 3-class copy (215 rows, header T3resin,Thyroxin,Triiodothyronine,
Thyroidstimulating,TSH_value,Class) into tests/data by hand if you have one.
"""

from __future__ import annotations

import csv
import sys
import zipfile
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data"

HEADERS = {
    "iris": ["SepalLength", "SepalWidth", "PetalLength", "PetalWidth", "Flower"],
    "wisconsin": [
        "ClumpThickness", "CellSize", "CellShape", "MarginalAdhesion",
        "EpithelialSize", "BareNuclei", "BlandChromatin", "NormalNucleoli",
        "Mitoses", "Class",
    ],
    "pima": ["Preg", "Plas", "Pres", "Skin", "Insu", "Mass", "Pedi", "Age", "Class"],
    "heart": [
        "Age", "Sex", "ChestPainType", "RestBloodPressure", "SerumCholestoral",
        "FastingBloodSugar", "ResElectrocardiographic", "MaxHeartRate",
        "ExerciseInduced", "Oldpeak", "Slope", "MajorVessels", "Thal", "Class",
    ],
    "saheart": [
        "Sbp", "Tobacco", "Ldl", "Adiposity", "Famhist", "Typea", "Obesity",
        "Alcohol", "Age", "Chd",
    ],
    "wdbc": [f"F{i}" for i in range(1, 31)] + ["Class"],
}


def _rows(z: zipfile.ZipFile, member: str) -> list[list[str]]:
    text = z.read(member).decode()
    return [[v.strip() for v in line.split(",")] for line in text.strip().splitlines()]


def _write(name: str, header: list[str], rows: list[list[str]]) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / f"{name}.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"{name}: {len(rows)} rows")


def main(wheel: str) -> None:
    z = zipfile.ZipFile(wheel)
    for name, header in HEADERS.items():
        rows = _rows(z, f"keel_ds/data/balanced/raw/{name}.dat")
        assert all(len(r) == len(header) for r in rows), name
        _write(name, header, rows)


if __name__ == "__main__":
    main(sys.argv[1])
