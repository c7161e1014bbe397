#!/usr/bin/env python3
"""Writes the sample expression files in data/ (fixed seed, small rationals)."""
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data"
rng = random.Random(20240611)


def matrix(n):
    return [[str(Fraction(rng.randint(-4, 4), rng.randint(1, 3))) for _ in range(n)] for _ in range(n)]


def factor(color, eps, slot):
    return {"color": color, "eps": eps, "slot": slot}


def write(name, traces, labels, n):
    doc = {"traces": traces}
    if labels:
        doc["matrices"] = {str(k): matrix(n) for k in labels}
    (out / name).write_text(json.dumps(doc, indent=1) + "\n")


eps = [1, 1, -1, 1, -1, -1, 1, 1]
moment = [[factor(1, eps[k - 1], k) for k in (1, 2, 3)], [factor(1, eps[k - 1], k) for k in range(4, 9)]]
write("ex_moment.json", moment, range(1, 9), 10)
write("ex_conj.json", [[factor(1, 1, 1), factor(1, -1, 2)]], (1, 2), 10)
write("ex_twist.json", [[factor(1, 1, 1), factor(1, 1, 2)]], (1, 2), 10)
write(
    "ex_cumulant.json",
    [[factor(1, 1, 1), factor(1, -1, 2)], [factor(1, 1, 3), factor(1, 1, 1)], [factor(1, 1, 2), factor(1, -1, 3)]],
    (1, 2, 3),
    4,
)
