"""Rank-correlation utilities for relating divergence statistics to external scores."""

from __future__ import annotations

import math

from .errors import DataError


def ranks(values: list[float]) -> list[float]:
    """Fractional ranks (1-based); tied values share the average of their ranks."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    out = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        average = (i + j) / 2 + 1
        for k in range(i, j + 1):
            out[order[k]] = average
        i = j + 1
    return out


def spearman(x: list[float], y: list[float]) -> float:
    """Spearman's rho with average-rank tie handling.

    Computed as the Pearson correlation of the two rank vectors. Raises on
    length mismatch, fewer than two points, or a constant argument (zero
    rank variance leaves the coefficient undefined).
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("need at least two observations")
    rx, ry = ranks(list(x)), ranks(list(y))
    n = len(rx)
    mean_x = sum(rx) / n
    mean_y = sum(ry) / n
    cov = sum((a - mean_x) * (b - mean_y) for a, b in zip(rx, ry))
    var_x = sum((a - mean_x) ** 2 for a in rx)
    var_y = sum((b - mean_y) ** 2 for b in ry)
    if var_x == 0.0 or var_y == 0.0:
        raise ValueError("zero rank variance: correlation undefined")
    return cov / math.sqrt(var_x * var_y)


def correlate_preservation(
    preservation: dict[str, float], scores: dict[str, float]
) -> dict:
    """Spearman correlation between preservation indices and per-label scores.

    Labels missing on either side are dropped; at least two shared labels
    are required. Returns {"rho", "n", "labels"}.
    """
    shared = sorted(set(preservation) & set(scores))
    if len(shared) < 2:
        raise DataError(
            f"need at least 2 shared labels, found {len(shared)}: {shared}"
        )
    rho = spearman([preservation[l] for l in shared], [scores[l] for l in shared])
    return {"rho": rho, "n": len(shared), "labels": shared}


def read_scores_tsv(path: str) -> dict[str, float]:
    """Read a two-column (label, score) TSV; '#' lines are ignored."""
    scores: dict[str, float] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 columns, found {len(parts)}")
            label, value = parts
            try:
                score = float(value)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: non-numeric score {value!r}") from exc
            if not math.isfinite(score):
                raise DataError(f"{path}:{lineno}: non-finite score {value!r}")
            scores[label] = score
    return scores
