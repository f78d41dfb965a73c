"""Optional matplotlib figures for CLI reports (Agg backend, PNG files)."""

from __future__ import annotations

import os
from typing import Dict, List, Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_META = {"Software": None}


def _bar(path: str, data: Mapping, title: str, xlabel: str, ylabel: str = "count") -> str:
    keys = list(data)
    fig, ax = plt.subplots(figsize=(5, 3.2), dpi=100)
    ax.bar([str(k) for k in keys], [data[k] for k in keys], color="#4c72b0")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def _out(directory: str, name: str) -> str:
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, name)


def report_figures(directory: str, report: dict) -> List[str]:
    files = [_bar(_out(directory, "weight_distribution.png"), report["weight_distribution"],
                  "Weights of projective codewords", "sum-rank weight")]
    profiles = {",".join(map(str, p)): 1 for p in report["rank_profiles"]}
    if len(profiles) > 1 or report["rank_profiles"]:
        files.append(_bar(_out(directory, "rank_profiles.png"), profiles, "Rank-profiles present",
                          "profile", "present"))
    return files


def linear_set_figures(directory: str, entries: List[dict]) -> List[str]:
    files = []
    for i, e in enumerate(entries):
        files.append(_bar(_out(directory, f"linear_set_{i}_counts.png"), e["counts"],
                          f"Point weights of L_U{i}", "weight i", "N_i"))
    return files


def histogram_figure(directory: str, name: str, hist: Dict[str, int], title: str, xlabel: str) -> List[str]:
    return [_bar(_out(directory, name), hist, title, xlabel)]
