"""File formats: graph/input/sequence JSON, trajectory and tempo CSV, manifests.

Node labels are 1-based in every file to match the reporting convention;
the conversion to the 0-based internal indices happens here and only here.
All writers are deterministic (sorted keys, fixed float formatting), so a
rerun with the same resolved config reproduces files byte for byte.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .dynamics import ExternalInput, Trajectory
from .errors import GroundspectError, InputFormatError
from .graphs import Graph, Partition, build_graph, make_partition
from .sequences import GraphSequence, SequenceConfig
from .tempo import estimate_fiedler


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def save_json(path: str | Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- graphs ---------------------------------------------------------------------

def graph_to_dict(g: Graph, p: Partition) -> dict:
    return {
        "n": g.n,
        "edges": [[i + 1, j + 1] for i, j in g.edges],
        "leaders": [i + 1 for i in p.leaders],
    }


def graph_from_dict(payload: dict, where: str = "graph") -> tuple[Graph, Partition]:
    for key in ("n", "edges", "leaders"):
        if key not in payload:
            raise InputFormatError(f"{where}: missing field '{key}'")
    try:
        n = int(payload["n"])
        edges = [(int(i) - 1, int(j) - 1) for i, j in payload["edges"]]
        leaders = [int(i) - 1 for i in payload["leaders"]]
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"{where}: malformed entry ({exc})") from exc
    try:
        g = build_graph(n, edges)
        p = make_partition(n, leaders)
    except GroundspectError as exc:
        raise InputFormatError(f"{where}: {exc}") from exc
    return g, p


def load_graph(path: str | Path) -> tuple[Graph, Partition]:
    return graph_from_dict(load_json(path), where=str(path))


def save_graph(path: str | Path, g: Graph, p: Partition) -> None:
    save_json(path, graph_to_dict(g, p))


# -- external inputs --------------------------------------------------------------

def inputs_from_dict(payload: dict, where: str = "inputs") -> ExternalInput:
    if "dimension" not in payload or "u" not in payload:
        raise InputFormatError(f"{where}: expected fields 'dimension' and 'u'")
    try:
        dim = int(payload["dimension"])
        labels = {label: int(label) for label in payload["u"]}
        values = {
            node - 1: tuple(float(x) for x in payload["u"][label])
            for label, node in labels.items()
        }
    except (TypeError, ValueError, AttributeError) as exc:
        raise InputFormatError(f"{where}: malformed entry ({exc})") from exc
    if any(node < 1 for node in labels.values()):
        raise InputFormatError(f"{where}: node labels are 1-based, got {min(labels.values())}")
    if dim < 1:
        raise InputFormatError(f"{where}: dimension must be >= 1")
    for node, vec in values.items():
        if len(vec) != dim:
            raise InputFormatError(
                f"{where}: input for node {node + 1} has {len(vec)} entries, expected {dim}"
            )
    return ExternalInput(dimension=dim, values=values)


def load_inputs(path: str | Path) -> ExternalInput:
    return inputs_from_dict(load_json(path), where=str(path))


def save_inputs(path: str | Path, u: ExternalInput) -> None:
    save_json(path, u.to_json())


# -- sequences ---------------------------------------------------------------------

def sequence_to_dict(seq: GraphSequence) -> dict:
    return {
        "config": seq.config.to_json(),
        "saturated": seq.saturated,
        "graphs": [graph_to_dict(g, p) for g, p in seq.elements],
    }


def load_sequence(path: str | Path) -> GraphSequence:
    payload = load_json(path)
    for key in ("config", "graphs"):
        if key not in payload:
            raise InputFormatError(f"{path}: missing field '{key}'")
    try:
        cfg = SequenceConfig(
            leader_degrees=tuple(payload["config"]["leader_degrees"]),
            initial_followers=int(payload["config"]["initial_followers"]),
            steps=int(payload["config"]["steps"]),
            growth=str(payload["config"]["growth"]),
            rng_seed=int(payload["config"]["rng_seed"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"{path}: malformed config ({exc})") from exc
    elements = tuple(
        graph_from_dict(item, where=f"{path}#graphs[{idx}]")
        for idx, item in enumerate(payload["graphs"])
    )
    if not elements:
        raise InputFormatError(f"{path}: empty sequence")
    return GraphSequence(
        elements=elements, config=cfg, saturated=bool(payload.get("saturated", False))
    )


def save_sequence(path: str | Path, seq: GraphSequence) -> None:
    save_json(path, sequence_to_dict(seq))


# -- trajectories -------------------------------------------------------------------

def write_trajectory_csv(path: str | Path, traj: Trajectory) -> None:
    """One row per recorded time: t, x<node>_<dim>..., v<node>_<dim>...."""
    _, n, d = traj.states.shape
    header = (
        ["t"]
        + [f"x{i + 1}_{k + 1}" for i in range(n) for k in range(d)]
        + [f"v{i + 1}_{k + 1}" for i in range(n) for k in range(d)]
    )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for idx, t in enumerate(traj.times):
            row = [_fmt(t)]
            row += [_fmt(x) for x in traj.states[idx].ravel()]
            row += [_fmt(v) for v in traj.velocities[idx].ravel()]
            writer.writerow(row)


def read_trajectory_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (times, states, velocities); the node/dim layout follows the header."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader]
    data = np.array(rows)
    n_cols = len(header) - 1
    n_state = n_cols // 2
    dims = {int(name.split("_")[1]) for name in header[1 : 1 + n_state]}
    d = max(dims)
    n = n_state // d
    times = data[:, 0]
    states = data[:, 1 : 1 + n_state].reshape(-1, n, d)
    velocities = data[:, 1 + n_state :].reshape(-1, n, d)
    return times, states, velocities


def write_tempo_csv(path: str | Path, traj: Trajectory) -> None:
    """Per-time unit-normalized tempo vectors: columns t, tau1..tauN.

    Rows where every velocity is zero are written as empty tempo cells. The
    curves approach the Fiedler-vector entries as the slowest mode takes
    over.
    """
    n = traj.states.shape[1]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"tau{i + 1}" for i in range(n)])
        for idx, t in enumerate(traj.times):
            try:
                _, estimate = estimate_fiedler(traj.velocities[idx], float(t))
                writer.writerow([_fmt(t)] + [_fmt(x) for x in estimate])
            except GroundspectError:
                writer.writerow([_fmt(t)] + [""] * n)


# -- run manifests --------------------------------------------------------------------

def write_manifest(
    path: str | Path,
    subcommand: str,
    config: dict,
    inputs: dict[str, str],
    outputs: list[str],
    rng_seed: int | None = None,
) -> None:
    """Record everything needed to reproduce a command's outputs bit-identically."""
    save_json(
        path,
        {
            "subcommand": subcommand,
            "tool_version": __version__,
            "rng_seed": rng_seed,
            "config": config,
            "inputs": inputs,
            "outputs": sorted(outputs),
        },
    )


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"
