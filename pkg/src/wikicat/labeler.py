"""Weak labeling by competition-based graph traversal.

Each taxonomy label owns one or more root category nodes.  Labels in the
same competition set are traversed breadth-first from their roots with the
competitors' roots blocked, candidate pages failing the parent-coverage
threshold are pruned, surviving pages get a path weight (many short paths
beat few long ones), and per-page weights are normalized across the
competing labels so a label is assigned only when it clearly wins.

Besides the ``full`` pipeline there are four reduced modes used for
comparison runs: ``child_only``, ``all_descendants``, ``min_dist``, and
``no_pruning``.
"""

from __future__ import annotations

import json
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ConfigurationError, TaxonomyError
from .graph_store import CategoryGraph
from .taxonomy_mapper import CategoryMapping, Taxonomy

MODES = ("full", "child_only", "all_descendants", "min_dist", "no_pruning")
PATH_MODES = ("dag", "exact")


@dataclass(frozen=True)
class RootSpec:
    """A label with the category nodes it is mapped to."""

    label: str
    nodes: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.nodes:
            raise ConfigurationError(f"label {self.label!r} has no root nodes")


@dataclass(frozen=True)
class CompetitionSet:
    """The labels that compete for pages in one classification task."""

    roots: tuple[RootSpec, ...]

    def __post_init__(self) -> None:
        labels = [r.label for r in self.roots]
        if len(set(labels)) != len(labels):
            raise ConfigurationError("duplicate labels in competition set")
        owner: dict[int, str] = {}
        for spec in self.roots:
            for node in spec.nodes:
                if node in owner:
                    raise ConfigurationError(
                        f"category node {node} is mapped for both "
                        f"{owner[node]!r} and {spec.label!r}"
                    )
                owner[node] = spec.label

    def get(self, label: str) -> RootSpec:
        for spec in self.roots:
            if spec.label == label:
                return spec
        raise ConfigurationError(f"label {label!r} not in competition set")

    def blocked_for(self, label: str) -> frozenset[int]:
        self.get(label)
        return frozenset(
            node
            for spec in self.roots
            if spec.label != label
            for node in spec.nodes
        )


@dataclass(frozen=True)
class LabelingConfig:
    mode: str = "full"
    coverage_threshold: float = 0.3
    assignment_threshold: float = 0.3
    max_depth: int | None = None
    path_mode: str = "dag"
    exact_path_cap: int | None = 8

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown mode {self.mode!r}")
        if self.path_mode not in PATH_MODES:
            raise ConfigurationError(f"unknown path_mode {self.path_mode!r}")
        for name in ("coverage_threshold", "assignment_threshold"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1], got {value}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ConfigurationError("max_depth must be >= 0")
        if self.path_mode == "exact" and (
            self.exact_path_cap is None or self.exact_path_cap < 1
        ):
            raise ConfigurationError("exact path mode requires a positive depth cap")


class ReachableSet:
    """BFS result for one root: depths, candidate pages, and path counts.

    ``depth`` holds the shortest distance from the root's mapped nodes for
    every node (-1 when unreached); blocked competitor nodes stay at -1.
    Path counts over depth-increasing edges are computed on first use and
    kept as Python ints because they can exceed any fixed-width type.
    """

    def __init__(
        self,
        graph: CategoryGraph,
        root: RootSpec,
        depth: np.ndarray,
        blocked: frozenset[int],
    ) -> None:
        self.graph = graph
        self.root = root
        self.depth = depth
        self.blocked = blocked
        self._counts: dict[int, int] | None = None
        self._candidate_pages: dict[int, int] | None = None
        self._reachable_categories: set[int] | None = None

    @property
    def reachable_categories(self) -> set[int]:
        if self._reachable_categories is None:
            cats = np.nonzero(self.depth[: self.graph.n_categories] >= 0)[0]
            self._reachable_categories = set(cats.tolist())
        return self._reachable_categories

    @property
    def candidate_pages(self) -> dict[int, int]:
        if self._candidate_pages is None:
            split = self.graph.n_categories
            page_depth = self.depth[split:]
            hit = np.nonzero(page_depth >= 0)[0]
            self._candidate_pages = {
                int(p) + split: int(d) for p, d in zip(hit, page_depth[hit])
            }
        return self._candidate_pages

    def level_dag_edges(self) -> Iterable[tuple[int, int]]:
        """Edges (u, v) retained by BFS with depth(v) = depth(u) + 1."""
        depth = self.depth
        graph = self.graph
        for u in np.nonzero(depth[: graph.n_categories] >= 0)[0].tolist():
            du = int(depth[u])
            for v in graph.children(u).tolist():
                if depth[v] == du + 1:
                    yield u, v

    def path_count(self, node: int) -> int:
        """Distinct depth-increasing paths from the mapped nodes to ``node``."""
        if self._counts is None:
            self._counts = self._compute_counts()
        return self._counts.get(node, 0)

    def _compute_counts(self) -> dict[int, int]:
        graph = self.graph
        depth = self.depth
        cats = np.nonzero(depth[: graph.n_categories] >= 0)[0]
        order = cats[np.argsort(depth[cats], kind="stable")]
        counts: dict[int, int] = {int(n): 1 for n in self.root.nodes}
        for u in order.tolist():
            cu = counts.get(u)
            if not cu:
                continue
            du = int(depth[u])
            for v in graph.children(u).tolist():
                if depth[v] == du + 1:
                    counts[v] = counts.get(v, 0) + cu
        return counts


def traverse(
    graph: CategoryGraph,
    root: RootSpec,
    competitors: CompetitionSet,
    cfg: LabelingConfig,
) -> ReachableSet:
    """Multi-source BFS from the root's nodes, competitors' nodes blocked."""
    blocked = competitors.blocked_for(root.label)
    return _bfs(graph, root, blocked, cfg.max_depth)


def _bfs(
    graph: CategoryGraph,
    root: RootSpec,
    blocked: frozenset[int],
    max_depth: int | None,
) -> ReachableSet:
    depth = np.full(graph.n_nodes, -1, dtype=np.int64)
    for node in root.nodes:
        if not 0 <= node < graph.n_categories:
            raise ConfigurationError(
                f"root node {node} of {root.label!r} is not a category"
            )
        depth[node] = 0
    queue = deque(sorted(set(root.nodes)))
    while queue:
        u = queue.popleft()
        d = int(depth[u])
        if max_depth is not None and d + 1 > max_depth:
            continue
        for v in graph.children(u).tolist():
            if depth[v] == -1 and v not in blocked:
                depth[v] = d + 1
                if v < graph.n_categories:
                    queue.append(v)
    return ReachableSet(graph, root, depth, blocked)


def parent_coverage(graph: CategoryGraph, page: int, reach: ReachableSet) -> float:
    """Share of the page's parent categories reached by this root."""
    if not graph.is_page(page) or page not in reach.candidate_pages:
        raise ConfigurationError(f"node {page} is not a candidate page")
    parents = reach.graph.parents(page)
    if len(parents) == 0:
        return 0.0
    reached = int((reach.depth[parents] >= 0).sum())
    return reached / len(parents)


def enumerate_paths(
    graph: CategoryGraph,
    root: RootSpec,
    page: int,
    cap: int,
    blocked: frozenset[int] = frozenset(),
) -> list[int]:
    """Lengths of every simple root-to-page path of length <= cap.

    Exhaustive depth-first search; intermediate nodes are categories only
    and competitor nodes are excluded.  Exponential in the worst case, so
    only suitable for small graphs and as a reference for the dag mode.
    """
    if cap is None or cap < 1:
        raise ConfigurationError("path enumeration needs a positive cap")
    lengths: list[int] = []
    children = graph.children
    split = graph.n_categories

    def walk(u: int, dist: int, on_path: set[int]) -> None:
        if dist >= cap:
            return
        for v in children(u).tolist():
            if v == page:
                lengths.append(dist + 1)
            elif v < split and v not in blocked and v not in on_path:
                on_path.add(v)
                walk(v, dist + 1, on_path)
                on_path.remove(v)

    for start in sorted(set(root.nodes)):
        if start in blocked:
            continue
        walk(start, 0, {start})
    return sorted(lengths)


def page_weight(reach: ReachableSet, page: int, cfg: LabelingConfig) -> float:
    """Path weight of a candidate page: many short paths score high."""
    d = int(reach.depth[page])
    if not reach.graph.is_page(page) or d < 0:
        raise ConfigurationError(f"node {page} is not a reachable page")
    if cfg.path_mode == "dag":
        count = reach.path_count(page)
        try:
            return count / (1 << d)
        except OverflowError:
            return math.inf
    lengths = enumerate_paths(
        reach.graph, reach.root, page, cfg.exact_path_cap, reach.blocked
    )
    if not lengths:
        raise ConfigurationError(
            f"page {page} has no path within the cap {cfg.exact_path_cap}"
        )
    return float(sum(2.0 ** -n for n in lengths))


def normalize_and_assign(
    candidates: Sequence[tuple[str, float]], threshold: float = 0.3
) -> list[tuple[str, float]]:
    """Normalize raw weights to sum 1, keep labels strictly above threshold.

    Returns (label, normalized weight) sorted by descending weight, then
    label id.  May be empty when no label dominates.
    """
    if not candidates:
        raise ConfigurationError("no candidate labels to normalize")
    labels = [label for label, _ in candidates]
    if len(set(labels)) != len(labels):
        raise ConfigurationError("duplicate labels among candidates")
    if any(raw <= 0 for _, raw in candidates):
        raise ConfigurationError("raw weights must be positive")
    infinite = [label for label, raw in candidates if math.isinf(raw)]
    if infinite:
        # Infinite raws (path-count overflow) dominate everything finite.
        share = 1.0 / len(infinite)
        normalized = [
            (label, share if math.isinf(raw) else 0.0) for label, raw in candidates
        ]
    else:
        total = sum(raw for _, raw in candidates)
        normalized = [(label, raw / total) for label, raw in candidates]
    assigned = [(label, w) for label, w in normalized if w > threshold]
    assigned.sort(key=lambda item: (-item[1], item[0]))
    return assigned


@dataclass(frozen=True)
class Assignment:
    label: str
    w_raw: float
    w_norm: float
    depth: int


@dataclass(frozen=True)
class PageLabels:
    page: int  # internal node id; serialization writes the external id
    assignments: tuple[Assignment, ...]
    mode: str


def build_competition_sets(
    mapping: CategoryMapping, scheme: Sequence[Sequence[str]]
) -> list[CompetitionSet]:
    """Resolve a scheme of label-id groups against a mapping."""
    sets = []
    for group in scheme:
        roots = []
        for label in group:
            cats = mapping.entries.get(label)
            if not cats:
                raise TaxonomyError(f"label {label!r} is not mapped to any category")
            roots.append(RootSpec(label, tuple(mc.node for mc in cats)))
        sets.append(CompetitionSet(tuple(roots)))
    return sets


def coarse_scheme(taxonomy: Taxonomy) -> list[list[str]]:
    """One competition set holding every top-tier label."""
    return [[lab.id for lab in taxonomy.roots()]]


def fine_scheme(taxonomy: Taxonomy) -> list[list[str]]:
    """One competition set per parent: its children compete."""
    out = []
    for parent in taxonomy.roots():
        kids = taxonomy.children_of(parent.id)
        if kids:
            out.append([lab.id for lab in kids])
    return out


def label_corpus(
    graph: CategoryGraph,
    mapping: CategoryMapping,
    scheme: Sequence[Sequence[str]],
    cfg: LabelingConfig,
    workers: int = 1,
) -> list[PageLabels]:
    """Label pages for every competition set in the scheme.

    Records are ordered by competition set, then external page id; a page
    may appear once per competition set.  Worker count only affects how
    root traversals are scheduled, never the output.
    """
    if workers < 1:
        raise ConfigurationError("workers must be >= 1")
    records: list[PageLabels] = []
    for cs in build_competition_sets(mapping, scheme):
        records.extend(_label_competition_set(graph, cs, cfg, workers))
    return records


def _collect_root(
    graph: CategoryGraph,
    spec: RootSpec,
    blocked: frozenset[int],
    cfg: LabelingConfig,
) -> list[tuple[int, str, float, int]]:
    """(page, label, raw weight, depth) candidates for one root."""
    reach = _bfs(graph, spec, blocked, cfg.max_depth)
    out = []
    if cfg.mode == "child_only":
        for node in sorted(set(spec.nodes)):
            for v in graph.children(node).tolist():
                if v >= graph.n_categories:
                    out.append((v, spec.label, 1.0, 1))
        return sorted(set(out))
    pages = sorted(reach.candidate_pages.items())
    if cfg.mode == "all_descendants":
        return [(page, spec.label, 1.0, d) for page, d in pages]
    if cfg.mode in ("full", "min_dist"):
        pages = [
            (page, d)
            for page, d in pages
            if parent_coverage(graph, page, reach) >= cfg.coverage_threshold
        ]
    if cfg.mode == "min_dist":
        return [(page, spec.label, 1.0, d) for page, d in pages]
    return [
        (page, spec.label, page_weight(reach, page, cfg), d) for page, d in pages
    ]


def _label_competition_set(
    graph: CategoryGraph,
    cs: CompetitionSet,
    cfg: LabelingConfig,
    workers: int,
) -> list[PageLabels]:
    no_blocking = cfg.mode == "no_pruning"

    def run(spec: RootSpec) -> list[tuple[int, str, float, int]]:
        blocked = frozenset() if no_blocking else cs.blocked_for(spec.label)
        return _collect_root(graph, spec, blocked, cfg)

    if workers == 1 or len(cs.roots) <= 1:
        per_root = [run(spec) for spec in cs.roots]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_root = list(pool.map(run, cs.roots))

    by_page: dict[int, list[tuple[str, float, int]]] = {}
    for rows in per_root:
        for page, label, raw, d in rows:
            by_page.setdefault(page, []).append((label, raw, d))

    records = []
    for page in sorted(by_page, key=graph.external_id):
        cands = by_page[page]
        if cfg.mode in ("full", "no_pruning"):
            assigned = normalize_and_assign(
                [(label, raw) for label, raw, _ in cands],
                cfg.assignment_threshold,
            )
            raw_by_label = {label: (raw, d) for label, raw, d in cands}
            assignments = tuple(
                Assignment(label, raw_by_label[label][0], w, raw_by_label[label][1])
                for label, w in assigned
            )
        elif cfg.mode == "min_dist":
            best = min(d for _, _, d in cands)
            winners = sorted(
                (label, raw, d) for label, raw, d in cands if d == best
            )
            share = 1.0 / len(winners)
            assignments = tuple(
                Assignment(label, raw, share, d) for label, raw, d in winners
            )
        else:  # child_only, all_descendants
            share = 1.0 / len(cands)
            assignments = tuple(
                Assignment(label, raw, share, d)
                for label, raw, d in sorted(cands)
            )
        records.append(PageLabels(page, assignments, cfg.mode))
    return records


def write_labels(
    records: Iterable[PageLabels], graph: CategoryGraph, path: str | Path
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            doc = {
                "page": graph.external_id(rec.page),
                "assignments": [
                    {
                        "label": a.label,
                        "w_raw": a.w_raw,
                        "w_norm": a.w_norm,
                        "depth": a.depth,
                    }
                    for a in rec.assignments
                ],
                "mode": rec.mode,
            }
            fh.write(json.dumps(doc, sort_keys=True) + "\n")


def read_labels(path: str | Path) -> list[dict]:
    """Parse a labels file back into plain dicts (external page ids)."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"{path}:{lineno}: bad JSON: {exc}") from None
    return out


def save_label_config(cfg: LabelingConfig, path: str | Path) -> None:
    doc = {
        "mode": cfg.mode,
        "coverage_threshold": cfg.coverage_threshold,
        "assignment_threshold": cfg.assignment_threshold,
        "max_depth": cfg.max_depth,
        "path_mode": cfg.path_mode,
        "exact_path_cap": cfg.exact_path_cap,
    }
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_label_config(path: str | Path) -> LabelingConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigurationError(f"{path}: expected a JSON object")
    known = {
        "mode",
        "coverage_threshold",
        "assignment_threshold",
        "max_depth",
        "path_mode",
        "exact_path_cap",
    }
    extra = set(doc) - known
    if extra:
        raise ConfigurationError(f"{path}: unknown fields {sorted(extra)}")
    return LabelingConfig(**doc)
