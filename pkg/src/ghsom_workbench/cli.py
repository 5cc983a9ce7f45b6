"""Command line entry points: serve the HTTP API, or run a headless batch."""

from __future__ import annotations

import json
from pathlib import Path

import click

from .c45 import extract_rules, induce, render_text
from .dataset import build_features
from .filtering import (
    JsonLinesSink,
    emit,
    evaluate,
    parse_rules,
    rule_attributes,
    rules_to_json,
)
from .hierarchy import GrowthParams, grow
from .kml import export_kml
from .records import parse_records
from .tfidf import TopLConfig, comment_features, load_corpus_dir


@click.group()
def main():
    """Interactive GHSOM clustering workbench."""


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host: str, port: int):
    """Run the HTTP session service."""
    import uvicorn

    uvicorn.run("ghsom_workbench.service:app", host=host, port=port)


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--tau1", default=0.1, show_default=True, type=float)
@click.option("--tau2", default=0.01, show_default=True, type=float)
@click.option("--alpha", default=0.03, show_default=True, type=float)
@click.option("--beta", default=2.0, show_default=True, type=float)
@click.option("--epochs", default=100, show_default=True, type=int)
@click.option("--rules", "rules_path", type=click.Path(exists=True, path_type=Path),
              help="Filter with these rules instead of the tree-derived ones.")
def batch(data_path, corpus_path, out_dir, seed, tau1, tau2, alpha, beta, epochs, rules_path):
    """Train, extract rules, and filter the input records without the UI.

    Writes hierarchy.json, tree.txt, rules.json, messages.jsonl, and
    records.kml into --out.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    records = parse_records(data_path.read_text(encoding="utf-8"))
    corpus = load_corpus_dir(corpus_path)
    cfg = TopLConfig()
    pairs = []
    for r in records:
        tmax, tsum, _ = comment_features(r.comment, corpus, cfg)
        pairs.append((tmax, tsum))
    dataset = build_features(records, pairs)

    params = GrowthParams(tau1=tau1, tau2=tau2, alpha=alpha, beta=beta, lam=epochs)
    hierarchy = grow(dataset, params, seed)
    click.echo(f"trained hierarchy: depth {hierarchy.depth()}, {hierarchy.node_count()} nodes")

    from .service import hierarchy_summary  # lazy: pulls in fastapi

    (out_dir / "hierarchy.json").write_text(
        json.dumps(hierarchy_summary(hierarchy), indent=2), encoding="utf-8"
    )

    labels = hierarchy.leaf_labels()
    from .c45 import LabeledInstance

    instances = [
        LabeledInstance(
            attributes={name: float(dataset.raw[i][j]) for j, name in enumerate(dataset.schema)},
            label=labels[i],
        )
        for i in range(len(dataset))
    ]
    tree = induce(instances)
    (out_dir / "tree.txt").write_text(render_text(tree), encoding="utf-8")
    rules = (
        parse_rules(rules_path.read_text(encoding="utf-8"))
        if rules_path
        else extract_rules(tree)
    )
    (out_dir / "rules.json").write_text(
        json.dumps(rules_to_json(rules), indent=2), encoding="utf-8"
    )

    messages_path = out_dir / "messages.jsonl"
    messages_path.unlink(missing_ok=True)
    sink = JsonLinesSink(messages_path)
    emitted = 0
    for r, (tmax, tsum) in zip(records, pairs):
        area = evaluate(rules, rule_attributes(r, tmax, tsum))
        if area is not None:
            emit(r, area, sink)
            emitted += 1
    (out_dir / "records.kml").write_text(export_kml(records), encoding="utf-8")
    click.echo(f"extracted {len(rules)} rules; emitted {emitted} messages; wrote {out_dir}")


if __name__ == "__main__":
    main()
