"""C4.5 decision-tree induction over numeric attributes, and rule extraction.

Splits are binary thresholds at midpoints between consecutive distinct
values. The split choice follows the gain-ratio criterion with the
mean-gain guard: among candidates whose information gain is at least the
mean gain over all candidates, pick the highest gain ratio. Scan order is
(sorted attribute name, ascending threshold) and the first best candidate
wins ties, which keeps induction deterministic.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass

from .errors import ContractError
from .filtering import Condition, FilterRule

_GAIN_EPS = 1e-12


@dataclass(frozen=True)
class LabeledInstance:
    attributes: dict[str, float]
    label: str

    def __post_init__(self):
        if not self.label:
            raise ContractError("label must be nonempty")
        for name, value in self.attributes.items():
            if not math.isfinite(value):
                raise ContractError(f"attribute {name} is not finite: {value}")


@dataclass(frozen=True)
class Leaf:
    label: str
    support: int


@dataclass(frozen=True)
class Split:
    attribute: str
    threshold: float
    left: "DecisionNode"   # attribute <= threshold
    right: "DecisionNode"  # attribute > threshold


DecisionNode = Leaf | Split


def entropy(labels: list[str]) -> float:
    """Shannon entropy in bits."""
    total = len(labels)
    h = 0.0
    for count in Counter(labels).values():
        p = count / total
        h -= p * math.log2(p)
    return h


def best_split(
    instances: list[LabeledInstance], attributes: list[str]
) -> tuple[str, float, float] | None:
    """The (attribute, threshold, gain ratio) chosen by the guarded criterion.

    Returns None when no attribute has two distinct values to split between.
    Zero-gain candidates are kept: parity-style data (XOR) has only
    zero-gain first splits, yet becomes separable one level down.
    """
    labels = [i.label for i in instances]
    base = entropy(labels)
    n = len(instances)

    candidates = []  # (attr, threshold, gain)
    for attr in attributes:
        values = sorted({i.attributes[attr] for i in instances})
        pairs = sorted((i.attributes[attr], i.label) for i in instances)
        for lo, hi in zip(values, values[1:]):
            threshold = (lo + hi) / 2.0
            left = [label for value, label in pairs if value <= threshold]
            right = [label for value, label in pairs if value > threshold]
            gain = base - (len(left) / n) * entropy(left) - (len(right) / n) * entropy(right)
            candidates.append((attr, threshold, gain, len(left)))
    if not candidates:
        return None

    mean_gain = sum(g for _, _, g, _ in candidates) / len(candidates)
    best = None
    for attr, threshold, gain, n_left in candidates:
        if gain < mean_gain - _GAIN_EPS:
            continue
        p_left = n_left / n
        split_info = -(p_left * math.log2(p_left) + (1 - p_left) * math.log2(1 - p_left))
        ratio = gain / split_info
        # ratios within _GAIN_EPS are ties; the earlier candidate in
        # (attribute order, ascending threshold) scan order keeps the split
        if best is None or ratio > best[2] + _GAIN_EPS:
            best = (attr, threshold, ratio)
    return best


def _majority(labels: list[str]) -> str:
    counts = Counter(labels)
    top = max(counts.values())
    return min(label for label, c in counts.items() if c == top)


def induce(instances: list[LabeledInstance], min_leaf: int = 2) -> DecisionNode:
    """Grow a tree recursively; stop on purity, size below min_leaf, or no gain."""
    if not instances:
        raise ContractError("cannot induce a tree from no instances")
    attributes = sorted(instances[0].attributes)
    if not attributes:
        raise ContractError("instances carry no attributes")
    for inst in instances:
        if sorted(inst.attributes) != attributes:
            raise ContractError("instances disagree on attribute schema")
    return _build(instances, attributes, min_leaf)


def _build(instances, attributes, min_leaf) -> DecisionNode:
    labels = [i.label for i in instances]
    if len(set(labels)) == 1:
        return Leaf(labels[0], len(instances))
    if len(instances) < min_leaf:
        return Leaf(_majority(labels), len(instances))
    chosen = best_split(instances, attributes)
    if chosen is None:
        return Leaf(_majority(labels), len(instances))
    attr, threshold, _ = chosen
    left = [i for i in instances if i.attributes[attr] <= threshold]
    right = [i for i in instances if i.attributes[attr] > threshold]
    return Split(
        attribute=attr,
        threshold=threshold,
        left=_build(left, attributes, min_leaf),
        right=_build(right, attributes, min_leaf),
    )


def classify(tree: DecisionNode, attributes: dict[str, float]) -> str:
    node = tree
    while isinstance(node, Split):
        node = node.left if attributes[node.attribute] <= node.threshold else node.right
    return node.label


def tree_size(tree: DecisionNode) -> int:
    if isinstance(tree, Leaf):
        return 1
    return 1 + tree_size(tree.left) + tree_size(tree.right)


def extract_rules(tree: DecisionNode) -> list[FilterRule]:
    """One conjunctive rule per root-to-leaf path, tightest bounds per attribute."""
    rules: list[FilterRule] = []

    def walk(node, lower: dict[str, float], upper: dict[str, float]):
        if isinstance(node, Leaf):
            conditions = []
            for attr in sorted(set(lower) | set(upper)):
                if attr in lower:
                    conditions.append(Condition(attr, ">", lower[attr]))
                if attr in upper:
                    conditions.append(Condition(attr, "<=", upper[attr]))
            rules.append(FilterRule(conditions=tuple(conditions), area=node.label))
            return
        left_upper = dict(upper)
        if node.attribute not in left_upper or node.threshold < left_upper[node.attribute]:
            left_upper[node.attribute] = node.threshold
        walk(node.left, lower, left_upper)
        right_lower = dict(lower)
        if node.attribute not in right_lower or node.threshold > right_lower[node.attribute]:
            right_lower[node.attribute] = node.threshold
        walk(node.right, right_lower, upper)

    walk(tree, {}, {})
    return rules


def render_text(tree: DecisionNode, indent: str = "") -> str:
    """Classic indented printout: one line per branch, leaves inline."""
    if isinstance(tree, Leaf):
        return f"{indent}-> {tree.label} ({tree.support})\n"
    out = f"{indent}{tree.attribute} <= {tree.threshold:g}\n"
    out += render_text(tree.left, indent + "|   ")
    out += f"{indent}{tree.attribute} > {tree.threshold:g}\n"
    out += render_text(tree.right, indent + "|   ")
    return out


def tree_to_json(tree: DecisionNode) -> dict:
    if isinstance(tree, Leaf):
        return {"leaf": True, "label": tree.label, "support": tree.support}
    return {
        "leaf": False,
        "attribute": tree.attribute,
        "threshold": tree.threshold,
        "left": tree_to_json(tree.left),
        "right": tree_to_json(tree.right),
    }


def dump_tree(tree: DecisionNode) -> str:
    return json.dumps(tree_to_json(tree), sort_keys=True)
