"""Interactive GHSOM clustering workbench.

Trains growing hierarchical self-organizing maps over geotagged, rated,
commented records with TF-IDF text features; lets an analyst restructure
the hierarchy interactively; extracts C4.5 decision-tree knowledge from
the cluster assignments; and compiles the trees into message-filter rules.
"""

from .c45 import LabeledInstance, Leaf, Split, classify, extract_rules, induce
from .colors import PcaBasis, RgbColor, fit_pca, hue, unit_color
from .dataset import Dataset, FeatureVector, build_features
from .filtering import (
    Condition,
    FilterRule,
    OutgoingMessage,
    emit,
    evaluate,
    format_message,
    parse_rules,
)
from .hierarchy import (
    GrowthParams,
    Hierarchy,
    HierarchyNode,
    format_path,
    grow,
    parse_path,
    path_label,
    resolve_path,
)
from .interactive import RefineReport, RefineRequest, case1_stop, case2_insert, refine
from .kml import export_kml
from .records import TouristRecord, parse_records, render_csv
from .snapshot import dataset_fingerprint, export_snapshot, import_snapshot, snapshot_bytes
from .som import SomMapGrid, TrainConfig, Unit, bmu, insert_row_or_col, train
from .tfidf import Corpus, TermScore, TopLConfig, build_corpus, comment_features, tfidf_score, tokenize

__version__ = "0.1.0"
