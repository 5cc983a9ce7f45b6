import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `oracles` importable

from ghsom_workbench.dataset import Dataset
from ghsom_workbench.records import parse_records
from ghsom_workbench.tfidf import build_corpus

DATA_DIR = Path(__file__).parent / "data"

# Ten sightseeing records: geotagged, rated, commented observations.
SAMPLE_CSV = """no,lat,lon,alt,name,evaluation,comment
6,34.363369,132.470307,32.30,Oyster Street,2,A posh cafe is over there!
9,34.484011,132.269203,258.8,Fishing Lake,3,"A peaceful fishing lake. After enjoying fishing, we must eat them."
10,34.484362,132.269326,272.6,Fishing Lake,4,I caught some fishes. 'Yamame' is delicate.
11,34.473791,132.240430,356.2,Rodge,1,There is nothing.
13,34.367706,132.175777,357.5,Futae Yaki(Cake),4,'Futae-Yaki' is a kind of fried cake.
16,34.388838,132.103882,575.7,Spa Rakan,4,This spa stands by roadside station.
58,34.393745,132.436148,41.4,Game spot,3,Famous game center.
200,34.387643,132.430239,50.7,Tomato noodle,4,Tomato Ramen is a salt ramen with tomato.
227,34.410682,133.197108,174.8,Onomichi,4,The seto sea is very beautiful.
241,34.393464,132.459653,52.3,High quality Japanese Restaurant,4,"Very delicious, but too expensive..."
"""


@pytest.fixture
def sample_records():
    return parse_records(SAMPLE_CSV)


@pytest.fixture
def tiny_corpus():
    """The worked 2-document corpus: d1='a b a', d2='b c'."""
    return build_corpus([("d1", "a b a"), ("d2", "b c")])


@pytest.fixture
def tourism_corpus():
    """Nine tourism-site documents."""
    docs = [
        ("hiroshima", "oyster street food and posh cafe downtown sightseeing"),
        ("kure", "navy port museum and sea view"),
        ("hatsukaichi", "island shrine gate over the sea miyajima deer"),
        ("onomichi", "seto sea hillside temples and cats"),
        ("fukuyama", "castle rose festival events"),
        ("miyoshi", "river fog wine and fishing lake in the mountains"),
        ("akitakata", "rice fields kagura dance performance"),
        ("blog-asobiba", "playground spots for children spa and game center"),
        ("blog-outdoor", "outdoor map camping fishing lake spa roadside station"),
    ]
    return build_corpus(docs)


def gaussian_clusters(
    n_per: int = 50,
    centers=((0.0, 0.0), (8.0, 0.0), (0.0, 8.0), (8.0, 8.0)),
    sigma: float = 0.5,
    seed: int = 0,
) -> Dataset:
    rng = np.random.default_rng(seed)
    blocks = [np.asarray(c) + rng.normal(0.0, sigma, size=(n_per, 2)) for c in centers]
    return Dataset.from_matrix(np.vstack(blocks), ["x", "y"])


@pytest.fixture
def four_gaussians():
    return gaussian_clusters()


def load_iris():
    """150 x 4 demo dataset plus species labels."""
    rows = (DATA_DIR / "iris.csv").read_text().strip().splitlines()
    values = []
    labels = []
    for line in rows[1:]:
        parts = line.split(",")
        values.append([float(v) for v in parts[:4]])
        labels.append(parts[4])
    schema = rows[0].split(",")[:4]
    return Dataset.from_matrix(np.array(values), schema), labels
