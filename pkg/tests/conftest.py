import functools
import json
import sys
import warnings
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ecdyn.cli import bundled_example, load_config  # noqa: E402
from ecdyn.dynamics import build_graph  # noqa: E402
from ecdyn.predictor import predict  # noqa: E402

DATA = Path(__file__).parent / "data"


@functools.lru_cache(maxsize=None)
def example(k):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cfg = load_config(bundled_example(k))
    G = build_graph(cfg.curve, cfg.alpha)
    return cfg, G, predict(cfg.curve, cfg.alpha, cfg.m)


@pytest.fixture(scope="session")
def ex1():
    return example(1)


@pytest.fixture(scope="session")
def ex2():
    return example(2)


@pytest.fixture(scope="session")
def ex3():
    return example(3)


@pytest.fixture(scope="session")
def reference_edges():
    return json.loads((DATA / "reference_edges.json").read_text(encoding="utf-8"))
