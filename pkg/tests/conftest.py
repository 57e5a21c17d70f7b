"""
Fixtures and utilities for testing the Heavy-tailed MST Lab
"""

try:
    import pytest
    import tempfile
    import json
    from pathlib import Path
except ImportError as e:
    print(f"Import error in conftest.py: {e}")
    print("Please install test requirements: pip install -r requirements-test.txt")
    raise

try:
    from src.config.manager import ConfigManager
    from src.graphgen import SparseGraph, sample_ensemble
    from src.utils.rng import substream
    from src.weights import build_power_law
except ImportError as e:
    print(f"Import error for source modules: {e}")
    print("Make sure the src modules are available in PYTHONPATH")
    raise


@pytest.fixture
def temp_dir():
    """Create a temporary directory for testing"""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def rng():
    """Seeded generator; every test gets the same stream"""
    return substream(20240917)


@pytest.fixture
def small_seq():
    """Power-law weights on 60 vertices"""
    return build_power_law(60, 3.0, 3.5)


@pytest.fixture
def power_seq():
    """Power-law weights on 2000 vertices"""
    return build_power_law(2000, 3.0, 3.5)


@pytest.fixture
def power_ensemble(power_seq):
    """Percolation ensemble of ``power_seq`` with the minus-ell kernel"""
    return sample_ensemble(power_seq, "product-minus-ell", seed=11, replica=0)


@pytest.fixture
def diamond_graph():
    """4 vertices, 5 edges: a 4-cycle with the chord {1, 3}"""
    return SparseGraph.from_edge_list(4, [(1, 2), (1, 3), (1, 4), (2, 3), (3, 4)])


@pytest.fixture
def weighted_triangle():
    """Triangle on {1, 2, 3} with distinct edge weights"""
    return SparseGraph.from_edge_list(3, [(1, 2), (2, 3), (1, 3)], weights=[0.1, 0.2, 0.3])


@pytest.fixture
def sample_config_data(temp_dir):
    """Sample configuration data with tiny experiment sizes"""
    return {
        "defaults": {
            "seed": 7,
            "tau": 3.5,
            "c": 3.0,
            "kernel": "product-minus-ell",
            "replicas": 2,
            "pairs": 16,
            "threads": 1,
            "edge_cap": 5000000,
            "population_budget": 100000,
            "out_dir": str(temp_dir / "results")
        },
        "experiments": {
            "generate": {"n_values": [300], "replicas": 1},
            "mst": {"n_values": [300], "lambdas": [1, 2, 4], "replicas": 2},
            "scaling": {"n_values": [256, 512, 1024, 2048, 4096], "replicas": 2, "pairs": 8},
            "critical-window": {"n_values": [500], "lambdas": [1, 2, 4], "replicas": 3},
            "dimension": {"n_values": [500], "scale_grid": [1, 2, 4, 8, 16], "trim": 0, "replicas": 1},
            "validate": {"n_values": [40], "profile": "quick", "trials": 4000}
        }
    }


@pytest.fixture
def config_manager(temp_dir, sample_config_data):
    """Create a ConfigManager instance with test data"""
    config_path = temp_dir / "config.json"
    with open(config_path, 'w') as f:
        json.dump(sample_config_data, f)

    return ConfigManager(config_path)


@pytest.fixture
def weights_file(temp_dir, small_seq):
    """One-column weight file written from ``small_seq``"""
    path = temp_dir / "weights.txt"
    small_seq.to_file(path)
    return path
