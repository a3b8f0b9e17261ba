from tropmwis.bench import COLUMNS, bench_suite, derive_seed, parse_config, rows_to_csv

import pytest
from tropmwis.errors import InvalidInput


def test_grid_sizes_grow():
    rows, _ = bench_suite({"seed": 0, "grids": {"min": 2, "max": 6}})
    sizes = [r["tw_size"] for r in rows]
    assert len(rows) == 5 and sizes == sorted(sizes) and len(set(sizes)) == 5
    assert rows[0]["tw_source"] == "exact" and rows[-1]["tw_source"] != "exact"


def test_expanders_within_limit():
    rows, _ = bench_suite({"seed": 0, "expanders": [[4, 2], [8, 2], [12, 2], [12, 3]]})
    for r in rows:
        assert r["within_limit"] and r["formula_size"] <= r["size_limit"]


def test_csv_header_and_seeds():
    assert rows_to_csv([]).strip().split(",") == list(COLUMNS)
    assert derive_seed(0, "a") == derive_seed(0, "a") != derive_seed(0, "b")


def test_config_validation():
    assert parse_config({"grids": [3]})["grids"] == [(3, 3)]
    for bad in ({"grid": []}, {"grids": [[0, 2]]}, {"expanders": [[1]]}, []):
        with pytest.raises(InvalidInput):
            parse_config(bad)
