import dataclasses
import json
from fractions import Fraction

import pytest

from src import chartable
from src.chartable import (
    assemble_full_table,
    assemble_table_from_quotients,
    cached_table,
    closed_form_table,
    load_table,
    multiplicity_classes,
    save_table,
    table_path,
    verify_table,
)
from src.errors import InvalidInputError, ResourceLimitError, TableChecksumError, TableParseError, TableVersionError

from .conftest import P


def test_table_k4_columns(table4):
    assert table4.exact
    assert table4.complete
    assert table4.column(P(8)) == [48, -8, -2, 4, -6]
    assert table4.column(P(6, 2)) == [32, 4, -8, -2, 8]
    assert table4.row(P(8)) == [48, 32, 12, 12, 1]
    assert [table4.multiplicities[m] for m in table4.modules] == [1, 20, 14, 56, 14]
    assert set(table4.provenance.values()) == {"spectrum-matched"}


def test_table_k4_invariants(table4):
    checks = table4.check_invariants()
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    assert {"identity column", "degree row", "multiplicities", "multiplicity sum"} <= {c.name for c in checks}


@pytest.mark.parametrize("k,column", [(2, [2, -1]), (3, [8, -2, 2])])
def test_small_tables(k, column):
    table = assemble_full_table(k)
    assert table.column(P(2 * k)) == column
    assert all(c.passed for c in table.check_invariants())


@pytest.mark.slow
def test_table_k5():
    table = assemble_full_table(5)
    assert table.column(P(10)) == [384, -48, -8, 16, 4, -12, 24]
    assert all(c.passed for c in table.check_invariants())


def test_assembly_guard():
    with pytest.raises(ResourceLimitError):
        assemble_full_table(6)


def test_quotient_assembly_matches_dense(table4):
    table = assemble_table_from_quotients(4)
    assert table.entries == table4.entries
    assert set(table.provenance.values()) == {"quotient-extracted"}


@pytest.mark.slow
def test_quotient_assembly_k7():
    table = assemble_table_from_quotients(7)
    assert len(table.modules) == 15
    assert all(c.passed for c in table.check_invariants())
    assert table.entry(P(12, 2), P(14)) == -3840
    grid = closed_form_table(7)
    assert len(grid.entries) == 25
    settled = {P(14), P(12, 2), P(10, 2, 2)}
    for (mu, lam), value in grid.entries.items():
        if mu in settled and lam in settled:
            assert value == table.entries[(mu, lam)], (mu, lam)


def test_closed_form_table_agrees_where_in_range(table4):
    table = closed_form_table(4)
    assert P(4, 4) in table.modules
    assert table.entries
    for key, value in table.entries.items():
        assert value == table4.entries[key], key


def test_corrupted_table_fails_invariants(table4):
    entries = dict(table4.entries)
    entries[(P(6, 2), P(8))] = Fraction(-7)
    broken = dataclasses.replace(table4, entries=entries)
    failed = {c.name for c in broken.check_invariants() if not c.passed}
    assert failed == {"trace [8]"}


def test_multiplicity_classes(table4):
    groups = multiplicity_classes(table4, P(8))
    assert [g.value for g in groups] == [48, 4, -2, -6, -8]
    assert [g.multiplicity for g in groups] == [1, 56, 14, 14, 20]
    assert groups[-1].modules == [P(6, 2)]


def test_verify_table_k4():
    report = verify_table(4, "both")
    assert report.ok
    counts = report.counts()
    assert counts["pass"] > 0
    assert counts.get("fail", 0) == 0
    assert "out-of-range" in counts


@pytest.mark.slow
@pytest.mark.parametrize("k", [5, 6])
def test_verify_table_larger_k(k):
    assert verify_table(k).ok


def test_verify_table_rejects_bad_method():
    with pytest.raises(InvalidInputError):
        verify_table(4, "guess")
    with pytest.raises(ResourceLimitError):
        verify_table(7, "spectrum")


# ── Persistence ──


def test_save_and_load(tmp_path, table4):
    path = tmp_path / "k4.json"
    save_table(path, table4)
    loaded = load_table(path)
    assert loaded.entries == table4.entries
    assert loaded.provenance == table4.provenance
    assert loaded.modules == table4.modules
    assert loaded.multiplicities == table4.multiplicities


def _rewrite(path, edit):
    body = json.loads(path.read_text(encoding="utf-8"))
    edit(body)
    path.write_text(json.dumps(body), encoding="utf-8")


def test_load_rejects_other_versions(tmp_path, table4):
    path = tmp_path / "k4.json"
    save_table(path, table4)
    _rewrite(path, lambda body: body.update(format_version=99))
    with pytest.raises(TableVersionError):
        load_table(path)


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "k4.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(TableParseError):
        load_table(path)


def test_load_detects_tampering(tmp_path, table4):
    path = tmp_path / "k4.json"
    save_table(path, table4)
    _rewrite(path, lambda body: body["entries"][0].update(value="1000"))
    with pytest.raises(TableChecksumError):
        load_table(path)


def test_cached_table_builds_once(cache_dir, table4, monkeypatch):
    calls = []

    def fake_assemble(k, workers=1):
        calls.append(k)
        return table4

    monkeypatch.setattr(chartable, "assemble_full_table", fake_assemble)
    first = cached_table(4, cache_dir)
    assert table_path(cache_dir, 4).exists()
    second = cached_table(4, cache_dir)
    assert calls == [4]
    assert second.entries == first.entries
