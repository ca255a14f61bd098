"""Tests for zero catalog parsing, persistence, indexing and the zero-sum lemmas."""

import math
import struct

import numpy as np
import pytest

from lehmancert.errors import CatalogError, CatalogExhaustedError, DomainError
from lehmancert.zero_catalog import (
    INVERSE_CUBE_SUM_BOUND,
    INVERSE_SQUARE_SUM_BOUND,
    MAGIC,
    ZeroCatalog,
    count_below,
    inverse_power_sum,
    load_binary,
    load_catalog,
    load_text,
    ordinates_up_to,
    reciprocal_sum_bracket,
    require_covered,
    save_binary,
    save_text,
    tail_power_bound,
    zero_density_bracket,
)

from conftest import FIRST30


def test_load_text_reads_header_and_values(first30):
    assert len(first30) == 30
    assert first30.first == 14.134725142
    assert first30.last == 101.317851006
    assert first30.accuracy == 1e-9
    assert first30.source == str(FIRST30)


def test_default_accuracy_without_header(tmp_path):
    path = tmp_path / "z.txt"
    path.write_text("14.134725142\n\n21.022039639\n", encoding="utf-8")
    catalog = load_text(path)
    assert len(catalog) == 2
    assert catalog.accuracy == 1e-9


def test_parse_error_reports_line_number(tmp_path):
    path = tmp_path / "z.txt"
    path.write_text("# header\n14.134725142\nabc\n", encoding="utf-8")
    with pytest.raises(CatalogError, match=":3:"):
        load_text(path)


def test_bad_accuracy_header(tmp_path):
    path = tmp_path / "z.txt"
    path.write_text("# accuracy: tiny\n14.134725142\n", encoding="utf-8")
    with pytest.raises(CatalogError, match="accuracy"):
        load_text(path)


def test_non_monotone_rejected_with_index(tmp_path):
    path = tmp_path / "z.txt"
    path.write_text("14.134725142\n25.010857580\n21.022039639\n", encoding="utf-8")
    with pytest.raises(CatalogError, match="index 2"):
        load_text(path)


def test_duplicate_rejected():
    with pytest.raises(CatalogError):
        ZeroCatalog(np.array([14.2, 20.0, 20.0]))


def test_first_ordinate_floor():
    with pytest.raises(CatalogError):
        ZeroCatalog(np.array([14.1, 20.0]))


def test_empty_and_non_finite_rejected():
    with pytest.raises(CatalogError):
        ZeroCatalog(np.array([], dtype=float))
    with pytest.raises(CatalogError):
        ZeroCatalog(np.array([14.2, math.nan]))
    with pytest.raises(CatalogError):
        ZeroCatalog(np.array([14.2, 20.0]), accuracy=-1.0)


def test_ordinates_are_read_only(first30):
    with pytest.raises(ValueError):
        first30.ordinates[0] = 15.0


def test_catalog_copies_input():
    data = np.array([14.2, 20.0])
    catalog = ZeroCatalog(data)
    data[0] = 15.0
    assert catalog.first == 14.2


def test_effective_accuracy_adds_one_ulp(first30):
    assert first30.effective_accuracy == 1e-9 + math.ulp(101.317851006)


def test_binary_round_trip_is_bit_exact(first30, tmp_path):
    path = tmp_path / "z.bin"
    save_binary(first30, path)
    data = path.read_bytes()
    assert data[:4] == MAGIC
    assert len(data) == 4 + 8 + 8 + 8 * 30
    restored = load_binary(path)
    assert np.array_equal(restored.ordinates, first30.ordinates)
    assert restored.accuracy == first30.accuracy


def test_text_round_trip(first30, tmp_path):
    path = tmp_path / "z.txt"
    save_text(first30, path)
    restored = load_text(path)
    assert np.array_equal(restored.ordinates, first30.ordinates)
    assert restored.accuracy == first30.accuracy
    assert restored.source == first30.source


def test_source_header_and_explicit_source(tmp_path):
    path = tmp_path / "z.txt"
    path.write_text("# source: LMFDB first zeros\n14.134725142\n", encoding="utf-8")
    assert load_text(path).source == "LMFDB first zeros"
    assert load_text(path, source="mine").source == "mine"


def test_equality_ignores_provenance(first30, tmp_path):
    binary = tmp_path / "z.bin"
    text = tmp_path / "z.txt"
    save_binary(first30, binary)
    save_text(load_binary(binary), text)
    restored = load_text(text)
    assert restored.source == str(binary)
    assert restored == first30
    assert restored != ZeroCatalog(first30.ordinates, accuracy=1e-12)


def test_load_catalog_sniffs_format(first30, tmp_path):
    binary = tmp_path / "z.bin"
    save_binary(first30, binary)
    assert load_catalog(binary) == load_binary(binary)
    assert len(load_catalog(FIRST30)) == 30


def test_bad_magic(tmp_path):
    path = tmp_path / "z.bin"
    path.write_bytes(struct.pack("<4sQd", b"NOPE", 1, 1e-9) + struct.pack("<d", 14.2))
    with pytest.raises(CatalogError, match="magic"):
        load_binary(path)


def test_truncated_binary(first30, tmp_path):
    path = tmp_path / "z.bin"
    save_binary(first30, path)
    data = path.read_bytes()
    (tmp_path / "short.bin").write_bytes(data[:-8])
    with pytest.raises(CatalogError, match="truncated"):
        load_binary(tmp_path / "short.bin")
    (tmp_path / "header.bin").write_bytes(data[:10])
    with pytest.raises(CatalogError, match="truncated"):
        load_binary(tmp_path / "header.bin")


def test_binary_zero_count(tmp_path):
    path = tmp_path / "z.bin"
    path.write_bytes(struct.pack("<4sQd", MAGIC, 0, 1e-9))
    with pytest.raises(CatalogError, match="non-empty"):
        load_binary(path)


def test_count_below(first30):
    assert count_below(first30, 14.0) == 0
    assert count_below(first30, 14.134725142) == 1
    assert count_below(first30, 50.0) == 10
    assert count_below(first30, 1e6) == 30


def test_ordinates_up_to_and_coverage(first30):
    view = ordinates_up_to(first30, 30.5)
    assert view.tolist() == [14.134725142, 21.022039639, 25.010857580, 30.424876126]
    with pytest.raises(CatalogExhaustedError) as info:
        ordinates_up_to(first30, 200.0)
    assert info.value.T == 200.0
    assert info.value.last == first30.last
    require_covered(first30, first30.last)


def test_inverse_power_sums_below_lemma_constants(first30):
    assert inverse_power_sum(first30, 2) < INVERSE_SQUARE_SUM_BOUND
    assert inverse_power_sum(first30, 3) < INVERSE_CUBE_SUM_BOUND
    assert inverse_power_sum(first30, 1, 20.0) == pytest.approx(1.0 / 14.134725142)
    with pytest.raises(DomainError):
        inverse_power_sum(first30, 0)


def test_tail_power_bound():
    T = 100.0
    assert tail_power_bound(2, T) == pytest.approx(math.log(100.0) / 100.0)
    assert tail_power_bound(3, T) == pytest.approx(math.log(100.0) / 1e4)
    with pytest.raises(DomainError):
        tail_power_bound(1, T)
    with pytest.raises(DomainError):
        tail_power_bound(2, 10.0)


def test_tail_bound_dominates_partial_tail(first30):
    T = 50.0
    beyond = first30.ordinates[count_below(first30, T) :]
    assert float(np.sum(1.0 / beyond**2)) <= tail_power_bound(2, T)


def test_reciprocal_sum_bracket_contains_direct_sum(first30):
    T = first30.last
    lo, hi = reciprocal_sum_bracket(T)
    assert hi - lo == pytest.approx(2 * 0.9321)
    assert lo <= inverse_power_sum(first30, 1, T) <= hi
    with pytest.raises(DomainError):
        reciprocal_sum_bracket(10.0)


def test_zero_density_bracket_contains_direct_sum(first30):
    T1, T2 = 40.0, first30.last
    window = first30.ordinates[count_below(first30, T1) :]
    direct = float(np.sum(1.0 / window**2))
    lo, hi = zero_density_bracket(lambda x: 1.0 / (x * x), T1, T2)
    assert lo <= direct <= hi


def test_zero_density_bracket_domain():
    with pytest.raises(DomainError):
        zero_density_bracket(lambda x: 1.0 / x, 10.0, 50.0)
    with pytest.raises(DomainError):
        zero_density_bracket(lambda x: 1.0 / x, 50.0, 40.0)
    with pytest.raises(DomainError):
        zero_density_bracket(lambda x: x, 20.0, 50.0)


def test_equality_and_hash(first30):
    other = load_text(FIRST30)
    assert other == first30
    assert hash(other) == hash(first30)
    assert first30 != ZeroCatalog(first30.ordinates[:10], source=first30.source)


def test_closed_form_values():
    two_pi_e = 2.0 * math.pi * math.e
    assert tail_power_bound(2, two_pi_e) == pytest.approx(0.166157, rel=1e-5)
    assert tail_power_bound(3, 100.0) == pytest.approx(4.6052e-4, rel=1e-4)
    lo, hi = reciprocal_sum_bracket(1131944.4718)
    assert (lo + hi) / 2 == pytest.approx(11.655, abs=2e-3)
    assert hi == pytest.approx(12.587, abs=2e-3)


@pytest.mark.slow
def test_lemma_sums_over_large_catalog(large_catalog):
    T = float(large_catalog.ordinates[99_999])
    assert inverse_power_sum(large_catalog, 2, T) < INVERSE_SQUARE_SUM_BOUND
    assert inverse_power_sum(large_catalog, 3, T) < INVERSE_CUBE_SUM_BOUND
    low, high = reciprocal_sum_bracket(T)
    assert low <= inverse_power_sum(large_catalog, 1, T) <= high
