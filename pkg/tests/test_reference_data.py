
import pytest

from hylleraas.errors import DomainError, MissingDataError
from hylleraas.reference_data import (
    PINNED_SHA256,
    TABLE_FILES,
    TABLE2_RANGE,
    check_dirac_bracket,
    diff_column_residuals,
    epsilon_metric,
    eta_metric,
    load_reference,
    reference_row,
    table_digests,
    verify_checksums,
)

# rows whose printed diff column is off from E_S - E_Z in the last printed digits
INCONSISTENT_DIFF_ROWS = [87, 88, 89, 90, 91, 92, 93, 95, 96, 97, 98, 99]


@pytest.fixture
def data_copy(tmp_path):
    from importlib import resources

    src = resources.files("hylleraas.data")
    for name in TABLE_FILES:
        (tmp_path / name).write_bytes(src.joinpath(name).read_bytes())
    return tmp_path


def test_packaged_checksums():
    assert verify_checksums() == {name: True for name in TABLE_FILES}
    assert table_digests() == PINNED_SHA256


def test_all_rows_present():
    rows = load_reference()
    assert sorted(rows) == list(range(1, 100))
    assert all(rows[Z].E0 is not None for Z in TABLE2_RANGE)
    assert rows[9].E0 is None


def test_order_follows_coefficient_columns():
    assert reference_row(56).order == 3
    assert reference_row(57).order == 2
    assert len(reference_row(99).b) == 2


@pytest.mark.parametrize(
    "Z,field,value",
    [
        (1, "E_Z", -0.5261218),
        (2, "E_S", -2.9020117),
        (2, "lambda2", 2.20648),
        (3, "diff", 0.0008960),
        (2, "E_exp", -2.90338648),
        (8, "E_corr", -59.193643431213),
        (5, "eta", 1.49),
        (99, "E_Z", -11624.46035),
        (70, "xi1", 83.7392),
        (2, "b", (0.39832, -0.06588, 0.00852)),
    ],
)
def test_spot_values(Z, field, value):
    assert getattr(reference_row(Z), field) == value


def test_swapped_rows_are_annotated():
    row = reference_row(69)
    assert (row.xi1, row.xi2) == (82.220, 66.1140)
    assert "stored in role order" in row.remark
    assert sum("role order" in r.remark for r in load_reference().values()) == 4


def test_hydrogen_has_no_experimental_value():
    assert reference_row(1).E_exp is None


def test_diff_column_consistency():
    res = diff_column_residuals()
    bad = sorted(Z for Z, v in res.items() if abs(v) > 1.5e-7)
    assert bad == INCONSISTENT_DIFF_ROWS
    # the mismatches are whole units of the sixth decimal
    assert all(abs(res[Z]) < 5.5e-6 for Z in bad)


def test_printed_eta_recomputed():
    for Z in TABLE2_RANGE:
        r = reference_row(Z)
        assert eta_metric(r.E_S, r.E_Z, r.E0, r.E_corr) == pytest.approx(r.eta, abs=0.01)


def test_metrics():
    assert epsilon_metric(-2.9021724, -2.90338648) == pytest.approx(4.1815996884e-4, rel=1e-9)
    assert eta_metric(2.0, 1.0, 0.5, 0.25) == 4.0
    with pytest.raises(ZeroDivisionError):
        epsilon_metric(1.0, 0.0)
    with pytest.raises(ZeroDivisionError):
        eta_metric(1.0, 0.0, 2.0, 2.0)


@pytest.mark.parametrize("Z", [1, 2, 3])
def test_dirac_bracket_holds_for_table_values(Z):
    chk = check_dirac_bracket(Z)
    assert chk.holds
    assert chk.lower < chk.dirac < chk.upper


def test_dirac_bracket_with_supplied_energies():
    assert not check_dirac_bracket(1, E_S=-0.5261218, E_Z=-0.5261218).upper_holds


def test_dirac_bracket_outside_range():
    with pytest.raises(MissingDataError):
        check_dirac_bracket(4)


def test_reference_row_domain():
    with pytest.raises(DomainError):
        reference_row(0)


def test_copied_tables_load(data_copy):
    assert verify_checksums(data_copy) == {name: True for name in TABLE_FILES}
    assert load_reference(data_copy)[2] == reference_row(2)


def test_tampered_copy_fails_checksum(data_copy):
    p = data_copy / "table1.csv"
    p.write_text(p.read_text().replace("-2.9020117", "-2.9020118"))
    assert verify_checksums(data_copy)["table1.csv"] is False
    assert verify_checksums(data_copy)["table2.csv"] is True


def test_missing_file(data_copy):
    (data_copy / "table3.csv").unlink()
    assert verify_checksums(data_copy)["table3.csv"] is False
    with pytest.raises(MissingDataError):
        load_reference(data_copy)
