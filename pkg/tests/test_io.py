import json

import pytest

from epwkit.fields import GF, QQ
from epwkit.gm import build_gm
from epwkit.io import FormatError, dumps_gm, dumps_lag, loads_gm, loads_lag, read_lag, write_lag
from epwkit.lagrangian import decomposable_search, random_instance
from epwkit.scenarios import dual_points_with_stratum


@pytest.mark.parametrize("F", [GF(7), GF(49), QQ])
def test_lagrangian_round_trip_is_byte_exact(F, tmp_path):
    A = random_instance(3, F)
    text = dumps_lag(A)
    B = loads_lag(text)
    assert B.A == A.A and B.is_lagrangian and dumps_lag(B) == text
    write_lag(A, tmp_path / "a.lag")
    assert dumps_lag(read_lag(tmp_path / "a.lag")) == text


def test_scan_record_survives_the_round_trip():
    A, _ = decomposable_search(random_instance(0, GF(3)), 1)
    B = loads_lag(dumps_lag(A))
    assert B.ndv_status == "verified_over_field" and B.scan == A.scan


def test_version_mismatch_is_rejected():
    text = dumps_lag(random_instance(0, GF(7))).replace("epwkit-lagrangian 1", "epwkit-lagrangian 2", 1)
    with pytest.raises(FormatError, match="version"):
        loads_lag(text)


def test_tampered_basis_is_rejected():
    lines = dumps_lag(random_instance(0, GF(7))).splitlines()
    row = lines[8].split()
    row[-1] = str((int(row[-1]) + 1) % 7)
    lines[8] = " ".join(row)
    with pytest.raises(FormatError):
        loads_lag("\n".join(lines) + "\n")


def test_gm_round_trip_and_tamper_detection():
    A = random_instance(0, GF(11))
    gm = build_gm(A, dual_points_with_stratum(A, 2, limit=1)[0])
    text = dumps_gm(gm)
    assert dumps_gm(loads_gm(text)) == text
    data = json.loads(text)
    data["W"][0][0] = str((int(data["W"][0][0]) + 1) % 11)
    with pytest.raises(FormatError):
        loads_gm(json.dumps(data))
