import os

import pytest

import cubesum


def test_certificates():
    c = cubesum.search_cubesum(15)
    assert c["a"] ** 3 + c["b"] ** 3 == 15 * c["c"] ** 3
    assert cubesum.verify_certificate(c["a"], c["b"], c["c"], 15)
    assert cubesum.verify_certificate(17, 37, 21, 6)
    assert not cubesum.verify_certificate(1, 1, 1, 6)


def test_point_file_certificate():
    with open(os.environ["CUBESUM_POINTS"]) as f:
        line = next(l for l in f if l.strip() and not l.startswith("#"))
    c = cubesum.point_to_certificate(line, 363)
    assert c["a"] ** 3 + c["b"] ** 3 == 363 * c["c"] ** 3


def test_local_data():
    assert cubesum.conductor(11) == 1089
    assert cubesum.conductor(1) == 27
    assert cubesum.tamagawa(11) == {3: 2, 11: 1}
    assert all(c == 1 for c in cubesum.tamagawa(363).values())
    assert cubesum.ap(1, 7) == (-1, -1)
    assert cubesum.ap(5, 11) == (0, 0)


def test_signs_and_values():
    assert cubesum.root_number(5) == 1
    assert cubesum.root_number(15) == -1
    v = cubesum.leading_value(15)
    assert v["order"] == 1
    assert abs(float(v["value"]) - 3.1607158689138776389) < 1e-15
    assert v["tail_bound"] < 1e-30


def test_report_json():
    r = cubesum.report(5, ["local_fields"])
    assert set(["prime", "class_mod9", "config", "sections", "status", "timings_ms"]) <= set(r)
    assert r["status"] == "pass"
    assert r["exit_code"] == 0


def test_errors():
    with pytest.raises(cubesum.CubesumError):
        cubesum.search_cubesum(4, 1000)
    with pytest.raises(cubesum.CubesumError):
        cubesum.report(7, ["matrices"])
