import math
import os
import pathlib

import pytest

import confdim

ROOT = pathlib.Path(os.environ.get("CONFDIM_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


def gallery(name):
    return confdim.System.from_file(str(ROOT / "gallery" / f"{name}.ifs"))


def test_cantor_bowen():
    est = confdim.bowen_dimension(gallery("cantor3"), depth=8)
    assert est.method == "bowen"
    assert abs(est.value - math.log(2) / math.log(3)) < 1e-6


def test_system_properties():
    sys = confdim.System.from_text("map affine 0.5 0\nmap affine 0.5 0.5\n")
    assert len(sys) == 2
    assert sys.x0 == pytest.approx(0.0)
    assert sys.x1 == pytest.approx(1.0)
    assert not sys.rescaled


def test_validation_error_carries_kind():
    with pytest.raises(confdim.ConfdimError) as info:
        confdim.System.from_text("map affine 0.5 0\n")
    assert info.value.kind == "TrivialSystem"


def test_budget_error():
    with pytest.raises(confdim.ConfdimError) as info:
        confdim.bowen_dimension(gallery("full_interval"), depth=12, budget=100)
    assert info.value.kind == "BudgetExceeded"


def test_separation_and_report():
    sep = confdim.separation(gallery("overlap_pi"), depth=8)
    assert len(sep["ilc_decay"]) == 8
    assert all(b <= a for a, b in zip(sep["ilc_decay"], sep["ilc_decay"][1:]))
    rep = confdim.report(gallery("full_interval"))
    assert rep["branch"] == "AGREE"
    assert rep["dim_h_full"]
    assert rep["box"].value == pytest.approx(1.0, abs=0.02)


def test_tangent_first_level():
    w = confdim.tangent(gallery("overlap_pi"), i=1)
    assert w["failed_step"] is None
    assert w["left_gap"] <= 1.0
