"""Closed-form purity predictions and domain-wall tension extraction."""

import pytest

from resetsim.spinmodel import SpinModelParams, extract_S0, predict_Sp
from resetsim.stats import EnsembleStats


def _stats(L, T, p, mean_sp):
    return EnsembleStats(
        L=L, T=T, p=p, n_samples=100,
        mean_sp=mean_sp, var_sp=0.0, se_mean_sp=0.0, se_var_sp=0.0,
        mean_en=0.0, var_en=0.0, se_mean_en=0.0, se_var_en=0.0,
    )


def test_params_validation():
    with pytest.raises(ValueError):
        SpinModelParams(d=1, T=4, L=4, p=0.1, p_c_ref=0.25)
    with pytest.raises(ValueError):
        SpinModelParams(d=2, T=0, L=4, p=0.1, p_c_ref=0.25)


def test_predict_below_transition_is_linear_in_depth():
    # qubits: T*p bits of system-environment entanglement
    assert predict_Sp(SpinModelParams(d=2, T=100, L=64, p=0.1, p_c_ref=0.25)) == 10.0
    # qudits scale by log2(d)
    assert predict_Sp(SpinModelParams(d=4, T=100, L=64, p=0.1, p_c_ref=0.25)) == 20.0


def test_predict_above_transition_is_extensive():
    p = SpinModelParams(d=2, T=256, L=64, p=0.4, p_c_ref=0.25)
    assert predict_Sp(p, S0=0.975) == pytest.approx(62.4)
    with pytest.raises(ValueError):
        predict_Sp(p, S0=1.2)


def test_extract_S0_recovers_slope():
    # mean S_p = 0.97 * L + 1.5 across sizes -> tension 0.97
    rows = [_stats(L, 4 * L, 0.4, 0.97 * L + 1.5) for L in (32, 48, 64)]
    assert extract_S0(rows) == pytest.approx(0.97)
    # size filter applies
    rows.append(_stats(8, 32, 0.4, 100.0))
    assert extract_S0(rows, sizes=(32, 48, 64)) == pytest.approx(0.97)
    with pytest.raises(ValueError):
        extract_S0(rows[:1])
