"""Gate execution, truth tables, margins, calibration and energy."""

import math

import pytest

from sotlogic import (ArraySpec, DeviceParams, GateConfigError, GateKind,
                      GateOp, InseparableError, MagState, MramArray, Topology,
                      calibrate_gate, execute_gate, gate_energy,
                      margin_analysis, truth_table, write_cell)
from sotlogic.gates import (format_gate_ops, parse_gate_ops, pattern_bits,
                            pattern_label)

P2 = DeviceParams.default_2t1r()
PV = DeviceParams.default_vgsot()

A_MTJ = math.pi * (50e-9) ** 2 / 4
R_P = 10.0e-12 / A_MTJ
R_AP = 2 * R_P
R_CH = 1112.0


def spec_for(topology, n_inputs, params=None):
    if params is None:
        params = P2 if topology is Topology.TWO_T_ONE_R else PV
    return ArraySpec(topology, max(3, n_inputs + 1), 1, params)


def reference_truth(kind, bits):
    """Brute-force boolean oracle, independent of the gates module."""
    ones = sum(bits)
    return {
        GateKind.NOR: int(ones == 0),
        GateKind.OR: int(ones > 0),
        GateKind.NAND: int(ones < len(bits)),
        GateKind.AND: int(ones == len(bits)),
    }[kind]


def calibrated(topology, kind, n_inputs, margin_fraction=0.5, params=None):
    spec = spec_for(topology, n_inputs, params)
    cal = calibrate_gate(spec, kind, n_inputs, margin_fraction=margin_fraction)
    return cal.apply(spec)


# --- nominal logic --------------------------------------------------------------

@pytest.mark.parametrize("topology", list(Topology))
@pytest.mark.parametrize("kind", list(GateKind))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_truth_tables_match_boolean_oracle(topology, kind, n):
    spec, op = calibrated(topology, kind, n)
    table = truth_table(spec, kind, n, op=op)
    assert len(table.rows) == 2 ** n
    for row in table.rows:
        assert row.actual == reference_truth(kind, row.bits), \
            f"{kind.value} {row.bits}"


@pytest.mark.parametrize("topology", list(Topology))
def test_complementary_gate_pairs(topology):
    """NOR(x,y) = NOT(OR(x,y)) and NAND = NOT(AND), executed as own recipes."""
    for a, b in [(GateKind.NOR, GateKind.OR), (GateKind.NAND, GateKind.AND)]:
        spec_a, op_a = calibrated(topology, a, 2)
        spec_b, op_b = calibrated(topology, b, 2)
        ta = truth_table(spec_a, a, 2, op=op_a)
        tb = truth_table(spec_b, b, 2, op=op_b)
        for ra, rb in zip(ta.rows, tb.rows):
            assert ra.actual == 1 - rb.actual


def test_single_input_nor_is_not():
    spec, op = calibrated(Topology.TWO_T_ONE_R, GateKind.NOR, 1)
    table = truth_table(spec, GateKind.NOR, 1, op=op)
    assert [(r.bits[0], r.actual) for r in table.rows] == [(0, 1), (1, 0)]


def test_execute_gate_never_mutates_inputs():
    spec, op = calibrated(Topology.TWO_T_ONE_R, GateKind.NOR, 2)
    arr = MramArray.uniform(spec)
    arr = write_cell(arr, 0, 0, MagState.P)
    before = arr.logic_grid()
    trace = execute_gate(arr, op)
    after = trace.post.logic_grid()
    for r in range(spec.rows):
        if r != op.output_row:
            assert after[r] == before[r]


def test_post_state_differs_only_at_output():
    spec, op = calibrated(Topology.TWO_T_ONE_R, GateKind.NOR, 2)
    arr = MramArray.uniform(spec)
    trace = execute_gate(arr, op)
    diff = [(r, c) for r in range(spec.rows) for c in range(spec.cols)
            if trace.post.cell(r, c).mag is not arr.cell(r, c).mag]
    assert all(rc == (op.output_row, op.col) for rc in diff)


def test_trace_records_disturb_verdicts():
    # Default parameters: the all-ones pattern pushes each input branch
    # current past the STT density limit, which is advisory, not blocking.
    spec, op = calibrated(Topology.TWO_T_ONE_R, GateKind.NOR, 2)
    arr = MramArray.uniform(spec)
    for r in op.input_rows:
        arr = write_cell(arr, r, 0, MagState.P)
    trace = execute_gate(arr, op)
    assert len(trace.disturb_ok) == 2
    assert not all(trace.disturb_ok)
    # A relaxed density limit clears the verdict.
    relaxed = spec.nominal.replace(J_stt_crit=1e12)
    spec2 = ArraySpec(spec.topology, spec.rows, spec.cols, relaxed)
    trace2 = execute_gate(MramArray.uniform(spec2), op)
    assert all(trace2.disturb_ok)


def test_invalid_ops_rejected():
    with pytest.raises(GateConfigError):
        GateOp(kind=GateKind.NOR, input_rows=(), output_row=2, col=0, v_drive=1.1)
    with pytest.raises(GateConfigError):
        GateOp(kind=GateKind.NOR, input_rows=(0, 1), output_row=1, col=0,
               v_drive=1.1)
    with pytest.raises(GateConfigError):  # OR must initialize AP
        GateOp(kind=GateKind.OR, input_rows=(0, 1), output_row=2, col=0,
               v_drive=-1.1, out_init=MagState.P)


def test_out_of_bounds_addresses_rejected():
    spec = spec_for(Topology.TWO_T_ONE_R, 2)
    op = GateOp.for_kind(GateKind.NOR, spec.topology, input_rows=(0, 7),
                         output_row=8)
    with pytest.raises(GateConfigError):
        execute_gate(MramArray.uniform(spec), op)


# --- margins -----------------------------------------------------------------------

def test_two_input_nor_margin_ideal_access():
    # From the network hand values: I(0,1) - I(0,0) at R_on = 0.
    spec = spec_for(Topology.TWO_T_ONE_R, 2, P2.replace(R_on=0.0))
    report = margin_analysis(spec, GateKind.NOR, 2)
    i00 = 1.1 / (R_AP / 2 + R_CH)
    i01 = 1.1 / (R_P * R_AP / (R_P + R_AP) + R_CH)
    assert report.margin == pytest.approx(i01 - i00, rel=1e-6)
    assert report.margin == pytest.approx(66.8e-6, rel=2e-3)


@pytest.mark.parametrize("topology", list(Topology))
def test_nor_margin_shrinks_with_more_inputs(topology):
    margins = [margin_analysis(spec_for(topology, n), GateKind.NOR, n).margin
               for n in (2, 3, 4)]
    assert margins[0] > margins[1] > margins[2] > 0.0


def test_zero_tmr_kills_margin():
    spec = spec_for(Topology.TWO_T_ONE_R, 2, P2.replace(TMR0=0.0))
    report = margin_analysis(spec, GateKind.NOR, 2)
    assert report.margin == pytest.approx(0.0, abs=1e-15)
    assert report.relative_margin == pytest.approx(0.0, abs=1e-12)


def test_margin_points_cover_all_patterns():
    report = margin_analysis(spec_for(Topology.VGSOT, 2), GateKind.NOR, 2)
    assert sorted(p.label for p in report.points) == ["00", "01", "10", "11"]
    assert [p.must_switch for p in sorted(report.points, key=lambda q: q.label)] \
        == [False, True, True, True]


# --- calibration ------------------------------------------------------------------------

def test_read_scheme_calibration_midpoint_ideal_access():
    spec = spec_for(Topology.TWO_T_ONE_R, 2, P2.replace(R_on=0.0))
    cal = calibrate_gate(spec, GateKind.NOR, 2)
    i00 = 1.1 / (R_AP / 2 + R_CH)
    i01 = 1.1 / (R_P * R_AP / (R_P + R_AP) + R_CH)
    assert cal.operating_point == pytest.approx((i00 + i01) / 2, rel=1e-6)
    assert cal.operating_point == pytest.approx(210.7e-6, rel=1e-3)


def test_calibration_places_threshold_at_fraction():
    spec = spec_for(Topology.TWO_T_ONE_R, 2)
    lo_cal = calibrate_gate(spec, GateKind.NOR, 2, margin_fraction=0.2)
    mid_cal = calibrate_gate(spec, GateKind.NOR, 2, margin_fraction=0.5)
    assert lo_cal.lo == mid_cal.lo and lo_cal.hi == mid_cal.hi
    assert lo_cal.operating_point == pytest.approx(
        lo_cal.lo + 0.2 * (lo_cal.hi - lo_cal.lo), rel=1e-12)
    assert lo_cal.operating_point < mid_cal.operating_point


def test_voltage_gated_calibration_within_threshold_window():
    from sotlogic import critical_sot_current, solve_vgsot_divider
    from sotlogic.array import CellState
    spec = spec_for(Topology.VGSOT, 2)
    cal = calibrate_gate(spec, GateKind.NOR, 2)

    def i_c(bits):
        cells = [CellState(MagState.from_bit(b), PV) for b in bits]
        sol = solve_vgsot_divider(cells, CellState(MagState.P, PV), 1.5)
        return critical_sot_current(PV, sol.voltage("bl"))

    lo, hi = i_c((0, 1)), i_c((0, 0))
    assert lo < cal.i_sot < hi
    assert cal.i_sot == pytest.approx((lo + hi) / 2, rel=1e-9)


def test_inseparable_with_zero_tmr():
    for topology in Topology:
        base = P2 if topology is Topology.TWO_T_ONE_R else PV
        spec = spec_for(topology, 2, base.replace(TMR0=0.0))
        with pytest.raises(InseparableError):
            calibrate_gate(spec, GateKind.NOR, 2)


def test_overgated_multi_input_and_lowers_drive():
    # At the default 1.5 V input drive all three-input AND cases clamp the
    # threshold to zero; calibration must find a lower separating voltage.
    spec = spec_for(Topology.VGSOT, 3)
    cal = calibrate_gate(spec, GateKind.AND, 3)
    assert cal.v_drive < 1.5
    spec2, op2 = cal.apply(spec)
    assert truth_table(spec2, GateKind.AND, 3, op=op2).matches


def test_bad_margin_fraction_rejected():
    spec = spec_for(Topology.TWO_T_ONE_R, 2)
    for frac in (0.0, 1.0, -0.5):
        with pytest.raises(ValueError):
            calibrate_gate(spec, GateKind.NOR, 2, margin_fraction=frac)


# --- energy --------------------------------------------------------------------------

def test_read_scheme_energy_hand_value():
    # (1,1) with ideal access: 1.1 V * 300.7 uA * 2 ns
    spec, op = calibrated(Topology.TWO_T_ONE_R, GateKind.NOR, 2,
                          params=P2.replace(R_on=0.0))
    arr = MramArray.uniform(spec)
    for r in op.input_rows:
        arr = write_cell(arr, r, 0, MagState.P)
    trace = execute_gate(arr, op)
    i11 = 1.1 / (R_P / 2 + R_CH)
    assert trace.energy == pytest.approx(1.1 * i11 * 2e-9, rel=1e-6)
    assert trace.energy == pytest.approx(661e-15, rel=2e-3)


def test_voltage_gated_energy_components():
    spec, op = calibrated(Topology.VGSOT, GateKind.NOR, 2)
    arr = MramArray.uniform(spec)
    trace = execute_gate(arr, op)
    r_pv = 650.0e-12 / A_MTJ
    # inputs (0,0): two AP branches in parallel = R_AP/2 = r_pv, output P = r_pv
    i_leak = 1.5 / (r_pv + r_pv)
    expected = 1.5 * i_leak * 2e-9 + op.i_sot ** 2 * R_CH * 2e-9
    assert trace.energy == pytest.approx(expected, rel=1e-6)


def test_energy_linear_in_pulse_and_nonnegative():
    spec, op = calibrated(Topology.TWO_T_ONE_R, GateKind.NOR, 2)
    arr = MramArray.uniform(spec)
    trace = execute_gate(arr, op)
    doubled = GateOp.for_kind(op.kind, spec.topology, n_inputs=2,
                              v_drive=op.v_drive, i_sot=op.i_sot,
                              pulse=2 * op.pulse)
    assert gate_energy(trace, doubled) == pytest.approx(2 * trace.energy,
                                                        rel=1e-12)
    zero = GateOp.for_kind(op.kind, spec.topology, n_inputs=2,
                           v_drive=op.v_drive, i_sot=op.i_sot, pulse=0.0)
    assert gate_energy(trace, zero) == 0.0
    assert trace.energy >= 0.0


def test_reversed_polarity_energy_positive():
    spec, op = calibrated(Topology.TWO_T_ONE_R, GateKind.OR, 2)
    assert op.v_drive < 0.0
    trace = execute_gate(MramArray.uniform(spec), op)
    assert trace.energy > 0.0


# --- pattern helpers and recipe files ---------------------------------------------------

def test_pattern_bits_and_labels():
    assert pattern_bits(0, 2) == (0, 0)
    assert pattern_bits(1, 2) == (1, 0)      # input 0 carries bit 0
    assert pattern_label((1, 0)) == "01"     # display is IN1..IN0
    assert [pattern_label(pattern_bits(i, 2)) for i in range(4)] == \
        ["00", "01", "10", "11"]


def test_recipe_parse_defaults():
    ops = parse_gate_ops("nor,0,0;1,2\n# comment\n\nand,1,0;1;2,3\n",
                         Topology.TWO_T_ONE_R)
    assert len(ops) == 2
    assert ops[0].kind is GateKind.NOR
    assert ops[0].input_rows == (0, 1) and ops[0].output_row == 2
    assert ops[0].v_drive == pytest.approx(1.1)
    assert ops[0].pulse == pytest.approx(2e-9)
    assert ops[1].kind is GateKind.AND
    assert ops[1].col == 1 and ops[1].input_rows == (0, 1, 2)
    assert ops[1].v_drive == pytest.approx(-1.1)  # reversed polarity family


def test_recipe_parse_overrides_and_round_trip():
    text = "nand,0,2;3,1,0.9,5e-05,1e-09\n"
    ops = parse_gate_ops(text, Topology.VGSOT)
    assert ops[0].v_drive == pytest.approx(0.9)
    assert ops[0].i_sot == pytest.approx(5e-5)
    assert ops[0].pulse == pytest.approx(1e-9)
    again = parse_gate_ops(format_gate_ops(ops), Topology.VGSOT)
    assert again == ops


def test_recipe_parse_errors():
    with pytest.raises(ValueError, match="line 1"):
        parse_gate_ops("nor,0,0;1\n", Topology.TWO_T_ONE_R)
    with pytest.raises(ValueError, match="line 2"):
        parse_gate_ops("nor,0,0;1,2\nxor,0,0;1,2\n", Topology.TWO_T_ONE_R)
