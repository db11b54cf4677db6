"""Stateful gates in the 2T-1R (read-current) array, step by step.

The read bit-line drives the input cells' MTJs in parallel; their summed
read current flows through the output cell's SOT channel and switches it
when it crosses the threshold. Gate choice = output initialization +
drive polarity + threshold placement.

Run: python demos/02_read_current_gates.py
"""

import itertools

from sotlogic import (ArraySpec, DeviceParams, GateKind, MagState, MramArray,
                      Topology, calibrate_gate, execute_gate, margin_analysis,
                      truth_table, write_cell)
from sotlogic.array import CellState, solve_2t1r_read


def main():
    params = DeviceParams.default_2t1r()
    spec = ArraySpec(Topology.TWO_T_ONE_R, rows=3, cols=1, nominal=params)

    print("=== Per-pattern channel currents at 1.1 V (R_on = 1 kohm) ===")
    for bits in itertools.product((0, 1), repeat=2):
        cells = [CellState(MagState.from_bit(b), params) for b in bits]
        sol = solve_2t1r_read(cells, CellState(MagState.P, params), 1.1)
        print(f"  inputs {bits}: output channel {sol.current('out') * 1e6:7.2f} uA")

    print("\n=== NOR calibration ===")
    cal = calibrate_gate(spec, GateKind.NOR, 2)
    print(f"hold/switch window: [{cal.lo * 1e6:.1f}, {cal.hi * 1e6:.1f}] uA")
    print(f"threshold placed at {cal.operating_point * 1e6:.1f} uA "
          f"(Ic_cal = {cal.ic_cal:.3f})")

    print("\n=== Truth tables after calibration ===")
    for kind in GateKind:
        cal = calibrate_gate(spec, kind, 2)
        cspec, cop = cal.apply(spec)
        table = truth_table(cspec, kind, 2, op=cop)
        outs = " ".join(f"{r.label}->{r.actual}" for r in table.rows)
        print(f"  {kind.value.upper():4s}: {outs}   "
              f"({'exact' if table.matches else 'MISMATCH'})")

    print("\n=== Margins shrink as inputs are added (NOR) ===")
    wide = ArraySpec(Topology.TWO_T_ONE_R, rows=5, cols=1, nominal=params)
    for n in (2, 3, 4):
        rep = margin_analysis(wide, GateKind.NOR, n)
        print(f"  {n} inputs: margin {rep.margin * 1e6:6.2f} uA "
              f"(relative {rep.relative_margin:.3f})")

    print("\n=== Energy of one NOR evaluation (2 ns pulse) ===")
    cal = calibrate_gate(spec, GateKind.NOR, 2)
    cspec, cop = cal.apply(spec)
    for bits in itertools.product((0, 1), repeat=2):
        arr = MramArray.uniform(cspec)
        for row, b in zip(cop.input_rows, bits):
            arr = write_cell(arr, row, 0, MagState.from_bit(b))
        trace = execute_gate(arr, cop)
        disturb = "" if all(trace.disturb_ok) else "   [input disturb risk]"
        print(f"  inputs {bits}: {trace.energy * 1e15:6.1f} fJ{disturb}")
    print("The all-ones case draws the most current; with high read currents")
    print("the inputs' MTJ current density can cross the STT disturb limit,")
    print("which the trace records as an advisory verdict.")


if __name__ == "__main__":
    main()
