"""Print PPA estimates for the reference MNIST designs next to the published rows."""

from tnnsim import designs, ppa


def main():
    cal = ppa.calibrate()
    print(f"per-layer overhead fit: {cal.per_layer_overhead_ns:.3f} ns")
    print(f"{'design':<8} {'synapses':>10} {'mW':>8} {'ref':>8} {'ns':>8} {'ref':>8} {'mm2':>8} {'ref':>8}")
    for row in designs.TNN7_ROWS:
        r = ppa.estimate_network(designs.mnist_network(row.design), cal, design=row.design)
        print(
            f"{row.design:<8} {r.synapses:>10} {r.power_mw:>8.3f} {row.power_mw:>8.3f} "
            f"{r.computation_time_ns:>8.2f} {row.computation_time_ns:>8.2f} {r.area_mm2:>8.3f} {row.area_mm2:>8.3f}"
        )
    col = ppa.estimate_column(designs.twoleadecg_column(), cal, design="82x2")
    print(f"82x2 column: {col.power_mw * 1000:.3f} uW, {col.computation_time_ns:.2f} ns, {col.area_mm2 * 1e6:.0f} um2")


if __name__ == "__main__":
    main()
