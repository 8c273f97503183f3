"""Phase-variance scaling of collectively emitted twin wavepackets.

Sweeps the total photon number for three input families and writes the
per-shot phase variance next to the shot-noise and Heisenberg
references:

  * collective emitter twins keep a Heisenberg-like 1/N^2 falloff with
    a prefactor only slightly above the photon-number-state optimum,
    because their exchange overlap saturates near 0.82;
  * harmonic-cavity twins coincide with the photon-number reference
    (unit overlap);
  * strongly anharmonic cavities emit spectrally distinguishable
    photons, the overlap collapses, and the curve bends back to
    shot-noise-parallel scaling.

Writes phase_scaling.csv next to this script; plots to
phase_scaling.png when matplotlib is importable.
"""
import pathlib

from dickeqfi import LadderFamily, qfi_vs_n_sweep

HERE = pathlib.Path(__file__).resolve().parent

families = {
    "collective": LadderFamily("dicke"),
    "harmonic": LadderFamily("harmonic"),
    "anharmonic_u10": LadderFamily("anharmonic", u=10.0),
    "anharmonic_u1000": LadderFamily("anharmonic", u=1000.0),
}
n_values = list(range(4, 501, 8))

tables = {}
for name, family in families.items():
    print(f"sweeping {name} over N = {n_values[0]}..{n_values[-1]}")
    tables[name] = qfi_vs_n_sweep(family, n_values)

csv_path = HERE / "phase_scaling.csv"
with open(csv_path, "w") as handle:
    handle.write("family,N,I_N,F_Q,dphi2,dphi2_snl,dphi2_hl,dphi2_fock\n")
    for name, rows in tables.items():
        for row in rows:
            handle.write(
                f"{name},{row['N']},{row['I_N']:.17g},{row['F_Q']:.17g},"
                f"{row['dphi2']:.17g},{row['dphi2_snl']:.17g},"
                f"{row['dphi2_hl']:.17g},{row['dphi2_fock']:.17g}\n"
            )
print(f"wrote {csv_path}")

collective = tables["collective"]
print("\ncollective-twin overlap plateau:")
for row in collective:
    if row["N"] in (100, 260, 500):
        print(f"  N={row['N']:4d}  I_N={row['I_N']:.4f}  "
              f"F_Q={row['F_Q']:.1f}  (0.41 N^2 + N = {0.41*row['N']**2 + row['N']:.1f})")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ns = [row["N"] for row in collective]
    ax.loglog(ns, [r["dphi2_snl"] for r in collective], "-", label="shot noise 1/N")
    ax.loglog(ns, [r["dphi2_hl"] for r in collective], "-", label="Heisenberg 1/N^2")
    ax.loglog(ns, [r["dphi2_fock"] for r in collective], "r-", label="photon-number states")
    ax.loglog(ns, [r["dphi2"] for r in collective], "ks", ms=3, label="collective twins")
    for name, style in (("anharmonic_u10", "r^"), ("anharmonic_u1000", "y^")):
        ax.loglog(ns, [r["dphi2"] for r in tables[name]], style, ms=3,
                  label=name.replace("_", " "))
    ax.set_xlabel("total photon number N")
    ax.set_ylabel("per-shot phase variance")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(HERE / "phase_scaling.png", dpi=150)
    print(f"wrote {HERE / 'phase_scaling.png'}")
except ImportError:
    print("matplotlib not available; skipped the plot")
