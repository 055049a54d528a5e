import os
import sys
import pandas as pd
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

LONG_CSV = "results/sweep_long.csv"
OUT_DIR = "results"

STYLE = {
    "m": {"marker": "o", "linestyle": "-"},
    "m1": {"marker": "s", "linestyle": "--"},
    "ms_converged": {"marker": "^", "linestyle": "-."},
    "ms_early": {"marker": "v", "linestyle": ":"},
}


def main(path: str = LONG_CSV) -> None:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Not found: {path}. Run `python -m src.cli sweep` first.")
    os.makedirs(OUT_DIR, exist_ok=True)

    df = pd.read_csv(path)
    if df.empty:
        print("Nothing to plot: the sweep produced no rows.")
        return
    df["value"] = pd.to_numeric(df["value"], errors="coerce")
    df = df.dropna(subset=["value"])
    df["inv_H"] = (1.0 / df["H"].astype(float)).round().astype(int)

    written = []
    for coarse, part in df.groupby("coarse_space"):
        # -------------------------------
        # m, m1, ms versus 1/H (log-log)
        # -------------------------------
        pivot = part.pivot_table(index="inv_H", columns="quantity", values="value", aggfunc="mean")
        fig, ax = plt.subplots(figsize=(7, 5))
        for quantity in pivot.columns:
            ax.plot(pivot.index, pivot[quantity], label=quantity, **STYLE.get(quantity, {}))
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.set_xticks(list(pivot.index))
        ax.set_xticklabels([f"1/{k}" for k in pivot.index])
        ax.set_title(f"{str(coarse).upper()}: PCG iterations vs bounds")
        ax.set_xlabel("H")
        ax.set_ylabel("iterations")
        ax.legend()
        fig.tight_layout()
        out = os.path.join(OUT_DIR, f"sweep_{coarse}.png")
        fig.savefig(out, dpi=200)
        plt.close(fig)
        written.append(out)

    print("[PLOT] Wrote:")
    for out in written:
        print(" -", out)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else LONG_CSV)
