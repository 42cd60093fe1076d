"""Plot mslv CSV exports with matplotlib.

    mslv binodal --pair lv --out lv.csv
    mslv binodal --pair sv --t-min 0.3 --out sv.csv
    mslv binodal --pair sl --out sl.csv
    python scripts/plot_phase_diagram.py lv.csv sv.csv sl.csv --logy

Each file is drawn as its first two columns; segments become separate lines.
"""

import argparse

import matplotlib.pyplot as plt


def read_series(path):
    meta, header, segments, current = {}, None, [], []
    with open(path) as f:
        for line in f:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
            elif header is None:
                header = line.split(",")
            elif not line:
                segments.append(current)
                current = []
            else:
                current.append([float(x) for x in line.split(",")])
    if current:
        segments.append(current)
    return meta, header, segments


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("files", nargs="+")
    ap.add_argument("--logx", action="store_true")
    ap.add_argument("--logy", action="store_true")
    ap.add_argument("--out")
    args = ap.parse_args()

    fig, ax = plt.subplots()
    for path in args.files:
        meta, header, segments = read_series(path)
        for seg in segments:
            ax.plot([r[0] for r in seg], [r[1] for r in seg], label=meta.get("name", path))
        ax.set_xlabel(header[0])
        ax.set_ylabel(header[1])
    if args.logx:
        ax.set_xscale("log")
    if args.logy:
        ax.set_yscale("log")
    ax.legend()
    if args.out:
        fig.savefig(args.out, dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
