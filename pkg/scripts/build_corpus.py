#!/usr/bin/env python3
"""Regenerate the golden corpus under src/gaussim/corpus.

Each entry pairs a circuit with oracle moments computed at a truncation
large enough that the boundary population stays below the conclusiveness
limit.  Run from the repository root:

    python3 scripts/build_corpus.py
"""

import math
import sys
import time
from pathlib import Path

from gaussim import corpus

QPI4 = repr(math.pi / 4)

ENTRIES = [
    # name, truncation, circuit source
    ("vac1", 8, "modes 1\ninit vacuum\n"),
    ("vac3", 4, "modes 3\ninit vacuum\n"),
    ("coh_disp", 30, "modes 1\ninit vacuum\ndisp 0 dq=1.5 dp=-0.5\n"),
    ("coh_init", 30, "modes 1\ninit coherent xi=1.0,-0.5\n"),
    ("coh_phase", 30, f"modes 1\ninit vacuum\ndisp 0 dq=2.0\nphase 0 theta={QPI4}\n"),
    ("sq_pos", 40, "modes 1\ninit vacuum\nsqueeze 0 r=0.5\n"),
    ("sq_neg", 40, "modes 1\ninit vacuum\nsqueeze 0 r=-0.4\n"),
    ("sq_init", 40, "modes 1\ninit squeezed r=0.5\n"),
    (
        "sq_rot_disp",
        40,
        "modes 1\ninit vacuum\nsqueeze 0 r=0.3\nphase 0 theta=0.9\ndisp 0 dq=0.7 dp=0.2\n",
    ),
    ("thermal_init", 40, "modes 1\ninit thermal nbar=1.0\n"),
    ("thermal_sq", 40, "modes 1\ninit thermal nbar=0.6\nsqueeze 0 r=0.2\n"),
    ("loss_coh", 25, "modes 1\ninit vacuum\ndisp 0 dq=2.0\nloss 0 eta=0.5\n"),
    ("loss_sq", 32, "modes 1\ninit vacuum\nsqueeze 0 r=0.5\nloss 0 eta=0.7\n"),
    ("loss_weak", 25, "modes 1\ninit vacuum\ndisp 0 dq=1.0\nloss 0 eta=0.9\n"),
    ("amp_vac", 36, "modes 1\ninit vacuum\namp 0 g=2.0\n"),
    ("amp_coh", 30, "modes 1\ninit vacuum\ndisp 0 dq=1.0\namp 0 g=1.5\n"),
    ("noise_vac", 30, "modes 1\ninit vacuum\nnoise 0 nbar=0.5\n"),
    ("noise_sq", 32, "modes 1\ninit vacuum\nsqueeze 0 r=0.3\nnoise 0 nbar=0.4\n"),
    ("bs_sq", 30, f"modes 2\ninit vacuum\nsqueeze 0 r=0.5\nbs 0 1 theta={QPI4}\n"),
    (
        "bs_disp",
        20,
        "modes 2\ninit vacuum\ndisp 0 dq=1.0 dp=0.5\ndisp 1 dq=-0.5\n"
        "bs 0 1 theta=0.6\nphase 1 theta=0.3\n",
    ),
    ("tms_vac", 20, "modes 2\ninit vacuum\ntms 0 1 r=0.5\n"),
    ("epr_init", 20, "modes 2\ninit epr r=0.4\n"),
    ("epr_bs", 32, "modes 2\ninit epr r=0.4\nbs 0 1 theta=0.5\nsqueeze 0 r=-0.1\n"),
    ("epr_loss", 14, "modes 2\ninit epr r=0.4\nloss 1 eta=0.6\n"),
    (
        "disp3_bs",
        12,
        f"modes 3\ninit vacuum\ndisp 0 dq=1.0\nbs 0 1 theta={QPI4}\n"
        "bs 1 2 theta=0.6\nphase 2 theta=0.4\n",
    ),
    (
        "sq3_chain",
        13,
        f"modes 3\ninit vacuum\nsqueeze 0 r=0.15\nbs 0 1 theta={QPI4}\nbs 1 2 theta=0.5\n",
    ),
    ("tms3", 12, "modes 3\ninit vacuum\ntms 0 1 r=0.15\nbs 1 2 theta=0.7\n"),
]


def main():
    out_dir = Path(__file__).resolve().parent.parent / "src" / "gaussim" / "corpus"
    t0 = time.time()
    for name, d, text in ENTRIES:
        t1 = time.time()
        corpus.freeze_entry(name, text, d, out_dir)
        print(f"{name:<14} d={d:<3} {time.time() - t1:6.2f}s")
    print(f"{len(ENTRIES)} entries in {time.time() - t0:.1f}s -> {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
