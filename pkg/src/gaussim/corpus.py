"""Golden corpus: circuits checked against the Fock oracle and frozen moments.

Each entry is a pair of files in a corpus directory:

    NAME.circ   circuit DSL source (deterministic: preparations and gates)
    NAME.json   {"truncation": d, "means": [...], "covariance": [[...]]}

The JSON holds oracle moments frozen at corpus-build time.  A check runs
the circuit through the covariance engine and through the oracle at the
entry's truncation, then requires engine-vs-oracle and engine-vs-frozen
agreement.  Truncations are chosen per entry so the boundary population
stays below the oracle's conclusiveness limit.
"""

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import circuit as circuit_mod
from . import fock
from .measure import RandomSource
from .states import resource_count


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    circuit: circuit_mod.Circuit
    truncation: int
    means: np.ndarray
    covariance: np.ndarray


@dataclass(frozen=True)
class EntryResult:
    """Outcome of checking one corpus entry."""

    name: str
    modes: int
    truncation: int
    report: fock.CompareReport
    frozen_mean_dev: float
    frozen_cov_dev: float

    @property
    def passed(self):
        return (
            self.report.passed
            and self.frozen_mean_dev <= self.report.tol
            and self.frozen_cov_dev <= self.report.tol
        )

    @property
    def status(self):
        if self.report.status == "inconclusive":
            return "inconclusive"
        return "pass" if self.passed else "fail"

    @property
    def fock_dimension(self):
        return self.truncation ** self.modes

    @property
    def fock_entries(self):
        """Density-matrix entry count: the exponential cost the engine avoids."""
        return self.truncation ** (2 * self.modes)

    @property
    def engine_resources(self):
        return resource_count(self.modes).total


def default_dir():
    """Directory of the corpus shipped with the package."""
    return Path(resources.files("gaussim") / "corpus")


def load_entries(path=None):
    """Load all corpus entries from a directory, sorted by name.

    Raises:
        FileNotFoundError: if the directory or an expected JSON is missing.
    """
    base = Path(path) if path is not None else default_dir()
    entries = []
    for circ_path in sorted(base.glob("*.circ")):
        name = circ_path.stem
        meta = json.loads((base / f"{name}.json").read_text())
        circ = circuit_mod.parse(circ_path.read_text())
        entries.append(CorpusEntry(
            name=name,
            circuit=circ,
            truncation=int(meta["truncation"]),
            means=np.asarray(meta["means"], dtype=float),
            covariance=np.asarray(meta["covariance"], dtype=float),
        ))
    if not entries:
        raise FileNotFoundError(f"no corpus entries found under {base}")
    return entries


def check_entry(entry, tol=1e-6):
    """Run one entry through the engine and the oracle and compare all three ways."""
    result = circuit_mod.execute(entry.circuit, RandomSource(0))
    engine = result.final_state
    oracle = fock.run_circuit(entry.circuit, entry.truncation)
    report = fock.compare(oracle, engine, tol=tol)
    return EntryResult(
        name=entry.name,
        modes=engine.n,
        truncation=entry.truncation,
        report=report,
        frozen_mean_dev=float(np.max(np.abs(engine.xi - entry.means))),
        frozen_cov_dev=float(np.max(np.abs(engine.gamma - entry.covariance))),
    )


def check_all(path=None, tol=1e-6):
    """Check every entry; returns a list of EntryResult in name order."""
    return [check_entry(e, tol=tol) for e in load_entries(path)]


def freeze_entry(name, text, truncation, out_dir):
    """Compute oracle moments for a circuit and write both corpus files.

    Used by the corpus build script; not part of routine checking.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    circ = circuit_mod.parse(text)
    diags = circuit_mod.validate(circ)
    if diags:
        raise ValueError(f"{name}: invalid circuit: {diags}")
    # Check the boundary population after every instruction, not just at
    # the end: a gate can redistribute photons and mask damage an earlier
    # step already took at the truncation boundary.
    for k in range(1, len(circ.instructions) + 1):
        prefix = circuit_mod.Circuit(circ.n, circ.instructions[:k])
        pop = fock.top_population(fock.run_circuit(prefix, truncation))
        if pop >= fock.TOP_POPULATION_LIMIT:
            raise ValueError(
                f"{name}: truncation {truncation} too small after "
                f"instruction {k - 1} (boundary population {pop})"
            )
    state = fock.run_circuit(circ, truncation)
    means, cov = fock.quadrature_moments(state)
    (out_dir / f"{name}.circ").write_text(text)
    meta = {
        "truncation": truncation,
        "means": means.tolist(),
        "covariance": cov.tolist(),
    }
    (out_dir / f"{name}.json").write_text(json.dumps(meta, indent=1) + "\n")
