"""Golden-scenario regression: rerun bundled scenarios, compare fixtures.

Each bundled `<name>.scn` has a `<name>.expected.json` holding the
statistics it must reproduce and the sha256 of its trace file. Stats
listed under "exact" must match to the byte; stats under "bands" (used
for the stochastic scenario) must fall inside [lo, hi]. Scenarios run
independently, so a failure in one never hides another.
"""

from __future__ import annotations

import hashlib
import json
import tempfile
from importlib import resources
from pathlib import Path

from .scenario import parse_scenario
from .sim import RunResult, run_scenario


def golden_dir() -> Path:
    return Path(resources.files("minins") / "golden")


def result_values(result: RunResult) -> dict:
    """The comparable view of a run: the machine-readable stats keys."""
    return {
        "tempo_simulacao_s": result.duration / 1e9,
        "pacotes_recebidos": result.npkts,
        "bytes_recebidos": result.bytes,
        "utilizacao_link_pct": result.utilization_pct,
    }


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def check_golden(scn_path: Path, fixture: dict, workdir: Path) -> list[str]:
    """Run one golden scenario; return a list of mismatch descriptions."""
    spec = parse_scenario(scn_path.read_text())
    trace_path = workdir / (scn_path.stem + ".tr")
    result = run_scenario(spec, trace_path=str(trace_path))
    values = result_values(result)
    problems = []
    for key, expected in fixture.get("exact", {}).items():
        if values[key] != expected:
            problems.append(f"{key}: expected {expected!r}, got {values[key]!r}")
    for key, (lo, hi) in fixture.get("bands", {}).items():
        if not lo <= values[key] <= hi:
            problems.append(f"{key}: {values[key]!r} outside [{lo}, {hi}]")
    digest = file_sha256(trace_path)
    if digest != fixture["trace_sha256"]:
        problems.append(f"trace digest {digest[:12]}.. != expected {fixture['trace_sha256'][:12]}..")
    return problems


def run_validate(scenario_dir: Path | None = None, write=print) -> bool:
    """Validate every golden scenario; prints PASS/FAIL per scenario."""
    base = Path(scenario_dir) if scenario_dir is not None else golden_dir()
    scn_paths = sorted(base.glob("*.scn"))
    if not scn_paths:
        write(f"FAIL no golden scenarios found in {base}")
        return False
    all_pass = True
    with tempfile.TemporaryDirectory(prefix="minins-validate-") as tmp:
        for scn_path in scn_paths:
            fixture_path = scn_path.with_suffix(".expected.json")
            if not fixture_path.exists():
                write(f"FAIL {scn_path.stem}: missing fixture {fixture_path.name}")
                all_pass = False
                continue
            fixture = json.loads(fixture_path.read_text())
            problems = check_golden(scn_path, fixture, Path(tmp))
            if problems:
                all_pass = False
                write(f"FAIL {scn_path.stem}: " + "; ".join(problems))
            else:
                write(f"PASS {scn_path.stem}")
    return all_pass
