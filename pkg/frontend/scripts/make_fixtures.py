#!/usr/bin/env python3
"""Generate viewer fixtures: bundles plus golden slice outputs from the CLI.

For every shipped bundle this records, for every output path, the CLI's
backward slice (shallow and deep) and, for every color, the CLI's forward
slice. The vitest suite replays each selection client-side and requires the
serialized path arrays to match byte for byte. Static-mode goldens come from
the engine's static_slice.

Run from the repository root after changing the engine:

    python3 frontend/scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent.parent
FIXTURES = REPO / "fixtures"
OUT = REPO / "frontend" / "fixtures"

sys.path.insert(0, str(REPO / "src"))

from nrcprov.analysis import atype_from_json  # noqa: E402
from nrcprov.avalues import avalue_from_json  # noqa: E402
from nrcprov.slicing import static_slice, type_paths, value_paths  # noqa: E402

BUNDLES = {
    # name -> (query file, data args)
    "sigmaAB": ("sigmaAB", ["--data", "fig.json", "--alias", "fig-alias.json", "--ctx", "fig-ctx.json"]),
    "piA": ("piA", ["--data", "fig.json", "--alias", "fig-alias.json", "--ctx", "fig-ctx.json"]),
    "count": ("count", ["--data", "fig.json", "--alias", "fig-alias.json", "--ctx", "fig-ctx.json"]),
    "grouping": ("grouping", ["--data", "fig.json", "--alias", "fig-alias.json", "--ctx", "fig-ctx.json"]),
    "diff-rename": ("diff-rename", ["--data", "fig.json", "--alias", "fig-alias.json", "--ctx", "fig-ctx.json"]),
    "xminusx": ("xminusx", ["--data", "xonly.json"]),
}


def cli(*args: str) -> str:
    result = subprocess.run(
        [sys.executable, "-m", "nrcprov.cli", *args],
        capture_output=True,
        text=True,
        cwd=FIXTURES,
        check=True,
    )
    return result.stdout


def cli_slice(direction: str, data_args: list[str], query: str, *extra: str) -> list[str]:
    out = cli("slice", direction, "--json", *data_args, *extra, str(FIXTURES / "queries" / f"{query}.nrc"))
    return json.loads(out)["paths"]


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    manifest: dict[str, dict] = {}
    for name, (query, data_args) in BUNDLES.items():
        bundle_file = OUT / f"{name}.bundle.json"
        cli(
            "bundle",
            *data_args,
            "-o",
            str(bundle_file),
            str(FIXTURES / "queries" / f"{query}.nrc"),
        )
        bundle = json.loads(bundle_file.read_text())
        output = avalue_from_json(bundle["output"])
        checks: list[dict] = []
        for path, _node in value_paths(output, "result"):
            for deep in (False, True):
                expected = cli_slice(
                    "backward", data_args, query, "--path", str(path), *(["--deep"] if deep else [])
                )
                checks.append(
                    {"kind": "backward", "at": str(path), "deep": deep, "expected": expected}
                )
        for color in sorted(bundle["colors"].keys()):
            expected = cli_slice("forward", data_args, query, "--color", color)
            checks.append({"kind": "forward", "color": color, "expected": expected})
        static_checks: list[dict] = []
        if bundle.get("actx") and bundle.get("atype_json"):
            actx = {n: atype_from_json(t) for n, t in bundle["actx"].items()}
            atype = atype_from_json(bundle["atype_json"])
            for tpath, _ in type_paths(atype, "result"):
                expected = sorted(str(p) for p in static_slice(actx, atype, tpath))
                static_checks.append({"at": str(tpath), "expected": expected})
        manifest[name] = {
            "bundle": f"{name}.bundle.json",
            "checks": checks,
            "static_checks": static_checks,
        }
    (OUT / "slices.json").write_text(json.dumps(manifest, indent=2) + "\n")
    total = sum(len(m["checks"]) + len(m["static_checks"]) for m in manifest.values())
    print(f"wrote {len(BUNDLES)} bundles and {total} golden slice checks to {OUT}")


if __name__ == "__main__":
    main()
