# Copyright 2026 The ocsr Authors
# SPDX-License-Identifier: Apache-2.0
"""Independent V2000 MOLfile reader used as the interop oracle.

Parses every ``*.mol`` file in a directory with nothing but the Python
standard library and the published CTfile V2000 layout (fixed-width counts
line, atom block, bond block, ``M  CHG`` properties), then compares what it
read against ``expected.json`` in the same directory.

The point of this script is to be a second, unrelated implementation: it
shares no code with the C++ writer, so agreement means the emitted files
really follow the format rather than merely round-tripping through one
codebase.

Exit code 0 when every file matches, 1 otherwise.
"""

import json
import pathlib
import sys


def parse_molfile(text: str) -> dict:
    """Returns {atoms: [{symbol, charge}], bonds: [{a, b, order, stereo}]}."""
    lines = text.split("\n")
    if len(lines) < 4:
        raise ValueError("file shorter than the 3-line header + counts line")

    counts = lines[3]
    if counts[33:39].strip() != "V2000":
        raise ValueError(f"not a V2000 counts line: {counts!r}")
    n_atoms = int(counts[0:3])
    n_bonds = int(counts[3:6])

    atoms = []
    for i in range(n_atoms):
        line = lines[4 + i]
        # x, y, z occupy fixed 10-column fields; the symbol field follows.
        float(line[0:10])
        float(line[10:20])
        float(line[20:30])
        symbol = line[31:34].strip()
        if not symbol:
            raise ValueError(f"atom {i + 1}: empty element symbol")
        atoms.append({"symbol": symbol, "charge": 0})

    bonds = []
    for i in range(n_bonds):
        line = lines[4 + n_atoms + i]
        a = int(line[0:3])
        b = int(line[3:6])
        order = int(line[6:9])
        stereo = int(line[9:12]) if line[9:12].strip() else 0
        if not (1 <= a <= n_atoms and 1 <= b <= n_atoms):
            raise ValueError(f"bond {i + 1}: atom index out of range")
        bonds.append({"a": a, "b": b, "order": order, "stereo": stereo})

    # Property block: charges come from M CHG lines (which, per the spec,
    # supersede the legacy atom-block charge column).
    saw_end = False
    for line in lines[4 + n_atoms + n_bonds:]:
        if line.startswith("M  END"):
            saw_end = True
            break
        if line.startswith("M  CHG"):
            fields = line.split()
            count = int(fields[2])
            pairs = fields[3:]
            if len(pairs) != 2 * count:
                raise ValueError(f"M CHG declares {count} entries, "
                                 f"carries {len(pairs) // 2}")
            for k in range(count):
                idx = int(pairs[2 * k])
                chg = int(pairs[2 * k + 1])
                if not 1 <= idx <= n_atoms:
                    raise ValueError(f"M CHG: atom index {idx} out of range")
                atoms[idx - 1]["charge"] = chg
    if not saw_end:
        raise ValueError("missing M  END")

    return {"atoms": atoms, "bonds": bonds}


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: molfile_reader.py DIR", file=sys.stderr)
        return 2
    directory = pathlib.Path(sys.argv[1])
    expected = json.loads((directory / "expected.json").read_text())

    mismatches = 0
    for entry in expected:
        name = entry["file"]
        try:
            got = parse_molfile((directory / name).read_text())
        except (ValueError, IndexError, FileNotFoundError) as exc:
            print(f"{name}: parse error: {exc}")
            mismatches += 1
            continue
        want = {"atoms": entry["atoms"], "bonds": entry["bonds"]}
        if got != want:
            mismatches += 1
            if len(got["atoms"]) != len(want["atoms"]):
                print(f"{name}: atom count {len(got['atoms'])} != "
                      f"{len(want['atoms'])}")
            elif len(got["bonds"]) != len(want["bonds"]):
                print(f"{name}: bond count {len(got['bonds'])} != "
                      f"{len(want['bonds'])}")
            else:
                print(f"{name}: atom/bond records differ")

    total = len(expected)
    print(f"{total - mismatches}/{total} files match")
    return 0 if mismatches == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
