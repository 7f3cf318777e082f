#!/usr/bin/env python3
"""Checks that fixtures/replay agrees with its manifest and sources.

usage: check_fixtures.py <fixtures-dir>
"""

import hashlib
import json
import os
import sys
import xml.etree.ElementTree as ET


def key_for(program, argv):
    parts = [program]
    for prev, arg in zip([None] + argv[:-1], argv):
        if prev == "-o":
            arg = "<output>"
        elif prev == "-w":
            arg = arg.rsplit("/", 1)[-1]
        parts.append(arg)
    return hashlib.sha256("\0".join(parts).encode()).hexdigest()


def main(fixtures):
    replay = os.path.join(fixtures, "replay")
    with open(os.path.join(replay, "MANIFEST.json")) as f:
        manifest = json.load(f)
    problems = []
    keys = set()
    for entry in manifest:
        key = entry["key"]
        keys.add(key)
        if key_for(entry["program"], entry["argv"]) != key:
            problems.append(f"{key}: digest does not match argv {entry['argv']}")
        out = os.path.join(replay, key + ".out")
        meta = os.path.join(replay, key + ".meta")
        if not (os.path.isfile(out) and os.path.isfile(meta)):
            problems.append(f"{key}: missing .out or .meta")
            continue
        with open(meta) as f:
            m = json.load(f)
        if not isinstance(m.get("exit_code"), int) or not isinstance(m.get("duration_ms"), int):
            problems.append(f"{key}: bad meta {m}")
        with open(out, "rb") as f:
            data = f.read()
        if entry["program"] == "nmap":
            try:
                ET.fromstring(data)
            except ET.ParseError as e:
                problems.append(f"{key}: nmap output is not XML ({e})")
        else:
            with open(os.path.join(fixtures, "sources", entry["source"]), "rb") as f:
                if f.read() != data:
                    problems.append(f"{key}: differs from source {entry['source']}")
    on_disk = {n.rsplit(".", 1)[0] for n in os.listdir(replay) if n.endswith((".out", ".meta"))}
    for stray in sorted(on_disk - keys):
        problems.append(f"{stray}: not in manifest")
    for p in problems:
        print(p)
    print(f"{len(manifest)} fixtures, {len(problems)} problems")
    return 1 if problems else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "../../fixtures")))
