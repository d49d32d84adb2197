#!/usr/bin/env python3
# Runs synth -> extract -> train -> explain and strictly parses every SVG.
import os
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

SVG_NS = "{http://www.w3.org/2000/svg}"


def run(*args):
    subprocess.run([os.environ["SWINGNAM"], *args], check=True, stdout=subprocess.DEVNULL)


def main():
    work = Path(sys.argv[1])
    work.mkdir(parents=True, exist_ok=True)
    d = str(work)
    run("synth", "--out", d, "--seed", "5", "--swings", "60")
    run("extract", "--keypoints", d + "/keypoints.json", "--balls", d + "/balls.csv", "--out", d)
    run("train", "--features", d + "/features.csv", "--balls", d + "/balls.csv", "--out", d + "/model.json",
        "--target", "direction", "--epochs", "5", "--hidden", "8,4")
    run("explain", "--model", d + "/model.json", "--features", d + "/features.csv", "--out", d + "/svg", "--grid", "30")

    svgs = sorted((work / "svg").glob("*.svg"))
    if len(svgs) != 40:
        sys.exit(f"expected 40 SVG files, found {len(svgs)}")
    for path in svgs:
        root = ET.parse(path).getroot()
        if root.tag != SVG_NS + "svg":
            sys.exit(f"{path.name}: root element is {root.tag}")
        if not root.findall(f".//{SVG_NS}polyline"):
            sys.exit(f"{path.name}: no shape polyline")
        markers = [e for e in root.iter() if e.get("class") == "optimal-marker"]
        if len(markers) > 1:
            sys.exit(f"{path.name}: {len(markers)} optimum markers")
    print(f"{len(svgs)} SVG files parsed")


if __name__ == "__main__":
    main()
