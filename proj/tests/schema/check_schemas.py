"""Validate every --format json output of the CLI against docs/schema."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

from jsonschema import Draft202012Validator

BIN, SCHEMAS = sys.argv[1], Path(sys.argv[2])
failures = 0


def run(*args):
    out = subprocess.run([BIN, *args], capture_output=True, text=True)
    if out.returncode != 0:
        raise SystemExit(f"{' '.join(args)} exited {out.returncode}: {out.stderr}")
    return out.stdout


def check(name, doc, schema):
    global failures
    validator = Draft202012Validator(json.loads((SCHEMAS / schema).read_text()))
    errors = list(validator.iter_errors(doc))
    for e in errors[:3]:
        print(f"{name}: {e.json_path}: {e.message}")
    failures += bool(errors)
    print(f"{'ok  ' if not errors else 'FAIL'} {name}")


for schema in SCHEMAS.glob("*.schema.json"):
    Draft202012Validator.check_schema(json.loads(schema.read_text()))

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    run("synth", "--pattern", "1-6-8-3", "--keypoints", "3", "--noise", "1.5",
        "--seed", "4", "--out", str(tmp / "draw.csv"))
    tracks = sorted(str(p) for p in tmp.glob("draw*.csv"))

    guesses = json.loads(run("guess", *tracks, "--format", "json"))
    check("guess", guesses, "guesslist.schema.json")
    text = [line.split()[1] for line in run("guess", *tracks).splitlines() if line.strip()]
    if [g["pattern"] for g in guesses] != text:
        print("FAIL guess json and text disagree")
        failures += 1

    check("complexity", json.loads(run("complexity", "1-2-3-6", "1-6-8-3", "--format", "json")),
          "complexity.schema.json")
    check("complexity --all --max --histogram",
          json.loads(run("complexity", "--all", "--max", "--histogram", "--format", "json")),
          "complexity.schema.json")
    check("dict dump", json.loads(run("dict", "dump")), "cipher_dictionary.schema.json")

    corpus = tmp / "corpus"
    run("synth", "--corpus", "12", "--seed", "9", "--tilt-max", "10", "--noise-frac", "0.01",
        "--out", str(corpus))
    manifest = json.loads((corpus / "manifest.json").read_text())
    check("manifest", manifest, "manifest.schema.json")

    report = json.loads(run("eval", "--manifest", str(corpus), "--format", "json", "--timing"))
    check("eval", report, "eval_report.schema.json")
    ids = [r["id"] for r in report["reports"][0]["ranks"]]
    if sorted(ids) != sorted(s["id"] for s in manifest["samples"]):
        print("FAIL manifest round trip lost samples")
        failures += 1

    run("eval", "--samples", "8", "--sweep", "tilt=0,15", "--features", "--out", str(tmp / "out"))
    sweep = json.loads((tmp / "out" / "report.json").read_text())
    check("eval --sweep", sweep, "eval_report.schema.json")
    if len(sweep["reports"]) != 2:
        print("FAIL sweep should give one report per value")
        failures += 1
    check("features", json.loads((tmp / "out" / "features.json").read_text()),
          "features.schema.json")

sys.exit(1 if failures else 0)
