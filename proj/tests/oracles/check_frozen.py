"""Regenerates derived.json and the golden gadget files and compares them with the frozen copies."""
import filecmp
import json
import pathlib
import subprocess
import sys
import tempfile

tests = pathlib.Path(sys.argv[1])
derive = tests / "oracles" / "derive.py"

fresh = json.loads(subprocess.run([sys.executable, str(derive)], check=True, capture_output=True, text=True).stdout)
frozen = json.loads((tests / "oracles" / "derived.json").read_text())
ok = fresh == frozen
if not ok:
    print("derived.json differs from a fresh derivation")

with tempfile.TemporaryDirectory() as tmp:
    subprocess.run([sys.executable, str(derive), "--golden", tmp], check=True, capture_output=True)
    for p in sorted(pathlib.Path(tmp).iterdir()):
        if not filecmp.cmp(p, tests / "golden" / p.name, shallow=False):
            print(f"golden/{p.name} differs")
            ok = False

print("frozen reference values reproduce" if ok else "MISMATCH")
sys.exit(0 if ok else 1)
