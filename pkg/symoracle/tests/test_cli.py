import json
import subprocess
import sys


def test_emit_command_writes_target_path(tmp_path):
    path = tmp_path / "out.json"
    proc = subprocess.run(
        [sys.executable, "-m", "symoracle", "emit", str(path),
         "--epsilons", "0.1"],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(path.read_text())
    assert doc["schema"] == "1"
    assert len(doc["cases"]) > 0
    assert all(c["provenance"] == "symbolic" for c in doc["cases"])
