import json
import subprocess
import sys

from contrast_mend.cli import main
from contrast_mend.pipeline import PatchReport


def test_build_repair_verify(corpus, tmp_path, capsys):
    db = tmp_path / "db.jsonl"
    assert main(["build-db", "--apps", str(corpus), "--out", str(db)]) == 0
    assert db.read_text().count("\n") > 0

    app = sorted(corpus.iterdir())[0]
    patches = tmp_path / "patches.json"
    rc = main(["repair", "--app", str(app / "apk"), "--report", str(app / "report.json"), "--db", str(db),
               "--out", str(tmp_path / "out"), "--patches-out", str(patches)])
    plan = PatchReport.load(patches)
    assert rc == 2 and plan.unrepaired  # designed-unrepairable issues are present

    capsys.readouterr()
    rc = main(["verify", "--app", str(tmp_path / "out"), "--report", str(app / "report.json"),
               "--patches", str(patches)])
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert rc == 0 and lines and all(r["passed"] for r in lines)

    # verifying the unrepaired input fails
    assert main(["verify", "--app", str(app / "apk"), "--report", str(app / "report.json"),
                 "--patches", str(patches)]) == 2


def test_repair_to_stdout_and_skip(corpus, tmp_path, capsys):
    app = sorted(corpus.iterdir())[0]
    rc = main(["repair", "--app", str(app / "apk"), "--report", str(app / "report.json"),
               "--out", str(tmp_path / "out"), "--skip-issue", "8", "--skip-issue", "9"])
    plan = PatchReport.from_dict(json.loads(capsys.readouterr().out))
    assert {i for i, r in plan.excluded if r == "OperatorSkip"} == {8, 9}
    assert rc == 2  # ornamental and id-less images remain


def test_fatal_errors_exit_1(tmp_path, capsys):
    assert main(["repair", "--app", str(tmp_path), "--report", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "o")]) == 1
    bad = tmp_path / "r.json"
    bad.write_text("{}")
    assert main(["verify", "--app", str(tmp_path), "--report", str(bad), "--patches", str(bad)]) == 1
    assert "contrast-mend:" in capsys.readouterr().err


def test_console_script_help():
    out = subprocess.run([sys.executable, "-m", "contrast_mend.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for cmd in ("build-db", "repair", "verify"):
        assert cmd in out.stdout
