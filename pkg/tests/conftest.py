import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", "100")), deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

CORPUS_APPS = 20


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    from contrast_mend.fixtures import build_corpus

    root = tmp_path_factory.mktemp("corpus")
    build_corpus(root, n_apps=CORPUS_APPS)
    return root


@pytest.fixture(scope="session")
def corpus_db(corpus):
    from contrast_mend.pipeline import build_db

    return build_db(corpus)


@pytest.fixture(scope="session")
def repaired_corpus(corpus, corpus_db, tmp_path_factory):
    """Every corpus app repaired once: name -> (output dir, patch report)."""
    from contrast_mend.pipeline import repair_app
    from contrast_mend.reports import read_report

    out = tmp_path_factory.mktemp("repaired")
    results = {}
    for app in sorted(corpus.iterdir()):
        results[app.name] = repair_app(app / "apk", read_report(app / "report.json"), corpus_db, out / app.name)
    return results


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(acceptance_log.RESULTS):
            terminalreporter.write_line(acceptance_log.RESULTS[n])
