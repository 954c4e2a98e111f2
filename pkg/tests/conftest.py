"""Shared fixtures: generated word pools, exactly-computed edge tables, and
a recorder that prints one line per acceptance criterion in the summary."""

from __future__ import annotations

from fractions import Fraction

import pytest

from kautzcong.congestion import congestion, scan_class
from kautzcong.generate import generate_words
from kautzcong.graph import KautzEdge

APPENDIX_WORDS = {
    4: "01210",
    5: "012102",
    6: "0121020",
    7: "01210201",
    8: "012102120",
    9: "0120210201",
    10: "01210212021",
    11: "012010212021",
    12: "0121021202102",
    13: "01210201021012",
    14: "010201210120212",
    15: "0121020102120102",
}

_acceptance_results: list[tuple[int, bool, str]] = []


def record_criterion(number: int, passed: bool, detail: str):
    _acceptance_results.append((number, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_acceptance_results):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status} - {detail}")


@pytest.fixture(scope="session")
def square_free_pool():
    """Circular square-free words across lengths up to 40."""
    pool = []
    for n in (12, 15, 16, 18, 20):
        pool.extend(generate_words(n, 2))
    for n in (24, 30, 35, 40):
        pool.extend(generate_words(n, 2, limit=60))
    return pool


@pytest.fixture(scope="session")
def seventy_four_pool():
    """Circular 7/4+-free words (all are unbordered) up to length 41."""
    alpha = Fraction(7, 4)
    pool = []
    for n in (18, 20, 23):
        pool.extend(generate_words(n, alpha, strict=True))
    for n in (27, 30, 36, 41):
        pool.extend(generate_words(n, alpha, strict=True, limit=40))
    return pool


@pytest.fixture(scope="session")
def exact_pool(table_one_members):
    """Edges with fully computed layer tables, spanning every data source
    the acceptance suite touches: the bundled per-diameter words, all of
    K(2,3), the D=11 circular-square-free class, and the full-row class
    members at D=9 and 10."""
    edges = [KautzEdge.from_string(w, 2) for w in APPENDIX_WORDS.values()]
    from kautzcong.congestion import edge_words

    edges += [KautzEdge.from_string(w, 2) for w in edge_words(2, 3)]
    csf11 = scan_class(2, 11, "circular-square-free")
    edges += [KautzEdge.from_string(r.word, 2) for r in csf11.records]
    edges += [e for _, members in table_one_members.items() for e in members["square_free"]]
    return [(e, congestion(e)) for e in edges]


@pytest.fixture(scope="session")
def csf_scan_d11():
    return scan_class(2, 11, "circular-square-free")


@pytest.fixture(scope="session")
def table_one_members():
    """Full-row-at-(D-2) edges of K(2,9) and K(2,10), with the unbordered
    and unbordered+square-free refinements."""
    from kautzcong.congestion import edge_words, is_full_row
    from kautzcong.words import border_lengths, is_square_free

    out = {}
    for D in (9, 10):
        full = [
            e
            for e in (KautzEdge.from_string(w, 2) for w in edge_words(2, D))
            if is_full_row(e, D - 2)
        ]
        unb = [e for e in full if not border_lengths(e.word)]
        good = [e for e in unb if is_square_free(e.word)]
        out[D] = {"full_row": full, "unbordered": unb, "square_free": good}
    return out
