"""Invocations covered by the golden-file regression tests."""

from pathlib import Path

TESTS = Path(__file__).resolve().parent
DATA = TESTS / "data"
GOLDEN = TESTS / "golden"

CASES = {
    "orbits_1_2": ["orbits", "1", "2", "--oracle"],
    "orbits_6_8_trace96": ["orbits", "6", "8", "--find-trace", "96"],
    "orbits_0_1": ["orbits", "0", "1"],
    "classify_zero_1_2": ["classify", str(DATA / "zero_1_2.json")],
    "classify_regular_1_2": ["classify", str(DATA / "regular_1_2.json")],
    "classify_anchor_6_8": ["classify", str(DATA / "anchor_6_8.json")],
    "cosets_1_2_k1": ["cosets", "1", "2", "--k", "1"],
    "cosets_1_2_k0_a2": ["cosets", "1", "2", "--k", "0", "--a", "2"],
    "cosets_2_3_k0": ["cosets", "2", "3", "--k", "0"],
    "lfun_1_verify6": ["lfun", "1", "--verify", "6"],
    "lfun_1_chars_ones": ["lfun", "1", "--chars", "1,1,1"],
    "lfun_1_chars_zeta3": ["lfun", "1", "--chars", "zeta:3:1,zeta:3:1,zeta:3:1"],
}
