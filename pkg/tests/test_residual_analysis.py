import pytest

from artifact import bundled
from artifact.rep_core import MatrixRep, close_group
from artifact.residual_analysis import analyze, compute_E, projective_class, residual_twists
from artifact.ring_core import ring, subfield_elements

# (group order, projective class, E degree, regular, strongly regular, twists, pi0 index),
# frozen from the implementation after cross-checking the twist counts with the oracle
EXPECTED = {
    "R1": (6, "cyclic(6)", 1, True, True, 1, 1),
    "R2": (8, "cyclic(8)", 2, True, True, 1, 1),
    "D1": (32, "dihedral(8)", 1, True, True, 2, 2),
    "D2": (128, "dihedral(16)", 2, True, True, 2, 2),
    "D3": (8, "dihedral(4)", 1, False, False, 4, 4),
    "T1": (24, "A4", 1, False, False, 1, 1),
    "T2": (24, "A4", 1, True, True, 1, 1),
    "T3": (96, "A4", 1, False, False, 2, 4),
    "O1": (48, "S4", 1, False, False, 1, 1),
    "O2": (48, "S4", 1, True, True, 1, 1),
    "L1": (2016, "PGL2(7)", 1, True, True, 1, 1),
    "L2": (8064, "PSL2(7)", 1, True, True, 2, 8),
}


@pytest.fixture(scope="module")
def examples():
    return bundled.residual_examples()


@pytest.mark.parametrize("label", sorted(EXPECTED))
def test_bundled_reports(examples, label):
    rep = examples[label]
    a = analyze(rep)
    got = (len(rep.source), a["projective_class"], a["E"]["degree"], a["regular"],
           a["strongly_regular"], len(a["twists"]), a["pi0_index"])
    assert got == EXPECTED[label]


@pytest.mark.parametrize("label", sorted(EXPECTED))
def test_E_is_fixed_field_of_twists(examples, label):
    rep = examples[label]
    F = rep.ring
    E = compute_E(rep.pseudorep())
    fixed = set(range(F.size))
    for p in residual_twists(rep).pairs:
        fixed &= {a for a in range(F.size) if int(p.sigma.apply(a)) == a}
    assert fixed == set(int(v) for v in subfield_elements(F, E.degree))


def test_report_is_deterministic(examples):
    assert analyze(examples["D2"]) == analyze(examples["D2"])


def test_trivial_representation():
    F = ring(5)
    rep = MatrixRep.from_image(close_group(F, []))
    a = analyze(rep)
    assert a["projective_class"] == "cyclic(1)"
    assert a["regular"] is False


def test_projective_class_families(examples):
    assert projective_class(examples["D1"]).family == "dihedral"
    assert projective_class(examples["O2"]).family == "exceptional"
    assert projective_class(examples["L1"]).family == "large"
