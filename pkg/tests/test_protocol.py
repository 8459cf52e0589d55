"""Protocol state machine: heralding, both swap methods, both engines.

Branch naming used throughout: the herald case orders (left, right) inner
measurement results, and the closed-form chain identities relate branches
across cases through the propagator's element-modulus symmetries.
"""
import math

import numpy as np
import pytest

from repeatersim.dynamics import effective_unitary, qed_pair_unitary
from repeatersim.errors import DegenerateFormulaPoint, ZeroProbabilityBranch
from repeatersim.linalg import apply_to_qubits, basis_state, concurrence_pure, kron, project
from repeatersim.params import SingleModeParams, TwoModeParams
from repeatersim.protocol import (
    CaseLabel,
    bsm_swap,
    closed_form_grid,
    closed_form_observables,
    evolve_segment,
    herald_inner_pair,
    heralded_swap,
    initial_bell_pair,
    qed_swap,
)

rng = np.random.default_rng(4004)

E = np.array([1.0, 0.0], dtype=complex)
G = np.array([0.0, 1.0], dtype=complex)


def random_two_mode():
    g2, g3 = rng.uniform(0.3, 3.0, size=2)
    d2, d3 = rng.uniform(0.5, 12.0, size=2) * rng.choice([-1.0, 1.0], size=2)
    return TwoModeParams(g2=g2, g3=g3, delta2=d2, delta3=d3)


def random_single_mode():
    return SingleModeParams(g=rng.uniform(0.3, 2.0), delta=rng.uniform(0.5, 8.0) * rng.choice([-1.0, 1.0]))


def segment_pair(p, t, case):
    left = herald_inner_pair(evolve_segment(p, t), case.left, (2, 3))
    right = herald_inner_pair(evolve_segment(p, t), case.right, (6, 7))
    return left, right


def test_initial_bell_pair():
    psi = initial_bell_pair()
    assert abs(np.linalg.norm(psi) - 1.0) < 1e-15
    assert abs(concurrence_pure(psi) - 1.0) < 1e-12
    # singlet antisymmetry: swapping the two atoms negates the state
    swapped = psi.reshape(2, 2).T.reshape(4)
    assert np.allclose(swapped, -psi)


def test_case_label_round_trip():
    assert str(CaseLabel.from_string("ge-eg")) == "ge-eg"
    assert len(CaseLabel.all_cases()) == 4
    with pytest.raises(ValueError):
        CaseLabel("gg", "ge")
    with pytest.raises(ValueError):
        CaseLabel.from_string("gege")


def test_evolve_segment_starts_as_singlet_product():
    p = random_two_mode()
    want = kron(initial_bell_pair(), initial_bell_pair())
    assert np.array_equal(evolve_segment(p, 0.0), want)


def test_evolve_segment_norm():
    for _ in range(20):
        psi = evolve_segment(random_two_mode(), rng.uniform(0.0, 15.0))
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-12


def test_evolve_segment_constant_component():
    # the doubly-ground inner component rides through untouched at -1/2
    idx_egge = 0b0110
    idx_geeg = 0b1001
    for _ in range(10):
        p = random_two_mode()
        t = rng.uniform(0.0, 15.0)
        psi = evolve_segment(p, t)
        assert abs(psi[idx_egge] - (-0.5)) < 1e-12
        # the doubly-excited inner component only picks up a phase
        want = -0.5 * np.exp(-1j * (p.shift2 + p.shift3) * t)
        assert abs(psi[idx_geeg] - want) < 1e-12


def test_evolve_segment_matches_hand_built_state():
    # reassemble the four-atom state from the propagator columns directly
    for _ in range(10):
        p = random_two_mode()
        t = rng.uniform(0.0, 15.0)
        u = effective_unitary(p, t)
        want = 0.5 * (
            kron(kron(E, u @ basis_state("ge")), G)
            - kron(kron(E, u @ basis_state("gg")), E)
            - kron(kron(G, u @ basis_state("ee")), G)
            + kron(kron(G, u @ basis_state("eg")), E)
        )
        assert np.max(np.abs(evolve_segment(p, t) - want)) < 1e-12


def test_herald_at_zero_time():
    p = random_two_mode()
    res = herald_inner_pair(evolve_segment(p, 0.0), "ge")
    assert abs(res.probability - 0.25) < 1e-12
    assert np.allclose(res.state, basis_state("eg"))
    assert res.outcome.measured_pair == (2, 3)


def test_herald_closed_form():
    # "ge" leaves (U33, U32) on the outer pair, "eg" leaves (U23, U22)
    for _ in range(20):
        p = random_two_mode()
        t = rng.uniform(0.0, 15.0)
        u = effective_unitary(p, t)
        psi = evolve_segment(p, t)
        for outcome, c, d in (("ge", u[2, 2], u[2, 1]), ("eg", u[1, 2], u[1, 1])):
            res = herald_inner_pair(psi, outcome)
            want = np.array([0.0, c, d, 0.0])
            want = want / np.linalg.norm(want)
            # compare up to the (irrelevant) global phase
            k = int(np.argmax(np.abs(want)))
            got = res.state * np.exp(-1j * np.angle(res.state[k])) * np.exp(1j * np.angle(want[k]))
            assert np.max(np.abs(got - want)) < 1e-10


def test_herald_probabilities_quarter_each():
    for _ in range(20):
        psi = evolve_segment(random_two_mode(), rng.uniform(0.0, 15.0))
        total = 0.0
        for outcome in ("ee", "eg", "ge", "gg"):
            res = herald_inner_pair(psi, outcome)
            assert abs(res.probability - 0.25) < 1e-12
            total += res.probability
        assert abs(total - 1.0) < 1e-10


def test_herald_failure_branches_are_product():
    psi = evolve_segment(random_two_mode(), 3.1)
    for outcome in ("ee", "gg"):
        res = herald_inner_pair(psi, outcome)
        assert concurrence_pure(res.state) < 1e-12


def test_bsm_bell_branch_at_quarter_period():
    # equal couplings and equal detunings put the swap on the Bell branch
    p = TwoModeParams(g2=1.0, g3=1.0, delta2=2.0, delta3=2.0)
    t = math.pi / (4.0 * p.pair_coupling)
    left, right = segment_pair(p, t, CaseLabel("ge", "ge"))
    res = bsm_swap(left, right, "phi_plus")
    assert abs(res.concurrence - 1.0) < 1e-12
    assert abs(res.probability - 0.25) < 1e-12


def test_bsm_impossible_before_interaction():
    p = random_two_mode()
    left, right = segment_pair(p, 0.0, CaseLabel("ge", "ge"))
    with pytest.raises(ZeroProbabilityBranch):
        bsm_swap(left, right, "phi_plus")


def test_bsm_bell_branches_have_unit_concurrence():
    # branches that produce Bell states do so whenever they fire at all
    bell_branches = [
        (CaseLabel("ge", "ge"), "phi_plus"),
        (CaseLabel("eg", "eg"), "phi_plus"),
        (CaseLabel("ge", "eg"), "psi_plus"),
        (CaseLabel("eg", "ge"), "psi_plus"),
    ]
    for _ in range(25):
        p = random_two_mode()
        t = rng.uniform(0.05, 15.0)
        for case, bell in bell_branches:
            left, right = segment_pair(p, t, case)
            try:
                res = bsm_swap(left, right, bell)
            except ZeroProbabilityBranch:
                continue
            assert abs(res.concurrence - 1.0) < 1e-12
            # the two amplitudes differ by a pure phase
            ratio = res.state[np.abs(res.state) > 0.1][:2]
            assert abs(abs(ratio[0] / ratio[1]) - 1.0) < 1e-12


def test_bsm_concurrence_chain_across_cases():
    # all four swapped-state concurrences coincide, as do the Bell-branch
    # probabilities, through the propagator's modulus symmetries
    for _ in range(50):
        p = random_two_mode()
        t = rng.uniform(0.05, 15.0)
        conc = []
        prob = []
        for case, bell in (
            (CaseLabel("ge", "ge"), "psi_plus"),
            (CaseLabel("ge", "eg"), "phi_plus"),
            (CaseLabel("eg", "ge"), "phi_plus"),
            (CaseLabel("eg", "eg"), "psi_plus"),
        ):
            left, right = segment_pair(p, t, case)
            res = bsm_swap(left, right, bell)
            conc.append(res.concurrence)
        for case, bell in (
            (CaseLabel("ge", "ge"), "phi_plus"),
            (CaseLabel("ge", "eg"), "psi_plus"),
            (CaseLabel("eg", "eg"), "phi_plus"),
        ):
            left, right = segment_pair(p, t, case)
            try:
                prob.append(bsm_swap(left, right, bell).probability)
            except ZeroProbabilityBranch:
                prob.append(0.0)
        assert np.max(np.abs(np.array(conc) - conc[0])) < 1e-10
        assert np.max(np.abs(np.array(prob) - prob[0])) < 1e-10


def test_swap_result_concurrence_consistent():
    p = random_two_mode()
    left, right = segment_pair(p, 2.3, CaseLabel("ge", "ge"))
    res = bsm_swap(left, right, "psi_plus")
    assert abs(res.concurrence - concurrence_pure(res.state)) < 1e-12
    assert res.case == CaseLabel("ge", "ge")


def test_qed_zero_duration_kills_one_amplitude():
    p = random_two_mode()
    sm = random_single_mode()
    t = rng.uniform(0.5, 10.0)
    left, right = segment_pair(p, t, CaseLabel("ge", "ge"))
    res = qed_swap(left, right, sm, t, t, "eg")
    assert res.concurrence == 0.0


def test_qed_rejects_backwards_stage():
    p = random_two_mode()
    sm = random_single_mode()
    left, right = segment_pair(p, 2.0, CaseLabel("ge", "ge"))
    with pytest.raises(ValueError):
        qed_swap(left, right, sm, 2.0, 1.0, "eg")


def test_qed_outcome_probabilities_sum_to_one():
    # measure atoms (4,5) in the full product basis after the cavity stage
    for _ in range(20):
        p = random_two_mode()
        sm = random_single_mode()
        t = rng.uniform(0.05, 10.0)
        tau = t + rng.uniform(0.0, 10.0)
        case = CaseLabel(*rng.choice(["ge", "eg"], size=2))
        left, right = segment_pair(p, t, case)
        joint = kron(left.state, right.state)
        evolved = apply_to_qubits(qed_pair_unitary(sm, tau - t), joint, (1, 2))
        total = 0.0
        for outcome in ("ee", "eg", "ge", "gg"):
            try:
                total += project(evolved, (1, 2), basis_state(outcome)).probability
            except ZeroProbabilityBranch:
                pass
        assert abs(total - 1.0) < 1e-10


def test_qed_concurrence_chains_across_cases():
    cases = {
        1: CaseLabel("ge", "ge"),
        2: CaseLabel("ge", "eg"),
        3: CaseLabel("eg", "ge"),
        4: CaseLabel("eg", "eg"),
    }
    for _ in range(50):
        p = random_two_mode()
        sm = random_single_mode()
        t = rng.uniform(0.05, 10.0)
        tau = t + rng.uniform(0.05, 10.0)
        c_eg = {}
        c_ge = {}
        for i, case in cases.items():
            left, right = segment_pair(p, t, case)
            c_eg[i] = qed_swap(left, right, sm, t, tau, "eg").concurrence
            c_ge[i] = qed_swap(left, right, sm, t, tau, "ge").concurrence
        assert abs(c_eg[4] - c_ge[1]) < 1e-10
        assert abs(c_ge[4] - c_eg[1]) < 1e-10
        middle = [c_eg[2], c_ge[2], c_eg[3], c_ge[3]]
        assert np.max(np.abs(np.array(middle) - middle[0])) < 1e-10


def test_closed_form_symmetric_collapse():
    # with equal detunings the first-case concurrence is the classic
    # 2 cos^2 sin^2 / (cos^4 + sin^4) profile, peaking at a quarter period
    p = TwoModeParams(g2=1.3, g3=1.3, delta2=3.0, delta3=3.0)
    for t in (0.3, 0.9, 1.7):
        x = p.pair_coupling * t
        c, s = math.cos(x) ** 2, math.sin(x) ** 2
        want = 2.0 * c * s / (c**2 + s**2)
        obs = closed_form_observables(CaseLabel("ge", "ge"), "bsm", p, t, selector="psi_plus")
        assert abs(obs.concurrence - want) < 1e-12
    t_star = math.pi / (4.0 * p.pair_coupling)
    obs = closed_form_observables(CaseLabel("ge", "ge"), "bsm", p, t_star, selector="psi_plus")
    assert abs(obs.concurrence - 1.0) < 1e-12
    obs = closed_form_observables(CaseLabel("ge", "ge"), "bsm", p, t_star, selector="phi_plus")
    assert abs(obs.probability - 0.25) < 1e-12


def test_closed_form_separable_limit():
    # a full exchange period returns the outer pair to a product state
    p = TwoModeParams(g2=1.0, g3=1.0, delta2=2.0, delta3=2.0)
    t = 2.0 * math.pi / p.exchange_rabi
    obs = closed_form_observables(CaseLabel("ge", "ge"), "bsm", p, t, selector="psi_plus")
    assert obs.concurrence < 1e-12
    with pytest.raises(DegenerateFormulaPoint):
        closed_form_observables(CaseLabel("ge", "ge"), "bsm", p, t, selector="phi_plus")
    conc, prob = closed_form_grid(
        CaseLabel("ge", "ge"), "bsm", p, np.array([t]), selector="phi_plus"
    )
    assert conc[0] == 0.0
    assert prob[0] < 1e-12


def test_engines_agree_bsm():
    for _ in range(60):
        p = random_two_mode()
        t = rng.uniform(0.05, 15.0)
        case = CaseLabel(*rng.choice(["ge", "eg"], size=2))
        bell = rng.choice(["phi_plus", "psi_plus"])
        try:
            pipeline = heralded_swap(case, "bsm", p, t, bell)
        except ZeroProbabilityBranch:
            continue
        formula = closed_form_observables(case, "bsm", p, t, selector=bell)
        assert abs(pipeline.concurrence - formula.concurrence) < 1e-10
        assert abs(pipeline.probability - formula.probability) < 1e-10


def test_engines_agree_qed():
    for _ in range(60):
        p = random_two_mode()
        sm = random_single_mode()
        t = rng.uniform(0.05, 10.0)
        tau = t + rng.uniform(0.0, 10.0)
        case = CaseLabel(*rng.choice(["ge", "eg"], size=2))
        outcome = rng.choice(["eg", "ge"])
        try:
            pipeline = heralded_swap(
                case, "qed", p, t, outcome, single_mode=sm, tau=tau
            )
        except ZeroProbabilityBranch:
            continue
        formula = closed_form_observables(
            case, "qed", p, t, selector=outcome, single_mode=sm, tau=tau
        )
        assert abs(pipeline.concurrence - formula.concurrence) < 1e-10
        assert abs(pipeline.probability - formula.probability) < 1e-10


def test_engines_agree_with_distinct_segments():
    # the API generalizes to unequal segment parameters; engines must still match
    for _ in range(20):
        p_left = random_two_mode()
        p_right = random_two_mode()
        t = rng.uniform(0.05, 12.0)
        case = CaseLabel(*rng.choice(["ge", "eg"], size=2))
        bell = rng.choice(["phi_plus", "psi_plus"])
        try:
            pipeline = heralded_swap(case, "bsm", p_left, t, bell, right_two_mode=p_right)
        except ZeroProbabilityBranch:
            continue
        formula = closed_form_observables(
            case, "bsm", p_left, t, selector=bell, right_two_mode=p_right
        )
        assert abs(pipeline.concurrence - formula.concurrence) < 1e-10
        assert abs(pipeline.probability - formula.probability) < 1e-10


def test_heralded_swap_validation():
    p = random_two_mode()
    with pytest.raises(ValueError):
        heralded_swap(CaseLabel("ge", "ge"), "teleport", p, 1.0, "phi_plus")
    with pytest.raises(ValueError):
        heralded_swap(CaseLabel("ge", "ge"), "qed", p, 1.0, "eg")  # missing cavity
    with pytest.raises(ValueError):
        heralded_swap(CaseLabel("ge", "ge"), "bsm", p, 1.0, "phi_minus")
