import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nettomo.exceptions import ValidationError
from nettomo.expander import Condition, certify_1_identifiable, pairwise_conditions
from nettomo.pathsel import (PathSelection, alternatives_satisfied, coupled_pairs, cover_ilp,
                            identifiability_heuristic, identifiability_ilp,
                            identifiability_problem, verify_selection)

from conftest import brute_force_min


def covers(a, ind):
    return bool((a[ind.astype(bool)].sum(axis=0) >= 1).all())


def alternatives_oracle(a, ind, big_m=None, pairs=None):
    """Loop-level restatement of the pairwise big-M system for fixed indicators."""
    sub = a[ind.astype(bool)]
    n = a.shape[1]
    m = n if big_m is None else big_m
    if not covers(a, ind):
        return False
    for i, j in (itertools.combinations(range(n), 2) if pairs is None else pairs):
        di, dj = int(sub[:, i].sum()), int(sub[:, j].sum())
        dij = int(sub[:, i] @ sub[:, j])
        lhs = [di - dj, dj - di, di + dj - 4 * dij]
        need = [1, 1, 0]
        if not any(lhs[k] >= need[k] and all(lhs[q] >= need[q] - m for q in range(3) if q != k)
                   for k in range(3)):
            return False
    return True


def random_routing(rng, r, n):
    a = rng.integers(0, 2, size=(r, n))
    a[np.arange(r), rng.integers(0, n, size=r)] = 1
    return a


# --- cover -------------------------------------------------------------------------------

def test_cover_six_candidates(candidates6):
    sel = cover_ilp(candidates6)
    a = candidates6.entries
    assert sel.feasible and sel.objective == 2
    assert sel.objective == brute_force_min(6, lambda ind: covers(a, ind))


def test_cover_identity_selects_all():
    assert cover_ilp(np.eye(4, dtype=int)).objective == 4


def test_cover_eight_link(eight_link):
    a = eight_link.entries
    assert cover_ilp(eight_link).objective == brute_force_min(6, lambda ind: covers(a, ind))


def test_cover_reports_uncovered():
    sel = cover_ilp(np.array([[1, 0, 1], [1, 0, 0]]))
    assert not sel.feasible and sel.uncovered == (1,)


# --- identifiability ILP -------------------------------------------------------------------

def test_ilp_six_candidates_matches_enumeration(candidates6):
    a = candidates6.entries
    sel = identifiability_ilp(candidates6)
    assert sel.feasible
    assert sel.objective == brute_force_min(6, lambda ind: alternatives_oracle(a, ind))
    assert verify_selection(candidates6, sel).verdict
    assert sel.objective >= cover_ilp(candidates6).objective


def test_four_path_subset_is_feasible(candidates6):
    ind = np.array([1, 0, 0, 1, 1, 1])
    assert alternatives_satisfied(candidates6, ind)
    assert verify_selection(candidates6, ind).verdict


def test_ilp_eight_link(eight_link):
    a = eight_link.entries
    sel = identifiability_ilp(eight_link)
    assert sel.objective <= 6
    assert sel.objective == brute_force_min(6, lambda ind: alternatives_oracle(a, ind))
    assert certify_1_identifiable(eight_link.select_rows(sel.selected)).verdict


def test_ilp_single_path():
    # one path over two links: both degree 1, sharing the path -> infeasible
    assert not identifiability_ilp(np.array([[1, 1]])).feasible
    sel = identifiability_ilp(np.array([[1]]))
    assert sel.feasible and sel.objective == 1


def test_ilp_solution_satisfies_exactly_one_condition(candidates6):
    sel = identifiability_ilp(candidates6)
    sub = candidates6.entries[sel.indicators.astype(bool)]
    for i, j in itertools.combinations(range(5), 2):
        assert pairwise_conditions(sub, i, j) is not Condition.VIOLATION


def test_problem_layout(candidates6):
    p = identifiability_problem(candidates6)
    n_pairs = 10
    assert p.n_vars == 6 + 3 * n_pairs
    assert p.n_rows == 5 + 4 * n_pairs


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_ilp_matches_enumeration_random(seed):
    rng = np.random.default_rng(seed)
    r, n = int(rng.integers(1, 8)), int(rng.integers(2, 6))
    a = random_routing(rng, r, n)
    if (a.sum(axis=0) == 0).any():
        return
    sel = identifiability_ilp(a)
    best = brute_force_min(r, lambda ind: alternatives_oracle(a, ind))
    if best is None:
        assert not sel.feasible and sel.status == "infeasible"
    else:
        assert sel.feasible and sel.objective == best
        assert cover_ilp(a).objective <= sel.objective


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    r, n = int(rng.integers(2, 8)), int(rng.integers(2, 6))
    a = random_routing(rng, r, n)
    if (a.sum(axis=0) == 0).any():
        return
    perm = rng.permutation(r)
    s1, s2 = identifiability_ilp(a), identifiability_ilp(a[perm])
    assert s1.feasible == s2.feasible and s1.objective == s2.objective
    assert cover_ilp(a).objective == cover_ilp(a[perm]).objective


# --- heuristic ----------------------------------------------------------------------------

def test_heuristic_six_candidates(candidates6):
    h = identifiability_heuristic(candidates6)
    assert h.feasible
    assert h.objective >= identifiability_ilp(candidates6).objective
    assert verify_selection(candidates6, h).verdict


def test_heuristic_on_four_paths_only(four_paths):
    h = identifiability_heuristic(four_paths)
    assert h.feasible and verify_selection(four_paths, h).verdict
    assert h.objective >= identifiability_ilp(four_paths).objective


def test_heuristic_uncoverable():
    h = identifiability_heuristic(np.array([[1, 0, 1], [1, 0, 0]]))
    assert not h.feasible and h.status == "infeasible" and h.uncovered == (1,)


def test_heuristic_round_cap(candidates6):
    h = identifiability_heuristic(candidates6, max_rounds=1)
    assert not h.feasible and h.status == "failed"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_heuristic_dominated_by_ilp(seed):
    rng = np.random.default_rng(seed)
    r, n = int(rng.integers(1, 8)), int(rng.integers(2, 6))
    a = random_routing(rng, r, n)
    if (a.sum(axis=0) == 0).any():
        return
    h = identifiability_heuristic(a)
    s = identifiability_ilp(a)
    if h.feasible:
        assert s.feasible and h.objective >= s.objective
        assert verify_selection(a, h).verdict


# --- verification ----------------------------------------------------------------------------

def test_verify_empty_selection(candidates6):
    with pytest.raises(ValidationError):
        verify_selection(candidates6, np.zeros(6, dtype=int))


def test_verify_missing_coverage(candidates6):
    cert = verify_selection(candidates6, np.array([1, 0, 1, 0, 1, 0]))
    assert not cert.verdict and cert.uncovered == (4,)
    assert cert.failing_pairs


def test_selection_json(candidates6):
    sel = identifiability_ilp(candidates6)
    cert = verify_selection(candidates6, sel)
    data = sel.to_dict(cert)
    assert set(data) == {"selected", "objective", "method", "certificate"}
    assert data["objective"] == len(data["selected"]) and data["method"] == "ident-ilp"


def test_selection_objective_counts_ones():
    sel = PathSelection(np.array([1, 0, 1]), "cover-ilp", True)
    assert sel.objective == 2 and sel.selected == [0, 2]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 8), st.integers(2, 7), st.sampled_from([None, 2, 3]))
def test_dropped_pairs_never_bind(seed, r, n, big_m):
    # the full pair system and the coupled pairs accept the same selections
    a = random_routing(np.random.default_rng(seed), r, n)
    keep = coupled_pairs(a, big_m)
    for ind in itertools.product((0, 1), repeat=r):
        ind = np.array(ind)
        assert alternatives_oracle(a, ind, big_m) == alternatives_oracle(a, ind, big_m, keep)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_lazy_and_bigm_formulations_agree(seed):
    rng = np.random.default_rng(seed)
    a = random_routing(rng, int(rng.integers(2, 9)), int(rng.integers(2, 6)))
    if (a.sum(axis=0) == 0).any():
        return
    lazy, bigm = identifiability_ilp(a), identifiability_ilp(a, formulation="bigm")
    assert lazy.status == bigm.status and lazy.objective == bigm.objective
    with pytest.raises(ValidationError):
        identifiability_ilp(a, formulation="dense")
