import itertools

import numpy as np
import pytest

from lp_equiv.matgen import AugmentedSpec, DenseMatrix, VandermondeSpec, build_vandermonde, sample_instance
from lp_equiv.numerics import BudgetExceededError
from lp_equiv.spark import check_submatrix_invertibility, compute_spark, verify_prop1


def brute_spark(entries: np.ndarray, tol: float = 1e-9) -> tuple[int, tuple[int, ...]]:
    """Independent oracle: smallest dependent column subset by direct scan.

    Uses numpy.linalg.matrix_rank (a different dependence test than the
    package's sigma_min/sigma_max ratio) and plain nested loops."""
    m, n = entries.shape
    for size in range(1, n + 1):
        for cols in itertools.combinations(range(n), size):
            sub = entries[:, list(cols)]
            if np.linalg.matrix_rank(sub, tol=tol * max(1.0, np.linalg.norm(sub, 2))) < size:
                return size, cols
    raise AssertionError("no dependent subset found")


def test_worked_example_spark():
    A = build_vandermonde(VandermondeSpec(2, (1.0, 2.0, 3.0)))
    cert = compute_spark(A)
    assert cert.spark == 3
    assert cert.witness == (0, 1, 2)


def test_spark_matches_brute_force_on_random_instances():
    for seed in range(8):
        m = 2 + seed % 3
        spec = sample_instance(m, m + 3, seed=seed)
        A = build_vandermonde(spec)
        cert = compute_spark(A)
        level, witness = brute_spark(A.entries)
        assert cert.spark == level == m + 1
        assert cert.witness == witness  # both scans are lexicographic-first


def test_spark_detects_duplicated_column():
    # duplicate a column: spark drops to 2 with the duplicate pair as witness
    base = build_vandermonde(VandermondeSpec(2, (1.0, 2.0, 3.0))).entries
    dup = np.hstack([base, base[:, 1:2]])
    cert = compute_spark(DenseMatrix(dup))
    assert cert.spark == 2
    assert cert.witness == (1, 3)


def test_spark_rejects_full_column_rank():
    tall = DenseMatrix(np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(ValueError):
        compute_spark(tall)


def test_spark_budget():
    spec = sample_instance(4, 9, seed=0)
    A = build_vandermonde(spec)
    with pytest.raises(BudgetExceededError):
        compute_spark(A, budget=10)


def test_submatrix_positivity_for_positive_nodes():
    # all square submatrices of a positive-node instance have positive dets
    for m, n in ((2, 5), (3, 6), (4, 7)):
        lam = tuple(0.5 + 0.3 * j for j in range(n))
        report = check_submatrix_invertibility(VandermondeSpec(m, lam))
        assert report.passes
        assert report.min_abs_det > 1e-12


def test_submatrix_scan_finds_signed_degeneracy():
    # rows (0, 1, 3) of a 4-row instance are singular when three nodes sum to
    # zero: the scan must locate a numerically zero det despite distinct |lam|
    lam = (-2.0, 0.5, 1.5, 0.9)
    report = check_submatrix_invertibility(VandermondeSpec(4, lam))
    assert not report.passes
    assert report.argmin_rows == (0, 1, 3)
    assert set(report.argmin_cols) == {0, 1, 2}


def test_prop1_spark_of_augmented_family():
    spec = sample_instance(2, 6, seed=3)
    for x_t, y_t in ((1.0, 1.0), (0.1, 0.01)):
        report = verify_prop1(AugmentedSpec(spec, x_t=x_t, y_t=y_t))
        assert report.passes
        assert report.certificate.spark == 2 * spec.m + 3


def test_prop1_requires_wide_instance():
    spec = sample_instance(2, 4, seed=3)
    with pytest.raises(ValueError):
        verify_prop1(AugmentedSpec(spec, x_t=1.0, y_t=1.0))


def test_augmented_0_spark_collapses_to_left_block():
    # in the t -> infinity limit the glue rows vanish, so the m+1 dependence
    # of the left block reappears; the 2m+3 value holds only at finite t
    from lp_equiv.matgen import build_augmented_0

    spec = sample_instance(2, 6, seed=3)
    cert = compute_spark(build_augmented_0(spec))
    assert cert.spark == spec.m + 1
    assert all(w < spec.n for w in cert.witness)  # witness lives in the left block
