"""Synthesis tests.

The rank-one interpolation identity behind frame synthesis is validated here
by brute force before anything in the package is allowed to use it: the
oracle tests below recompute eigenvector masses directly from eigenvectors
and compare them against the closed form evaluated from the two spectra
alone.
"""
import numpy as np
import pytest

from util import random_complex


def masses_from_spectra(a_vals, b_vals):
    """Closed form: mass of f on the j-th eigendirection of S from the spectra
    of S (a_vals, distinct) and S + ff* (b_vals).

        w_j = - prod_i (a_j - b_i) / prod_{i != j} (a_j - a_i)
    """
    a = np.asarray(a_vals, dtype=float)
    b = np.asarray(b_vals, dtype=float)
    out = np.empty(a.size)
    for j in range(a.size):
        num = -np.prod(a[j] - b)
        den = np.prod(np.delete(a[j] - a, j))
        out[j] = num / den
    return out


def grouped_masses_from_spectra(alphas, mults, b_vals):
    """Closed form with repeated eigenvalues: mass of f on the eigenspace of
    alpha_t when S has distinct eigenvalues alphas with multiplicities mults.

    S + ff* keeps alpha_t with multiplicity >= mults[t] - 1, so the quotient
        Q(x) = prod_i (x - b_i) / prod_t (x - alpha_t)^(mults[t] - 1)
    is a polynomial, and W_t = -Q(alpha_t) / prod_{s != t} (alpha_t - alpha_s).
    Q(alpha_t) is evaluated by removing, for every s, the mults[s]-1 entries of
    b closest to alpha_s before taking the product.
    """
    alphas = np.asarray(alphas, dtype=float)
    b = list(np.asarray(b_vals, dtype=float))
    for s in range(alphas.size):
        for _ in range(mults[s] - 1):
            i = int(np.argmin([abs(x - alphas[s]) for x in b]))
            b.pop(i)
    b = np.asarray(b)
    out = np.empty(alphas.size)
    for t in range(alphas.size):
        num = -np.prod(alphas[t] - b)
        den = np.prod(np.delete(alphas[t] - alphas, t))
        out[t] = num / den
    return out


# --------------------------------------------------------------- the oracles


def test_rank_one_coefficient_oracle():
    """1000 random 3x3 Hermitian instances: the closed form must match the
    masses computed directly from the eigenvectors to 1e-9."""
    rng = np.random.default_rng(20250819)
    worst = 0.0
    for _ in range(1000):
        A = random_complex(rng, 3, 3)
        S = (A + A.conj().T) / 2
        f = random_complex(rng, 3)
        a_vals, vecs = np.linalg.eigh(S)
        a_vals, vecs = a_vals[::-1], vecs[:, ::-1]
        b_vals = np.linalg.eigvalsh(S + np.outer(f, f.conj()))[::-1]
        w_true = np.abs(vecs.conj().T @ f) ** 2
        w_formula = masses_from_spectra(a_vals, b_vals)
        worst = max(worst, float(np.max(np.abs(w_true - w_formula))))
    assert worst <= 1e-9, f"worst deviation {worst:.3e}"


@pytest.mark.parametrize("rank", [1, 2])
def test_rank_one_coefficient_oracle_padded(rank):
    """Rank-deficient S (as inside the synthesis recursion, k < d): pad the
    active spectrum with a single zero; the zero's mass must equal the squared
    projection of f onto the kernel of S."""
    rng = np.random.default_rng(7 + rank)
    d = 3
    worst = 0.0
    for _ in range(500):
        V = random_complex(rng, d, rank)
        S = V @ V.conj().T
        f = random_complex(rng, d)
        a_full, vecs = np.linalg.eigh(S)
        a_full, vecs = a_full[::-1], vecs[:, ::-1]
        a_hat = np.concatenate([a_full[:rank], [0.0]])  # one padded zero
        b_hat = np.linalg.eigvalsh(S + np.outer(f, f.conj()))[::-1][: rank + 1]
        w_formula = masses_from_spectra(a_hat, b_hat)
        w_true = np.abs(vecs[:, :rank].conj().T @ f) ** 2
        kernel_mass = float(np.sum(np.abs(vecs[:, rank:].conj().T @ f) ** 2))
        dev = max(
            float(np.max(np.abs(w_formula[:rank] - w_true))),
            abs(w_formula[rank] - kernel_mass),
        )
        worst = max(worst, dev)
    assert worst <= 1e-9, f"worst deviation {worst:.3e}"


def test_grouped_coefficient_oracle():
    """Repeated eigenvalues: the grouped closed form must recover per-eigenspace
    masses.  Exercised with multiplicity patterns (2,1), (2,2), (3,1) in d=4."""
    rng = np.random.default_rng(99)
    worst = 0.0
    for pattern in [(2, 1), (2, 2), (3, 1), (1, 1, 2)]:
        d = sum(pattern)
        for _ in range(300):
            alphas = np.sort(rng.uniform(0.5, 4.0, size=len(pattern)))[::-1]
            alphas += np.arange(len(pattern), 0, -1)  # keep groups separated
            diag = np.repeat(alphas, pattern)
            U = np.linalg.qr(random_complex(rng, d, d))[0]
            S = (U * diag) @ U.conj().T
            S = (S + S.conj().T) / 2
            f = random_complex(rng, d)
            b_vals = np.linalg.eigvalsh(S + np.outer(f, f.conj()))[::-1]
            w_formula = grouped_masses_from_spectra(alphas, pattern, b_vals)
            # true per-eigenspace masses
            start = 0
            w_true = []
            for m in pattern:
                block = U[:, start : start + m]
                w_true.append(float(np.sum(np.abs(block.conj().T @ f) ** 2)))
                start += m
            worst = max(worst, float(np.max(np.abs(w_formula - np.asarray(w_true)))))
    assert worst <= 1e-8, f"worst deviation {worst:.3e}"


# ------------------------------------------------- production implementation

from framespaces import Frame
from framespaces.eigensteps import (
    EigenstepTable,
    compute_eigensteps,
    polytope_system,
    sample_tables,
)
from framespaces.synthesis import (
    DegenerateEigenstepsError,
    InconsistentTableError,
    InvalidWitnessError,
    SynthesisOptions,
    derive_seed,
    frame_from_eigensteps,
    rank_one_masses,
    spark_deficient_witness,
)


def _table_dev(T, rows):
    return max(
        abs(a - b) for ra, rb in zip(T.rows, rows) for a, b in zip(ra, rb)
    )


def test_rank_one_masses_matches_eigenvector_truth():
    """The shipped grouped formula must agree with masses computed directly
    from eigenvectors, including the padded (rank-deficient) case."""
    rng = np.random.default_rng(7)
    worst = 0.0
    for d in (2, 3, 4):
        for k in range(1, d + 1):
            for _ in range(200):
                vals = np.sort(rng.uniform(0.5, 4.0, size=k))[::-1]
                vals += np.arange(k, 0, -1)  # distinct
                U = np.linalg.qr(random_complex(rng, d, d))[0]
                diag = np.concatenate([vals, np.zeros(d - k)])
                S = (U * diag) @ U.conj().T
                S = (S + S.conj().T) / 2
                f = random_complex(rng, d)
                b = np.linalg.eigvalsh(S + np.outer(f, f.conj()))[::-1]
                row_next = tuple(b[: min(k + 1, d)])
                alphas, mults, starts, masses = rank_one_masses(
                    tuple(vals), row_next, d
                )
                # ground truth per group, kernel mass pooled into the 0 group
                proj = np.abs(U.conj().T @ f) ** 2
                true = list(proj[:k])
                if k < d:
                    true.append(float(np.sum(proj[k:])))
                worst = max(worst, float(np.max(np.abs(masses - np.asarray(true)))))
    assert worst <= 1e-8, f"worst deviation {worst:.3e}"


def test_rank_one_masses_group_slots():
    alphas, mults, starts, masses = rank_one_masses((2.0, 2.0, 1.0), (2.0, 2.0, 1.5), 3)
    assert np.allclose(alphas, [2.0, 1.0])
    assert tuple(mults) == (2, 1)
    assert tuple(starts) == (0, 2)
    assert np.all(np.asarray(masses) >= 0)


def test_rank_one_masses_rejects_negative_mass():
    # asking the spectrum to move *down* needs negative mass
    with pytest.raises(InconsistentTableError):
        rank_one_masses((2.0, 1.0), (1.5, 0.5), 2)


def test_round_trip_worked_example():
    T = EigenstepTable(((1.0,), (1.5, 0.5), (2.0, 1.0), (2.0, 2.0)))
    F = frame_from_eigensteps(T, (1.0, 1.0, 1.0, 1.0))
    assert F.d == 2 and F.N == 4
    assert np.allclose([np.linalg.norm(c) ** 2 for c in F.entries.T], 1.0, atol=1e-10)
    assert _table_dev(compute_eigensteps(F), T.rows) <= 1e-8


def test_round_trip_one_dimensional():
    T = EigenstepTable(((1.0,), (2.0,), (3.0,)))
    F = frame_from_eigensteps(T, (1.0, 1.0, 1.0))
    assert np.allclose(np.abs(F.entries), [[1.0, 1.0, 1.0]], atol=1e-12)


def test_orthonormal_table_synthesizes_identity():
    T = EigenstepTable(((1.0,), (1.0, 1.0), (1.0, 1.0, 1.0)))
    F = frame_from_eigensteps(T, (1.0, 1.0, 1.0))
    assert np.allclose(F.entries, np.eye(3), atol=1e-12)


@pytest.mark.parametrize(
    "lam,r,mode",
    [
        ((2.0, 2.0), (1.0, 1.0, 1.0, 1.0), "strict"),
        ((2.5, 2.5), (1.0,) * 5, "strict"),
        ((5 / 3, 5 / 3, 5 / 3), (1.0,) * 5, "strict"),
        ((3.0, 1.0), (1.0, 1.0, 1.0, 1.0), "strict"),
        ((2.0, 1.0), (2.0, 0.5, 0.5), "boundary"),
    ],
)
def test_round_trip_sampled_tables(lam, r, mode):
    P = polytope_system(lam, r)
    opts = SynthesisOptions(mode=mode)
    for T in sample_tables(P, 8, seed=3):
        F = frame_from_eigensteps(T, r, opts)
        assert _table_dev(compute_eigensteps(F), T.rows) <= 1e-8
        assert np.allclose(
            sorted(np.linalg.norm(c) ** 2 for c in F.entries.T), sorted(r), atol=1e-8
        )


def test_strict_rejects_boundary_table():
    T = EigenstepTable(((1.0,), (2.0, 0.0), (2.0, 1.0), (2.0, 2.0)))
    with pytest.raises(DegenerateEigenstepsError):
        frame_from_eigensteps(T, (1.0,) * 4)


def test_strict_allows_spectrum_forced_ties():
    # mu[3,1] = 2 = lambda_1 is forced by the repeated top eigenvalue; the
    # default mode must not reject it.
    T = EigenstepTable(((1.0,), (1.5, 0.5), (2.0, 1.0), (2.0, 2.0)))
    frame_from_eigensteps(T, (1.0,) * 4)  # does not raise


def test_perturb_mode_handles_boundary_table():
    T = EigenstepTable(((1.0,), (2.0, 0.0), (2.0, 1.0), (2.0, 2.0)))
    F = frame_from_eigensteps(T, (1.0,) * 4, SynthesisOptions(mode="perturb"))
    assert _table_dev(compute_eigensteps(F), T.rows) <= 1e-6


def test_boundary_mode_handles_boundary_table():
    T = EigenstepTable(((1.0,), (2.0, 0.0), (2.0, 1.0), (2.0, 2.0)))
    F = frame_from_eigensteps(T, (1.0,) * 4, SynthesisOptions(mode="boundary"))
    assert _table_dev(compute_eigensteps(F), T.rows) <= 1e-8


def test_invalid_mode_rejected():
    with pytest.raises(ValueError):
        SynthesisOptions(mode="loose")


def test_canonical_forbids_randomization_seeds():
    with pytest.raises(ValueError):
        SynthesisOptions(canonical=True, phase_seed=1)
    SynthesisOptions(canonical=False, phase_seed=1, left_unitary_seed=2)


def test_inconsistent_table_rejected():
    # row sums do not telescope the norms
    T = EigenstepTable(((1.0,), (1.4, 0.5), (2.0, 1.0), (2.0, 2.0)))
    with pytest.raises(InconsistentTableError):
        frame_from_eigensteps(T, (1.0,) * 4)


def test_synthesis_is_deterministic():
    T = EigenstepTable(((1.0,), (1.5, 0.5), (2.0, 1.0), (2.0, 2.0)))
    F1 = frame_from_eigensteps(T, (1.0,) * 4)
    F2 = frame_from_eigensteps(T, (1.0,) * 4)
    assert np.array_equal(F1.entries, F2.entries)


def test_noncanonical_randomization_changes_frame_not_table():
    T = EigenstepTable(((1.0,), (1.5, 0.5), (2.0, 1.0), (2.0, 2.0)))
    base = frame_from_eigensteps(T, (1.0,) * 4)
    opts = SynthesisOptions(canonical=False, phase_seed=11, left_unitary_seed=12)
    F = frame_from_eigensteps(T, (1.0,) * 4, opts)
    assert not np.allclose(F.entries, base.entries)
    assert _table_dev(compute_eigensteps(F), T.rows) <= 1e-8


# ------------------------------------------------------------ seed derivation


def test_derive_seed_is_stable():
    assert derive_seed(0, 0) == derive_seed(0, 0)
    assert derive_seed(0, 0) != derive_seed(0, 1)
    assert derive_seed(0, 0) != derive_seed(1, 0)
    vals = {derive_seed(12345, i) for i in range(1000)}
    assert len(vals) == 1000
    assert all(0 <= v < 2**64 for v in vals)


# ------------------------------------------------------------------ witnesses


def test_witness_unit_norm_tight_2x4():
    F = spark_deficient_witness((2.0, 2.0), (1.0,) * 4, (1, 2), (1,))
    assert np.allclose(F.entries, [[1, 1, 0, 0], [0, 0, 1, 1]], atol=1e-12)
    # the two columns named by the witness are parallel: spark <= d
    assert abs(np.linalg.det(F.entries[:, [0, 1]])) <= 1e-12


def test_witness_branch_two():
    F = spark_deficient_witness((2.0, 1.0), (2.0, 0.5, 0.5), (1,), (1,))
    expected = [[np.sqrt(2.0), 0, 0], [0, np.sqrt(0.5), np.sqrt(0.5)]]
    assert np.allclose(F.entries, expected, atol=1e-12)
    assert abs(np.linalg.det(F.entries[:, [1, 2]])) <= 1e-12


def test_witness_spectrum_and_norms():
    from framespaces import norms_of, spectrum_of

    F = spark_deficient_witness((2.0, 2.0), (1.0,) * 4, (1, 2), (1,))
    assert np.allclose(spectrum_of(F).values, (2.0, 2.0), atol=1e-10)
    assert np.allclose(norms_of(F), (1.0,) * 4, atol=1e-10)


@pytest.mark.parametrize(
    "I,J",
    [
        ((), (1,)),            # empty index set
        ((1, 2, 3, 4), (1,)),  # I not proper
        ((1, 2), (1, 2)),      # J not proper
        ((0, 1), (1,)),        # out of range
        ((1, 5), (1,)),        # out of range
    ],
)
def test_witness_rejects_bad_index_sets(I, J):
    with pytest.raises(InvalidWitnessError):
        spark_deficient_witness((2.0, 2.0), (1.0,) * 4, I, J)


def test_witness_rejects_sum_mismatch():
    # sum(r_I) = 2 but sum(lam_J) = 2.5: not a partition equality
    with pytest.raises(InvalidWitnessError):
        spark_deficient_witness((2.5, 1.5), (1.0,) * 4, (1, 2), (1,))


# -------------------------------------------------------------- random frames

from framespaces import FrameError, norms_of, spectrum_of  # noqa: E402
from framespaces.synthesis import random_frame  # noqa: E402


def test_random_frame_members_live_in_the_space():
    for F in random_frame((2.0, 2.0), (1.0,) * 4, 6, seed=42):
        assert np.allclose(spectrum_of(F).values, (2.0, 2.0), atol=1e-8)
        assert np.allclose(norms_of(F), (1.0,) * 4, atol=1e-8)


def test_random_frame_nonconstant_spectrum():
    lam, r = (3.0, 1.0), (1.0, 1.0, 1.0, 1.0)
    for F in random_frame(lam, r, 4, seed=9):
        assert np.allclose(spectrum_of(F).values, lam, atol=1e-8)
        assert np.allclose(norms_of(F), r, atol=1e-8)


def test_random_frame_determinism_and_seed_sensitivity():
    a = random_frame((2.0, 2.0), (1.0,) * 4, 3, seed=1)
    b = random_frame((2.0, 2.0), (1.0,) * 4, 3, seed=1)
    c = random_frame((2.0, 2.0), (1.0,) * 4, 3, seed=2)
    assert all(np.array_equal(x.entries, y.entries) for x, y in zip(a, b))
    assert not np.allclose(a[0].entries, c[0].entries)


def test_random_frame_samples_are_distinct():
    frames = random_frame((2.5, 2.5), (1.0,) * 5, 4, seed=3)
    for i in range(len(frames)):
        for k in range(i + 1, len(frames)):
            assert not np.allclose(frames[i].entries, frames[k].entries)


def test_random_frame_requires_strong_admissibility():
    # partial-sum equality at k=1: admissible but not strongly so
    with pytest.raises(FrameError, match="strongly"):
        random_frame((2.0, 1.0), (2.0, 0.5, 0.5), 1, seed=0)


def test_random_frame_count_zero():
    assert random_frame((2.0, 2.0), (1.0,) * 4, 0, seed=0) == []
