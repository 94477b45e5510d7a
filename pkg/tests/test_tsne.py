import numpy as np
import pytest

from conftest import matrix_from
from manifoldkit import tsne
from manifoldkit.errors import FormatError
from manifoldkit.fixtures import SyntheticSpec, generate
from manifoldkit.neighbors import pairwise_distances
from manifoldkit.quality import knn_label_agreement


def three_cluster_fixture():
    return generate(SyntheticSpec(generator="gaussian_clusters", n=300, seed=7))


def test_equidistant_rows_uniform():
    # regular tetrahedron: all pairwise distances equal
    X = matrix_from([
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ])
    cal = tsne.calibrate_perplexity(pairwise_distances(X), perplexity=3.0)
    # every conditional row was uniform 1/3; symmetrization keeps P uniform
    off_diag = cal.P[~np.eye(4, dtype=bool)]
    assert np.allclose(off_diag, 1.0 / 12.0, atol=1e-12)


def test_calibrated_row_entropies(rng):
    X = matrix_from(rng.normal(size=(100, 5)))
    D = pairwise_distances(X)
    cal = tsne.calibrate_perplexity(D, perplexity=20.0)
    D2 = D.values**2
    for i in range(100):
        d2 = D2[i].copy()
        d2[i] = np.inf
        p = tsne._conditional_row(d2, cal.sigmas[i])
        assert abs(tsne._row_perplexity(p) - 20.0) <= 1e-3


def test_p_sums_to_one_and_symmetric(rng):
    X = matrix_from(rng.normal(size=(40, 4)))
    cal = tsne.calibrate_perplexity(pairwise_distances(X), perplexity=10.0)
    assert abs(cal.P.sum() - 1.0) <= 1e-12
    assert np.abs(cal.P - cal.P.T).max() <= 1e-12
    assert np.all(np.diag(cal.P) == 0)


def test_calibrate_rejects_bad_perplexity():
    D = pairwise_distances(matrix_from(np.arange(6, dtype=float).reshape(3, 2)))
    with pytest.raises(FormatError):
        tsne.calibrate_perplexity(D, perplexity=1.0)
    with pytest.raises(FormatError):
        tsne.calibrate_perplexity(D, perplexity=5.0)


def test_gradient_matches_finite_differences(rng):
    n, m = 8, 2
    X = matrix_from(rng.normal(size=(n, 4)))
    cal = tsne.calibrate_perplexity(pairwise_distances(X), perplexity=3.0)
    Y = rng.normal(size=(n, m))
    grad = tsne.tsne_gradient(cal.P, Y)
    eps = 1e-6
    fd = np.zeros_like(Y)
    for i in range(n):
        for j in range(m):
            Yp, Ym = Y.copy(), Y.copy()
            Yp[i, j] += eps
            Ym[i, j] -= eps
            fd[i, j] = (tsne.kl_divergence(cal.P, Yp) - tsne.kl_divergence(cal.P, Ym)) / (2 * eps)
    rel = np.abs(grad - fd).max() / max(np.abs(fd).max(), 1e-30)
    assert rel <= 1e-5


def test_two_points_closed_form():
    # n=2: P is forced to (1/2, 1/2) off-diagonal regardless of bandwidth,
    # and Q is identically (1/2, 1/2), so the KL minimum is 0
    P = np.array([[0.0, 0.5], [0.5, 0.0]])
    Y = np.array([[0.0, 0.0], [1.0, 0.0]])
    assert tsne.kl_divergence(P, Y) == pytest.approx(0.0, abs=1e-12)
    assert np.abs(tsne.tsne_gradient(P, Y)).max() <= 1e-12


def test_three_cluster_run():
    data = three_cluster_fixture()
    D = pairwise_distances(data.dataset.embeddings)
    cal = tsne.calibrate_perplexity(D, perplexity=30.0)
    cfg = tsne.TsneConfig(perplexity=30.0, max_iter=500, seed=7)
    emb = tsne.tsne_embed(cal, cfg)
    trace = emb.extras["kl_trace"]
    assert all(np.isfinite(trace))
    assert all(v >= 0 for v in trace)
    assert trace[-1] < emb.extras["kl_end_of_exaggeration"]
    labels = np.asarray(data.dataset.labels)
    assert knn_label_agreement(emb.coords, labels, k=10) >= 0.9


def test_tsne_deterministic(rng):
    X = matrix_from(rng.normal(size=(30, 3)))
    cal = tsne.calibrate_perplexity(pairwise_distances(X), perplexity=5.0)
    cfg = tsne.TsneConfig(perplexity=5.0, max_iter=50, seed=11)
    a = tsne.tsne_embed(cal, cfg).coords
    b = tsne.tsne_embed(cal, cfg).coords
    assert np.array_equal(a, b)


def test_loss_trace_csv(tmp_path):
    path = tmp_path / "trace.csv"
    tsne.save_loss_trace([1.5, 0.25], path)
    assert path.read_text() == "iter,kl\n0,1.5\n1,0.25\n"
