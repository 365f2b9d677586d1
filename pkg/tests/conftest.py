import itertools

import numpy as np
import pytest

from bolkhoj.hmm import Hmm
from bolkhoj.resources import default_data_dir, load_default_resources
from bolkhoj.search import index_corpus, load_documents, load_templates


@pytest.fixture(scope="session")
def bundle():
    return load_default_resources()


@pytest.fixture(scope="session")
def documents():
    return load_documents(default_data_dir() / "docs.jsonl")


@pytest.fixture(scope="session")
def docs_by_id(documents):
    return {d.id: d for d in documents}


@pytest.fixture(scope="session")
def doc_index(documents):
    return index_corpus(documents)


@pytest.fixture(scope="session")
def templates():
    return load_templates(default_data_dir() / "templates.tsv")


# ---------------------------------------------------------------------------
# brute-force HMM oracles, independent of the forward/viterbi code paths


def _all_path_logps(model: Hmm, obs: np.ndarray):
    """(paths, log-probability per path) over every state sequence, each
    weighted with its termination factor."""
    T = obs.shape[0]
    logb = model.emission_logpdf(obs)
    paths = np.array(list(itertools.product(range(model.num_states), repeat=T)))
    with np.errstate(invalid="ignore"):
        lp = model.init_logp[paths[:, 0]] + logb[0, paths[:, 0]]
        for t in range(1, T):
            lp = lp + model.trans_logp[paths[:, t - 1], paths[:, t]] + logb[t, paths[:, t]]
        lp = lp + model.final_logp[paths[:, -1]]
    lp = np.where(np.isnan(lp), -np.inf, lp)
    return paths, lp


def enumerate_paths_loglik(model: Hmm, obs: np.ndarray) -> float:
    """Total log-likelihood by explicit summation over every state path."""
    _, lp = _all_path_logps(model, obs)
    finite = lp[lp > -np.inf]
    if finite.size == 0:
        return -np.inf
    peak = finite.max()
    return float(peak + np.log(np.exp(finite - peak).sum()))


def enumerate_best_path(model: Hmm, obs: np.ndarray):
    """argmax over all paths; ties resolved exactly like the decoder's
    backtrack (lowest state index from the end backwards)."""
    paths, lp = _all_path_logps(model, obs)
    best_lp = lp.max()
    if best_lp == -np.inf:
        return None, -np.inf
    ties = paths[lp >= best_lp - 1e-12]
    chosen = min(ties.tolist(), key=lambda p: tuple(reversed(p)))
    return list(chosen), float(best_lp)


def random_free_end_model(rng: np.random.Generator, n: int, dims: int) -> Hmm:
    """Ergodic model, rows stochastic, free termination everywhere."""
    init = rng.dirichlet(np.ones(n))
    trans = rng.dirichlet(np.ones(n), size=n)
    means = rng.normal(0.0, 2.0, (n, dims))
    variances = rng.uniform(0.3, 1.5, (n, dims))
    return Hmm(np.log(init), np.log(trans), means, variances,
               np.ones((n, n), dtype=bool), np.zeros(n))


def random_exit_mass_model(rng: np.random.Generator, n: int, dims: int) -> Hmm:
    """Every state carries random exit mass; rows plus exit sum to 1."""
    init = rng.dirichlet(np.ones(n))
    full = rng.dirichlet(np.ones(n + 1), size=n)
    means = rng.normal(0.0, 2.0, (n, dims))
    variances = rng.uniform(0.3, 1.5, (n, dims))
    return Hmm(np.log(init), np.log(full[:, :n]), means, variances,
               np.ones((n, n), dtype=bool), np.log(full[:, n]))
