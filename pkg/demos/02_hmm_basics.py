"""Forward likelihood, Viterbi decoding and Baum-Welch training."""

import numpy as np

from bolkhoj.hmm import (TrainConfig, baum_welch, flat_start, forward_loglik,
                         make_left_to_right, sample, sample_with_states, viterbi)

rng = np.random.default_rng(42)

# a 3-state left-to-right "phone" with well separated state means
generator = make_left_to_right(means=[[0.0, 0.0], [3.0, -3.0], [-3.0, 3.0]],
                               variances=np.ones((3, 2)), self_loop=0.6)

obs, states = sample_with_states(generator, 12, seed=1)
print("sampled state path:", states)

path, lp = viterbi(generator, obs)
print("viterbi recovers  :", path, f"(logp {lp:.2f})")
print("forward total     :", f"{forward_loglik(generator, obs):.2f}  (>= viterbi)")

# train a fresh model from flat start on sampled data; the per-iteration
# log-likelihood never decreases
data = [sample(generator, int(rng.integers(8, 16)), rng) for _ in range(20)]
result = baum_welch(flat_start(3, data), data, TrainConfig(max_iters=10))
print("training loglik   :", [round(v, 1) for v in result.loglik_history])
print("learned means     :")
print(np.round(result.model.means, 2))
