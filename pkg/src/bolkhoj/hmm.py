"""Diagonal-Gaussian hidden Markov models in the log domain.

Provides total likelihood (forward), best-path decoding (Viterbi),
Baum-Welch re-estimation and sampling.  Models carry an explicit
termination weight per state (``final_logp``) so the same machinery
covers free-end ergodic models, end-constrained left-to-right chains
and phone models with real exit mass that concatenation consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

LOG_ZERO = -np.inf


class HmmError(ValueError):
    pass


class DimensionMismatch(HmmError):
    pass


def _col(values) -> np.ndarray:
    return np.asarray(values, dtype=np.float64)


def _frames(obs) -> np.ndarray:
    """Accept a FeatureSequence or a plain (T, D) array."""
    frames = getattr(obs, "frames", obs)
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2:
        raise HmmError(f"observations must be a (T, D) matrix, got shape {frames.shape}")
    return frames


def _is_exit_mass(final_value: float) -> bool:
    # final weight semantics: 0.0 = free end, -inf = end forbidden,
    # anything in between is real exit probability mass.
    return np.isfinite(final_value) and final_value < 0.0


@dataclass
class Hmm:
    """A Gaussian HMM over D-dimensional observations.

    init_logp:   (N,) log initial-state probabilities.
    trans_logp:  (N, N) log transition probabilities, -inf where the
                 topology forbids a transition.
    means:       (N, D) per-state Gaussian means.
    variances:   (N, D) per-state diagonal variances (>= variance_floor).
    topology:    (N, N) boolean mask of allowed transitions.
    final_logp:  (N,) termination log-weights.  0.0 means the state may
                 end a path for free, -inf forbids ending there, a
                 finite negative value is exit probability mass counted
                 against the state's outgoing total.
    """

    init_logp: np.ndarray
    trans_logp: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    topology: np.ndarray
    final_logp: np.ndarray
    variance_floor: float = 1e-3

    def __post_init__(self):
        self.init_logp = _col(self.init_logp)
        self.trans_logp = _col(self.trans_logp)
        self.means = np.atleast_2d(_col(self.means))
        self.variances = np.atleast_2d(_col(self.variances))
        self.topology = np.asarray(self.topology, dtype=bool)
        self.final_logp = _col(self.final_logp)

    @property
    def num_states(self) -> int:
        return self.means.shape[0]

    @property
    def dims(self) -> int:
        return self.means.shape[1]

    def validate(self, tol: float = 1e-9) -> None:
        n, d = self.num_states, self.dims
        if self.init_logp.shape != (n,) or self.final_logp.shape != (n,):
            raise HmmError("initial/final vector length does not match state count")
        if self.trans_logp.shape != (n, n) or self.topology.shape != (n, n):
            raise HmmError("transition matrix shape does not match state count")
        if self.variances.shape != (n, d):
            raise HmmError("variance shape does not match means")
        if not np.all(np.isneginf(self.trans_logp[~self.topology])):
            raise HmmError("disallowed transitions must carry -inf")
        if np.any(self.variances < self.variance_floor - 1e-12):
            raise HmmError(f"variance below floor {self.variance_floor}")
        total_init = logsumexp(self.init_logp)
        if abs(np.exp(total_init) - 1.0) > tol:
            raise HmmError(f"initial probabilities sum to {np.exp(total_init)}, expected 1")
        for i in range(n):
            row = self.trans_logp[i, self.topology[i]]
            mass = float(np.exp(logsumexp(row))) if row.size else 0.0
            fin = float(self.final_logp[i])
            if _is_exit_mass(fin):
                mass += math.exp(fin)
            if row.size == 0 and fin == LOG_ZERO:
                raise HmmError(f"state {i} has no outgoing transition and may not terminate")
            if row.size and abs(mass - 1.0) > tol:
                raise HmmError(f"state {i} outgoing mass sums to {mass}, expected 1")

    def emission_logpdf(self, frames: np.ndarray) -> np.ndarray:
        """Log density of every frame under every state: (T, N)."""
        frames = np.asarray(frames, dtype=np.float64)
        if frames.shape[1] != self.dims:
            raise DimensionMismatch(
                f"observation dim {frames.shape[1]} != model dim {self.dims}")
        inv_var = 1.0 / self.variances
        # (x - mu)^2 / var expanded into three matmul-friendly terms
        quad = (frames ** 2) @ inv_var.T
        quad -= 2.0 * frames @ (self.means * inv_var).T
        quad += np.sum(self.means ** 2 * inv_var, axis=1)
        const = self.dims * math.log(2.0 * math.pi) + np.sum(np.log(self.variances), axis=1)
        return -0.5 * (quad + const)

    def copy(self) -> "Hmm":
        return Hmm(
            init_logp=self.init_logp.copy(),
            trans_logp=self.trans_logp.copy(),
            means=self.means.copy(),
            variances=self.variances.copy(),
            topology=self.topology.copy(),
            final_logp=self.final_logp.copy(),
            variance_floor=self.variance_floor,
        )


@dataclass
class TrainConfig:
    max_iters: int = 20
    loglik_rel_tol: float = 1e-5
    variance_floor: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise HmmError("max_iters must be >= 1")
        if self.variance_floor <= 0:
            raise HmmError("variance_floor must be positive")


@dataclass
class TrainResult:
    model: Hmm
    loglik_history: list[float]
    # human-readable notes, e.g. states that received no occupancy and
    # kept their previous parameters
    report: list[str] = field(default_factory=list)


def make_left_to_right(means, variances, self_loop: float = 0.6,
                       variance_floor: float = 1e-3) -> Hmm:
    """Strict left-to-right chain with self-loops and exit mass from the
    last state, the shape used for phone models."""
    means = np.atleast_2d(_col(means))
    variances = np.atleast_2d(_col(variances))
    n = means.shape[0]
    if not 0.0 < self_loop < 1.0:
        raise HmmError("self_loop must lie in (0, 1)")
    advance = 1.0 - self_loop
    topology = np.zeros((n, n), dtype=bool)
    trans = np.full((n, n), LOG_ZERO)
    for i in range(n):
        topology[i, i] = True
        trans[i, i] = math.log(self_loop)
        if i + 1 < n:
            topology[i, i + 1] = True
            trans[i, i + 1] = math.log(advance)
    init = np.full(n, LOG_ZERO)
    init[0] = 0.0
    final = np.full(n, LOG_ZERO)
    final[n - 1] = math.log(advance)
    return Hmm(init, trans, means, variances, topology, final, variance_floor)


def make_free_end(init_probs, trans_probs, means, variances,
                  variance_floor: float = 1e-3) -> Hmm:
    """Ergodic model whose paths may end in any state at no cost."""
    init = np.log(np.maximum(_col(init_probs), 0.0),
                  out=np.full(len(init_probs), LOG_ZERO),
                  where=_col(init_probs) > 0)
    trans_probs = _col(trans_probs)
    topology = trans_probs > 0
    trans = np.full(trans_probs.shape, LOG_ZERO)
    trans[topology] = np.log(trans_probs[topology])
    n = trans.shape[0]
    return Hmm(init, trans, means, variances, topology,
               np.zeros(n), variance_floor)


def concat_models(models: Sequence[Hmm]) -> Hmm:
    """Join models in sequence.

    Internal parameters are preserved verbatim.  Every donor state with
    exit mass is wired to the next model's initial distribution, the
    cross link carrying exactly the donor's exit probability.
    """
    if not models:
        raise HmmError("cannot concatenate zero models")
    dims = models[0].dims
    floor = min(m.variance_floor for m in models)
    sizes = [m.num_states for m in models]
    total = sum(sizes)
    offsets = np.cumsum([0] + sizes[:-1])
    init = np.full(total, LOG_ZERO)
    trans = np.full((total, total), LOG_ZERO)
    topology = np.zeros((total, total), dtype=bool)
    final = np.full(total, LOG_ZERO)
    means = np.vstack([m.means for m in models])
    variances = np.vstack([m.variances for m in models])
    for k, model in enumerate(models):
        if model.dims != dims:
            raise DimensionMismatch("all models must share the feature dimension")
        o = offsets[k]
        n = sizes[k]
        trans[o:o + n, o:o + n] = model.trans_logp
        topology[o:o + n, o:o + n] = model.topology
        if k == 0:
            init[o:o + n] = model.init_logp
        if k + 1 < len(models):
            nxt = models[k + 1]
            no = offsets[k + 1]
            for s in range(n):
                exit_mass = float(model.final_logp[s])
                if exit_mass == LOG_ZERO:
                    continue
                for t in range(nxt.num_states):
                    entry = float(nxt.init_logp[t])
                    if entry == LOG_ZERO:
                        continue
                    trans[o + s, no + t] = exit_mass + entry
                    topology[o + s, no + t] = True
        else:
            final[o:o + n] = model.final_logp
    return Hmm(init, trans, means, variances, topology, final, floor)


def forward_loglik(model: Hmm, obs) -> float:
    """Total log-probability of the observations, summed over every
    path the topology and termination weights permit."""
    frames = _frames(obs)
    logb = model.emission_logpdf(frames)
    with np.errstate(invalid="ignore"):
        alpha = model.init_logp + logb[0]
        for t in range(1, frames.shape[0]):
            alpha = logsumexp(alpha[:, None] + model.trans_logp, axis=0) + logb[t]
        return float(logsumexp(alpha + model.final_logp))


def viterbi(model: Hmm, obs) -> tuple[list[int] | None, float]:
    """Best state path and its log-probability.

    Ties are broken toward the lowest state index at every backtrack
    step.  Returns (None, -inf) when no legal path exists.
    """
    frames = _frames(obs)
    T = frames.shape[0]
    n = model.num_states
    logb = model.emission_logpdf(frames)
    delta = model.init_logp + logb[0]
    back = np.zeros((T, n), dtype=np.int64)
    with np.errstate(invalid="ignore"):
        for t in range(1, T):
            scores = delta[:, None] + model.trans_logp
            best_prev = np.argmax(scores, axis=0)  # first max = lowest index
            delta = scores[best_prev, np.arange(n)] + logb[t]
            back[t] = best_prev
        total = delta + model.final_logp
    end_state = int(np.argmax(total))
    best = float(total[end_state])
    if best == LOG_ZERO or np.isnan(best):
        return None, LOG_ZERO
    path = [end_state]
    for t in range(T - 1, 0, -1):
        path.append(int(back[t, path[-1]]))
    path.reverse()
    return path, best


def _posteriors(model: Hmm, frames: np.ndarray):
    """Forward-backward pass: (loglik, gamma, xi_sum, gamma_first, gamma_last).

    gamma is (T, N) in probability domain, xi_sum is the (N, N) expected
    transition count matrix summed over time.
    """
    T = frames.shape[0]
    n = model.num_states
    logb = model.emission_logpdf(frames)
    alpha = np.empty((T, n))
    beta = np.empty((T, n))
    with np.errstate(invalid="ignore"):
        alpha[0] = model.init_logp + logb[0]
        for t in range(1, T):
            alpha[t] = logsumexp(alpha[t - 1][:, None] + model.trans_logp, axis=0) + logb[t]
        beta[T - 1] = model.final_logp
        for t in range(T - 2, -1, -1):
            beta[t] = logsumexp(model.trans_logp + (logb[t + 1] + beta[t + 1])[None, :], axis=1)
        loglik = float(logsumexp(alpha[T - 1] + model.final_logp))
        if loglik == LOG_ZERO:
            return loglik, None, None
        gamma = np.exp(alpha + beta - loglik)
        xi_sum = np.zeros((n, n))
        for t in range(T - 1):
            log_xi = (alpha[t][:, None] + model.trans_logp
                      + (logb[t + 1] + beta[t + 1])[None, :] - loglik)
            xi_sum += np.exp(log_xi)
    return loglik, gamma, xi_sum


def baum_welch(model: Hmm, data: Sequence, cfg: TrainConfig | None = None) -> TrainResult:
    """Expectation-maximisation re-estimation over a set of sequences.

    Accumulation runs in a fixed order (the order sequences are given,
    ties on nothing) so results are reproducible.  A state with zero
    total occupancy keeps its previous parameters and is noted in the
    report instead of raising.
    """
    cfg = cfg or TrainConfig()
    if not data:
        raise HmmError("training data set is empty")
    frames_list = [_frames(seq) for seq in data]
    dims = frames_list[0].shape[1]
    for f in frames_list:
        if f.shape[1] != dims:
            raise DimensionMismatch("training sequences disagree on feature dimension")
    current = model.copy()
    current.variance_floor = cfg.variance_floor
    history: list[float] = []
    report: list[str] = []
    n = current.num_states
    exit_mass_states = np.array([_is_exit_mass(v) for v in current.final_logp])

    for iteration in range(cfg.max_iters):
        init_acc = np.zeros(n)
        trans_acc = np.zeros((n, n))
        exit_acc = np.zeros(n)
        trans_den = np.zeros(n)
        occ = np.zeros(n)
        mean_acc = np.zeros((n, dims))
        sq_acc = np.zeros((n, dims))
        total_ll = 0.0
        skipped = 0
        for frames in frames_list:
            loglik, gamma, xi_sum = _posteriors(current, frames)
            if gamma is None:
                skipped += 1
                continue
            total_ll += loglik
            init_acc += gamma[0]
            trans_acc += xi_sum
            trans_den += gamma[:-1].sum(axis=0)
            exit_acc += gamma[-1]
            trans_den += np.where(exit_mass_states, gamma[-1], 0.0)
            occ += gamma.sum(axis=0)
            mean_acc += gamma.T @ frames
            sq_acc += gamma.T @ (frames ** 2)
        if skipped == len(frames_list):
            report.append(f"iter {iteration}: no sequence has a legal path; stopping")
            break
        history.append(total_ll)

        new = current.copy()
        # initial distribution
        init_total = init_acc.sum()
        if init_total > 0:
            with np.errstate(divide="ignore"):
                new.init_logp = np.log(init_acc / init_total)
        # transitions and exit mass
        for i in range(n):
            if trans_den[i] <= 1e-12:
                if occ[i] <= 1e-12:
                    report.append(f"iter {iteration}: state {i} received no occupancy, kept previous parameters")
                continue
            row = np.full(n, LOG_ZERO)
            allowed = current.topology[i]
            with np.errstate(divide="ignore"):
                row[allowed] = np.log(trans_acc[i, allowed] / trans_den[i])
            new.trans_logp[i] = row
            if exit_mass_states[i]:
                # keep re-estimated exit mass strictly below 1 so it stays
                # distinguishable from the cost-free termination marker 0.0
                exit_p = min(exit_acc[i] / trans_den[i], 1.0 - 1e-12)
                new.final_logp[i] = math.log(exit_p) if exit_p > 0.0 else LOG_ZERO
        # emissions
        for i in range(n):
            if occ[i] <= 1e-12:
                continue
            mu = mean_acc[i] / occ[i]
            var = sq_acc[i] / occ[i] - mu ** 2
            new.means[i] = mu
            new.variances[i] = np.maximum(var, cfg.variance_floor)
        current = new

        if len(history) >= 2:
            prev, last = history[-2], history[-1]
            if abs(prev) > 0 and (last - prev) / abs(prev) < cfg.loglik_rel_tol:
                break
    current.validate()
    return TrainResult(model=current, loglik_history=history, report=report)


def flat_start(num_states: int, data: Sequence, self_loop: float = 0.5,
               variance_floor: float = 1e-3) -> Hmm:
    """Left-to-right prototype whose every state carries the global data
    mean and variance (floored)."""
    stacked = np.vstack([_frames(seq) for seq in data])
    mean = stacked.mean(axis=0)
    var = np.maximum(stacked.var(axis=0), variance_floor)
    means = np.tile(mean, (num_states, 1))
    variances = np.tile(var, (num_states, 1))
    return make_left_to_right(means, variances, self_loop, variance_floor)


def init_from_labels(num_states: int, data: Sequence, labels: Sequence[Sequence[int]],
                     variance_floor: float = 1e-3) -> Hmm:
    """Initialise a left-to-right model from per-frame state labels, the
    segmented-and-labelled alternative to flat start."""
    if len(data) != len(labels):
        raise HmmError("data and label lists must have equal length")
    dims = _frames(data[0]).shape[1]
    sums = np.zeros((num_states, dims))
    sqs = np.zeros((num_states, dims))
    counts = np.zeros(num_states)
    loops = np.zeros(num_states)
    advances = np.zeros(num_states)
    for seq, lab in zip(data, labels):
        frames = _frames(seq)
        lab = list(lab)
        if len(lab) != frames.shape[0]:
            raise HmmError("label length must match frame count")
        for t, s in enumerate(lab):
            if not 0 <= s < num_states:
                raise HmmError(f"label {s} outside state range")
            sums[s] += frames[t]
            sqs[s] += frames[t] ** 2
            counts[s] += 1
            if t + 1 < len(lab):
                if lab[t + 1] == s:
                    loops[s] += 1
                elif lab[t + 1] == s + 1:
                    advances[s] += 1
                else:
                    raise HmmError("labels must advance by at most one state per frame")
    if np.any(counts == 0):
        raise HmmError("every state needs at least one labelled frame")
    means = sums / counts[:, None]
    variances = np.maximum(sqs / counts[:, None] - means ** 2, variance_floor)
    model = make_left_to_right(means, variances, 0.5, variance_floor)
    for i in range(num_states):
        seen = loops[i] + advances[i]
        if seen == 0:
            continue
        p_loop = min(max(loops[i] / seen, 0.05), 0.95)
        with np.errstate(divide="ignore"):
            model.trans_logp[i, i] = math.log(p_loop)
            if i + 1 < num_states:
                model.trans_logp[i, i + 1] = math.log(1.0 - p_loop)
            else:
                model.final_logp[i] = math.log(1.0 - p_loop)
    return model


def _length_feasible(model: Hmm, length: int) -> np.ndarray:
    """reach[t, i]: standing in state i at time t (0-based) can legally
    finish after exactly `length` frames."""
    n = model.num_states
    reach = np.zeros((length, n), dtype=bool)
    reach[length - 1] = model.final_logp > LOG_ZERO
    for t in range(length - 2, -1, -1):
        reach[t] = model.topology @ reach[t + 1] > 0
    return reach


def sample_with_states(model: Hmm, length: int, seed) -> tuple[np.ndarray, list[int]]:
    """Draw observations and the underlying state path, conditioned on
    the path being legal (able to terminate) at exactly `length` frames."""
    if length < 1:
        raise HmmError("sample length must be >= 1")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    reach = _length_feasible(model, length)
    start_mass = np.where(reach[0], np.exp(model.init_logp), 0.0)
    if start_mass.sum() <= 0:
        raise HmmError(f"model has no legal path of length {length}")
    states = [int(rng.choice(model.num_states, p=start_mass / start_mass.sum()))]
    for t in range(1, length):
        row = np.where(reach[t], np.exp(model.trans_logp[states[-1]]), 0.0)
        total = row.sum()
        if total <= 0:
            raise HmmError(f"model has no legal path of length {length}")
        states.append(int(rng.choice(model.num_states, p=row / total)))
    obs = model.means[states] + rng.standard_normal((length, model.dims)) * np.sqrt(model.variances[states])
    return obs, states


def sample(model: Hmm, length: int, seed):
    """Sampled observations as a FeatureSequence; deterministic for a
    fixed seed."""
    from .audio import FeatureSequence
    obs, _ = sample_with_states(model, length, seed)
    return FeatureSequence(frames=obs, frame_hop_ms=10,
                           source_id=f"sample:{seed!r}")


def sample_natural(model: Hmm, rng: np.random.Generator, max_len: int = 200) -> tuple[np.ndarray, list[int]]:
    """Sample following the exit mass until the model terminates on its
    own (or max_len is reached and termination is forced)."""
    states: list[int] = []
    mass = np.exp(model.init_logp)
    state = int(rng.choice(model.num_states, p=mass / mass.sum()))
    while True:
        states.append(state)
        fin = float(model.final_logp[state])
        p_exit = math.exp(fin) if _is_exit_mass(fin) else (1.0 if fin == 0.0 else 0.0)
        if len(states) >= max_len:
            break
        if p_exit > 0 and rng.random() < p_exit:
            break
        row = np.exp(model.trans_logp[state])
        total = row.sum()
        if total <= 0:
            break
        state = int(rng.choice(model.num_states, p=row / total))
    obs = model.means[states] + rng.standard_normal((len(states), model.dims)) * np.sqrt(model.variances[states])
    return obs, states


def _fmt_log10(values: np.ndarray) -> str:
    out = []
    for v in values:
        out.append("-inf" if v == LOG_ZERO else repr(float(v) / math.log(10.0)))
    return " ".join(out)


def _parse_log10(tokens: list[str]) -> np.ndarray:
    vals = []
    for tok in tokens:
        vals.append(LOG_ZERO if tok == "-inf" else float(tok) * math.log(10.0))
    return np.array(vals)


def save_model(model: Hmm, path) -> None:
    """Versioned text format; log-probabilities stored base 10 with an
    explicit -inf literal."""
    lines = [f"#hmm v1 states={model.num_states} dims={model.dims} floor={model.variance_floor!r}"]
    lines.append("initial " + _fmt_log10(model.init_logp))
    for i in range(model.num_states):
        lines.append("trans " + _fmt_log10(model.trans_logp[i]))
    lines.append("final " + _fmt_log10(model.final_logp))
    for i in range(model.num_states):
        lines.append("mean " + " ".join(repr(float(v)) for v in model.means[i]))
        lines.append("var " + " ".join(repr(float(v)) for v in model.variances[i]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path) -> Hmm:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    header = lines[0]
    if not header.startswith("#hmm v1"):
        raise HmmError(f"unsupported model header: {header}")
    fields = dict(part.split("=") for part in header.split()[2:])
    n = int(fields["states"])
    floor = float(fields.get("floor", 1e-3))
    body = lines[1:]
    init = _parse_log10(body[0].split()[1:])
    trans = np.vstack([_parse_log10(body[1 + i].split()[1:]) for i in range(n)])
    final = _parse_log10(body[1 + n].split()[1:])
    means, variances = [], []
    for i in range(n):
        means.append([float(v) for v in body[2 + n + 2 * i].split()[1:]])
        variances.append([float(v) for v in body[3 + n + 2 * i].split()[1:]])
    model = Hmm(init, trans, np.array(means), np.array(variances),
                topology=trans > LOG_ZERO, final_logp=final, variance_floor=floor)
    model.validate()
    return model
