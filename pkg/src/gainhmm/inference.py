"""Forward-backward posteriors and the two baseline decoders.

Forward-backward runs with per-position scaling constants (exact
posteriors, no logs in the inner loop); Viterbi runs in log space. Both
accept dense or sparse transition matrices and are pure functions of
immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .model import Annotation, ZeroLikelihoodError


@dataclass(frozen=True)
class PosteriorSet:
    """Color-level posterior quantities of one sequence under one model.

    color_post[j, c] is the posterior probability that position j carries
    color c. pair_post[k, c, c2] is the joint posterior of colors (c, c2)
    at positions (k+1, k+2), i.e. row k describes the gap after position
    k+1 (1-based). Off-diagonal entries of pair_post are the boundary
    posteriors; each pair_post row sums to 1 over all ordered pairs.
    """

    length: int
    log_likelihood: float
    color_post: np.ndarray
    pair_post: np.ndarray

    @property
    def n_colors(self):
        return self.color_post.shape[1]

    def boundary_post(self, k, c_from, c_to):
        """Posterior of a boundary with ordered pair (c_from, c_to) at gap k (1-based)."""
        if c_from == c_to:
            raise ValueError("a boundary needs two different colors")
        return float(self.pair_post[k - 1, c_from, c_to])


def _scaled_forward_backward(hmm, obs):
    """Scaled forward/backward passes.

    Returns (alphahat, betahat, scales) where alphahat[t] is the filtered
    state distribution, scales[t] the per-position normalizers with
    log Pr(X) = sum(log scales), and alphahat[t] * betahat[t] the smoothed
    state posteriors.
    """
    t_mat = hmm.transitions
    t_t = t_mat.T if isinstance(t_mat, np.ndarray) else sparse.csr_array(t_mat.T)
    emis = hmm.emissions
    n, n_states = obs.size, hmm.n_states

    eseq = emis[:, obs].T  # (n, S)
    alphahat = np.empty((n, n_states))
    scales = np.empty(n)

    a = hmm.initial * eseq[0]
    scales[0] = a.sum()
    if scales[0] <= 0.0:
        raise ZeroLikelihoodError("sequence impossible under model at position 1")
    alphahat[0] = a / scales[0]
    for t in range(1, n):
        a = (t_t @ alphahat[t - 1]) * eseq[t]
        scales[t] = a.sum()
        if scales[t] <= 0.0:
            raise ZeroLikelihoodError(f"sequence impossible under model at position {t + 1}")
        alphahat[t] = a / scales[t]

    betahat = np.empty((n, n_states))
    betahat[n - 1] = 1.0
    for t in range(n - 2, -1, -1):
        betahat[t] = (t_mat @ (eseq[t + 1] * betahat[t + 1])) / scales[t + 1]

    return alphahat, betahat, scales


def _color_selectors(hmm):
    """Per-color state index arrays, as cheap slices when contiguous."""
    out = []
    for c in range(hmm.n_colors):
        idx = hmm.states_of_color(c)
        if idx.size and idx[-1] - idx[0] + 1 == idx.size:
            out.append(slice(int(idx[0]), int(idx[-1]) + 1))
        else:
            out.append(idx)
    return out


def forward_backward(hmm, seq):
    """Posterior color and color-pair probabilities of `seq` under `hmm`.

    Raises ValueError on symbols outside the model alphabet and
    ZeroLikelihoodError when the sequence has zero probability.
    """
    obs = hmm.encode(seq)
    alphahat, betahat, scales = _scaled_forward_backward(hmm, obs)
    n = obs.size
    n_colors = hmm.n_colors

    ind = hmm.color_indicator()
    color_post = (alphahat * betahat) @ ind

    # pair_post[k, c, c2] = sum_{u in c, v in c2} alphahat[k,u] T[u,v] w[k,v]
    # with w[k, v] = emis[v, obs[k+1]] * betahat[k+1, v] / scales[k+1].
    pair_post = np.zeros((n - 1, n_colors, n_colors))
    if n > 1:
        sel = _color_selectors(hmm)
        w = hmm.emissions[:, obs[1:]].T * betahat[1:] / scales[1:, None]
        t_mat = hmm.transitions
        t_csc = t_mat.tocsc() if sparse.issparse(t_mat) else None
        for c2 in range(n_colors):
            cols = sel[c2]
            if t_csc is not None:
                sub = t_csc[:, cols]
                r = (sub @ np.ascontiguousarray(w[:, cols].T)).T  # (n-1, S)
            else:
                r = w[:, cols] @ t_mat[:, cols].T
            weighted = alphahat[:-1] * r
            for c1 in range(n_colors):
                pair_post[:, c1, c2] = weighted[:, sel[c1]].sum(axis=1)

    return PosteriorSet(
        length=n,
        log_likelihood=float(np.log(scales).sum()),
        color_post=color_post,
        pair_post=pair_post,
    )


def viterbi_decode(hmm, seq):
    """Most probable state path, reported as its coloring.

    Returns (annotation, log probability of the best path). DP ties break
    toward the smallest state index. The forward pass keeps per-position
    scores only; the traceback re-derives each predecessor by argmax over
    the stored scores, which reproduces the forward tie-break exactly.
    """
    obs = hmm.encode(seq)
    n, n_states = obs.size, hmm.n_states
    with np.errstate(divide="ignore"):
        log_eseq = np.log(hmm.emissions[:, obs].T)
        log_start = np.log(hmm.initial)

    t_mat = hmm.transitions
    scores = np.empty((n, n_states))
    scores[0] = log_start + log_eseq[0]
    if sparse.issparse(t_mat):
        # rows of the transpose list each state's predecessors in
        # ascending order, so first-max ties pick the smallest index
        t_t = sparse.csr_array(t_mat.T)
        t_t.sort_indices()
        indptr, indices = t_t.indptr, t_t.indices
        with np.errstate(divide="ignore"):
            log_data = np.log(t_t.data)
        nonempty = np.diff(indptr) > 0
        starts = np.minimum(indptr[:-1], max(t_t.nnz - 1, 0))
        for t in range(1, n):
            best = np.full(n_states, -np.inf)
            if indices.size:
                cand = scores[t - 1][indices] + log_data
                seg = np.maximum.reduceat(cand, starts)
                best[nonempty] = seg[nonempty]
            scores[t] = best + log_eseq[t]

        def predecessor(t, state):
            lo, hi = indptr[state], indptr[state + 1]
            cand = scores[t - 1][indices[lo:hi]] + log_data[lo:hi]
            return int(indices[lo:hi][np.argmax(cand)])
    else:
        with np.errstate(divide="ignore"):
            log_t = np.log(t_mat)
        for t in range(1, n):
            scores[t] = np.max(scores[t - 1][:, None] + log_t, axis=0) + log_eseq[t]

        def predecessor(t, state):
            return int(np.argmax(scores[t - 1] + log_t[:, state]))

    best_end = int(np.argmax(scores[n - 1]))
    best_logp = float(scores[n - 1, best_end])
    if best_logp == -np.inf:
        raise ZeroLikelihoodError("sequence impossible under model")

    path = np.empty(n, dtype=np.int64)
    path[n - 1] = best_end
    for t in range(n - 1, 0, -1):
        path[t - 1] = predecessor(t, path[t])
    return Annotation(hmm.state_colors[path]), best_logp


def posterior_decode(post):
    """Coloring that picks the highest-posterior color at every position.

    Ties break toward the smallest color id. The result maximizes the
    expected number of correctly colored positions but may be infeasible
    under the model's ColorGraph; check with graph.allows() if that
    matters downstream.
    """
    return Annotation(np.argmax(post.color_post, axis=1))
