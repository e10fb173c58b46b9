"""Stochastic shortest path instances, value iteration, policy evaluation.

States are 0..n-1 plus an implicit absorbing target; each transition row may
sum to less than one, the residual mass being the probability of reaching the
target directly. Every action belongs to exactly one state and actions are
stored grouped by owning state, which keeps the Bellman sweep a sparse
matrix-vector product followed by a segmented minimum.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

__all__ = [
    "SSPInstance",
    "NoConvergence",
    "ImproperPolicy",
    "value_iteration",
    "evaluate_policy",
    "check_proper",
]

_PROB_TOL = 1e-9


class NoConvergence(RuntimeError):
    def __init__(self, residual: float, iterations: int):
        super().__init__(f"value iteration residual {residual:.3e} after "
                         f"{iterations} iterations")
        self.residual = residual
        self.iterations = iterations


class ImproperPolicy(RuntimeError):
    pass


class SSPInstance:
    """Sparse SSP model.

    Parameters
    ----------
    n_states : number of transient states (target excluded).
    action_state : (m,) owning state per action, non-decreasing.
    costs : (m,) per-action costs, finite.
    indptr, indices, probs : CSR-style rows; ``indices[indptr[a]:indptr[a+1]]``
        are destination states of action ``a`` with probabilities ``probs[...]``.
        Row sums may be below 1; the residual mass goes to the target.
    """

    def __init__(self, n_states, action_state, costs, indptr, indices, probs,
                 validate=True):
        self.n_states = int(n_states)
        self.action_state = np.asarray(action_state, dtype=np.int64)
        self.costs = np.asarray(costs, dtype=np.float64)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.probs = np.asarray(probs, dtype=np.float64)
        self.n_actions = len(self.costs)
        if validate:
            self._validate()
        self.group_ptr = np.searchsorted(
            self.action_state, np.arange(self.n_states + 1))
        self._P = None

    def _validate(self):
        m = self.n_actions
        if self.action_state.shape != (m,) or self.indptr.shape != (m + 1,):
            raise ValueError("inconsistent action array lengths")
        if m and np.any(np.diff(self.action_state) < 0):
            raise ValueError("actions must be grouped by owning state")
        if np.any((self.action_state < 0) | (self.action_state >= self.n_states)):
            raise ValueError("action owner out of range")
        counts = np.bincount(self.action_state, minlength=self.n_states)
        if np.any(counts == 0):
            raise ValueError("every state needs at least one action")
        if not np.all(np.isfinite(self.costs)):
            raise ValueError("costs must be finite")
        if np.any(self.probs < -_PROB_TOL):
            raise ValueError("negative transition probability")
        if len(self.indices) and np.any(
                (self.indices < 0) | (self.indices >= self.n_states)):
            raise ValueError("transition destination out of range")
        csum = np.concatenate([[0.0], np.cumsum(self.probs)])
        row_sums = csum[self.indptr[1:]] - csum[self.indptr[:-1]]
        if np.any(row_sums > 1.0 + _PROB_TOL):
            raise ValueError("transition row exceeds probability one")

    @property
    def P(self) -> sp.csr_matrix:
        if self._P is None:
            self._P = sp.csr_matrix(
                (self.probs, self.indices, self.indptr),
                shape=(self.n_actions, self.n_states))
        return self._P

    def target_mass(self) -> np.ndarray:
        """Per-action probability of transitioning straight to the target."""
        sums = np.asarray(self.P.sum(axis=1)).ravel()
        return np.clip(1.0 - sums, 0.0, 1.0)

    def actions_of(self, state: int) -> range:
        return range(self.group_ptr[state], self.group_ptr[state + 1])

    @classmethod
    def from_records(cls, n_states, records):
        """Build from ``(state, cost, [(dest, prob), ...])`` tuples."""
        order = sorted(range(len(records)), key=lambda i: records[i][0])
        if order != list(range(len(records))):
            raise ValueError("records must be pre-sorted by state")
        action_state = np.array([r[0] for r in records], dtype=np.int64)
        costs = np.array([r[1] for r in records], dtype=np.float64)
        indptr = np.zeros(len(records) + 1, dtype=np.int64)
        indices, probs = [], []
        for i, (_, _, row) in enumerate(records):
            for dest, p in row:
                indices.append(dest)
                probs.append(p)
            indptr[i + 1] = len(indices)
        return cls(n_states, action_state, costs, indptr,
                   np.array(indices, dtype=np.int64),
                   np.array(probs, dtype=np.float64))

    def save(self, path) -> None:
        np.savez_compressed(
            path, n_states=self.n_states, action_state=self.action_state,
            costs=self.costs, indptr=self.indptr, indices=self.indices,
            probs=self.probs)

    @classmethod
    def load(cls, path) -> "SSPInstance":
        with np.load(path) as data:
            return cls(int(data["n_states"]), data["action_state"],
                       data["costs"], data["indptr"], data["indices"],
                       data["probs"])


def _segment_min(values: np.ndarray, group_ptr: np.ndarray) -> np.ndarray:
    return np.minimum.reduceat(values, group_ptr[:-1])


def value_iteration(instance: SSPInstance, epsilon: float = 1e-4,
                    max_iters: int = 10_000):
    """Bellman iteration from the zero vector; Jacobi sweeps.

    Returns ``(values, policy, iterations)`` where ``policy[s]`` is the
    greedy action (lowest index on ties). Raises :class:`NoConvergence` when
    the sup-norm residual is still at or above ``epsilon`` after
    ``max_iters`` sweeps.
    """
    P = instance.P
    costs = instance.costs
    gp = instance.group_ptr
    values = np.zeros(instance.n_states)
    iterations = 0
    residual = np.inf
    for iterations in range(1, max_iters + 1):
        q = costs + P @ values
        new_values = _segment_min(q, gp)
        residual = float(np.max(np.abs(new_values - values))) \
            if instance.n_states else 0.0
        values = new_values
        if residual < epsilon:
            break
    else:
        raise NoConvergence(residual, max_iters)

    q = costs + P @ values
    best = _segment_min(q, gp)
    is_best = q <= best[instance.action_state]
    candidates = np.where(is_best, np.arange(instance.n_actions),
                          instance.n_actions)
    policy = np.minimum.reduceat(candidates, gp[:-1])
    return values, policy, iterations


def check_proper(instance: SSPInstance, policy: np.ndarray) -> bool:
    """True iff the target is reachable from every state under ``policy``."""
    policy = np.asarray(policy, dtype=np.int64)
    Q = instance.P[policy]
    direct = np.asarray(Q.sum(axis=1)).ravel() < 1.0 - 1e-12
    reached = direct.copy()
    for _ in range(instance.n_states):
        spread = (Q @ reached.astype(np.float64)) > 0.0
        new = reached | spread
        if np.array_equal(new, reached):
            break
        reached = new
    return bool(np.all(reached))


def evaluate_policy(instance: SSPInstance, policy: np.ndarray) -> np.ndarray:
    """Expected cost to the target per state: solves (I - Q) v = c.

    ``Q`` is the policy-restricted transition matrix over transient states
    (the fundamental-matrix system solved sparsely, without inverting).
    """
    policy = np.asarray(policy, dtype=np.int64)
    if policy.shape != (instance.n_states,):
        raise ValueError("policy must assign one action per state")
    owners = instance.action_state[policy]
    if not np.array_equal(owners, np.arange(instance.n_states)):
        raise ValueError("policy assigns an action of a different state")
    if not check_proper(instance, policy):
        raise ImproperPolicy("policy does not reach the target from every state")
    Q = instance.P[policy].tocsc()
    A = sp.identity(instance.n_states, format="csc") - Q
    c = instance.costs[policy]
    values = spla.spsolve(A, c)
    values = np.atleast_1d(values)
    if not np.all(np.isfinite(values)):
        raise ImproperPolicy("policy system is singular to working precision")
    return values
