# coding:utf8
"""
The protocol state machine.

One round: selection -> per-client train / estimate -> aggregation ->
x_{t+1} = x_t + Delta_t. Per-client work may run on a thread pool; every
random draw comes from a stream keyed by (seed, client, round) and results
are reduced in ascending client id, so the worker count never changes a bit.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import tqdm

from ccfedsim import setting
from ccfedsim.data.budget import BudgetAssignment
from ccfedsim.exceptions import DivergenceError, NonFiniteError
from ccfedsim.fl import method as M
from ccfedsim.fl.aggregate import ALL_SELECTED, RECEIVED_ONLY, aggregate, fednova_aggregate, normalize_update
from ccfedsim.fl.client import ClientRecord, GlobalState, HistoryEntry, RoundOutcome, lookup_history, store_history
from ccfedsim.fl.estimate import estimate_combined, estimate_strategy2, estimate_strategy3
from ccfedsim.fl.local import local_train
from ccfedsim.fl.schedule import ESTIMATE, TRAIN, decide_participation, select_clients, synchronized_decision
from ccfedsim.objectives import Objective
from ccfedsim.params import ParamVec
from ccfedsim import util
from ccfedsim.utils import log
from ccfedsim.utils import rng as rngs

logger = log.get_logger(__file__)

# participation trace codes
NOT_SELECTED = 0
SKIPPED = 1
TRAINED = 2


@dataclass(frozen=True)
class Hyper(object):
    K: int
    eta: float
    batch_size: int
    ratio: float = 1.0
    divergence_limit: float = setting.divergence_limit


@dataclass(frozen=True)
class _ClientWork(object):
    client: int
    action: str
    delta: Optional[ParamVec]
    local_model: Optional[ParamVec] = None
    steps: int = 0


def fednova_steps(p: float, K: int) -> int:
    """a budget p realised as fewer local steps"""
    return max(1, int(round(p * K)))


def make_clients(budgets: BudgetAssignment, spec: M.MethodSpec) -> List[ClientRecord]:
    return [ClientRecord(id=i, p=p, history_on_server=spec.history_on_server(i)) for i, p in enumerate(budgets.p)]


def set_dropout_quotas(clients: Sequence[ClientRecord], rounds: int, ratio: float):
    """quota = round(p_i * expected selections over the run)"""
    n = len(clients)
    expected = rounds * max(1, int(round(ratio * n))) / n
    for c in clients:
        c.quota = int(round(c.p * expected))


def _decide(spec: M.MethodSpec, client: ClientRecord, seed: int, t: int) -> str:
    if spec.method in (M.FEDAVG_FULL, M.FEDAVG_DROPOUT, M.FEDNOVA):
        client.selections += 1
        return TRAIN
    if spec.method == M.FEDOPT_SYNC:
        client.selections += 1
        return synchronized_decision(t, spec.W)
    return decide_participation(client, spec.schedule, rngs.stream(seed, rngs.DECIDE, client.id, t))


def run_round(
    state: GlobalState,
    spec: M.MethodSpec,
    clients: Sequence[ClientRecord],
    objectives: Sequence[Objective],
    hyper: Hyper,
    seed: int,
    executor: Optional[ThreadPoolExecutor] = None,
    force: Optional[str] = None,
) -> RoundOutcome:
    """
        Execute one round and move ``state`` to x_{t+1}
    Args:
        state: mutated in place (x, t, server-side history)
        spec:
        clients: mutated in place (counters, client-side history)
        objectives: one per client, same order as clients
        hyper: K, eta, batch_size, ratio
        seed: run seed, keys every random stream
        executor: optional pool for per-client work
        force: TRAIN / ESTIMATE for every selected client, overrides the schedule

    Returns:
        RoundOutcome

    """
    t = state.t
    x_t = state.x
    n = len(clients)

    pool = None
    if spec.method == M.FEDAVG_DROPOUT:
        pool = [c.id for c in clients if not c.exhausted]
    selected = select_clients(n, hyper.ratio, rngs.stream(seed, rngs.SELECT, t), pool)

    plan: Dict[int, str] = {}
    for i in sorted(selected):
        if force is not None:
            clients[i].selections += 1
            plan[i] = force
        else:
            plan[i] = _decide(spec, clients[i], seed, t)

    def _work(i: int) -> _ClientWork:
        client = clients[i]
        if plan[i] == TRAIN:
            K_i = fednova_steps(client.p, hyper.K) if spec.method == M.FEDNOVA else hyper.K
            delta, local_model = local_train(
                x_t,
                objectives[i],
                K_i,
                hyper.eta,
                hyper.batch_size,
                rngs.stream(seed, rngs.TRAIN, i, t),
                round_idx=t,
                client_id=i,
                limit=hyper.divergence_limit,
            )
            return _ClientWork(i, TRAIN, delta, local_model, K_i)
        if spec.method == M.STRATEGY1:
            return _ClientWork(i, ESTIMATE, None)
        history = lookup_history(client, state)
        if spec.method == M.STRATEGY2:
            estimate = estimate_strategy2(history, x_t)
        elif spec.method == M.CC_FEDAVG_COMBINED:
            estimate = estimate_combined(history, x_t, t, spec.tau)
        else:
            estimate = estimate_strategy3(history, x_t.dim)
        return _ClientWork(i, ESTIMATE, estimate)

    ids = sorted(selected)
    try:
        if executor is not None and len(ids) > 1:
            works = list(executor.map(_work, ids))
        else:
            works = [_work(i) for i in ids]
    except DivergenceError as e:
        e.method = spec.label
        raise

    trained = frozenset(w.client for w in works if w.action == TRAIN)
    contributions = {w.client: w.delta for w in works if w.delta is not None}
    skipped_entirely = frozenset(w.client for w in works if w.delta is None)
    estimated = frozenset(selected) - trained - skipped_entirely

    for w in works:
        if w.action == TRAIN:
            client = clients[w.client]
            store_history(client, state, HistoryEntry(delta=w.delta, local_model=w.local_model))
            client.rounds_trained += 1

    if spec.method == M.FEDNOVA:
        if contributions:
            steps = {w.client: w.steps for w in works}
            delta = fednova_aggregate(
                {i: (normalize_update(contributions[i], steps[i], hyper.eta), steps[i]) for i in contributions},
                hyper.eta,
            )
        else:
            delta = aggregate({}, dim=x_t.dim)
    elif spec.method == M.STRATEGY1:
        delta = aggregate(contributions, RECEIVED_ONLY, dim=x_t.dim)
    else:
        delta = aggregate(contributions, ALL_SELECTED, n_selected=len(selected), dim=x_t.dim)

    try:
        x_next = x_t + delta
    except NonFiniteError:
        raise DivergenceError("global model left the finite range", method=spec.label, round=t)
    if np.max(np.abs(x_next.values)) > hyper.divergence_limit:
        raise DivergenceError("global model left the finite range", method=spec.label, round=t)

    state.x = x_next
    state.t = t + 1
    return RoundOutcome(
        round=t,
        selected=frozenset(selected),
        contributions=contributions,
        trained=trained,
        estimated=estimated,
        skipped_entirely=skipped_entirely,
        delta=delta,
        x_start=x_t,
        x_next=x_next,
        sgd_steps=sum(w.steps for w in works),
    )


def fedopt_sync_round(
    state: GlobalState,
    W: int,
    clients: Sequence[ClientRecord],
    objectives: Sequence[Objective],
    hyper: Hyper,
    seed: int,
    executor: Optional[ThreadPoolExecutor] = None,
) -> GlobalState:
    """
        One synchronised block: every selected client trains at round t and
        re-sends its stored update for the next W-1 rounds. Before round t+W-1
        the model is x_t + (W-1) Delta_t; after the block it is x_t + W Delta_t.
    """
    if W < 1:
        raise ValueError("W must be >= 1: {}".format(W))
    spec = M.MethodSpec(M.FEDOPT_SYNC, W=W)
    for k in range(W):
        run_round(state, spec, clients, objectives, hyper, seed, executor=executor, force=TRAIN if k == 0 else ESTIMATE)
    return state


class Simulator(object):
    """
    Runs one method on one task.

    Examples:
        with Simulator(objectives, spec, budgets, hyper=Hyper(K=10, eta=0.05, batch_size=32)) as sim:
            sim.register_after_round(recorder, required=True)
            sim.run(200)
    """

    def __init__(
        self,
        objectives: Sequence[Objective],
        spec: M.MethodSpec,
        budgets: BudgetAssignment,
        hyper: Hyper,
        seed: int = 0,
        init: Optional[ParamVec] = None,
        rounds: Optional[int] = None,
        workers: int = None,
        show_progress: bool = False,
    ):
        """

        Args:
            objectives: one per client
            spec:
            budgets: p_i per client
            hyper:
            seed:
            init: x_0, default the first objective's init from the init stream
            rounds: planned number of rounds, needed by fedavg_dropout quotas
            workers: threads for per-client work, default from setting
            show_progress: tqdm bar over rounds
        """
        if len(objectives) != len(budgets):
            raise ValueError("{} objectives for {} budgets".format(len(objectives), len(budgets)))
        self.name = spec.label
        self.objectives = list(objectives)
        self.spec = spec
        self.hyper = hyper
        self.seed = seed
        self.clients = make_clients(budgets, spec)
        if spec.method == M.FEDAVG_DROPOUT:
            if rounds is None:
                raise ValueError("fedavg_dropout needs the planned number of rounds")
            set_dropout_quotas(self.clients, rounds, hyper.ratio)
        if init is None:
            init = self.objectives[0].init_params(rngs.stream(seed, rngs.INIT))
        self.state = GlobalState(x=init)

        self.workers = workers or setting.workers
        self._executor = ThreadPoolExecutor(self.workers) if self.workers > 1 else None
        self.show_progress = show_progress

        self.sgd_steps = 0
        self.participation: List[List[int]] = []

        self._before_round_callbacks: List[Callable] = []
        self._after_round_callbacks: List[Tuple[Callable, bool]] = []
        self._stop = False
        self._closed = False

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def close(self):
        if self._closed:
            return
        if self._executor is not None:
            self._executor.shutdown(wait=True)
        self._closed = True

    def register_before_round(self, function: Callable):
        """
            function(simulator) is called before every round
        """
        if not callable(function):
            raise TypeError("must be callable: {}".format(function))
        self._before_round_callbacks.append(function)
        return True

    def register_after_round(self, function: Callable, required: bool = False):
        """
            function(simulator, outcome) is called after every round
        Args:
            function:
            required: any exception of a required hook aborts the run,
                other hooks are logged and skipped unless they raise SimulatorError
        """
        if not callable(function):
            raise TypeError("must be callable: {}".format(function))
        self._after_round_callbacks.append((function, required))
        return True

    def stop(self, message="stopped by user"):
        logger.info(message)
        self._stop = True

    def run_round(self, force: Optional[str] = None) -> RoundOutcome:
        outcome = run_round(
            self.state,
            self.spec,
            self.clients,
            self.objectives,
            self.hyper,
            self.seed,
            executor=self._executor,
            force=force,
        )
        self.sgd_steps += outcome.sgd_steps
        row = [NOT_SELECTED] * len(self.clients)
        for i in outcome.selected:
            row[i] = TRAINED if i in outcome.trained else SKIPPED
        self.participation.append(row)
        logger.debug(
            "{} round {} trained={} estimated={} skipped={}".format(
                self.name, outcome.round, len(outcome.trained), len(outcome.estimated), len(outcome.skipped_entirely)
            )
        )
        return outcome

    def fedopt_sync_round(self, W: int) -> GlobalState:
        fedopt_sync_round(self.state, W, self.clients, self.objectives, self.hyper, self.seed, self._executor)
        return self.state

    def run(self, rounds: int) -> int:
        """
            Run rounds, calling the registered hooks around each one
        Returns:
            number of rounds executed
        """
        logger.debug("{} start, seed={}, rounds={}".format(self.name, self.seed, rounds))
        done = 0
        for _ in tqdm.tqdm(range(rounds), desc=self.name, disable=not self.show_progress, leave=False):
            if self._stop:
                break
            util.call_safely(self._before_round_callbacks, self)
            outcome = self.run_round()
            for function, required in self._after_round_callbacks:
                if required:
                    function(self, outcome)
                else:
                    util.call_safely([function], self, outcome)
            done += 1
        logger.debug("{} done after {} rounds, {} sgd steps".format(self.name, done, self.sgd_steps))
        return done
