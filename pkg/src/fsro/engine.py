"""The frog-snake search engine.

Each iteration runs, in order: two-point crossover inside the snake group,
uniform crossover inside the frog group (recording which indexes changed),
behavior classification per frog, predation-point selection, a capture
attempt per frog against a random snake, evaluation of every agent, a
replicator-dynamics share update that regroups agents, and a mutation that
reseeds any near-extinct group with the best solution found so far.

The stream is consumed in a fixed order so runs replay exactly: group
shuffle, then per-agent crossover draws in agent-list order (snakes before
frogs), then the approach draw per frog, then capture draws per frog
(partner index, success uniform), with a one-draw repair wherever a new
solution comes out all-zero. No draws occur during evaluation or the share
update.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import (
    Agent,
    ConfigError,
    Group,
    PopulationState,
    SearchOutcome,
    TraceRow,
)
from .rng import RngStream

# keeps both shares representable at one agent for the default N=40
SHARE_FLOOR = 0.025


class Behavior(enum.Enum):
    MOVING = "moving"
    MOTIONLESS = "motionless"


class MoveOrder(enum.Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class FsroParams:
    population_size: int = 40
    max_iterations: int = 100
    max_dis: float = 80.0
    decision_dis: float = 6.0
    w1: float = 0.75
    w2: float = 1.0
    d1: float = 40.0
    d2: float = 20.0
    ess_threshold: int = 2

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2 != 0:
            raise ConfigError(
                f"population_size must be an even integer >= 4, got {self.population_size}"
            )
        if self.max_iterations < 0:
            raise ConfigError(f"max_iterations must be >= 0, got {self.max_iterations}")
        if self.max_dis <= 0 or self.decision_dis <= 0:
            raise ConfigError("max_dis and decision_dis must be positive")
        if self.ess_threshold < 1:
            raise ConfigError(f"ess_threshold must be >= 1, got {self.ess_threshold}")


@dataclass(frozen=True)
class CrossoverRecord:
    """Outcome of one uniform crossover, seen from one parent.

    mask[i] is True where the child took the partner's bit; changed holds the
    indexes where the child actually differs from this parent; boundaries are
    the mask flip positions (i >= 1 with mask[i] != mask[i-1]).
    """

    agent_id: int
    mask: np.ndarray
    changed: frozenset[int]
    unchanged: frozenset[int]
    boundaries: tuple[int, ...]


@dataclass(frozen=True)
class PredationPlan:
    """One frog-snake capture interaction and its outcome."""

    frog_id: int
    snake_id: int
    behavior: Behavior
    predation_points: frozenset[int]
    distance: float
    order: MoveOrder
    avoidance_rate: float
    succeeded: bool


def repair_mask(mask: np.ndarray, rng: RngStream) -> np.ndarray:
    """Force at least one selected bit; consumes one draw only when needed."""
    if not mask.any():
        mask[rng.index(mask.size)] = 1
    return mask


def initialize(params: FsroParams, dim: int, rng: RngStream) -> PopulationState:
    """Uniform random population, half frogs half snakes, every mask non-empty."""
    if dim < 1:
        raise ConfigError(f"dimension must be >= 1, got {dim}")
    n = params.population_size
    agents = []
    for i in range(n):
        bits = np.empty(dim, dtype=np.uint8)
        for d in range(dim):
            bits[d] = rng.bit()
        repair_mask(bits, rng)
        group = Group.FROG if i < n // 2 else Group.SNAKE
        agents.append(Agent(id=i, solution=bits, group=group))
    return PopulationState(
        agents=agents,
        frog_share=0.5,
        snake_share=0.5,
        iteration=0,
        next_agent_id=n,
    )


def two_point_crossover(a: np.ndarray, b: np.ndarray,
                        rng: RngStream) -> tuple[np.ndarray, tuple[int, int]]:
    """Child takes b on a random inclusive segment [p1, p2], a elsewhere."""
    if a.shape != b.shape:
        raise ValueError(f"parent lengths differ: {a.shape} vs {b.shape}")
    d = a.size
    if d < 2:
        raise ValueError("two-point crossover needs at least 2 positions")
    p1 = rng.index(d)
    p2 = rng.index(d - 1)
    if p2 >= p1:
        p2 += 1
    if p1 > p2:
        p1, p2 = p2, p1
    child = a.copy()
    child[p1:p2 + 1] = b[p1:p2 + 1]
    return child, (p1, p2)


def uniform_crossover(a: np.ndarray, b: np.ndarray, rng: RngStream,
                      agent_id: int = -1) -> tuple[np.ndarray, CrossoverRecord]:
    """Child takes b wherever an independent fair coin lands True."""
    if a.shape != b.shape:
        raise ValueError(f"parent lengths differ: {a.shape} vs {b.shape}")
    d = a.size
    mask = np.empty(d, dtype=bool)
    for i in range(d):
        mask[i] = rng.uniform() < 0.5
    child = np.where(mask, b, a).astype(np.uint8)
    changed = frozenset(int(i) for i in np.flatnonzero(child != a))
    unchanged = frozenset(range(d)) - changed
    boundaries = tuple(int(i) for i in range(1, d) if mask[i] != mask[i - 1])
    record = CrossoverRecord(agent_id=agent_id, mask=mask, changed=changed,
                             unchanged=unchanged, boundaries=boundaries)
    return child, record


def classify_behavior(record: CrossoverRecord) -> Behavior:
    """Moving iff strictly more indexes changed than stayed; ties are motionless."""
    return Behavior.MOVING if len(record.changed) > len(record.unchanged) else Behavior.MOTIONLESS


def determine_predation_points(record: CrossoverRecord, rng: RngStream) -> frozenset[int]:
    """Pick the solution indexes at stake in this frog's capture standoff.

    A random index that was changed by the crossover stakes just itself
    (escape); an unchanged index stakes the whole block from the nearest mask
    boundary to the string end on its own side (immobility). Without any
    boundary the single index is staked.
    """
    d = record.mask.size
    s = rng.index(d)
    if s in record.changed or not record.boundaries:
        return frozenset((s,))
    b = min(record.boundaries, key=lambda x: (abs(x - s), x))
    if s >= b:
        return frozenset(range(b, d))
    return frozenset(range(0, b))


def frog_snake_distance(frog: np.ndarray, snake: np.ndarray, max_dis: float) -> float:
    """max_dis scaled by the fraction of mismatched positions."""
    if frog.shape != snake.shape:
        raise ValueError(f"solution lengths differ: {frog.shape} vs {snake.shape}")
    d = frog.size
    matches = int(np.sum(frog == snake))
    return max_dis * (d - matches) / d


def determine_order(distance: float, decision_dis: float) -> MoveOrder:
    return MoveOrder.FIRST if distance <= decision_dis else MoveOrder.SECOND


def avoidance_rate(order: MoveOrder, distance: float, params: FsroParams) -> float:
    """Escape probability, linear in distance, clamped into [0, 1]."""
    if order is MoveOrder.FIRST:
        raw = (params.w1 * distance + params.d1) / 100.0
    else:
        raw = (params.w2 * distance + params.d2) / 100.0
    return min(max(raw, 0.0), 1.0)


def capture(frog: Agent, points: frozenset[int], rate: float,
            rng: RngStream) -> tuple[np.ndarray, bool]:
    """Attempt the capture: with probability 1 - rate the staked bits flip."""
    succeeded = rng.uniform() < (1.0 - rate)
    if not succeeded:
        return frog.solution, False
    flipped = frog.solution.copy()
    idx = np.fromiter(points, dtype=np.int64)
    flipped[idx] ^= 1
    repair_mask(flipped, rng)
    return flipped, True


def replicator_payoffs(frog_improvement_sum: float, snake_improvement_sum: float,
                       n_frogs: int, n_snakes: int) -> tuple[float, float]:
    """Normalize per-group average fitness improvements into payoffs summing to 1."""
    if n_frogs < 1 or n_snakes < 1:
        raise ValueError("both groups must be non-empty to compute payoffs")
    avg_f = frog_improvement_sum / n_frogs
    avg_s = snake_improvement_sum / n_snakes
    total = avg_f + avg_s
    if total == 0.0:
        return 0.5, 0.5
    return avg_f / total, avg_s / total


def replicator_update(shares: tuple[float, float], payoffs: tuple[float, float],
                      floor: float = SHARE_FLOOR) -> tuple[float, float]:
    """Grow the share of the better-paying group: x' = x + x(u - u_mean).

    Results are clamped into [floor, 1 - floor] and renormalized so neither
    group can go extinct.
    """
    x_f, x_s = shares
    u_f, u_s = payoffs
    u_mean = x_f * u_f + x_s * u_s
    new_f = x_f + x_f * (u_f - u_mean)
    new_s = x_s + x_s * (u_s - u_mean)
    new_f = min(max(new_f, floor), 1.0 - floor)
    new_s = min(max(new_s, floor), 1.0 - floor)
    total = new_f + new_s
    return new_f / total, new_s / total


def _worst_first(agents: list[Agent]) -> list[Agent]:
    # worst (largest) fitness first; ties broken by lower agent id
    return sorted(agents, key=lambda a: (-a.fitness, a.id))


def resize_groups(pop: PopulationState, new_shares: tuple[float, float]) -> PopulationState:
    """Relabel the worst members of the shrinking group to match the new shares."""
    n = len(pop.agents)
    target_frogs = int(np.floor(new_shares[0] * n + 0.5))
    target_frogs = min(max(target_frogs, 1), n - 1)
    frogs = pop.frogs()
    if target_frogs > len(frogs):
        for agent in _worst_first(pop.snakes())[: target_frogs - len(frogs)]:
            agent.group = Group.FROG
    elif target_frogs < len(frogs):
        for agent in _worst_first(frogs)[: len(frogs) - target_frogs]:
            agent.group = Group.SNAKE
    return pop


def ess_mutation(pop: PopulationState, ess_threshold: int = 2) -> PopulationState:
    """Reseed any group at or below the threshold with a copy of the best
    solution so far, dropping the other group's worst agent to keep the count."""
    if pop.global_best_mask is None:
        raise ValueError("mutation needs a global best; evaluate the population first")
    sizes = {Group.FROG: len(pop.frogs()), Group.SNAKE: len(pop.snakes())}
    for group in (Group.FROG, Group.SNAKE):
        if sizes[group] > ess_threshold:
            continue
        other = Group.SNAKE if group is Group.FROG else Group.FROG
        clone = Agent(
            id=pop.next_agent_id,
            solution=pop.global_best_mask.copy(),
            group=group,
            fitness=pop.global_best_fitness,
            prev_fitness=pop.global_best_fitness,
        )
        pop.next_agent_id += 1
        pop.agents.append(clone)
        donors = [a for a in pop.agents if a.group is other]
        if len(donors) > 1:
            pop.agents.remove(_worst_first(donors)[0])
    return pop


def _pairing(group: list[Agent], rng: RngStream) -> dict[int, Agent]:
    """Random disjoint pairs; with an odd count the leftover pairs with the
    first shuffled agent, and a singleton group pairs with itself."""
    order = list(group)
    rng.shuffle(order)
    partner: dict[int, Agent] = {}
    for i in range(0, len(order) - 1, 2):
        partner[order[i].id] = order[i + 1]
        partner[order[i + 1].id] = order[i]
    if len(order) % 2 == 1:
        leftover = order[-1]
        partner[leftover.id] = order[0] if len(order) > 1 else leftover
    return partner


def step(pop: PopulationState, params: FsroParams, evaluate, rng: RngStream) -> PopulationState:
    """Advance the population by one full iteration."""
    for a in pop.agents:
        a.prev_fitness = a.fitness

    # snakes explore by two-point crossover (skipped for 1-bit solutions,
    # where no point pair exists)
    snakes = pop.snakes()
    dim = pop.agents[0].solution.size
    if dim >= 2:
        partner = _pairing(snakes, rng)
        parents = {a.id: a.solution for a in snakes}
        children = {}
        for a in snakes:
            mate = partner[a.id]
            child, _ = two_point_crossover(parents[a.id], parents[mate.id], rng)
            children[a.id] = repair_mask(child, rng)
        for a in snakes:
            a.solution = children[a.id]

    # frogs exploit by uniform crossover, keeping records for the hunt
    frogs = pop.frogs()
    partner = _pairing(frogs, rng)
    parents = {a.id: a.solution for a in frogs}
    records: dict[int, CrossoverRecord] = {}
    children = {}
    for a in frogs:
        mate = partner[a.id]
        child, record = uniform_crossover(parents[a.id], parents[mate.id], rng, agent_id=a.id)
        records[a.id] = record
        children[a.id] = repair_mask(child, rng)
    for a in frogs:
        a.solution = children[a.id]

    # search phase: label each frog's behavior (diagnostic state)
    behaviors = {a.id: classify_behavior(records[a.id]) for a in frogs}

    # approach phase: stake the predation points
    points = {a.id: determine_predation_points(records[a.id], rng) for a in frogs}

    # capture phase: each frog faces one random snake
    snakes = pop.snakes()
    plans = []
    for a in frogs:
        foe = snakes[rng.index(len(snakes))]
        dist = frog_snake_distance(a.solution, foe.solution, params.max_dis)
        order = determine_order(dist, params.decision_dis)
        rate = avoidance_rate(order, dist, params)
        new_solution, succeeded = capture(a, points[a.id], rate, rng)
        a.solution = new_solution
        plans.append(PredationPlan(
            frog_id=a.id, snake_id=foe.id, behavior=behaviors[a.id],
            predation_points=points[a.id], distance=dist, order=order,
            avoidance_rate=rate, succeeded=succeeded,
        ))
    pop.predation_plans = plans

    # evaluate everyone, keep the elitist best
    for a in pop.agents:
        a.fitness = evaluate(a.solution)
        if pop.global_best_fitness is None or a.fitness < pop.global_best_fitness:
            pop.global_best_fitness = a.fitness
            pop.global_best_mask = a.solution.copy()

    # replicator dynamics on this iteration's improvements
    frogs = pop.frogs()
    snakes = pop.snakes()
    frog_gain = sum(max(0.0, a.prev_fitness - a.fitness) for a in frogs)
    snake_gain = sum(max(0.0, a.prev_fitness - a.fitness) for a in snakes)
    payoffs = replicator_payoffs(frog_gain, snake_gain, len(frogs), len(snakes))
    shares = replicator_update((pop.frog_share, pop.snake_share), payoffs)
    pop.frog_share, pop.snake_share = shares
    resize_groups(pop, shares)
    ess_mutation(pop, params.ess_threshold)

    pop.iteration += 1
    return pop


def run_search(params: FsroParams, dim: int, evaluate, rng: RngStream) -> SearchOutcome:
    """Full run: initialize, evaluate, iterate; trace has max_iterations+1 rows."""
    pop = initialize(params, dim, rng)
    for a in pop.agents:
        a.fitness = evaluate(a.solution)
        if pop.global_best_fitness is None or a.fitness < pop.global_best_fitness:
            pop.global_best_fitness = a.fitness
            pop.global_best_mask = a.solution.copy()
    trace = [TraceRow(0, pop.global_best_fitness, len(pop.frogs()), len(pop.snakes()), False)]
    for _ in range(params.max_iterations):
        step(pop, params, evaluate, rng)
        trace.append(TraceRow(
            pop.iteration,
            pop.global_best_fitness,
            len(pop.frogs()),
            len(pop.snakes()),
            any(p.succeeded for p in pop.predation_plans),
        ))
    return SearchOutcome(
        best_mask=pop.global_best_mask.copy(),
        best_fitness=pop.global_best_fitness,
        trace=trace,
    )
