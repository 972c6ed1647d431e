"""Seeded randomized verification suites.

Each suite checks one contract on a stream of random finite systems with
rational state functions: the cycle-mean value against brute force, the
finite-horizon bounds, the rotation witness, the edge-system lift, the
subaction slack certificate, and the invariance tests.  All randomness comes
from one seed, so reports are byte-identical across runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ._numbers import NEG_INF
from .io import dumps_system
from .mea import (
    alpha_state,
    brute_force_alpha,
    delta_finite_horizon,
    epsilon_witness,
)
from .measures import (
    VertexMeasure,
    cycle_measure,
    extreme_invariant_measures,
    invariant_by_subsets,
    is_invariant,
)
from .subaction import subaction_for_state_function
from .system import FiniteMVSystem, graph_system, lift_function, simple_cycles


@dataclass(frozen=True)
class Instance:
    system: FiniteMVSystem
    f: tuple

    def dump(self) -> str:
        return dumps_system(self.system, f_state=self.f)


def random_system(rng: random.Random, max_states: int = 8,
                  single_valued: bool = False) -> FiniteMVSystem:
    """A random system that always contains at least one cycle."""
    n = rng.randint(2, max_states)
    edges: set[tuple[int, int]] = set()
    if single_valued:
        for x in range(n):
            edges.add((x, rng.randrange(n)))
    else:
        cyc_len = rng.randint(1, n)
        cyc = rng.sample(range(n), cyc_len)
        for i in range(cyc_len):
            edges.add((cyc[i], cyc[(i + 1) % cyc_len]))
        for _ in range(rng.randint(0, 2 * n)):
            edges.add((rng.randrange(n), rng.randrange(n)))
    return FiniteMVSystem.make(n, edges)


def random_state_function(rng: random.Random, n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 10)) for _ in range(n))


def make_instances(seed: int, count: int, max_states: int = 8,
                   single_valued_every: int = 5) -> list[Instance]:
    """The shared instance stream: every ``single_valued_every``-th instance
    is single-valued (one out-edge per state)."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        sv = single_valued_every > 0 and i % single_valued_every == single_valued_every - 1
        system = random_system(rng, max_states, single_valued=sv)
        out.append(Instance(system, random_state_function(rng, system.n_states)))
    return out


# ---------------------------------------------------------------------------
# Per-instance checks: return None on pass, a message on failure


def check_alpha_oracle(inst: Instance):
    alpha, cycle = alpha_state(inst.system, inst.f)
    oracle = brute_force_alpha(inst.system, inst.f)
    if alpha != oracle:
        return f"alpha {alpha} != brute force {oracle}"
    k = len(cycle)
    mean = Fraction(sum(inst.f[x] for x in cycle.states), 1) / k
    if mean != alpha:
        return f"canonical cycle mean {mean} != alpha {alpha}"
    return None


def check_delta_bounds(inst: Instance, horizons=(8, 16, 32, 64)):
    alpha, _ = alpha_state(inst.system, inst.f)
    bound_scale = 2 * inst.system.n_states * max(abs(v) for v in inst.f)
    for n in horizons:
        delta_n = delta_finite_horizon(inst.system, inst.f, n)
        gap = delta_n - alpha
        if abs(gap) * (n + 1) > bound_scale:
            return f"delta_{n} = {delta_n} is {gap} away from alpha {alpha}"
    return None


def check_epsilon(inst: Instance, spans: int = 4):
    alpha, cycle = alpha_state(inst.system, inst.f)
    rot = epsilon_witness(cycle, inst.f)
    k = len(cycle)
    states = cycle.states[rot:] + cycle.states[:rot]
    running = Fraction(0)
    for n in range(spans * k):
        running += inst.f[states[n % k]]
        if Fraction(running, 1) / (n + 1) < alpha:
            return f"prefix average at n={n} dips below alpha from rotation {rot}"
    return None


def check_graph_lift(inst: Instance):
    lifted_sys = graph_system(inst.system)
    f_hat = lift_function(inst.f, inst.system)
    alpha, cycle = alpha_state(inst.system, inst.f)
    alpha_hat, cycle_hat = alpha_state(lifted_sys, f_hat)
    if alpha != alpha_hat:
        return f"alpha {alpha} != lifted alpha {alpha_hat}"
    tails = tuple(inst.system.edges[e][0] for e in cycle_hat.states)
    k = len(tails)
    rotations = [tails[r:] + tails[:r] for r in range(k)]
    if min(rotations) != cycle.states:
        return f"lifted cycle {tails} does not project onto {cycle.states}"
    return None


def check_mane(inst: Instance):
    result = subaction_for_state_function(inst.system, inst.f)
    if min(result.slack) < 0:
        return f"negative slack {min(result.slack)}"
    tight = set(result.tight_edge_ids)
    f_edge = lift_function(inst.f, inst.system)
    # every all-tight cycle of the tight subgraph telescopes to mean beta
    tight_sys = FiniteMVSystem.make(
        inst.system.n_states, (inst.system.edges[k] for k in tight)
    )
    for states in simple_cycles(tight_sys):
        k = len(states)
        mean = Fraction(sum(inst.f[x] for x in states), 1) / k
        if mean != result.beta:
            return f"all-tight cycle {states} has mean {mean} != beta {result.beta}"
    # the potential itself satisfies the edge inequality on its finite part
    for eid, (t, h) in enumerate(inst.system.edges):
        if result.phi[t] is NEG_INF:
            continue
        if result.phi[t] > result.phi[h] + result.beta - f_edge[eid]:
            return f"potential inequality fails on edge ({t}, {h})"
    # single-valued systems: the per-state classical inequality
    if all(len(s) == 1 for s in inst.system.successors):
        for x in range(inst.system.n_states):
            y = inst.system.successors[x][0]
            if inst.f[x] + result.v[x] - result.v[y] > result.beta:
                return f"per-state inequality fails at state {x}"
    return None


def check_measures(inst: Instance):
    system = inst.system
    if system.n_states > 6:
        return None  # subset oracle is exponential; checked on small systems
    cycles = simple_cycles(system)
    if not cycles:
        return None
    from .measures import Cycle

    vms = []
    for states in cycles[:6]:
        vm, circ = cycle_measure(Cycle(states), system)
        ok, witness = is_invariant(system, vm)
        if not ok or witness is None:
            return f"cycle measure of {states} not certified invariant"
        if not invariant_by_subsets(system, vm):
            return f"subset oracle rejects cycle measure of {states}"
        vms.append(vm)
    # convexity at rational mixtures
    if len(vms) >= 2:
        for a in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
            mix = VertexMeasure.make(
                tuple(a * u + (1 - a) * v for u, v in zip(vms[0].weights, vms[1].weights))
            )
            ok, _ = is_invariant(system, mix)
            if not ok:
                return f"convex mixture at a={a} not invariant"
            if not invariant_by_subsets(system, mix):
                return f"subset oracle rejects mixture at a={a}"
    # extreme points are certified invariant and are cycle projections
    cycle_meas = set()
    for states in cycles:
        vm, _ = cycle_measure(Cycle(states), system)
        cycle_meas.add(vm.weights)
    for vm in extreme_invariant_measures(system):
        if vm.weights not in cycle_meas:
            return "an extreme measure is not a simple-cycle projection"
    return None


SUITES = (
    ("alpha-oracle", check_alpha_oracle),
    ("delta-bounds", check_delta_bounds),
    ("epsilon-witness", check_epsilon),
    ("graph-lift", check_graph_lift),
    ("mane-subaction", check_mane),
    ("measures", check_measures),
)


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    lines: tuple[str, ...]

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def run_verify(seed: int, count: int = 200, max_states: int = 8) -> VerifyReport:
    instances = make_instances(seed, count, max_states)
    lines = [f"verification suites: seed={seed} instances={count} max_states={max_states}"]
    all_ok = True
    for name, check in SUITES:
        failures = []
        for idx, inst in enumerate(instances):
            msg = check(inst)
            if msg is not None:
                failures.append((idx, inst, msg))
        if failures:
            all_ok = False
            idx, inst, msg = failures[0]
            lines.append(f"FAIL {name}: {len(failures)}/{count} instances, first at #{idx}: {msg}")
            lines.append("counterexample:")
            lines.extend("  " + ln for ln in inst.dump().splitlines())
        else:
            lines.append(f"PASS {name}: {count}/{count} instances")
    lines.append("RESULT " + ("PASS" if all_ok else "FAIL"))
    return VerifyReport(all_ok, tuple(lines))
