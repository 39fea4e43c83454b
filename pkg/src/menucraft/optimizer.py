"""Frequency- and association-driven menu layout search.

The objective charges each command its usage frequency times a linear cost
for tab index and within-tab position, then subtracts rewards for keeping
associated commands in one tab and for placing them vertically adjacent:

    J = sum_c f(c) * (alpha*tab(c) + beta*pos(c))
        - lambda * sum_{same-tab pairs} a(c, c')
        - gamma  * sum_{adjacent pairs}  a(c, c')

Lower is better. optimize() seeds greedily and refines with first-improvement
descent over tab memberships plus restarts and remove-and-reinsert rounds;
brute_force() is the exhaustive reference for tiny instances.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from menucraft.model import Command, MenuDocument, Tab


class OptimizerError(ValueError):
    """Inconsistent spec/layout input or an infeasible instance."""


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class CommandSpec:
    """Commands with usage frequencies and pairwise association scores."""

    commands: tuple[str, ...]
    frequency: dict[str, float] = field(default_factory=dict)
    association: dict[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "commands", tuple(self.commands))
        known = set(self.commands)
        if len(known) != len(self.commands):
            raise OptimizerError("duplicate command name in spec")
        for name, value in self.frequency.items():
            if name not in known:
                raise OptimizerError(f"frequency for unknown command {name!r}")
            if value < 0:
                raise OptimizerError(f"frequency of {name!r} must be non-negative")
        normalized: dict[tuple[str, str], float] = {}
        for (a, b), score in self.association.items():
            if a == b:
                raise OptimizerError(f"self-association for {a!r}")
            if a not in known or b not in known:
                raise OptimizerError(f"association references unknown command: {a!r}/{b!r}")
            if not 0 <= score <= 1:
                raise OptimizerError(f"association of {a!r}/{b!r} outside [0, 1]")
            key = _pair(a, b)
            if key in normalized and normalized[key] != score:
                raise OptimizerError(f"conflicting association for {a!r}/{b!r}")
            normalized[key] = score
        object.__setattr__(self, "association", normalized)

    def freq(self, name: str) -> float:
        return float(self.frequency.get(name, 0.0))

    def assoc(self, a: str, b: str) -> float:
        return float(self.association.get(_pair(a, b), 0.0))


@dataclass(frozen=True)
class LayoutSpec:
    """Where commands may go: ordered tab names, optional per-tab capacity."""

    tab_names: tuple[str, ...]
    capacity: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "tab_names", tuple(self.tab_names))
        if len(set(self.tab_names)) != len(self.tab_names):
            raise OptimizerError("duplicate tab name in layout spec")
        if self.capacity is not None and self.capacity < 1:
            raise OptimizerError("capacity must be positive")


@dataclass(frozen=True)
class OptimizerParams:
    alpha: float = 1.0
    beta: float = 1.0
    lambda_: float = 1.0
    gamma: float = 1.0
    move_budget: int = 10000
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "lambda_", "gamma"):
            if getattr(self, name) < 0:
                raise OptimizerError(f"{name.rstrip('_')} must be non-negative")
        if self.move_budget < 0:
            raise OptimizerError("move_budget must be non-negative")


@dataclass(frozen=True)
class Layout:
    """Assignment of every command to (tab index, position), plus its J."""

    assignment: dict[str, tuple[int, int]]
    objective: float


def _tabs_from_layout(layout: Layout, spec: CommandSpec) -> list[list[str]]:
    """Ordered per-tab name lists; validates the layout against the spec."""
    known = set(spec.commands)
    for name in layout.assignment:
        if name not in known:
            raise OptimizerError(f"layout places unknown command {name!r}")
    missing = known - set(layout.assignment)
    if missing:
        raise OptimizerError(f"layout misses command {sorted(missing)[0]!r}")
    n_tabs = 1 + max((t for t, _ in layout.assignment.values()), default=-1)
    tabs: list[list[tuple[int, str]]] = [[] for _ in range(n_tabs)]
    for name, (t, p) in layout.assignment.items():
        if t < 0 or p < 0:
            raise OptimizerError(f"negative slot for {name!r}")
        tabs[t].append((p, name))
    out = []
    for t, entries in enumerate(tabs):
        entries.sort()
        if [p for p, _ in entries] != list(range(len(entries))):
            raise OptimizerError(f"positions in tab {t} are not contiguous")
        out.append([name for _, name in entries])
    return out


def _tab_cost(names: list[str], tab_index: int, spec: CommandSpec, params: OptimizerParams) -> float:
    cost = 0.0
    for pos, name in enumerate(names):
        cost += spec.freq(name) * (params.alpha * tab_index + params.beta * pos)
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            a = spec.assoc(names[i], names[j])
            if a:
                cost -= params.lambda_ * a
                if j == i + 1:
                    cost -= params.gamma * a
    return cost


def _total_cost(tabs: list[list[str]], spec: CommandSpec, params: OptimizerParams) -> float:
    return sum(_tab_cost(names, t, spec, params) for t, names in enumerate(tabs))


def objective(layout: Layout, spec: CommandSpec, params: OptimizerParams | None = None) -> float:
    """J for a complete layout. Pure; raises on spec/layout mismatch."""
    params = params or OptimizerParams()
    return _total_cost(_tabs_from_layout(layout, spec), spec, params)


def _as_layout(tabs: list[list[str]], spec: CommandSpec, params: OptimizerParams) -> Layout:
    assignment = {
        name: (t, p) for t, names in enumerate(tabs) for p, name in enumerate(names)
    }
    return Layout(assignment, _total_cost(tabs, spec, params))


def _check_feasible(spec: CommandSpec, layout_spec: LayoutSpec) -> None:
    n = len(spec.commands)
    if n == 0:
        return
    if not layout_spec.tab_names:
        raise OptimizerError("no tabs to place commands in")
    if layout_spec.capacity is not None:
        total = layout_spec.capacity * len(layout_spec.tab_names)
        if n > total:
            raise OptimizerError(
                f"infeasible: {n} commands exceed total capacity {total}"
            )


_EPS = 1e-9


_ORDER_DP_LIMIT = 10


class _TabCosts:
    """Per-tab cost bookkeeping over command member sets.

    The within-tab order only affects the beta and gamma terms, so each
    member set is ordered once and memoized. With exact=True small sets get
    the true minimum through a subset DP over (placed commands, last
    command); otherwise (and for very large sets) a frequency-sorted
    repositioning descent is used, which is what makes probing thousands of
    candidate sets affordable. The alpha term separates out as
    tab_index * freq_sum.
    """

    def __init__(self, spec: CommandSpec, params: OptimizerParams, exact: bool = True) -> None:
        self.spec = spec
        self.params = params
        self.exact = exact
        adj: dict[str, list[tuple[str, float]]] = {}
        for (a, b), score in spec.association.items():
            if score > 0:
                adj.setdefault(a, []).append((b, score))
                adj.setdefault(b, []).append((a, score))
        self._adj = adj
        self._cache: dict[frozenset, tuple[float, tuple[str, ...], float]] = {}

    def _order_part(self, seq: list[str]) -> float:
        beta, gamma = self.params.beta, self.params.gamma
        cost = sum(beta * self.spec.freq(c) * p for p, c in enumerate(seq))
        cost -= gamma * sum(
            self.spec.assoc(seq[p], seq[p + 1]) for p in range(len(seq) - 1)
        )
        return cost

    def _dp_order(self, names: list[str]) -> tuple[float, list[str]]:
        beta, gamma = self.params.beta, self.params.gamma
        freqs = [self.spec.freq(c) for c in names]
        k = len(names)
        best: dict[tuple[int, int], tuple[float, int]] = {
            (1 << i, i): (0.0, -1) for i in range(k)
        }
        for mask in range(1, 1 << k):
            pos = mask.bit_count()
            if pos >= k:
                continue
            for last in range(k):
                state = best.get((mask, last))
                if state is None:
                    continue
                for nxt in range(k):
                    if mask & (1 << nxt):
                        continue
                    cost = (
                        state[0]
                        + beta * freqs[nxt] * pos
                        - gamma * self.spec.assoc(names[last], names[nxt])
                    )
                    seen = best.get((mask | (1 << nxt), nxt))
                    if seen is None or cost < seen[0] - _EPS:
                        best[(mask | (1 << nxt), nxt)] = (cost, last)
        full = (1 << k) - 1
        end = min(range(k), key=lambda last: best[(full, last)][0])
        value = best[(full, end)][0]
        order: list[str] = []
        mask, last = full, end
        while last != -1:
            order.append(names[last])
            mask, last = mask & ~(1 << last), best[(mask, last)][1]
        order.reverse()
        return value, order

    def _descent_order(self, names: list[str]) -> tuple[float, list[str]]:
        value = self._order_part(names)
        improved = True
        while improved:
            improved = False
            for i in range(len(names)):
                for j in range(len(names) + 1):
                    if j in (i, i + 1):
                        continue
                    rest = names[:i] + names[i + 1 :]
                    jj = j - 1 if j > i else j
                    cand = rest[:jj] + [names[i]] + rest[jj:]
                    cost = self._order_part(cand)
                    if cost < value - _EPS:
                        names, value = cand, cost
                        improved = True
                        break
                if improved:
                    break
        return value, names

    def entry(self, members) -> tuple[float, tuple[str, ...], float]:
        key = frozenset(members)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        names = sorted(key)
        names.sort(key=self.spec.freq, reverse=True)
        pair_sum = 0.0
        for a in names:
            for b, score in self._adj.get(a, ()):
                if a < b and b in key:
                    pair_sum += score
        has_edges = self.params.gamma > 0 and pair_sum > 0
        if not names:
            value, order = 0.0, []
        elif not has_edges:
            # adjacency cannot pay off, so frequency order is exactly optimal
            value, order = self._order_part(names), names
        elif self.exact and len(names) <= _ORDER_DP_LIMIT:
            value, order = self._dp_order(names)
        else:
            value, order = self._descent_order(names)
        same_tab = self.params.lambda_ * pair_sum
        freq_sum = sum(self.spec.freq(c) for c in key)
        result = (value - same_tab, tuple(order), freq_sum)
        self._cache[key] = result
        return result

    def cost(self, members, tab_index: int) -> float:
        intrinsic, _order, freq_sum = self.entry(members)
        return intrinsic + self.params.alpha * tab_index * freq_sum

    def order(self, members) -> list[str]:
        return list(self.entry(members)[1])


def _assoc_clusters(members: list[str], spec: CommandSpec) -> list[list[str]]:
    """Connected components (size about 2+) of the association graph over members."""
    if not spec.association:
        return []
    member_set = set(members)
    parent = {name: name for name in members}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b), score in spec.association.items():
        if score > 0 and a in member_set and b in member_set:
            parent[find(a)] = find(b)
    groups: dict[str, list[str]] = {}
    for name in members:
        groups.setdefault(find(name), []).append(name)
    return [g for g in groups.values() if len(g) >= 2]


def _greedy_seed(
    spec: CommandSpec, layout_spec: LayoutSpec, rng: random.Random
) -> list[list[str]]:
    """Most frequent first; each command joins the feasible tab where it is
    most associated with the current occupants (seeded tie-break)."""
    order = list(spec.commands)
    rng.shuffle(order)
    order.sort(key=spec.freq, reverse=True)
    parts: list[list[str]] = [[] for _ in layout_spec.tab_names]
    cap = layout_spec.capacity
    for name in order:
        open_tabs = [t for t in range(len(parts)) if cap is None or len(parts[t]) < cap]
        scores = [sum(spec.assoc(name, other) for other in parts[t]) for t in open_tabs]
        best = max(scores)
        choice = rng.choice([t for t, s in zip(open_tabs, scores) if s == best])
        parts[choice].append(name)
    return parts


def _descend(
    parts: list[list[str]],
    spec: CommandSpec,
    layout_spec: LayoutSpec,
    costs_for: _TabCosts,
    budget: int,
    thorough: bool = True,
) -> tuple[list[list[str]], int]:
    """First-improvement descent over tab membership.

    Moves: relocate a command, swap two commands across tabs, relocate an
    association cluster, trade a cluster for a single command, and exchange
    whole tab contents. Ordering within a tab is the cost model's job.

    When thorough, every accepted move restarts the scan from the first
    phase; otherwise each phase keeps sweeping past accepted moves, which
    costs far fewer probes on big instances.
    """
    cap = layout_spec.capacity
    n_tabs = len(parts)
    costs = [costs_for.cost(m, t) for t, m in enumerate(parts)]
    moves = 0

    def try_parts(changed: list[int], new_sets: list[list[str]]) -> bool:
        nonlocal moves
        if moves >= budget:
            return False
        old = sum(costs[t] for t in changed)
        new = sum(costs_for.cost(s, t) for t, s in zip(changed, new_sets))
        if new < old - _EPS:
            for t, s in zip(changed, new_sets):
                parts[t] = s
                costs[t] = costs_for.cost(s, t)
            moves += 1
            return True
        return False

    def relocations() -> bool:
        accepted = False
        for t in range(n_tabs):
            for name in list(parts[t]):
                for u in range(n_tabs):
                    if u == t or (cap is not None and len(parts[u]) >= cap):
                        continue
                    source = [x for x in parts[t] if x != name]
                    if try_parts([t, u], [source, parts[u] + [name]]):
                        accepted = True
                        break
                if accepted and thorough:
                    return True
        return accepted

    def pair_swaps() -> bool:
        accepted = False
        for t, u in itertools.combinations(range(n_tabs), 2):
            done = False
            for a in list(parts[t]):
                for b in list(parts[u]):
                    first = [x for x in parts[t] if x != a] + [b]
                    second = [x for x in parts[u] if x != b] + [a]
                    if try_parts([t, u], [first, second]):
                        done = True
                        break
                if done:
                    break
            if done:
                accepted = True
                if thorough:
                    return True
        return accepted

    def cluster_moves() -> bool:
        accepted = False
        for t in range(n_tabs):
            done = False
            for cluster in _assoc_clusters(parts[t], spec):
                members = set(cluster)
                rest = [x for x in parts[t] if x not in members]
                for u in range(n_tabs):
                    if u == t:
                        continue
                    if cap is None or len(parts[u]) + len(cluster) <= cap:
                        if try_parts([t, u], [rest, parts[u] + cluster]):
                            done = True
                            break
                    for b in list(parts[u]):
                        if cap is not None and (
                            len(parts[u]) - 1 + len(cluster) > cap
                            or len(rest) + 1 > cap
                        ):
                            continue
                        first = rest + [b]
                        second = [x for x in parts[u] if x != b] + cluster
                        if try_parts([t, u], [first, second]):
                            done = True
                            break
                    if done:
                        break
                if done:
                    break
            if done:
                accepted = True
                if thorough:
                    return True
        return accepted

    def tab_exchanges() -> bool:
        accepted = False
        for t, u in itertools.combinations(range(n_tabs), 2):
            if cap is not None and (len(parts[t]) > cap or len(parts[u]) > cap):
                continue
            if try_parts([t, u], [parts[u][:], parts[t][:]]):
                accepted = True
                if thorough:
                    return True
        return accepted

    phases = (relocations, pair_swaps, cluster_moves, tab_exchanges)
    improved = True
    while improved and moves < budget:
        improved = False
        for phase in phases:
            if phase():
                improved = True
                if thorough:
                    break
    return parts, moves


def _total(parts: list[list[str]], costs_for: _TabCosts) -> float:
    return sum(costs_for.cost(m, t) for t, m in enumerate(parts))


def _best_reinsertion(
    parts: list[list[str]],
    removed: list[str],
    layout_spec: LayoutSpec,
    costs_for: _TabCosts,
) -> list[list[str]] | None:
    """Exhaustively re-place the removed commands; None when nothing fits."""
    cap = layout_spec.capacity
    n_tabs = len(parts)
    best_val = float("inf")
    best: list[list[str]] | None = None
    for labels in itertools.product(range(n_tabs), repeat=len(removed)):
        cand = [m[:] for m in parts]
        for name, t in zip(removed, labels):
            cand[t].append(name)
        if cap is not None and any(len(m) > cap for m in cand):
            continue
        value = _total(cand, costs_for)
        if value < best_val - _EPS:
            best_val, best = value, cand
    return best


def optimize(
    spec: CommandSpec, layout_spec: LayoutSpec, params: OptimizerParams | None = None
) -> Layout:
    """Greedy seed, membership descent, random restarts, then rounds of
    remove-and-optimally-reinsert. Feasible, deterministic per seed, and
    never worse than the seed."""
    params = params or OptimizerParams()
    _check_feasible(spec, layout_spec)
    if not spec.commands:
        return Layout({}, 0.0)
    rng = random.Random(params.seed)
    cap = layout_spec.capacity
    n = len(spec.commands)
    n_tabs = len(layout_spec.tab_names)

    # Without association rewards the objective is a sum of freq * slot
    # weight, so pairing frequencies (descending) with slot weights
    # (ascending) is exactly optimal; the (weight, tab, pos) sort keeps each
    # tab's chosen positions a prefix.
    rewards_off = params.lambda_ == 0 and params.gamma == 0
    if rewards_off or not any(s > 0 for s in spec.association.values()):
        slots = sorted(
            (params.alpha * t + params.beta * p, t, p)
            for t in range(n_tabs)
            for p in range(cap if cap is not None else n)
        )[:n]
        by_freq = sorted(spec.commands, key=spec.freq, reverse=True)
        parts = [[] for _ in range(n_tabs)]
        for (_w, t, p), name in zip(slots, by_freq):
            parts[t].append((p, name))
        return _as_layout(
            [[name for _p, name in sorted(m)] for m in parts], spec, params
        )
    # Small instances get the exact ordering DP and exhaustive-restart descent
    # that make optimize() match brute_force(); larger ones trade both for
    # probe cost that stays usable at menu-bar scale.
    small = n <= 9
    costs_for = _TabCosts(spec, params, exact=small)
    budget = params.move_budget

    parts, used = _descend(
        _greedy_seed(spec, layout_spec, rng),
        spec,
        layout_spec,
        costs_for,
        budget,
        thorough=small,
    )
    best_val = _total(parts, costs_for)

    for _ in range(6 if small else 0):
        if used >= budget:
            break
        shuffled = list(spec.commands)
        rng.shuffle(shuffled)
        cand: list[list[str]] = [[] for _ in range(n_tabs)]
        for name in shuffled:
            open_tabs = [t for t in range(n_tabs) if cap is None or len(cand[t]) < cap]
            cand[rng.choice(open_tabs)].append(name)
        cand, extra = _descend(
            cand, spec, layout_spec, costs_for, budget - used, thorough=small
        )
        used += extra
        value = _total(cand, costs_for)
        if value < best_val - _EPS:
            parts, best_val = cand, value

    # Large-neighborhood rounds: rip out a few commands, re-place them, and
    # descend again. When the label space is tiny every re-placement gets its
    # own descent (the winning basin often looks bad before descending);
    # otherwise only the cheapest re-placement is pursued.
    def repair(removed: tuple[str, ...]) -> bool:
        nonlocal parts, best_val, used
        stripped = [[x for x in m if x not in removed] for m in parts]
        better = False
        if n_tabs ** len(removed) <= 16:
            candidates = []
            for labels in itertools.product(range(n_tabs), repeat=len(removed)):
                cand = [m[:] for m in stripped]
                for name, t in zip(removed, labels):
                    cand[t].append(name)
                if cap is None or all(len(m) <= cap for m in cand):
                    candidates.append(cand)
        else:
            cand = _best_reinsertion(stripped, list(removed), layout_spec, costs_for)
            candidates = [cand] if cand is not None else []
        for cand in candidates:
            if used >= budget:
                break
            cand, extra = _descend(
                cand, spec, layout_spec, costs_for, budget - used, thorough=small
            )
            used += extra
            value = _total(cand, costs_for)
            if value < best_val - _EPS:
                parts, best_val = cand, value
                used += 1
                better = True
        return better

    if small:
        sizes = tuple(k for k in (2, 3) if k < n)
        improved = bool(sizes)
        passes = 0
        while improved and passes < 10 and used < budget:
            improved = False
            passes += 1
            for k in sizes:
                for removed in itertools.combinations(spec.commands, k):
                    if used >= budget:
                        break
                    if repair(removed):
                        improved = True
                if used >= budget:
                    break
        if n >= 5:
            for _ in range(12):
                if used >= budget:
                    break
                repair(tuple(rng.sample(list(spec.commands), 4)))
    else:
        for _ in range(6):
            if used >= budget:
                break
            repair(tuple(rng.sample(list(spec.commands), 2)))

    # The emitted order is always exact for the final memberships, even when
    # the search probed with the cheap ordering.
    final_costs = costs_for if small else _TabCosts(spec, params)
    ordered = [final_costs.order(m) for m in parts]
    return _as_layout(ordered, spec, params)


_BRUTE_MAX_COMMANDS = 8
_BRUTE_MAX_TABS = 3


def brute_force(
    spec: CommandSpec, layout_spec: LayoutSpec, params: OptimizerParams | None = None
) -> Layout:
    """Global minimum by exhaustive enumeration. Guarded to tiny instances."""
    params = params or OptimizerParams()
    n = len(spec.commands)
    if n > _BRUTE_MAX_COMMANDS or len(layout_spec.tab_names) > _BRUTE_MAX_TABS:
        raise OptimizerError(
            f"instance too large for brute force "
            f"(max {_BRUTE_MAX_COMMANDS} commands, {_BRUTE_MAX_TABS} tabs)"
        )
    _check_feasible(spec, layout_spec)
    if n == 0:
        return Layout({}, 0.0)

    n_tabs = len(layout_spec.tab_names)
    cap = layout_spec.capacity
    order_cost_cache: dict[frozenset, tuple[float, tuple[str, ...]]] = {}

    def best_order(members: tuple[str, ...]) -> tuple[float, tuple[str, ...]]:
        """Min over orderings of the order-dependent terms (beta and gamma)."""
        key = frozenset(members)
        hit = order_cost_cache.get(key)
        if hit is not None:
            return hit
        best = (float("inf"), members)
        for perm in itertools.permutations(sorted(members)):
            cost = sum(params.beta * spec.freq(c) * p for p, c in enumerate(perm))
            cost -= params.gamma * sum(
                spec.assoc(perm[p], perm[p + 1]) for p in range(len(perm) - 1)
            )
            if cost < best[0] - _EPS:
                best = (cost, perm)
        order_cost_cache[key] = best
        return best

    best_layout: Layout | None = None
    for labels in itertools.product(range(n_tabs), repeat=n):
        members: list[list[str]] = [[] for _ in range(n_tabs)]
        for name, t in zip(spec.commands, labels):
            members[t].append(name)
        if cap is not None and any(len(m) > cap for m in members):
            continue
        total = 0.0
        ordered: list[list[str]] = []
        for t, group in enumerate(members):
            total += params.alpha * t * sum(spec.freq(c) for c in group)
            total -= params.lambda_ * sum(
                spec.assoc(a, b) for a, b in itertools.combinations(group, 2)
            )
            order_cost, perm = best_order(tuple(group))
            total += order_cost
            ordered.append(list(perm))
        if best_layout is None or total < best_layout.objective - _EPS:
            best_layout = _as_layout(ordered, spec, params)
    if best_layout is None:
        raise OptimizerError("no feasible assignment exists")
    return best_layout


def layout_to_document(
    layout: Layout, layout_spec: LayoutSpec, topic: str = ""
) -> MenuDocument:
    """Flat document (no groups) with commands at their assigned slots."""
    tabs: list[list[tuple[int, str]]] = [[] for _ in layout_spec.tab_names]
    for name, (t, p) in layout.assignment.items():
        if t >= len(tabs):
            raise OptimizerError(f"layout tab index {t} outside the layout spec")
        tabs[t].append((p, name))
    built = []
    for tab_name, entries in zip(layout_spec.tab_names, tabs):
        entries.sort()
        built.append(Tab(tab_name, tuple(Command(name) for _, name in entries)))
    return MenuDocument(topic, tuple(built))


# --- JSON forms ---------------------------------------------------------------

def command_spec_from_obj(obj) -> CommandSpec:
    if not isinstance(obj, dict):
        raise OptimizerError("command spec must be an object")
    commands = obj.get("commands")
    if not isinstance(commands, list) or not all(
        isinstance(c, str) and c for c in commands
    ):
        raise OptimizerError("'commands' must be a list of non-empty names")
    frequency = obj.get("frequency", {})
    if not isinstance(frequency, dict):
        raise OptimizerError("'frequency' must be an object")
    freq = {}
    for name, value in frequency.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise OptimizerError(f"frequency of {name!r} must be a number")
        freq[name] = float(value)
    association = obj.get("association", [])
    if not isinstance(association, list):
        raise OptimizerError("'association' must be a list of [a, b, score] triples")
    assoc = {}
    for entry in association:
        if (
            not isinstance(entry, list)
            or len(entry) != 3
            or not isinstance(entry[0], str)
            or not isinstance(entry[1], str)
            or isinstance(entry[2], bool)
            or not isinstance(entry[2], (int, float))
        ):
            raise OptimizerError("association entries must be [name, name, score]")
        assoc[(entry[0], entry[1])] = float(entry[2])
    return CommandSpec(tuple(commands), freq, assoc)


def command_spec_to_obj(spec: CommandSpec) -> dict:
    return {
        "commands": list(spec.commands),
        "frequency": {k: spec.frequency[k] for k in sorted(spec.frequency)},
        "association": [
            [a, b, spec.association[(a, b)]] for a, b in sorted(spec.association)
        ],
    }


def layout_spec_from_obj(obj) -> LayoutSpec:
    if not isinstance(obj, dict):
        raise OptimizerError("layout spec must be an object")
    tab_names = obj.get("tab_names")
    if not isinstance(tab_names, list) or not all(
        isinstance(t, str) and t for t in tab_names
    ):
        raise OptimizerError("'tab_names' must be a list of non-empty names")
    capacity = obj.get("capacity")
    if capacity is not None and (isinstance(capacity, bool) or not isinstance(capacity, int)):
        raise OptimizerError("'capacity' must be an integer")
    return LayoutSpec(tuple(tab_names), capacity)


def params_from_obj(obj) -> OptimizerParams:
    if obj is None:
        return OptimizerParams()
    if not isinstance(obj, dict):
        raise OptimizerError("params must be an object")
    kwargs = {}
    mapping = {
        "alpha": "alpha",
        "beta": "beta",
        "lambda": "lambda_",
        "lambda_": "lambda_",
        "gamma": "gamma",
        "move_budget": "move_budget",
        "seed": "seed",
    }
    for key, value in obj.items():
        if key not in mapping:
            raise OptimizerError(f"unknown optimizer param {key!r}")
        kwargs[mapping[key]] = value
    return OptimizerParams(**kwargs)


def layout_to_obj(layout: Layout) -> dict:
    return {
        "assignment": {
            name: list(slot) for name, slot in sorted(layout.assignment.items())
        },
        "objective": layout.objective,
    }
