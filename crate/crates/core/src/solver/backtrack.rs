use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use crate::arrangement::Arrangement;
use crate::profile::Utility;
use crate::seats::Seat;
use crate::stability::{Instance, Stability};

use super::{anchor_seats, certify, SolveOutcome, SolverError, Status};

const EMPTY: usize = usize::MAX;

/// Read-only tables shared by every branch of one search.
struct Plan<'a> {
    n: usize,
    values: &'a [Utility],
    adjacency: &'a [Vec<Seat>],
    /// Largest number of empty seats one bound ever has to fill.
    width: usize,
    /// Tie-break rank of each seat when choosing where to branch next.
    rank: Vec<usize>,
    anchor: Vec<bool>,
    notion: Stability,
}

impl<'a> Plan<'a> {
    fn new(instance: &'a Instance, notion: Stability) -> Self {
        let n = instance.len();
        let mut rank = vec![0; n];
        for (k, seat) in instance.seats().fill_order().into_iter().enumerate() {
            rank[seat] = k;
        }
        Plan {
            n,
            values: instance.profile().matrix(),
            adjacency: instance.adjacency(),
            width: instance.seats().max_degree(),
            rank,
            anchor: anchor_seats(instance),
            notion,
        }
    }
}

enum Flow {
    Found,
    Exhausted,
    OutOfBudget,
    Cancelled,
}

/// For each agent, prefix sums of its smallest and largest values toward
/// the agents still unplaced (itself excluded): `low[i][k]` is the least
/// total `k` empty seats can contribute, `high[i][k]` the most.
struct Extremes {
    stride: usize,
    low: Vec<Utility>,
    high: Vec<Utility>,
}

impl Extremes {
    #[inline]
    fn low(&self, i: usize, k: usize) -> Utility {
        self.low[i * self.stride + k.min(self.stride - 1)]
    }

    #[inline]
    fn high(&self, i: usize, k: usize) -> Utility {
        self.high[i * self.stride + k.min(self.stride - 1)]
    }
}

struct Search<'p, 'a> {
    plan: &'p Plan<'a>,
    occupant: Vec<usize>,
    seat_of: Vec<Seat>,
    placed: usize,
    nodes: &'p AtomicU64,
    local_nodes: u64,
    budget: Option<u64>,
    branch: usize,
    best_branch: &'p AtomicUsize,
}

impl<'p, 'a> Search<'p, 'a> {
    fn new(plan: &'p Plan<'a>, nodes: &'p AtomicU64, budget: Option<u64>, branch: usize, best_branch: &'p AtomicUsize) -> Self {
        Search {
            plan,
            occupant: vec![EMPTY; plan.n],
            seat_of: vec![EMPTY; plan.n],
            placed: 0,
            nodes,
            local_nodes: 0,
            budget,
            branch,
            best_branch,
        }
    }

    #[inline]
    fn value(&self, i: usize, j: usize) -> Utility {
        self.plan.values[i * self.plan.n + j]
    }

    fn extremes(&self) -> Extremes {
        let n = self.plan.n;
        let stride = self.plan.width + 1;
        let mut low = vec![0; n * stride];
        let mut high = vec![0; n * stride];
        let unplaced: Vec<usize> = (0..n).filter(|&j| self.seat_of[j] == EMPTY).collect();
        let mut small: Vec<Utility> = Vec::with_capacity(stride);
        let mut large: Vec<Utility> = Vec::with_capacity(stride);
        for i in 0..n {
            small.clear();
            large.clear();
            for &j in &unplaced {
                if j == i {
                    continue;
                }
                let v = self.value(i, j);
                keep_extreme(&mut small, v, stride - 1, |a, b| a < b);
                keep_extreme(&mut large, v, stride - 1, |a, b| a > b);
            }
            for k in 1..stride {
                let at = i * stride + k;
                low[at] = low[at - 1] + small.get(k - 1).copied().unwrap_or(0);
                high[at] = high[at - 1] + large.get(k - 1).copied().unwrap_or(0);
            }
        }
        Extremes { stride, low, high }
    }

    /// Upper bound on `i`'s final utility when seated at `v`.
    #[inline]
    fn upper_at(&self, ex: &Extremes, i: usize, v: Seat) -> Utility {
        let (mut known, mut empty) = (0, 0);
        for &w in &self.plan.adjacency[v] {
            match self.occupant[w] {
                EMPTY => empty += 1,
                o => known += self.value(i, o),
            }
        }
        known + ex.high(i, empty)
    }

    /// Lower bound on what `i` would get after swapping into seat `v`,
    /// whoever ends up there.
    fn lower_at(&self, ex: &Extremes, i: usize, v: Seat) -> Utility {
        let own = self.seat_of[i];
        let (mut known, mut empty) = (0, 0);
        for &w in &self.plan.adjacency[v] {
            // After the swap, `i`'s old seat holds `v`'s occupant.
            let who = if w == own { self.occupant[v] } else { self.occupant[w] };
            match who {
                EMPTY => empty += 1,
                o => known += self.value(i, o),
            }
        }
        let bound = known + ex.low(i, empty);
        match self.occupant[v] {
            // An unplaced `i` may end up beside `v` and leave its occupant
            // there instead of an unplaced agent.
            j if own == EMPTY && j != EMPTY && empty > 0 => {
                bound.min(known + ex.low(i, empty - 1) + self.value(i, j))
            }
            _ => bound,
        }
    }

    fn must_block(&self, ex: &Extremes, i: usize, j: usize) -> bool {
        let (si, sj) = (self.seat_of[i], self.seat_of[j]);
        self.lower_at(ex, i, sj) > self.upper_at(ex, i, si) && self.lower_at(ex, j, si) > self.upper_at(ex, j, sj)
    }

    /// Whether placed agents alone already rule out every completion.
    fn placed_conflict(&self, ex: &Extremes) -> bool {
        let n = self.plan.n;
        let placed = (0..n).filter(|&i| self.seat_of[i] != EMPTY);
        match self.plan.notion {
            Stability::EnvyFree => placed.into_iter().any(|i| {
                let own = self.seat_of[i];
                let upper = self.upper_at(ex, i, own);
                (0..n).any(|v| v != own && self.lower_at(ex, i, v) > upper)
            }),
            Stability::ExchangeStable => {
                let placed: Vec<usize> = placed.collect();
                placed
                    .iter()
                    .enumerate()
                    .any(|(k, &i)| placed[k + 1..].iter().any(|&j| self.must_block(ex, i, j)))
            }
        }
    }

    /// The placements to try next, in order; `None` when the partial seating
    /// cannot be completed.
    ///
    /// Under envy-freeness an unplaced agent may only take a free seat whose
    /// best case reaches the guaranteed value of every other seat. The search
    /// then branches on whichever is most constrained: the free seat with the
    /// fewest agents able to take it, or the agent with the fewest seats it
    /// can take. Under exchange-stability the free seat with the most filled
    /// neighbours is filled next.
    fn branch_point(&self) -> Option<Vec<(Seat, usize)>> {
        let n = self.plan.n;
        let ex = self.extremes();
        if self.placed_conflict(&ex) {
            return None;
        }
        let free: Vec<Seat> = (0..n).filter(|&v| self.occupant[v] == EMPTY).collect();
        let allowed = |i: usize, v: Seat| i != 0 || self.plan.anchor[v];
        let key = |v: Seat| {
            let filled = self.plan.adjacency[v].iter().filter(|&&w| self.occupant[w] != EMPTY).count();
            (usize::MAX - filled, self.plan.rank[v])
        };
        match self.plan.notion {
            Stability::ExchangeStable => {
                let seat = free.into_iter().min_by_key(|&v| key(v))?;
                let agents = (0..n).filter(|&i| self.seat_of[i] == EMPTY && allowed(i, seat));
                Some(agents.map(|i| (seat, i)).collect())
            }
            Stability::EnvyFree => {
                let mut count = vec![0usize; n];
                let mut tightest: Option<Vec<(Seat, usize)>> = None;
                for i in (0..n).filter(|&i| self.seat_of[i] == EMPTY) {
                    // The two largest guaranteed values over all seats.
                    let (mut best, mut best_seat, mut second) = (Utility::MIN, EMPTY, Utility::MIN);
                    for v in 0..n {
                        let low = self.lower_at(&ex, i, v);
                        if low > best {
                            (second, best, best_seat) = (best, low, v);
                        } else if low > second {
                            second = low;
                        }
                    }
                    let domain: Vec<(Seat, usize)> = free
                        .iter()
                        .filter(|&&v| {
                            let needed = if v == best_seat { second } else { best };
                            allowed(i, v) && self.upper_at(&ex, i, v) >= needed && self.supported(i, v)
                        })
                        .map(|&v| (v, i))
                        .collect();
                    if domain.is_empty() {
                        return None;
                    }
                    for &(v, _) in &domain {
                        count[v] += 1;
                    }
                    if tightest.as_ref().is_none_or(|t| domain.len() < t.len()) {
                        tightest = Some(domain);
                    }
                }
                let seat = free.into_iter().min_by_key(|&v| (count[v], key(v)))?;
                let by_agent = tightest.expect("an unplaced agent exists when a seat is free");
                if count[seat] == 0 {
                    return None;
                }
                if by_agent.len() < count[seat] {
                    let mut by_agent = by_agent;
                    by_agent.sort_by_key(|&(v, _)| key(v));
                    return Some(by_agent);
                }
                let agents = (0..n).filter(|&i| self.seat_of[i] == EMPTY && allowed(i, seat) && self.viable(&ex, i, seat));
                Some(agents.map(|i| (seat, i)).collect())
            }
        }
    }

    fn viable(&self, ex: &Extremes, i: usize, v: Seat) -> bool {
        let upper = self.upper_at(ex, i, v);
        (0..self.plan.n).all(|w| w == v || self.lower_at(ex, i, w) <= upper) && self.supported(i, v)
    }

    /// Whether seating unplaced `i` at free `v` leaves the placed agents
    /// (now including `i`) without a certain conflict.
    fn supported(&self, i: usize, v: Seat) -> bool {
        let mut probe = Search {
            occupant: self.occupant.clone(),
            seat_of: self.seat_of.clone(),
            placed: self.placed + 1,
            ..Search::new(self.plan, self.nodes, None, self.branch, self.best_branch)
        };
        probe.occupant[v] = i;
        probe.seat_of[i] = v;
        !probe.placed_conflict(&probe.extremes())
    }

    fn tick(&mut self) -> Option<Flow> {
        self.local_nodes += 1;
        let total = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.is_some_and(|b| total > b) {
            return Some(Flow::OutOfBudget);
        }
        if self.local_nodes.is_multiple_of(4096) && self.best_branch.load(Ordering::Relaxed) < self.branch {
            return Some(Flow::Cancelled);
        }
        None
    }

    /// Seats `agent` at `seat` and recurses.
    fn descend(&mut self, seat: Seat, agent: usize) -> Flow {
        if let Some(flow) = self.tick() {
            return flow;
        }
        self.occupant[seat] = agent;
        self.seat_of[agent] = seat;
        self.placed += 1;
        let flow = self.fill();
        if matches!(flow, Flow::Found) {
            return flow;
        }
        self.placed -= 1;
        self.occupant[seat] = EMPTY;
        self.seat_of[agent] = EMPTY;
        flow
    }

    fn fill(&mut self) -> Flow {
        if self.placed == self.plan.n {
            return if self.placed_conflict(&self.extremes()) { Flow::Exhausted } else { Flow::Found };
        }
        let Some(moves) = self.branch_point() else {
            return Flow::Exhausted;
        };
        for (seat, agent) in moves {
            match self.descend(seat, agent) {
                Flow::Exhausted => {}
                other => return other,
            }
        }
        Flow::Exhausted
    }
}

/// Keeps the `cap` most extreme values of a stream in `better` order.
#[inline]
fn keep_extreme(kept: &mut Vec<Utility>, v: Utility, cap: usize, better: impl Fn(Utility, Utility) -> bool) {
    if cap == 0 || (kept.len() == cap && !better(v, kept[cap - 1])) {
        return;
    }
    let at = kept.iter().position(|&k| better(v, k)).unwrap_or(kept.len());
    kept.insert(at, v);
    kept.truncate(cap);
}

enum BranchResult {
    Found(Vec<Seat>),
    Exhausted,
    OutOfBudget,
    Cancelled,
}

fn run_branch(
    plan: &Plan<'_>,
    branch: usize,
    (seat, agent): (Seat, usize),
    nodes: &AtomicU64,
    budget: Option<u64>,
    best_branch: &AtomicUsize,
) -> BranchResult {
    let mut search = Search::new(plan, nodes, budget, branch, best_branch);
    match search.descend(seat, agent) {
        Flow::Found => BranchResult::Found(search.seat_of),
        Flow::Exhausted => BranchResult::Exhausted,
        Flow::OutOfBudget => BranchResult::OutOfBudget,
        Flow::Cancelled => BranchResult::Cancelled,
    }
}

/// Depth-first placement search with bound pruning.
///
/// Every agent has an upper bound on its final utility in a seat (empty
/// neighbour seats count at its largest value) and a lower bound on what it
/// would get by moving to any other seat (empty seats at its smallest value).
/// A branch dies as soon as a placed agent must envy some seat's eventual
/// occupant, or, for exchange-stability, two placed agents must envy each
/// other. Under envy-freeness the same bounds also rule seats out for agents
/// not yet placed. Once a neighbourhood is full its bounds are exact.
///
/// The first placement splits the search into top-level branches, which
/// `workers` threads share. The answer is taken from the lowest-numbered
/// branch that found a witness, so with enough budget the witness equals the
/// single-threaded one.
pub fn solve_backtrack(
    instance: &Instance,
    notion: Stability,
    budget: Option<u64>,
    workers: usize,
) -> Result<SolveOutcome, SolverError> {
    let start = Instant::now();
    let plan = Plan::new(instance, notion);
    let n = plan.n;
    let nodes = AtomicU64::new(0);
    let best_branch = AtomicUsize::new(usize::MAX);
    if n == 0 {
        return Ok(SolveOutcome {
            status: certify(instance, notion, Arrangement::identity(0))?,
            nodes_explored: 0,
            elapsed: start.elapsed(),
        });
    }
    let branches = Search::new(&plan, &nodes, budget, 0, &best_branch)
        .branch_point()
        .unwrap_or_default();

    let mut results: Vec<Option<BranchResult>> = (0..branches.len()).map(|_| None).collect();
    let workers = workers.max(1).min(branches.len().max(1));
    if workers == 1 {
        for (idx, (slot, &first)) in results.iter_mut().zip(&branches).enumerate() {
            let result = run_branch(&plan, idx, first, &nodes, budget, &best_branch);
            let stop = matches!(result, BranchResult::Found(_) | BranchResult::OutOfBudget);
            *slot = Some(result);
            if stop {
                break;
            }
        }
    } else {
        let next = AtomicUsize::new(0);
        let collected = std::sync::Mutex::new(Vec::new());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    if idx >= branches.len() {
                        break;
                    }
                    if best_branch.load(Ordering::Relaxed) < idx {
                        collected.lock().expect("poisoned").push((idx, BranchResult::Cancelled));
                        continue;
                    }
                    let result = run_branch(&plan, idx, branches[idx], &nodes, budget, &best_branch);
                    if matches!(result, BranchResult::Found(_)) {
                        best_branch.fetch_min(idx, Ordering::Relaxed);
                    }
                    collected.lock().expect("poisoned").push((idx, result));
                });
            }
        });
        for (idx, result) in collected.into_inner().expect("poisoned") {
            results[idx] = Some(result);
        }
    }

    let mut status = Status::No;
    for result in results.into_iter().flatten() {
        match result {
            BranchResult::Found(seat_of) => {
                let pi = Arrangement::new(seat_of)?;
                status = certify(instance, notion, pi)?;
                break;
            }
            BranchResult::OutOfBudget => status = Status::Unknown,
            BranchResult::Exhausted | BranchResult::Cancelled => {}
        }
    }
    Ok(SolveOutcome {
        status,
        nodes_explored: nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    })
}
