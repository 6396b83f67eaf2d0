//! Coclique search in the Cayley graph: validation, randomized greedy with
//! restarts, swap-based local search and an exact branch and bound.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::ffield::{membership, Elem, FIELD_SIZE};

/// The ratio bound for cocliques of SRG(4096, 234, 2, 14).
pub const RATIO_BOUND: usize = 352;
/// Largest coclique reported in the literature, for comparison only.
pub const REFERENCE_SIZE: usize = 119;

/// Outcome of a pairwise coclique check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocliqueVerdict {
    Valid,
    Adjacent(Elem, Elem),
    Duplicate(Elem),
}

impl CocliqueVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, CocliqueVerdict::Valid)
    }
}

/// Checks every pair of `set` against the connection set membership table:
/// u and v are adjacent iff u ^ v is in the connection set.
pub fn validate_coclique(connection: &[bool], set: &[Elem]) -> CocliqueVerdict {
    let mut seen = vec![false; connection.len()];
    for &u in set {
        if std::mem::replace(&mut seen[u as usize], true) {
            return CocliqueVerdict::Duplicate(u);
        }
    }
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if connection[(u ^ v) as usize] {
                return CocliqueVerdict::Adjacent(u, v);
            }
        }
    }
    CocliqueVerdict::Valid
}

/// Graph with bit-packed adjacency rows; vertex i carries label labels[i].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    labels: Vec<Elem>,
}

impl BitGraph {
    fn empty(labels: Vec<Elem>) -> Self {
        let n = labels.len();
        let words = n.div_ceil(64);
        BitGraph {
            n,
            words,
            rows: vec![0; n * words],
            labels,
        }
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    /// Cay(GF(2)^12, connection): 4096 rows of 64 words.
    pub fn cayley(connection: &[Elem]) -> Self {
        let labels: Vec<Elem> = (0..FIELD_SIZE as u32).map(|x| x as Elem).collect();
        let mut g = BitGraph::empty(labels);
        let words = g.words;
        let rows = Exec::default().map_range(FIELD_SIZE, |u| {
            let mut row = vec![0u64; words];
            for &d in connection {
                let v = u ^ d as usize;
                row[v / 64] |= 1 << (v % 64);
            }
            row
        });
        g.rows = rows.concat();
        g
    }

    /// Subgraph induced on `vertices` (given by label), relabelled 0..m.
    pub fn induced(&self, vertices: &[Elem]) -> Self {
        let index: Vec<usize> = vertices
            .iter()
            .map(|&x| self.index_of(x).expect("vertex in graph"))
            .collect();
        let mut g = BitGraph::empty(vertices.to_vec());
        for (i, &a) in index.iter().enumerate() {
            for (j, &b) in index.iter().enumerate().skip(i + 1) {
                if self.adjacent(a, b) {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }

    /// Graph from an explicit edge list on vertices 0..n.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = BitGraph::empty((0..n).map(|x| x as Elem).collect());
        for &(u, v) in edges {
            g.set_edge(u, v);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self, i: usize) -> Elem {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Elem] {
        &self.labels
    }

    pub fn index_of(&self, label: Elem) -> Option<usize> {
        if self.labels.len() == FIELD_SIZE {
            return Some(label as usize);
        }
        self.labels.iter().position(|&l| l == label)
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbours(&self, u: usize) -> Vec<usize> {
        ones(self.row(u)).collect()
    }

    /// Whether a set of vertex indices is independent.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.adjacent(u, v)))
    }

    pub fn to_labels(&self, set: &[usize]) -> Vec<Elem> {
        let mut out: Vec<Elem> = set.iter().map(|&i| self.labels[i]).collect();
        out.sort_unstable();
        out
    }
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &bits)| {
        let mut b = bits;
        std::iter::from_fn(move || {
            if b == 0 {
                return None;
            }
            let t = b.trailing_zeros() as usize;
            b &= b - 1;
            Some(w * 64 + t)
        })
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Greedy,
    Local,
    Exact,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "greedy" => Ok(Strategy::Greedy),
            "local" => Ok(Strategy::Local),
            "exact" => Ok(Strategy::Exact),
            _ => Err(format!("unknown strategy {s:?} (greedy, local, exact)")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Greedy => "greedy",
            Strategy::Local => "local",
            Strategy::Exact => "exact",
        })
    }
}

/// Search parameters. Results are reproducible for a fixed seed whenever
/// the iteration limits, not the time budget, end the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Wall-clock budget in seconds.
    pub time_budget: f64,
    /// Stop once a coclique of this size is found.
    pub target_size: usize,
    pub strategy: Strategy,
    /// Greedy restarts, or local-search perturbation rounds.
    pub max_iterations: u64,
    /// Exact search: branch-node limit.
    pub max_nodes: Option<u64>,
    /// Restrict to cocliques containing this vertex label.
    pub fix_root: Option<Elem>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            time_budget: 10.0,
            target_size: RATIO_BOUND,
            strategy: Strategy::Greedy,
            max_iterations: 256,
            max_nodes: None,
            fix_root: None,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.target_size > RATIO_BOUND {
            return Err(format!(
                "target size {} exceeds the ratio bound {RATIO_BOUND}",
                self.target_size
            ));
        }
        if !(self.time_budget.is_finite() && self.time_budget >= 0.0) {
            return Err(format!("invalid time budget {}", self.time_budget));
        }
        Ok(())
    }

    fn budget(&self) -> Duration {
        Duration::from_secs_f64(self.time_budget)
    }
}

/// One improvement of the best-so-far size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    /// Restart, round or node count at which the size was reached.
    pub step: u64,
    pub size: usize,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub strategy: Strategy,
    pub seed: u64,
    pub time_budget: f64,
    pub best: Vec<Elem>,
    pub size: usize,
    pub history: Vec<HistoryEntry>,
    /// Restarts, rounds or branch nodes completed.
    pub iterations: u64,
    pub proven_optimal: bool,
    /// Upper bound known at the end (ratio bound or exhausted tree).
    pub upper_bound: usize,
    pub budget_exhausted: bool,
}

impl SearchReport {
    fn new(config: &SearchConfig, upper_bound: usize) -> Self {
        SearchReport {
            strategy: config.strategy,
            seed: config.seed,
            time_budget: config.time_budget,
            best: Vec::new(),
            size: 0,
            history: Vec::new(),
            iterations: 0,
            proven_optimal: false,
            upper_bound,
            budget_exhausted: false,
        }
    }

    fn improve(&mut self, best: Vec<Elem>, step: u64, start: Instant) {
        debug_assert!(best.len() > self.size);
        self.size = best.len();
        self.best = best;
        self.history.push(HistoryEntry {
            step,
            size: self.size,
            elapsed_ms: start.elapsed().as_millis(),
        });
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "strategy: {}", self.strategy);
        let _ = writeln!(s, "seed: {}", self.seed);
        let _ = writeln!(s, "budget_secs: {}", self.time_budget);
        let _ = writeln!(s, "iterations: {}", self.iterations);
        let _ = writeln!(s, "best_size: {}", self.size);
        let _ = writeln!(s, "upper_bound: {}", self.upper_bound);
        let _ = writeln!(s, "proven_optimal: {}", self.proven_optimal);
        let _ = writeln!(s, "budget_exhausted: {}", self.budget_exhausted);
        let _ = writeln!(s, "reference_size: {REFERENCE_SIZE}");
        s.push_str("history:\n");
        for h in &self.history {
            let _ = writeln!(s, "  step {} size {} at {} ms", h.step, h.size, h.elapsed_ms);
        }
        s
    }
}

pub fn search(graph: &BitGraph, config: &SearchConfig) -> Result<SearchReport, String> {
    config.validate()?;
    Ok(match config.strategy {
        Strategy::Greedy => greedy_randomized(Exec::default(), graph, config),
        Strategy::Local => local_search(graph, config),
        Strategy::Exact => branch_and_bound(graph, config),
    })
}

fn root_index(graph: &BitGraph, config: &SearchConfig) -> Option<usize> {
    config
        .fix_root
        .map(|r| graph.index_of(r).expect("root is a vertex"))
}

/// One randomized greedy pass: visit vertices in random order (the root
/// first, if fixed) and keep each one not adjacent to those kept.
pub fn greedy_pass(graph: &BitGraph, rng: &mut ChaCha8Rng, root: Option<usize>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.len()).filter(|&v| Some(v) != root).collect();
    order.shuffle(rng);
    if let Some(r) = root {
        order.insert(0, r);
    }
    let mut blocked = vec![0u64; graph.words];
    let mut set = Vec::new();
    for v in order {
        if blocked[v / 64] >> (v % 64) & 1 == 1 {
            continue;
        }
        debug_assert!(set.iter().all(|&u| !graph.adjacent(u, v)));
        set.push(v);
        blocked[v / 64] |= 1 << (v % 64);
        for (b, r) in blocked.iter_mut().zip(graph.row(v)) {
            *b |= r;
        }
    }
    set
}

fn restart_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// Best-of-restarts randomized greedy. Restart i uses its own stream of the
/// seeded generator, restarts run in batches, and ties go to the lowest
/// restart index, so the result does not depend on scheduling.
pub fn greedy_randomized(exec: Exec, graph: &BitGraph, config: &SearchConfig) -> SearchReport {
    let start = Instant::now();
    let mut report = SearchReport::new(config, RATIO_BOUND);
    let root = root_index(graph, config);
    let batch = 32u64;
    let mut done = 0u64;
    while done < config.max_iterations {
        if start.elapsed() >= config.budget() {
            report.budget_exhausted = true;
            break;
        }
        let n = batch.min(config.max_iterations - done);
        let results = exec.map_range(n as usize, |k| {
            let i = done + k as u64;
            greedy_pass(graph, &mut restart_rng(config.seed, i), root)
        });
        for (k, set) in results.into_iter().enumerate() {
            if set.len() > report.size {
                report.improve(graph.to_labels(&set), done + k as u64, start);
            }
        }
        done += n;
        if report.size >= config.target_size {
            break;
        }
    }
    report.iterations = done;
    report
}

/// Tightness-based state for swap moves: tight[v] counts neighbours of v in
/// the solution.
struct LocalState<'a> {
    graph: &'a BitGraph,
    adj: &'a [Vec<usize>],
    in_sol: Vec<bool>,
    tight: Vec<u32>,
    size: usize,
}

impl<'a> LocalState<'a> {
    fn new(graph: &'a BitGraph, adj: &'a [Vec<usize>]) -> Self {
        LocalState {
            graph,
            adj,
            in_sol: vec![false; graph.len()],
            tight: vec![0; graph.len()],
            size: 0,
        }
    }

    fn insert(&mut self, v: usize) {
        debug_assert!(!self.in_sol[v] && self.tight[v] == 0);
        self.in_sol[v] = true;
        self.size += 1;
        for &w in &self.adj[v] {
            self.tight[w] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        debug_assert!(self.in_sol[v]);
        self.in_sol[v] = false;
        self.size -= 1;
        for &w in &self.adj[v] {
            self.tight[w] -= 1;
        }
    }

    fn members(&self) -> Vec<usize> {
        (0..self.in_sol.len()).filter(|&v| self.in_sol[v]).collect()
    }

    /// Adds free vertices in the given order.
    fn fill(&mut self, order: &[usize]) {
        for &v in order {
            if !self.in_sol[v] && self.tight[v] == 0 {
                self.insert(v);
            }
        }
    }

    /// A (1,2)-swap: drop x, add two non-adjacent vertices whose only
    /// solution neighbour is x. Returns whether one was applied.
    fn two_improvement(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let mut sol = self.members();
        sol.shuffle(rng);
        for x in sol {
            let cand: Vec<usize> = self.adj[x]
                .iter()
                .copied()
                .filter(|&v| self.tight[v] == 1)
                .collect();
            for (i, &u) in cand.iter().enumerate() {
                if let Some(&w) = cand[i + 1..].iter().find(|&&w| !self.graph.adjacent(u, w)) {
                    self.remove(x);
                    self.insert(u);
                    self.insert(w);
                    return true;
                }
            }
        }
        false
    }

    /// Forces a random non-solution vertex in, evicting its neighbours.
    fn perturb(&mut self, rng: &mut ChaCha8Rng) {
        let n = self.in_sol.len();
        let v = loop {
            let v = rng.gen_range(0..n);
            if !self.in_sol[v] {
                break v;
            }
        };
        for &w in self.adj[v].clone().iter() {
            if self.in_sol[w] {
                self.remove(w);
            }
        }
        self.insert(v);
    }
}

/// Iterated local search: greedy start, (1,2)-swaps to a local optimum,
/// then a random forced insertion; the walk restarts from the best
/// solution when it falls two or more below it.
pub fn local_search(graph: &BitGraph, config: &SearchConfig) -> SearchReport {
    let start = Instant::now();
    let mut report = SearchReport::new(config, RATIO_BOUND);
    let adj: Vec<Vec<usize>> = (0..graph.len()).map(|v| graph.neighbours(v)).collect();
    let mut rng = restart_rng(config.seed, 0);
    let root = root_index(graph, config);
    let mut state = LocalState::new(graph, &adj);
    let mut order: Vec<usize> = (0..graph.len()).collect();
    for v in greedy_pass(graph, &mut rng, root) {
        state.insert(v);
    }
    let mut best_members = state.members();
    report.improve(graph.to_labels(&best_members), 0, start);
    let mut round = 0u64;
    while round < config.max_iterations && report.size < config.target_size {
        if start.elapsed() >= config.budget() {
            report.budget_exhausted = true;
            break;
        }
        round += 1;
        while state.two_improvement(&mut rng) {
            order.shuffle(&mut rng);
            state.fill(&order);
        }
        if let Some(r) = root {
            if !state.in_sol[r] {
                state.perturb_to(r);
            }
        }
        if state.size > report.size {
            best_members = state.members();
            debug_assert!(graph.is_independent(&best_members));
            report.improve(graph.to_labels(&best_members), round, start);
        } else if state.size + 2 <= report.size {
            state = LocalState::new(graph, &adj);
            for &v in &best_members {
                state.insert(v);
            }
        }
        state.perturb(&mut rng);
        order.shuffle(&mut rng);
        state.fill(&order);
    }
    report.iterations = round;
    report
}

impl LocalState<'_> {
    fn perturb_to(&mut self, v: usize) {
        for &w in self.adj[v].clone().iter() {
            if self.in_sol[w] {
                self.remove(w);
            }
        }
        if !self.in_sol[v] {
            self.insert(v);
        }
    }
}

/// Exact maximum coclique by branch and bound on the complement's cliques,
/// with bitset candidate sets and greedy colouring bounds (a colour class
/// here is a clique of the graph, so the number of classes bounds any
/// coclique among the candidates). Vertices are ordered by descending
/// degree, ties by label. Anytime: the best set found is returned with
/// `proven_optimal` only when the tree is exhausted.
pub fn branch_and_bound(graph: &BitGraph, config: &SearchConfig) -> SearchReport {
    let start = Instant::now();
    let mut order: Vec<usize> = (0..graph.len()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), graph.label(v)));
    // Relabel so that bit position i is order[i]; the complement is built
    // directly in the new labelling.
    let n = graph.len();
    let words = graph.words;
    let mut comp = vec![0u64; n * words];
    for i in 0..n {
        for j in 0..n {
            if i != j && !graph.adjacent(order[i], order[j]) {
                comp[i * words + j / 64] |= 1 << (j % 64);
            }
        }
    }
    let mut bb = Bnb {
        words,
        comp,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        start,
        budget: config.budget(),
        max_nodes: config.max_nodes,
        target: config.target_size.min(RATIO_BOUND),
        aborted: false,
        history: Vec::new(),
    };
    let mut cand = vec![0u64; words];
    for i in 0..n {
        cand[i / 64] |= 1 << (i % 64);
    }
    let root = root_index(graph, config).map(|r| order.iter().position(|&v| v == r).unwrap());
    if let Some(r) = root {
        bb.current.push(r);
        for (c, m) in cand.iter_mut().zip(&bb.comp[r * words..(r + 1) * words]) {
            *c &= m;
        }
        bb.best = vec![r];
    }
    let root_bound = bb.current.len() + bb.colour_bound(&cand);
    bb.expand(cand);
    let mut report = SearchReport::new(config, root_bound.min(RATIO_BOUND));
    for (step, size, elapsed) in bb.history.iter().copied() {
        report.history.push(HistoryEntry {
            step,
            size,
            elapsed_ms: elapsed,
        });
    }
    let best: Vec<usize> = bb.best.iter().map(|&i| order[i]).collect();
    debug_assert!(graph.is_independent(&best));
    report.size = best.len();
    report.best = graph.to_labels(&best);
    report.iterations = bb.nodes;
    report.budget_exhausted = bb.aborted;
    report.proven_optimal =
        !bb.aborted && (report.size < bb.target || report.size == RATIO_BOUND);
    if report.proven_optimal {
        report.upper_bound = report.size;
    }
    report
}

struct Bnb {
    words: usize,
    comp: Vec<u64>,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    start: Instant,
    budget: Duration,
    max_nodes: Option<u64>,
    target: usize,
    aborted: bool,
    history: Vec<(u64, usize, u128)>,
}

impl Bnb {
    fn comp_row(&self, v: usize) -> &[u64] {
        &self.comp[v * self.words..(v + 1) * self.words]
    }

    fn colour_bound(&self, cand: &[u64]) -> usize {
        self.colour_sort(cand).last().map_or(0, |&(_, c)| c)
    }

    /// Greedy sequential colouring in bit order: each class is an
    /// independent set of the complement. Returns (vertex, colour) with
    /// colours nondecreasing.
    fn colour_sort(&self, cand: &[u64]) -> Vec<(usize, usize)> {
        let mut uncoloured = cand.to_vec();
        let mut out = Vec::new();
        let mut colour = 0;
        while uncoloured.iter().any(|&w| w != 0) {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = first_one(&q) {
                q[v / 64] &= !(1 << (v % 64));
                uncoloured[v / 64] &= !(1 << (v % 64));
                for (a, b) in q.iter_mut().zip(self.comp_row(v)) {
                    *a &= !b;
                }
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, mut cand: Vec<u64>) {
        self.nodes += 1;
        if self.nodes % 1024 == 0 && self.start.elapsed() >= self.budget {
            self.aborted = true;
        }
        if self.max_nodes.is_some_and(|m| self.nodes > m) {
            self.aborted = true;
        }
        if self.aborted || self.best.len() >= self.target {
            return;
        }
        let coloured = self.colour_sort(&cand);
        for &(v, colour) in coloured.iter().rev() {
            if self.aborted || self.current.len() + colour <= self.best.len() {
                return;
            }
            self.current.push(v);
            let next: Vec<u64> = cand
                .iter()
                .zip(self.comp_row(v))
                .map(|(a, b)| a & b)
                .collect();
            if next.iter().all(|&w| w == 0) {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                    self.history
                        .push((self.nodes, self.best.len(), self.start.elapsed().as_millis()));
                    if self.best.len() >= self.target {
                        self.current.pop();
                        return;
                    }
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
}

fn first_one(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Spot-checks bit rows against the difference rule on random pairs.
pub fn spot_check_rows(graph: &BitGraph, connection: &[Elem], samples: usize, seed: u64) -> bool {
    let member = membership(connection);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let u = rng.gen_range(0..graph.len());
        let v = rng.gen_range(0..graph.len());
        graph.adjacent(u, v) == member[(graph.label(u) ^ graph.label(v)) as usize]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> BitGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        BitGraph::from_edges(n, &edges)
    }

    #[test]
    fn exact_on_cycles_and_petersen() {
        let cfg = SearchConfig {
            strategy: Strategy::Exact,
            ..Default::default()
        };
        for n in 3..12 {
            let r = branch_and_bound(&cycle(n), &cfg);
            assert!(r.proven_optimal);
            assert_eq!(r.size, n / 2, "C_{n}");
        }
        let mut edges = vec![];
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        let p = BitGraph::from_edges(10, &edges);
        assert_eq!(p.degree(0), 3);
        let r = branch_and_bound(&p, &cfg);
        assert_eq!((r.size, r.proven_optimal), (4, true));
    }

    #[test]
    fn validation() {
        let conn = membership(&[1, 2]);
        assert!(validate_coclique(&conn, &[]).is_valid());
        assert!(validate_coclique(&conn, &[5]).is_valid());
        assert_eq!(validate_coclique(&conn, &[0, 2]), CocliqueVerdict::Adjacent(0, 2));
        assert_eq!(validate_coclique(&conn, &[4, 4]), CocliqueVerdict::Duplicate(4));
    }

    #[test]
    fn strategy_parse() {
        assert_eq!("exact".parse::<Strategy>(), Ok(Strategy::Exact));
        assert!("bogus".parse::<Strategy>().is_err());
        let bad = SearchConfig {
            target_size: 353,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
