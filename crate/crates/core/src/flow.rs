//! Dinic max-flow on exact `i128` capacities.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i128,
}

/// Residual network. Arcs are stored in pairs: `2k` forward, `2k + 1` reverse.
#[derive(Debug, Clone)]
pub struct MaxFlow {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    level: Vec<u32>,
    next: Vec<usize>,
}

const UNSEEN: u32 = u32::MAX;

impl MaxFlow {
    pub fn new(nodes: usize) -> Self {
        MaxFlow {
            adj: vec![Vec::new(); nodes],
            arcs: Vec::new(),
            level: vec![UNSEEN; nodes],
            next: vec![0; nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: i128) -> usize {
        debug_assert!(cap >= 0);
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(UNSEEN);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let a = &self.arcs[id];
                if a.cap > 0 && self.level[a.to] == UNSEEN {
                    self.level[a.to] = self.level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        self.level[t] != UNSEEN
    }

    // Iterative blocking-flow search; recursion depth would otherwise track
    // the BFS level count.
    fn augment(&mut self, s: usize, t: usize) -> i128 {
        let mut total = 0i128;
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let push = path.iter().map(|&id| self.arcs[id].cap).min().unwrap_or(0);
                for &id in &path {
                    self.arcs[id].cap -= push;
                    self.arcs[id ^ 1].cap += push;
                }
                total += push;
                // restart from the tail of the first saturated arc
                let cut = path
                    .iter()
                    .position(|&id| self.arcs[id].cap == 0)
                    .unwrap_or(0);
                path.truncate(cut);
                u = if cut == 0 {
                    s
                } else {
                    self.arcs[path[cut - 1]].to
                };
                continue;
            }
            let mut advanced = false;
            while self.next[u] < self.adj[u].len() {
                let id = self.adj[u][self.next[u]];
                let a = &self.arcs[id];
                if a.cap > 0 && self.level[a.to] == self.level[u] + 1 {
                    path.push(id);
                    u = a.to;
                    advanced = true;
                    break;
                }
                self.next[u] += 1;
            }
            if !advanced {
                if u == s {
                    return total;
                }
                // dead end: retreat and skip the arc that led here
                self.level[u] = UNSEEN;
                let id = path.pop().expect("non-source node has an entry arc");
                u = self.arcs[id ^ 1].to;
                self.next[u] += 1;
            }
        }
    }

    /// Runs to completion and returns the flow value.
    pub fn run(&mut self, s: usize, t: usize) -> i128 {
        let mut flow = 0i128;
        while self.bfs(s, t) {
            self.next.fill(0);
            flow += self.augment(s, t);
        }
        flow
    }

    /// Nodes reachable from `s` in the residual graph: after [`run`](Self::run)
    /// this is the inclusion-minimal source side of a minimum cut.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &id in &self.adj[u] {
                let a = &self.arcs[id];
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        seen
    }
}
