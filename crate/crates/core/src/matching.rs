// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Maximum matching in general multigraphs (Edmonds' blossom algorithm).

const NONE: usize = usize::MAX;

pub(crate) struct Matching {
    adj: Vec<Vec<usize>>,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
}

impl Matching {
    pub(crate) fn new(n: usize) -> Self {
        Matching {
            adj: vec![Vec::new(); n],
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
        }
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
    }

    pub(crate) fn mate(&self, v: usize) -> Option<usize> {
        (self.mate[v] != NONE).then_some(self.mate[v])
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.fill(false);
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    queue.push_back(next);
                }
            }
        }
        None
    }

    /// Grows the matching to maximum size and returns that size.
    pub(crate) fn solve(&mut self) -> usize {
        let n = self.adj.len();
        for v in 0..n {
            if self.mate[v] == NONE {
                if let Some(&w) = self.adj[v].iter().find(|&&w| self.mate[w] == NONE) {
                    self.mate[v] = w;
                    self.mate[w] = v;
                }
            }
        }
        for v in 0..n {
            if self.mate[v] != NONE {
                continue;
            }
            if let Some(mut t) = self.find_path(v) {
                while t != NONE {
                    let pv = self.parent[t];
                    let ppv = self.mate[pv];
                    self.mate[t] = pv;
                    self.mate[pv] = t;
                    t = ppv;
                }
            }
        }
        self.mate.iter().filter(|&&m| m != NONE).count() / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(n: usize, edges: &[(usize, usize)]) -> usize {
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let mut hit = vec![false; n];
            let mut ok = true;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if u == v || hit[u] || hit[v] {
                        ok = false;
                        break;
                    }
                    hit[u] = true;
                    hit[v] = true;
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn odd_cycle_with_pendant() {
        // blossom on 0..5 with a pendant at vertex 4
        let mut m = Matching::new(6);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5)] {
            m.add_edge(u, v);
        }
        assert_eq!(m.solve(), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn matches_brute_force(n in 1usize..9, edges in prop::collection::vec((0usize..9, 0usize..9), 0..14)) {
            let edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (u % n, v % n)).collect();
            let mut m = Matching::new(n);
            for &(u, v) in &edges {
                m.add_edge(u, v);
            }
            let size = m.solve();
            prop_assert_eq!(size, brute_force(n, &edges));
            for v in 0..n {
                if let Some(w) = m.mate(v) {
                    prop_assert_eq!(m.mate(w), Some(v));
                    prop_assert!(edges.contains(&(v, w)) || edges.contains(&(w, v)));
                }
            }
        }
    }
}
