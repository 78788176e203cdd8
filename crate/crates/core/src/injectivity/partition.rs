use serde::{Deserialize, Serialize};

/// Union-find with path compression and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut classes: Vec<Vec<u64>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[r]].push(x as u64);
        }
        // Elements are visited in increasing order, so classes come out
        // sorted internally and ordered by least element.
        Partition { classes }
    }
}

/// A partition of `{0, ..., n-1}`; serialized as a list of sorted lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    classes: Vec<Vec<u64>>,
}

impl Partition {
    /// Normalizes arbitrary blocks: sorts each, then orders by least element.
    ///
    /// # Panics
    ///
    /// Panics if the blocks are empty, overlap, or do not cover `0..n`.
    pub fn from_classes(mut classes: Vec<Vec<u64>>) -> Self {
        for c in classes.iter_mut() {
            assert!(!c.is_empty(), "empty block");
            c.sort_unstable();
        }
        classes.sort();
        let mut all: Vec<u64> = classes.iter().flatten().copied().collect();
        all.sort_unstable();
        assert!(all.iter().enumerate().all(|(i, &x)| x == i as u64), "blocks must partition 0..n");
        Self { classes }
    }

    pub fn singletons(n: u64) -> Self {
        Self {
            classes: (0..n).map(|x| vec![x]).collect(),
        }
    }

    pub fn classes(&self) -> &[Vec<u64>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Size of the underlying set.
    pub fn universe(&self) -> u64 {
        self.classes.iter().map(|c| c.len() as u64).sum()
    }

    pub fn class_of(&self, x: u64) -> &[u64] {
        self.classes
            .iter()
            .find(|c| c.binary_search(&x).is_ok())
            .expect("element in universe")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.classes).expect("serializable")
    }

    /// `{4,5} {0,1,2,3,6,7,8}`-style rendering.
    pub fn to_text(&self) -> String {
        let blocks: Vec<String> = self
            .classes
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        blocks.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dsu_merges_and_sorts() {
        let mut d = DisjointSets::new(6);
        d.union(5, 1);
        d.union(3, 1);
        d.union(0, 2);
        let p = d.into_partition();
        assert_eq!(p.classes(), &[vec![0, 2], vec![1, 3, 5], vec![4]]);
        assert_eq!(p, Partition::from_classes(vec![vec![4], vec![5, 3, 1], vec![2, 0]]));
        assert_eq!(p.to_json(), "[[0,2],[1,3,5],[4]]");
        assert_eq!(p.universe(), 6);
        assert_eq!(p.class_of(3), &[1, 3, 5]);
    }

    #[test]
    #[should_panic]
    fn rejects_overlap() {
        Partition::from_classes(vec![vec![0, 1], vec![1]]);
    }
}
