//! Union-find used to build quotient carriers.

#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        Self { parent: (0..len).collect() }
    }

    pub fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges two classes, keeping the smaller index as the root so the
    /// representative of each class is its least member.
    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }

    /// Class label for every element, numbered in order of least member.
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for i in 0..n {
            let r = self.find(i);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            out[i] = label[r];
        }
        (out, count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_member_is_representative() {
        let mut ds = DisjointSets::new(6);
        ds.union(4, 2);
        ds.union(5, 4);
        ds.union(3, 1);
        assert_eq!(ds.find(5), 2);
        assert_eq!(ds.find(3), 1);
        let (labels, count) = ds.classes();
        assert_eq!(count, 3);
        assert_eq!(labels, vec![0, 1, 2, 1, 2, 2]);
    }
}
