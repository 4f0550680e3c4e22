use crate::error::{Error, Result};

/// A finite poset; `leq[a][b]` means `a <= b`. Elements stand for basic opens,
/// so `q <= p` carries a restriction from `p` to `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Reflexive-transitive closure of `relations` (pairs `a <= b`); cycles are rejected.
    pub fn new(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::InvalidInput(format!("duplicate poset element {a}")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::InvalidInput(format!("relation ({a}, {b}) outside a poset of size {n}")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidInput(format!("order has a cycle through {} and {}", names[i], names[j])));
                }
            }
        }
        Ok(FinitePoset { names, leq })
    }

    pub fn from_names(names: &[&str], relations: &[(&str, &str)]) -> Result<Self> {
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            owned
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::InvalidInput(format!("unknown poset element {s}")))
        };
        let rel = relations.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
        Self::new(owned, &rel)
    }

    /// The discrete poset on the given names.
    pub fn antichain(names: &[&str]) -> Self {
        Self::from_names(names, &[]).expect("distinct names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// All `(p, q)` with `q < p`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if p != q && self.leq[q][p] {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// Covering pairs `(p, q)`: `q < p` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs().into_iter().filter(|&(p, q)| self.between(q, p).is_empty()).collect()
    }

    /// Elements `r` with `q < r < p`.
    pub fn between(&self, q: usize, p: usize) -> Vec<usize> {
        (0..self.len()).filter(|&r| r != q && r != p && self.leq[q][r] && self.leq[r][p]).collect()
    }

    /// Connected components of the comparability graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            label[start] = c;
            while let Some(a) = stack.pop() {
                members.push(a);
                for b in 0..n {
                    if label[b] == usize::MAX && (self.leq[a][b] || self.leq[b][a]) {
                        label[b] = c;
                        stack.push(b);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The greatest element of a set, if any.
    pub fn top(&self, set: &[usize]) -> Option<usize> {
        set.iter().copied().find(|&t| set.iter().all(|&a| self.leq[a][t]))
    }

    pub fn is_down_set(&self, set: &[usize]) -> bool {
        set.iter().all(|&a| (0..self.len()).all(|b| !self.leq[b][a] || set.contains(&b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_components() {
        let p = FinitePoset::from_names(&["U", "V", "X", "Z"], &[("U", "V"), ("V", "X")]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.components(), vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(p.top(&[0, 1, 2]), Some(2));
        assert_eq!(p.covers(), vec![(1, 0), (2, 1)]);
        assert!(p.is_down_set(&[0, 1]));
        assert!(!p.is_down_set(&[1]));
    }

    #[test]
    fn cycles_rejected() {
        assert!(FinitePoset::from_names(&["a", "b"], &[("a", "b"), ("b", "a")]).is_err());
    }
}
