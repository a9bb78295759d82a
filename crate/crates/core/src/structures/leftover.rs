use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ColorId, EdgeColoring};
use crate::structures::tree::TreeShape;

/// A recursive bipartition witnessing a leftover structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum LeftoverTree {
    Leaf {
        vertex: usize,
    },
    Node {
        alpha: ColorId,
        a: Vec<usize>,
        b: Vec<usize>,
        children: Box<[LeftoverTree; 2]>,
    },
}

impl LeftoverTree {
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            LeftoverTree::Leaf { vertex } => vec![*vertex],
            LeftoverTree::Node { a, b, .. } => a.iter().chain(b).copied().collect(),
        }
    }

    pub fn shape(&self) -> TreeShape {
        match self {
            LeftoverTree::Leaf { .. } => TreeShape::Leaf,
            LeftoverTree::Node { children, .. } => {
                TreeShape::node(children[0].shape(), children[1].shape())
            }
        }
    }

    /// Cross colors of all internal nodes, in preorder.
    pub fn colors(&self) -> Vec<ColorId> {
        let mut out = Vec::new();
        self.collect_colors(&mut out);
        out
    }

    fn collect_colors(&self, out: &mut Vec<ColorId>) {
        if let LeftoverTree::Node { alpha, children, .. } = self {
            out.push(*alpha);
            children[0].collect_colors(out);
            children[1].collect_colors(out);
        }
    }

    /// Rechecks every node of the tree against `c`.
    pub fn is_valid_for(&self, c: &EdgeColoring) -> bool {
        self.check(c).is_some()
    }

    fn check(&self, c: &EdgeColoring) -> Option<Vec<ColorId>> {
        match self {
            LeftoverTree::Leaf { vertex } => (*vertex < c.n()).then(Vec::new),
            LeftoverTree::Node { alpha, a, b, children } => {
                if !same_set(children[0].leaves(), a) || !same_set(children[1].leaves(), b) {
                    return None;
                }
                let left = children[0].check(c)?;
                let right = children[1].check(c)?;
                if left.contains(alpha) || right.contains(alpha) {
                    return None;
                }
                if left.iter().any(|x| right.contains(x)) {
                    return None;
                }
                for &u in a {
                    for &v in b {
                        if u == v || c.color(u, v) != *alpha {
                            return None;
                        }
                    }
                }
                let mut all = left;
                all.extend(right);
                all.push(*alpha);
                Some(all)
            }
        }
    }
}

fn same_set(mut x: Vec<usize>, y: &[usize]) -> bool {
    let mut y = y.to_vec();
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

/// Looks for a leftover structure on the clique induced by `s`.
pub fn is_leftover(c: &EdgeColoring, s: &[usize]) -> Result<Option<LeftoverTree>> {
    if s.is_empty() {
        return Err(Error::domain("leftover check needs a nonempty subset"));
    }
    check_subset(c, s)?;
    Ok(classify(c, s))
}

pub(crate) fn check_subset(c: &EdgeColoring, s: &[usize]) -> Result<()> {
    for (i, &v) in s.iter().enumerate() {
        if v >= c.n() {
            return Err(Error::domain(format!("vertex {v} out of range for n = {}", c.n())));
        }
        if s[..i].contains(&v) {
            return Err(Error::domain(format!("vertex {v} repeated in subset")));
        }
    }
    Ok(())
}

fn colors_of(c: &EdgeColoring, s: &[usize]) -> Vec<ColorId> {
    let mut out = Vec::new();
    for (i, &u) in s.iter().enumerate() {
        for &v in &s[i + 1..] {
            let x = c.color(u, v);
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out.sort_unstable();
    out
}

fn classify(c: &EdgeColoring, s: &[usize]) -> Option<LeftoverTree> {
    if s.len() == 1 {
        return Some(LeftoverTree::Leaf { vertex: s[0] });
    }
    let colors = colors_of(c, s);
    // Any leftover clique on k vertices has exactly k - 1 colors.
    if colors.len() != s.len() - 1 {
        return None;
    }
    for &alpha in &colors {
        let Some((a, b)) = split_by(c, s, alpha) else {
            continue;
        };
        let ca = colors_of(c, &a);
        let cb = colors_of(c, &b);
        if ca.contains(&alpha) || cb.contains(&alpha) || ca.iter().any(|x| cb.contains(x)) {
            continue;
        }
        let (Some(left), Some(right)) = (classify(c, &a), classify(c, &b)) else {
            continue;
        };
        return Some(LeftoverTree::Node {
            alpha,
            a,
            b,
            children: Box::new([left, right]),
        });
    }
    None
}

/// Splits `s` into the two components of its non-`alpha` graph, provided there are
/// exactly two and every pair across them is colored `alpha`.
fn split_by(c: &EdgeColoring, s: &[usize], alpha: ColorId) -> Option<(Vec<usize>, Vec<usize>)> {
    let k = s.len();
    let mut comp = vec![usize::MAX; k];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..k {
        if comp[start] != usize::MAX {
            continue;
        }
        if count == 2 {
            return None;
        }
        comp[start] = count;
        stack.push(start);
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if comp[j] == usize::MAX && c.color(s[i], s[j]) != alpha {
                    comp[j] = count;
                    stack.push(j);
                }
            }
        }
        count += 1;
    }
    if count != 2 {
        return None;
    }
    let a: Vec<usize> = (0..k).filter(|&i| comp[i] == 0).map(|i| s[i]).collect();
    let b: Vec<usize> = (0..k).filter(|&i| comp[i] == 1).map(|i| s[i]).collect();
    for &u in &a {
        for &v in &b {
            if c.color(u, v) != alpha {
                return None;
            }
        }
    }
    Some((a, b))
}
