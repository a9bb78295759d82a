//! Binary tree shapes and the synthetic leftover-clique generator.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ColorValue, EdgeColoring, Provenance};

/// An unlabeled full binary tree. Text form: `.` for a leaf, `(LR)` for a node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TreeShape {
    Leaf,
    Node(Box<TreeShape>, Box<TreeShape>),
}

impl TreeShape {
    pub fn node(a: TreeShape, b: TreeShape) -> Self {
        TreeShape::Node(Box::new(a), Box::new(b))
    }

    pub fn leaves(&self) -> usize {
        match self {
            TreeShape::Leaf => 1,
            TreeShape::Node(a, b) => a.leaves() + b.leaves(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bytes: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_at(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::domain(format!("trailing input in tree shape {s:?}")));
        }
        Ok(tree)
    }

    /// The same tree with the children of each node in a fixed order, so that
    /// shapes differing only by left/right swaps compare equal.
    pub fn canonical(&self) -> TreeShape {
        match self {
            TreeShape::Leaf => TreeShape::Leaf,
            TreeShape::Node(a, b) => {
                let (a, b) = (a.canonical(), b.canonical());
                let key = |t: &TreeShape| (t.leaves(), t.to_string());
                if key(&a) <= key(&b) {
                    TreeShape::node(a, b)
                } else {
                    TreeShape::node(b, a)
                }
            }
        }
    }

    /// Every shape with `leaves` leaves (Catalan many), in a fixed order.
    pub fn all(leaves: usize) -> Vec<TreeShape> {
        if leaves == 0 {
            return Vec::new();
        }
        if leaves == 1 {
            return vec![TreeShape::Leaf];
        }
        let mut out = Vec::new();
        for left in 1..leaves {
            let rights = TreeShape::all(leaves - left);
            for a in TreeShape::all(left) {
                for b in &rights {
                    out.push(TreeShape::node(a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// A path-like tree: each node splits off a single leaf.
    pub fn caterpillar(leaves: usize) -> Self {
        assert!(leaves >= 1);
        (1..leaves).fold(TreeShape::Leaf, |t, _| TreeShape::node(t, TreeShape::Leaf))
    }

    /// A tree whose every split is as even as possible.
    pub fn balanced(leaves: usize) -> Self {
        assert!(leaves >= 1);
        if leaves == 1 {
            TreeShape::Leaf
        } else {
            let half = leaves / 2;
            TreeShape::node(TreeShape::balanced(leaves - half), TreeShape::balanced(half))
        }
    }
}

fn parse_at(s: &[u8], pos: &mut usize) -> Result<TreeShape> {
    match s.get(*pos) {
        Some(b'.') => {
            *pos += 1;
            Ok(TreeShape::Leaf)
        }
        Some(b'(') => {
            *pos += 1;
            let a = parse_at(s, pos)?;
            let b = parse_at(s, pos)?;
            if s.get(*pos) != Some(&b')') {
                return Err(Error::domain(format!("expected ')' at offset {pos}")));
            }
            *pos += 1;
            Ok(TreeShape::node(a, b))
        }
        Some(&c) => Err(Error::domain(format!(
            "unexpected {:?} at offset {pos} in tree shape",
            c as char
        ))),
        None => Err(Error::domain("unexpected end of tree shape")),
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeShape::Leaf => f.write_str("."),
            TreeShape::Node(a, b) => write!(f, "({a}{b})"),
        }
    }
}

/// A leftover-structured coloring of `K_p` following `shape`.
///
/// Leaves are placed on a seed-dependent permutation of `0..p`; every internal node
/// gets a fresh color on all pairs it separates, so exactly `p - 1` colors are used.
pub fn make_leftover(shape: &TreeShape, seed: u64) -> EdgeColoring {
    let p = shape.leaves();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..p).collect();
    labels.shuffle(&mut rng);
    let offset = rng.gen::<u32>() as u64;

    let mut matrix = vec![vec![0u64; p]; p];
    let mut next_leaf = 0;
    let mut next_color = 0;
    fill(shape, &labels, &mut next_leaf, &mut next_color, offset, &mut matrix);
    EdgeColoring::build(p, Provenance::synthetic(format!("leftover {shape}")), |u, v| {
        Ok(ColorValue::Label(matrix[u][v]))
    })
    .expect("labels are total")
}

fn fill(
    shape: &TreeShape,
    labels: &[usize],
    next_leaf: &mut usize,
    next_color: &mut u64,
    offset: u64,
    matrix: &mut [Vec<u64>],
) -> Vec<usize> {
    match shape {
        TreeShape::Leaf => {
            let v = labels[*next_leaf];
            *next_leaf += 1;
            vec![v]
        }
        TreeShape::Node(a, b) => {
            let color = offset + *next_color;
            *next_color += 1;
            let left = fill(a, labels, next_leaf, next_color, offset, matrix);
            let right = fill(b, labels, next_leaf, next_color, offset, matrix);
            for &u in &left {
                for &v in &right {
                    matrix[u][v] = color;
                    matrix[v][u] = color;
                }
            }
            left.into_iter().chain(right).collect()
        }
    }
}
