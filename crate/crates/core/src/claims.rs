//! Randomized and exhaustive checks of the structural facts behind the
//! dot-product coloring. Each check reports how many cases it tried and how many
//! failed; a correct implementation never fails.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dotprod::{vertex_to_vector, DotColoring, DotParams};
use crate::error::Result;
use crate::gf::{affine_dim, confines, dot, rank, Elem, FieldVector, GaloisField};
use crate::model::{ColorValue, EdgeColoring};
use crate::structures::{clog2, make_leftover, max_falling_star, TreeShape};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub name: &'static str,
    pub trials: u64,
    pub counterexamples: u64,
    /// Description of the first failing case.
    pub first: Option<String>,
}

impl ClaimCheck {
    fn new(name: &'static str) -> Self {
        ClaimCheck {
            name,
            trials: 0,
            counterexamples: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.counterexamples += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    pub fn holds(&self) -> bool {
        self.counterexamples == 0
    }
}

/// The dot-product coloring on all of `(F_q*)^d`, with the vertex vectors.
pub struct DotInstance {
    pub params: DotParams,
    pub coloring: EdgeColoring,
    pub vectors: Vec<FieldVector>,
}

impl DotInstance {
    pub fn full(q: u32, d: usize) -> Result<Self> {
        let params = DotParams::new(d, GaloisField::new(q)?)?;
        let n = params.vertex_capacity() as usize;
        let vectors = (0..n)
            .map(|i| vertex_to_vector(i, &params))
            .collect::<Result<Vec<_>>>()?;
        let coloring = DotColoring::new(n, params.clone())?.into_coloring();
        Ok(DotInstance { params, coloring, vectors })
    }

    pub fn field(&self) -> &GaloisField {
        self.params.field()
    }

    fn n(&self) -> usize {
        self.vectors.len()
    }

    fn pick(&self, s: &[usize]) -> Vec<&FieldVector> {
        s.iter().map(|&i| &self.vectors[i]).collect()
    }
}

fn show(vs: &[&FieldVector]) -> String {
    let mut out = String::new();
    for v in vs {
        let coords: Vec<u32> = v.coords().iter().map(|e| e.0).collect();
        let _ = write!(out, "{coords:?}");
    }
    out
}

/// A random subset of `inst` of size `2..=max_size`. Half of the draws start
/// from a greedily grown falling star so that long stars are well represented.
fn random_subset(inst: &DotInstance, rng: &mut ChaCha8Rng, max_size: usize) -> Vec<usize> {
    let n = inst.n();
    let size = rng.gen_range(2..=max_size.min(n));
    let mut s: Vec<usize> = Vec::with_capacity(size);
    if rng.gen_bool(0.5) {
        s.push(rng.gen_range(0..n));
        while s.len() < size {
            let c = &inst.coloring;
            let next = (0..n)
                .filter(|v| !s.contains(v))
                .filter(|&v| s.iter().all(|&u| c.color(v, u) == c.color(v, s[0])))
                .choose(rng);
            match next {
                Some(v) => s.push(v),
                None => break,
            }
        }
    }
    while s.len() < size {
        let v = rng.gen_range(0..n);
        if !s.contains(&v) {
            s.push(v);
        }
    }
    s
}

/// A confining pair `A -> B` must satisfy `af(B) <= d - rk(A)`.
///
/// `A` is drawn at random from `(F_q*)^d`; `B` is drawn from one solution set of
/// `{a·x = c_a : a in A}`, which makes `A` confine `B` by construction.
pub fn confinement_bound(q: u32, d: usize, trials: u64, seed: u64) -> Result<ClaimCheck> {
    let field = GaloisField::new(q)?;
    let params = DotParams::new(d, field.clone())?;
    let all: Vec<FieldVector> = (0..params.vertex_capacity() as usize)
        .map(|i| vertex_to_vector(i, &params))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = ClaimCheck::new("confinement bounds affine dimension");
    while check.trials < trials {
        let a_size = rng.gen_range(1..=(d + 1).min(all.len() - 1));
        let a: Vec<&FieldVector> = all.choose_multiple(&mut rng, a_size).collect();
        let anchor = all.choose(&mut rng).unwrap();
        if a.contains(&anchor) {
            continue;
        }
        let targets: Vec<Elem> = a.iter().map(|x| dot(&field, x.coords(), anchor.coords())).collect::<Result<_>>()?;
        let solutions: Vec<&FieldVector> = all
            .iter()
            .filter(|x| !a.contains(x))
            .filter(|x| {
                a.iter()
                    .zip(&targets)
                    .all(|(ai, &t)| dot(&field, ai.coords(), x.coords()).unwrap() == t)
            })
            .collect();
        let b_size = rng.gen_range(1..=solutions.len().min(6));
        let b: Vec<&FieldVector> = solutions.choose_multiple(&mut rng, b_size).copied().collect();
        let by_construction = confines(&field, &a, &b)?;
        let rk = rank(&field, &a)?;
        let af = affine_dim(&field, &b)?;
        check.record(by_construction && af + rk <= d, || {
            format!("q={q} d={d} A={} B={} rk={rk} af={af}", show(&a), show(&b))
        });
    }
    Ok(check)
}

/// Disjoint `A`, `B` completely joined in one color: one of them confines the other.
pub fn confinement_either_way(inst: &DotInstance, trials: u64, seed: u64) -> Result<ClaimCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = &inst.coloring;
    let n = inst.n();
    let mut check = ClaimCheck::new("monochromatic joins are confining");
    while check.trials < trials {
        let a0 = rng.gen_range(0..n);
        let b0 = rng.gen_range(0..n);
        if a0 == b0 {
            continue;
        }
        let alpha = c.color(a0, b0);
        let (mut a, mut b) = (vec![a0], vec![b0]);
        for _ in 0..rng.gen_range(0..6) {
            let grow_a = rng.gen_bool(0.5);
            let (side, other) = if grow_a { (&a, &b) } else { (&b, &a) };
            let cand = (0..n)
                .filter(|v| !side.contains(v) && !other.contains(v))
                .filter(|&v| other.iter().all(|&u| c.color(v, u) == alpha))
                .choose(&mut rng);
            if let Some(v) = cand {
                if grow_a {
                    a.push(v);
                } else {
                    b.push(v);
                }
            }
        }
        let (va, vb) = (inst.pick(&a), inst.pick(&b));
        let ok = confines(inst.field(), &va, &vb)? || confines(inst.field(), &vb, &va)?;
        check.record(ok, || format!("A={} B={}", show(&va), show(&vb)));
    }
    Ok(check)
}

/// Falling stars span: the first `t - 1` vectors of a `t`-star are independent,
/// so `rk(T) >= FS(T) - 1`; inside a monochromatic neighborhood `rk(T) >= FS(T)`.
pub fn star_rank(inst: &DotInstance, trials: u64, seed: u64, max_size: usize) -> Result<ClaimCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = &inst.coloring;
    let mut check = ClaimCheck::new("falling stars bound rank");
    while check.trials < trials {
        let s = random_subset(inst, &mut rng, max_size);
        let star = max_falling_star(c, &s, max_size)?;
        let t = star.len();
        let prefix = inst.pick(&star[..t - 1]);
        let vs = inst.pick(&s);
        let rk = rank(inst.field(), &vs)?;
        let prefix_rk = rank(inst.field(), &prefix)?;
        let mut ok = prefix_rk == t - 1 && rk + 1 >= t;
        // Any outside vertex joined to all of s in one color forces the full bound.
        if (0..inst.n())
            .filter(|v| !s.contains(v))
            .any(|v| s.iter().all(|&u| c.color(v, u) == c.color(v, s[0])))
        {
            ok &= rk >= t;
        }
        check.record(ok, || format!("S={} FS={t} rk={rk}", show(&vs)));
    }
    Ok(check)
}

/// `af(S) >= FS(S) - 1`.
pub fn star_affine(inst: &DotInstance, trials: u64, seed: u64, max_size: usize) -> Result<ClaimCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = ClaimCheck::new("falling stars bound affine dimension");
    while check.trials < trials {
        let s = random_subset(inst, &mut rng, max_size);
        let t = max_falling_star(&inst.coloring, &s, max_size)?.len();
        let vs = inst.pick(&s);
        let af = affine_dim(inst.field(), &vs)?;
        check.record(af + 1 >= t, || format!("S={} FS={t} af={af}", show(&vs)));
    }
    Ok(check)
}

/// Every leftover `p`-clique contains a falling star of size `⌈log₂ p⌉ + 1`.
/// Runs every tree shape with `2..=max_p` leaves under `seeds` vertex labelings.
pub fn leftover_star_bound(max_p: usize, seeds: u64) -> Result<ClaimCheck> {
    let mut check = ClaimCheck::new("leftover cliques contain long falling stars");
    for p in 1..=max_p {
        for shape in TreeShape::all(p) {
            for seed in 0..seeds {
                let c = make_leftover(&shape, seed);
                let all: Vec<usize> = (0..p).collect();
                let fs = max_falling_star(&c, &all, p.max(1))?.len();
                let need = clog2(p as u64) as usize + 1;
                check.record(fs >= need, || format!("shape {shape} seed {seed}: FS={fs} < {need}"));
            }
        }
    }
    Ok(check)
}

/// Edges sharing a DOT or ZERO color share their dot product. One trial per
/// monochromatic edge pair.
pub fn dot_property(inst: &DotInstance) -> Result<ClaimCheck> {
    let mut check = ClaimCheck::new("DOT and ZERO classes have constant dot products");
    let mut classes: HashMap<ColorValue, Vec<Elem>> = HashMap::new();
    for u in 0..inst.n() {
        for v in u + 1..inst.n() {
            let value = inst.coloring.color_value(u, v)?;
            let ColorValue::Dot(dc) = &value else { continue };
            if dc.class().has_dot_property() {
                let x = dot(inst.field(), inst.vectors[u].coords(), inst.vectors[v].coords())?;
                classes.entry(value).or_default().push(x);
            }
        }
    }
    let mut keys: Vec<&ColorValue> = classes.keys().collect();
    keys.sort();
    for key in keys {
        let dots = &classes[key];
        let first = dots[0];
        // Comparing each edge with the first is equivalent to comparing all pairs.
        let bad = dots.iter().filter(|&&x| x != first).count() as u64;
        let pairs = dots.len() as u64 * (dots.len() as u64 - 1) / 2;
        check.trials += pairs;
        if bad > 0 {
            check.counterexamples += bad;
            check.first.get_or_insert_with(|| format!("color {key}"));
        }
    }
    Ok(check)
}
