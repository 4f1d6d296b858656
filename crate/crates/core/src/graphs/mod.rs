//! Graph constructors, equitable partitions and divisor matrices, and the
//! family of 16-vertex graphs sharing the distance divisor of the 4-cube.

mod canon;
mod edgelist;
mod variants;

pub use canon::{canonical_form, CanonicalForm};
pub use edgelist::{parse_edge_list, write_edge_list};
pub use variants::{
    enumerate_q4_variants, hypercube_divisor, q4_variant, q4_variant_pair, BlockPattern,
};

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg::{relative_gap, CMatrix, Matrix};
use crate::ratfun::{FloatComplex, Scalar, C64};
use crate::ratmat::RatMatrix;
use crate::tolerance::float_eps;
use crate::reduction::{reduce_frame_at, resolvent, resolvent_block, sample_points, LabeledMatrix, SAMPLE_TOL};

fn adjacency<T: Scalar>(n: usize, edge: impl Fn(usize, usize) -> bool) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| if i != j && edge(i, j) { T::one() } else { T::zero() })
}

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Path on `n` vertices labeled "1".."n".
pub fn path<T: Scalar>(n: usize) -> LabeledMatrix<T> {
    LabeledMatrix::new(numbered(n), adjacency(n, |i, j| i.abs_diff(j) == 1)).expect("square")
}

/// Cycle on `n` vertices labeled "1".."n".
pub fn cycle<T: Scalar>(n: usize) -> LabeledMatrix<T> {
    let adj = |i: usize, j: usize| {
        let d = i.abs_diff(j);
        d == 1 || (n > 2 && d == n - 1)
    };
    LabeledMatrix::new(numbered(n), adjacency(n, adj)).expect("square")
}

/// Complete graph on `n` vertices labeled "1".."n".
pub fn complete<T: Scalar>(n: usize) -> LabeledMatrix<T> {
    LabeledMatrix::new(numbered(n), adjacency(n, |_, _| true)).expect("square")
}

/// Hypercube Qₙ. Vertex `i` is labeled by the n-bit binary expansion of `i`.
pub fn hypercube<T: Scalar>(n: usize) -> LabeledMatrix<T> {
    let size = 1usize << n;
    let labels = (0..size).map(|i| format!("{i:0n$b}")).collect();
    LabeledMatrix::new(labels, adjacency(size, |i, j| (i ^ j).is_power_of_two())).expect("square")
}

/// The label at maximal distance from `label` in a hypercube.
pub fn antipode(label: &str) -> String {
    label.chars().map(|c| if c == '0' { '1' } else { '0' }).collect()
}

/// A□B = A⊗I + I⊗B, with labels "g,h" and h varying fastest.
pub fn cartesian_product<T: Scalar>(g: &LabeledMatrix<T>, h: &LabeledMatrix<T>) -> LabeledMatrix<T> {
    let (n, m) = (g.size(), h.size());
    let (a, b) = (g.matrix(), h.matrix());
    let mat = Matrix::from_fn(n * m, n * m, |r, c| {
        let (i, k) = (r / m, r % m);
        let (j, l) = (c / m, c % m);
        let mut v = T::zero();
        if k == l {
            v = v + a[(i, j)].clone();
        }
        if i == j {
            v = v + b[(k, l)].clone();
        }
        v
    });
    let labels = g
        .labels()
        .iter()
        .flat_map(|x| h.labels().iter().map(move |y| format!("{x},{y}")))
        .collect();
    LabeledMatrix::new(labels, mat).expect("square")
}

/// Ordered partition Π = (V₁, …, V_k) of a vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    classes: Vec<Vec<String>>,
}

impl VertexPartition {
    /// Rejects empty classes and labels that occur twice.
    pub fn new(classes: Vec<Vec<String>>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for c in &classes {
            if c.is_empty() {
                return Err(Error::InvalidPartition("empty class".into()));
            }
            for l in c {
                if !seen.insert(l.as_str()) {
                    return Err(Error::InvalidPartition(format!("label `{l}` in two classes")));
                }
            }
        }
        Ok(VertexPartition { classes })
    }

    /// Every vertex in its own class, in label order.
    pub fn discrete<T: Scalar>(a: &LabeledMatrix<T>) -> Self {
        VertexPartition { classes: a.labels().iter().map(|l| vec![l.clone()]).collect() }
    }

    pub fn classes(&self) -> &[Vec<String>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Class index of every vertex of `a`; fails unless Π covers exactly the labels of `a`.
    pub fn class_of<T: Scalar>(&self, a: &LabeledMatrix<T>) -> Result<Vec<usize>> {
        let mut class = vec![usize::MAX; a.size()];
        for (k, c) in self.classes.iter().enumerate() {
            for l in c {
                class[a.index_of(l)?] = k;
            }
        }
        if let Some(i) = class.iter().position(|&k| k == usize::MAX) {
            return Err(Error::InvalidPartition(format!("label `{}` not covered", a.labels()[i])));
        }
        Ok(class)
    }

    /// The n×k 0/1 indicator matrix P.
    pub fn indicator<T: Scalar>(&self, a: &LabeledMatrix<T>) -> Result<Matrix<T>> {
        let class = self.class_of(a)?;
        Ok(Matrix::from_fn(a.size(), self.len(), |i, k| if class[i] == k { T::one() } else { T::zero() }))
    }
}

/// Two vertices of one class with different numbers of neighbors (by weight) in another.
#[derive(Clone, Debug, PartialEq)]
pub struct EquitableWitness<T: Scalar> {
    pub class: usize,
    pub target: usize,
    pub first: (String, T),
    pub second: (String, T),
}

/// Outcome of [`is_equitable`].
#[derive(Clone, Debug, PartialEq)]
pub enum Equitability<T: Scalar> {
    /// The k×k divisor d with AP = Pd.
    Equitable(Matrix<T>),
    NotEquitable(EquitableWitness<T>),
}

impl<T: Scalar> Equitability<T> {
    pub fn is_equitable(&self) -> bool {
        matches!(self, Equitability::Equitable(_))
    }

    pub fn divisor(&self) -> Option<&Matrix<T>> {
        match self {
            Equitability::Equitable(d) => Some(d),
            Equitability::NotEquitable(_) => None,
        }
    }
}

/// Checks that every vertex of Vᵢ has the same total weight into each Vⱼ.
pub fn is_equitable<T: Scalar>(a: &LabeledMatrix<T>, pi: &VertexPartition) -> Result<Equitability<T>> {
    let p = pi.indicator(a)?;
    let sums = a.matrix().mul(&p)?;
    let k = pi.len();
    let mut data = vec![T::zero(); k * k];
    for (ci, class) in pi.classes().iter().enumerate() {
        let first = a.index_of(&class[0])?;
        for l in &class[1..] {
            let v = a.index_of(l)?;
            for cj in 0..k {
                let (x, y) = (&sums[(first, cj)], &sums[(v, cj)]);
                let differ = if T::EXACT { x != y } else { x.sub_ref(y).abs() > float_eps() * 1f64.max(x.abs()) };
                if differ {
                    return Ok(Equitability::NotEquitable(EquitableWitness {
                        class: ci,
                        target: cj,
                        first: (class[0].clone(), x.clone()),
                        second: (l.clone(), y.clone()),
                    }));
                }
            }
        }
        for cj in 0..k {
            data[ci * k + cj] = sums[(first, cj)].clone();
        }
    }
    Ok(Equitability::Equitable(Matrix::new(k, k, data)?))
}

fn require_equitable<T: Scalar>(a: &LabeledMatrix<T>, pi: &VertexPartition) -> Result<Matrix<T>> {
    match is_equitable(a, pi)? {
        Equitability::Equitable(d) => Ok(d),
        Equitability::NotEquitable(w) => Err(Error::NotEquitable(format!(
            "`{}` and `{}` of class {} have {} and {} neighbors in class {}",
            w.first.0,
            w.second.0,
            w.class + 1,
            w.first.1.to_c64(),
            w.second.1.to_c64(),
            w.target + 1
        ))),
    }
}

/// P with each class indicator scaled by 1/√|class|.
pub fn normalized_indicator<T: Scalar>(a: &LabeledMatrix<T>, pi: &VertexPartition) -> Result<Matrix<FloatComplex>> {
    require_equitable(a, pi)?;
    let sizes = pi.sizes();
    let p: Matrix<FloatComplex> = pi.indicator(a)?.cast();
    Ok(Matrix::from_fn(p.rows(), p.cols(), |i, k| {
        FloatComplex(p[(i, k)].0 / (sizes[k] as f64).sqrt())
    }))
}

/// d = PᵀAP with the normalized indicator P; symmetric when A is.
pub fn symmetrized_divisor<T: Scalar>(a: &LabeledMatrix<T>, pi: &VertexPartition) -> Result<Matrix<FloatComplex>> {
    let p = normalized_indicator(a, pi)?;
    p.transpose().mul(&a.matrix().cast())?.mul(&p)
}

/// Whether the reduction onto the normalized indicator frame is the constant
/// symmetrized divisor.
///
/// The exact backend avoids square roots: with the 0/1 indicator P, D = PᵀP and
/// H = Pᵀ(λI - A)⁻¹P, the reduction is D^{1/2}(λI - H⁻¹D)D^{-1/2}, so it suffices
/// that λI - H⁻¹D equals the row-sum divisor. The float backend compares the
/// reduction with the symmetrized divisor at 10 sample points.
pub fn divisor_is_reduction_check<T: Scalar>(a: &LabeledMatrix<T>, pi: &VertexPartition) -> Result<bool> {
    let d = require_equitable(a, pi)?;
    if T::EXACT {
        let p = pi.indicator(a)?;
        let h = resolvent_block(&resolvent(a.matrix()), &p.transpose(), &p)?;
        let dd = RatMatrix::from_scalar(&p.transpose().mul(&p)?);
        let lhs = h.inverse()?.mul(&dd)?.lambda_minus_self()?;
        return Ok(lhs == RatMatrix::from_scalar(&d));
    }
    let p = normalized_indicator(a, pi)?.to_cmatrix();
    let ds = symmetrized_divisor(a, pi)?.to_cmatrix();
    let ac = a.to_cmatrix();
    let poles: Vec<C64> = crate::linalg::eigenvalues(&ac);
    for z in sample_points(&poles, 10) {
        let r: CMatrix = reduce_frame_at(&ac, &p, z)?;
        if relative_gap(&r, &ds) > SAMPLE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Vertices grouped by graph distance from `v`, nearest first.
pub fn distance_partition<T: Scalar>(a: &LabeledMatrix<T>, v: &str) -> Result<VertexPartition> {
    let n = a.size();
    let start = a.index_of(v)?;
    let m = a.matrix();
    let mut dist = vec![usize::MAX; n];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for w in 0..n {
            if w != u && dist[w] == usize::MAX && !m[(u, w)].is_zero() {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    if dist.contains(&usize::MAX) {
        return Err(Error::DisconnectedGraph);
    }
    let depth = dist.iter().copied().max().unwrap_or(0);
    let classes = (0..=depth)
        .map(|k| (0..n).filter(|&i| dist[i] == k).map(|i| a.labels()[i].clone()).collect())
        .collect();
    VertexPartition::new(classes)
}
