//! Spanning sets for equivariant weight matrices, their feature and bias
//! extensions, products for local symmetries, and layer evaluation.
//!
//! Element order is part of the public contract since it fixes which weight
//! multiplies which matrix:
//!
//! * O(n): `E_β` over Brauer diagrams in canonical order.
//! * Sp(n): `F_β` in the same order.
//! * SO(n): all `E_β`, then all `H_α` in (l+k)\n-diagram order.
//! * Local symmetries: Kronecker products, lexicographic in the factor
//!   element indices with the first factor outermost.
//! * Features: each base element expands to `d_l * d_k` elements, one per
//!   feature matrix unit `(i, j)`, `i` outer.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::diagrams::{enumerate_brauer, enumerate_grood};
use crate::error::{Error, Result};
use crate::groups::GroupKind;
use crate::spanmat::{build_e, build_f, build_h, Diagram, MatrixKind, SparseEquivariantMatrix};
use crate::sparse::SparseMatrix;

/// One group acting on `(R^n)^{⊗k} -> (R^n)^{⊗l}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub group: GroupKind,
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

impl Factor {
    pub fn new(group: GroupKind, n: usize, k: usize, l: usize) -> Result<Self> {
        group.check_dimension(n)?;
        Ok(Self { group, n, k, l })
    }

    pub fn rows(&self) -> usize {
        self.n.pow(self.l as u32)
    }

    pub fn cols(&self) -> usize {
        self.n.pow(self.k as u32)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) k={} l={}", self.group, self.n, self.k, self.l)
    }
}

/// Parses `GROUP,n,k,l`, e.g. `SO,3,1,2`.
impl FromStr for Factor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::InvalidExport(format!("factor `{s}` is not GROUP,n,k,l"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let group: GroupKind = parts[0].parse()?;
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        Factor::new(group, num(parts[1])?, num(parts[2])?, num(parts[3])?)
    }
}

/// One spanning element with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanElement {
    /// One diagram per factor.
    pub diagrams: Vec<Diagram>,
    /// One kind per factor.
    pub kinds: Vec<MatrixKind>,
    /// Feature matrix unit `(i, j)`, 1-based, when features are attached.
    pub feature: Option<(usize, usize)>,
    pub matrix: SparseMatrix,
}

impl SpanElement {
    pub fn diagram_label(&self) -> String {
        self.diagrams
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ⊗ ")
    }

    pub fn kind_label(&self) -> String {
        self.kinds.iter().map(ToString::to_string).collect::<Vec<_>>().join("⊗")
    }
}

impl From<SparseEquivariantMatrix> for SpanElement {
    fn from(m: SparseEquivariantMatrix) -> Self {
        Self {
            diagrams: vec![m.source],
            kinds: vec![m.kind],
            feature: None,
            matrix: m.matrix,
        }
    }
}

/// An ordered spanning set for a space of equivariant matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanningSet {
    pub factors: Vec<Factor>,
    pub d_k: usize,
    pub d_l: usize,
    pub elements: Vec<SpanElement>,
}

impl SpanningSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `Π n_i^{l_i} · d_l`.
    pub fn rows(&self) -> usize {
        self.factors.iter().map(Factor::rows).product::<usize>() * self.d_l
    }

    /// `Π n_i^{k_i} · d_k`.
    pub fn cols(&self) -> usize {
        self.factors.iter().map(Factor::cols).product::<usize>() * self.d_k
    }

    pub fn matrices(&self) -> impl Iterator<Item = &SparseMatrix> {
        self.elements.iter().map(|e| &e.matrix)
    }
}

/// The spanning matrices of `Hom_G((R^n)^{⊗k}, (R^n)^{⊗l})` before wrapping.
pub fn spanning_matrices(group: GroupKind, n: usize, k: usize, l: usize) -> Result<Vec<SparseEquivariantMatrix>> {
    group.check_dimension(n)?;
    let brauer = enumerate_brauer(k, l);
    let mut out = Vec::with_capacity(brauer.len());
    match group {
        GroupKind::O => {
            for d in &brauer {
                out.push(build_e(d, n)?);
            }
        }
        GroupKind::Sp => {
            for d in &brauer {
                out.push(build_f(d, n)?);
            }
        }
        GroupKind::SO => {
            for d in &brauer {
                out.push(build_e(d, n)?);
            }
            for d in enumerate_grood(k, l, n) {
                out.push(build_h(&d, n)?);
            }
        }
    }
    Ok(out)
}

/// Spanning set for `Hom_G((R^n)^{⊗k}, (R^n)^{⊗l})`. Possibly empty, never
/// deduplicated.
pub fn spanning_set(group: GroupKind, n: usize, k: usize, l: usize) -> Result<SpanningSet> {
    let factor = Factor::new(group, n, k, l)?;
    Ok(SpanningSet {
        factors: vec![factor],
        d_k: 1,
        d_l: 1,
        elements: spanning_matrices(group, n, k, l)?
            .into_iter()
            .map(SpanElement::from)
            .collect(),
    })
}

/// Spanning set for bias vectors in `(R^n)^{⊗l}`, as `n^l x 1` columns.
pub fn bias_set(group: GroupKind, n: usize, l: usize) -> Result<SpanningSet> {
    spanning_set(group, n, 0, l)
}

/// Tensors every element with every `d_l x d_k` feature matrix unit.
pub fn with_features(set: &SpanningSet, d_k: usize, d_l: usize) -> Result<SpanningSet> {
    if d_k == 0 || d_l == 0 {
        return Err(Error::InvalidFeatureDims { d_k, d_l });
    }
    if set.d_k != 1 || set.d_l != 1 {
        return Err(Error::FeaturesAlreadyAttached);
    }
    let mut elements = Vec::with_capacity(set.len() * d_k * d_l);
    for base in &set.elements {
        for i in 0..d_l {
            for j in 0..d_k {
                elements.push(SpanElement {
                    diagrams: base.diagrams.clone(),
                    kinds: base.kinds.clone(),
                    feature: Some((i + 1, j + 1)),
                    matrix: base.matrix.kron(&SparseMatrix::unit(d_l, d_k, i, j)),
                });
            }
        }
    }
    Ok(SpanningSet {
        factors: set.factors.clone(),
        d_k,
        d_l,
        elements,
    })
}

/// Spanning set for a product group acting factor-wise: all Kronecker
/// products of per-factor spanning elements.
pub fn local_spanning_set(factors: &[Factor]) -> Result<SpanningSet> {
    let (first, rest) = factors.split_first().ok_or(Error::NoFactors)?;
    let mut acc = spanning_set(first.group, first.n, first.k, first.l)?;
    for factor in rest {
        let next = spanning_set(factor.group, factor.n, factor.k, factor.l)?;
        let mut elements = Vec::with_capacity(acc.len() * next.len());
        for a in &acc.elements {
            for b in &next.elements {
                elements.push(SpanElement {
                    diagrams: a.diagrams.iter().chain(&b.diagrams).cloned().collect(),
                    kinds: a.kinds.iter().chain(&b.kinds).copied().collect(),
                    feature: None,
                    matrix: a.matrix.kron(&b.matrix),
                });
            }
        }
        acc.factors.push(*factor);
        acc.elements = elements;
    }
    Ok(acc)
}

/// Pointwise nonlinearity applied after each layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Identity,
    Relu,
    Tanh,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::Relu => x.max(0.0),
            Activation::Tanh => x.tanh(),
        }
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identity" | "id" | "linear" => Ok(Activation::Identity),
            "relu" => Ok(Activation::Relu),
            "tanh" => Ok(Activation::Tanh),
            _ => Err(Error::UnknownActivation(s.to_string())),
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Activation::Identity => "identity",
            Activation::Relu => "relu",
            Activation::Tanh => "tanh",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Bias {
    pub set: Arc<SpanningSet>,
    pub weights: Vec<f64>,
}

/// A weighted combination of spanning elements, an optional bias and an activation.
#[derive(Clone, Debug)]
pub struct LayerSpec {
    pub set: Arc<SpanningSet>,
    pub weights: Vec<f64>,
    pub bias: Option<Bias>,
    pub activation: Activation,
}

impl LayerSpec {
    pub fn new(set: Arc<SpanningSet>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != set.len() {
            return Err(Error::WeightCount {
                expected: set.len(),
                got: weights.len(),
            });
        }
        Ok(Self {
            set,
            weights,
            bias: None,
            activation: Activation::Identity,
        })
    }

    pub fn with_bias(mut self, set: Arc<SpanningSet>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != set.len() {
            return Err(Error::WeightCount {
                expected: set.len(),
                got: weights.len(),
            });
        }
        if set.cols() != 1 || set.rows() != self.set.rows() {
            return Err(Error::ShapeMismatch {
                expected_rows: self.set.rows(),
                expected_cols: 1,
                rows: set.rows(),
                cols: set.cols(),
            });
        }
        self.bias = Some(Bias { set, weights });
        Ok(self)
    }

    pub fn with_activation(mut self, activation: Activation) -> Self {
        self.activation = activation;
        self
    }

    pub fn input_dim(&self) -> usize {
        self.set.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.set.rows()
    }
}

/// Dense `Σ_i λ_i · element_i`.
pub fn assemble_layer(spec: &LayerSpec) -> Result<DMatrix<f64>> {
    if spec.weights.len() != spec.set.len() {
        return Err(Error::WeightCount {
            expected: spec.set.len(),
            got: spec.weights.len(),
        });
    }
    let mut acc = DMatrix::zeros(spec.set.rows(), spec.set.cols());
    for (w, m) in spec.weights.iter().zip(spec.set.matrices()) {
        if *w != 0.0 {
            m.add_scaled_to(*w, &mut acc);
        }
    }
    Ok(acc)
}

/// Dense bias column; zero when the layer has no bias.
pub fn assemble_bias(spec: &LayerSpec) -> Result<DVector<f64>> {
    let mut acc = DMatrix::zeros(spec.output_dim(), 1);
    if let Some(bias) = &spec.bias {
        if bias.weights.len() != bias.set.len() {
            return Err(Error::WeightCount {
                expected: bias.set.len(),
                got: bias.weights.len(),
            });
        }
        for (w, m) in bias.weights.iter().zip(bias.set.matrices()) {
            m.add_scaled_to(*w, &mut acc);
        }
    }
    Ok(acc.column(0).into_owned())
}

/// Runs `x` through the layers in order: `σ(C x + c)` at each step.
pub fn forward(network: &[LayerSpec], x: &[f64]) -> Result<Vec<f64>> {
    let mut current = DVector::from_column_slice(x);
    for layer in network {
        if current.len() != layer.input_dim() {
            return Err(Error::LengthMismatch {
                expected: layer.input_dim(),
                got: current.len(),
            });
        }
        let c = assemble_layer(layer)?;
        let b = assemble_bias(layer)?;
        current = (c * current + b).map(|v| layer.activation.apply(v));
    }
    Ok(current.iter().copied().collect())
}
