//! Finite-dimensional C*-algebras as direct sums of full matrix algebras.
//!
//! An [`AlgebraShape`] `(d₁, …, dₙ)` stands for `B(C^d₁) ⊕ … ⊕ B(C^dₙ)`,
//! realised as block-diagonal matrices on `C^(d₁+…+dₙ)` with blocks placed
//! in declaration order. Composite systems stay on the flat Kronecker
//! layout of [`crate::matcore`]; their block structure is described by a
//! per-basis-vector block label rather than by reordering the basis.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct AlgebraShape {
    block_dims: Vec<usize>,
}

impl AlgebraShape {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidShape("no blocks".into()));
        }
        if block_dims.contains(&0) {
            return Err(Error::InvalidShape(format!("zero-sized block in {block_dims:?}")));
        }
        Ok(Self { block_dims })
    }

    /// `B(C^d)`.
    pub fn irreducible(d: usize) -> Self {
        Self::new(vec![d]).expect("dimension must be positive")
    }

    /// The commutative algebra `C^n` (n one-dimensional blocks).
    pub fn classical(n: usize) -> Self {
        Self::new(vec![1; n]).expect("need at least one outcome")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn is_classical(&self) -> bool {
        self.block_dims.iter().all(|&d| d == 1)
    }

    pub fn is_irreducible(&self) -> bool {
        self.block_dims.len() == 1
    }

    /// Index of the first basis vector of each block.
    pub fn block_offsets(&self) -> Vec<usize> {
        self.block_dims
            .iter()
            .scan(0, |acc, &d| {
                let start = *acc;
                *acc += d;
                Some(start)
            })
            .collect()
    }

    /// Block index of every basis vector of the embedding space.
    pub fn block_labels(&self) -> Vec<usize> {
        self.block_dims
            .iter()
            .enumerate()
            .flat_map(|(j, &d)| std::iter::repeat_n(j, d))
            .collect()
    }

    /// Projector `P_j` onto the `j`-th summand inside the embedding space.
    pub fn block_projector(&self, j: usize) -> ComplexMatrix {
        let labels = self.block_labels();
        let mut p = matcore::zeros(self.total_dim());
        for (i, &l) in labels.iter().enumerate() {
            if l == j {
                p[(i, i)] = matcore::real(1.0);
            }
        }
        p
    }
}

impl TryFrom<Vec<usize>> for AlgebraShape {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AlgebraShape> for Vec<usize> {
    fn from(s: AlgebraShape) -> Self {
        s.block_dims
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.block_dims.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// An element of the algebra, stored block by block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    shape: AlgebraShape,
    blocks: Vec<ComplexMatrix>,
}

impl AlgebraElement {
    pub fn new(shape: AlgebraShape, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::DimensionMismatch {
                expected: shape.num_blocks(),
                found: blocks.len(),
            });
        }
        for (b, &d) in blocks.iter().zip(shape.block_dims()) {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: b.nrows().max(b.ncols()),
                });
            }
        }
        Ok(Self { shape, blocks })
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<ComplexMatrix> {
        self.blocks
    }
}

/// Places the blocks of `e` along the diagonal of a `totalDim × totalDim` matrix.
pub fn embed(e: &AlgebraElement) -> ComplexMatrix {
    let n = e.shape.total_dim();
    let mut m = matcore::zeros(n);
    for (block, start) in e.blocks.iter().zip(e.shape.block_offsets()) {
        m.view_mut((start, start), block.shape()).copy_from(block);
    }
    m
}

/// `P(m) = Σⱼ Pⱼ m Pⱼ`, returned as a block list.
pub fn project(m: &ComplexMatrix, shape: &AlgebraShape) -> Result<AlgebraElement> {
    check_square(m, shape.total_dim())?;
    let blocks = shape
        .block_dims()
        .iter()
        .zip(shape.block_offsets())
        .map(|(&d, start)| m.view((start, start), (d, d)).into_owned())
        .collect();
    AlgebraElement::new(shape.clone(), blocks)
}

/// `P(m)` in embedded form: every entry between different blocks set to zero.
pub fn project_matrix(m: &ComplexMatrix, shape: &AlgebraShape) -> Result<ComplexMatrix> {
    check_square(m, shape.total_dim())?;
    Ok(mask_by_labels(m, &shape.block_labels()))
}

/// Block structure of `𝔄_A ⊗ 𝔄_B`: all products `dᵢ·eⱼ` in lexicographic `(i, j)` order.
pub fn tensor_shape(a: &AlgebraShape, b: &AlgebraShape) -> AlgebraShape {
    let dims = a
        .block_dims()
        .iter()
        .flat_map(|&da| b.block_dims().iter().map(move |&db| da * db))
        .collect();
    AlgebraShape::new(dims).expect("products of positive dimensions")
}

/// Tensor-algebra block label of every Kronecker basis vector `|i⟩⊗|j⟩`.
/// Labels index the blocks of [`tensor_shape`].
pub fn tensor_labels(a: &AlgebraShape, b: &AlgebraShape) -> Vec<usize> {
    let (la, lb) = (a.block_labels(), b.block_labels());
    let nb = b.num_blocks();
    la.iter().flat_map(|&x| lb.iter().map(move |&y| x * nb + y)).collect()
}

/// Position of each Kronecker basis vector in the block-ordered basis of
/// [`tensor_shape`]. Conjugating by this permutation turns an element of
/// `𝔄_A ⊗ 𝔄_B` on the Kronecker layout into a contiguous block-diagonal matrix.
pub fn tensor_block_order(a: &AlgebraShape, b: &AlgebraShape) -> Vec<usize> {
    let labels = tensor_labels(a, b);
    let mut order: Vec<usize> = (0..labels.len()).collect();
    // stable sort keeps a-slow, b-fast order inside each block
    order.sort_by_key(|&k| labels[k]);
    let mut position = vec![0; labels.len()];
    for (pos, &k) in order.iter().enumerate() {
        position[k] = pos;
    }
    position
}

/// `(P_A ⊗ P_B)(m)` on the Kronecker layout.
pub fn project_tensor(m: &ComplexMatrix, a: &AlgebraShape, b: &AlgebraShape) -> Result<ComplexMatrix> {
    check_square(m, a.total_dim() * b.total_dim())?;
    Ok(mask_by_labels(m, &tensor_labels(a, b)))
}

/// Identity element of the algebra.
pub fn algebra_identity(shape: &AlgebraShape) -> AlgebraElement {
    let blocks = shape.block_dims().iter().map(|&d| matcore::identity(d)).collect();
    AlgebraElement::new(shape.clone(), blocks).expect("identity blocks match the shape")
}

/// Largest entry of `m` lying outside the block pattern given by `labels`.
pub fn off_block_magnitude(m: &ComplexMatrix, labels: &[usize]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if labels[i] != labels[j] {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

pub(crate) fn mask_by_labels(m: &ComplexMatrix, labels: &[usize]) -> ComplexMatrix {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if labels[i] != labels[j] {
                out[(i, j)] = matcore::real(0.0);
            }
        }
    }
    out
}

fn check_square(m: &ComplexMatrix, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if m.nrows() != n { m.nrows() } else { m.ncols() },
        });
    }
    Ok(())
}
