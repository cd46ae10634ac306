use std::fmt;

use super::sparse::SparseVec;
use super::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// A dense vector of exact scalars.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl Vector {
    pub fn zeros(field: FieldSpec, dim: usize) -> Self {
        Vector {
            field,
            entries: vec![field.zero(); dim],
        }
    }

    /// The `i`-th standard basis vector.
    pub fn basis(field: FieldSpec, dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, dim);
        v.entries[i] = field.one();
        v
    }

    pub fn new(field: FieldSpec, entries: Vec<Scalar>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|s| !field.contains(s)) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(Vector { field, entries })
    }

    pub fn from_i64s(field: FieldSpec, values: &[i64]) -> Self {
        Vector {
            field,
            entries: values.iter().map(|v| field.from_i64(*v)).collect(),
        }
    }

    pub fn from_sparse(field: FieldSpec, dim: usize, sparse: &[(usize, Scalar)]) -> Self {
        let mut v = Self::zeros(field, dim);
        for (i, x) in sparse {
            v.entries[*i] = x.clone();
        }
        v
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: Scalar) {
        self.entries[i] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn to_sparse(&self) -> SparseVec {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect()
    }

    fn check_compatible(&self, other: &Vector) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "vector lengths {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_compatible(other)?;
        Ok(Vector {
            field: self.field,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_compatible(other)?;
        Ok(Vector {
            field: self.field,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector {
            field: self.field,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn dot(&self, other: &Vector) -> Result<Scalar> {
        self.check_compatible(other)?;
        let mut acc = self.field.zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc.add_mul(a, b);
        }
        Ok(acc)
    }

    /// Kronecker product, first factor most significant.
    pub fn tensor(&self, other: &Vector) -> Result<Vector> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let mut entries = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        Ok(Vector {
            field: self.field,
            entries,
        })
    }

    /// Canonical string forms of the entries.
    pub fn to_strings(&self) -> Vec<String> {
        self.entries.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}
