use super::echelon::Rref;
use super::{FieldSpec, LinMap, Vector};
use crate::error::{Error, Result};

/// `k^ambient / span(relations)` with an explicit projection and a chosen
/// section.
///
/// The quotient basis is indexed by the non-pivot columns of the relations'
/// reduced echelon form; the section sends each quotient basis vector to the
/// corresponding ambient basis vector.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    pub ambient_dim: usize,
    pub relations: Vec<Vector>,
    pub quotient_dim: usize,
    /// `ambient -> quotient`
    pub projection: LinMap,
    /// `quotient -> ambient`, a right inverse of `projection`
    pub section: LinMap,
}

pub fn quotient_by_span(
    field: FieldSpec,
    ambient_dim: usize,
    relations: Vec<Vector>,
) -> Result<QuotientSpace> {
    let mut rref = Rref::new(field, ambient_dim);
    for r in &relations {
        if r.field() != field {
            return Err(Error::FieldMismatch(field, r.field()));
        }
        if r.dim() != ambient_dim {
            return Err(Error::Dimension(format!(
                "relation of length {} in ambient dimension {ambient_dim}",
                r.dim()
            )));
        }
        rref.insert(&r.to_sparse());
    }
    Ok(from_rref(field, ambient_dim, relations, &rref))
}

pub(crate) fn from_rref(
    field: FieldSpec,
    ambient_dim: usize,
    relations: Vec<Vector>,
    rref: &Rref,
) -> QuotientSpace {
    let free = rref.free_columns();
    let mut index_of = vec![usize::MAX; ambient_dim];
    for (t, &f) in free.iter().enumerate() {
        index_of[f] = t;
    }
    let projection = LinMap::from_column_fn(field, free.len(), ambient_dim, |j| {
        if index_of[j] != usize::MAX {
            return vec![(index_of[j], field.one())];
        }
        // e_j ≡ -Σ_f row[f] e_f modulo the relations.
        let row = rref.row_for_pivot(j).expect("pivot row");
        row.iter()
            .filter(|(c, _)| *c != j)
            .map(|(c, v)| (index_of[*c], -v))
            .collect()
    });
    let section = LinMap::from_column_fn(field, ambient_dim, free.len(), |t| {
        vec![(free[t], field.one())]
    });
    QuotientSpace {
        ambient_dim,
        relations,
        quotient_dim: free.len(),
        projection,
        section,
    }
}

impl QuotientSpace {
    /// Checks the defining identities: `projection ∘ section = id` and every
    /// relation maps to zero.
    pub fn verify(&self) -> bool {
        let ps = self.projection.compose(&self.section).expect("dims agree");
        ps.is_identity()
            && self
                .relations
                .iter()
                .all(|r| self.projection.apply(r).map(|v| v.is_zero()).unwrap_or(false))
    }

    /// Whether `v` lies in the span of the relations.
    pub fn is_relation(&self, v: &Vector) -> bool {
        self.projection.apply(v).map(|p| p.is_zero()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_relations_give_identity() {
        let q = FieldSpec::Rationals;
        let qs = quotient_by_span(q, 3, vec![]).unwrap();
        assert_eq!(qs.quotient_dim, 3);
        assert!(qs.projection.is_identity());
        assert!(qs.verify());
    }

    #[test]
    fn spanning_relations_give_zero() {
        let q = FieldSpec::Rationals;
        let rels = vec![
            Vector::from_i64s(q, &[1, 1]),
            Vector::from_i64s(q, &[1, -1]),
        ];
        let qs = quotient_by_span(q, 2, rels).unwrap();
        assert_eq!(qs.quotient_dim, 0);
        assert!(qs.verify());
    }

    #[test]
    fn projection_identifies_related_vectors() {
        let q = FieldSpec::Rationals;
        let rels = vec![Vector::from_i64s(q, &[1, -2, 0])];
        let qs = quotient_by_span(q, 3, rels).unwrap();
        assert_eq!(qs.quotient_dim, 2);
        assert!(qs.verify());
        let a = qs.projection.apply(&Vector::from_i64s(q, &[2, 0, 0])).unwrap();
        let b = qs.projection.apply(&Vector::from_i64s(q, &[0, 4, 0])).unwrap();
        assert_eq!(a, b);
    }
}
