use super::{FieldElement, GaloisField, PrimeField};
use crate::ring::Field;

/// A finite field that is a level of the tower for its characteristic, so
/// its elements can be moved to and from [`FieldElement`].
pub trait FiniteField: Field {
    fn level(&self) -> usize;
    fn to_element(&self, a: &Self::Elem) -> FieldElement;
    fn from_element(&self, e: &FieldElement) -> Self::Elem;
}

impl FiniteField for PrimeField {
    fn level(&self) -> usize {
        1
    }
    fn to_element(&self, a: &u32) -> FieldElement {
        FieldElement(vec![*a])
    }
    fn from_element(&self, e: &FieldElement) -> u32 {
        assert_eq!(e.level(), 1, "element is not in the prime field");
        e.0[0]
    }
}

impl FiniteField for GaloisField {
    fn level(&self) -> usize {
        self.k()
    }
    fn to_element(&self, a: &FieldElement) -> FieldElement {
        a.clone()
    }
    fn from_element(&self, e: &FieldElement) -> FieldElement {
        assert_eq!(e.level(), self.k(), "element has the wrong level");
        self.elem(e.coeffs())
    }
}

