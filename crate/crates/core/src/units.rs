//! Enumeration of the unit group of `Gamma_n(Z)` and generic structure
//! invariants of small finite groups (order, exponent, center, and the
//! abelianization via Smith normal form of a relation matrix).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::hash::Hash;

use num::Zero;

use crate::clifford::{Blade, CliffordElement, MAX_DIM};
use crate::rat::{lcm_all, rat, Int};
use crate::snf::{smith_normal_form, Snf};
use crate::{Error, Result};

/// A signed basis blade, the shape of every unit of `Gamma_n(Z)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SignedBlade {
    pub neg: bool,
    pub blade: Blade,
}

impl SignedBlade {
    pub const ONE: SignedBlade = SignedBlade { neg: false, blade: Blade::SCALAR };

    pub fn mul(self, other: SignedBlade) -> SignedBlade {
        let (neg, blade) = self.blade.mul(other.blade);
        SignedBlade { neg: self.neg ^ other.neg ^ neg, blade }
    }

    pub fn to_element(self, n: u32) -> CliffordElement {
        let c = if self.neg { rat(-1) } else { rat(1) };
        CliffordElement::from_terms(n, [(self.blade, c)]).expect("blade fits dimension")
    }
}

/// Structure invariants of the unit group, computed by exhaustive
/// multiplication of the enumerated elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroupFingerprint {
    pub order: u64,
    pub exponent: u64,
    pub center_order: u64,
    pub abelian_invariants: Vec<Int>,
}

/// All units of `Gamma_n(Z)` (the signed blades, closed under the generators
/// `i_1, ..., i_{n-1}` and `-1`) together with their group fingerprint.
pub fn enumerate_units(n: u32) -> Result<(Vec<CliffordElement>, UnitGroupFingerprint)> {
    if n < 1 || n > MAX_DIM {
        return Err(Error::DimensionOutOfRange(n, 1, MAX_DIM));
    }
    let mut gens = vec![SignedBlade { neg: true, blade: Blade::SCALAR }];
    for h in 1..n {
        gens.push(SignedBlade { neg: false, blade: Blade::generator(h, n)? });
    }

    let mut seen: BTreeSet<SignedBlade> = BTreeSet::new();
    let mut queue = VecDeque::from([SignedBlade::ONE]);
    seen.insert(SignedBlade::ONE);
    while let Some(u) = queue.pop_front() {
        for g in &gens {
            let v = u.mul(*g);
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    let elems: Vec<SignedBlade> = seen.into_iter().collect();

    let order = elems.len() as u64;
    let exponent = lcm_all(elems.iter().map(|u| element_order(*u)));
    let center_order = elems
        .iter()
        .filter(|u| gens.iter().all(|g| u.mul(*g) == g.mul(**u)))
        .count() as u64;
    let abelian_invariants = abelianize_finite_group(&elems, |a, b| a.mul(*b)).invariants;

    let list = elems.iter().map(|u| u.to_element(n)).collect();
    Ok((
        list,
        UnitGroupFingerprint { order, exponent, center_order, abelian_invariants },
    ))
}

fn element_order(u: SignedBlade) -> u64 {
    let mut p = u;
    let mut k = 1;
    while p != SignedBlade::ONE {
        p = p.mul(u);
        k += 1;
    }
    k
}

/// Abelianization data of a finite group given by its element list and
/// multiplication, with a class map usable for quotient computations.
pub struct FiniteAbelianization<T> {
    /// Invariant factors > 1, divisibility chain.
    pub invariants: Vec<Int>,
    snf: Snf,
    vectors: BTreeMap<T, Vec<Int>>,
}

impl<T: Ord + Clone> FiniteAbelianization<T> {
    /// Canonical residue vector of an element's class in the abelianization.
    pub fn class_of(&self, t: &T) -> Vec<Int> {
        let v = self.vectors.get(t).expect("element of the enumerated group");
        self.snf.class_of(v)
    }

    pub fn class_is_trivial(&self, t: &T) -> bool {
        self.class_of(t).iter().all(|x| x.is_zero())
    }

    /// Order of the abelianization (product of the invariant factors).
    pub fn order(&self) -> Int {
        self.invariants.iter().product()
    }

    /// Order of the subgroup of the abelianization generated by the classes
    /// of the given elements (closure over residue vectors).
    pub fn subgroup_order(&self, ts: &[T]) -> u64 {
        let classes: Vec<Vec<Int>> = ts.iter().map(|t| self.class_of(t)).collect();
        crate::snf::closure_order(&self.snf.diag, &classes)
    }
}

/// Compute the abelianization of a finite group from its Cayley structure.
///
/// Strategy: find the commutator subgroup by closure, form the abelian
/// quotient on coset representatives, pick a greedy generating set, assign
/// every coset an exponent vector along a BFS tree, and Smith-reduce the
/// cycle relations of the Cayley graph.
pub fn abelianize_finite_group<T, F>(elements: &[T], mul: F) -> FiniteAbelianization<T>
where
    T: Ord + Clone + Hash,
    F: Fn(&T, &T) -> T,
{
    assert!(!elements.is_empty());
    let index: BTreeMap<T, usize> = elements.iter().cloned().zip(0..).collect();
    let idx = |t: &T| -> usize { *index.get(t).expect("closed multiplication") };
    let identity = elements
        .iter()
        .find(|e| mul(e, e) == **e)
        .expect("finite group contains its identity")
        .clone();
    let inverse: Vec<usize> = (0..elements.len())
        .map(|i| {
            (0..elements.len())
                .find(|&j| mul(&elements[i], &elements[j]) == identity)
                .expect("finite group contains inverses")
        })
        .collect();

    // Commutator subgroup by closure of all commutators.
    let mut comm: BTreeSet<usize> = BTreeSet::from([idx(&identity)]);
    let mut queue: VecDeque<usize> = VecDeque::new();
    for i in 0..elements.len() {
        for j in 0..elements.len() {
            let c = mul(
                &mul(&elements[i], &elements[j]),
                &mul(&elements[inverse[i]], &elements[inverse[j]]),
            );
            let ci = idx(&c);
            if comm.insert(ci) {
                queue.push_back(ci);
            }
        }
    }
    while let Some(i) = queue.pop_front() {
        for &j in comm.clone().iter() {
            let p = idx(&mul(&elements[i], &elements[j]));
            if comm.insert(p) {
                queue.push_back(p);
            }
        }
    }

    // Cosets of the commutator subgroup; representative = minimal member.
    let mut coset_of: Vec<usize> = vec![usize::MAX; elements.len()];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..elements.len() {
        if coset_of[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = comm.iter().map(|&c| idx(&mul(&elements[i], &elements[c]))).collect();
        let rep = reps.len();
        reps.push(*members.iter().min().unwrap());
        for m in members {
            coset_of[m] = rep;
        }
    }
    let qmul = |a: usize, b: usize| -> usize {
        coset_of[idx(&mul(&elements[reps[a]], &elements[reps[b]]))]
    };
    let q_id = coset_of[idx(&identity)];

    // Greedy generating set of the abelian quotient.
    let mut gens: Vec<usize> = Vec::new();
    let mut span: BTreeSet<usize> = BTreeSet::from([q_id]);
    for cand in 0..reps.len() {
        if span.contains(&cand) {
            continue;
        }
        gens.push(cand);
        let mut bfs: VecDeque<usize> = span.iter().cloned().collect();
        while let Some(q) = bfs.pop_front() {
            for &g in &gens {
                let w = qmul(q, g);
                if span.insert(w) {
                    bfs.push_back(w);
                }
            }
        }
    }
    let k = gens.len();

    // BFS tree exponent vectors plus cycle relations.
    let mut vec_of: Vec<Option<Vec<Int>>> = vec![None; reps.len()];
    vec_of[q_id] = Some(vec![Int::zero(); k]);
    let mut rows: Vec<Vec<Int>> = Vec::new();
    let mut bfs = VecDeque::from([q_id]);
    while let Some(q) = bfs.pop_front() {
        for (gi, &g) in gens.iter().enumerate() {
            let w = qmul(q, g);
            let mut v = vec_of[q].clone().unwrap();
            v[gi] += 1;
            match &vec_of[w] {
                None => {
                    vec_of[w] = Some(v);
                    bfs.push_back(w);
                }
                Some(existing) => {
                    let row: Vec<Int> =
                        v.iter().zip(existing).map(|(a, b)| a - b).collect();
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![Int::zero(); k]);
    }
    let snf = smith_normal_form(&rows, k, true);
    let invariants = snf.torsion();

    let vectors: BTreeMap<T, Vec<Int>> = elements
        .iter()
        .map(|t| {
            let q = coset_of[idx(t)];
            (t.clone(), vec_of[q].clone().unwrap())
        })
        .collect();

    FiniteAbelianization { invariants, snf, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_group_small_cases() {
        let (units, fp) = enumerate_units(1).unwrap();
        assert_eq!(units.len(), 2);
        assert_eq!(fp.order, 2);
        assert_eq!(fp.exponent, 2);

        // n = 3: Q8
        let (_, fp) = enumerate_units(3).unwrap();
        assert_eq!(fp.order, 8);
        assert_eq!(fp.exponent, 4);
        assert_eq!(fp.center_order, 2);
        assert_eq!(fp.abelian_invariants, vec![Int::from(2), Int::from(2)]);

        // n = 4: Q8 x C2
        let (_, fp) = enumerate_units(4).unwrap();
        assert_eq!(fp.order, 16);
        assert_eq!(fp.center_order, 4);
        assert_eq!(fp.abelian_invariants, vec![Int::from(2), Int::from(2), Int::from(2)]);
    }

    #[test]
    fn unit_group_n2_is_c4() {
        let (_, fp) = enumerate_units(2).unwrap();
        assert_eq!(fp.order, 4);
        assert_eq!(fp.exponent, 4);
        assert_eq!(fp.center_order, 4);
        assert_eq!(fp.abelian_invariants, vec![Int::from(4)]);
    }

    #[test]
    fn dimension_guard() {
        assert!(enumerate_units(0).is_err());
        assert!(enumerate_units(13).is_err());
    }
}
