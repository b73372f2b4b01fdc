//! Jacobi trees, the Koszul complex of `𝔏/𝔏_{≥k}`, fission and Morita–Milnor classes.

mod koszul;
mod tree;

pub use koszul::{h3_basis, h3_dimension, koszul_boundary, H3Basis, H3Block, KoszulChain, Wedge};
pub use tree::{
    comm, comm_marked, enumerate_trees, eta_inverse, eta_rank, JacobiTree, Tree, TreeCombination,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::magnus::LieElement;
use crate::nilpotent::milnor_residue;
use crate::rational::Q;
use crate::words::Word;

/// `Σ_r c_1 ∧ c_2 ∧ c_3` over trivalent vertices `r`, where `c_i` are the comm
/// values of the three branches at `r` taken in their cyclic order.
pub fn fission(t: &JacobiTree, q: usize, k: usize) -> Result<KoszulChain> {
    let j = t.degree();
    if k < 2 || j < k || j > 2 * k - 2 {
        return Err(Error::InvalidInput(format!(
            "fission needs k <= degree <= 2k-2, got degree {j} with k={k}"
        )));
    }
    let mut out = KoszulChain::zero(q, k, 3);
    for [a, b, c] in t.vertex_branches() {
        let factors: Vec<LieElement> = [a, b, c]
            .iter()
            .map(|x| comm(x, q))
            .collect::<Result<_>>()?;
        out = out.add(&KoszulChain::wedge(q, k, &factors));
    }
    Ok(out)
}

/// Linear extension of [`fission`].
pub fn fission_combination(c: &TreeCombination, q: usize, k: usize) -> Result<KoszulChain> {
    let mut out = KoszulChain::zero(q, k, 3);
    for (t, x) in c.terms() {
        out.add_scaled(&fission(t, q, k)?, x);
    }
    Ok(out)
}

/// A class in `H_3(𝔏/𝔏_{≥k})` by its coordinates in [`h3_basis`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H3Class {
    pub k: usize,
    pub basis_id: String,
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub coords: Vec<Q>,
}

impl H3Class {
    pub fn of_cycle(c: &KoszulChain) -> Result<H3Class> {
        let basis = h3_basis(c.q, c.k)?;
        Ok(H3Class {
            k: c.k,
            basis_id: basis.basis_id.clone(),
            coords: basis.coordinates(c)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(num_traits::Zero::is_zero)
    }
}

/// `σ_L = Σ_ℓ Σ_{j=k}^{2k-2} X_ℓ ∧ ℓ̃_ℓ^(j)` in `Λ^2(𝔏/𝔏_{≥2k-1})`.
pub fn sigma(longs: &[Word], k: usize) -> Result<KoszulChain> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("need k >= 2, got {k}")));
    }
    let res = milnor_residue(longs, k, 2 * k - 1)?;
    let q = res.q;
    let mut s = KoszulChain::zero(q, 2 * k - 1, 2);
    for l in 1..=q {
        let x = LieElement::generator(q, l);
        s = s.add(&KoszulChain::wedge(q, 2 * k - 1, &[x, res.element.part(l).clone()]));
    }
    Ok(s)
}

/// `M_k(L) = [t_L]` where `∂_3 t_L = σ_L`, reduced to `Λ^3(𝔏/𝔏_{≥k})`.
///
/// The equation is solved twice with opposite pivot orders and both
/// solutions must give the same class.
pub fn morita_milnor(longs: &[Word], k: usize) -> Result<H3Class> {
    let s = sigma(longs, k)?;
    let mut classes = Vec::with_capacity(2);
    for reverse in [false, true] {
        let t = koszul::solve_boundary(&s, reverse)?
            .ok_or_else(|| Error::Precondition("σ_L is not a boundary".into()))?;
        let reduced = t.reduce(k);
        if !koszul_boundary(&reduced)?.is_zero() {
            return Err(Error::Consistency("reduced t_L is not a cycle".into()));
        }
        classes.push(H3Class::of_cycle(&reduced)?);
    }
    if classes[0] != classes[1] {
        return Err(Error::Consistency("t_L class depends on the chosen solution".into()));
    }
    Ok(classes.swap_remove(0))
}

/// The class of `Σ_j φ(η^{-1}(ℓ̃^(j)))` for `j = k..2k-2`.
pub fn fission_of_residue(longs: &[Word], k: usize) -> Result<H3Class> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("need k >= 2, got {k}")));
    }
    let res = milnor_residue(longs, k, 2 * k - 1)?;
    let mut c = KoszulChain::zero(res.q, k, 3);
    for j in k..=2 * k - 2 {
        let trees = eta_inverse(&res.element.homogeneous(j), j)?;
        c = c.add(&fission_combination(&trees, res.q, k)?);
    }
    H3Class::of_cycle(&c)
}

/// Tree combination of degrees `k..2k-1` whose η image is the Milnor residue.
pub fn tree_kontsevich(longs: &[Word], k: usize) -> Result<TreeCombination> {
    let res = milnor_residue(longs, k, 2 * k)?;
    let mut out = TreeCombination::new();
    for j in k..2 * k {
        out = out.add(&eta_inverse(&res.element.homogeneous(j), j)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{longitudes, BraidWord};

    #[test]
    fn tripod_fission() {
        let f = fission(&JacobiTree::tripod(1, 2, 3), 3, 2).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert!(koszul_boundary(&f).unwrap().is_zero());
        let cat: JacobiTree = "(1,((2,3),1))".parse().unwrap();
        let f = fission(&cat, 3, 3).unwrap();
        assert!(koszul_boundary(&f).unwrap().is_zero());
        assert!(fission(&cat, 3, 2).is_err());
    }

    #[test]
    fn borromean_classes() {
        let b = BraidWord::parse("s1^-1 s2 s1^-1 s2 s1^-1 s2", 3).unwrap();
        let longs = longitudes(&b).unwrap();
        let m = morita_milnor(&longs, 2).unwrap();
        assert!(!m.is_zero());
        assert_eq!(m, fission_of_residue(&longs, 2).unwrap());
        let t = tree_kontsevich(&longs, 2).unwrap();
        assert_eq!(t.homogeneous(2).terms().len(), 1);
        let triv = longitudes(&BraidWord::trivial(3)).unwrap();
        assert!(morita_milnor(&triv, 2).unwrap().is_zero());
        assert!(tree_kontsevich(&triv, 2).unwrap().is_zero());
    }
}
