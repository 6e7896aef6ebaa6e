//! Finite groups given by explicit multiplication tables.
//!
//! Elements are indices `0..order`; the identity is always index 0. Tables whose identity
//! sits elsewhere are relabelled on load (the identity is swapped into slot 0).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order accepted by [`FiniteGroup::from_table`]; associativity is checked over all triples.
pub const DEFAULT_ORDER_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_with_cap(table, DEFAULT_ORDER_CAP)
    }

    pub fn from_table_with_cap(mut table: Vec<Vec<usize>>, cap: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(Error::NotSquare);
        }
        if n > cap {
            return Err(Error::GroupTooLarge { order: n, cap });
        }
        for (r, row) in table.iter().enumerate() {
            if let Some((c, &v)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(Error::EntryOutOfRange { row: r, col: c, value: v });
            }
        }

        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(Error::NoIdentity)?;
        if e != 0 {
            log::warn!("identity found at index {e}; relabelling it to 0");
            table = swap_labels(&table, 0, e);
        }

        let mut inverse = vec![0; n];
        for (g, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&h| table[g][h] == 0 && table[h][g] == 0)
                .ok_or(Error::NoInverse(g))?;
        }

        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }

        Ok(Self { table, inverse, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for a group of order {}",
                labels.len(),
                self.order()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub const fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn product(&self, elems: &[usize]) -> usize {
        elems.iter().fold(0, |acc, &g| self.mul(acc, g))
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    /// `g h g^-1`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    /// `g h g^-1 h^-1`.
    pub fn commutator(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut m = 1;
        while x != 0 {
            x = self.mul(x, g);
            m += 1;
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|g| (0..g).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// Smallest subgroup containing `gens` (always contains the identity).
    pub fn generated_subgroup(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order() {
            Ok(())
        } else {
            Err(Error::BadElement(g))
        }
    }

    // ---- catalog ------------------------------------------------------

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table_with_cap(table, usize::MAX).expect("cyclic table is a group")
    }

    /// `Z/2 x Z/2` with `(x1, x2)` stored at index `x1 + 2 x2`, so `a = 1`, `b = 2`, `ab = 3`.
    pub fn klein_four() -> Self {
        Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))
            .with_labels(vec!["1".into(), "a".into(), "b".into(), "ab".into()])
            .expect("four labels")
    }

    /// Direct product with `(g, h)` stored at index `g + |G| h`.
    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.order(), b.order());
        let idx = |g: usize, h: usize| g + na * h;
        let mut table = vec![vec![0; na * nb]; na * nb];
        for g1 in 0..na {
            for h1 in 0..nb {
                for g2 in 0..na {
                    for h2 in 0..nb {
                        table[idx(g1, h1)][idx(g2, h2)] = idx(a.mul(g1, g2), b.mul(h1, h2));
                    }
                }
            }
        }
        Self::from_table_with_cap(table, usize::MAX).expect("product of groups is a group")
    }

    /// Group of permutations given by the closure of `gens` acting on `0..degree`.
    /// Permutation composition is `(p q)(x) = p(q(x))`.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p: Vec<usize> = (0..degree).map(|x| elems[i][g[x]]).collect();
                if !elems.contains(&p) {
                    elems.push(p);
                }
            }
            i += 1;
        }
        let find = |p: &Vec<usize>| elems.iter().position(|q| q == p).expect("closed set");
        let table = elems
            .iter()
            .map(|p| {
                elems
                    .iter()
                    .map(|q| find(&(0..degree).map(|x| p[q[x]]).collect()))
                    .collect()
            })
            .collect();
        Self::from_table_with_cap(table, usize::MAX).expect("permutation group")
    }

    /// Symmetric group on three letters.
    pub fn symmetric3() -> Self {
        Self::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]])
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Self {
        let rot: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
        Self::from_permutations(n, &[rot, refl])
    }

    /// Quaternion group of order 8, as a regular permutation representation.
    pub fn quaternion() -> Self {
        // elements 1,i,j,k,-1,-i,-j,-k; sign bit in 4
        let mul = |a: usize, b: usize| -> usize {
            const T: [[(usize, bool); 4]; 4] = [
                [(0, false), (1, false), (2, false), (3, false)],
                [(1, false), (0, true), (3, false), (2, true)],
                [(2, false), (3, true), (0, true), (1, false)],
                [(3, false), (2, false), (1, true), (0, true)],
            ];
            let (u, s) = T[a % 4][b % 4];
            let neg = s ^ (a >= 4) ^ (b >= 4);
            u + if neg { 4 } else { 0 }
        };
        let table = (0..8).map(|a| (0..8).map(|b| mul(a, b)).collect()).collect();
        Self::from_table(table).expect("quaternion table")
    }

    /// Small groups used by examples and randomized tests, keyed by name.
    pub fn named(name: &str) -> Option<Self> {
        let g = match name {
            "trivial" | "z1" => Self::trivial(),
            "klein4" | "v4" => Self::klein_four(),
            "s3" => Self::symmetric3(),
            "d4" => Self::dihedral(4),
            "q8" => Self::quaternion(),
            "z2xz4" => Self::direct_product(&Self::cyclic(2), &Self::cyclic(4)),
            "z2^3" => Self::direct_product(&Self::klein_four(), &Self::cyclic(2)),
            "z2xq8" => Self::direct_product(&Self::cyclic(2), &Self::quaternion()),
            _ => {
                let n: usize = name.strip_prefix('z')?.parse().ok()?;
                if n == 0 || n > DEFAULT_ORDER_CAP {
                    return None;
                }
                Self::cyclic(n)
            }
        };
        Some(g)
    }
}

fn swap_labels(table: &[Vec<usize>], a: usize, b: usize) -> Vec<Vec<usize>> {
    let s = |x: usize| {
        if x == a {
            b
        } else if x == b {
            a
        } else {
            x
        }
    };
    let n = table.len();
    (0..n)
        .map(|r| (0..n).map(|c| s(table[s(r)][s(c)])).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_z2() {
        let g = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn klein_elements_square_to_one() {
        let table: Vec<Vec<usize>> =
            (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        let g = FiniteGroup::from_table(table).unwrap();
        assert!((0..4).all(|x| g.mul(x, x) == 0));
    }

    #[test]
    fn rejects_missing_inverse() {
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, Error::NoInverse(1)));
    }

    #[test]
    fn rejects_non_associative() {
        // Latin square with identity 0 that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table(t).unwrap_err(),
            Error::NotAssociative(..)
        ));
    }

    #[test]
    fn rejects_no_identity_and_bad_shape() {
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![1, 1], vec![1, 1]]).unwrap_err(),
            Error::NoIdentity
        ));
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 1]]).unwrap_err(),
            Error::NotSquare
        ));
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 5], vec![1, 0]]).unwrap_err(),
            Error::EntryOutOfRange { .. }
        ));
    }

    #[test]
    fn relabels_identity_to_zero() {
        // Z/2 with identity stored at index 1
        let g = FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]);
        // row 1 is the identity row here: 1*x = x
        let g = g.unwrap();
        assert_eq!(g.mul(0, 0), 0);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn order_cap() {
        assert!(matches!(
            FiniteGroup::from_table_with_cap(FiniteGroup::cyclic(5).table().to_vec(), 4),
            Err(Error::GroupTooLarge { order: 5, cap: 4 })
        ));
    }

    #[test]
    fn generated_subgroups() {
        let k = FiniteGroup::klein_four();
        assert_eq!(k.generated_subgroup(&[]), BTreeSet::from([0]));
        assert_eq!(k.generated_subgroup(&[1, 2]).len(), 4);

        let s3 = FiniteGroup::symmetric3();
        let transposition = (0..6)
            .find(|&g| g != 0 && s3.element_order(g) == 2)
            .unwrap();
        assert_eq!(s3.generated_subgroup(&[transposition]).len(), 2);
    }

    #[test]
    fn commutators_and_orders() {
        let s3 = FiniteGroup::symmetric3();
        let transp: Vec<usize> = (1..6).filter(|&g| s3.element_order(g) == 2).collect();
        assert_eq!(transp.len(), 3);
        let c = s3.commutator(transp[0], transp[1]);
        assert_eq!(s3.element_order(c), 3);
        for g in 0..6 {
            assert_eq!(s3.commutator(g, g), 0);
        }
        let k = FiniteGroup::klein_four();
        for g in 0..4 {
            for h in 0..4 {
                assert_eq!(k.commutator(g, h), 0);
            }
        }
        assert_eq!(FiniteGroup::cyclic(4).element_order(1), 4);
        assert_eq!(s3.element_order(0), 1);
        assert_eq!(s3.element_order(c), 3);
    }

    #[test]
    fn catalog_sizes() {
        for (name, n, abelian) in [
            ("s3", 6, false),
            ("d4", 8, false),
            ("q8", 8, false),
            ("z2xz4", 8, true),
            ("z2^3", 8, true),
            ("z7", 7, true),
            ("z2xq8", 16, false),
        ] {
            let g = FiniteGroup::named(name).unwrap();
            assert_eq!(g.order(), n, "{name}");
            assert_eq!(g.is_abelian(), abelian, "{name}");
        }
        assert!(FiniteGroup::named("nope").is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_group() -> impl Strategy<Value = FiniteGroup> {
            prop_oneof![
                (1usize..=8).prop_map(FiniteGroup::cyclic),
                Just(FiniteGroup::klein_four()),
                Just(FiniteGroup::symmetric3()),
                Just(FiniteGroup::dihedral(4)),
                Just(FiniteGroup::quaternion()),
            ]
        }

        proptest! {
            #[test]
            fn lagrange_and_closure(g in any_group(), seeds in proptest::collection::vec(0usize..64, 0..3)) {
                let n = g.order();
                for x in 0..n {
                    prop_assert_eq!(n % g.element_order(x), 0);
                    prop_assert_eq!(g.inv(g.inv(x)), x);
                }
                let gens: Vec<usize> = seeds.iter().map(|s| s % n).collect();
                let h = g.generated_subgroup(&gens);
                prop_assert_eq!(n % h.len(), 0);
                for &a in &h {
                    prop_assert!(h.contains(&g.inv(a)));
                    for &b in &h {
                        prop_assert!(h.contains(&g.mul(a, b)));
                    }
                }
            }
        }
    }
}
