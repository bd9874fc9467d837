//! Multiplication tables of small finite groups and their group rings.

use std::sync::Arc;

use super::StarAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ONE, ZERO};

/// Multiplication table and inverse table, identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    pub table: Vec<Vec<usize>>,
    pub inverses: Vec<usize>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    /// ℤ/n under addition.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        let inverses = (0..n).map(|g| (n - g) % n).collect();
        Self { table, inverses }
    }

    /// Symmetric group on `n` letters; permutations in lexicographic order,
    /// so index 0 is the identity. Product `(gh)(x) = g(h(x))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
        let table = perms
            .iter()
            .map(|g| perms.iter().map(|h| index(&h.iter().map(|&x| g[x]).collect::<Vec<_>>())).collect())
            .collect();
        let inverses = perms
            .iter()
            .map(|g| {
                let mut inv = vec![0; n];
                for (x, &gx) in g.iter().enumerate() {
                    inv[gx] = x;
                }
                index(&inv)
            })
            .collect();
        Self { table, inverses }
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|g| self.table[self.table[g][x]][self.inverses[g]]).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class);
        }
        classes
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

/// Group ring of ℤ/n.
pub fn cyclic(n: usize) -> Arc<StarAlgebra> {
    let g = GroupTable::cyclic(n);
    StarAlgebra::group_ring(&g.table, &g.inverses).expect("cyclic table is a group")
}

/// Group ring of the symmetric group `S_n`.
pub fn symmetric(n: usize) -> Arc<StarAlgebra> {
    let g = GroupTable::symmetric(n);
    StarAlgebra::group_ring(&g.table, &g.inverses).expect("symmetric table is a group")
}

/// Centre of ℂ[G], spanned by the class sums, realised in the left regular
/// representation with the operator norm.
pub fn center(group: &GroupTable) -> Result<Arc<StarAlgebra>> {
    check_group(&group.table, &group.inverses)?;
    let n = group.order();
    let sums: Vec<CMatrix> = group
        .conjugacy_classes()
        .iter()
        .map(|class| {
            CMatrix::from_fn(n, n, |k, h| if class.iter().any(|&g| group.table[g][h] == k) { ONE } else { ZERO })
        })
        .collect();
    StarAlgebra::generate_matrix_algebra(&sums, 1e-9)
}

pub(crate) fn check_group(table: &[Vec<usize>], inverses: &[usize]) -> Result<()> {
    let n = table.len();
    let fail = |axiom: &str| Err(Error::NotAGroup { axiom: axiom.to_string() });
    if n == 0 {
        return fail("non-empty");
    }
    if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) || inverses.len() != n {
        return fail("closure");
    }
    if (0..n).any(|g| table[0][g] != g || table[g][0] != g) {
        return fail("identity");
    }
    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                if table[table[g][h]][k] != table[g][table[h][k]] {
                    return fail("associativity");
                }
            }
        }
    }
    if (0..n).any(|g| inverses[g] >= n || table[g][inverses[g]] != 0 || table[inverses[g]][g] != 0) {
        return fail("inverses");
    }
    Ok(())
}
