//! Small stratified posets and sheaves used by tests, the acceptance suite and the CLI demos.

use crate::error::Result;
use crate::stratsheaf::{CellSheafComplex, StratPoset};

fn names(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// A single stratum of dimension 0, pariversity 0.
pub fn point(p: u64) -> StratPoset {
    StratPoset::simple(p, &["o"], &[], &[0]).expect("point poset")
}

/// Closed point `a` in the closure of an open cell `b` of dimension `top`.
pub fn two_chain(p: u64, top: usize) -> StratPoset {
    StratPoset::simple(p, &["a", "b"], &[("a", "b")], &[0, top]).expect("two-chain poset")
}

/// Face poset of the boundary of a triangle, with a permutation of the three vertices.
pub fn triangle_boundary(p: u64, action: [usize; 3]) -> Result<StratPoset> {
    let simp = vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2]];
    StratPoset::face_poset(p, &names(&["x", "y", "z"]), &simp, &action)
}

/// Suspension of the triangle boundary with poles `n`, `s` and equator `a`, `b`, `c`.
/// With `rotate` the equator is rotated and the poles are fixed; otherwise the action is trivial.
pub fn suspension(p: u64, rotate: bool) -> Result<StratPoset> {
    let mut simp: Vec<Vec<usize>> = (0..5).map(|v| vec![v]).collect();
    for (x, y) in [(2, 3), (3, 4), (2, 4)] {
        simp.push(vec![x, y]);
        for pole in 0..2 {
            simp.push(vec![pole, x, y]);
        }
    }
    for pole in 0..2 {
        for x in 2..5 {
            simp.push(vec![pole, x]);
        }
    }
    let action: Vec<usize> = if rotate { vec![0, 1, 3, 4, 2] } else { (0..5).collect() };
    StratPoset::face_poset(p, &names(&["n", "s", "a", "b", "c"]), &simp, &action)
}

/// The constant sheaf Z on the rotated suspension.
pub fn flagship(p: u64) -> Result<CellSheafComplex> {
    Ok(CellSheafComplex::constant_z(&suspension(p, true)?))
}

/// Trivial-action inflation of the constant sheaf on the unrotated suspension.
pub fn flagship_trivial(p: u64) -> Result<CellSheafComplex> {
    CellSheafComplex::constant_z(&suspension(p, false)?).eps_push()
}
