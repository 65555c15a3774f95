//! Nerves of loop-free finite categories as chain complexes of nondegenerate
//! simplices, integral homology by Smith normal form, a rational rank
//! oracle, and a homology-equivalence test for functors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{FinCat, Functor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("category is not loop-free")]
    NotLoopFree,
    #[error("boundary composite ∂∘∂ is nonzero in dimension {0}")]
    BoundaryNotSquareZero(usize),
    #[error("integer coefficient overflow during Smith normal form")]
    Overflow,
}

/// An integer matrix stored by columns as `(row, coefficient)` lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    fn zero(rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    fn dense(&self) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                a[r][c] += v;
            }
        }
        a
    }

    /// `self ∘ rhs` (apply `rhs` first).
    fn compose(&self, rhs: &SparseMatrix) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; rhs.cols]; self.rows];
        for (c, col) in rhs.columns.iter().enumerate() {
            for &(mid, v) in col {
                for &(r, w) in &self.columns[mid] {
                    out[r][c] += v * w;
                }
            }
        }
        out
    }
}

/// Normalized chains of a nerve: `simplices[p]` lists the composable chains
/// of `p` non-identity morphisms (objects for `p = 0`), and `boundary[p]`
/// maps degree `p` to degree `p − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    pub simplices: Vec<Vec<Vec<usize>>>,
    pub boundary: Vec<SparseMatrix>,
    /// Whether chains above the last stored degree were cut off.
    pub truncated: bool,
}

impl ChainComplex {
    pub fn top(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    /// Degrees in which homology is determined by the stored chains.
    pub fn homology_range(&self) -> usize {
        if self.truncated {
            self.top()
        } else {
            self.top() + 1
        }
    }

    pub fn check_square_zero(&self) -> Result<(), SimplicialError> {
        for p in 2..self.boundary.len() {
            let prod = self.boundary[p - 1].compose(&self.boundary[p]);
            if prod.iter().any(|r| r.iter().any(|&v| v != 0)) {
                return Err(SimplicialError::BoundaryNotSquareZero(p));
            }
        }
        Ok(())
    }
}

fn chains(c: &FinCat, top: Option<usize>) -> (Vec<Vec<Vec<usize>>>, bool) {
    let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..c.object_count()).map(|o| vec![o]).collect()];
    let non_id: Vec<Vec<usize>> = (0..c.object_count())
        .map(|o| {
            c.out_of(o)
                .iter()
                .copied()
                .filter(|&m| !c.is_identity(m))
                .collect()
        })
        .collect();
    let mut truncated = false;
    loop {
        let p = levels.len();
        let prev = &levels[p - 1];
        let next: Vec<Vec<usize>> = if p == 1 {
            (0..c.morphism_count())
                .filter(|&m| !c.is_identity(m))
                .map(|m| vec![m])
                .collect()
        } else {
            prev.iter()
                .flat_map(|s| {
                    let last = *s.last().expect("chains are nonempty");
                    non_id[c.tgt(last)].iter().map(move |&m| {
                        let mut t = s.clone();
                        t.push(m);
                        t
                    })
                })
                .collect()
        };
        if next.is_empty() {
            break;
        }
        if top.is_some_and(|t| p > t) {
            truncated = true;
            break;
        }
        levels.push(next);
    }
    (levels, truncated)
}

fn index_of(level: &[Vec<usize>]) -> std::collections::HashMap<&[usize], usize> {
    level
        .iter()
        .enumerate()
        .map(|(k, s)| (s.as_slice(), k))
        .collect()
}

/// Faces of a chain `x_0 → … → x_p`; `d_i` deletes `x_i`.
fn faces(c: &FinCat, s: &[usize]) -> Vec<Vec<usize>> {
    let p = s.len();
    if p == 1 {
        return vec![vec![c.tgt(s[0])], vec![c.src(s[0])]];
    }
    (0..=p)
        .map(|i| {
            if i == 0 {
                s[1..].to_vec()
            } else if i == p {
                s[..p - 1].to_vec()
            } else {
                let mut t = s[..i - 1].to_vec();
                t.push(c.then(s[i - 1], s[i]));
                t.extend_from_slice(&s[i + 1..]);
                t
            }
        })
        .collect()
}

fn build(c: &FinCat, top: Option<usize>) -> Result<ChainComplex, SimplicialError> {
    if !c.is_loop_free() {
        return Err(SimplicialError::NotLoopFree);
    }
    let (simplices, truncated) = chains(c, top);
    let mut boundary = vec![SparseMatrix::zero(0, simplices[0].len())];
    for p in 1..simplices.len() {
        let idx = index_of(&simplices[p - 1]);
        let columns = simplices[p]
            .iter()
            .map(|s| {
                let mut col: Vec<(usize, i64)> = Vec::new();
                for (i, f) in faces(c, s).iter().enumerate() {
                    let r = idx[f.as_slice()];
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    match col.iter_mut().find(|e| e.0 == r) {
                        Some(e) => e.1 += sign,
                        None => col.push((r, sign)),
                    }
                }
                col.retain(|e| e.1 != 0);
                col
            })
            .collect();
        boundary.push(SparseMatrix {
            rows: simplices[p - 1].len(),
            cols: simplices[p].len(),
            columns,
        });
    }
    let k = ChainComplex {
        simplices,
        boundary,
        truncated,
    };
    k.check_square_zero()?;
    Ok(k)
}

/// The full normalized chain complex of the nerve.
pub fn nerve(c: &FinCat) -> Result<ChainComplex, SimplicialError> {
    build(c, None)
}

/// Chains up to degree `top` only.
pub fn nerve_truncated(c: &FinCat, top: usize) -> Result<ChainComplex, SimplicialError> {
    build(c, Some(top))
}

/// Length of the longest chain of non-identity morphisms.
pub fn nerve_dimension(c: &FinCat) -> Result<usize, SimplicialError> {
    Ok(nerve(c)?.top())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub betti: Vec<usize>,
    /// Prime-power torsion coefficients per degree, sorted.
    pub torsion: Vec<Vec<u64>>,
}

impl HomologyResult {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Same groups in degrees `0..=n` (missing degrees count as zero).
    pub fn agrees_through(&self, other: &HomologyResult, n: usize) -> bool {
        (0..=n).all(|p| self.agrees_in(other, p))
    }

    pub fn agrees_in(&self, other: &HomologyResult, p: usize) -> bool {
        self.betti.get(p).copied().unwrap_or(0) == other.betti.get(p).copied().unwrap_or(0)
            && self.torsion.get(p).map(Vec::as_slice).unwrap_or(&[])
                == other.torsion.get(p).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_point(&self) -> bool {
        self.betti.first() == Some(&1)
            && self.betti.iter().skip(1).all(|&b| b == 0)
            && self.torsion.iter().all(Vec::is_empty)
    }
}

/// Nonzero diagonal entries of a diagonal form of `a` (absolute values).
fn diagonal_form(mut a: Vec<Vec<i64>>) -> Result<Vec<u64>, SimplicialError> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                    if v.abs() == 1 {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| a[bi][bj].abs() == 1) {
                break;
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let piv = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let v = a[i][t];
                if v == 0 {
                    continue;
                }
                let q = v / piv;
                if q != 0 {
                    let (top_rows, rest) = a.split_at_mut(i);
                    let (pr, ri) = (&top_rows[t], &mut rest[0]);
                    for j in t..cols {
                        if pr[j] != 0 {
                            ri[j] = q
                                .checked_mul(pr[j])
                                .and_then(|x| ri[j].checked_sub(x))
                                .ok_or(SimplicialError::Overflow)?;
                        }
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let v = a[t][j];
                if v == 0 {
                    continue;
                }
                let q = v / piv;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        if row[t] != 0 {
                            row[j] = q
                                .checked_mul(row[t])
                                .and_then(|x| row[j].checked_sub(x))
                                .ok_or(SimplicialError::Overflow)?;
                        }
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // a remainder is smaller than the pivot: move it into place
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        out.push(a[t][t].unsigned_abs());
        t += 1;
    }
    Ok(out)
}

fn prime_powers(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Integral homology in every degree the complex determines.
pub fn homology(k: &ChainComplex) -> Result<HomologyResult, SimplicialError> {
    k.check_square_zero()?;
    let n = k.homology_range();
    let diags: Vec<Vec<u64>> = (0..k.boundary.len())
        .into_par_iter()
        .map(|p| diagonal_form(k.boundary[p].dense()))
        .collect::<Result<_, _>>()?;
    let mut betti = Vec::with_capacity(n);
    let mut torsion = Vec::with_capacity(n);
    for p in 0..n {
        let rank_out = diags[p].len();
        let rank_in = diags.get(p + 1).map_or(0, Vec::len);
        betti.push(k.simplices[p].len() - rank_out - rank_in);
        let mut t: Vec<u64> = diags.get(p + 1).map_or(Vec::new(), |d| {
            d.iter()
                .filter(|&&x| x > 1)
                .flat_map(|&x| prime_powers(x))
                .collect()
        });
        t.sort_unstable();
        torsion.push(t);
    }
    Ok(HomologyResult { betti, torsion })
}

/// Rank of an integer matrix over ℚ by exact Gaussian elimination.
pub fn rank_over_q(m: &SparseMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .dense()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = BigRational::one() / a[rank][c].clone();
        for j in c..cols {
            a[rank][j] = &a[rank][j] * &inv;
        }
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in c..cols {
                    let d = &f * &a[rank][j];
                    a[r][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers over ℚ, computed independently of the integral path.
pub fn betti_over_q(k: &ChainComplex) -> Vec<usize> {
    let ranks: Vec<usize> = k.boundary.iter().map(rank_over_q).collect();
    (0..k.homology_range())
        .map(|p| k.simplices[p].len() - ranks[p] - ranks.get(p + 1).copied().unwrap_or(0))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    /// First degree whose induced map is not an isomorphism.
    pub failing_dim: Option<usize>,
    /// Degrees were cut off below the larger nerve dimension.
    pub truncated: bool,
    /// The functor is an equivalence of categories.
    pub equivalence_of_categories: bool,
    /// Every component of both categories has an initial or terminal object.
    pub contractible_components: bool,
}

/// The chain map of `F` on normalized chains: degenerate images vanish.
fn chain_map(f: &Functor, src: &ChainComplex, tgt: &ChainComplex, p: usize) -> SparseMatrix {
    let idx = index_of(&tgt.simplices[p]);
    let columns = src.simplices[p]
        .iter()
        .map(|s| {
            if p == 0 {
                return vec![(idx[[f.obj[s[0]]].as_slice()], 1)];
            }
            let img: Vec<usize> = s.iter().map(|&m| f.mor[m]).collect();
            if img.iter().any(|&m| f.cod.is_identity(m)) {
                Vec::new()
            } else {
                vec![(idx[img.as_slice()], 1)]
            }
        })
        .collect();
    SparseMatrix {
        rows: tgt.simplices[p].len(),
        cols: src.simplices[p].len(),
        columns,
    }
}

/// Mapping cone of `F` in degrees `0..=n`: `Cone_p = C_{p−1} ⊕ D_p`.
fn cone(f: &Functor, c: &ChainComplex, d: &ChainComplex, n: usize) -> ChainComplex {
    let dim = |k: &ChainComplex, p: isize| {
        if p < 0 || p as usize > k.top() {
            0
        } else {
            k.simplices[p as usize].len()
        }
    };
    let maps: Vec<SparseMatrix> = (0..=c.top().min(d.top()))
        .map(|p| chain_map(f, c, d, p))
        .collect();
    let mut simplices = Vec::new();
    let mut boundary = Vec::new();
    for p in 0..=n as isize {
        let (cs, ds) = (dim(c, p - 1), dim(d, p));
        simplices.push(vec![Vec::new(); cs + ds]);
        let (rc, rd) = (dim(c, p - 2), dim(d, p - 1));
        let mut columns = Vec::with_capacity(cs + ds);
        for j in 0..cs {
            let q = (p - 1) as usize;
            let mut col: Vec<(usize, i64)> = if q >= 1 {
                c.boundary[q].columns[j]
                    .iter()
                    .map(|&(r, v)| (r, -v))
                    .collect()
            } else {
                Vec::new()
            };
            if q < maps.len() {
                col.extend(maps[q].columns[j].iter().map(|&(r, v)| (rc + r, v)));
            }
            columns.push(col);
        }
        for j in 0..ds {
            let col = if p >= 1 {
                d.boundary[p as usize].columns[j]
                    .iter()
                    .map(|&(r, v)| (rc + r, v))
                    .collect()
            } else {
                Vec::new()
            };
            columns.push(col);
        }
        boundary.push(SparseMatrix {
            rows: if p == 0 { 0 } else { rc + rd },
            cols: cs + ds,
            columns,
        });
    }
    ChainComplex {
        simplices,
        boundary,
        truncated: true,
    }
}

fn is_equivalence(f: &Functor) -> bool {
    let (c, d) = (&*f.dom, &*f.cod);
    let faithful_full = (0..c.object_count()).all(|a| {
        (0..c.object_count()).all(|b| {
            let mut img: Vec<usize> = c.hom(a, b).iter().map(|&m| f.mor[m]).collect();
            img.sort_unstable();
            img.dedup();
            img.len() == c.hom(a, b).len() && img.len() == d.hom(f.obj[a], f.obj[b]).len()
        })
    });
    let iso = |x: usize, y: usize| {
        d.hom(x, y).iter().any(|&m| {
            d.hom(y, x)
                .iter()
                .any(|&n| d.is_identity(d.then(m, n)) && d.is_identity(d.then(n, m)))
        })
    };
    faithful_full && (0..d.object_count()).all(|y| (0..c.object_count()).any(|a| iso(f.obj[a], y)))
}

/// Each connected component has an initial or a terminal object.
pub fn has_contractible_components(c: &FinCat) -> bool {
    let n = c.object_count();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(comp: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while comp[r] != r {
            r = comp[r];
        }
        comp[x] = r;
        r
    }
    for m in 0..c.morphism_count() {
        let (a, b) = (find(&mut comp, c.src(m)), find(&mut comp, c.tgt(m)));
        comp[a] = b;
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut comp, x)).collect();
    let mut seen = std::collections::BTreeSet::new();
    for &r in &roots {
        if !seen.insert(r) {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&x| roots[x] == r).collect();
        let initial = members
            .iter()
            .any(|&o| members.iter().all(|&y| c.hom(o, y).len() == 1));
        let terminal = members
            .iter()
            .any(|&o| members.iter().all(|&y| c.hom(y, o).len() == 1));
        if !initial && !terminal {
            return false;
        }
    }
    true
}

/// Whether `F` induces isomorphisms on `H_p` for `p ≤ max_dim`.
pub fn homology_equivalence(
    f: &Functor,
    max_dim: usize,
) -> Result<EquivalenceReport, SimplicialError> {
    let c = nerve_truncated(&f.dom, max_dim + 1)?;
    let d = nerve_truncated(&f.cod, max_dim + 1)?;
    let truncated = c.truncated || d.truncated;
    let hc = homology(&c)?;
    let hd = homology(&d)?;
    let cone_h = homology(&cone(f, &c, &d, max_dim + 1))?;
    let same = |p: usize| hc.agrees_in(&hd, p);
    // H_p(Cone) = 0 for p ≤ n gives iso below n and epi at n; a surjection
    // between isomorphic finitely generated abelian groups is an isomorphism
    let mut failing_dim = None;
    for p in 0..=max_dim {
        let zero = cone_h.betti[p] == 0 && cone_h.torsion[p].is_empty();
        if !zero {
            failing_dim = Some(if p > 0 && !same(p - 1) { p - 1 } else { p });
            break;
        }
    }
    if failing_dim.is_none() && !same(max_dim) {
        failing_dim = Some(max_dim);
    }
    let equivalence_of_categories = is_equivalence(f);
    let contractible_components =
        has_contractible_components(&f.dom) && has_contractible_components(&f.cod);
    let verdict = match failing_dim {
        Some(_) => Verdict::Fail,
        None if truncated => Verdict::Inconclusive,
        None if equivalence_of_categories || contractible_components => Verdict::Pass,
        None => Verdict::Inconclusive,
    };
    Ok(EquivalenceReport {
        verdict,
        failing_dim,
        truncated,
        equivalence_of_categories,
        contractible_components,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::{degree_filtration, Direction};

    /// Proper nonempty subsets of an `n`-set, ordered by inclusion.
    fn boundary_poset(n: usize) -> FinCat {
        let full = (1u64 << n) - 1;
        let masks: Vec<u64> = (1..full).collect();
        let names: Vec<String> = masks
            .iter()
            .map(|&m| crate::fincat::subset_name(m))
            .collect();
        FinCat::poset(&names, |a, b| masks[a] & !masks[b] == 0).unwrap()
    }

    #[test]
    fn terminal_and_arrow() {
        let t = nerve(&FinCat::terminal()).unwrap();
        assert_eq!(t.ranks(), vec![1]);
        let a = nerve(&FinCat::poset(&["a", "b"], |x, y| x <= y).unwrap()).unwrap();
        assert_eq!(a.ranks(), vec![2, 1]);
        assert!(homology(&t).unwrap().is_point());
        assert!(homology(&a).unwrap().is_point());
    }

    #[test]
    fn cube_has_top_dimension_three() {
        let k = nerve(&FinCat::powerset(3)).unwrap();
        assert_eq!(k.top(), 3);
    }

    #[test]
    fn circle_and_sphere() {
        let h3 = homology(&nerve(&boundary_poset(3)).unwrap()).unwrap();
        assert_eq!(h3.betti, vec![1, 1]);
        let h4 = homology(&nerve(&boundary_poset(4)).unwrap()).unwrap();
        assert_eq!(h4.betti, vec![1, 0, 1]);
        assert!(h4.torsion.iter().all(Vec::is_empty));
    }

    #[test]
    fn rational_oracle_and_euler_characteristic() {
        for c in [
            boundary_poset(3),
            boundary_poset(4),
            FinCat::powerset(3),
            FinCat::discrete(&["x", "y"]),
        ] {
            let k = nerve(&c).unwrap();
            let h = homology(&k).unwrap();
            assert_eq!(h.betti, betti_over_q(&k));
            let chi: i64 = k
                .ranks()
                .iter()
                .enumerate()
                .map(|(p, &r)| if p % 2 == 0 { r as i64 } else { -(r as i64) })
                .sum();
            assert_eq!(h.euler_characteristic(), chi);
        }
    }

    #[test]
    fn torsion_from_a_diagonal_two() {
        assert_eq!(
            diagonal_form(vec![vec![2, 0], vec![0, 3]])
                .unwrap()
                .iter()
                .product::<u64>(),
            6
        );
        assert_eq!(prime_powers(12), vec![4, 3]);
        assert_eq!(diagonal_form(vec![vec![4, 6]]).unwrap(), vec![2]);
    }

    #[test]
    fn nerve_dimension_matches_degree_filtration() {
        for c in [FinCat::powerset(3), boundary_poset(4)] {
            let deg = degree_filtration(&c, Direction::Under).unwrap();
            assert_eq!(nerve_dimension(&c).unwrap(), deg.max);
        }
    }

    #[test]
    fn equivalence_verdicts() {
        let arrow = Arc::new(FinCat::poset(&["a", "b"], |x, y| x <= y).unwrap());
        let id = Functor::identity(&arrow);
        assert_eq!(homology_equivalence(&id, 2).unwrap().verdict, Verdict::Pass);
        let t = Arc::new(FinCat::terminal());
        let pt = Functor::constant(&t, &arrow, 0);
        assert_eq!(homology_equivalence(&pt, 2).unwrap().verdict, Verdict::Pass);
        let two = Arc::new(FinCat::discrete(&["x", "y"]));
        let r = homology_equivalence(&Functor::constant(&t, &two, 0), 2).unwrap();
        assert_eq!((r.verdict, r.failing_dim), (Verdict::Fail, Some(0)));
    }

    #[test]
    fn fixed_nerve_is_fixed_chains() {
        use crate::equivariant::{fixed_category, GAction};
        use crate::groups::{Group, SubgroupLattice};
        use crate::gsets::GSet;
        for g in [Group::cyclic(2), Group::cyclic(3), Group::symmetric(3)] {
            let a = GAction::powerset(&GSet::regular(&g));
            let k = nerve(a.cat()).unwrap();
            let lattice = SubgroupLattice::new(&g).unwrap();
            for h in lattice.subgroups() {
                let fixed = nerve(&fixed_category(&a, h).cat).unwrap();
                let counted: Vec<usize> = (0..=k.top())
                    .map(|p| {
                        k.simplices[p]
                            .iter()
                            .filter(|s| {
                                h.iter().all(|x| {
                                    if p == 0 {
                                        a.obj(x, s[0]) == s[0]
                                    } else {
                                        s.iter().all(|&m| a.mor(x, m) == m)
                                    }
                                })
                            })
                            .count()
                    })
                    .filter(|&n| n > 0)
                    .collect();
                assert_eq!(fixed.ranks(), counted);
            }
        }
    }

    #[test]
    fn circle_into_point_fails_in_degree_one() {
        let c = Arc::new(boundary_poset(3));
        let t = Arc::new(FinCat::terminal());
        let f = Functor::new(
            c.clone(),
            t.clone(),
            vec![0; c.object_count()],
            vec![0; c.morphism_count()],
        )
        .unwrap();
        let r = homology_equivalence(&f, 2).unwrap();
        assert_eq!((r.verdict, r.failing_dim), (Verdict::Fail, Some(1)));
    }
}
