//! Exact homology with explicit representatives, boundary tests with
//! witnesses, and membership in the image of a sublevel.
//!
//! Everything reduces to Smith normal forms of boundary blocks, so the same
//! code serves the integers (where torsion appears) and the fields. Novikov
//! complexes are handled by the spectral module through windowed expansion.

use num_bigint::BigInt;

use crate::coeff::{BaseRing, Coefficient, Extended, Scalar};
use crate::complex::{Chain, ChainClass, ComplexError, FilteredComplex};
use crate::linalg::{smith, Matrix, Smith};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyBasis {
    pub degree: i64,
    pub free_part: Vec<ChainClass>,
    /// Torsion generators with their (positive) orders; empty over fields.
    pub torsion_part: Vec<(ChainClass, BigInt)>,
}

impl HomologyBasis {
    pub fn rank(&self) -> usize {
        self.free_part.len()
    }

    /// Free generators followed by torsion generators.
    pub fn classes(&self) -> impl Iterator<Item = &ChainClass> {
        self.free_part.iter().chain(self.torsion_part.iter().map(|(c, _)| c))
    }
}

pub(crate) fn base_ring(c: &FilteredComplex) -> Result<&BaseRing, ComplexError> {
    match c.ring() {
        crate::coeff::RingDescriptor::Base(b) => Ok(b),
        other => Err(ComplexError::UnsupportedRing(format!("{other}: expand the Novikov complex over a window first"))),
    }
}

/// The block of the boundary from degree `k` to degree `k - 1`, with the
/// generator indices labelling its columns and rows.
pub(crate) struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub matrix: Matrix,
}

pub(crate) fn boundary_block(c: &FilteredComplex, ring: &BaseRing, k: i64) -> Block {
    let rows = c.indices_in_degree(k - 1);
    let cols = c.indices_in_degree(k);
    let mut row_of = vec![usize::MAX; c.len()];
    for (r, &i) in rows.iter().enumerate() {
        row_of[i] = r;
    }
    let mut matrix = Matrix::zeros(ring, rows.len(), cols.len());
    for (j, &u) in cols.iter().enumerate() {
        for e in c.boundary_of(u) {
            let s = e.coeff.as_scalar().expect("base coefficient").clone();
            matrix.set(row_of[e.target], j, s);
        }
    }
    Block { rows, cols, matrix }
}

pub(crate) fn chain_to_vec(ring: &BaseRing, chain: &Chain, labels: &[usize]) -> Vec<Scalar> {
    labels
        .iter()
        .map(|i| chain.get(i).and_then(Coefficient::as_scalar).cloned().unwrap_or_else(|| ring.zero()))
        .collect()
}

pub(crate) fn vec_to_chain(v: &[Scalar], labels: &[usize]) -> Chain {
    v.iter().zip(labels).filter(|(s, _)| !s.is_zero()).map(|(s, &i)| (i, Coefficient::Scalar(s.clone()))).collect()
}

pub fn homology(c: &FilteredComplex, degree: i64) -> Result<HomologyBasis, ComplexError> {
    let ring = base_ring(c)?;
    let out = boundary_block(c, ring, degree);
    let inc = boundary_block(c, ring, degree + 1);
    let s = smith(ring, &out.matrix);
    let r = s.rank();
    let n = out.cols.len();
    // kernel basis: columns r.. of V; image coordinates: rows r.. of V^-1 * d_{k+1}
    let mut kernel = Matrix::zeros(ring, n, n - r);
    for i in 0..n {
        for j in r..n {
            kernel.set(i, j - r, s.v.get(i, j).clone());
        }
    }
    let image = s.v_inv.mul(ring, &inc.matrix).rows_from(r);
    let s2 = smith(ring, &image);
    let generators = kernel.mul(ring, &s2.u_inv);
    let mut basis = HomologyBasis { degree, free_part: Vec::new(), torsion_part: Vec::new() };
    for j in 0..n - r {
        let class = ChainClass { degree, support: vec_to_chain(&generators.column(j), &out.cols) };
        match s2.diagonal.get(j) {
            Some(d) if d.is_unit() => {}
            Some(d) => basis.torsion_part.push((class, d.magnitude())),
            None => basis.free_part.push(class),
        }
    }
    Ok(basis)
}

/// Homology in every degree carried by a generator, in increasing degree.
pub fn homology_all(c: &FilteredComplex) -> Result<Vec<HomologyBasis>, ComplexError> {
    c.degrees().into_iter().map(|k| homology(c, k)).collect()
}

/// A basis of the cycles of degree `degree` supported on the generators
/// accepted by `keep`.
pub(crate) fn cycle_basis(
    c: &FilteredComplex,
    degree: i64,
    keep: impl Fn(usize) -> bool,
) -> Result<Vec<Chain>, ComplexError> {
    let ring = base_ring(c)?;
    let block = boundary_block(c, ring, degree);
    let cols: Vec<usize> = (0..block.cols.len()).filter(|&j| keep(block.cols[j])).collect();
    let mut m = Matrix::zeros(ring, block.rows.len(), cols.len());
    for r in 0..block.rows.len() {
        for (j, &col) in cols.iter().enumerate() {
            m.set(r, j, block.matrix.get(r, col).clone());
        }
    }
    let s = smith(ring, &m);
    let labels: Vec<usize> = cols.iter().map(|&j| block.cols[j]).collect();
    Ok((s.rank()..cols.len()).map(|j| vec_to_chain(&s.v.column(j), &labels)).collect())
}

/// `Some(x)` with `dx = z` when the cycle `z` is a boundary.
pub fn is_boundary(c: &FilteredComplex, z: &ChainClass) -> Result<Option<Chain>, ComplexError> {
    let ring = base_ring(c)?;
    c.check_class(z)?;
    let inc = boundary_block(c, ring, z.degree + 1);
    let b = chain_to_vec(ring, &z.support, &inc.rows);
    let s = smith(ring, &inc.matrix);
    Ok(s.solve(ring, &b).map(|x| vec_to_chain(&x, &inc.cols)))
}

/// Solves `(dx)_high = alpha_high` for the degree-`k` generators marked
/// high, where `d` is the boundary from degree `k + 1`.
pub(crate) struct ImageProblem {
    ring: BaseRing,
    block: Block,
}

impl ImageProblem {
    pub fn new(c: &FilteredComplex, degree: i64) -> Result<Self, ComplexError> {
        let ring = base_ring(c)?.clone();
        let block = boundary_block(c, &ring, degree + 1);
        Ok(ImageProblem { ring, block })
    }

    /// Positions (within the degree-`k` block) of the generators kept high.
    pub fn high_rows(&self, high: impl Fn(usize) -> bool) -> Vec<usize> {
        (0..self.block.rows.len()).filter(|&r| high(self.block.rows[r])).collect()
    }

    pub fn factor(&self, high_rows: &[usize]) -> Smith {
        let mut p = Matrix::zeros(&self.ring, high_rows.len(), self.block.cols.len());
        for (i, &r) in high_rows.iter().enumerate() {
            for j in 0..self.block.cols.len() {
                p.set(i, j, self.block.matrix.get(r, j).clone());
            }
        }
        smith(&self.ring, &p)
    }

    pub fn member(&self, factored: &Smith, high_rows: &[usize], alpha: &Chain) -> bool {
        let labels: Vec<usize> = high_rows.iter().map(|&r| self.block.rows[r]).collect();
        let b = chain_to_vec(&self.ring, alpha, &labels);
        factored.solve(&self.ring, &b).is_some()
    }
}

/// Whether `alpha` is homologous to a cycle supported in the sublevel
/// `{action < level}`.
pub fn in_image_of_sublevel(c: &FilteredComplex, level: &Extended, alpha: &ChainClass) -> Result<bool, ComplexError> {
    base_ring(c)?;
    c.check_class(alpha)?;
    let problem = ImageProblem::new(c, alpha.degree)?;
    let high = problem.high_rows(|i| match level {
        Extended::NegInf => true,
        Extended::Finite(a) => &c.generator(i).action >= a,
        Extended::PosInf => false,
    });
    let factored = problem.factor(&high);
    Ok(problem.member(&factored, &high, &alpha.support))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rational, RingDescriptor};
    use crate::models;

    fn z() -> RingDescriptor {
        RingDescriptor::integers()
    }

    #[test]
    fn circle_over_integers() {
        let c = models::morse_circle(&int(0), &int(1), &z()).unwrap();
        let h0 = homology(&c, 0).unwrap();
        assert_eq!(h0.rank(), 1);
        assert!(h0.torsion_part.is_empty());
        assert_eq!(h0.free_part[0], ChainClass::generator(&c, "min").unwrap());
        assert_eq!(homology(&c, 1).unwrap().rank(), 1);
    }

    #[test]
    fn rp2_torsion() {
        let c = models::morse_rp2(&int(0), &int(1), &int(2), &z()).unwrap();
        let h1 = homology(&c, 1).unwrap();
        assert_eq!(h1.rank(), 0);
        assert_eq!(h1.torsion_part.len(), 1);
        let (class, order) = &h1.torsion_part[0];
        assert_eq!(order, &BigInt::from(2));
        assert_eq!(class.support.len(), 1);
        assert!(class.support.contains_key(&c.index_of("c1").unwrap()));
        assert_eq!(homology(&c, 2).unwrap().rank(), 0);
        assert_eq!(homology(&c, 0).unwrap().rank(), 1);
    }

    #[test]
    fn rp2_mod_two_has_no_torsion() {
        let f2 = RingDescriptor::prime_field(2).unwrap();
        let c = models::morse_rp2(&int(0), &int(1), &int(2), &f2).unwrap();
        for k in 0..=2 {
            let h = homology(&c, k).unwrap();
            assert_eq!((h.rank(), h.torsion_part.len()), (1, 0));
        }
    }

    #[test]
    fn torus_mod_two() {
        let f2 = RingDescriptor::prime_field(2).unwrap();
        let c = models::morse_torus(&int(0), &int(1), &int(1), &int(2), &f2).unwrap();
        assert_eq!(homology(&c, 1).unwrap().rank(), 2);
    }

    #[test]
    fn sphere_over_rationals() {
        let c = models::morse_sphere(&int(0), &int(1), &RingDescriptor::rationals()).unwrap();
        let ranks: Vec<usize> = (0..=2).map(|k| homology(&c, k).unwrap().rank()).collect();
        assert_eq!(ranks, vec![1, 0, 1]);
    }

    #[test]
    fn boundaries_with_witness() {
        let c = models::morse_rp2(&int(0), &int(1), &int(2), &z()).unwrap();
        let zero = ChainClass::zero(1);
        assert_eq!(is_boundary(&c, &zero).unwrap(), Some(Chain::new()));
        let c1 = ChainClass::generator(&c, "c1").unwrap();
        let two_c1 = c1.scaled(c.ring(), &c.ring().from_i64(2)).unwrap();
        let witness = is_boundary(&c, &two_c1).unwrap().unwrap();
        assert_eq!(witness, ChainClass::generator(&c, "c2").unwrap().support);
        assert_eq!(c.apply_boundary(&witness), two_c1.support);
        assert_eq!(is_boundary(&c, &c1).unwrap(), None);
    }

    #[test]
    fn boundary_requires_cycle() {
        let c = models::interval(&z()).unwrap();
        let a = ChainClass::generator(&c, "a").unwrap();
        assert!(matches!(is_boundary(&c, &a), Err(ComplexError::NotACycle(_))));
    }

    #[test]
    fn sublevel_membership_on_circle() {
        let c = models::morse_circle(&int(0), &int(1), &z()).unwrap();
        let half = Extended::Finite(rational(1, 2));
        let min = ChainClass::generator(&c, "min").unwrap();
        let max = ChainClass::generator(&c, "max").unwrap();
        assert!(in_image_of_sublevel(&c, &half, &min).unwrap());
        assert!(!in_image_of_sublevel(&c, &half, &max).unwrap());
        assert!(in_image_of_sublevel(&c, &Extended::NegInf, &ChainClass::zero(1)).unwrap());
    }

    #[test]
    fn homologous_representative_in_sublevel() {
        // z1 ~ z2 through da = z1 - z2, and z2 sits at action 0
        let c = models::three_generator(&RingDescriptor::rationals()).unwrap();
        let z1 = ChainClass::generator(&c, "z1").unwrap();
        assert!(in_image_of_sublevel(&c, &Extended::Finite(rational(1, 2)), &z1).unwrap());
        assert!(!in_image_of_sublevel(&c, &Extended::Finite(int(0)), &z1).unwrap());
    }

    #[test]
    fn unsupported_for_novikov() {
        let c = models::morse_circle(&int(0), &int(1), &z()).unwrap();
        let lift = c.novikov_lift(2, &int(1), crate::complex::Window::zero()).unwrap();
        assert!(matches!(homology(&lift, 0), Err(ComplexError::UnsupportedRing(_))));
    }
}
