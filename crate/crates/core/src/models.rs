//! Model complexes: Morse complexes of small manifolds, Novikov lifts,
//! chain-level product tables, and random complexes with known structure.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coeff::{int, BaseRing, Coefficient, Rational, RingDescriptor, Scalar};
use crate::complex::{add_term, BoundaryEntry, Chain, ChainClass, ComplexError, FilteredComplex, Generator, Window};
use crate::homology;

pub const PERIODIC_ORBIT_TAG: &str = "periodic-orbit";
pub const DIAGONAL_TAG: &str = "lagrangian-diagonal";
pub const FLOER_TAG: &str = "floer-model";

fn increasing(values: &[(&str, &Rational)], pairs: &[(usize, usize)]) -> Result<(), ComplexError> {
    for &(lo, hi) in pairs {
        if values[lo].1 >= values[hi].1 {
            return Err(ComplexError::InvalidModel(format!(
                "{} = {} must be below {} = {}",
                values[lo].0, values[lo].1, values[hi].0, values[hi].1
            )));
        }
    }
    Ok(())
}

fn base_only(ring: &RingDescriptor) -> Result<(), ComplexError> {
    if ring.is_novikov() {
        Err(ComplexError::UnsupportedRing(format!("model over {ring}; lift a base model instead")))
    } else {
        Ok(())
    }
}

fn build(
    ring: &RingDescriptor,
    gens: &[(&str, i64, &Rational)],
    bnd: &[(usize, usize, i64)],
) -> Result<FilteredComplex, ComplexError> {
    base_only(ring)?;
    let generators = gens.iter().map(|(n, d, a)| Generator::new(*n, *d, (*a).clone())).collect();
    let entries =
        bnd.iter().map(|&(source, target, c)| BoundaryEntry { source, target, coeff: ring.from_i64(c) }).collect();
    FilteredComplex::new(ring.clone(), generators, entries, Vec::new(), None)
}

/// A single degree-0 generator `pt`.
pub fn point(value: &Rational, ring: &RingDescriptor) -> Result<FilteredComplex, ComplexError> {
    build(ring, &[("pt", 0, value)], &[])
}

/// `min` (degree 0) and `max` (degree 1); the two gradient lines cancel.
pub fn morse_circle(
    v_min: &Rational,
    v_max: &Rational,
    ring: &RingDescriptor,
) -> Result<FilteredComplex, ComplexError> {
    increasing(&[("min", v_min), ("max", v_max)], &[(0, 1)])?;
    build(ring, &[("min", 0, v_min), ("max", 1, v_max)], &[])
}

/// `min` (degree 0) and `max` (degree 2).
pub fn morse_sphere(
    v_min: &Rational,
    v_max: &Rational,
    ring: &RingDescriptor,
) -> Result<FilteredComplex, ComplexError> {
    increasing(&[("min", v_min), ("max", v_max)], &[(0, 1)])?;
    build(ring, &[("min", 0, v_min), ("max", 2, v_max)], &[])
}

/// `p` (degree 0), saddles `s1`, `s2` (degree 1) and `T` (degree 2), with
/// zero boundary. Generator order matches `circle.tensor(circle)`.
pub fn morse_torus(
    v0: &Rational,
    v1a: &Rational,
    v1b: &Rational,
    v2: &Rational,
    ring: &RingDescriptor,
) -> Result<FilteredComplex, ComplexError> {
    let values = [("p", v0), ("s1", v1a), ("s2", v1b), ("T", v2)];
    increasing(&values, &[(0, 1), (0, 2), (1, 3), (2, 3)])?;
    build(ring, &[("p", 0, v0), ("s1", 1, v1a), ("s2", 1, v1b), ("T", 2, v2)], &[])
}

/// Cells `c0`, `c1`, `c2` with `d c2 = 2 c1`.
pub fn morse_rp2(
    v0: &Rational,
    v1: &Rational,
    v2: &Rational,
    ring: &RingDescriptor,
) -> Result<FilteredComplex, ComplexError> {
    increasing(&[("c0", v0), ("c1", v1), ("c2", v2)], &[(0, 1), (1, 2)])?;
    build(ring, &[("c0", 0, v0), ("c1", 1, v1), ("c2", 2, v2)], &[(2, 1, 2)])
}

/// `a` (degree 1, action 1) with `d a = b - b'`, where `b`, `b'` sit in
/// degree 0 at action 0.
pub fn interval(ring: &RingDescriptor) -> Result<FilteredComplex, ComplexError> {
    build(ring, &[("a", 1, &int(1)), ("b", 0, &int(0)), ("b'", 0, &int(0))], &[(0, 1, 1), (0, 2, -1)])
}

/// `a` (degree 1, action 2) with `d a = z1 - z2`, `z1` at action 1 and `z2`
/// at action 0.
pub fn three_generator(ring: &RingDescriptor) -> Result<FilteredComplex, ComplexError> {
    build(ring, &[("a", 1, &int(2)), ("z1", 0, &int(1)), ("z2", 0, &int(0))], &[(0, 1, 1), (0, 2, -1)])
}

/// Novikov lift tagged for valuation queries.
pub fn floer_model(
    base: &FilteredComplex,
    period_degree: i64,
    period_action: &Rational,
    window: Window,
) -> Result<FilteredComplex, ComplexError> {
    Ok(base.novikov_lift(period_degree, period_action, window)?.with_tag(FLOER_TAG))
}

/// Marks a complex as the periodic-orbit (ambient) side.
pub fn periodic_orbit_model(base: &FilteredComplex) -> FilteredComplex {
    base.clone().with_tag(PERIODIC_ORBIT_TAG)
}

/// A chain-level bilinear map `left ⊗ right -> target` given by a table of
/// generator products, raising action by at most `slack`. Products land in
/// degree `deg g1 + deg g2 + degree_shift`.
#[derive(Clone, Debug)]
pub struct ProductData {
    pub left: Arc<FilteredComplex>,
    pub right: Arc<FilteredComplex>,
    pub target: Arc<FilteredComplex>,
    pub table: Vec<(usize, usize, usize, Coefficient)>,
    pub slack: Rational,
    pub degree_shift: i64,
    /// Generator name acting as a two-sided unit, when there is one.
    pub unit: Option<String>,
}

/// Same shape as [`ProductData`], with the left factor drawn from an ambient
/// complex acting on a module complex.
#[derive(Clone, Debug)]
pub struct ModuleActionData {
    pub data: ProductData,
}

impl ModuleActionData {
    pub fn ambient(&self) -> &Arc<FilteredComplex> {
        &self.data.left
    }

    pub fn module(&self) -> &Arc<FilteredComplex> {
        &self.data.right
    }
}

impl ProductData {
    /// `g1 * g2` as a chain in the target.
    pub fn product_of(&self, g1: usize, g2: usize) -> Chain {
        let ring = self.target.ring();
        let mut out = Chain::new();
        for (a, b, o, c) in &self.table {
            if *a == g1 && *b == g2 {
                add_term(ring, &mut out, *o, c);
            }
        }
        out
    }

    /// Bilinear extension to chains.
    pub fn multiply_chains(&self, x: &Chain, y: &Chain) -> Chain {
        let ring = self.target.ring();
        let mut index: BTreeMap<(usize, usize), Vec<(usize, &Coefficient)>> = BTreeMap::new();
        for (a, b, o, c) in &self.table {
            index.entry((*a, *b)).or_default().push((*o, c));
        }
        let mut out = Chain::new();
        for (&i, ci) in x {
            for (&j, cj) in y {
                if let Some(terms) = index.get(&(i, j)) {
                    let cij = ring.mul_unchecked(ci, cj);
                    for (o, c) in terms {
                        add_term(ring, &mut out, *o, &ring.mul_unchecked(&cij, c));
                    }
                }
            }
        }
        out
    }

    pub fn multiply(&self, a: &ChainClass, b: &ChainClass) -> ChainClass {
        ChainClass {
            degree: a.degree + b.degree + self.degree_shift,
            support: self.multiply_chains(&a.support, &b.support),
        }
    }

    /// Every failure of the product invariants: index bounds, ring, degree,
    /// the Leibniz rule and the filtration bound.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let ring = self.target.ring();
        if self.left.ring() != ring || self.right.ring() != ring {
            out.push(format!("factor rings {} and {} differ from {ring}", self.left.ring(), self.right.ring()));
            return out;
        }
        if self.slack < int(0) {
            out.push(format!("negative slack {}", self.slack));
        }
        for (a, b, o, c) in &self.table {
            if *a >= self.left.len() || *b >= self.right.len() || *o >= self.target.len() {
                out.push(format!("table entry ({a}, {b}, {o}) out of range"));
                return out;
            }
            if !ring.contains(c) {
                out.push(format!("table coefficient {c:?} is not in {ring}"));
                return out;
            }
        }
        for (a, b, o, c) in &self.table {
            let (g1, g2) = (self.left.generator(*a), self.right.generator(*b));
            let name = format!("{} * {} -> {}", g1.name, g2.name, self.target.generator(*o).name);
            for (k, _) in c.terms() {
                let d = self.target.monomial_degree(*o, k);
                if d != g1.degree + g2.degree + self.degree_shift {
                    out.push(format!("{name}: degree {d}, expected {}", g1.degree + g2.degree + self.degree_shift));
                }
            }
            let raised = self.target.weighted_action(*o, c);
            let bound = &g1.action + &g2.action + &self.slack;
            if raised > bound {
                out.push(format!("{name}: action {raised} above {bound}"));
            }
        }
        for a in 0..self.left.len() {
            for b in 0..self.right.len() {
                let ga: Chain = [(a, ring.one())].into();
                let gb: Chain = [(b, ring.one())].into();
                let lhs = self.target.apply_boundary(&self.multiply_chains(&ga, &gb));
                let mut rhs = self.multiply_chains(&self.left.apply_boundary(&ga), &gb);
                let sign =
                    if self.left.generator(a).degree.rem_euclid(2) == 0 { ring.one() } else { ring.from_i64(-1) };
                for (i, c) in self.multiply_chains(&ga, &self.right.apply_boundary(&gb)) {
                    add_term(ring, &mut rhs, i, &ring.mul_unchecked(&sign, &c));
                }
                if lhs != rhs {
                    out.push(format!(
                        "Leibniz rule fails on {} * {}",
                        self.left.generator(a).name,
                        self.right.generator(b).name
                    ));
                }
            }
        }
        out
    }

    /// Whether the declared unit `u` satisfies `u*x = x` and `x*u = x` on
    /// generators (for factors sharing names with the target).
    pub fn unit_violations(&self) -> Vec<String> {
        let Some(name) = &self.unit else { return Vec::new() };
        let ring = self.target.ring();
        let mut out = Vec::new();
        let (Ok(ul), Ok(ur)) = (self.left.index_of(name), self.right.index_of(name)) else {
            return vec![format!("unit `{name}` is not a generator of both factors")];
        };
        for (x, g) in self.right.generators().iter().enumerate() {
            let expected: Chain = match self.target.index_of(&g.name) {
                Ok(i) => [(i, ring.one())].into(),
                Err(_) => return vec![format!("`{}` has no counterpart in the target", g.name)],
            };
            if self.product_of(ul, x) != expected {
                out.push(format!("{name} * {} is not {}", g.name, g.name));
            }
        }
        for (x, g) in self.left.generators().iter().enumerate() {
            let expected: Chain = match self.target.index_of(&g.name) {
                Ok(i) => [(i, ring.one())].into(),
                Err(_) => return vec![format!("`{}` has no counterpart in the target", g.name)],
            };
            if self.product_of(x, ur) != expected {
                out.push(format!("{} * {name} is not {}", g.name, g.name));
            }
        }
        out
    }
}

/// The intersection product on the torus model: `T` is the unit,
/// `s1 * s2 = p = -(s2 * s1)`, every other product of basis elements
/// vanishes, and degrees add with shift `-2`.
pub fn torus_intersection_product(torus: Arc<FilteredComplex>) -> Result<ProductData, ComplexError> {
    let ring = torus.ring().clone();
    let [p, s1, s2, t] = ["p", "s1", "s2", "T"].map(|n| torus.index_of(n));
    let (p, s1, s2, t) = (p?, s1?, s2?, t?);
    let mut table = Vec::new();
    for x in [p, s1, s2, t] {
        table.push((t, x, x, ring.one()));
        if x != t {
            table.push((x, t, x, ring.one()));
        }
    }
    table.push((s1, s2, p, ring.one()));
    table.push((s2, s1, p, ring.from_i64(-1)));
    let data = ProductData {
        left: torus.clone(),
        right: torus.clone(),
        target: torus,
        table,
        slack: int(0),
        degree_shift: -2,
        unit: Some("T".to_string()),
    };
    let violations = data.violations();
    if violations.is_empty() {
        Ok(data)
    } else {
        Err(ComplexError::InvalidModel(violations.join("; ")))
    }
}

/// The unit action of a point-like ambient class `e` on a module: `e * x = x`.
pub fn unit_action(
    ambient: Arc<FilteredComplex>,
    unit: &str,
    module: Arc<FilteredComplex>,
) -> Result<ModuleActionData, ComplexError> {
    let u = ambient.index_of(unit)?;
    let ring = module.ring().clone();
    let table = (0..module.len()).map(|x| (u, x, x, ring.one())).collect();
    let degree_shift = -ambient.generator(u).degree;
    let slack = (-&ambient.generator(u).action).max(int(0));
    let data =
        ProductData { left: ambient, right: module.clone(), target: module, table, slack, degree_shift, unit: None };
    let violations = data.violations();
    if violations.is_empty() {
        Ok(ModuleActionData { data })
    } else {
        Err(ComplexError::InvalidModel(violations.join("; ")))
    }
}

/// Parameters of [`random_complex`].
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub ring: BaseRing,
    pub max_generators: usize,
    pub max_degree: i64,
    /// Actions are drawn from `0..action_levels`, ties allowed.
    pub action_levels: i64,
}

impl RandomSpec {
    pub fn new(ring: BaseRing, max_generators: usize) -> Self {
        RandomSpec { ring, max_generators, max_degree: 3, action_levels: 6 }
    }
}

fn random_unit_or_small(rng: &mut impl Rng, ring: &BaseRing) -> Scalar {
    loop {
        let v = match ring {
            BaseRing::Integers => *[1, -1, 2, -2].choose(rng).unwrap(),
            BaseRing::PrimeField(p) => rng.gen_range(1..i64::from(*p)),
            BaseRing::Rationals => *[1, -1, 2, -3].choose(rng).unwrap(),
        };
        let s = ring.from_i64(v);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random valid complex `d = B D B^-1`: `D` pairs generators one degree
/// apart with strictly decreasing action, and `B` is unitriangular in
/// filtration order, degree preserving and never raises action.
pub fn random_complex(rng: &mut impl Rng, spec: &RandomSpec) -> FilteredComplex {
    let ring = &spec.ring;
    let n = rng.gen_range(1..=spec.max_generators.max(1));
    let mut gens: Vec<Generator> = (0..n)
        .map(|i| {
            Generator::new(
                format!("g{i}"),
                rng.gen_range(0..=spec.max_degree),
                int(rng.gen_range(0..spec.action_levels)),
            )
        })
        .collect();
    gens.sort_by(|a, b| a.action.cmp(&b.action));
    for (i, g) in gens.iter_mut().enumerate() {
        g.name = format!("g{i}");
    }
    // D: column u holds d(g_u)
    let mut d = vec![vec![ring.zero(); n]; n];
    let mut paired = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &u in &order {
        if paired[u] || !rng.gen_bool(0.7) {
            continue;
        }
        let candidates: Vec<usize> = (0..n)
            .filter(|&v| {
                !paired[v] && v != u && gens[v].degree == gens[u].degree - 1 && gens[v].action < gens[u].action
            })
            .collect();
        if let Some(&v) = candidates.choose(rng) {
            paired[u] = true;
            paired[v] = true;
            d[v][u] = random_unit_or_small(rng, ring);
        }
    }
    // B: column i is g_i plus lower generators of the same degree
    let mut b = vec![vec![ring.zero(); n]; n];
    for i in 0..n {
        b[i][i] = ring.one();
        for j in 0..i {
            if gens[j].degree == gens[i].degree && rng.gen_bool(0.4) {
                b[j][i] = ring.from_i64(rng.gen_range(-2..=2));
            }
        }
    }
    // B is upper unitriangular; invert by back substitution
    let mut b_inv = vec![vec![ring.zero(); n]; n];
    #[allow(clippy::needless_range_loop)]
    for col in 0..n {
        for row in (0..=col).rev() {
            let mut s = if row == col { ring.one() } else { ring.zero() };
            for k in row + 1..=col {
                s = s.sub(&b[row][k].mul(&b_inv[k][col]));
            }
            b_inv[row][col] = s;
        }
    }
    let mul = |x: &Vec<Vec<Scalar>>, y: &Vec<Vec<Scalar>>| -> Vec<Vec<Scalar>> {
        (0..n)
            .map(|r| (0..n).map(|c| (0..n).fold(ring.zero(), |acc, k| acc.add(&x[r][k].mul(&y[k][c])))).collect())
            .collect()
    };
    let boundary = mul(&mul(&b, &d), &b_inv);
    let desc = RingDescriptor::Base(ring.clone());
    let mut entries = Vec::new();
    for (target, row) in boundary.iter().enumerate() {
        for (source, s) in row.iter().enumerate() {
            if !s.is_zero() {
                entries.push(BoundaryEntry { source, target, coeff: Coefficient::Scalar(s.clone()) });
            }
        }
    }
    FilteredComplex::new(desc, gens, entries, Vec::new(), None).expect("conjugated elementary complex is valid")
}

/// Random cycles of a base-ring complex: homology representatives, their
/// random combinations, each plus a random boundary, and pure boundaries.
pub fn random_classes(rng: &mut impl Rng, c: &FilteredComplex, count: usize) -> Vec<ChainClass> {
    let ring = c.ring().clone();
    let degrees = c.degrees();
    let bases: Vec<_> = degrees.iter().map(|&k| homology::homology(c, k).expect("base ring")).collect();
    let mut out = Vec::new();
    for _ in 0..count {
        let Some(&k) = degrees.choose(rng) else { break };
        let basis = &bases[degrees.iter().position(|&d| d == k).unwrap()];
        let mut class = ChainClass::zero(k);
        for rep in basis.classes() {
            if rng.gen_bool(0.6) {
                let r = ring.from_i64(rng.gen_range(-2..=2));
                class = class.add(&ring, &rep.scaled(&ring, &r).expect("same ring"));
            }
        }
        let mut x = Chain::new();
        for i in c.indices_in_degree(k + 1) {
            if rng.gen_bool(0.5) {
                add_term(&ring, &mut x, i, &ring.from_i64(rng.gen_range(-2..=2)));
            }
        }
        let boundary = ChainClass { degree: k, support: c.apply_boundary(&x) };
        out.push(class.add(&ring, &boundary));
    }
    out
}

/// A named member of the golden corpus.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub complex: FilteredComplex,
}

/// The shipped corpus, in a fixed order.
pub fn golden_corpus() -> Vec<CorpusEntry> {
    let z = RingDescriptor::integers();
    let q = RingDescriptor::rationals();
    let f2 = RingDescriptor::prime_field(2).unwrap();
    let f3 = RingDescriptor::prime_field(3).unwrap();
    let entry = |name: &str, complex: Result<FilteredComplex, ComplexError>| CorpusEntry {
        name: name.to_string(),
        complex: complex.expect("corpus model"),
    };
    let circle_f2 = morse_circle(&int(0), &int(1), &f2).unwrap();
    vec![
        entry("circle_z", morse_circle(&int(0), &int(1), &z)),
        entry("circle_f2", Ok(circle_f2.clone())),
        entry("circle_f3", morse_circle(&int(0), &int(1), &f3)),
        entry("circle_q", morse_circle(&int(0), &int(1), &q)),
        entry("circle2_q", morse_circle(&Rational::new(1.into(), 3.into()), &int(2), &q)),
        entry("sphere_q", morse_sphere(&int(0), &int(1), &q)),
        entry("torus_f2", morse_torus(&int(0), &int(1), &int(1), &int(2), &f2)),
        entry("torus_z", morse_torus(&int(0), &int(1), &int(1), &int(2), &z)),
        entry("rp2_z", morse_rp2(&int(0), &int(1), &int(2), &z)),
        entry("rp2_f2", morse_rp2(&int(0), &int(1), &int(2), &f2)),
        entry("interval_z", interval(&z)),
        entry("interval_f3", interval(&f3)),
        entry("three_q", three_generator(&q)),
        entry("three_f3", three_generator(&f3)),
        entry("orbit_circle_z", Ok(periodic_orbit_model(&morse_circle(&int(0), &int(1), &z).unwrap()))),
        entry("circle_lift_f2", floer_model(&circle_f2, 2, &int(1), Window::new(-1, 1).unwrap())),
    ]
}
