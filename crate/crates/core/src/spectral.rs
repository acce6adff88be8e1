//! Spectral invariants of homology classes in based filtered complexes.
//!
//! `ℓ(α) = inf { a : α ∈ im(H(V^a) → H(V)) }`, where `V^a` is spanned by the
//! generators of action strictly below `a`. Two independent routes compute
//! it over base rings:
//!
//! * the membership scan (reference semantics, any base ring) binary-searches
//!   the action values of the class degree, deciding each membership with a
//!   Smith normal form;
//! * the reduction path (fields only) reduces the boundary columns in
//!   filtration order and then reduces the class against them; the action at
//!   the surviving lowest entry is the minimum over representatives of the
//!   maximal action in the support.
//!
//! Novikov complexes are expanded over a window of powers of `t`, which is
//! doubled until two consecutive answers agree.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::coeff::{BaseRing, Coefficient, Extended, Rational, Scalar};
use crate::complex::{ChainClass, ComplexError, Expansion, FilteredComplex, Window};
use crate::homology::{base_ring, ImageProblem};
use crate::linalg::Smith;

/// A spectral value: an exact rational or one of the sentinels `-inf`, `+inf`.
pub type SpectralValue = Extended;

/// Give up on window stabilization after this many doublings.
pub const MAX_DOUBLINGS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("window did not stabilize after {doublings} doublings (last window {window})")]
    Unstable { doublings: usize, window: Window },
    #[error("period action must be positive, got {0}")]
    NonPositivePeriod(Rational),
    #[error("the reduction path needs a field, got {0}")]
    NotAField(String),
    #[error("the oracle needs a prime field, got {0}")]
    OracleRing(String),
    #[error("enumeration needs {states} states, above the cap {cap}")]
    CapExceeded { states: String, cap: u64 },
}

/// Sorted distinct action values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSpectrum(pub Vec<Rational>);

impl ActionSpectrum {
    pub fn contains(&self, q: &Rational) -> bool {
        self.0.binary_search(q).is_ok()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }
}

/// Generator actions; Novikov complexes contribute every monomial of the
/// active window.
pub fn action_spectrum(c: &FilteredComplex) -> ActionSpectrum {
    ActionSpectrum(c.action_values())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Reduction over fields, membership scan over the integers.
    Auto,
    Scan,
    Reduction,
}

/// A spectral value together with the window it stabilized on (Novikov
/// complexes only) and the number of doublings that took.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: SpectralValue,
    pub window: Option<Window>,
    pub doublings: usize,
}

type Column = BTreeMap<usize, Scalar>;

/// Reduced boundary columns keyed by their lowest (latest in filtration
/// order) entry.
struct Reduction {
    pivots: HashMap<usize, Column>,
}

fn reduce(pivots: &HashMap<usize, Column>, mut col: Column) -> Column {
    while let Some((&low, lead)) = col.last_key_value() {
        let Some(pivot) = pivots.get(&low) else { break };
        let factor = lead.div_exact(&pivot[&low]).expect("field pivot");
        for (&i, s) in pivot {
            let v = col.get(&i).map_or_else(|| s.mul(&factor).neg(), |x| x.sub(&s.mul(&factor)));
            if v.is_zero() {
                col.remove(&i);
            } else {
                col.insert(i, v);
            }
        }
    }
    col
}

/// High rows of one level with their factorization.
type Factored = Arc<(Vec<usize>, Smith)>;

struct Scan {
    levels: Vec<Rational>,
    problem: ImageProblem,
    factored: Mutex<HashMap<usize, Factored>>,
}

/// Cached state for queries against one base-ring complex.
struct BaseEngine {
    expansion: Expansion,
    ring: BaseRing,
    position: Vec<usize>,
    reductions: Mutex<HashMap<i64, Arc<Reduction>>>,
    scans: Mutex<HashMap<i64, Arc<Scan>>>,
}

impl BaseEngine {
    fn new(expansion: Expansion) -> Result<Self, ComplexError> {
        let complex = &expansion.complex;
        let ring = base_ring(complex)?.clone();
        let mut order: Vec<usize> = (0..complex.len()).collect();
        order.sort_by(|&a, &b| complex.generator(a).action.cmp(&complex.generator(b).action).then(a.cmp(&b)));
        let mut position = vec![0; complex.len()];
        for (p, &i) in order.iter().enumerate() {
            position[i] = p;
        }
        Ok(BaseEngine {
            expansion,
            ring,
            position,
            reductions: Mutex::new(HashMap::new()),
            scans: Mutex::new(HashMap::new()),
        })
    }

    fn complex(&self) -> &FilteredComplex {
        &self.expansion.complex
    }

    fn column(&self, chain: &crate::complex::Chain) -> Column {
        chain.iter().map(|(&i, c)| (self.position[i], c.as_scalar().expect("base coefficient").clone())).collect()
    }

    fn reduction(&self, degree: i64) -> Arc<Reduction> {
        if let Some(r) = self.reductions.lock().unwrap().get(&degree) {
            return r.clone();
        }
        let c = self.complex();
        let mut sources = c.indices_in_degree(degree + 1);
        sources.sort_by_key(|&u| self.position[u]);
        let mut pivots = HashMap::new();
        for u in sources {
            let col: Column = c
                .boundary_of(u)
                .iter()
                .map(|e| (self.position[e.target], e.coeff.as_scalar().expect("base coefficient").clone()))
                .collect();
            let col = reduce(&pivots, col);
            if let Some((&low, _)) = col.last_key_value() {
                pivots.insert(low, col);
            }
        }
        let r = Arc::new(Reduction { pivots });
        self.reductions.lock().unwrap().entry(degree).or_insert(r).clone()
    }

    fn scan(&self, degree: i64) -> Result<Arc<Scan>, ComplexError> {
        if let Some(s) = self.scans.lock().unwrap().get(&degree) {
            return Ok(s.clone());
        }
        let c = self.complex();
        let mut levels: Vec<Rational> =
            c.indices_in_degree(degree).iter().map(|&i| c.generator(i).action.clone()).collect();
        levels.sort();
        levels.dedup();
        let s = Arc::new(Scan { levels, problem: ImageProblem::new(c, degree)?, factored: Mutex::new(HashMap::new()) });
        Ok(self.scans.lock().unwrap().entry(degree).or_insert(s).clone())
    }

    fn by_reduction(&self, class: &ChainClass) -> Result<SpectralValue, SpectralError> {
        if !self.ring.is_field() {
            return Err(SpectralError::NotAField(self.ring.to_string()));
        }
        let reduction = self.reduction(class.degree);
        let col = reduce(&reduction.pivots, self.column(&class.support));
        Ok(match col.last_key_value() {
            None => Extended::NegInf,
            Some((&low, _)) => {
                let i = self.position.iter().position(|&p| p == low).expect("position");
                Extended::Finite(self.complex().generator(i).action.clone())
            }
        })
    }

    /// Membership of `class` once every level up to `levels[level]` is
    /// included; `None` stands for the empty sublevel.
    fn member(&self, scan: &Scan, level: Option<usize>, class: &ChainClass) -> bool {
        let key = level.map_or(0, |l| l + 1);
        let cached = scan.factored.lock().unwrap().get(&key).cloned();
        let entry = match cached {
            Some(e) => e,
            None => {
                let c = self.complex();
                let high = scan.problem.high_rows(|i| match level {
                    None => true,
                    Some(l) => c.generator(i).action > scan.levels[l],
                });
                let factored = scan.problem.factor(&high);
                let e = Arc::new((high, factored));
                scan.factored.lock().unwrap().entry(key).or_insert(e).clone()
            }
        };
        scan.problem.member(&entry.1, &entry.0, &class.support)
    }

    fn by_scan(&self, class: &ChainClass) -> Result<SpectralValue, SpectralError> {
        let scan = self.scan(class.degree)?;
        if self.member(&scan, None, class) {
            return Ok(Extended::NegInf);
        }
        // membership is monotone in the level and holds at the last one
        let (mut lo, mut hi) = (0, scan.levels.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.member(&scan, Some(mid), class) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(Extended::Finite(scan.levels[lo].clone()))
    }

    fn value(&self, class: &ChainClass, method: Method) -> Result<SpectralValue, SpectralError> {
        match method {
            Method::Scan => self.by_scan(class),
            Method::Reduction => self.by_reduction(class),
            Method::Auto if self.ring.is_field() => self.by_reduction(class),
            Method::Auto => self.by_scan(class),
        }
    }
}

/// A query session over one complex. Reductions and factorizations are
/// cached per degree, sublevel and window; concurrent queries return the
/// same values as serial ones.
pub struct SpectralEngine {
    complex: FilteredComplex,
    engines: Mutex<HashMap<Window, Arc<BaseEngine>>>,
}

impl SpectralEngine {
    pub fn new(complex: &FilteredComplex) -> Self {
        SpectralEngine { complex: complex.clone(), engines: Mutex::new(HashMap::new()) }
    }

    pub fn complex(&self) -> &FilteredComplex {
        &self.complex
    }

    fn engine(&self, window: Window) -> Result<Arc<BaseEngine>, ComplexError> {
        if let Some(e) = self.engines.lock().unwrap().get(&window) {
            return Ok(e.clone());
        }
        let e = Arc::new(BaseEngine::new(self.complex.expand(window)?)?);
        Ok(self.engines.lock().unwrap().entry(window).or_insert(e).clone())
    }

    fn value_in(&self, window: Window, class: &ChainClass, method: Method) -> Result<SpectralValue, SpectralError> {
        let engine = self.engine(window)?;
        let expanded = engine.expansion.expand_class(class)?;
        engine.value(&expanded, method)
    }

    pub fn evaluate(&self, class: &ChainClass, method: Method) -> Result<Evaluation, SpectralError> {
        self.complex.check_class(class)?;
        if !self.complex.ring().is_novikov() {
            let value = self.value_in(Window::zero(), class, method)?;
            return Ok(Evaluation { value, window: None, doublings: 0 });
        }
        let mut window = self.complex.active_window();
        if let Some(w) = Expansion::class_window(class) {
            window = window.hull(&w);
        }
        let mut previous = self.value_in(window, class, method)?;
        for doublings in 1..=MAX_DOUBLINGS {
            window = window.doubled();
            let value = self.value_in(window, class, method)?;
            if value == previous {
                return Ok(Evaluation { value, window: Some(window), doublings });
            }
            previous = value;
        }
        Err(SpectralError::Unstable { doublings: MAX_DOUBLINGS, window })
    }

    pub fn invariant(&self, class: &ChainClass) -> Result<SpectralValue, SpectralError> {
        Ok(self.evaluate(class, Method::Auto)?.value)
    }

    pub fn invariant_by_scan(&self, class: &ChainClass) -> Result<SpectralValue, SpectralError> {
        Ok(self.evaluate(class, Method::Scan)?.value)
    }
}

pub fn spectral_invariant(c: &FilteredComplex, class: &ChainClass) -> Result<SpectralValue, SpectralError> {
    SpectralEngine::new(c).invariant(class)
}

pub fn spectral_invariant_by_scan(c: &FilteredComplex, class: &ChainClass) -> Result<SpectralValue, SpectralError> {
    SpectralEngine::new(c).invariant_by_scan(class)
}

/// `ℓ^∨` of a cocycle of `c.dualize()`, as minus the invariant of the
/// opposite complex. The zero class gives `+inf`.
pub fn cohomological_invariant(c: &FilteredComplex, cocycle: &ChainClass) -> Result<SpectralValue, SpectralError> {
    Ok(spectral_invariant(&c.dualize(), cocycle)?.negate())
}

/// `ℓ(α) / period_action`.
pub fn valuation(
    c: &FilteredComplex,
    class: &ChainClass,
    period_action: &Rational,
) -> Result<SpectralValue, SpectralError> {
    if period_action <= &Rational::from_integer(0.into()) {
        return Err(SpectralError::NonPositivePeriod(period_action.clone()));
    }
    Ok(match spectral_invariant(c, class)? {
        Extended::Finite(q) => Extended::Finite(q / period_action),
        other => other,
    })
}

/// Exhaustive enumeration over `F_p`: the minimum over all representatives
/// `α + dx` of the largest action in the support.
pub mod oracle {
    use super::*;

    /// `3^12`.
    pub const DEFAULT_CAP: u64 = 531_441;

    pub fn brute_force_invariant(c: &FilteredComplex, class: &ChainClass) -> Result<SpectralValue, SpectralError> {
        brute_force_invariant_capped(c, class, DEFAULT_CAP)
    }

    pub fn brute_force_invariant_capped(
        c: &FilteredComplex,
        class: &ChainClass,
        cap: u64,
    ) -> Result<SpectralValue, SpectralError> {
        let p = match c.ring() {
            crate::coeff::RingDescriptor::Base(BaseRing::PrimeField(p)) => u64::from(*p),
            other => return Err(SpectralError::OracleRing(other.to_string())),
        };
        c.check_class(class)?;
        let rows = c.indices_in_degree(class.degree);
        let cols = c.indices_in_degree(class.degree + 1);
        let states = u32::try_from(cols.len()).ok().and_then(|n| p.checked_pow(n));
        match states {
            Some(s) if s <= cap => {}
            _ => {
                return Err(SpectralError::CapExceeded { states: format!("{p}^{}", cols.len()), cap });
            }
        }
        let mut by_action = rows.clone();
        by_action.sort_by(|&a, &b| c.generator(a).action.cmp(&c.generator(b).action));
        let rank_of: HashMap<usize, usize> = by_action.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        let slot: HashMap<usize, usize> = rows.iter().enumerate().map(|(s, &i)| (i, s)).collect();
        let residue = |coeff: &Coefficient| match coeff.as_scalar() {
            Some(Scalar::Mod { value, .. }) => u64::from(*value),
            _ => unreachable!("prime field coefficient"),
        };
        let columns: Vec<Vec<u64>> = cols
            .iter()
            .map(|&u| {
                let mut v = vec![0u64; rows.len()];
                for e in c.boundary_of(u) {
                    v[slot[&e.target]] = residue(&e.coeff);
                }
                v
            })
            .collect();
        let mut z = vec![0u64; rows.len()];
        for (i, coeff) in &class.support {
            z[slot[i]] = residue(coeff);
        }
        let score = |z: &[u64]| -> Option<usize> {
            z.iter().zip(&rows).filter(|(v, _)| **v != 0).map(|(_, i)| rank_of[i]).max()
        };
        let mut best = score(&z);
        let mut digits = vec![0u64; cols.len()];
        'outer: while best.is_some() {
            let mut d = 0;
            loop {
                if d == cols.len() {
                    break 'outer;
                }
                for (zi, ci) in z.iter_mut().zip(&columns[d]) {
                    *zi = (*zi + ci) % p;
                }
                digits[d] += 1;
                if digits[d] < p {
                    break;
                }
                digits[d] = 0;
                d += 1;
            }
            let s = score(&z);
            if s < best {
                best = s;
            }
        }
        Ok(match best {
            None => Extended::NegInf,
            Some(r) => Extended::Finite(c.generator(by_action[r]).action.clone()),
        })
    }
}
