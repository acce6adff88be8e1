//! Based filtered graded chain complexes.
//!
//! A [`FilteredComplex`] is a free module over a [`RingDescriptor`] with a
//! distinguished basis of [`Generator`]s, each carrying an integer degree and
//! an exact rational action, together with a sparse boundary operator. The
//! boundary must square to zero, lower degree by one and strictly lower
//! action. Over a Novikov ring the generators form a basis over the Laurent
//! ring, and a monomial `t^k * g` has degree `deg(g) - k*N` and action
//! `A(g) - k*period_action`.
//!
//! Every constructor here is pure: complexes are immutable once built.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::coeff::{BaseRing, CoeffError, Coefficient, Extended, Rational, RingDescriptor, Scalar};

/// Sparse chain: generator index to nonzero coefficient.
pub type Chain = BTreeMap<usize, Coefficient>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("invalid complex:\n{0}")]
    Invalid(ValidationReport),
    #[error("class is not a cycle ({0} nonzero boundary terms)")]
    NotACycle(usize),
    #[error("class does not belong to this complex: {0}")]
    ClassMismatch(String),
    #[error("filtration violated: {0}")]
    FiltrationViolation(String),
    #[error("perturbation of `{}` by {} exceeds the bound {}", .0.name, .0.delta, .0.bound)]
    PerturbationTooLarge(Box<Excess>),
    #[error("empty Novikov window {0}")]
    EmptyWindow(Window),
    #[error("invalid Novikov period: {0}")]
    InvalidPeriod(String),
    #[error("window {window} truncation is not a chain complex: {reason}")]
    WindowTruncation { window: Window, reason: String },
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("map entry {} raises action by {}, above the shift {}", .0.name, .0.delta, .0.bound)]
    ShiftViolation(Box<Excess>),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

/// An amount `delta` attached to `name` that went past `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Excess {
    pub name: String,
    pub delta: Rational,
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub action: Rational,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64, action: Rational) -> Self {
        Generator { name: name.into(), degree, action }
    }
}

/// `coeff * target` is a term of the boundary of `source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryEntry {
    pub source: usize,
    pub target: usize,
    pub coeff: Coefficient,
}

/// A finite range `min..=max` of powers of `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub min: i64,
    pub max: i64,
}

impl Window {
    pub fn new(min: i64, max: i64) -> Result<Self, ComplexError> {
        let w = Window { min, max };
        if min > max {
            Err(ComplexError::EmptyWindow(w))
        } else {
            Ok(w)
        }
    }

    pub fn zero() -> Self {
        Window { min: 0, max: 0 }
    }

    pub fn width(&self) -> i64 {
        self.max - self.min + 1
    }

    pub fn contains(&self, k: i64) -> bool {
        self.min <= k && k <= self.max
    }

    pub fn hull(&self, other: &Window) -> Window {
        Window { min: self.min.min(other.min), max: self.max.max(other.max) }
    }

    /// Grows the window symmetrically so that its width doubles.
    pub fn doubled(&self) -> Window {
        let grow = (self.width() + 1) / 2;
        Window { min: self.min - grow, max: self.max + grow }
    }

    pub fn powers(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.min, self.max)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateName { name: String },
    BoundarySquare { source: String, target: String, coeff: String },
    ActionNotDecreasing { source: String, target: String, source_action: Rational, target_action: Rational },
    DegreeMismatch { source: String, target: String, source_degree: i64, target_degree: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName { name } => write!(f, "duplicate generator name `{name}`"),
            Violation::BoundarySquare { source, target, coeff } => {
                write!(f, "boundary squared is nonzero: <dd {source}, {target}> = {coeff}")
            }
            Violation::ActionNotDecreasing { source, target, source_action, target_action } => {
                write!(f, "boundary {source} -> {target} does not decrease action ({source_action} <= {target_action})")
            }
            Violation::DegreeMismatch { source, target, source_degree, target_degree } => {
                write!(f, "boundary {source} -> {target} maps degree {source_degree} to degree {target_degree}")
            }
        }
    }
}

/// Every invariant a complex violates; empty iff the complex is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FilteredComplex {
    ring: RingDescriptor,
    generators: Vec<Generator>,
    entries: Vec<BoundaryEntry>,
    tags: Vec<String>,
    window: Option<Window>,
    by_name: HashMap<String, usize>,
    column_start: Vec<usize>,
}

impl PartialEq for FilteredComplex {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.generators == other.generators
            && self.entries == other.entries
            && self.tags == other.tags
            && self.window == other.window
    }
}

impl Eq for FilteredComplex {}

fn canonical_entries(ring: &RingDescriptor, entries: Vec<BoundaryEntry>) -> Vec<BoundaryEntry> {
    let mut merged: BTreeMap<(usize, usize), Coefficient> = BTreeMap::new();
    for e in entries {
        let slot = merged.entry((e.source, e.target)).or_insert_with(|| ring.zero());
        *slot = ring.add_unchecked(slot, &e.coeff);
    }
    merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((source, target), coeff)| BoundaryEntry { source, target, coeff })
        .collect()
}

impl FilteredComplex {
    /// Assembles a complex without checking its invariants; see
    /// [`FilteredComplex::validate`]. Entries are merged and sorted, zero
    /// entries are dropped. Fails only on structural problems (indices out of
    /// range, coefficients from another ring, malformed window).
    pub fn from_parts(
        ring: RingDescriptor,
        generators: Vec<Generator>,
        entries: Vec<BoundaryEntry>,
        tags: Vec<String>,
        window: Option<Window>,
    ) -> Result<Self, ComplexError> {
        for e in &entries {
            for idx in [e.source, e.target] {
                if idx >= generators.len() {
                    return Err(ComplexError::IndexOutOfRange(idx));
                }
            }
            if !ring.contains(&e.coeff) {
                return Err(
                    CoeffError::RingMismatch(format!("boundary coefficient {:?} is not in {ring}", e.coeff)).into()
                );
            }
        }
        if let Some(w) = window {
            Window::new(w.min, w.max)?;
            if !ring.is_novikov() {
                return Err(ComplexError::UnsupportedRing(format!("window on non-Novikov ring {ring}")));
            }
        }
        let entries = canonical_entries(&ring, entries);
        let mut by_name = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            by_name.entry(g.name.clone()).or_insert(i);
        }
        let mut column_start = vec![0; generators.len() + 1];
        for e in &entries {
            column_start[e.source + 1] += 1;
        }
        for i in 0..generators.len() {
            column_start[i + 1] += column_start[i];
        }
        Ok(FilteredComplex { ring, generators, entries, tags, window, by_name, column_start })
    }

    /// Assembles and validates.
    pub fn new(
        ring: RingDescriptor,
        generators: Vec<Generator>,
        entries: Vec<BoundaryEntry>,
        tags: Vec<String>,
        window: Option<Window>,
    ) -> Result<Self, ComplexError> {
        let c = Self::from_parts(ring, generators, entries, tags, window)?;
        c.into_validated()
    }

    pub fn into_validated(self) -> Result<Self, ComplexError> {
        let report = self.validate();
        if report.is_empty() {
            Ok(self)
        } else {
            Err(ComplexError::Invalid(report))
        }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn entries(&self) -> &[BoundaryEntry] {
        &self.entries
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    pub fn window(&self) -> Option<Window> {
        self.window
    }

    /// The window materialized by downstream scans (`0:0` when unset).
    pub fn active_window(&self) -> Window {
        self.window.unwrap_or_else(Window::zero)
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ComplexError> {
        self.by_name.get(name).copied().ok_or_else(|| ComplexError::UnknownGenerator(name.to_string()))
    }

    /// Boundary entries whose source is generator `i`.
    pub fn boundary_of(&self, i: usize) -> &[BoundaryEntry] {
        &self.entries[self.column_start[i]..self.column_start[i + 1]]
    }

    pub fn with_tag(mut self, tag: &str) -> Self {
        if !self.has_tag(tag) {
            self.tags.push(tag.to_string());
        }
        self
    }

    pub fn without_tag(mut self, tag: &str) -> Self {
        self.tags.retain(|t| t != tag);
        self
    }

    fn period_degree(&self) -> i64 {
        self.ring.period().map_or(0, |p| p.degree)
    }

    fn period_action(&self) -> Rational {
        self.ring.period().map_or_else(Rational::zero, |p| p.action.clone())
    }

    /// Degree of the monomial `t^power * g_i`.
    pub fn monomial_degree(&self, i: usize, power: i64) -> i64 {
        self.generators[i].degree - power * self.period_degree()
    }

    /// Action of the monomial `t^power * g_i`.
    pub fn monomial_action(&self, i: usize, power: i64) -> Rational {
        &self.generators[i].action - self.period_action() * BigInt::from(power)
    }

    /// Largest action among the monomials `coeff * g_i`.
    pub fn weighted_action(&self, i: usize, coeff: &Coefficient) -> Rational {
        let k = coeff.min_power().unwrap_or(0);
        self.monomial_action(i, k)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut seen = HashSet::new();
        for g in &self.generators {
            if !seen.insert(g.name.as_str()) {
                violations.push(Violation::DuplicateName { name: g.name.clone() });
            }
        }
        for e in &self.entries {
            let (u, v) = (&self.generators[e.source], &self.generators[e.target]);
            for (k, _) in e.coeff.terms() {
                let target_degree = self.monomial_degree(e.target, k);
                if target_degree != u.degree - 1 {
                    violations.push(Violation::DegreeMismatch {
                        source: u.name.clone(),
                        target: v.name.clone(),
                        source_degree: u.degree,
                        target_degree,
                    });
                    break;
                }
            }
            let target_action = self.weighted_action(e.target, &e.coeff);
            if u.action <= target_action {
                violations.push(Violation::ActionNotDecreasing {
                    source: u.name.clone(),
                    target: v.name.clone(),
                    source_action: u.action.clone(),
                    target_action,
                });
            }
        }
        for i in 0..self.len() {
            let once: Chain = self.boundary_of(i).iter().map(|e| (e.target, e.coeff.clone())).collect();
            for (w, c) in self.apply_boundary(&once) {
                violations.push(Violation::BoundarySquare {
                    source: self.generators[i].name.clone(),
                    target: self.generators[w].name.clone(),
                    coeff: self.ring.format(&c),
                });
            }
        }
        ValidationReport { violations }
    }

    pub fn apply_boundary(&self, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        for (&u, c) in chain {
            for e in self.boundary_of(u) {
                add_term(&self.ring, &mut out, e.target, &self.ring.mul_unchecked(c, &e.coeff));
            }
        }
        out
    }

    pub fn boundary_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_entries(&self.ring, self.entries.iter().map(|e| (e.source, e.target, e.coeff.clone())))
    }

    /// Distinct generator actions in increasing order; Novikov complexes
    /// contribute every monomial of the active window.
    pub fn action_values(&self) -> Vec<Rational> {
        let mut values: Vec<Rational> = match self.ring.period() {
            None => self.generators.iter().map(|g| g.action.clone()).collect(),
            Some(_) => self
                .active_window()
                .powers()
                .flat_map(|k| (0..self.len()).map(move |i| (k, i)))
                .map(|(k, i)| self.monomial_action(i, k))
                .collect(),
        };
        values.sort();
        values.dedup();
        values
    }

    /// The span of generators with action strictly below `level`. Novikov
    /// complexes are first expanded over their active window.
    pub fn sublevel(&self, level: &Extended) -> Result<FilteredComplex, ComplexError> {
        if self.ring.is_novikov() {
            return self.expand(self.active_window())?.complex.sublevel(level);
        }
        let keep: Vec<bool> = self
            .generators
            .iter()
            .map(|g| match level {
                Extended::NegInf => false,
                Extended::Finite(a) => &g.action < a,
                Extended::PosInf => true,
            })
            .collect();
        Ok(self.restrict(&keep))
    }

    /// Subcomplex (or quotient, the caller decides) spanned by `keep`.
    fn restrict(&self, keep: &[bool]) -> FilteredComplex {
        let mut new_index = vec![usize::MAX; self.len()];
        let mut generators = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if keep[i] {
                new_index[i] = generators.len();
                generators.push(g.clone());
            }
        }
        let entries = self
            .entries
            .iter()
            .filter(|e| keep[e.source] && keep[e.target])
            .map(|e| BoundaryEntry { source: new_index[e.source], target: new_index[e.target], coeff: e.coeff.clone() })
            .collect();
        FilteredComplex::from_parts(self.ring.clone(), generators, entries, self.tags.clone(), self.window)
            .expect("restriction of a well-formed complex")
    }

    /// The dual cochain complex, presented as an opposite chain complex:
    /// `v` becomes `v^v` with negated degree and action, and the coboundary
    /// on a degree-`k` cochain is `(-1)^(k-1)` times the transpose.
    pub fn dualize(&self) -> FilteredComplex {
        let generators =
            self.generators.iter().map(|g| Generator::new(dual_name(&g.name), -g.degree, -g.action.clone())).collect();
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let k = self.generators[e.target].degree;
                let coeff =
                    if (k - 1).rem_euclid(2) == 0 { e.coeff.clone() } else { self.ring.neg_unchecked(&e.coeff) };
                BoundaryEntry { source: e.target, target: e.source, coeff }
            })
            .collect();
        let mut tags = self.tags.clone();
        if tags.iter().any(|t| t == "dual") {
            tags.retain(|t| t != "dual");
        } else {
            tags.push("dual".to_string());
        }
        let window = self.window.map(|w| Window { min: -w.max, max: -w.min });
        FilteredComplex::from_parts(self.ring.clone(), generators, entries, tags, window)
            .expect("dual of a well-formed complex")
    }

    /// Graded tensor product with the Koszul sign
    /// `d(a.b) = da.b + (-1)^|a| a.db`; actions and degrees add.
    pub fn tensor(&self, other: &FilteredComplex) -> Result<FilteredComplex, ComplexError> {
        if self.ring != other.ring {
            return Err(CoeffError::RingMismatch(format!("tensor of {} and {}", self.ring, other.ring)).into());
        }
        let n2 = other.len();
        let mut generators = Vec::with_capacity(self.len() * n2);
        for a in &self.generators {
            for b in &other.generators {
                generators.push(Generator::new(
                    tensor_name(&a.name, &b.name),
                    a.degree + b.degree,
                    &a.action + &b.action,
                ));
            }
        }
        let mut entries = Vec::new();
        for e in &self.entries {
            for j in 0..n2 {
                entries.push(BoundaryEntry {
                    source: e.source * n2 + j,
                    target: e.target * n2 + j,
                    coeff: e.coeff.clone(),
                });
            }
        }
        for (i, a) in self.generators.iter().enumerate() {
            for e in &other.entries {
                let coeff =
                    if a.degree.rem_euclid(2) == 0 { e.coeff.clone() } else { self.ring.neg_unchecked(&e.coeff) };
                entries.push(BoundaryEntry { source: i * n2 + e.source, target: i * n2 + e.target, coeff });
            }
        }
        let window = match (self.window, other.window) {
            (None, None) => None,
            (a, b) => {
                let (a, b) = (a.unwrap_or_else(Window::zero), b.unwrap_or_else(Window::zero));
                Some(Window { min: a.min + b.min, max: a.max + b.max })
            }
        };
        FilteredComplex::new(self.ring.clone(), generators, entries, Vec::new(), window)
    }

    /// Adds `s` to every action.
    pub fn shift_actions(&self, s: &Rational) -> FilteredComplex {
        let mut out = self.clone();
        for g in &mut out.generators {
            g.action = &g.action + s;
        }
        out
    }

    /// Moves each named generator's action by `delta[name]`, where every
    /// `|delta| <= bound`. Fails if the result no longer decreases action
    /// along the boundary.
    pub fn perturb_actions(
        &self,
        delta: &BTreeMap<String, Rational>,
        bound: &Rational,
    ) -> Result<FilteredComplex, ComplexError> {
        let mut out = self.clone();
        for (name, d) in delta {
            if d.abs() > *bound {
                return Err(ComplexError::PerturbationTooLarge(Box::new(Excess {
                    name: name.clone(),
                    delta: d.clone(),
                    bound: bound.clone(),
                })));
            }
            let i = self.index_of(name)?;
            out.generators[i].action = &out.generators[i].action + d;
        }
        let report = out.validate();
        if let Some(v) = report.violations.iter().find(|v| matches!(v, Violation::ActionNotDecreasing { .. })) {
            return Err(ComplexError::FiltrationViolation(v.to_string()));
        }
        Ok(out)
    }

    /// The Novikov-module complex over `base[t, t^-1]` on the same
    /// generators, with the boundary extended `t`-equivariantly.
    pub fn novikov_lift(
        &self,
        period_degree: i64,
        period_action: &Rational,
        window: Window,
    ) -> Result<FilteredComplex, ComplexError> {
        let RingDescriptor::Base(base) = &self.ring else {
            return Err(ComplexError::UnsupportedRing(format!("lift of a complex over {}", self.ring)));
        };
        if period_degree < 2 {
            return Err(ComplexError::InvalidPeriod(format!("period degree {period_degree} < 2")));
        }
        if !period_action.is_positive() {
            return Err(ComplexError::InvalidPeriod(format!("period action {period_action} <= 0")));
        }
        let window = Window::new(window.min, window.max)?;
        let ring = RingDescriptor::novikov(base.clone(), period_degree, period_action.clone())?;
        let entries = self
            .entries
            .iter()
            .map(|e| BoundaryEntry {
                source: e.source,
                target: e.target,
                coeff: ring.embed(e.coeff.as_scalar().expect("base coefficient").clone()),
            })
            .collect();
        FilteredComplex::new(ring, self.generators.clone(), entries, self.tags.clone(), Some(window))
    }

    /// Materializes the monomials `t^k * g` for `k` in `window` as a complex
    /// over the base ring. Base-ring complexes are returned unchanged.
    pub fn expand(&self, window: Window) -> Result<Expansion, ComplexError> {
        let Some(_) = self.ring.period() else {
            return Ok(Expansion {
                complex: self.clone(),
                window: Window::zero(),
                base_len: self.len(),
                novikov: false,
            });
        };
        let window = Window::new(window.min, window.max)?;
        let n = self.len();
        let mut generators = Vec::with_capacity(n * window.width() as usize);
        for k in window.powers() {
            for i in 0..n {
                generators.push(Generator::new(
                    monomial_name(k, &self.generators[i].name),
                    self.monomial_degree(i, k),
                    self.monomial_action(i, k),
                ));
            }
        }
        let slot = |k: i64, i: usize| ((k - window.min) as usize) * n + i;
        let mut entries = Vec::new();
        for e in &self.entries {
            for k in window.powers() {
                for (j, s) in e.coeff.terms() {
                    if window.contains(k + j) {
                        entries.push(BoundaryEntry {
                            source: slot(k, e.source),
                            target: slot(k + j, e.target),
                            coeff: Coefficient::Scalar(s),
                        });
                    }
                }
            }
        }
        let base = RingDescriptor::Base(self.ring.base().clone());
        let complex = FilteredComplex::from_parts(base, generators, entries, self.tags.clone(), None)?;
        let report = complex.validate();
        if !report.is_empty() {
            return Err(ComplexError::WindowTruncation { window, reason: report.to_string() });
        }
        Ok(Expansion { complex, window, base_len: n, novikov: true })
    }

    /// Same generators and boundary, renamed `g -> diag(g)` and retagged as
    /// the Lagrangian-diagonal model.
    pub fn diagonal_repackage(&self) -> FilteredComplex {
        let mut out = self.clone().without_tag(crate::models::PERIODIC_ORBIT_TAG);
        for g in &mut out.generators {
            g.name = format!("diag({})", g.name);
        }
        out.by_name = out.generators.iter().enumerate().map(|(i, g)| (g.name.clone(), i)).collect();
        out.with_tag(crate::models::DIAGONAL_TAG)
    }

    /// Reinterprets the coefficients in another base ring through the
    /// canonical map (integers map everywhere; rationals only to rationals or
    /// fields where their denominators are invertible).
    pub fn change_ring(&self, target: &BaseRing) -> Result<FilteredComplex, ComplexError> {
        let convert = |s: &Scalar| -> Result<Scalar, ComplexError> {
            let q = match s {
                Scalar::Int(v) => Rational::from_integer(v.clone()),
                Scalar::Rat(q) => q.clone(),
                Scalar::Mod { modulus, .. } => {
                    if let BaseRing::PrimeField(p) = target {
                        if p == modulus {
                            return Ok(s.clone());
                        }
                    }
                    return Err(CoeffError::RingMismatch(format!("cannot map F{modulus} into {target}")).into());
                }
            };
            target
                .from_rational(&q)
                .ok_or_else(|| CoeffError::RingMismatch(format!("{q} has no image in {target}")).into())
        };
        let ring = match &self.ring {
            RingDescriptor::Base(_) => RingDescriptor::Base(target.clone()),
            RingDescriptor::Novikov { period, .. } => {
                RingDescriptor::Novikov { base: target.clone(), period: period.clone() }
            }
        };
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let coeff = match &e.coeff {
                Coefficient::Scalar(s) => Coefficient::Scalar(convert(s)?),
                Coefficient::Laurent(terms) => ring.normalize(Coefficient::Laurent(
                    terms.iter().map(|(k, s)| Ok((*k, convert(s)?))).collect::<Result<_, ComplexError>>()?,
                )),
            };
            entries.push(BoundaryEntry { source: e.source, target: e.target, coeff });
        }
        FilteredComplex::new(ring, self.generators.clone(), entries, self.tags.clone(), self.window)
    }

    /// Returns an error unless `class` is a homogeneous cycle of this complex.
    pub fn check_class(&self, class: &ChainClass) -> Result<(), ComplexError> {
        self.check_chain(&class.support, class.degree)?;
        let boundary = self.apply_boundary(&class.support);
        if boundary.is_empty() {
            Ok(())
        } else {
            Err(ComplexError::NotACycle(boundary.len()))
        }
    }

    /// Checks indices, ring membership and homogeneity of a chain.
    pub fn check_chain(&self, chain: &Chain, degree: i64) -> Result<(), ComplexError> {
        for (&i, c) in chain {
            if i >= self.len() {
                return Err(ComplexError::ClassMismatch(format!("generator index {i} out of range")));
            }
            if !self.ring.contains(c) {
                return Err(ComplexError::ClassMismatch(format!("coefficient {c:?} is not in {}", self.ring)));
            }
            for (k, _) in c.terms() {
                let d = self.monomial_degree(i, k);
                if d != degree {
                    return Err(ComplexError::ClassMismatch(format!(
                        "term on `{}` has degree {d}, class has degree {degree}",
                        self.generators[i].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Generator indices of the given degree, in input order (base rings).
    pub fn indices_in_degree(&self, degree: i64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.generators[i].degree == degree).collect()
    }

    /// Distinct generator degrees in increasing order.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.generators.iter().map(|g| g.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

pub(crate) fn add_term(ring: &RingDescriptor, chain: &mut Chain, index: usize, c: &Coefficient) {
    if c.is_zero() {
        return;
    }
    match chain.get_mut(&index) {
        Some(slot) => {
            *slot = ring.add_unchecked(slot, c);
            if slot.is_zero() {
                chain.remove(&index);
            }
        }
        None => {
            chain.insert(index, c.clone());
        }
    }
}

/// Toggles the `^v` suffix, so that dualizing twice restores names.
pub fn dual_name(name: &str) -> String {
    match name.strip_suffix("^v") {
        Some(base) => base.to_string(),
        None => format!("{name}^v"),
    }
}

pub fn tensor_name(a: &str, b: &str) -> String {
    format!("{a}.{b}")
}

pub fn monomial_name(power: i64, name: &str) -> String {
    if power == 0 {
        name.to_string()
    } else {
        format!("t^{power}*{name}")
    }
}

/// A Novikov complex materialized over a finite window of powers.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub complex: FilteredComplex,
    pub window: Window,
    base_len: usize,
    novikov: bool,
}

impl Expansion {
    /// Index of `t^power * g_i` in the expanded complex.
    pub fn index(&self, power: i64, i: usize) -> Option<usize> {
        if !self.novikov {
            return (power == 0).then_some(i);
        }
        self.window.contains(power).then(|| ((power - self.window.min) as usize) * self.base_len + i)
    }

    /// Rewrites a class of the Novikov complex in the monomial basis.
    pub fn expand_class(&self, class: &ChainClass) -> Result<ChainClass, ComplexError> {
        if !self.novikov {
            return Ok(class.clone());
        }
        let mut support = Chain::new();
        for (&i, c) in &class.support {
            for (k, s) in c.terms() {
                let j = self
                    .index(k, i)
                    .ok_or_else(|| ComplexError::ClassMismatch(format!("power {k} outside window {}", self.window)))?;
                support.insert(j, Coefficient::Scalar(s));
            }
        }
        Ok(ChainClass { degree: class.degree, support })
    }

    /// Smallest window containing every power used by `class`.
    pub fn class_window(class: &ChainClass) -> Option<Window> {
        let lo = class.support.values().filter_map(Coefficient::min_power).min()?;
        let hi = class.support.values().filter_map(Coefficient::max_power).max()?;
        Some(Window { min: lo, max: hi })
    }
}

/// A homogeneous chain, meant to be a cycle representing a homology class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainClass {
    pub degree: i64,
    pub support: Chain,
}

impl ChainClass {
    pub fn zero(degree: i64) -> Self {
        ChainClass { degree, support: Chain::new() }
    }

    pub fn is_zero_chain(&self) -> bool {
        self.support.is_empty()
    }

    /// The class of a single generator with coefficient one.
    pub fn generator(complex: &FilteredComplex, name: &str) -> Result<Self, ComplexError> {
        let i = complex.index_of(name)?;
        let mut support = Chain::new();
        support.insert(i, complex.ring().one());
        Ok(ChainClass { degree: complex.generator(i).degree, support })
    }

    /// Builds a class from named terms and checks that it is a cycle.
    pub fn from_terms(
        complex: &FilteredComplex,
        degree: i64,
        terms: &[(&str, Coefficient)],
    ) -> Result<Self, ComplexError> {
        let mut support = Chain::new();
        for (name, c) in terms {
            if !complex.ring().contains(c) {
                return Err(ComplexError::ClassMismatch(format!("coefficient {c:?} is not in {}", complex.ring())));
            }
            add_term(complex.ring(), &mut support, complex.index_of(name)?, c);
        }
        let class = ChainClass { degree, support };
        complex.check_class(&class)?;
        Ok(class)
    }

    pub fn scaled(&self, ring: &RingDescriptor, r: &Coefficient) -> Result<Self, ComplexError> {
        let mut support = Chain::new();
        for (&i, c) in &self.support {
            add_term(ring, &mut support, i, &ring.mul(c, r)?);
        }
        let shift = match ring.period() {
            Some(p) => r.min_power().map_or(0, |k| -k * p.degree),
            None => 0,
        };
        Ok(ChainClass { degree: self.degree + shift, support })
    }

    /// `t^power` times this class.
    pub fn novikov_shift(&self, ring: &RingDescriptor, power: i64) -> Result<Self, ComplexError> {
        let period = ring.period().ok_or_else(|| CoeffError::NotNovikov(ring.to_string()))?;
        let support = self.support.iter().map(|(&i, c)| (i, ring.shift_power(c, power))).collect();
        Ok(ChainClass { degree: self.degree - power * period.degree, support })
    }

    pub fn add(&self, ring: &RingDescriptor, other: &ChainClass) -> Self {
        let mut support = self.support.clone();
        for (&i, c) in &other.support {
            add_term(ring, &mut support, i, c);
        }
        ChainClass { degree: self.degree, support }
    }

    /// `self.other` in `left.tensor(right)`.
    pub fn tensor(&self, other: &ChainClass, ring: &RingDescriptor, right_len: usize) -> ChainClass {
        let mut support = Chain::new();
        for (&i, a) in &self.support {
            for (&j, b) in &other.support {
                add_term(ring, &mut support, i * right_len + j, &ring.mul_unchecked(a, b));
            }
        }
        ChainClass { degree: self.degree + other.degree, support }
    }

    /// Pairing of a cochain of the dual complex with a chain of the primal.
    pub fn pairing(&self, ring: &RingDescriptor, chain: &ChainClass) -> Coefficient {
        let mut acc = ring.zero();
        for (i, a) in &self.support {
            if let Some(b) = chain.support.get(i) {
                acc = ring.add_unchecked(&acc, &ring.mul_unchecked(a, b));
            }
        }
        acc
    }
}

/// Sparse linear map between free modules: `(source, target) -> coeff`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    entries: BTreeMap<(usize, usize), Coefficient>,
}

impl SparseMatrix {
    pub fn from_entries(ring: &RingDescriptor, entries: impl IntoIterator<Item = (usize, usize, Coefficient)>) -> Self {
        let mut m = SparseMatrix::default();
        for (s, t, c) in entries {
            m.add_entry(ring, s, t, &c);
        }
        m
    }

    pub fn identity(ring: &RingDescriptor, n: usize) -> Self {
        Self::from_entries(ring, (0..n).map(|i| (i, i, ring.one())))
    }

    fn add_entry(&mut self, ring: &RingDescriptor, s: usize, t: usize, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry((s, t)).or_insert_with(|| ring.zero());
        *slot = ring.add_unchecked(slot, c);
        if slot.is_zero() {
            self.entries.remove(&(s, t));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Coefficient)> {
        self.entries.iter().map(|(&(s, t), c)| (s, t, c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn apply(&self, ring: &RingDescriptor, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        for (&u, c) in chain {
            for (&(_, t), e) in self.entries.range((u, 0)..(u + 1, 0)) {
                add_term(ring, &mut out, t, &ring.mul_unchecked(c, e));
            }
        }
        out
    }

    /// `next ∘ self`.
    pub fn then(&self, ring: &RingDescriptor, next: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::default();
        for (&(s, m), a) in &self.entries {
            for (&(_, t), b) in next.entries.range((m, 0)..(m + 1, 0)) {
                out.add_entry(ring, s, t, &ring.mul_unchecked(a, b));
            }
        }
        out
    }

    pub fn plus(&self, ring: &RingDescriptor, other: &SparseMatrix) -> SparseMatrix {
        let mut out = self.clone();
        for (&(s, t), c) in &other.entries {
            out.add_entry(ring, s, t, c);
        }
        out
    }

    pub fn minus(&self, ring: &RingDescriptor, other: &SparseMatrix) -> SparseMatrix {
        let mut out = self.clone();
        for (&(s, t), c) in &other.entries {
            out.add_entry(ring, s, t, &ring.neg_unchecked(c));
        }
        out
    }

    /// Checks every entry maps degree `d` to degree `d + offset`.
    pub fn check_degrees(
        &self,
        source: &FilteredComplex,
        target: &FilteredComplex,
        offset: i64,
    ) -> Result<(), ComplexError> {
        for (&(s, t), c) in &self.entries {
            if s >= source.len() || t >= target.len() {
                return Err(ComplexError::IndexOutOfRange(s.max(t)));
            }
            if !source.ring().contains(c) {
                return Err(
                    CoeffError::RingMismatch(format!("map coefficient {c:?} is not in {}", source.ring())).into()
                );
            }
            for (k, _) in c.terms() {
                let d = target.monomial_degree(t, k);
                if d != source.generator(s).degree + offset {
                    return Err(ComplexError::NotAChainMap(format!(
                        "entry {} -> {} maps degree {} to degree {d}",
                        source.generator(s).name,
                        target.generator(t).name,
                        source.generator(s).degree
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A chain map with a certified bound on how much it raises action:
/// every entry `u -> w` satisfies `A(w) <= A(u) + shift`.
#[derive(Clone, Debug)]
pub struct FilteredMap {
    source: Arc<FilteredComplex>,
    target: Arc<FilteredComplex>,
    matrix: SparseMatrix,
    shift: Rational,
}

impl FilteredMap {
    pub fn new(
        source: Arc<FilteredComplex>,
        target: Arc<FilteredComplex>,
        matrix: SparseMatrix,
        shift: Rational,
    ) -> Result<Self, ComplexError> {
        if source.ring() != target.ring() {
            return Err(CoeffError::RingMismatch(format!("map from {} to {}", source.ring(), target.ring())).into());
        }
        let ring = source.ring();
        matrix.check_degrees(&source, &target, 0)?;
        let lhs = source.boundary_matrix().then(ring, &matrix);
        let rhs = matrix.then(ring, &target.boundary_matrix());
        if lhs != rhs {
            let diff = lhs.minus(ring, &rhs);
            let (s, t, _) = diff.entries().next().expect("nonzero difference");
            return Err(ComplexError::NotAChainMap(format!(
                "f(d {}) and d f({}) differ on {}",
                source.generator(s).name,
                source.generator(s).name,
                target.generator(t).name
            )));
        }
        let map = FilteredMap { source, target, matrix, shift };
        for (s, t, c) in map.matrix.entries() {
            let raise = map.target.weighted_action(t, c) - &map.source.generator(s).action;
            if raise > map.shift {
                return Err(ComplexError::ShiftViolation(Box::new(Excess {
                    name: format!("{} -> {}", map.source.generator(s).name, map.target.generator(t).name),
                    delta: raise,
                    bound: map.shift.clone(),
                })));
            }
        }
        Ok(map)
    }

    /// Identity on generator names between two complexes with the same
    /// names, degrees and boundary, certified with the smallest valid shift.
    pub fn identity_by_name(source: Arc<FilteredComplex>, target: Arc<FilteredComplex>) -> Result<Self, ComplexError> {
        let ring = source.ring().clone();
        let mut entries = Vec::with_capacity(source.len());
        for (i, g) in source.generators().iter().enumerate() {
            entries.push((i, target.index_of(&g.name)?, ring.one()));
        }
        let matrix = SparseMatrix::from_entries(&ring, entries);
        let shift = minimal_shift(&source, &target, &matrix).unwrap_or_else(Rational::zero);
        FilteredMap::new(source, target, matrix, shift)
    }

    pub fn source(&self) -> &Arc<FilteredComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FilteredComplex> {
        &self.target
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn shift(&self) -> &Rational {
        &self.shift
    }

    /// Same map, certified with a (looser or tighter) shift.
    pub fn with_shift(&self, shift: Rational) -> Result<Self, ComplexError> {
        FilteredMap::new(self.source.clone(), self.target.clone(), self.matrix.clone(), shift)
    }

    pub fn apply(&self, class: &ChainClass) -> ChainClass {
        ChainClass { degree: class.degree, support: self.matrix.apply(self.source.ring(), &class.support) }
    }

    /// `next ∘ self`, with the shifts added.
    pub fn then(&self, next: &FilteredMap) -> Result<FilteredMap, ComplexError> {
        let matrix = self.matrix.then(self.source.ring(), &next.matrix);
        FilteredMap::new(self.source.clone(), next.target.clone(), matrix, &self.shift + &next.shift)
    }
}

/// Largest action raise over the entries of `matrix`, or `None` for the zero map.
pub fn minimal_shift(source: &FilteredComplex, target: &FilteredComplex, matrix: &SparseMatrix) -> Option<Rational> {
    matrix.entries().map(|(s, t, c)| target.weighted_action(t, c) - &source.generator(s).action).max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rational};
    use crate::models;

    fn z() -> RingDescriptor {
        RingDescriptor::integers()
    }

    #[test]
    fn circle_is_valid() {
        let c = models::morse_circle(&int(0), &int(1), &z()).unwrap();
        assert!(c.validate().is_empty());
    }

    #[test]
    fn equal_actions_violate_filtration() {
        let gens = vec![Generator::new("min", 0, int(0)), Generator::new("max", 1, int(0))];
        let entries = vec![BoundaryEntry { source: 1, target: 0, coeff: z().one() }];
        let c = FilteredComplex::from_parts(z(), gens, entries, vec![], None).unwrap();
        let report = c.validate();
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(report.violations[0], Violation::ActionNotDecreasing { .. }));
    }

    #[test]
    fn cyclic_boundary_fails_square() {
        let gens = vec![Generator::new("a", 0, int(2)), Generator::new("b", 0, int(1))];
        let entries = vec![
            BoundaryEntry { source: 0, target: 1, coeff: z().one() },
            BoundaryEntry { source: 1, target: 0, coeff: z().one() },
        ];
        let c = FilteredComplex::from_parts(z(), gens, entries, vec![], None).unwrap();
        let report = c.validate();
        assert!(report.violations.iter().any(|v| matches!(v, Violation::BoundarySquare { .. })));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::ActionNotDecreasing { .. })));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::DegreeMismatch { .. })));
    }

    #[test]
    fn duplicate_names_reported() {
        let gens = vec![Generator::new("a", 0, int(0)), Generator::new("a", 0, int(1))];
        let c = FilteredComplex::from_parts(z(), gens, vec![], vec![], None).unwrap();
        assert_eq!(c.validate().violations, vec![Violation::DuplicateName { name: "a".into() }]);
    }

    #[test]
    fn sublevels_of_circle() {
        let c = models::morse_circle(&int(0), &int(1), &z()).unwrap();
        let low = c.sublevel(&Extended::Finite(rational(1, 2))).unwrap();
        assert_eq!(low.generators().iter().map(|g| g.name.as_str()).collect::<Vec<_>>(), vec!["min"]);
        assert!(c.sublevel(&Extended::Finite(int(-1))).unwrap().is_empty());
        assert_eq!(c.sublevel(&Extended::PosInf).unwrap(), c);
        // strict inequality
        assert_eq!(c.sublevel(&Extended::Finite(int(1))).unwrap().len(), 1);
    }

    #[test]
    fn sublevel_is_subcomplex_of_interval() {
        let c = models::interval(&z()).unwrap();
        for a in [-1, 0, 1, 2] {
            let s = c.sublevel(&Extended::Finite(int(a))).unwrap();
            assert!(s.validate().is_empty());
        }
    }

    #[test]
    fn dual_of_circle_has_zero_differential() {
        let c = models::morse_circle(&int(0), &int(1), &z()).unwrap();
        let d = c.dualize();
        assert_eq!(d.len(), 2);
        assert!(d.entries().is_empty());
        assert_eq!(d.generator(1).name, "max^v");
        assert_eq!(d.generator(1).action, int(-1));
        assert_eq!(d.generator(1).degree, -1);
    }

    #[test]
    fn dual_of_rp2_sign() {
        // d c2 = 2 c1; the coboundary of the degree-1 cochain c1^v carries
        // the sign (-1)^(1-1) = +1.
        let c = models::morse_rp2(&int(0), &int(1), &int(2), &z()).unwrap();
        let d = c.dualize();
        let c1 = d.index_of("c1^v").unwrap();
        let c2 = d.index_of("c2^v").unwrap();
        assert_eq!(d.boundary_of(c1), &[BoundaryEntry { source: c1, target: c2, coeff: z().from_i64(2) }]);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn double_dual_negates_boundary() {
        let c = models::interval(&z()).unwrap();
        let dd = c.dualize().dualize();
        assert_eq!(dd.generators(), c.generators());
        assert_eq!(dd.tags(), c.tags());
        let negated: Vec<_> = c
            .entries()
            .iter()
            .map(|e| BoundaryEntry { source: e.source, target: e.target, coeff: z().neg(&e.coeff).unwrap() })
            .collect();
        assert_eq!(dd.entries(), negated.as_slice());
    }

    #[test]
    fn torus_from_tensor() {
        let f2 = RingDescriptor::prime_field(2).unwrap();
        let circle = models::morse_circle(&int(0), &int(1), &f2).unwrap();
        let t = circle.tensor(&circle).unwrap();
        let mut actions: Vec<_> = t.generators().iter().map(|g| g.action.clone()).collect();
        actions.sort();
        assert_eq!(actions, vec![int(0), int(1), int(1), int(2)]);
        assert!(t.entries().is_empty());
    }

    #[test]
    fn tensor_with_point_is_identity_on_data() {
        let c = models::morse_circle(&int(0), &int(1), &z()).unwrap();
        let t = c.tensor(&models::point(&int(0), &z()).unwrap()).unwrap();
        for (a, b) in t.generators().iter().zip(c.generators()) {
            assert_eq!((a.degree, &a.action), (b.degree, &b.action));
        }
    }

    #[test]
    fn interval_squared_is_valid() {
        let i = models::interval(&z()).unwrap();
        let t = i.tensor(&i).unwrap();
        assert!(t.validate().is_empty());
        assert_eq!(t.len(), 9);
    }

    #[test]
    fn tensor_ring_mismatch() {
        let a = models::morse_circle(&int(0), &int(1), &z()).unwrap();
        let b = models::morse_circle(&int(0), &int(1), &RingDescriptor::rationals()).unwrap();
        assert!(a.tensor(&b).is_err());
    }

    #[test]
    fn shifting_actions() {
        let c = models::morse_circle(&int(0), &int(1), &z()).unwrap();
        let s = c.shift_actions(&int(3));
        assert_eq!(s.action_values(), vec![int(3), int(4)]);
        assert_eq!(c.shift_actions(&int(0)), c);
        assert_eq!(c.shift_actions(&int(-1)).shift_actions(&int(1)), c);
    }

    #[test]
    fn perturbations() {
        let c = models::interval(&z()).unwrap();
        let delta: BTreeMap<String, Rational> =
            [("a".to_string(), rational(-1, 4)), ("b".to_string(), rational(1, 4))].into();
        let p = c.perturb_actions(&delta, &rational(1, 4)).unwrap();
        assert!(p.validate().is_empty());
        assert_eq!(c.perturb_actions(&BTreeMap::new(), &int(0)).unwrap(), c);
        let big: BTreeMap<String, Rational> = [("a".to_string(), int(-1)), ("b".to_string(), int(1))].into();
        assert!(matches!(c.perturb_actions(&big, &int(1)), Err(ComplexError::FiltrationViolation(_))));
        assert!(matches!(c.perturb_actions(&big, &rational(1, 2)), Err(ComplexError::PerturbationTooLarge(_))));
    }

    #[test]
    fn circle_lift_monomials() {
        let c = models::morse_circle(&int(0), &int(1), &z()).unwrap();
        let lift = c.novikov_lift(2, &int(1), Window::new(-1, 1).unwrap()).unwrap();
        let e = lift.expand(lift.active_window()).unwrap();
        assert_eq!(e.complex.len(), 6);
        for k in -1..=1 {
            let min = e.index(k, 0).unwrap();
            let max = e.index(k, 1).unwrap();
            assert_eq!(e.complex.generator(min).action, int(-k));
            assert_eq!(e.complex.generator(max).action, int(1 - k));
            assert_eq!(e.complex.generator(max).degree, 1 - 2 * k);
        }
        assert_eq!(lift.action_values(), vec![int(-1), int(0), int(1), int(2)]);
    }

    #[test]
    fn zero_window_lift_is_base() {
        let c = models::interval(&z()).unwrap();
        let lift = c.novikov_lift(2, &int(1), Window::zero()).unwrap();
        let e = lift.expand(Window::zero()).unwrap();
        assert_eq!(e.complex.generators(), c.generators());
        assert_eq!(e.complex.entries(), c.entries());
    }

    #[test]
    fn lift_errors() {
        let c = models::interval(&z()).unwrap();
        assert!(matches!(c.novikov_lift(2, &int(1), Window { min: 1, max: 0 }), Err(ComplexError::EmptyWindow(_))));
        assert!(c.novikov_lift(1, &int(1), Window::zero()).is_err());
        assert!(c.novikov_lift(2, &int(0), Window::zero()).is_err());
    }

    #[test]
    fn class_checks() {
        let c = models::interval(&z()).unwrap();
        assert!(matches!(
            ChainClass::generator(&c, "a").and_then(|a| c.check_class(&a)),
            Err(ComplexError::NotACycle(2))
        ));
        let b = ChainClass::generator(&c, "b").unwrap();
        assert!(c.check_class(&b).is_ok());
        let bad = ChainClass { degree: 1, support: b.support.clone() };
        assert!(matches!(c.check_class(&bad), Err(ComplexError::ClassMismatch(_))));
    }

    #[test]
    fn filtered_map_checks() {
        let c = Arc::new(models::interval(&z()).unwrap());
        let id = FilteredMap::identity_by_name(c.clone(), c.clone()).unwrap();
        assert_eq!(id.shift(), &int(0));
        let shifted = Arc::new(c.shift_actions(&int(2)));
        let up = FilteredMap::identity_by_name(c.clone(), shifted.clone()).unwrap();
        assert_eq!(up.shift(), &int(2));
        assert!(matches!(up.with_shift(int(1)), Err(ComplexError::ShiftViolation(_))));
        // a -> b alone is not a chain map
        let ring = z();
        let bad = SparseMatrix::from_entries(&ring, [(0, 0, ring.one())]);
        assert!(FilteredMap::new(c.clone(), c.clone(), bad, int(0)).is_err());
    }
}
