//! Line-oriented text formats for complexes, classes, maps, homotopies and
//! product tables.
//!
//! Every format is one declaration per line with `#` starting a comment.
//! Complex files:
//!
//! ```text
//! ring Z
//! tag floer-model
//! window -1:1
//! gen min deg=0 action=0
//! gen max deg=1 action=1/2
//! bnd max min 0
//! ```
//!
//! `ring` must precede every `bnd`; `window` is only legal for Novikov rings.
//! Class files hold blocks `cls <name> deg=<int>` followed by
//! `term <gen> <coeff>` lines. Map files start with `map`, homotopy files
//! with `homotopy`; both then carry `ent <src> <dst> <coeff>` lines, and a
//! map may certify `shift <rational>`. Product files carry
//! `prod <g1> <g2> <gout> <coeff>`, `slack <rational>`,
//! `degree_shift <int>` and `unit <gen>`.
//!
//! The `emit_*` functions write canonical text: `parse(emit(x)) == x`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::coeff::{parse_rational, Coefficient, Rational, RingDescriptor};
use crate::complex::{
    minimal_shift, BoundaryEntry, Chain, ChainClass, ComplexError, FilteredComplex, FilteredMap, Generator,
    SparseMatrix, Window,
};
use crate::models::ProductData;
use crate::props::Labeled;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] ComplexError),
}

/// A whitespace-separated token with its 1-based column.
#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
    offset: usize,
}

struct Line<'a> {
    number: usize,
    raw: &'a str,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> FormatError {
        FormatError::Parse { line: self.number, column, message: message.into() }
    }

    fn at(&self, token: Token<'_>, message: impl Into<String>) -> FormatError {
        self.error(token.column, message)
    }

    fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    /// Exactly `n` arguments after the keyword.
    fn args(&self, n: usize, usage: &str) -> Result<&[Token<'a>], FormatError> {
        let args = &self.tokens[1..];
        if args.len() != n {
            let column = args.get(n).map_or(self.raw.trim_end().len() + 1, |t| t.column);
            return Err(self.error(column, format!("expected `{usage}`")));
        }
        Ok(args)
    }

    /// Everything after the keyword, comment stripped.
    fn rest(&self) -> Result<&'a str, FormatError> {
        let kw = self.tokens[0];
        let text = strip_comment(self.raw)[kw.offset + kw.text.len()..].trim();
        if text.is_empty() {
            return Err(self.error(kw.column + kw.text.chars().count(), format!("`{}` needs an argument", kw.text)));
        }
        Ok(text)
    }
}

fn strip_comment(raw: &str) -> &str {
    raw.split_once('#').map_or(raw, |(code, _)| code)
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let code = strip_comment(raw);
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in code.char_indices().chain([(code.len(), ' ')]) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token { text: &code[s..pos], column: code[..s].chars().count() + 1, offset: s });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, raw, tokens });
        }
    }
    out
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path)
        .map_err(|e| FormatError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn parse_int(line: &Line<'_>, token: Token<'_>, text: &str) -> Result<i64, FormatError> {
    text.parse().map_err(|_| line.at(token, format!("malformed integer `{text}`")))
}

fn parse_q(line: &Line<'_>, token: Token<'_>, text: &str) -> Result<Rational, FormatError> {
    parse_rational(text).ok_or_else(|| line.at(token, format!("malformed rational `{text}`")))
}

fn parse_coeff(line: &Line<'_>, token: Token<'_>, ring: &RingDescriptor) -> Result<Coefficient, FormatError> {
    ring.parse_coefficient(token.text).map_err(|e| line.at(token, e.to_string()))
}

/// `key=value`, with the key checked.
fn keyed<'a>(line: &Line<'_>, token: Token<'a>, key: &str) -> Result<&'a str, FormatError> {
    token
        .text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| line.at(token, format!("expected `{key}=...`, found `{}`", token.text)))
}

fn lookup(line: &Line<'_>, token: Token<'_>, c: &FilteredComplex) -> Result<usize, FormatError> {
    c.index_of(token.text).map_err(|_| line.at(token, format!("unknown generator `{}`", token.text)))
}

pub fn parse_window(text: &str) -> Option<Window> {
    let (a, b) = text.split_once(':')?;
    Window::new(a.trim().parse().ok()?, b.trim().parse().ok()?).ok()
}

/// Parses and validates a complex.
pub fn parse_complex(text: &str) -> Result<FilteredComplex, FormatError> {
    let mut ring: Option<RingDescriptor> = None;
    let mut generators: Vec<Generator> = Vec::new();
    let mut names: HashSet<&str> = HashSet::new();
    let mut pending: Vec<(usize, [Token<'_>; 3])> = Vec::new();
    let mut tags = Vec::new();
    let mut window = None;
    let all = lines(text);
    for (li, line) in all.iter().enumerate() {
        match line.keyword() {
            "ring" => {
                if ring.is_some() {
                    return Err(line.error(1, "duplicate ring declaration"));
                }
                let rest = line.rest()?;
                let column = line.tokens[1].column;
                ring = Some(rest.parse().map_err(|e: crate::coeff::CoeffError| line.error(column, e.to_string()))?);
            }
            "gen" => {
                let a = line.args(3, "gen <name> deg=<int> action=<rational>")?;
                if !names.insert(a[0].text) {
                    return Err(line.at(a[0], format!("duplicate generator `{}`", a[0].text)));
                }
                let degree = parse_int(line, a[1], keyed(line, a[1], "deg")?)?;
                let action = parse_q(line, a[2], keyed(line, a[2], "action")?)?;
                generators.push(Generator::new(a[0].text, degree, action));
            }
            "bnd" => {
                let a = line.args(3, "bnd <src> <dst> <coeff>")?;
                if ring.is_none() {
                    return Err(line.error(1, "`bnd` before the ring declaration"));
                }
                pending.push((li, [a[0], a[1], a[2]]));
            }
            "tag" => tags.push(line.rest()?.to_string()),
            "window" => {
                let a = line.args(1, "window <min>:<max>")?;
                if window.is_some() {
                    return Err(line.error(1, "duplicate window declaration"));
                }
                window = Some(
                    parse_window(a[0].text)
                        .ok_or_else(|| line.at(a[0], "expected a window `<min>:<max>` with min <= max"))?,
                );
            }
            other => return Err(line.error(1, format!("unknown declaration `{other}`"))),
        }
    }
    let ring = ring.ok_or(FormatError::Parse { line: 1, column: 1, message: "missing ring declaration".into() })?;
    let index = |name: &str| generators.iter().position(|g| g.name == name);
    let mut entries = Vec::with_capacity(pending.len());
    for (li, [s, t, c]) in pending {
        let line = &all[li];
        let source = index(s.text).ok_or_else(|| line.at(s, format!("unknown generator `{}`", s.text)))?;
        let target = index(t.text).ok_or_else(|| line.at(t, format!("unknown generator `{}`", t.text)))?;
        entries.push(BoundaryEntry { source, target, coeff: parse_coeff(line, c, &ring)? });
    }
    Ok(FilteredComplex::new(ring, generators, entries, tags, window)?)
}

pub fn load_complex(path: &Path) -> Result<FilteredComplex, FormatError> {
    parse_complex(&read(path)?)
}

pub fn emit_complex(c: &FilteredComplex) -> String {
    let mut out = format!("ring {}\n", c.ring());
    for tag in c.tags() {
        let _ = writeln!(out, "tag {tag}");
    }
    if let Some(w) = c.window() {
        let _ = writeln!(out, "window {w}");
    }
    for g in c.generators() {
        let _ = writeln!(out, "gen {} deg={} action={}", g.name, g.degree, g.action);
    }
    for e in c.entries() {
        let _ = writeln!(
            out,
            "bnd {} {} {}",
            c.generator(e.source).name,
            c.generator(e.target).name,
            c.ring().format(&e.coeff)
        );
    }
    out
}

/// Parses class blocks against `c`; each class must be a cycle.
pub fn parse_classes(c: &FilteredComplex, text: &str) -> Result<Vec<Labeled>, FormatError> {
    let mut out: Vec<(String, ChainClass, usize)> = Vec::new();
    for line in lines(text) {
        match line.keyword() {
            "cls" => {
                let a = line.args(2, "cls <name> deg=<int>")?;
                let degree = parse_int(&line, a[1], keyed(&line, a[1], "deg")?)?;
                out.push((a[0].text.to_string(), ChainClass::zero(degree), line.number));
            }
            "term" => {
                let a = line.args(2, "term <gen> <coeff>")?;
                let (_, class, _) = out.last_mut().ok_or_else(|| line.error(1, "`term` outside a `cls` block"))?;
                let i = lookup(&line, a[0], c)?;
                if c.generator(i).degree != class.degree && !c.ring().is_novikov() {
                    return Err(
                        line.at(a[0], format!("generator `{}` has degree {}", a[0].text, c.generator(i).degree))
                    );
                }
                let coeff = parse_coeff(&line, a[1], c.ring())?;
                let mut single = Chain::new();
                single.insert(i, coeff);
                *class = class.add(c.ring(), &ChainClass { degree: class.degree, support: single });
            }
            other => return Err(line.error(1, format!("unknown declaration `{other}`"))),
        }
    }
    out.into_iter()
        .map(|(name, class, number)| match c.check_class(&class) {
            Ok(()) => Ok((name, class)),
            Err(e) => Err(FormatError::Parse { line: number, column: 1, message: format!("class `{name}`: {e}") }),
        })
        .collect()
}

pub fn load_classes(c: &FilteredComplex, path: &Path) -> Result<Vec<Labeled>, FormatError> {
    parse_classes(c, &read(path)?)
}

pub fn emit_classes(c: &FilteredComplex, classes: &[Labeled]) -> String {
    let mut out = String::new();
    for (name, class) in classes {
        let _ = writeln!(out, "cls {name} deg={}", class.degree);
        for (&i, coeff) in &class.support {
            let _ = writeln!(out, "term {} {}", c.generator(i).name, c.ring().format(coeff));
        }
    }
    out
}

fn parse_entries<'a>(
    all: &[Line<'a>],
    header: &str,
    source: &FilteredComplex,
    target: &FilteredComplex,
    mut extra: impl FnMut(&Line<'a>) -> Result<bool, FormatError>,
) -> Result<SparseMatrix, FormatError> {
    let ring = source.ring();
    let first =
        all.first().ok_or(FormatError::Parse { line: 1, column: 1, message: format!("missing `{header}` header") })?;
    if first.keyword() != header || first.tokens.len() != 1 {
        return Err(first.error(1, format!("expected `{header}` header")));
    }
    let mut entries = Vec::new();
    for line in &all[1..] {
        if line.keyword() == "ent" {
            let a = line.args(3, "ent <src> <dst> <coeff>")?;
            entries.push((lookup(line, a[0], source)?, lookup(line, a[1], target)?, parse_coeff(line, a[2], ring)?));
        } else if !extra(line)? {
            return Err(line.error(1, format!("unknown declaration `{}`", line.keyword())));
        }
    }
    Ok(SparseMatrix::from_entries(ring, entries))
}

/// Parses a chain map; without a `shift` line the smallest valid shift is
/// certified.
pub fn parse_map(
    source: Arc<FilteredComplex>,
    target: Arc<FilteredComplex>,
    text: &str,
) -> Result<FilteredMap, FormatError> {
    let all = lines(text);
    let mut shift = None;
    let matrix = parse_entries(&all, "map", &source, &target, |line| {
        if line.keyword() != "shift" {
            return Ok(false);
        }
        if shift.is_some() {
            return Err(line.error(1, "duplicate shift"));
        }
        let a = line.args(1, "shift <rational>")?;
        shift = Some(parse_q(line, a[0], a[0].text)?);
        Ok(true)
    })?;
    let shift = match shift {
        Some(s) => s,
        None => minimal_shift(&source, &target, &matrix).unwrap_or_else(|| Rational::from_integer(0.into())),
    };
    Ok(FilteredMap::new(source, target, matrix, shift)?)
}

pub fn load_map(
    source: Arc<FilteredComplex>,
    target: Arc<FilteredComplex>,
    path: &Path,
) -> Result<FilteredMap, FormatError> {
    parse_map(source, target, &read(path)?)
}

pub fn emit_map(f: &FilteredMap) -> String {
    let mut out = format!("map\nshift {}\n", f.shift());
    emit_entries(&mut out, f.matrix(), f.source(), f.target());
    out
}

fn emit_entries(out: &mut String, m: &SparseMatrix, source: &FilteredComplex, target: &FilteredComplex) {
    for (s, t, c) in m.entries() {
        let _ =
            writeln!(out, "ent {} {} {}", source.generator(s).name, target.generator(t).name, source.ring().format(c));
    }
}

/// Parses a degree-raising endomorphism of `c`.
pub fn parse_homotopy(c: &FilteredComplex, text: &str) -> Result<SparseMatrix, FormatError> {
    let m = parse_entries(&lines(text), "homotopy", c, c, |_| Ok(false))?;
    m.check_degrees(c, c, 1)?;
    Ok(m)
}

pub fn load_homotopy(c: &FilteredComplex, path: &Path) -> Result<SparseMatrix, FormatError> {
    parse_homotopy(c, &read(path)?)
}

pub fn emit_homotopy(c: &FilteredComplex, h: &SparseMatrix) -> String {
    let mut out = "homotopy\n".to_string();
    emit_entries(&mut out, h, c, c);
    out
}

/// Parses a product table; its invariants are checked by the property
/// harness, not here.
pub fn parse_product(
    left: Arc<FilteredComplex>,
    right: Arc<FilteredComplex>,
    target: Arc<FilteredComplex>,
    text: &str,
) -> Result<ProductData, FormatError> {
    let ring = left.ring().clone();
    if right.ring() != &ring || target.ring() != &ring {
        return Err(FormatError::Parse { line: 1, column: 1, message: "product factors use different rings".into() });
    }
    let mut table = Vec::new();
    let mut slack = None;
    let mut degree_shift = None;
    let mut unit = None;
    for line in lines(text) {
        match line.keyword() {
            "prod" => {
                let a = line.args(4, "prod <g1> <g2> <gout> <coeff>")?;
                table.push((
                    lookup(&line, a[0], &left)?,
                    lookup(&line, a[1], &right)?,
                    lookup(&line, a[2], &target)?,
                    parse_coeff(&line, a[3], &ring)?,
                ));
            }
            "slack" => {
                let a = line.args(1, "slack <rational>")?;
                if slack.replace(parse_q(&line, a[0], a[0].text)?).is_some() {
                    return Err(line.error(1, "duplicate slack"));
                }
            }
            "degree_shift" => {
                let a = line.args(1, "degree_shift <int>")?;
                if degree_shift.replace(parse_int(&line, a[0], a[0].text)?).is_some() {
                    return Err(line.error(1, "duplicate degree_shift"));
                }
            }
            "unit" => {
                let a = line.args(1, "unit <gen>")?;
                for c in [&left, &right, &target] {
                    lookup(&line, a[0], c)?;
                }
                if unit.replace(a[0].text.to_string()).is_some() {
                    return Err(line.error(1, "duplicate unit"));
                }
            }
            other => return Err(line.error(1, format!("unknown declaration `{other}`"))),
        }
    }
    Ok(ProductData {
        left,
        right,
        target,
        table,
        slack: slack.unwrap_or_else(|| Rational::from_integer(0.into())),
        degree_shift: degree_shift.unwrap_or(0),
        unit,
    })
}

pub fn load_product(
    left: Arc<FilteredComplex>,
    right: Arc<FilteredComplex>,
    target: Arc<FilteredComplex>,
    path: &Path,
) -> Result<ProductData, FormatError> {
    parse_product(left, right, target, &read(path)?)
}

pub fn emit_product(p: &ProductData) -> String {
    let mut out = format!("slack {}\ndegree_shift {}\n", p.slack, p.degree_shift);
    if let Some(u) = &p.unit {
        let _ = writeln!(out, "unit {u}");
    }
    for (a, b, o, c) in &p.table {
        let _ = writeln!(
            out,
            "prod {} {} {} {}",
            p.left.generator(*a).name,
            p.right.generator(*b).name,
            p.target.generator(*o).name,
            p.left.ring().format(c)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rational};
    use crate::models;

    const CIRCLE: &str = "# circle\nring Z\ngen min deg=0 action=0\ngen max deg=1 action=1/2  # top\nbnd max min 0\n";

    fn parse_err(text: &str) -> (usize, usize, String) {
        match parse_complex(text) {
            Err(FormatError::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_circle() {
        let c = parse_complex(CIRCLE).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.generator(1).action, rational(1, 2));
        assert!(c.entries().is_empty());
        assert_eq!(emit_complex(&c), "ring Z\ngen min deg=0 action=0\ngen max deg=1 action=1/2\n");
    }

    #[test]
    fn corpus_round_trips() {
        for e in models::golden_corpus() {
            let text = emit_complex(&e.complex);
            let back = parse_complex(&text).unwrap();
            assert_eq!(back, e.complex, "{}", e.name);
            assert_eq!(emit_complex(&back), text);
        }
    }

    #[test]
    fn novikov_ring_line_with_spaces() {
        let text = "ring Novikov(F2, deg=2, area=3/2)\nwindow -1:2\ngen x deg=0 action=0\n";
        let c = parse_complex(text).unwrap();
        assert_eq!(c.window(), Some(Window::new(-1, 2).unwrap()));
        assert_eq!(emit_complex(&c), text);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_err("ring Z\ngen a deg=x action=0\n").0, 2);
        let (line, column, _) = parse_err("ring Z\ngen a deg=0 action=1/0\n");
        assert_eq!((line, column), (2, 13));
        let (line, column, msg) = parse_err("ring Z\ngen a deg=0 action=0\ngen a deg=1 action=1\n");
        assert_eq!((line, column), (3, 5));
        assert!(msg.contains("duplicate"));
        let (line, _, msg) = parse_err("ring Z\ngen a deg=0 action=0 colour=red\n");
        assert_eq!(line, 2);
        assert!(msg.contains("expected"));
        assert!(parse_err("gen a deg=0 action=0\nbnd a a 1\nring Z\n").2.contains("before the ring"));
        assert!(parse_err("ring Z\nfoo bar\n").2.contains("unknown declaration"));
    }

    #[test]
    fn novikov_coefficient_over_integers_is_a_parse_error() {
        let text = "ring Z\ngen a deg=1 action=1\ngen b deg=0 action=0\nbnd a b 1*t^1\n";
        let (line, column, _) = parse_err(text);
        assert_eq!((line, column), (4, 9));
    }

    #[test]
    fn validation_failure_is_forwarded() {
        let text = "ring Z\ngen min deg=0 action=0\ngen max deg=1 action=0\nbnd max min 1\n";
        assert!(matches!(parse_complex(text), Err(FormatError::Invalid(ComplexError::Invalid(_)))));
        let windowed = "ring Z\nwindow 0:1\ngen a deg=0 action=0\n";
        assert!(matches!(parse_complex(windowed), Err(FormatError::Invalid(ComplexError::UnsupportedRing(_)))));
    }

    #[test]
    fn classes_round_trip_and_must_be_cycles() {
        let c = models::interval(&RingDescriptor::integers()).unwrap();
        let text = "cls z deg=0\nterm b 1\nterm b' -1\nterm b 2\ncls e deg=1\n";
        let classes = parse_classes(&c, text).unwrap();
        assert_eq!(classes.len(), 2);
        let emitted = emit_classes(&c, &classes);
        assert_eq!(emitted, "cls z deg=0\nterm b 3\nterm b' -1\ncls e deg=1\n");
        assert_eq!(parse_classes(&c, &emitted).unwrap(), classes);
        assert!(matches!(parse_classes(&c, "cls a deg=1\nterm a 1\n"), Err(FormatError::Parse { line: 1, .. })));
        assert!(parse_classes(&c, "term a 1\n").is_err());
        assert!(parse_classes(&c, "cls x deg=0\nterm a 1\n").is_err());
    }

    #[test]
    fn maps_and_homotopies() {
        let z = RingDescriptor::integers();
        let c = Arc::new(models::morse_circle(&int(0), &int(1), &z).unwrap());
        let d = Arc::new(c.shift_actions(&int(2)));
        let f = parse_map(c.clone(), d.clone(), "map\nent min min 1\nent max max 1\n").unwrap();
        assert_eq!(f.shift(), &int(2));
        let text = emit_map(&f);
        assert_eq!(text, "map\nshift 2\nent min min 1\nent max max 1\n");
        let g = parse_map(c.clone(), d.clone(), &text).unwrap();
        assert_eq!(g.matrix(), f.matrix());
        assert!(matches!(
            parse_map(c.clone(), d.clone(), "map\nshift 1\nent min min 1\n"),
            Err(FormatError::Invalid(_))
        ));
        assert!(parse_map(c.clone(), d, "ent min min 1\n").is_err());
        let h = parse_homotopy(&c, "homotopy\nent min max 1\n").unwrap();
        assert_eq!(parse_homotopy(&c, &emit_homotopy(&c, &h)).unwrap(), h);
        assert!(parse_homotopy(&c, "homotopy\nent max min 1\n").is_err());
    }

    #[test]
    fn product_round_trip() {
        let f2 = RingDescriptor::prime_field(2).unwrap();
        let torus = Arc::new(models::morse_torus(&int(0), &int(1), &int(1), &int(2), &f2).unwrap());
        let p = models::torus_intersection_product(torus.clone()).unwrap();
        let text = emit_product(&p);
        let q = parse_product(torus.clone(), torus.clone(), torus.clone(), &text).unwrap();
        assert_eq!(q.table, p.table);
        assert_eq!((q.slack, q.degree_shift, q.unit), (p.slack, p.degree_shift, p.unit));
        assert!(parse_product(torus.clone(), torus.clone(), torus, "unit nope\n").is_err());
    }
}
