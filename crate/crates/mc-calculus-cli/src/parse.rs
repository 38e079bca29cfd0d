//! Parsers for the algebra file format and for command line expressions.
//!
//! Algebra files use chain degrees (a generator of chain degree k sits in
//! cohomological degree -k internally). The grammar, in EBNF:
//!
//! ```text
//! file       = { line } ;
//! line       = blank | comment | algebra | generator | diff | bracket | filt ;
//! comment    = "#" , { any } ;
//! algebra    = "algebra" , ident ;
//! generator  = "generator" , ident , integer ;          (* chain degree *)
//! diff       = "d" , ident , "=" , combo ;
//! bracket    = "[" , ident , "," , ident , "]" , "=" , combo ;
//! filt       = "filtration" , integer , ":" , ident , { ident } ;
//! combo      = "0" | [ sign ] , term , { sign , term } ;
//! term       = [ rational ] , ident ;
//! rational   = integer , [ "/" , integer ] ;
//! sign       = "+" | "-" ;
//! ```
//!
//! Generator names may not collide with the coordinate tokens `t<i>` and
//! `dt<i>` or with the keyword `d`.

use std::collections::BTreeMap;

use thiserror::Error;

use mc_calculus::dgla::{Dgla, DglaBuilder};
use mc_calculus::forms::PolyForm;
use mc_calculus::linear::{vzero, QVec};
use mc_calculus::scalar::{parse_scalar, Scalar};
use mc_calculus::simplicial::LieForm;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("{0}")]
    Expression(String),
}

fn is_reserved(ident: &str) -> bool {
    if ident == "d" {
        return true;
    }
    let rest = ident.strip_prefix("dt").or_else(|| ident.strip_prefix('t'));
    matches!(rest, Some(r) if !r.is_empty() && r.chars().all(|c| c.is_ascii_digit()))
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A parsed algebra file, before conversion to an algebra.
#[derive(Debug, Default)]
pub struct AlgebraFile {
    pub name: String,
    pub generators: Vec<(String, i64)>,
    pub differentials: Vec<(String, Vec<(Scalar, String)>)>,
    pub brackets: Vec<(String, String, Vec<(Scalar, String)>)>,
    pub filtration: BTreeMap<usize, Vec<String>>,
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile, ParseError> {
    let mut file = AlgebraFile::default();
    let mut seen_generators = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: &str| ParseError::Syntax {
            line: line_no,
            reason: reason.to_string(),
        };
        if let Some(rest) = line.strip_prefix("algebra ") {
            let name = rest.trim();
            if !valid_ident(name) {
                return Err(err("invalid algebra name"));
            }
            file.name = name.to_string();
        } else if let Some(rest) = line.strip_prefix("generator ") {
            let mut parts = rest.split_whitespace();
            let sym = parts.next().ok_or_else(|| err("missing generator name"))?;
            let deg: i64 = parts
                .next()
                .ok_or_else(|| err("missing chain degree"))?
                .parse()
                .map_err(|_| err("chain degree must be an integer"))?;
            if parts.next().is_some() {
                return Err(err("unexpected tokens after generator"));
            }
            if !valid_ident(sym) || is_reserved(sym) {
                return Err(err("invalid or reserved generator name"));
            }
            if seen_generators.insert(sym.to_string(), ()).is_some() {
                return Err(err(&format!("duplicate generator {sym}")));
            }
            file.generators.push((sym.to_string(), deg));
        } else if let Some(rest) = line.strip_prefix("d ") {
            let (sym, combo) = rest
                .split_once('=')
                .ok_or_else(|| err("expected d <gen> = <combination>"))?;
            let sym = sym.trim();
            if !valid_ident(sym) {
                return Err(err("invalid generator in differential"));
            }
            let value = parse_combo(combo.trim())
                .map_err(|e| err(&format!("bad combination: {e}")))?;
            file.differentials.push((sym.to_string(), value));
        } else if line.starts_with('[') {
            let close = line.find(']').ok_or_else(|| err("missing ]"))?;
            let inner = &line[1..close];
            let (ls, rs) = inner
                .split_once(',')
                .ok_or_else(|| err("expected [a, b] = <combination>"))?;
            let rest = line[close + 1..].trim();
            let combo = rest
                .strip_prefix('=')
                .ok_or_else(|| err("expected = after bracket"))?;
            let value = parse_combo(combo.trim())
                .map_err(|e| err(&format!("bad combination: {e}")))?;
            file.brackets
                .push((ls.trim().to_string(), rs.trim().to_string(), value));
        } else if let Some(rest) = line.strip_prefix("filtration ") {
            let (p, syms) = rest
                .split_once(':')
                .ok_or_else(|| err("expected filtration <p>: <gens>"))?;
            let p: usize = p
                .trim()
                .parse()
                .map_err(|_| err("filtration index must be a positive integer"))?;
            if p < 2 {
                return Err(err("filtration layers start at 2"));
            }
            let layer: Vec<String> =
                syms.split_whitespace().map(|s| s.to_string()).collect();
            file.filtration.insert(p, layer);
        } else {
            return Err(err("unrecognized directive"));
        }
    }
    Ok(file)
}

/// Build the (unvalidated) algebra; chain degrees become cohomological.
pub fn build_algebra(file: &AlgebraFile) -> Result<Dgla, mc_calculus::dgla::DglaError> {
    let mut b = DglaBuilder::new();
    for (sym, chain_degree) in &file.generators {
        b = b.generator(sym, -chain_degree);
    }
    for (sym, value) in &file.differentials {
        let v: Vec<(Scalar, &str)> =
            value.iter().map(|(c, s)| (c.clone(), s.as_str())).collect();
        b = b.differential(sym, &v);
    }
    for (ls, rs, value) in &file.brackets {
        let v: Vec<(Scalar, &str)> =
            value.iter().map(|(c, s)| (c.clone(), s.as_str())).collect();
        b = b.bracket(ls, rs, &v);
    }
    if !file.filtration.is_empty() {
        let max_p = *file.filtration.keys().max().unwrap();
        let mut layers = Vec::new();
        for p in 2..=max_p {
            layers.push(file.filtration.get(&p).cloned().unwrap_or_default());
        }
        b = b.filtration_layers(layers);
    }
    b.build_unchecked()
}

enum Token {
    Sign(bool),
    Rational(Scalar),
    Word(String),
}

fn tokenize(s: &str) -> Result<Vec<Token>, ParseError> {
    let spaced = s.replace('+', " + ").replace('-', " - ");
    let mut out = Vec::new();
    for tok in spaced.split_whitespace() {
        if tok == "+" {
            out.push(Token::Sign(false));
        } else if tok == "-" {
            out.push(Token::Sign(true));
        } else if tok.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            let val = parse_scalar(tok).ok_or_else(|| {
                ParseError::Expression(format!("bad rational: {tok}"))
            })?;
            out.push(Token::Rational(val));
        } else {
            out.push(Token::Word(tok.to_string()));
        }
    }
    Ok(out)
}

/// Parse a linear combination of generator symbols.
pub fn parse_combo(s: &str) -> Result<Vec<(Scalar, String)>, ParseError> {
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    let tokens = tokenize(s)?;
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut negative = false;
        while let Some(Token::Sign(neg)) = tokens.get(i) {
            negative ^= neg;
            i += 1;
        }
        let mut coeff = if negative {
            -Scalar::from_integer(1.into())
        } else {
            Scalar::from_integer(1.into())
        };
        if let Some(Token::Rational(r)) = tokens.get(i) {
            coeff *= r.clone();
            i += 1;
        }
        match tokens.get(i) {
            Some(Token::Word(w)) => {
                out.push((coeff, w.clone()));
                i += 1;
            }
            _ => {
                return Err(ParseError::Expression(
                    "expected a generator symbol".to_string(),
                ))
            }
        }
    }
    Ok(out)
}

/// Resolve a combination against an algebra's basis.
pub fn combo_to_vector(l: &Dgla, s: &str) -> Result<QVec, ParseError> {
    let mut v = vzero(l.dim());
    for (c, sym) in parse_combo(s)? {
        let i = l
            .basis()
            .index_of(&sym)
            .ok_or_else(|| ParseError::Expression(format!("unknown symbol: {sym}")))?;
        v[i] += c;
    }
    Ok(v)
}

enum Factor {
    Coordinate(usize, u32),
    CoordinateDiff(usize),
}

fn parse_factor(tok: &str) -> Option<Factor> {
    if let Some(rest) = tok.strip_prefix("dt") {
        let i: usize = rest.parse().ok()?;
        return Some(Factor::CoordinateDiff(i));
    }
    let rest = tok.strip_prefix('t')?;
    let (idx, exp) = match rest.split_once('^') {
        Some((i, e)) => (i.parse().ok()?, e.parse().ok()?),
        None => (rest.parse().ok()?, 1u32),
    };
    Some(Factor::Coordinate(idx, exp))
}

fn term_to_form(
    level: usize,
    coeff: Scalar,
    factors: &[Factor],
) -> Result<PolyForm, ParseError> {
    let mut form = PolyForm::constant(level, coeff);
    for f in factors {
        let piece = match f {
            Factor::Coordinate(i, e) => {
                check_index(level, *i)?;
                PolyForm::coordinate(level, *i).pow(*e as usize)
            }
            Factor::CoordinateDiff(i) => {
                check_index(level, *i)?;
                PolyForm::coordinate_diff(level, *i)
            }
        };
        form = form
            .mul(&piece)
            .map_err(|e| ParseError::Expression(e.to_string()))?;
    }
    Ok(form)
}

fn check_index(level: usize, i: usize) -> Result<(), ParseError> {
    if i == 0 || i > level {
        return Err(ParseError::Expression(format!(
            "coordinate index {i} out of range at level {level}"
        )));
    }
    Ok(())
}

/// Parse a polynomial differential form like `2 t1^2 dt2 - 1/2 dt1 dt2`.
pub fn parse_form(level: usize, s: &str) -> Result<PolyForm, ParseError> {
    let s = s.trim();
    if s == "0" {
        return Ok(PolyForm::zero(level));
    }
    let tokens = tokenize(s)?;
    let mut out = PolyForm::zero(level);
    let mut i = 0;
    while i < tokens.len() {
        let mut negative = false;
        while let Some(Token::Sign(neg)) = tokens.get(i) {
            negative ^= neg;
            i += 1;
        }
        let mut coeff = if negative {
            -Scalar::from_integer(1.into())
        } else {
            Scalar::from_integer(1.into())
        };
        if let Some(Token::Rational(r)) = tokens.get(i) {
            coeff *= r.clone();
            i += 1;
        }
        let mut factors = Vec::new();
        while let Some(Token::Word(w)) = tokens.get(i) {
            match parse_factor(w) {
                Some(f) => {
                    factors.push(f);
                    i += 1;
                }
                None => {
                    return Err(ParseError::Expression(format!(
                        "unexpected token in form: {w}"
                    )))
                }
            }
        }
        out = out.add(&term_to_form(level, coeff, &factors)?);
    }
    Ok(out)
}

/// Parse an L-valued form like `dt1 x - 1/2 t1 dt2 y`; the generator symbol
/// ends each term.
pub fn parse_lieform(l: &Dgla, level: usize, s: &str) -> Result<LieForm, ParseError> {
    let s = s.trim();
    if s == "0" {
        return Ok(LieForm::zero(level));
    }
    let tokens = tokenize(s)?;
    let mut out = LieForm::zero(level);
    let mut i = 0;
    while i < tokens.len() {
        let mut negative = false;
        while let Some(Token::Sign(neg)) = tokens.get(i) {
            negative ^= neg;
            i += 1;
        }
        let mut coeff = if negative {
            -Scalar::from_integer(1.into())
        } else {
            Scalar::from_integer(1.into())
        };
        if let Some(Token::Rational(r)) = tokens.get(i) {
            coeff *= r.clone();
            i += 1;
        }
        let mut factors = Vec::new();
        let mut generator: Option<String> = None;
        while let Some(Token::Word(w)) = tokens.get(i) {
            match parse_factor(w) {
                Some(f) => {
                    factors.push(f);
                    i += 1;
                }
                None => {
                    generator = Some(w.clone());
                    i += 1;
                    break;
                }
            }
        }
        let sym = generator.ok_or_else(|| {
            ParseError::Expression("each term must end with a generator".to_string())
        })?;
        let b = l
            .basis()
            .index_of(&sym)
            .ok_or_else(|| ParseError::Expression(format!("unknown symbol: {sym}")))?;
        let form = term_to_form(level, coeff, &factors)?;
        out = out.add(&LieForm::tensor(level, form, b));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mc_calculus::scalar::{q, qi};

    const XAB: &str = "\
algebra xab
# chain degrees: a and b sit in cohomological degree 1
generator x 0
generator a -1
generator b -1
d x = a
[x, a] = b
";

    #[test]
    fn parse_and_build_the_xab_file() {
        let file = parse_algebra_file(XAB).unwrap();
        assert_eq!(file.name, "xab");
        let l = build_algebra(&file).unwrap();
        assert!(l.validate().is_valid());
        assert_eq!(l.nilpotency_class(), 2);
        assert_eq!(l.degree(l.basis().index_of("a").unwrap()), 1);
    }

    #[test]
    fn minimal_abelian_file() {
        let text = "algebra point\ngenerator x 0\n";
        let l = build_algebra(&parse_algebra_file(text).unwrap()).unwrap();
        assert_eq!(l.nilpotency_class(), 1);
        assert!(l.validate().is_valid());
    }

    #[test]
    fn rejects_unknown_directives_and_bad_names() {
        assert!(parse_algebra_file("nonsense here").is_err());
        assert!(parse_algebra_file("generator t1 0").is_err());
        assert!(parse_algebra_file("generator d 0").is_err());
        assert!(parse_algebra_file("generator x zero").is_err());
        assert!(parse_algebra_file("generator x 0\ngenerator x 1").is_err());
    }

    #[test]
    fn derivation_violating_file_fails_validation_with_witness() {
        // d(b) = c is degree-consistent but breaks the derivation rule on
        // (x, a), since d[x,a] = c while [dx,a] + [x,da] = [a,a] = 0
        let text = "\
algebra bad
generator x 0
generator a -1
generator b -1
generator c -2
d x = a
d b = c
[x, a] = b
";
        let file = parse_algebra_file(text).unwrap();
        let l = build_algebra(&file).unwrap();
        let report = l.validate();
        assert!(!report.is_valid());
        let failing = report.checks.iter().find(|c| !c.pass).unwrap();
        assert_eq!(failing.name, "derivation");
        assert_eq!(failing.witness.as_deref(), Some("(x, a)"));
    }

    #[test]
    fn jacobi_violating_file_fails_with_witness_triple() {
        // [x,[y,z]] + [y,[z,x]] + [z,[x,y]] = [x,w] - [y,u] + 0 = u != 0
        let text = "\
algebra badjacobi
generator x 0
generator y 0
generator z 0
generator u 0
generator w 0
[x, y] = z
[x, z] = u
[y, z] = w
[x, w] = u
";
        let file = parse_algebra_file(text).unwrap();
        let l = build_algebra(&file).unwrap();
        let report = l.validate();
        assert!(!report.is_valid());
        let failing = report.checks.iter().find(|c| !c.pass).unwrap();
        assert_eq!(failing.name, "jacobi");
        assert_eq!(failing.witness.as_deref(), Some("(x, y, z)"));
    }

    #[test]
    fn custom_filtration_override_is_parsed_and_validated() {
        // the lower central series of the Heisenberg algebra as an explicit
        // override: F^2 = span z
        let good = "\
algebra heis
generator x 0
generator y 0
generator z 0
[x, y] = z
filtration 2: z
";
        let l = build_algebra(&parse_algebra_file(good).unwrap()).unwrap();
        assert!(l.validate().is_valid());
        assert_eq!(l.nilpotency_class(), 2);
        assert_eq!(l.filtration_layer(2).dim(), 1);

        // an incompatible override is constructed but fails validation:
        // [x, y] = z does not land in span{x}
        let bad = "\
algebra heis
generator x 0
generator y 0
generator z 0
[x, y] = z
filtration 2: x
";
        let l = build_algebra(&parse_algebra_file(bad).unwrap()).unwrap();
        let report = l.validate();
        assert!(!report.is_valid());
        let failing = report.checks.iter().find(|c| !c.pass).unwrap();
        assert_eq!(failing.name, "filtration-bracket");
    }

    #[test]
    fn combos_parse_signs_and_rationals() {
        let parsed = parse_combo("-a - 1/2 b + 3 c").unwrap();
        assert_eq!(
            parsed,
            vec![
                (qi(-1), "a".to_string()),
                (q(-1, 2), "b".to_string()),
                (qi(3), "c".to_string()),
            ]
        );
        assert!(parse_combo("0").unwrap().is_empty());
        assert!(parse_combo("1/2").is_err());
    }

    #[test]
    fn form_expressions_round_trip_through_display() {
        for expr in ["t1^2 dt2", "1 - 1/2 t1 dt2", "dt1 dt2", "0"] {
            let form = parse_form(2, expr).unwrap();
            let reparsed = parse_form(2, &form.to_string()).unwrap();
            assert_eq!(form, reparsed, "{expr}");
        }
        assert!(parse_form(1, "t2").is_err());
        assert!(parse_form(1, "banana").is_err());
    }

    #[test]
    fn lieform_expressions_parse() {
        let l = mc_calculus::corpus::xab();
        let parsed = parse_lieform(&l, 1, "dt1 x - 1/2 t1 a").unwrap();
        assert!(!parsed.is_zero());
        assert!(parse_lieform(&l, 1, "dt1").is_err());
        assert!(parse_lieform(&l, 1, "dt1 nosuch").is_err());
    }
}
