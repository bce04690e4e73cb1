//! Small grammars used on the command line: twist specs, group elements and Lie algebra elements.

use std::f64::consts::PI;

use manin_core::groupgeom::{CMatrix, GroupPoint, MatrixGroupModel};
use manin_core::io::Entry;
use manin_core::quasilie::Twist;
use manin_core::scalar;
use manin_core::tensoralg::{BasedSpace, Multivector};
use manin_core::{Error, Result};

fn label_index(space: &BasedSpace, label: &str) -> Result<usize> {
    space
        .index_of(label.trim())
        .ok_or_else(|| Error::Parse(format!("unknown basis label {:?}", label.trim())))
}

/// `"e1^e2:1/2,e2^e3:-1"`; an empty string is the zero twist.
pub fn parse_twist(spec: &str, space: &BasedSpace) -> Result<Twist> {
    let mut terms = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (pair, value) = item
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("twist term {item:?} lacks ':value'")))?;
        let (a, b) = pair
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("twist term {item:?} lacks 'ei^ej'")))?;
        let (i, j) = (label_index(space, a)?, label_index(space, b)?);
        if i == j {
            return Err(Error::Parse(format!("twist term {item:?} repeats a basis vector")));
        }
        let v = scalar::parse(value)?;
        if i < j {
            terms.push((vec![i, j], v));
        } else {
            terms.push((vec![j, i], -v));
        }
    }
    Twist::new(Multivector::from_terms(space, 2, terms))
}

/// A real number, optionally a multiple of `pi`: `0.5`, `-pi`, `pi/2`, `3*pi/4`, `2pi`.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid number {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (s, 1.0),
    };
    let value = match num.strip_suffix("pi") {
        Some(head) => {
            let head = head.trim().trim_end_matches('*').trim();
            let c = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                h => h.parse::<f64>().map_err(|_| bad())?,
            };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    let v = value / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Splits `"0.5*e1-2e-3*e2+e3"` into signed terms. A sign directly after an exponent
/// marker inside a coefficient does not start a new term.
fn split_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in s.chars().filter(|c| !c.is_whitespace()) {
        let in_exponent = !cur.contains('*')
            && cur.ends_with(['e', 'E'])
            && cur[..cur.len() - 1].ends_with(|p: char| p.is_ascii_digit() || p == '.');
        if (c == '+' || c == '-') && !cur.is_empty() && !cur.ends_with(['+', '-']) && !in_exponent {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(c);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Coordinates of a linear combination such as `"1.5708*e1 - e3"`; `"0"` is the origin.
pub fn parse_combination(s: &str, space: &BasedSpace) -> Result<Vec<f64>> {
    let mut c = vec![0.0; space.dim()];
    for term in split_terms(s) {
        let (coef, label) = match term.rsplit_once('*') {
            Some((k, l)) => (parse_real(k)?, l.to_string()),
            None => {
                if let Ok(v) = parse_real(&term) {
                    if v == 0.0 {
                        continue;
                    }
                    return Err(Error::Parse(format!("term {term:?} has no basis label")));
                }
                match term.strip_prefix('-') {
                    Some(l) => (-1.0, l.to_string()),
                    None => (1.0, term.trim_start_matches('+').to_string()),
                }
            }
        };
        c[label_index(space, &label)?] += coef;
    }
    Ok(c)
}

/// `exp(...)`, `diag-torus(theta)`, or a JSON matrix of real or `[re, im]` entries.
pub fn parse_element(spec: &str, model: &MatrixGroupModel) -> Result<GroupPoint> {
    let s = spec.trim();
    if let Some(inner) = s.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
        let c = parse_combination(inner, model.algebra().space())?;
        return Ok(model.exp(&c));
    }
    if let Some(inner) = s.strip_prefix("diag-torus(").and_then(|r| r.strip_suffix(')')) {
        return model.diag_torus(parse_real(inner)?);
    }
    if s.starts_with('[') {
        let rows: Vec<Vec<Entry>> = serde_json::from_str(s)?;
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(Error::Parse("group element matrix must be square".into()));
        }
        return model.point(CMatrix::from_fn(size, size, |r, c| rows[r][c].value()));
    }
    Err(Error::Parse(format!(
        "group element {s:?} is not exp(...), diag-torus(...) or a JSON matrix"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> BasedSpace {
        BasedSpace::numbered("e", 3)
    }

    #[test]
    fn twists() {
        let t = parse_twist("e1^e2:1/2, e3^e2:2", &space()).unwrap();
        assert_eq!(t.get(0, 1), scalar::ratio(1, 2));
        assert_eq!(t.get(1, 2), scalar::int(-2));
        assert!(parse_twist("", &space()).unwrap().is_zero());
        assert!(parse_twist("e1^e1:1", &space()).is_err());
        assert!(parse_twist("e1^e4:1", &space()).is_err());
        assert!(parse_twist("e1^e2:1/0", &space()).is_err());
    }

    #[test]
    fn reals() {
        assert_eq!(parse_real("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("3*pi/4").unwrap(), 0.75 * PI);
        assert_eq!(parse_real("1.5e-3").unwrap(), 1.5e-3);
        assert!(parse_real("x").is_err());
        assert!(parse_real("1/0").is_err());
    }

    #[test]
    fn combinations() {
        let s = space();
        assert_eq!(parse_combination("0", &s).unwrap(), vec![0.0; 3]);
        assert_eq!(parse_combination("1.25*e1", &s).unwrap(), vec![1.25, 0.0, 0.0]);
        assert_eq!(parse_combination("2e-1*e2 - e3 + e1", &s).unwrap(), vec![1.0, 0.2, -1.0]);
        assert_eq!(parse_combination("-pi/2*e3", &s).unwrap(), vec![0.0, 0.0, -PI / 2.0]);
        assert!(parse_combination("2", &s).is_err());
        assert!(parse_combination("e7", &s).is_err());
    }
}
