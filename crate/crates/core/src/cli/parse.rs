//! Text syntax for elements and polynomials, e.g. `"e12 + e23*x; 2*e13*x^2"`.
//!
//! A polynomial is a sum of terms `c*name*x^n` whose factors may come in any
//! order; the coefficient defaults to 1 and the x-power to 0. A term without
//! a basis name stands for a multiple of the unit and is rejected when the
//! algebra has none.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{Algebra, Element, Scalar};
use crate::orepoly::DiffPoly;

/// `"7"`, `"-3"` or `"a/b"` as an exact rational.
pub fn parse_rational(text: &str) -> Result<Scalar, String> {
    let t = text.trim();
    let value = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {text:?}"))?;
            let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {text:?}"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in {text:?}"));
            }
            Scalar::new(n, d)
        }
        None => Scalar::from_integer(t.parse().map_err(|_| format!("bad number {text:?}"))?),
    };
    Ok(value)
}

pub fn parse_usize_list(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .enumerate()
        .map(|(i, t)| t.trim().parse().map_err(|_| format!("cannot parse {t:?} at position {i}")))
        .collect()
}

pub fn parse_u64_list(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .enumerate()
        .map(|(i, t)| t.trim().parse().map_err(|_| format!("cannot parse {t:?} at position {i}")))
        .collect()
}

/// Splits at top-level `+` and `-`, keeping the sign with each term.
fn split_terms(text: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut prev: Option<char> = None;
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        let binary_position = prev.is_some_and(|p| !matches!(p, '*' | '/' | '^' | '+' | '-'));
        if (ch == '+' || ch == '-') && (binary_position || prev.is_none() || matches!(prev, Some('+' | '-'))) {
            if !current.is_empty() {
                out.push((negative, std::mem::take(&mut current)));
                negative = false;
            }
            if ch == '-' {
                negative = !negative;
            }
        } else {
            current.push(ch);
        }
        prev = Some(ch);
    }
    if !current.is_empty() {
        out.push((negative, current));
    }
    out
}

pub fn parse_poly(alg: &Algebra, text: &str) -> Result<DiffPoly, String> {
    let ring = alg.ring();
    let terms = split_terms(text);
    if terms.is_empty() {
        return Err(format!("empty expression {text:?}"));
    }
    let mut coeffs: Vec<Element> = Vec::new();
    for (negative, term) in terms {
        let mut coeff = ring.one();
        let mut basis = None;
        let mut power = 0usize;
        for factor in term.split('*') {
            if let Some(i) = alg.index_of(factor) {
                if basis.replace(i).is_some() {
                    return Err(format!("term {term:?} names two basis elements"));
                }
            } else if factor == "x" {
                power += 1;
            } else if let Some(p) = factor.strip_prefix("x^") {
                power += p.parse::<usize>().map_err(|_| format!("bad x-power {factor:?} in {term:?}"))?;
            } else {
                let c = ring.parse(factor).map_err(|_| format!("unknown factor {factor:?} in {term:?}"))?;
                coeff = ring.mul(&coeff, &c);
            }
        }
        let i = match basis.or(alg.unit()) {
            Some(i) => i,
            None => return Err(format!("term {term:?} has no basis element and the algebra has no unit")),
        };
        if negative {
            coeff = ring.neg(&coeff);
        }
        while coeffs.len() <= power {
            coeffs.push(alg.zero());
        }
        coeffs[power] = alg.add(&coeffs[power], &alg.scale(&coeff, &alg.basis(i)));
    }
    Ok(DiffPoly::new(coeffs))
}

/// Polynomials separated by `;`.
pub fn parse_set(alg: &Algebra, text: &str) -> Result<Vec<DiffPoly>, String> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(|s| parse_poly(alg, s)).collect()
}

/// Algebra elements separated by `,` or `;`.
pub fn parse_elements(alg: &Algebra, text: &str) -> Result<Vec<Element>, String> {
    text.split([',', ';'])
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let p = parse_poly(alg, s)?;
            match p.degree() {
                None => Ok(alg.zero()),
                Some(0) => Ok(p.coeffs()[0].clone()),
                Some(_) => Err(format!("{s:?} is not an algebra element (it involves x)")),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, CoeffRing};

    #[test]
    fn polynomials() {
        let a = catalog::strict_upper_triangular(CoeffRing::Rationals, 3);
        let set = parse_set(&a, "e12+e23*x; 2*e13*x^2").unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set[0], DiffPoly::new(vec![a.basis(0), a.basis(2)]));
        assert_eq!(set[1], DiffPoly::monomial(&a, a.scale(&Scalar::from_integer(2.into()), &a.basis(1)), 2));
        let p = parse_poly(&a, "-1/2*e12 - x*e13").unwrap();
        assert_eq!(a.format_element(&p.coeffs()[0]), "-1/2*e12");
        assert_eq!(a.format_element(&p.coeffs()[1]), "-e13");
        assert!(parse_poly(&a, "3*x").is_err());
        assert!(parse_poly(&a, "e99").is_err());
    }

    #[test]
    fn unit_terms() {
        let a = catalog::truncated_polynomial(CoeffRing::PrimeField(3), 3);
        let p = parse_poly(&a, "x + t^2").unwrap();
        assert_eq!(p, DiffPoly::new(vec![a.basis(2), a.basis(0)]));
        let els = parse_elements(&a, "t, t^2").unwrap();
        assert_eq!(els, vec![a.basis(1), a.basis(2)]);
        assert!(parse_elements(&a, "t*x").is_err());
    }

    #[test]
    fn rationals_and_lists() {
        assert_eq!(parse_rational("1/2").unwrap(), Scalar::new(1.into(), 2.into()));
        assert!(parse_rational("0.5").is_err());
        assert_eq!(parse_usize_list("0, 1,2").unwrap(), vec![0, 1, 2]);
        assert!(parse_u64_list("1,a").is_err());
    }
}
