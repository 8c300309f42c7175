use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::rational::{primitive, rank_of, rat, rat_to_f64, rat_to_string, Rational};
use super::{FourierBlock, Frame, HarmonicsError};
use crate::space::{KleinSpace, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Cos,
    Sin,
}

/// `coeffs · trig(2π λ·x + π ζ·y)`; `coeffs` has one entry per component.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTerm {
    pub lambda: Vec<i64>,
    pub coeffs: Vec<Rational>,
}

/// A real symmetric function (or toroidal vector field) with frequencies in
/// one block and its conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct RealBasisFunction {
    pub zeta: Vec<i64>,
    pub frame: Frame,
    pub part: Part,
    pub terms: Vec<RealTerm>,
}

impl RealBasisFunction {
    pub fn components(&self) -> usize {
        self.terms.first().map_or(1, |t| t.coeffs.len())
    }

    pub fn eval(&self, p: &Point) -> Vec<f64> {
        let zy: f64 = self.zeta.iter().zip(&p.y).map(|(&z, &y)| z as f64 * y).sum();
        let mut out = vec![0.0; self.components()];
        for t in &self.terms {
            let lx: f64 = t.lambda.iter().zip(&p.x).map(|(&l, &x)| l as f64 * x).sum();
            let theta = TAU * lx + PI * zy;
            let w = match self.part {
                Part::Cos => theta.cos(),
                Part::Sin => theta.sin(),
            };
            for (o, c) in out.iter_mut().zip(&t.coeffs) {
                *o += rat_to_f64(c) * w;
            }
        }
        out
    }

    /// Value of a scalar basis function.
    pub fn eval_scalar(&self, p: &Point) -> f64 {
        self.eval(p)[0]
    }

    /// Human-readable formula, e.g. `2·sin(2π(x1 - x2) + π(y1 + y2))`.
    pub fn expression(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let name = match self.part {
            Part::Cos => "cos",
            Part::Sin => "sin",
        };
        let mut s = String::new();
        for (n, t) in self.terms.iter().enumerate() {
            let arg = argument(&t.lambda, &self.zeta);
            let (neg, coeff) = coefficient(&t.coeffs);
            if n > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            match (arg, coeff) {
                (None, c) => s.push_str(c.as_deref().unwrap_or("1")),
                (Some(a), None) => s.push_str(&format!("{name}({a})")),
                (Some(a), Some(c)) => s.push_str(&format!("{c}·{name}({a})")),
            }
        }
        s
    }
}

/// Returns `(negate, text)`; the text is `None` for a unit scalar.
fn coefficient(c: &[Rational]) -> (bool, Option<String>) {
    if c.len() == 1 {
        let neg = c[0].is_negative();
        let a = c[0].abs();
        if a == rat(1) {
            (neg, None)
        } else {
            (neg, Some(rat_to_string(&a)))
        }
    } else {
        let cells: Vec<String> = c.iter().map(rat_to_string).collect();
        (false, Some(format!("({})", cells.join(", "))))
    }
}

fn linear(coeffs: &[i64], var: &str) -> Option<(String, bool)> {
    let mut s = String::new();
    let mut count = 0;
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
        if count == 0 {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
        }
        s.push_str(&format!("{mag}{var}{}", i + 1));
        count += 1;
    }
    if count == 0 {
        return None;
    }
    let simple = count == 1 && coeffs.iter().all(|&c| c == 0 || c == 1);
    Some((s, simple))
}

fn argument(lambda: &[i64], zeta: &[i64]) -> Option<String> {
    let wrap = |prefix: &str, (s, simple): (String, bool)| {
        if simple {
            format!("{prefix}{s}")
        } else {
            format!("{prefix}({s})")
        }
    };
    let parts: Vec<String> = [
        linear(lambda, "x").map(|l| wrap("2π", l)),
        linear(zeta, "y").map(|l| wrap("π", l)),
    ]
    .into_iter()
    .flatten()
    .collect();
    if parts.is_empty() {
        None
    } else {
        Some(parts.join(" + "))
    }
}

type BlockKey = (Vec<i64>, Vec<Vec<i64>>);

fn negate(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

fn conjugate_key(b: &FourierBlock) -> BlockKey {
    let mut orbit: Vec<Vec<i64>> = b.orbit.iter().map(|l| negate(l)).collect();
    orbit.sort();
    (negate(&b.zeta), orbit)
}

/// `(Re, Im)` of `Σ_λ v(λ) e^{iθ_λ}` as term lists.
fn real_parts(block: &FourierBlock, v: &[Rational], d: usize) -> [Vec<RealTerm>; 2] {
    let terms: Vec<RealTerm> = block
        .orbit
        .iter()
        .enumerate()
        .map(|(i, l)| RealTerm {
            lambda: l.clone(),
            coeffs: v[i * d..(i + 1) * d].to_vec(),
        })
        .collect();
    [terms.clone(), terms]
}

/// At `ζ = 0`, `cos θ_{−λ} = cos θ_λ` and `sin θ_{−λ} = −sin θ_λ`: fold each
/// frequency onto the larger of `±λ`, drop zeros and rescale to integers.
fn fold_self_conjugate(terms: Vec<RealTerm>, part: Part) -> Vec<RealTerm> {
    let mut acc: Vec<RealTerm> = Vec::new();
    for t in terms {
        let neg = negate(&t.lambda);
        let (lambda, flip) = if neg > t.lambda { (neg, part == Part::Sin) } else { (t.lambda, false) };
        let coeffs: Vec<Rational> = if flip { t.coeffs.iter().map(|c| -c).collect() } else { t.coeffs };
        match acc.iter_mut().find(|a| a.lambda == lambda) {
            Some(a) => {
                for (x, c) in a.coeffs.iter_mut().zip(&coeffs) {
                    *x += c;
                }
            }
            None => acc.push(RealTerm { lambda, coeffs }),
        }
    }
    if part == Part::Sin {
        acc.retain(|t| t.lambda.iter().any(|&l| l != 0));
    }
    acc.retain(|t| t.coeffs.iter().any(|c| !c.is_zero()));
    acc.sort_by(|a, b| a.lambda.cmp(&b.lambda));
    rescale(acc)
}

fn rescale(terms: Vec<RealTerm>) -> Vec<RealTerm> {
    if terms.is_empty() {
        return terms;
    }
    let d = terms[0].coeffs.len();
    let flat: Vec<Rational> = terms.iter().flat_map(|t| t.coeffs.clone()).collect();
    let scaled = primitive(&flat);
    terms
        .into_iter()
        .enumerate()
        .map(|(i, t)| RealTerm {
            lambda: t.lambda,
            coeffs: scaled[i * d..(i + 1) * d].to_vec(),
        })
        .collect()
}

/// Coordinates of a real function in the span of `{cos θ_λ, sin θ_λ}`, used
/// only to test independence.
fn coordinates(terms: &[RealTerm], part: Part, index: &HashMap<Vec<i64>, usize>, d: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); 2 * index.len() * d];
    let offset = match part {
        Part::Cos => 0,
        Part::Sin => index.len() * d,
    };
    for t in terms {
        let i = index[&t.lambda];
        for (j, c) in t.coeffs.iter().enumerate() {
            v[offset + i * d + j] += c;
        }
    }
    v
}

/// Turn solved blocks into real basis functions.
///
/// Real and imaginary parts of each kernel vector are symmetric real
/// functions. A block and its conjugate `(−ζ, −orbit)` give the same
/// functions, so only the lexicographically larger one is used (the first
/// nonzero entry of `ζ` is then positive). For
/// self-conjugate blocks (`ζ = 0`, orbit closed under negation) an independent
/// subset is chosen by exact rank.
pub fn realize(blocks: &[FourierBlock], space: &KleinSpace) -> Result<Vec<RealBasisFunction>, HarmonicsError> {
    let keys: HashMap<BlockKey, usize> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| ((b.zeta.clone(), b.orbit.clone()), i))
        .collect();
    let mut out = Vec::new();
    for b in blocks {
        if b.kernel_basis.is_empty() {
            continue;
        }
        let d = b.components(space);
        let key = (b.zeta.clone(), b.orbit.clone());
        let conj = conjugate_key(b);
        let self_conjugate = conj == key;
        if !self_conjugate {
            if !keys.contains_key(&conj) {
                return Err(HarmonicsError::ConjugateNotInBox {
                    zeta: b.zeta.clone(),
                    lambda: b.orbit[0].clone(),
                });
            }
            if conj > key {
                continue;
            }
        }
        let make = |terms: Vec<RealTerm>, part: Part| RealBasisFunction {
            zeta: b.zeta.clone(),
            frame: b.frame,
            part,
            terms,
        };
        if !self_conjugate {
            for v in &b.kernel_basis {
                let [re, im] = real_parts(b, v, d);
                out.push(make(re, Part::Cos));
                out.push(make(im, Part::Sin));
            }
            continue;
        }
        let index: HashMap<Vec<i64>, usize> =
            b.orbit.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let mut chosen: Vec<Vec<Rational>> = Vec::new();
        for v in &b.kernel_basis {
            let [re, im] = real_parts(b, v, d);
            for (terms, part) in [(re, Part::Cos), (im, Part::Sin)] {
                let terms = fold_self_conjugate(terms, part);
                if terms.is_empty() {
                    continue;
                }
                let coords = coordinates(&terms, part, &index, d);
                chosen.push(coords);
                if rank_of(&chosen) == chosen.len() {
                    out.push(make(terms, part));
                } else {
                    chosen.pop();
                }
            }
            if chosen.len() == b.kernel_basis.len() {
                break;
            }
        }
    }
    Ok(out)
}
