//! Univariate polynomials, just enough to find eigenvalues lying in the base
//! field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FieldSpec, LinMap, LinearSystem, Rref, Scalar};

/// Coefficients from the constant term up; the leading coefficient is nonzero
/// unless the polynomial is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub field: FieldSpec,
    pub coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

/// The monic minimal polynomial of a square matrix.
pub fn minimal_polynomial(m: &LinMap) -> Poly {
    let field = m.field();
    let n = m.domain_dim();
    assert_eq!(n, m.codomain_dim(), "square matrix expected");
    let flatten = |a: &LinMap| -> Vec<(usize, Scalar)> {
        let mut v: Vec<_> = a
            .triples()
            .into_iter()
            .map(|(r, c, x)| (r * n + c, x))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    };
    let mut powers = vec![flatten(&LinMap::identity(field, n))];
    let mut span = Rref::new(field, n * n);
    span.insert(&powers[0]);
    let mut current = LinMap::identity(field, n);
    loop {
        current = m.compose(&current).expect("square");
        let flat = flatten(&current);
        if span.contains(&flat) {
            // Σ c_i M^i = M^k; unknowns c_0..c_{k-1}, one equation per entry.
            let k = powers.len();
            let mut sys = LinearSystem::new(field, k);
            for entry in 0..n * n {
                let coeffs: Vec<_> = powers
                    .iter()
                    .enumerate()
                    .filter_map(|(i, p)| {
                        super::sparse::sparse_get(p, entry).map(|v| (i, v.clone()))
                    })
                    .collect();
                let rhs = super::sparse::sparse_get(&flat, entry)
                    .cloned()
                    .unwrap_or_else(|| field.zero());
                sys.add_equation(&coeffs, &rhs);
            }
            let c = sys.solution().expect("dependency exists");
            let mut coeffs: Vec<Scalar> = c.entries().iter().map(|x| -x).collect();
            coeffs.push(field.one());
            return Poly::new(field, coeffs);
        }
        span.insert(&flat);
        powers.push(flat);
    }
}

/// Distinct roots lying in the base field, in increasing canonical order
/// (numeric order for ℚ, residue order for 𝔽_p).
pub fn roots(p: &Poly) -> Vec<Scalar> {
    if p.degree().is_none_or(|d| d == 0) {
        return Vec::new();
    }
    match p.field {
        FieldSpec::Rationals => rational_roots(p),
        FieldSpec::Prime(q) => prime_roots(p, q as u64)
            .into_iter()
            .map(|v| p.field.from_i64(v as i64))
            .collect(),
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

fn rational_roots(p: &Poly) -> Vec<Scalar> {
    // Scale to integer coefficients.
    let mut lcm = BigInt::one();
    for c in &p.coeffs {
        let (_, den) = c.as_ratio();
        lcm = lcm.lcm(&den);
    }
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| {
            let (num, den) = c.as_ratio();
            num * (&lcm / den)
        })
        .collect();
    let mut out = Vec::new();
    let first_nonzero = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if first_nonzero > 0 {
        out.push(BigRational::zero());
    }
    let ints = &ints[first_nonzero..];
    if ints.len() > 1 {
        let lead = ints.last().unwrap();
        let eval = |x: &BigRational| -> bool {
            let mut acc = BigRational::zero();
            for c in ints.iter().rev() {
                acc = acc * x + BigRational::from_integer(c.clone());
            }
            acc.is_zero()
        };
        for a in divisors(&ints[0]) {
            for b in divisors(lead) {
                for sign in [1, -1] {
                    let cand = BigRational::new(&a * sign, b.clone());
                    if !out.contains(&cand) && eval(&cand) {
                        out.push(cand);
                    }
                }
            }
        }
    }
    out.sort();
    out.into_iter().map(Scalar::Rational).collect()
}

fn to_residues(p: &Poly, q: u64) -> Vec<u64> {
    p.coeffs
        .iter()
        .map(|c| match c {
            Scalar::Modular { value, .. } => *value as u64 % q,
            Scalar::Rational(_) => unreachable!("prime-field polynomial"),
        })
        .collect()
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, q: u64) -> u64 {
    let mut acc = 1u64;
    let (mut base, mut exp) = (a % q, q - 2);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

fn poly_rem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], q);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let f = r[r.len() - 1] * lead_inv % q;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + q - f * bi % q) % q;
        }
        trim(&mut r);
    }
    r
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % q;
        }
    }
    poly_rem(&out, m, q)
}

fn poly_pow_mod(base: &[u64], mut exp: u64, m: &[u64], q: u64) -> Vec<u64> {
    let mut acc = poly_rem(&[1], m, q);
    let mut b = poly_rem(base, m, q);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, m, q);
        }
        b = poly_mul_mod(&b, &b, m, q);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, q);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, q);
        for c in a.iter_mut() {
            *c = *c * inv % q;
        }
    }
    a
}

fn poly_div_exact(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], q);
    let mut quo = vec![0u64; r.len().saturating_sub(db)];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let f = r[r.len() - 1] * lead_inv % q;
        quo[k] = f;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + q - f * bi % q) % q;
        }
        trim(&mut r);
    }
    quo
}

fn prime_roots(p: &Poly, q: u64) -> Vec<u64> {
    let f = to_residues(p, q);
    if q <= 1 << 16 {
        let mut out: Vec<u64> = (0..q)
            .filter(|x| f.iter().rev().fold(0u64, |acc, c| (acc * x + c) % q) == 0)
            .collect();
        out.sort_unstable();
        return out;
    }
    // g = gcd(f, x^q - x) is the product of the distinct linear factors.
    let xq = poly_pow_mod(&[0, 1], q, &f, q);
    let mut h = xq.clone();
    h.resize(h.len().max(2), 0);
    h[1] = (h[1] + q - 1) % q;
    let g = poly_gcd(&f, &h, q);
    let mut out = Vec::new();
    split_linear(&g, q, 1, &mut out);
    out.sort_unstable();
    out
}

/// Splits a squarefree product of distinct linear factors (Rabin's method
/// with deterministic shifts).
fn split_linear(g: &[u64], q: u64, mut shift: u64, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push((q - g[0] * inv_mod(g[1], q) % q) % q),
        _ => loop {
            let base = [shift % q, 1];
            shift += 1;
            let mut t = poly_pow_mod(&base, (q - 1) / 2, g, q);
            if t.is_empty() {
                continue;
            }
            t[0] = (t[0] + q - 1) % q;
            let d = poly_gcd(g, &t, q);
            if d.len() > 1 && d.len() < g.len() {
                let rest = poly_div_exact(g, &d, q);
                split_linear(&d, q, shift, out);
                split_linear(&rest, q, shift, out);
                return;
            }
        },
    }
}

/// A small integer view of a scalar, when one exists.
pub fn as_small_int(s: &Scalar) -> Option<i64> {
    let (n, d) = s.as_ratio();
    if d.is_one() {
        n.to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_polynomial_of_projection() {
        let q = FieldSpec::Rationals;
        let m = LinMap::from_i64_rows(q, &[vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 1]]);
        let p = minimal_polynomial(&m);
        // x^2 - x
        assert_eq!(p.coeffs, vec![q.zero(), q.from_i64(-1), q.one()]);
        assert_eq!(roots(&p), vec![q.zero(), q.one()]);
    }

    #[test]
    fn rational_roots_found() {
        let q = FieldSpec::Rationals;
        // (2x - 3)(x + 4)(x^2 + 1) = 2x^4 + 5x^3 - 10x^2 + 5x - 12
        let p = Poly::new(
            q,
            vec![q.from_i64(-12), q.from_i64(5), q.from_i64(-10), q.from_i64(5), q.from_i64(2)],
        );
        assert_eq!(roots(&p), vec![q.from_i64(-4), q.from_ratio(3, 2).unwrap()]);
    }

    #[test]
    fn prime_roots_small_and_large() {
        for prime in [5u32, 2147483647] {
            let f = FieldSpec::Prime(prime);
            // (x - 2)(x - 3)(x^2 - r) with r a non-residue mod 5; over the large
            // prime only membership of 2 and 3 is asserted.
            let lin = |a: i64| Poly::new(f, vec![f.from_i64(-a), f.one()]);
            let mul = |a: &Poly, b: &Poly| {
                let mut c = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
                for (i, x) in a.coeffs.iter().enumerate() {
                    for (j, y) in b.coeffs.iter().enumerate() {
                        c[i + j].add_mul(x, y);
                    }
                }
                Poly::new(f, c)
            };
            let p = mul(&lin(2), &lin(3));
            let p = mul(&p, &Poly::new(f, vec![f.from_i64(-2), f.zero(), f.one()]));
            let r = roots(&p);
            assert!(r.contains(&f.from_i64(2)) && r.contains(&f.from_i64(3)));
            for x in &r {
                assert!(p.eval(x).is_zero());
            }
            if prime == 5 {
                assert_eq!(r.len(), 2);
            }
        }
    }
}
