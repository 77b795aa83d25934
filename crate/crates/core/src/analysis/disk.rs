//! Exact root counts with respect to circles centred at the origin.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{cauchy_bound, isolate_real_roots, refine_root, sturm_chain, IntPoly, Interval};

/// Distinct roots by position relative to `|z| = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskCount {
    pub inside: usize,
    pub on_circle: usize,
    pub outside: usize,
}

impl DiskCount {
    pub fn total(&self) -> usize {
        self.inside + self.on_circle + self.outside
    }
}

/// Lower-triangular Toeplitz matrix with first column `v`.
fn lower_toeplitz(v: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = v.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if j <= i { v[i - j].clone() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn mul_transpose(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &a[j][k]).sum()).collect())
        .collect()
}

/// Characteristic polynomial `det(x I - h)` by Faddeev-LeVerrier; every
/// division is exact for an integer matrix.
pub fn char_poly(h: &[Vec<BigInt>]) -> IntPoly {
    let n = h.len();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // m <- h m + c_{n-k+1} I
        let mut next: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|l| &h[i][l] * &m[l][j]).sum()).collect())
            .collect();
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let tr: BigInt = (0..n)
            .map(|i| (0..n).map(|l| &h[i][l] * &m[l][i]).sum::<BigInt>())
            .sum();
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        c[n - k] = -q;
    }
    IntPoly::new(c)
}

fn sign_variations(c: &[BigInt]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Roots inside `|z| < 1` for `q` with `q(0) != 0` and no root `z` with
/// `1 / z` also a root. The Schur-Cohn matrix `B B^T - A A^T` is then
/// nonsingular and its positive inertia is the count; the inertia comes
/// from Descartes' rule, exact because the spectrum is real.
fn schur_cohn_inside(q: &IntPoly) -> Result<usize> {
    let n = q.degree() as usize;
    let a = q.coeffs();
    let lo: Vec<BigInt> = a[..n].to_vec();
    let hi: Vec<BigInt> = (1..=n).rev().map(|k| a[k].clone()).collect();
    let (aa, bb) = (mul_transpose(&lower_toeplitz(&lo)), mul_transpose(&lower_toeplitz(&hi)));
    let h: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| &bb[i][j] - &aa[i][j]).collect())
        .collect();
    let chi = char_poly(&h);
    if chi.coeff(0).is_zero() {
        return Err(Error::InvalidInput(format!("singular Schur-Cohn matrix for {q}")));
    }
    Ok(sign_variations(chi.coeffs()))
}

/// `h` with `x^-d g(x) = h(x + 1/x)` for a self-reciprocal `g` of degree `2d`.
fn fold_reciprocal(g: &IntPoly) -> Result<IntPoly> {
    let c = g.coeffs();
    let two_d = c.len() - 1;
    if two_d % 2 == 1 || (0..=two_d).any(|k| c[k] != c[two_d - k]) {
        return Err(Error::InvalidInput(format!(
            "{g} is not self-reciprocal of even degree"
        )));
    }
    let d = two_d / 2;
    let y = IntPoly::from_i64s(&[0, 1]);
    // x^k + x^-k = D_k(y), D_0 = 2, D_1 = y, D_k = y D_{k-1} - D_{k-2}
    let mut dk = vec![IntPoly::from_i64s(&[2]), y.clone()];
    for k in 2..=d {
        let next = &(&y * &dk[k - 1]) - &dk[k - 2];
        dk.push(next);
    }
    let mut h = IntPoly::constant(c[d].clone());
    for k in 1..=d {
        h = &h + &dk[k].scale(&c[d + k]);
    }
    Ok(h)
}

/// Counts distinct roots inside, on and outside the unit circle, exactly.
///
/// Works on the squarefree part. Roots paired under `z -> 1/z` (including
/// all roots on the circle) are split off as `gcd(q, reciprocal(q))`; the
/// circle roots of that factor are real roots in `(-2, 2)` of its folded
/// form, and the rest pair one inside with one outside. The remaining
/// cofactor goes through the Schur-Cohn matrix.
pub fn unit_disk_count(p: &IntPoly) -> Result<DiskCount> {
    if p.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    let mut out = DiskCount::default();
    if p.degree() < 1 {
        return Ok(out);
    }
    let x = IntPoly::from_i64s(&[0, 1]);
    let mut q = p.squarefree_part();
    if q.coeff(0).is_zero() {
        out.inside += 1;
        q = q.div_exact(&x).expect("x divides");
    }
    let mut g = q.gcd(&q.reciprocal()).primitive_part();
    let rest = if g.degree() >= 1 {
        q.div_exact(&g).expect("gcd divides")
    } else {
        q
    };
    if g.degree() >= 1 {
        for r in [1i64, -1] {
            let lin = IntPoly::from_i64s(&[-r, 1]);
            if let Some(h) = g.div_exact(&lin) {
                out.on_circle += 1;
                g = h;
            }
        }
        let deg = g.degree().max(0) as usize;
        if deg > 0 {
            let h = fold_reciprocal(&g.primitive_part()).or_else(|_| fold_reciprocal(&-&g.primitive_part()))?;
            let two = BigRational::from(BigInt::from(2));
            let pairs = sturm_chain(&h).count(&-two.clone(), &two);
            out.on_circle += 2 * pairs;
            out.inside += (deg - 2 * pairs) / 2;
            out.outside += (deg - 2 * pairs) / 2;
        }
    }
    if rest.degree() >= 1 {
        let inside = schur_cohn_inside(&rest)?;
        out.inside += inside;
        out.outside += rest.degree() as usize - inside;
    }
    Ok(out)
}

/// `den^n p(r z)` for `r = num / den`, so roots scale by `1 / r`.
fn scale_roots(p: &IntPoly, r: &BigRational) -> IntPoly {
    let n = p.degree().max(0) as usize;
    let (num, den) = (r.numer(), r.denom());
    IntPoly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(k, a)| a * num.pow(k as u32) * den.pow((n - k) as u32))
            .collect(),
    )
}

/// Distinct roots with `|z| < r`, `|z| = r`, `|z| > r` for rational `r > 0`.
pub fn disk_count_radius(p: &IntPoly, r: &BigRational) -> Result<DiskCount> {
    if !r.is_positive() {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    unit_disk_count(&scale_roots(&p.squarefree_part(), r))
}

/// How a modulus enclosure was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusMethod {
    /// Product of all roots divided by the enclosed real roots.
    RootProduct,
    /// Bisection on the radius with exact disk counts.
    RadiusBisection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusEnclosure {
    pub interval: Interval,
    pub method: ModulusMethod,
}

/// Real roots of the squarefree part, each refined below `eps`.
fn refined_real_roots(q: &IntPoly, eps: &BigRational) -> Result<Vec<Interval>> {
    isolate_real_roots(q).iter().map(|i| refine_root(q, i, eps)).collect()
}

/// `|z|` for the single non-real conjugate pair of a polynomial of degree
/// at most 4, from `z zbar = (prod of roots) / (prod of real roots)`.
pub fn pair_modulus_by_product(p: &IntPoly, eps: &BigRational) -> Result<Option<Interval>> {
    let q = p.squarefree_part();
    let n = q.degree();
    if !(2..=4).contains(&n) || q.coeff(0).is_zero() {
        return Ok(None);
    }
    let real = sturm_chain(&q).count_all();
    if n as usize - real != 2 {
        return Ok(None);
    }
    let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let prod = BigRational::new(q.coeff(0) * sign, q.lead());
    let mut tol = eps.clone() / BigRational::from(BigInt::from(4));
    for _ in 0..64 {
        let roots = refined_real_roots(&q, &tol)?;
        let mut acc = Interval::point(BigRational::one());
        for r in &roots {
            acc = acc.mul(r);
        }
        if acc.lo().is_positive() || acc.hi().is_negative() {
            let sq = Interval::point(prod.clone()).mul(&acc.recip()?);
            if sq.lo().is_positive() {
                let m = sq.sqrt(eps.denom().bits() as u32 + 8)?;
                if m.width() < *eps {
                    return Ok(Some(m));
                }
            }
        }
        tol /= BigRational::from(BigInt::from(16));
    }
    Err(Error::InvalidInput(format!(
        "could not enclose the pair modulus of {p}"
    )))
}

/// Largest modulus among the non-real roots, enclosed to width below `eps`,
/// by bisecting on the radius with exact disk counts.
pub fn max_nonreal_modulus_bisect(p: &IntPoly, eps: &BigRational) -> Result<Option<Interval>> {
    let q = p.squarefree_part();
    if q.degree() < 2 {
        return Ok(None);
    }
    let chain = sturm_chain(&q);
    let nonreal = q.degree() as usize - chain.count_all();
    if nonreal == 0 {
        return Ok(None);
    }
    // non-real roots with |z| < r, and whether any lie on |z| = r
    let counts = |r: &BigRational| -> Result<(usize, usize)> {
        let d = disk_count_radius(&q, r)?;
        let neg = -r.clone();
        let mut real_in = chain.count(&neg, r);
        let on_pos = q.sign_at(r) == num_bigint::Sign::NoSign;
        let on_neg = q.sign_at(&neg) == num_bigint::Sign::NoSign;
        if on_pos {
            real_in -= 1;
        }
        let real_on = on_pos as usize + on_neg as usize;
        Ok((d.inside - real_in, d.on_circle - real_on))
    };
    let mut lo = BigRational::zero();
    let mut hi = BigRational::from(cauchy_bound(&q));
    let two = BigRational::from(BigInt::from(2));
    while &hi - &lo >= *eps {
        let mid = (&lo + &hi) / &two;
        let (inside, on) = counts(&mid)?;
        if inside == nonreal {
            hi = mid;
        } else if inside + on == nonreal {
            return Ok(Some(Interval::point(mid)));
        } else {
            lo = mid;
        }
    }
    Ok(Some(Interval::new(lo, hi)?))
}

/// Root-product identity when it applies, radius bisection otherwise.
pub fn max_nonreal_modulus(p: &IntPoly, eps: &BigRational) -> Result<Option<ModulusEnclosure>> {
    if let Some(i) = pair_modulus_by_product(p, eps)? {
        return Ok(Some(ModulusEnclosure {
            interval: i,
            method: ModulusMethod::RootProduct,
        }));
    }
    Ok(max_nonreal_modulus_bisect(p, eps)?.map(|i| ModulusEnclosure {
        interval: i,
        method: ModulusMethod::RadiusBisection,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn dc(inside: usize, on_circle: usize, outside: usize) -> DiskCount {
        DiskCount {
            inside,
            on_circle,
            outside,
        }
    }

    #[test]
    fn examples() {
        assert_eq!(unit_disk_count(&p(&[-2, -3, 1])).unwrap(), dc(1, 0, 1));
        assert_eq!(unit_disk_count(&p(&[-2, 0, -2, -2, 1])).unwrap(), dc(2, 0, 2));
        assert_eq!(unit_disk_count(&p(&[1, -1, 1])).unwrap(), dc(0, 2, 0));
        assert_eq!(unit_disk_count(&p(&[-1, 1])).unwrap(), dc(0, 1, 0));
        // (x - 2)(2x - 1)(x^2 + 1) x
        let f = &(&p(&[-2, 1]) * &p(&[-1, 2])) * &(&p(&[1, 0, 1]) * &p(&[0, 1]));
        assert_eq!(unit_disk_count(&f).unwrap(), dc(2, 2, 1));
        // repeated roots count once
        assert_eq!(unit_disk_count(&p(&[-3, 1]).pow(3)).unwrap(), dc(0, 0, 1));
    }

    #[test]
    fn char_poly_of_small_matrix() {
        let h = vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(2)],
        ];
        assert_eq!(char_poly(&h), p(&[3, -4, 1]));
    }

    #[test]
    fn pair_modulus_example() {
        // X^4 - 11X^3 - 10X - 11
        let f = p(&[-11, -10, 0, -11, 1]);
        let eps = BigRational::new(1.into(), 10_000.into());
        let a = pair_modulus_by_product(&f, &eps).unwrap().unwrap();
        let b = max_nonreal_modulus_bisect(&f, &eps).unwrap().unwrap();
        assert!(a.contains_f64(1.1908) && b.contains_f64(1.1908), "{a} {b}");
        assert!(a.lo() <= b.hi() && b.lo() <= a.hi());
    }

    #[test]
    fn circle_roots_of_scaled_polynomials() {
        // x^2 + 4 has |z| = 2 exactly
        let two = BigRational::from(BigInt::from(2));
        assert_eq!(disk_count_radius(&p(&[4, 0, 1]), &two).unwrap(), dc(0, 2, 0));
        let eps = BigRational::new(1.into(), 1000.into());
        let m = max_nonreal_modulus_bisect(&p(&[4, 0, 1]), &eps).unwrap().unwrap();
        assert!(m.contains(&two));
    }

    /// Integer factor `a x - b` or quadratic `x^2 + b x + c` with known counts.
    #[derive(Debug, Clone)]
    enum Factor {
        Linear(i64, i64),
        Quadratic(i64, i64),
    }

    fn factor_poly(f: &Factor) -> IntPoly {
        match *f {
            Factor::Linear(a, b) => p(&[-b, a]),
            Factor::Quadratic(b, c) => p(&[c, b, 1]),
        }
    }

    fn factor() -> impl Strategy<Value = Factor> {
        prop_oneof![
            (1i64..6, -12i64..12).prop_map(|(a, b)| Factor::Linear(a, b)),
            // complex pair when b^2 < 4c; modulus sqrt(c)
            (-3i64..4, 1i64..9)
                .prop_filter("complex", |(b, c)| b * b < 4 * c)
                .prop_map(|(b, c)| Factor::Quadratic(b, c)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]
        #[test]
        fn counts_match_constructed_roots(fs in prop::collection::vec(factor(), 1..5)) {
            let mut f = IntPoly::from_i64s(&[1]);
            let mut roots: Vec<(i64, i64)> = Vec::new(); // |z|^2 as a fraction, per distinct root
            let mut seen = Vec::new();
            for x in &fs {
                let g = factor_poly(x);
                if seen.iter().any(|s: &IntPoly| s.gcd(&g).degree() >= 1) {
                    continue;
                }
                seen.push(g.clone());
                f = &f * &g;
                match *x {
                    Factor::Linear(a, b) => roots.push((b * b, a * a)),
                    Factor::Quadratic(_, c) => { roots.push((c, 1)); roots.push((c, 1)); }
                }
            }
            let mut want = DiskCount::default();
            for (num, den) in roots {
                match num.cmp(&den) {
                    std::cmp::Ordering::Less => want.inside += 1,
                    std::cmp::Ordering::Equal => want.on_circle += 1,
                    std::cmp::Ordering::Greater => want.outside += 1,
                }
            }
            prop_assert_eq!(unit_disk_count(&f).unwrap(), want, "{}", f);
        }
    }
}
