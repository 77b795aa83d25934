//! Dense polynomials over small prime fields, just enough for
//! distinct-degree factorization.

type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|k| {
                let x = a.get(k).copied().unwrap_or(0);
                let y = b.get(k).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mul_mod(r[top], inv, p);
        if c != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p - mul_mod(c, mc, p)) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn div(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    if r.len() <= dm {
        return Vec::new();
    }
    let inv = inv_mod(m[dm], p);
    let mut q = vec![0u64; r.len() - dm];
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mul_mod(r[top], inv, p);
        q[top - dm] = c;
        if c != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p - mul_mod(c, mc, p)) % p;
            }
        }
        r.pop();
    }
    trim(q)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        a.iter_mut().for_each(|c| *c = mul_mod(*c, inv, p));
    }
    a
}

fn pow_x_mod(base: &[u64], e: u64, m: &[u64], p: u64) -> Poly {
    let mut result: Poly = vec![1];
    let mut b = rem(base, m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

/// Degrees of the irreducible factors of a squarefree monic polynomial
/// modulo `p` (coefficients already reduced, constant term first).
pub(crate) fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut f = trim(f.to_vec());
    let mut degrees = Vec::new();
    let x: Poly = vec![0, 1];
    let mut h = x.clone();
    let mut k = 1usize;
    while f.len() > 1 {
        if 2 * k > f.len() - 1 {
            degrees.push(f.len() - 1);
            break;
        }
        h = pow_x_mod(&h, p, &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        let dg = g.len().saturating_sub(1);
        if dg > 0 {
            degrees.extend(std::iter::repeat_n(k, dg / k));
            f = div(&f, &g, p);
            h = rem(&h, &f, p);
        }
        k += 1;
    }
    degrees
}

/// Whether `f` stays squarefree modulo `p`.
pub(crate) fn is_squarefree(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let df: Poly = trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| mul_mod(c, k as u64 % p, p))
            .collect(),
    );
    if df.is_empty() {
        return false;
    }
    gcd(&f, &df, p).len() == 1
}

/// Subset sums of a degree multiset.
pub(crate) fn achievable_degrees(degrees: &[usize]) -> Vec<bool> {
    let total: usize = degrees.iter().sum();
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=total).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}
