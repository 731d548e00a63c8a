//! Exact arithmetic in the finite field `F_q` for small prime powers `q`.
//!
//! Elements are integers in `[0, q)` obtained by base-`p` packing of the
//! coefficients of a polynomial of degree `< e` over `F_p`.  All arithmetic
//! is table driven, sized for `q <= 256`.

use crate::Error;

pub type Elem = u16;

/// A finite field `F_q`, `q = p^e`, with lookup-table arithmetic.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    pub p: u16,
    pub e: u32,
    pub q: u16,
    /// Coefficients of the monic irreducible modulus, degree `e`,
    /// `modulus[i]` is the coefficient of `x^i` (so `modulus[e] == 1`).
    pub modulus: Vec<u16>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    conj: Option<Vec<Elem>>,
}

const MAX_Q: u32 = 256;

fn is_prime(p: u16) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u16;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Evaluate a polynomial over `F_p` at `x` (coefficients little-endian).
fn poly_eval(poly: &[u16], x: u16, p: u16) -> u16 {
    let mut acc = 0u32;
    for &c in poly.iter().rev() {
        acc = (acc * x as u32 + c as u32) % p as u32;
    }
    acc as u16
}

/// Remainder of polynomial division over `F_p`.
fn poly_rem(mut a: Vec<u16>, b: &[u16], p: u16) -> Vec<u16> {
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while a.len() > db {
        let la = a.len() - 1;
        let c = (a[la] as u32 * lead_inv as u32 % p as u32) as u16;
        if c != 0 {
            for i in 0..=db {
                let idx = la - db + i;
                let v = (a[idx] as u32 + p as u32 - c as u32 * b[i] as u32 % p as u32) % p as u32;
                a[idx] = v as u16;
            }
        }
        a.pop();
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        if a.iter().all(|&c| c == 0) {
            return vec![0];
        }
    }
    a
}

fn mod_inv(a: u16, p: u16) -> u16 {
    // p is a small prime; brute force is fine here.
    (1..p).find(|&x| (a as u32 * x as u32) % p as u32 == 1).expect("unit in F_p")
}

/// Irreducibility over `F_p` for the small degrees used here: a degree-e
/// polynomial is reducible iff it has a factor of degree `<= e/2`, and for
/// `e <= 3` a factor of degree 1 (a root) suffices.
fn is_irreducible(poly: &[u16], p: u16) -> bool {
    let e = poly.len() - 1;
    if e == 1 {
        return true;
    }
    for x in 0..p {
        if poly_eval(poly, x, p) == 0 {
            return false;
        }
    }
    if e <= 3 {
        return true;
    }
    // Trial division by all monic polynomials of degree 2..=e/2.
    for deg in 2..=e / 2 {
        let count = (p as u64).pow(deg as u32);
        for packed in 0..count {
            let mut div = Vec::with_capacity(deg + 1);
            let mut v = packed;
            for _ in 0..deg {
                div.push((v % p as u64) as u16);
                v /= p as u64;
            }
            div.push(1);
            let r = poly_rem(poly.to_vec(), &div, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn unpack(mut a: u32, p: u16, e: u32) -> Vec<u16> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push((a % p as u32) as u16);
        a /= p as u32;
    }
    out
}

fn pack(coeffs: &[u16], p: u16) -> u16 {
    let mut acc = 0u32;
    for &c in coeffs.iter().rev() {
        acc = acc * p as u32 + c as u32;
    }
    acc as u16
}

impl FieldCtx {
    /// Build `F_{p^e}`.  When `modulus` is `None` the lexicographically
    /// smallest irreducible monic of degree `e` is chosen, so canonical
    /// element encodings are reproducible across runs.
    pub fn new(p: u16, e: u32, modulus: Option<Vec<u16>>) -> Result<FieldCtx, Error> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::BadParameter("extension degree must be >= 1".into()));
        }
        let q = (p as u32).checked_pow(e).filter(|&q| q <= MAX_Q).ok_or(Error::FieldTooLarge)? as u16;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || *m.last().unwrap() % p != 1 {
                    return Err(Error::BadParameter("modulus must be monic of degree e".into()));
                }
                let m: Vec<u16> = m.iter().map(|&c| c % p).collect();
                if !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus);
                }
                m
            }
            None => Self::default_modulus(p, e),
        };

        let qe = q as usize;
        let mut add = vec![0 as Elem; qe * qe];
        let mut mul = vec![0 as Elem; qe * qe];
        let mut neg = vec![0 as Elem; qe];
        let mut inv = vec![0 as Elem; qe];

        for a in 0..q {
            let ca = unpack(a as u32, p, e);
            for b in 0..q {
                let cb = unpack(b as u32, p, e);
                let sum: Vec<u16> = ca.iter().zip(&cb).map(|(&x, &y)| (x + y) % p).collect();
                add[a as usize * qe + b as usize] = pack(&sum, p);

                let mut prod = vec![0u16; ca.len() + cb.len() - 1];
                for (i, &x) in ca.iter().enumerate() {
                    for (j, &y) in cb.iter().enumerate() {
                        prod[i + j] = ((prod[i + j] as u32 + x as u32 * y as u32) % p as u32) as u16;
                    }
                }
                let mut rem = poly_rem(prod, &modulus, p);
                rem.resize(e as usize, 0);
                mul[a as usize * qe + b as usize] = pack(&rem, p);
            }
            let cn: Vec<u16> = ca.iter().map(|&x| (p - x) % p).collect();
            neg[a as usize] = pack(&cn, p);
        }
        for a in 1..q {
            for b in 1..q {
                if mul[a as usize * qe + b as usize] == 1 {
                    inv[a as usize] = b;
                    break;
                }
            }
        }

        let mut ctx = FieldCtx { p, e, q, modulus, add, mul, neg, inv, conj: None };
        if e % 2 == 0 {
            let r = integer_sqrt(q);
            let conj: Vec<Elem> = (0..q).map(|a| ctx.pow(a, r as u64)).collect();
            ctx.conj = Some(conj);
        }
        Ok(ctx)
    }

    fn default_modulus(p: u16, e: u32) -> Vec<u16> {
        // Lexicographic order on (c_0, c_1, ..., c_{e-1}); packed order agrees.
        let count = (p as u64).pow(e);
        for packed in 0..count {
            let mut poly = Vec::with_capacity(e as usize + 1);
            let mut v = packed;
            for _ in 0..e {
                poly.push((v % p as u64) as u16);
                v /= p as u64;
            }
            poly.push(1);
            if is_irreducible(&poly, p) {
                return poly;
            }
        }
        unreachable!("an irreducible monic of every degree exists over F_p")
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, Error> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv[a as usize])
    }

    pub fn pow(&self, a: Elem, mut n: u64) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The involution `x -> x^sqrt(q)`; requires square `q`.
    pub fn conjugate(&self, a: Elem) -> Result<Elem, Error> {
        match &self.conj {
            Some(t) => Ok(t[a as usize]),
            None => Err(Error::NotSquareOrder(self.q)),
        }
    }

    pub fn has_conjugation(&self) -> bool {
        self.conj.is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }
}

fn integer_sqrt(q: u16) -> u16 {
    let r = (q as f64).sqrt().round() as u16;
    assert_eq!(r * r, q);
    r
}
