//! The Galois ring `O = R[x]/(f)` over `R = Z/p^e Z`, its residue field
//! `F_q = F_p[x]/(f mod p)`, the trace `O -> R`, and the factorization
//! `eta = zeta * u` of the class of `x` into a Teichmüller part and a
//! one-unit.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::polyfp;
use crate::ring::{Residue, RingCtx};

/// Element of `O` in the basis `1, eta, ..., eta^(n-1)` (lowest power first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OElem(pub Vec<Residue>);

/// Element of `F_q` in the basis `1, eta_bar, ..., eta_bar^(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqElem(pub Vec<u64>);

impl OElem {
    pub fn coeffs(&self) -> &[Residue] {
        &self.0
    }
}

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Whether this element lies in the prime field `F_p`.
    pub fn in_prime_field(&self) -> bool {
        self.0[1..].iter().all(|&c| c == 0)
    }
}

/// Arithmetic in `(Z/m Z)[x]/(g)` for monic `g`; shared by `O` and `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Quotient {
    modulus: u64,
    /// Monic, lowest power first, length `n + 1`.
    g: Vec<u64>,
}

impl Quotient {
    fn n(&self) -> usize {
        self.g.len() - 1
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.modulus - y) % self.modulus)
            .collect()
    }

    fn scale(&self, c: u64, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| c % self.modulus * x % self.modulus).collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.n();
        let m = self.modulus;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y % m) % m;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..n {
                let t = c * self.g[i] % m;
                prod[k - n + i] = (prod[k - n + i] + m - t) % m;
            }
        }
        prod.truncate(n);
        prod
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.n()];
        v[0] = 1 % self.modulus;
        v
    }

    fn pow(&self, a: &[u64], mut exp: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Context for `O = R[x]/(f)` with cached decomposition invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisCtx {
    ring: RingCtx,
    o: Quotient,
    fq: Quotient,
    q: u64,
    eta: OElem,
    zeta: OElem,
    u: OElem,
    delta_bar: FqElem,
    zeta_order: u64,
    basis_traces: Vec<Residue>,
}

/// Parses the shared polynomial text format: comma-separated integer
/// coefficients, highest degree first.
pub fn parse_coeff_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer `{}` in `{s}`", t.trim())))
        })
        .collect()
}

impl GaloisCtx {
    /// Builds `O` from a monic `f` given highest degree first (`[1, 1, -1]`
    /// is `x^2 + x - 1`). Coefficients are normalized mod `p^e`.
    pub fn new(ring: RingCtx, f_high_first: &[i64]) -> Result<Self> {
        let mut f: Vec<u64> = f_high_first.iter().rev().map(|&c| ring.reduce(c)).collect();
        while f.len() > 1 && f.last() == Some(&0) {
            f.pop();
        }
        if f.last() != Some(&1) {
            return Err(Error::NotMonic);
        }
        Self::from_monic(ring, f)
    }

    pub fn from_spec(ring: RingCtx, spec: &str) -> Result<Self> {
        Self::new(ring, &parse_coeff_list(spec)?)
    }

    /// `f_low_first` monic with canonical coefficients, lowest power first.
    pub fn from_monic(ring: RingCtx, f_low_first: Vec<u64>) -> Result<Self> {
        let n = f_low_first.len() - 1;
        if n < 2 {
            return Err(Error::DegreeTooSmall(n));
        }
        if f_low_first[n] != 1 {
            return Err(Error::NotMonic);
        }
        let p = ring.p();
        let fbar: Vec<u64> = f_low_first.iter().map(|c| c % p).collect();
        if !polyfp::is_irreducible(&fbar, p) {
            return Err(Error::ReducibleModP);
        }
        let o = Quotient {
            modulus: ring.modulus(),
            g: f_low_first,
        };
        let fq = Quotient { modulus: p, g: fbar };
        let q = p.pow(n as u32);

        let mut eta = vec![0; n];
        eta[1] = 1;
        let basis_traces = (0..n)
            .map(|j| {
                let mut basis = vec![0; n];
                basis[j] = 1;
                // Diagonal of the multiplication-by-eta^j matrix.
                (0..n).fold(0, |acc, i| {
                    let mut col = vec![0; n];
                    col[i] = 1;
                    ring.add(acc, o.mul(&basis, &col)[i])
                })
            })
            .collect();

        let mut ctx = Self {
            ring,
            o,
            fq,
            q,
            eta: OElem(eta),
            zeta: OElem(vec![0; n]),
            u: OElem(vec![0; n]),
            delta_bar: FqElem(vec![0; n]),
            zeta_order: 0,
            basis_traces,
        };
        let (zeta, u, delta_bar) = ctx.compute_decomposition()?;
        ctx.zeta = zeta;
        ctx.u = u;
        ctx.delta_bar = delta_bar;
        let eta_bar = ctx.reduce_mod_p(&ctx.eta);
        ctx.zeta_order = ctx.fq_order(&eta_bar);
        Ok(ctx)
    }

    pub fn ring(&self) -> &RingCtx {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn e(&self) -> u32 {
        self.ring.e()
    }

    /// Degree `n` of the extension.
    pub fn n(&self) -> usize {
        self.o.n()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Coefficients of `f`, lowest power first, canonical residues.
    pub fn f(&self) -> &[Residue] {
        &self.o.g
    }

    /// `f` in the shared text format (highest first, signed residues).
    pub fn f_spec(&self) -> String {
        self.o
            .g
            .iter()
            .rev()
            .map(|&c| self.ring.signed(c).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn eta(&self) -> &OElem {
        &self.eta
    }

    pub fn zeta(&self) -> &OElem {
        &self.zeta
    }

    pub fn u(&self) -> &OElem {
        &self.u
    }

    pub fn delta_bar(&self) -> &FqElem {
        &self.delta_bar
    }

    /// Multiplicative order of `zeta`, equal to the order of `eta_bar` in `F_q`.
    pub fn zeta_order(&self) -> u64 {
        self.zeta_order
    }

    /// `zeta` has order `q - 1` and `delta_bar != 0`.
    pub fn is_primitive(&self) -> bool {
        self.zeta_order == self.q - 1 && !self.delta_bar.is_zero()
    }

    /// `zeta` has order `q - 1` and `delta_bar` is outside `F_p`.
    pub fn is_strongly_primitive(&self) -> bool {
        self.zeta_order == self.q - 1 && !self.delta_bar.in_prime_field()
    }

    pub fn delta_sq_in_prime_field(&self) -> bool {
        self.fq_mul(&self.delta_bar, &self.delta_bar).in_prime_field()
    }

    /// `|O^x| = q^(e-1) (q - 1)`.
    pub fn unit_count(&self) -> u64 {
        self.q.pow(self.e() - 1) * (self.q - 1)
    }

    // ---- elements of O ----

    pub fn zero(&self) -> OElem {
        OElem(vec![0; self.n()])
    }

    pub fn one(&self) -> OElem {
        OElem(self.o.one())
    }

    pub fn from_residue(&self, a: Residue) -> OElem {
        let mut v = vec![0; self.n()];
        v[0] = a % self.ring.modulus();
        OElem(v)
    }

    /// Element from signed coefficients, lowest power first; missing
    /// entries are zero.
    pub fn elem(&self, low_first: &[i64]) -> Result<OElem> {
        if low_first.len() > self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: low_first.len(),
            });
        }
        let mut v = vec![0; self.n()];
        for (slot, &c) in v.iter_mut().zip(low_first) {
            *slot = self.ring.reduce(c);
        }
        Ok(OElem(v))
    }

    /// Parses an element written highest power of `eta` first, e.g. `3,13`
    /// for `3 eta + 13`.
    pub fn parse_elem(&self, s: &str) -> Result<OElem> {
        let mut c = parse_coeff_list(s)?;
        c.reverse();
        self.elem(&c)
    }

    /// Inverse of [`GaloisCtx::parse_elem`].
    pub fn elem_spec(&self, z: &OElem) -> String {
        z.0.iter()
            .rev()
            .map(|&c| self.ring.signed(c).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Element with the given index in the enumeration order used by
    /// [`GaloisCtx::elements`]: coefficient `j` is digit `j` base `p^e`.
    pub fn elem_from_index(&self, mut idx: u64) -> OElem {
        let m = self.ring.modulus();
        OElem(
            (0..self.n())
                .map(|_| {
                    let c = idx % m;
                    idx /= m;
                    c
                })
                .collect(),
        )
    }

    /// Inverse of [`GaloisCtx::elem_from_index`].
    pub fn elem_index(&self, z: &OElem) -> u64 {
        let m = self.ring.modulus();
        z.0.iter().rev().fold(0, |acc, &c| acc * m + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = OElem> + '_ {
        (0..self.ring.modulus().pow(self.n() as u32)).map(move |i| self.elem_from_index(i))
    }

    /// All units of `O` in enumeration order.
    pub fn units(&self) -> Vec<OElem> {
        self.elements().filter(|z| self.is_unit(z)).collect()
    }

    pub fn add(&self, a: &OElem, b: &OElem) -> OElem {
        OElem(self.o.add(&a.0, &b.0))
    }

    pub fn sub(&self, a: &OElem, b: &OElem) -> OElem {
        OElem(self.o.sub(&a.0, &b.0))
    }

    pub fn neg(&self, a: &OElem) -> OElem {
        self.sub(&self.zero(), a)
    }

    pub fn scale(&self, c: Residue, a: &OElem) -> OElem {
        OElem(self.o.scale(c, &a.0))
    }

    pub fn mul(&self, a: &OElem, b: &OElem) -> OElem {
        OElem(self.o.mul(&a.0, &b.0))
    }

    pub fn pow(&self, a: &OElem, exp: u64) -> OElem {
        OElem(self.o.pow(&a.0, exp))
    }

    pub fn is_unit(&self, a: &OElem) -> bool {
        !self.reduce_mod_p(a).is_zero()
    }

    pub fn inv(&self, a: &OElem) -> Result<OElem> {
        if !self.is_unit(a) {
            return Err(Error::NotUnit);
        }
        Ok(self.pow(a, self.unit_count() - 1))
    }

    /// Multiplicative order of a unit of `O`.
    pub fn order(&self, a: &OElem) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::NotUnit);
        }
        let one = self.one();
        Ok(arith::element_order(a, self.unit_count(), |x, k| self.pow(x, k), |x| *x == one))
    }

    /// Coefficientwise `z / p`; fails unless every coefficient is divisible.
    pub fn div_p(&self, z: &OElem) -> Result<OElem> {
        let p = self.p();
        z.0.iter()
            .map(|&c| {
                if c % p == 0 {
                    Ok(c / p)
                } else {
                    Err(Error::NotDivisibleByP(c))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(OElem)
    }

    pub fn reduce_mod_p(&self, z: &OElem) -> FqElem {
        FqElem(z.0.iter().map(|c| c % self.p()).collect())
    }

    /// `tr(z)`, the trace of the multiplication-by-`z` matrix.
    pub fn trace(&self, z: &OElem) -> Residue {
        z.0.iter()
            .zip(&self.basis_traces)
            .fold(0, |acc, (&c, &t)| self.ring.add(acc, self.ring.mul(c, t)))
    }

    /// Traces of the basis elements `1, eta, ..., eta^(n-1)`.
    pub fn basis_traces(&self) -> &[Residue] {
        &self.basis_traces
    }

    /// `(zeta, u, delta_bar)` with `zeta = eta^(q^(e-1))`, `u = eta / zeta`
    /// and `delta_bar = (u - 1)/p mod p`.
    pub fn decompose(&self) -> (OElem, OElem, FqElem) {
        (self.zeta.clone(), self.u.clone(), self.delta_bar.clone())
    }

    fn compute_decomposition(&self) -> Result<(OElem, OElem, FqElem)> {
        let zeta = self.pow(&self.eta, self.q.pow(self.e() - 1));
        let zeta_inv = self.pow(&zeta, self.q - 2);
        let u = self.mul(&self.eta, &zeta_inv);
        let delta = self.div_p(&self.sub(&u, &self.one()))?;
        let delta_bar = self.reduce_mod_p(&delta);
        Ok((zeta, u, delta_bar))
    }

    // ---- residue field F_q ----

    pub fn fq_zero(&self) -> FqElem {
        FqElem(vec![0; self.n()])
    }

    pub fn fq_one(&self) -> FqElem {
        FqElem(self.fq.one())
    }

    pub fn fq_from_prime(&self, c: u64) -> FqElem {
        let mut v = vec![0; self.n()];
        v[0] = c % self.p();
        FqElem(v)
    }

    pub fn fq_from_index(&self, mut idx: u64) -> FqElem {
        let p = self.p();
        FqElem(
            (0..self.n())
                .map(|_| {
                    let c = idx % p;
                    idx /= p;
                    c
                })
                .collect(),
        )
    }

    /// All `q` elements of `F_q`.
    pub fn fq_elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(move |i| self.fq_from_index(i))
    }

    pub fn fq_add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.fq.add(&a.0, &b.0))
    }

    pub fn fq_sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.fq.sub(&a.0, &b.0))
    }

    pub fn fq_scale(&self, c: u64, a: &FqElem) -> FqElem {
        FqElem(self.fq.scale(c, &a.0))
    }

    pub fn fq_mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.fq.mul(&a.0, &b.0))
    }

    pub fn fq_pow(&self, a: &FqElem, exp: u64) -> FqElem {
        FqElem(self.fq.pow(&a.0, exp))
    }

    pub fn fq_inv(&self, a: &FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::NotUnit);
        }
        Ok(self.fq_pow(a, self.q - 2))
    }

    /// Field trace `F_q -> F_p`.
    pub fn fq_trace(&self, a: &FqElem) -> u64 {
        let p = self.p();
        a.0.iter()
            .zip(&self.basis_traces)
            .fold(0, |acc, (&c, &t)| (acc + c * (t % p)) % p)
    }

    pub fn fq_order(&self, a: &FqElem) -> u64 {
        let one = self.fq_one();
        arith::element_order(a, self.q - 1, |x, k| self.fq_pow(x, k), |x| *x == one)
    }

    /// `{tr(gamma z) : tr(z) = a, z in F_q^x}` by exhaustive iteration.
    pub fn trace_shift_set(&self, gamma_bar: &FqElem, a_bar: u64) -> BTreeSet<u64> {
        let a_bar = a_bar % self.p();
        self.fq_elements()
            .filter(|z| !z.is_zero() && self.fq_trace(z) == a_bar)
            .map(|z| self.fq_trace(&self.fq_mul(gamma_bar, &z)))
            .collect()
    }

    /// The closed-form four-case table for [`GaloisCtx::trace_shift_set`].
    pub fn trace_shift_table(&self, gamma_bar: &FqElem, a_bar: u64) -> BTreeSet<u64> {
        let p = self.p();
        let a_bar = a_bar % p;
        if gamma_bar.in_prime_field() {
            BTreeSet::from([gamma_bar.0[0] * a_bar % p])
        } else if a_bar != 0 || self.n() >= 3 {
            (0..p).collect()
        } else {
            (1..p).collect()
        }
    }

    /// Finds `z` in the orbit `{alpha eta^t}` with `tr(z) = a` and
    /// `z mod p = nu`, by lifting one `p`-adic digit at a time along powers
    /// of `u`.
    pub fn lift_in_orbit(&self, alpha: &OElem, a: Residue, nu: &FqElem) -> Result<OElem> {
        if !self.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        if !self.is_unit(alpha) {
            return Err(Error::Precondition("alpha is not a unit".into()));
        }
        if nu.is_zero() {
            return Err(Error::Precondition("nu is zero".into()));
        }
        let p = self.p();
        let a = a % self.ring.modulus();
        if self.fq_trace(nu) != a % p {
            return Err(Error::Precondition("tr(nu) != a mod p".into()));
        }
        let slope = self.fq_trace(&self.fq_mul(&self.delta_bar, nu));
        if slope == 0 {
            return Err(Error::Precondition("tr(delta_bar nu) = 0".into()));
        }
        let slope_inv = arith::mod_inv(slope, p).unwrap();

        let eta_bar = self.reduce_mod_p(&self.eta);
        let mut w = self.reduce_mod_p(alpha);
        let mut t = 0u64;
        while w != *nu {
            w = self.fq_mul(&w, &eta_bar);
            t += 1;
            if t >= self.q - 1 {
                return Err(Error::Precondition("nu is not in the orbit of alpha_bar".into()));
            }
        }
        let mut z = self.mul(alpha, &self.pow(&self.eta, t));
        for i in 1..self.e() {
            let pi = self.ring.p_pow(i);
            let diff = self.ring.sub(a, self.trace(&z));
            debug_assert_eq!(diff % pi, 0);
            let k = (diff / pi) % p * slope_inv % p;
            if k != 0 {
                z = self.mul(&z, &self.pow(&self.u, self.ring.p_pow(i - 1) * k));
            }
        }
        debug_assert_eq!(self.trace(&z), a);
        Ok(z)
    }

    /// Human-readable rendering such as `3*eta + 13`.
    pub fn display<'a>(&self, z: &'a OElem) -> impl fmt::Display + 'a {
        DisplayElem { z }
    }
}

struct DisplayElem<'a> {
    z: &'a OElem,
}

impl fmt::Display for DisplayElem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .z
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| match j {
                0 => c.to_string(),
                1 if c == 1 => "eta".to_string(),
                1 => format!("{c}*eta"),
                _ if c == 1 => format!("eta^{j}"),
                _ => format!("{c}*eta^{j}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
