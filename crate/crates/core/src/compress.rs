//! Compressing maps `psi: R -> Sigma` and the coordinate-polynomial view of
//! maps `R -> F_p`, where `a = a_0 + a_1 p + ... + a_{e-1} p^(e-1)` is read
//! as the point `(a_0, ..., a_{e-1})` of `F_p^e`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::ring::{Residue, RingCtx};
use crate::sequences::{Alphabet, PeriodicSequence};

/// A polynomial over `F_p` in `nvars` variables, reduced so that every
/// exponent is below `p` (so it is determined by its values on `F_p^nvars`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoordPoly {
    p: u64,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u64>,
}

/// `x^k` and `x^reduce_exponent(k)` agree on `F_p`.
fn reduce_exponent(k: u32, p: u64) -> u32 {
    if (k as u64) < p {
        k
    } else {
        ((k as u64 - 1) % (p - 1) + 1) as u32
    }
}

impl CoordPoly {
    pub fn zero(p: u64, nvars: usize) -> Self {
        Self {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u64, nvars: usize, c: i64) -> Self {
        Self::from_terms(p, nvars, [(vec![0; nvars], c)])
    }

    /// The variable `x_i`.
    pub fn var(p: u64, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable x{i} out of range");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self::from_terms(p, nvars, [(exps, 1)])
    }

    /// Univariate polynomial from coefficients, lowest degree first.
    pub fn univariate(p: u64, coeffs: &[i64]) -> Self {
        Self::from_terms(p, 1, coeffs.iter().enumerate().map(|(k, &c)| (vec![k as u32], c)))
    }

    /// Sums the given terms, reducing exponents and coefficients mod `p`.
    pub fn from_terms(p: u64, nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, i64)>) -> Self {
        let mut out = Self::zero(p, nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length");
            let exps: Vec<u32> = exps.into_iter().map(|k| reduce_exponent(k, p)).collect();
            out.add_term(exps, c.rem_euclid(p as i64) as u64);
        }
        out
    }

    fn add_term(&mut self, exps: Vec<u32>, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(exps).or_insert(0);
        *entry = (*entry + c) % self.p;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.p, self.nvars), (other.p, other.nvars));
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.p, self.nvars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), self.p - c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.p, self.nvars), (other.p, other.nvars));
        let mut out = Self::zero(self.p, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let exps = ea
                    .iter()
                    .zip(eb)
                    .map(|(a, b)| reduce_exponent(a + b, self.p))
                    .collect();
                out.add_term(exps, ca * cb % self.p);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.p, self.nvars, 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to
    /// `mapping[i]`.
    pub fn embed(&self, nvars: usize, mapping: &[usize]) -> Self {
        assert_eq!(mapping.len(), self.nvars);
        let mut out = Self::zero(self.p, nvars);
        for (e, &c) in &self.terms {
            let mut exps = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                exps[mapping[i]] += k;
            }
            let exps = exps.into_iter().map(|k| reduce_exponent(k, self.p)).collect();
            out.add_term(exps, c);
        }
        out
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        debug_assert_eq!(point.len(), self.nvars);
        let p = self.p;
        self.terms.iter().fold(0, |acc, (e, &c)| {
            let m = e
                .iter()
                .zip(point)
                .fold(c, |m, (&k, &x)| m * arith::mod_pow(x, k as u64, p) % p);
            (acc + m) % p
        })
    }

    /// Point number `idx` of `F_p^nvars`, little-endian base `p`.
    pub fn point(p: u64, nvars: usize, mut idx: u64) -> Vec<u64> {
        (0..nvars)
            .map(|_| {
                let d = idx % p;
                idx /= p;
                d
            })
            .collect()
    }

    /// Values at every point of `F_p^nvars`, in [`CoordPoly::point`] order.
    pub fn values(&self) -> Vec<u64> {
        let count = self.p.pow(self.nvars as u32);
        (0..count).map(|i| self.eval(&Self::point(self.p, self.nvars, i))).collect()
    }

    /// Whether the polynomial vanishes at every point satisfying `pred`.
    pub fn vanishes_where(&self, pred: impl Fn(&[u64]) -> bool) -> bool {
        let count = self.p.pow(self.nvars as u32);
        (0..count)
            .map(|i| Self::point(self.p, self.nvars, i))
            .filter(|pt| pred(pt))
            .all(|pt| self.eval(&pt) == 0)
    }

    /// `(x_0^(p-1) - 1)` divides `self`, decided by evaluation.
    pub fn divisible_by_x0_unit_vanisher(&self) -> bool {
        self.vanishes_where(|pt| pt[0] != 0)
    }

    /// `x_0` divides `self`, decided by evaluation.
    pub fn divisible_by_x0(&self) -> bool {
        self.vanishes_where(|pt| pt[0] == 0)
    }

    /// The unique reduced polynomial with the given values (one per point,
    /// in [`CoordPoly::point`] order).
    pub fn interpolate(p: u64, nvars: usize, values: &[u64]) -> Self {
        let count = p.pow(nvars as u32) as usize;
        assert_eq!(values.len(), count, "one value per point");
        let vinv = inverse_vandermonde(p);
        let mut coeffs: Vec<u64> = values.iter().map(|v| v % p).collect();
        let mut stride = 1usize;
        for _ in 0..nvars {
            let mut next = vec![0u64; count];
            for base in 0..count {
                if !(base / stride).is_multiple_of(p as usize) {
                    continue;
                }
                for k in 0..p as usize {
                    let mut acc = 0;
                    for a in 0..p as usize {
                        acc = (acc + vinv[k][a] * coeffs[base + a * stride]) % p;
                    }
                    next[base + k * stride] = acc;
                }
            }
            coeffs = next;
            stride *= p as usize;
        }
        let terms = coeffs.iter().enumerate().map(|(idx, &c)| {
            let exps = Self::point(p, nvars, idx as u64).into_iter().map(|k| k as u32).collect();
            (exps, c as i64)
        });
        Self::from_terms(p, nvars, terms)
    }

    /// Parses an expression over `x0, ..., x{nvars-1}` using integers, `+`,
    /// `-`, `*`, `^` and parentheses; coefficients are reduced mod `p`.
    pub fn parse(p: u64, nvars: usize, s: &str) -> Result<Self> {
        let mut parser = PolyParser {
            p,
            nvars,
            src: s.as_bytes(),
            pos: 0,
        };
        let poly = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(Error::Parse(format!("unexpected input at offset {} in `{s}`", parser.pos)));
        }
        Ok(poly)
    }
}

impl fmt::Display for CoordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            match (c, vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                _ => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Rows `k`, columns `a`: coefficient `c_k = sum_a vinv[k][a] v(a)`.
fn inverse_vandermonde(p: u64) -> Vec<Vec<u64>> {
    let n = p as usize;
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|a| {
            let mut row: Vec<u64> = (0..n).map(|k| arith::mod_pow(a as u64, k as u64, p)).collect();
            row.extend((0..n).map(|j| (j == a) as u64));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col] != 0).expect("Vandermonde rows are independent");
        m.swap(col, pivot);
        let inv = arith::mod_inv(m[col][col], p).unwrap();
        for x in m[col].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && row[col] != 0 {
                let factor = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - factor * y % p) % p;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

struct PolyParser<'a> {
    p: u64,
    nvars: usize,
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err("expected a number"))
    }

    fn expr(&mut self) -> Result<CoordPoly> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CoordPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CoordPoly> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                inner
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.number()? as usize;
                if i >= self.nvars {
                    return Err(self.err(&format!("variable x{i} out of range (nvars = {})", self.nvars)));
                }
                CoordPoly::var(self.p, self.nvars, i)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                CoordPoly::constant(self.p, self.nvars, (v % self.p) as i64)
            }
            _ => return Err(self.err("expected a factor")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.number()?;
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }
}

/// How a map was built.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Provenance {
    Table,
    Poly { expr: String },
    Modular { m: u64 },
    /// `f0(x_{e-1}) f1 + f2`; entropy-preserving for strongly primitive `f`.
    Str { f0: String, f1: String, f2: String },
    /// `x_{e-1}^ell f1 + f2`, `2 <= ell < p`.
    WeakPow { ell: u32, f1: String, f2: String },
    /// `x_{e-1} (g0(x_k) + g1) + f2`.
    WeakLin { k: usize, g0: String, g1: String, f2: String },
}

/// A map `R -> {0, ..., alphabet - 1}` stored as a dense table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompressingMap {
    ring: RingCtx,
    table: Vec<u32>,
    alphabet: u32,
    provenance: Option<Provenance>,
}

impl CompressingMap {
    /// `alphabet` defaults to one more than the largest label.
    pub fn from_table(ring: RingCtx, table: Vec<u32>, alphabet: Option<u32>) -> Result<Self> {
        if table.len() as u64 != ring.modulus() {
            return Err(Error::LengthMismatch {
                expected: ring.modulus() as usize,
                got: table.len(),
            });
        }
        let needed = table.iter().max().map_or(1, |m| m + 1);
        let alphabet = alphabet.unwrap_or(needed);
        if needed > alphabet {
            return Err(Error::Precondition(format!("label {} outside alphabet of size {alphabet}", needed - 1)));
        }
        Ok(Self {
            ring,
            table,
            alphabet,
            provenance: Some(Provenance::Table),
        })
    }

    pub fn identity(ring: RingCtx) -> Self {
        Self {
            ring,
            table: (0..ring.modulus() as u32).collect(),
            alphabet: ring.modulus() as u32,
            provenance: None,
        }
    }

    pub fn constant(ring: RingCtx, label: u32) -> Self {
        Self {
            ring,
            table: vec![label; ring.modulus() as usize],
            alphabet: label + 1,
            provenance: None,
        }
    }

    /// `table[a] = poly(digits(a))`; `poly` must have `e` variables.
    pub fn from_poly(ring: RingCtx, poly: &CoordPoly) -> Result<Self> {
        if poly.nvars() != ring.e() as usize || poly.p() != ring.p() {
            return Err(Error::Precondition(format!(
                "polynomial over F_{} in {} variables does not match Z/{}^{}",
                poly.p(),
                poly.nvars(),
                ring.p(),
                ring.e()
            )));
        }
        let table = (0..ring.modulus()).map(|a| poly.eval(&ring.digits(a)) as u32).collect();
        Ok(Self {
            ring,
            table,
            alphabet: ring.p() as u32,
            provenance: Some(Provenance::Poly { expr: poly.to_string() }),
        })
    }

    pub fn ring(&self) -> &RingCtx {
        &self.ring
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    #[inline]
    pub fn eval(&self, a: Residue) -> u32 {
        self.table[a as usize]
    }

    /// Whether the map takes a single value on `set`.
    pub fn is_constant_on(&self, set: &[Residue]) -> bool {
        set.windows(2).all(|w| self.eval(w[0]) == self.eval(w[1]))
    }

    /// Raw table format `t:v0,v1,...`.
    pub fn to_spec(&self) -> String {
        let vals: Vec<String> = self.table.iter().map(|v| v.to_string()).collect();
        format!("t:{}", vals.join(","))
    }

    /// Parses `t:v0,...`, `mod:M`, or a coordinate polynomial expression
    /// (optionally prefixed by `poly:`).
    pub fn parse(ring: RingCtx, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("t:") {
            let table = rest
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad label `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            Self::from_table(ring, table, None)
        } else if let Some(rest) = spec.strip_prefix("mod:") {
            let m = rest
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad modulus `{rest}`")))?;
            modular_map(ring, m)
        } else {
            let expr = spec.strip_prefix("poly:").unwrap_or(spec);
            let poly = CoordPoly::parse(ring.p(), ring.e() as usize, expr)?;
            Self::from_poly(ring, &poly)
        }
    }
}

/// `psi(a) = a mod M` on canonical representatives.
pub fn modular_map(ring: RingCtx, m: u64) -> Result<CompressingMap> {
    if m < 2 {
        return Err(Error::Hypothesis {
            name: "M >= 2",
            detail: format!("M = {m}"),
        });
    }
    if arith::is_power_of(m, ring.p()) {
        return Err(Error::Hypothesis {
            name: "M not a power of p",
            detail: format!("M = {m} is a power of {}", ring.p()),
        });
    }
    if m > u32::MAX as u64 {
        return Err(Error::Hypothesis {
            name: "M fits a label",
            detail: format!("M = {m}"),
        });
    }
    Ok(CompressingMap {
        ring,
        table: (0..ring.modulus()).map(|a| (a % m) as u32).collect(),
        alphabet: m as u32,
        provenance: Some(Provenance::Modular { m }),
    })
}

fn check_shape(poly: &CoordPoly, ring: &RingCtx, nvars: usize, name: &'static str) -> Result<()> {
    if poly.p() != ring.p() || poly.nvars() != nvars {
        return Err(Error::Hypothesis {
            name,
            detail: format!("expected a polynomial over F_{} in {nvars} variables", ring.p()),
        });
    }
    Ok(())
}

/// Evaluates `top(x_{e-1}) * f1(x_0..x_{e-2}) + f2(x_0..x_{e-2})` on `R`.
fn top_digit_family(ring: RingCtx, top: impl Fn(u64) -> u64, f1: &CoordPoly, f2: &CoordPoly) -> Vec<u32> {
    let p = ring.p();
    let e = ring.e() as usize;
    (0..ring.modulus())
        .map(|a| {
            let d = ring.digits(a);
            let low = &d[..e - 1];
            ((top(d[e - 1]) * f1.eval(low) + f2.eval(low)) % p) as u32
        })
        .collect()
}

/// `psi = f0(x_{e-1}) f1(x_0..x_{e-2}) + f2(x_0..x_{e-2})`.
///
/// Checks `1 <= deg f0 < p`, `(x_0^(p-1) - 1) ∤ f1` and `f1(0, ..., 0) != 0`.
/// The map is entropy-preserving when `f` is strongly primitive.
pub fn family_str(ring: RingCtx, f0: &CoordPoly, f1: &CoordPoly, f2: &CoordPoly) -> Result<CompressingMap> {
    let low = ring.e() as usize - 1;
    check_shape(f0, &ring, 1, "f0 univariate")?;
    check_shape(f1, &ring, low, "f1 in x_0..x_{e-2}")?;
    check_shape(f2, &ring, low, "f2 in x_0..x_{e-2}")?;
    if f0.degree().unwrap_or(0) < 1 {
        return Err(Error::Hypothesis {
            name: "1 <= deg f0 < p",
            detail: format!("f0 = {f0}"),
        });
    }
    if f1.divisible_by_x0_unit_vanisher() {
        return Err(Error::Hypothesis {
            name: "(x_0^(p-1) - 1) does not divide f1",
            detail: format!("f1 = {f1} vanishes whenever x_0 != 0"),
        });
    }
    if f1.eval(&vec![0; low]) == 0 {
        return Err(Error::Hypothesis {
            name: "f1(0, ..., 0) != 0",
            detail: format!("f1 = {f1}"),
        });
    }
    let table = top_digit_family(ring, |x| f0.eval(&[x]), f1, f2);
    Ok(CompressingMap {
        ring,
        table,
        alphabet: ring.p() as u32,
        provenance: Some(Provenance::Str {
            f0: f0.to_string(),
            f1: f1.to_string(),
            f2: f2.to_string(),
        }),
    })
}

/// Parameters of the `x_{e-1}^ell f1 + f2` family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakParams {
    /// `2 <= ell < p`, `(x_0^(p-1) - 1) ∤ f1`, `x_0 ∤ f1`.
    Pow { ell: u32, f1: CoordPoly, f2: CoordPoly },
    /// `ell = 1` and `f1 = g0(x_k) + g1(x_0..x_{k-1})` with `0 <= k <= e-2`.
    /// `g0` is univariate and `g1` has `k` variables (zero when `k = 0`).
    Lin { k: usize, g0: CoordPoly, g1: CoordPoly, f2: CoordPoly },
}

/// Degree of a univariate `g` reduced mod `x^(p-1) - 1`, i.e. as a function
/// on `F_p^x`.
fn unit_degree(g: &CoordPoly) -> u32 {
    let p = g.p();
    let folded: Vec<i64> = (0..p - 1)
        .map(|j| {
            g.terms()
                .filter(|(e, _)| e[0] as u64 % (p - 1) == j)
                .map(|(_, c)| c as i64)
                .sum()
        })
        .collect();
    CoordPoly::univariate(p, &folded).degree().unwrap_or(0)
}

pub fn family_weak(ring: RingCtx, params: &WeakParams) -> Result<CompressingMap> {
    let p = ring.p();
    let low = ring.e() as usize - 1;
    match params {
        WeakParams::Pow { ell, f1, f2 } => {
            check_shape(f1, &ring, low, "f1 in x_0..x_{e-2}")?;
            check_shape(f2, &ring, low, "f2 in x_0..x_{e-2}")?;
            if *ell < 2 || *ell as u64 >= p {
                return Err(Error::Hypothesis {
                    name: "2 <= ell < p",
                    detail: format!("ell = {ell}"),
                });
            }
            if f1.divisible_by_x0_unit_vanisher() {
                return Err(Error::Hypothesis {
                    name: "(x_0^(p-1) - 1) does not divide f1",
                    detail: format!("f1 = {f1} vanishes whenever x_0 != 0"),
                });
            }
            if f1.divisible_by_x0() {
                return Err(Error::Hypothesis {
                    name: "x_0 does not divide f1",
                    detail: format!("f1 = {f1} vanishes whenever x_0 = 0"),
                });
            }
            let ell = *ell as u64;
            let table = top_digit_family(ring, |x| arith::mod_pow(x, ell, p), f1, f2);
            Ok(CompressingMap {
                ring,
                table,
                alphabet: p as u32,
                provenance: Some(Provenance::WeakPow {
                    ell: ell as u32,
                    f1: f1.to_string(),
                    f2: f2.to_string(),
                }),
            })
        }
        WeakParams::Lin { k, g0, g1, f2 } => {
            let k = *k;
            if k + 1 > low {
                return Err(Error::Hypothesis {
                    name: "0 <= k <= e-2",
                    detail: format!("k = {k}, e = {}", ring.e()),
                });
            }
            check_shape(g0, &ring, 1, "g0 univariate")?;
            check_shape(g1, &ring, k, "g1 in x_0..x_{k-1}")?;
            check_shape(f2, &ring, low, "f2 in x_0..x_{e-2}")?;
            let deg = g0.degree();
            if k == 0 {
                if !g1.is_zero() {
                    return Err(Error::Hypothesis {
                        name: "g1 = 0 when k = 0",
                        detail: format!("g1 = {g1}"),
                    });
                }
                if g0.divisible_by_x0_unit_vanisher() {
                    return Err(Error::Hypothesis {
                        name: "(x_0^(p-1) - 1) does not divide g0",
                        detail: format!("g0 = {g0}"),
                    });
                }
                if g0.divisible_by_x0() {
                    return Err(Error::Hypothesis {
                        name: "x_0 does not divide g0",
                        detail: format!("g0 = {g0}"),
                    });
                }
            } else if deg.unwrap_or(0) < 1 {
                return Err(Error::Hypothesis {
                    name: "1 <= deg g0 < p",
                    detail: format!("g0 = {g0}"),
                });
            }
            let deg = deg.expect("g0 is nonzero here") as u64;
            if arith::gcd(p - 1, deg + 1) != 1 {
                return Err(Error::Hypothesis {
                    name: "gcd(p-1, deg g0 + 1) = 1",
                    detail: format!("gcd({}, {}) = {}", p - 1, deg + 1, arith::gcd(p - 1, deg + 1)),
                });
            }
            // With k = 0 only unit values of x_0 matter, where x^(p-1) = 1.
            if k == 0 {
                let unit_deg = unit_degree(g0) as u64;
                if arith::gcd(p - 1, unit_deg + 1) != 1 {
                    return Err(Error::Hypothesis {
                        name: "gcd(p-1, deg (g0 mod x_0^(p-1) - 1) + 1) = 1 when k = 0",
                        detail: format!("g0 = {g0} has degree {unit_deg} on F_p^x"),
                    });
                }
            }
            let f1 = g0.embed(low, &[k]).add(&g1.embed(low, &(0..k).collect::<Vec<_>>()));
            let table = top_digit_family(ring, |x| x, &f1, f2);
            Ok(CompressingMap {
                ring,
                table,
                alphabet: p as u32,
                provenance: Some(Provenance::WeakLin {
                    k,
                    g0: g0.to_string(),
                    g1: g1.to_string(),
                    f2: f2.to_string(),
                }),
            })
        }
    }
}

/// Pointwise application `Phi_psi(s) = psi o s`.
pub fn apply(map: &CompressingMap, seq: &PeriodicSequence) -> Result<PeriodicSequence> {
    match seq.alphabet() {
        Alphabet::Ring(r) if r == map.ring => {}
        other => {
            return Err(Error::RingMismatch {
                map: map.ring.modulus(),
                seq: other.size(),
            })
        }
    }
    let samples = seq.samples().iter().map(|&v| map.eval(v) as u64).collect();
    Ok(PeriodicSequence::new(Alphabet::Labels(map.alphabet), samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::GaloisCtx;
    use crate::sequences::trace_sequence;

    fn ring(p: u64, e: u32) -> RingCtx {
        RingCtx::new(p, e).unwrap()
    }

    #[test]
    fn from_poly_examples() {
        let r = ring(3, 3);
        let psi = CompressingMap::parse(r, "x2^2 + x2").unwrap();
        assert_eq!(psi.eval(13), 2);
        let zero = CompressingMap::from_poly(r, &CoordPoly::zero(3, 3)).unwrap();
        assert!(zero.table().iter().all(|&v| v == 0));
        let r = ring(3, 2);
        let top = CompressingMap::parse(r, "x1").unwrap();
        assert_eq!(top.eval(7), 2);
    }

    #[test]
    fn modular_examples() {
        let r = ring(3, 2);
        assert_eq!(modular_map(r, 2).unwrap().eval(7), 1);
        for m in [3, 9] {
            assert!(matches!(modular_map(r, m), Err(Error::Hypothesis { name: "M not a power of p", .. })));
        }
        assert!(matches!(modular_map(r, 1), Err(Error::Hypothesis { name: "M >= 2", .. })));
        assert_eq!(CompressingMap::parse(r, "mod:4").unwrap().alphabet(), 4);
    }

    #[test]
    fn family_str_examples() {
        let r = ring(3, 3);
        let one = CoordPoly::constant(3, 2, 1);
        let zero = CoordPoly::zero(3, 2);
        let hi = family_str(r, &CoordPoly::univariate(3, &[0, 1]), &one, &zero).unwrap();
        assert_eq!(hi.table(), CompressingMap::parse(r, "x2").unwrap().table());

        let top_digit = family_str(r, &CoordPoly::univariate(3, &[0, 1, 1]), &one, &zero).unwrap();
        assert_eq!(top_digit.table(), CompressingMap::parse(r, "x2^2 + x2").unwrap().table());

        let x0 = CoordPoly::var(3, 2, 0);
        let err = family_str(r, &CoordPoly::univariate(3, &[0, 1]), &x0, &zero).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { name: "f1(0, ..., 0) != 0", .. }));

        let err = family_str(r, &CoordPoly::univariate(3, &[2]), &one, &zero).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { name: "1 <= deg f0 < p", .. }));

        let vanisher = CoordPoly::parse(3, 2, "x0^2 - 1").unwrap();
        let err = family_str(r, &CoordPoly::univariate(3, &[0, 1]), &vanisher, &zero).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { name: "(x_0^(p-1) - 1) does not divide f1", .. }));
    }

    #[test]
    fn family_weak_examples() {
        let r = ring(5, 2);
        let one = CoordPoly::constant(5, 1, 1);
        let zero = CoordPoly::zero(5, 1);
        let m = family_weak(r, &WeakParams::Pow { ell: 2, f1: one.clone(), f2: zero.clone() }).unwrap();
        assert_eq!(m.table(), CompressingMap::parse(r, "x1^2").unwrap().table());

        let r3 = ring(5, 3);
        let g0 = CoordPoly::univariate(5, &[0, 0, 1]);
        let m = family_weak(
            r3,
            &WeakParams::Lin { k: 1, g0, g1: CoordPoly::zero(5, 1), f2: CoordPoly::zero(5, 2) },
        )
        .unwrap();
        assert_eq!(m.table(), CompressingMap::parse(r3, "x2*x1^2").unwrap().table());

        let r = ring(3, 3);
        let err = family_weak(
            r,
            &WeakParams::Lin {
                k: 1,
                g0: CoordPoly::univariate(3, &[0, 1]),
                g1: CoordPoly::zero(3, 1),
                f2: CoordPoly::zero(3, 2),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Hypothesis { name: "gcd(p-1, deg g0 + 1) = 1", .. }));

        let err = family_weak(ring(3, 2), &WeakParams::Pow { ell: 1, f1: CoordPoly::constant(3, 1, 1), f2: CoordPoly::zero(3, 1) }).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { name: "2 <= ell < p", .. }));

        let err = family_weak(
            ring(3, 2),
            &WeakParams::Pow { ell: 2, f1: CoordPoly::var(3, 1, 0), f2: CoordPoly::zero(3, 1) },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Hypothesis { name: "x_0 does not divide f1", .. }));

        let err = family_weak(
            ring(3, 2),
            &WeakParams::Lin {
                k: 0,
                g0: CoordPoly::constant(3, 1, 1),
                g1: CoordPoly::constant(3, 0, 2),
                f2: CoordPoly::zero(3, 1),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Hypothesis { name: "g1 = 0 when k = 0", .. }));
    }

    #[test]
    fn unit_degree_check_for_k0() {
        // deg g0 = 2 passes gcd(2, 3) = 1, but on F_3^x g0 = 2*x0.
        let r = ring(3, 2);
        let g0 = CoordPoly::parse(3, 1, "x0^2 + 2*x0 + 2").unwrap();
        let err = family_weak(
            r,
            &WeakParams::Lin { k: 0, g0, g1: CoordPoly::zero(3, 0), f2: CoordPoly::zero(3, 1) },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Hypothesis { name, .. } if name.contains("F_p^x") || name.contains("x_0^(p-1) - 1")));
        let ok = CoordPoly::parse(3, 1, "x0^2 + 1").unwrap();
        assert_eq!(unit_degree(&ok), 0);
        assert!(family_weak(
            r,
            &WeakParams::Lin { k: 0, g0: ok, g1: CoordPoly::zero(3, 0), f2: CoordPoly::zero(3, 1) },
        )
        .is_ok());
    }

    #[test]
    fn apply_examples() {
        let ctx = GaloisCtx::new(ring(3, 2), &[1, 1, -1]).unwrap();
        let s = trace_sequence(&ctx, &ctx.one()).unwrap();
        let c = apply(&modular_map(*ctx.ring(), 2).unwrap(), &s).unwrap();
        assert_eq!((c.at(0), c.at(1)), (0, 0));
        let k = apply(&CompressingMap::constant(*ctx.ring(), 1), &s).unwrap();
        assert_eq!(k.period(), 1);
        let other = CompressingMap::identity(ring(3, 3));
        assert!(matches!(apply(&other, &s), Err(Error::RingMismatch { .. })));
        let twice = apply(&modular_map(*ctx.ring(), 2).unwrap(), &c);
        assert!(twice.is_err());
    }

    #[test]
    fn top_digit_map_merges_negatives() {
        let ctx = GaloisCtx::new(ring(3, 3), &[1, -1, -4]).unwrap();
        let psi = CompressingMap::parse(*ctx.ring(), "x2^2 + x2").unwrap();
        let alpha = ctx.elem(&[13, 3]).unwrap();
        let sa = trace_sequence(&ctx, &alpha).unwrap();
        let sb = trace_sequence(&ctx, &ctx.neg(&alpha)).unwrap();
        assert_ne!(sa, sb);
        assert_eq!(apply(&psi, &sa).unwrap(), apply(&psi, &sb).unwrap());
    }

    #[test]
    fn parser_errors_and_reduction() {
        assert!(CoordPoly::parse(3, 2, "x2").is_err());
        assert!(CoordPoly::parse(3, 2, "x0 +").is_err());
        assert!(CoordPoly::parse(3, 2, "(x0 + 1").is_err());
        // x^3 = x on F_3; 4 = 1.
        assert_eq!(CoordPoly::parse(3, 1, "x0^3 + 4").unwrap(), CoordPoly::parse(3, 1, "x0 + 1").unwrap());
        assert_eq!(CoordPoly::parse(3, 2, "-x1").unwrap(), CoordPoly::parse(3, 2, "2*x1").unwrap());
        let p = CoordPoly::parse(5, 2, "(x0 + x1)^2").unwrap();
        assert_eq!(p, CoordPoly::parse(5, 2, "x0^2 + 2*x0*x1 + x1^2").unwrap());
        assert_eq!(CoordPoly::parse(5, 2, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn table_spec_round_trip() {
        let r = ring(3, 2);
        let m = CompressingMap::parse(r, "t:0,1,0,1,0,1,0,1,1").unwrap();
        assert_eq!(m.alphabet(), 2);
        assert_eq!(CompressingMap::parse(r, &m.to_spec()).unwrap().table(), m.table());
        assert!(CompressingMap::parse(r, "t:0,1").is_err());
    }

    #[test]
    fn interpolation_round_trip() {
        let p = 3;
        for idx in (0..3u64.pow(9)).step_by(97) {
            let values: Vec<u64> = CoordPoly::point(p, 9, idx);
            let poly = CoordPoly::interpolate(p, 2, &values);
            assert_eq!(poly.values(), values);
            assert!(poly.terms().all(|(e, _)| e.iter().all(|&k| (k as u64) < p)));
        }
    }
}
