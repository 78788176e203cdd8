//! Sequences in `G = { s_alpha : s_alpha(t) = tr(alpha eta^t), alpha unit }`.
//!
//! Time `t = 0` is `tr(alpha)` itself. A sequence is stored as exactly one
//! minimal period and extended to all of `Z` by periodicity.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::galois::{GaloisCtx, OElem};
use crate::ring::{Residue, RingCtx};

/// What the values of a sequence range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    Ring(RingCtx),
    /// Opaque labels `0..k`.
    Labels(u32),
}

impl Alphabet {
    pub fn size(&self) -> u64 {
        match self {
            Self::Ring(r) => r.modulus(),
            Self::Labels(k) => *k as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicSequence {
    alphabet: Alphabet,
    samples: Vec<u64>,
}

/// Smallest `d` dividing `samples.len()` such that `samples` is `d`-periodic.
pub fn minimal_period(samples: &[u64]) -> usize {
    let n = samples.len();
    arith::divisors(n as u64)
        .into_iter()
        .map(|d| d as usize)
        .find(|&d| (d..n).all(|i| samples[i] == samples[i - d]))
        .unwrap_or(n)
}

impl PeriodicSequence {
    /// Wraps one (not necessarily minimal) period of samples.
    ///
    /// # Panics
    ///
    /// Panics if `samples` is empty or a value is outside the alphabet.
    pub fn new(alphabet: Alphabet, mut samples: Vec<u64>) -> Self {
        assert!(!samples.is_empty(), "a periodic sequence needs at least one sample");
        assert!(samples.iter().all(|&v| v < alphabet.size()), "sample outside alphabet");
        let d = minimal_period(&samples);
        samples.truncate(d);
        Self { alphabet, samples }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn period(&self) -> usize {
        self.samples.len()
    }

    /// One minimal period, starting at `t = 0`.
    pub fn samples(&self) -> &[u64] {
        &self.samples
    }

    pub fn at(&self, t: i64) -> u64 {
        self.samples[t.rem_euclid(self.samples.len() as i64) as usize]
    }

    /// The sequence `t -> self(t + k)`.
    pub fn shift(&self, k: i64) -> Self {
        let n = self.samples.len() as i64;
        let samples = (0..n).map(|t| self.at(t + k)).collect();
        Self {
            alphabet: self.alphabet,
            samples,
        }
    }

    pub fn value_set(&self) -> BTreeSet<u64> {
        self.samples.iter().copied().collect()
    }

    /// One value per line.
    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        for v in &self.samples {
            s.push_str(&v.to_string());
            s.push('\n');
        }
        s
    }
}

/// Header echoed in sequence exports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceHeader {
    pub p: u64,
    pub e: u32,
    pub f: String,
    pub alpha: Option<String>,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceExport {
    pub header: SequenceHeader,
    pub values: Vec<u64>,
}

impl SequenceExport {
    pub fn new(ctx: &GaloisCtx, alpha: Option<&OElem>, seq: &PeriodicSequence) -> Self {
        Self {
            header: SequenceHeader {
                p: ctx.p(),
                e: ctx.e(),
                f: ctx.f_spec(),
                alpha: alpha.map(|a| ctx.elem_spec(a)),
                period: seq.period(),
            },
            values: seq.samples().to_vec(),
        }
    }
}

/// Multiplicative order of `eta`, i.e. `min{m > 0 : f | x^m - 1}`.
pub fn period(ctx: &GaloisCtx) -> u64 {
    ctx.order(ctx.eta()).expect("eta is a unit")
}

/// `s_alpha` by repeated multiplication by `eta`.
pub fn trace_sequence(ctx: &GaloisCtx, alpha: &OElem) -> Result<PeriodicSequence> {
    if !ctx.is_unit(alpha) {
        return Err(Error::NotUnit);
    }
    let len = period(ctx) as usize;
    let mut z = alpha.clone();
    let mut samples = Vec::with_capacity(len);
    for _ in 0..len {
        samples.push(ctx.trace(&z));
        z = ctx.mul(&z, ctx.eta());
    }
    Ok(PeriodicSequence::new(Alphabet::Ring(*ctx.ring()), samples))
}

/// Runs `s(t) = -c_{n-1} s(t-1) - ... - c_0 s(t-n)` from `init` until the
/// state returns to `init`.
pub fn lfsr_sequence(ctx: &GaloisCtx, init: &[Residue]) -> Result<PeriodicSequence> {
    let n = ctx.n();
    if init.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: init.len(),
        });
    }
    let ring = ctx.ring();
    let init: Vec<Residue> = init.iter().map(|&v| v % ring.modulus()).collect();
    if init.iter().all(|&v| v % ring.p() == 0) {
        return Err(Error::Precondition("initial state is zero modulo p".into()));
    }
    let f = ctx.f();
    let mut state = init.clone();
    let mut out = Vec::new();
    loop {
        out.push(state[0]);
        let next = (0..n).fold(0, |acc, i| ring.sub(acc, ring.mul(f[i], state[i])));
        state.rotate_left(1);
        state[n - 1] = next;
        if state == init {
            break;
        }
    }
    Ok(PeriodicSequence::new(Alphabet::Ring(*ring), out))
}

/// `tr(eta^k)` for `k` in `0..period + n`, enough to evaluate any
/// `s_alpha(t) = sum_j alpha_j tr(eta^(t+j))` over one period.
#[derive(Debug, Clone)]
pub struct TraceTable {
    traces: Vec<Residue>,
    period: usize,
}

impl TraceTable {
    pub fn new(ctx: &GaloisCtx) -> Self {
        let period = period(ctx) as usize;
        let mut traces = Vec::with_capacity(period + ctx.n());
        let mut z = ctx.one();
        for _ in 0..period + ctx.n() {
            traces.push(ctx.trace(&z));
            z = ctx.mul(&z, ctx.eta());
        }
        Self { traces, period }
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// One full period of `s_alpha` by linearity of the trace.
    pub fn samples(&self, ring: &RingCtx, alpha: &OElem) -> Vec<Residue> {
        (0..self.period)
            .map(|t| {
                alpha
                    .coeffs()
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (j, &c)| ring.add(acc, ring.mul(c, self.traces[t + j])))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn over_z27() -> GaloisCtx {
        GaloisCtx::new(RingCtx::new(3, 3).unwrap(), &[1, -1, -4]).unwrap()
    }

    fn over_z9() -> GaloisCtx {
        GaloisCtx::new(RingCtx::new(3, 2).unwrap(), &[1, 1, -1]).unwrap()
    }

    #[test]
    fn trace_sequence_examples() {
        let ctx = over_z9();
        let s = trace_sequence(&ctx, &ctx.one()).unwrap();
        assert_eq!((s.at(0), s.at(1)), (2, 8));
        let ctx = over_z27();
        let s = trace_sequence(&ctx, &ctx.elem(&[13, 3]).unwrap()).unwrap();
        assert_eq!(s.at(0), 2);
        assert!(trace_sequence(&ctx, &ctx.elem(&[3, 6]).unwrap()).is_err());
    }

    #[test]
    fn lfsr_matches_trace_parameterization() {
        let ctx = over_z9();
        let s = lfsr_sequence(&ctx, &[2, 8]).unwrap();
        assert_eq!(s.period(), 24);
        assert_eq!(s, trace_sequence(&ctx, &ctx.one()).unwrap());
        assert!(matches!(lfsr_sequence(&ctx, &[0, 3]), Err(Error::Precondition(_))));
        assert!(matches!(lfsr_sequence(&ctx, &[1]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn periods() {
        assert_eq!(period(&over_z9()), 24);
        assert_eq!(period(&over_z27()), 72);
        let c = GaloisCtx::new(RingCtx::new(3, 2).unwrap(), &[1, 0, 1]).unwrap();
        // eta^2 = -1.
        let brute = (1..=72u64).find(|&m| c.pow(c.eta(), m) == c.one()).unwrap();
        assert_eq!(brute, 4);
        assert_eq!(period(&c), brute);
    }

    #[test]
    fn value_set_examples() {
        let ctx = over_z27();
        let s = trace_sequence(&ctx, &ctx.elem(&[13, 3]).unwrap()).unwrap();
        let r = ctx.ring();
        let expected: BTreeSet<u64> = [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13]
            .iter()
            .flat_map(|&v| [v as u64, r.neg(v as u64)])
            .collect();
        assert_eq!(expected.len(), 24);
        assert_eq!(s.value_set(), expected);

        let ctx = over_z9();
        let s = trace_sequence(&ctx, &ctx.one()).unwrap();
        assert_eq!(s.value_set(), (0..9).collect());
    }

    #[test]
    fn recurrence_holds_and_shift_covariance() {
        let ctx = over_z27();
        let alpha = ctx.elem(&[13, 3]).unwrap();
        let s = trace_sequence(&ctx, &alpha).unwrap();
        let r = ctx.ring();
        let f = ctx.f();
        for t in 0..s.period() as i64 {
            let rhs = (0..2).fold(0, |acc, i| r.sub(acc, r.mul(f[i], s.at(t - 2 + i as i64))));
            assert_eq!(s.at(t), rhs);
        }
        let shifted = trace_sequence(&ctx, &ctx.mul(&alpha, ctx.eta())).unwrap();
        assert_eq!(shifted, s.shift(1));
    }

    #[test]
    fn trace_table_agrees_with_direct_generation() {
        let ctx = over_z9();
        let table = TraceTable::new(&ctx);
        for alpha in ctx.units() {
            let direct = trace_sequence(&ctx, &alpha).unwrap();
            assert_eq!(table.samples(ctx.ring(), &alpha), direct.samples());
        }
    }

    #[test]
    fn minimality_is_enforced() {
        let s = PeriodicSequence::new(Alphabet::Labels(2), vec![0, 1, 0, 1, 0, 1]);
        assert_eq!(s.samples(), &[0, 1]);
        assert_eq!(minimal_period(&[3, 3, 3]), 1);
        assert_eq!(minimal_period(&[1, 2, 1, 3]), 4);
    }

    #[test]
    fn export_round_trips_through_json() {
        let ctx = over_z9();
        let s = trace_sequence(&ctx, &ctx.one()).unwrap();
        let ex = SequenceExport::new(&ctx, Some(&ctx.one()), &s);
        let json = serde_json::to_string(&ex).unwrap();
        let back: SequenceExport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ex);
        assert_eq!(back.header.f, "1,1,-1");
        assert_eq!(s.to_lines().lines().count(), 24);
    }
}
