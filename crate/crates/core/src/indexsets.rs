//! Index sets: finite truncations of discrete sets of `(z, k)` pairs that
//! prescribe the terms `x^z log^k x` allowed in an asymptotic expansion.
//!
//! A log-downward-closed set is determined by the largest log power present
//! at every exponent, so an [`IndexSet`] stores `(z, k_max)` pairs and
//! materializes the full list of entries on demand.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::coneop::BoundarySpectrum;
use crate::error::{Error, Result};

/// Tolerance for identifying two exponents.
pub const EXPONENT_TOL: f64 = 1e-12;

pub fn same_exponent(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= EXPONENT_TOL * (1.0 + a.norm().max(b.norm()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexEntry {
    pub z: Complex64,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexSet {
    /// `(z, k_max)` sorted by `(Re z, Im z)`.
    tops: Vec<(Complex64, u32)>,
    cinf_step: bool,
    re_cutoff: f64,
}

fn cmp_exponent(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl IndexSet {
    pub fn empty(re_cutoff: f64) -> Self {
        IndexSet {
            tops: Vec::new(),
            cinf_step: false,
            re_cutoff,
        }
    }

    /// Build from arbitrary entries: adds the log-downward closure, the
    /// `z -> z+1` closure when `cinf_step` is set, truncates at the cutoff
    /// and sorts.
    pub fn from_entries<I>(entries: I, re_cutoff: f64, cinf_step: bool) -> Self
    where
        I: IntoIterator<Item = (Complex64, u32)>,
    {
        let mut set = IndexSet {
            tops: Vec::new(),
            cinf_step,
            re_cutoff,
        };
        for (z, k) in entries {
            set.insert(z, k);
        }
        if cinf_step {
            set.close_cinf();
        }
        set
    }

    pub fn from_real(entries: &[(f64, u32)], re_cutoff: f64) -> Self {
        Self::from_entries(
            entries.iter().map(|&(r, k)| (Complex64::new(r, 0.0), k)),
            re_cutoff,
            false,
        )
    }

    /// `{(j, 0) : j in N, j >= start}` up to the cutoff (`start = 0` gives N_0).
    pub fn naturals_from(start: u32, re_cutoff: f64) -> Self {
        let mut entries = Vec::new();
        let mut j = start;
        while j as f64 <= re_cutoff + EXPONENT_TOL {
            entries.push((Complex64::new(j as f64, 0.0), 0));
            j += 1;
        }
        let mut s = Self::from_entries(entries, re_cutoff, true);
        s.cinf_step = true;
        s
    }

    pub fn cinf_step(&self) -> bool {
        self.cinf_step
    }

    pub fn re_cutoff(&self) -> f64 {
        self.re_cutoff
    }

    pub fn is_empty(&self) -> bool {
        self.tops.is_empty()
    }

    /// Distinct exponents with their largest log power.
    pub fn exponents(&self) -> &[(Complex64, u32)] {
        &self.tops
    }

    /// All entries, canonically ordered by `(Re z, Im z, k)`.
    pub fn entries(&self) -> Vec<IndexEntry> {
        self.tops
            .iter()
            .flat_map(|&(z, kmax)| (0..=kmax).map(move |k| IndexEntry { z, k }))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.tops.iter().map(|t| t.1 as usize + 1).sum()
    }

    pub fn max_log(&self, z: Complex64) -> Option<u32> {
        self.tops.iter().find(|t| same_exponent(t.0, z)).map(|t| t.1)
    }

    pub fn contains(&self, z: Complex64, k: u32) -> bool {
        self.max_log(z).is_some_and(|m| k <= m)
    }

    fn in_range(&self, z: Complex64) -> bool {
        z.re <= self.re_cutoff + EXPONENT_TOL * (1.0 + self.re_cutoff.abs())
    }

    fn insert(&mut self, z: Complex64, k: u32) {
        if !self.in_range(z) {
            return;
        }
        if let Some(t) = self.tops.iter_mut().find(|t| same_exponent(t.0, z)) {
            t.1 = t.1.max(k);
            return;
        }
        let pos = self
            .tops
            .binary_search_by(|t| cmp_exponent(&t.0, &z))
            .unwrap_or_else(|p| p);
        self.tops.insert(pos, (z, k));
    }

    fn close_cinf(&mut self) {
        let mut i = 0;
        while i < self.tops.len() {
            let (z, k) = self.tops[i];
            let next = z + 1.0;
            if self.in_range(next) {
                self.insert(next, k);
            }
            i += 1;
            // Insertions happen strictly to the right in the ordering, so a
            // single left-to-right sweep reaches the fixed point.
        }
        self.cinf_step = true;
    }

    /// The `z -> z+1` closure truncated at the cutoff.
    pub fn cinf_closure(&self) -> Self {
        let mut s = self.clone();
        s.close_cinf();
        s
    }

    fn check_cutoff(&self, other: &Self) -> Result<()> {
        if (self.re_cutoff - other.re_cutoff).abs() > EXPONENT_TOL * (1.0 + self.re_cutoff.abs()) {
            return Err(Error::CutoffMismatch {
                left: self.re_cutoff,
                right: other.re_cutoff,
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_cutoff(other)?;
        let mut s = self.clone();
        s.cinf_step = self.cinf_step && other.cinf_step;
        for &(z, k) in &other.tops {
            s.insert(z, k);
        }
        Ok(s)
    }

    /// `E ∪̄ F = E ∪ F ∪ {(z, k+l+1) : (z,k) ∈ E, (z,l) ∈ F}`.
    pub fn extended_union(&self, other: &Self) -> Result<Self> {
        let mut s = self.union(other)?;
        for &(z, k) in &self.tops {
            if let Some(l) = other.max_log(z) {
                s.insert(z, k + l + 1);
            }
        }
        Ok(s)
    }

    /// `E + F = {(z+w, k+l)}`; empty if either operand is empty.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_cutoff(other)?;
        let mut s = IndexSet::empty(self.re_cutoff);
        s.cinf_step = self.cinf_step && other.cinf_step;
        for &(z, k) in &self.tops {
            for &(w, l) in &other.tops {
                s.insert(z + w, k + l);
            }
        }
        Ok(s)
    }

    /// Text form: a header comment, then one `re im k` triple per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# re_cutoff={} cinf_step={}\n", self.re_cutoff, self.cinf_step);
        for e in self.entries() {
            let _ = writeln!(out, "{:e} {:e} {}", e.z.re, e.z.im, e.k);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cutoff = None;
        let mut cinf = false;
        let mut entries = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(header) = line.strip_prefix('#') {
                for field in header.split_whitespace() {
                    if let Some(v) = field.strip_prefix("re_cutoff=") {
                        cutoff = Some(v.parse::<f64>().map_err(|e| Error::Config(e.to_string()))?);
                    } else if let Some(v) = field.strip_prefix("cinf_step=") {
                        cinf = v == "true";
                    }
                }
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Config(format!("malformed index-set line: {line}")));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Config(format!("{s}: {e}")));
            let k = parts[2]
                .parse::<u32>()
                .map_err(|e| Error::Config(format!("{}: {e}", parts[2])))?;
            entries.push((Complex64::new(parse(parts[0])?, parse(parts[1])?), k));
        }
        let cutoff = cutoff.ok_or_else(|| Error::Config("missing re_cutoff header".into()))?;
        let mut s = Self::from_entries(entries, cutoff, false);
        s.cinf_step = cinf;
        Ok(s)
    }
}

/// Index sets attached to the faces `lb, rb, ff` (and optionally `fi`).
#[derive(Debug, Clone, PartialEq)]
pub struct IndexFamily4 {
    pub lb: IndexSet,
    pub rb: IndexSet,
    pub ff: IndexSet,
    pub fi: Option<IndexSet>,
}

impl IndexFamily4 {
    pub fn empty(re_cutoff: f64) -> Self {
        IndexFamily4 {
            lb: IndexSet::empty(re_cutoff),
            rb: IndexSet::empty(re_cutoff),
            ff: IndexSet::empty(re_cutoff),
            fi: Some(IndexSet::empty(re_cutoff)),
        }
    }
}

/// Index family of a composition:
/// `G_lb = E_lb ∪̄ (E_ff + F_lb)`, `G_rb = (E_rb + F_ff) ∪̄ F_rb`,
/// `G_ff = (E_ff + F_ff) ∪̄ (E_lb + F_rb)`, `G_fi = E_fi + F_fi`.
pub fn compose_family(e: &IndexFamily4, f: &IndexFamily4) -> Result<IndexFamily4> {
    let lb = e.lb.extended_union(&e.ff.sum(&f.lb)?)?;
    let rb = e.rb.sum(&f.ff)?.extended_union(&f.rb)?;
    let ff = e.ff.sum(&f.ff)?.extended_union(&e.lb.sum(&f.rb)?)?;
    let fi = match (&e.fi, &f.fi) {
        (Some(a), Some(b)) => Some(a.sum(b)?),
        _ => None,
    };
    Ok(IndexFamily4 { lb, rb, ff, fi })
}

/// `Ê^±(α)` from the boundary spectrum, in the `x^{iσ}` convention.
///
/// A pole `σ` gives `τ = σ + iμ`, hence `z = iτ` for `Ê⁺` and `z = -iτ` for
/// `Ê⁻`. The entry `(z + r, k)` is admitted when
/// `k + 1 <= Σ_{l=0..r} ord(σ ∓ il)` and `Re z > ±(α - μ)`.
pub fn e_hat(spec: &BoundarySpectrum, alpha: f64, mu: f64, cutoff: f64, plus: bool) -> IndexSet {
    let i = Complex64::new(0.0, 1.0);
    let sign = if plus { 1.0 } else { -1.0 };
    let mut entries = Vec::new();
    let distinct = spec.distinct_poles();
    for &(sigma, _) in &distinct {
        let tau = sigma + i * mu;
        let z = i * tau * sign;
        if !(z.re > sign * (alpha - mu)) {
            continue;
        }
        let mut total = 0u32;
        let mut r = 0u32;
        while z.re + r as f64 <= cutoff + EXPONENT_TOL {
            total += spec.order_at(sigma - i * (sign * r as f64));
            if total >= 1 {
                entries.push((z + r as f64, total - 1));
            }
            r += 1;
        }
    }
    let mut s = IndexSet::from_entries(entries, cutoff, false);
    s.cinf_step = true;
    s
}

/// The family `𝓔(α) = (Ě⁺, Ě⁻, E, N_0)` with `Ě± = Ê± ∪̄ Ê±` and
/// `E = N ∪̄ (Ê⁺ + Ê⁻)`.
pub fn build_e_alpha(spec: &BoundarySpectrum, alpha: f64, mu: f64, cutoff: f64) -> IndexFamily4 {
    let plus = e_hat(spec, alpha, mu, cutoff, true);
    let minus = e_hat(spec, alpha, mu, cutoff, false);
    let cplus = plus.extended_union(&plus).expect("same cutoff");
    let cminus = minus.extended_union(&minus).expect("same cutoff");
    let naturals = IndexSet::naturals_from(1, cutoff);
    let e = naturals
        .extended_union(&plus.sum(&minus).expect("same cutoff"))
        .expect("same cutoff");
    IndexFamily4 {
        lb: cplus,
        rb: cminus,
        ff: e,
        fi: Some(IndexSet::naturals_from(0, cutoff)),
    }
}
