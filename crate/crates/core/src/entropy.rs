//! Nearest-neighbour entropies and the exhaustive pattern atlas.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::neighbors::{NeighborProfile, GRID_LEN, K_GRID};

/// Level-curve values `d * theta = t` drawn in the atlas.
pub const LEVEL_CURVES: [f64; 5] = [0.15, 0.3, 0.45, 0.6, 0.75];
/// Points sampled along each level curve.
pub const LEVEL_CURVE_POINTS: usize = 64;

/// Two-class Shannon entropy (natural log) of `pos` minority samples among `k`.
pub fn binary_entropy(pos: usize, k: usize) -> Result<f64> {
    if k == 0 || pos > k {
        return Err(Error::CountOutOfRange { pos, k });
    }
    let p = pos as f64 / k as f64;
    let n = (k - pos) as f64 / k as f64;
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    Ok(term(p) + term(n))
}

/// Summary of one eight-value entropy profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternStats {
    pub entropies: [f64; GRID_LEN],
    pub mu: f64,
    /// Sample standard deviation (divisor 7).
    pub sigma: f64,
    pub d: f64,
    /// `atan(mu / sigma)`, defined as 0 when `d = 0`.
    pub theta: f64,
}

impl PatternStats {
    pub fn from_entropies(entropies: [f64; GRID_LEN]) -> Self {
        let n = GRID_LEN as f64;
        let mu = entropies.iter().sum::<f64>() / n;
        let var = entropies.iter().map(|h| (h - mu).powi(2)).sum::<f64>() / (n - 1.0);
        let sigma = var.sqrt();
        let d = mu.hypot(sigma);
        // atan2 agrees with atan(mu/sigma) for sigma > 0 and gives 0 at the origin
        let theta = mu.atan2(sigma);
        PatternStats {
            entropies,
            mu,
            sigma,
            d,
            theta,
        }
    }

    /// The product driving IEFSVM memberships.
    #[inline]
    pub fn d_theta(&self) -> f64 {
        self.d * self.theta
    }

    pub fn nonzero_count(&self) -> usize {
        self.entropies.iter().filter(|&&h| h > 0.0).count()
    }
}

fn entropies_of(counts: &[u8; GRID_LEN]) -> [f64; GRID_LEN] {
    let mut h = [0.0; GRID_LEN];
    for (j, (&c, &k)) in counts.iter().zip(K_GRID.iter()).enumerate() {
        h[j] = binary_entropy(c as usize, k).expect("profile counts are bounded by k");
    }
    h
}

pub fn pattern_stats(profile: &NeighborProfile) -> PatternStats {
    PatternStats::from_entropies(entropies_of(&profile.pos_counts))
}

/// One feasible count sequence with its statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pattern {
    pub counts: [u8; GRID_LEN],
    pub stats: PatternStats,
    pub nonzero_count: usize,
}

/// Every feasible profile, in lexicographic order of the count sequence.
///
/// The first count is 0 or 1 and every later step adds 0, 1 or 2, giving
/// `2 * 3^7 = 4374` patterns.
pub fn enumerate_patterns() -> Vec<Pattern> {
    let mut out = Vec::with_capacity(2 * 3usize.pow(GRID_LEN as u32 - 1));
    let mut counts = [0u8; GRID_LEN];
    fn walk(depth: usize, counts: &mut [u8; GRID_LEN], out: &mut Vec<Pattern>) {
        if depth == GRID_LEN {
            let stats = PatternStats::from_entropies(entropies_of(counts));
            out.push(Pattern {
                counts: *counts,
                stats,
                nonzero_count: stats.nonzero_count(),
            });
            return;
        }
        let (base, steps) = if depth == 0 { (0, 0..=1) } else { (counts[depth - 1], 0..=2) };
        for step in steps {
            counts[depth] = base + step;
            walk(depth + 1, counts, out);
        }
    }
    walk(0, &mut counts, &mut out);
    out
}

/// Points `(d, theta)` on the curve `d * theta = t` with `theta` in `[t, pi/2]`,
/// which keeps `d <= 1`.
pub fn level_curve(t: f64, points: usize) -> Vec<(f64, f64)> {
    let lo = t.min(std::f64::consts::FRAC_PI_2);
    let hi = std::f64::consts::FRAC_PI_2;
    (0..points)
        .map(|i| {
            let frac = if points > 1 { i as f64 / (points - 1) as f64 } else { 0.0 };
            let theta = lo + (hi - lo) * frac;
            (t / theta, theta)
        })
        .collect()
}

/// Writes the atlas CSV: one `pattern` row per pattern, then sampled level-curve rows.
pub fn write_pattern_atlas<W: Write>(patterns: &[Pattern], mut w: W) -> std::io::Result<()> {
    writeln!(w, "mu,sigma,d,theta,nonzero_count,kind")?;
    for p in patterns {
        let s = &p.stats;
        writeln!(w, "{},{},{},{},{},pattern", s.mu, s.sigma, s.d, s.theta, p.nonzero_count)?;
    }
    for t in LEVEL_CURVES {
        for (d, theta) in level_curve(t, LEVEL_CURVE_POINTS) {
            let (mu, sigma) = (d * theta.sin(), d * theta.cos());
            writeln!(w, "{mu},{sigma},{d},{theta},,levelcurve-{t}")?;
        }
    }
    Ok(())
}

/// [`write_pattern_atlas`] into a file, optionally preceded by `#`-comment lines.
pub fn emit_pattern_atlas(patterns: &[Pattern], out: &Path, preamble: &[String]) -> Result<()> {
    let file = std::fs::File::create(out).map_err(|e| Error::io(out, e))?;
    let mut w = std::io::BufWriter::new(file);
    let io = |e| Error::io(out, e);
    for line in preamble {
        writeln!(w, "# {line}").map_err(io)?;
    }
    write_pattern_atlas(patterns, &mut w).map_err(io)?;
    w.flush().map_err(io)
}
