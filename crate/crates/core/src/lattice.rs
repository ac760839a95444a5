//! Exact integer lattice enumeration on Z^d, d <= 3.
//!
//! All membership tests are integer comparisons of squared norms; no
//! floating-point rounding can move a point across a ball or shell boundary
//! (shell widths are dyadic rationals in practice, so the lower bound
//! (j - c)^2 is exactly representable).

use crate::{CoreError, Result};

/// A lattice frequency, one `i64` coordinate per dimension.
pub type LatticePoint = Vec<i64>;

/// A finite set of lattice points, kept sorted lexicographically so that
/// iteration order, serialization, and hashing are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySet {
    dim: usize,
    points: Vec<LatticePoint>,
}

impl FrequencySet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    /// Builds from raw points, sorting and deduplicating.
    pub fn from_points(dim: usize, mut points: Vec<LatticePoint>) -> Result<Self> {
        check_dim(dim)?;
        if points.iter().any(|p| p.len() != dim) {
            return Err(CoreError::DimensionMismatch(format!(
                "all points must have {dim} coordinates"
            )));
        }
        points.sort();
        points.dedup();
        Ok(Self { dim, points })
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(CoreError::BadDimension(dim))
    }
}

/// Integer square root, exact for all u64 inputs.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Number of lattice points with |k|^2 <= radius^2 (closed ball of integer
/// radius), counted without materializing the set.
pub fn ball_count(dim: usize, radius: u64) -> Result<u64> {
    check_dim(dim)?;
    Ok(ball_count_norm_sq(dim, radius * radius))
}

/// Number of lattice points with |k|^2 <= bound (bound on the squared norm,
/// which need not be a perfect square).
pub fn ball_count_norm_sq(dim: usize, bound: u64) -> u64 {
    let n = isqrt(bound) as i64;
    match dim {
        1 => 2 * n as u64 + 1,
        2 => {
            let mut c = 0u64;
            for k1 in -n..=n {
                let rem = bound - (k1 * k1) as u64;
                c += 2 * isqrt(rem) + 1;
            }
            c
        }
        _ => {
            let mut c = 0u64;
            for k1 in -n..=n {
                let rem1 = bound - (k1 * k1) as u64;
                let m = isqrt(rem1) as i64;
                for k2 in -m..=m {
                    let rem2 = rem1 - (k2 * k2) as u64;
                    c += 2 * isqrt(rem2) + 1;
                }
            }
            c
        }
    }
}

/// All lattice points with |k| <= radius, sorted lexicographically.
pub fn enumerate_ball(dim: usize, radius: u64) -> Result<FrequencySet> {
    check_dim(dim)?;
    let bound = radius * radius;
    let n = radius as i64;
    let mut points = Vec::with_capacity(ball_count_norm_sq(dim, bound) as usize);
    match dim {
        1 => {
            for k1 in -n..=n {
                points.push(vec![k1]);
            }
        }
        2 => {
            for k1 in -n..=n {
                let m = isqrt(bound - (k1 * k1) as u64) as i64;
                for k2 in -m..=m {
                    points.push(vec![k1, k2]);
                }
            }
        }
        _ => {
            for k1 in -n..=n {
                let rem1 = bound - (k1 * k1) as u64;
                let m = isqrt(rem1) as i64;
                for k2 in -m..=m {
                    let l = isqrt(rem1 - (k2 * k2) as u64) as i64;
                    for k3 in -l..=l {
                        points.push(vec![k1, k2, k3]);
                    }
                }
            }
        }
    }
    Ok(FrequencySet { dim, points })
}

/// r_d(R): the number of k in Z^d with |k|^2 = R exactly.
pub fn count_representations(dim: usize, norm_sq: u64) -> Result<u64> {
    check_dim(dim)?;
    let r = norm_sq;
    Ok(match dim {
        1 => {
            if r == 0 {
                1
            } else if is_square(r) {
                2
            } else {
                0
            }
        }
        2 => {
            let n = isqrt(r) as i64;
            let mut c = 0u64;
            for k1 in -n..=n {
                if is_square(r - (k1 * k1) as u64) {
                    c += if r == (k1 * k1) as u64 { 1 } else { 2 };
                }
            }
            c
        }
        _ => {
            let n = isqrt(r) as i64;
            let mut c = 0u64;
            for k1 in -n..=n {
                let rem1 = r - (k1 * k1) as u64;
                let m = isqrt(rem1) as i64;
                for k2 in -m..=m {
                    let rem2 = rem1 - (k2 * k2) as u64;
                    if is_square(rem2) {
                        c += if rem2 == 0 { 1 } else { 2 };
                    }
                }
            }
            c
        }
    })
}

/// Average and maximum of r_d(n) over 1 <= n <= limit.
///
/// The average behaves like limit^{(d-2)/2}: bounded for d = 1, roughly
/// constant (pi) for d = 2, and growing like the square root for d = 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepresentationStats {
    pub average: f64,
    pub max: u64,
}

pub fn average_representation(dim: usize, limit: u64) -> Result<RepresentationStats> {
    check_dim(dim)?;
    if limit == 0 {
        return Err(CoreError::BadParameter("limit must be positive".into()));
    }
    // Single ball sweep accumulating a histogram over squared norms. This is
    // a different route than count_representations, and the two are pinned
    // against each other in tests.
    let mut hist = vec![0u64; limit as usize + 1];
    let n = isqrt(limit) as i64;
    match dim {
        1 => {
            for k1 in -n..=n {
                let s = (k1 * k1) as u64;
                if s <= limit {
                    hist[s as usize] += 1;
                }
            }
        }
        2 => {
            for k1 in -n..=n {
                let m = isqrt(limit - (k1 * k1) as u64) as i64;
                for k2 in -m..=m {
                    hist[(k1 * k1 + k2 * k2) as usize] += 1;
                }
            }
        }
        _ => {
            for k1 in -n..=n {
                let rem1 = limit - (k1 * k1) as u64;
                let m = isqrt(rem1) as i64;
                for k2 in -m..=m {
                    let l = isqrt(rem1 - (k2 * k2) as u64) as i64;
                    for k3 in -l..=l {
                        hist[(k1 * k1 + k2 * k2 + k3 * k3) as usize] += 1;
                    }
                }
            }
        }
    }
    let total: u64 = hist[1..].iter().sum();
    let max = *hist[1..].iter().max().unwrap_or(&0);
    Ok(RepresentationStats {
        average: total as f64 / limit as f64,
        max,
    })
}

/// All lattice points with |k| = radius exactly, sorted lexicographically.
pub fn enumerate_shell(dim: usize, radius: u64) -> Result<FrequencySet> {
    let target = radius * radius;
    let ball = enumerate_ball(dim, radius)?;
    let points = ball
        .points
        .into_iter()
        .filter(|k| k.iter().map(|c| c * c).sum::<i64>() as u64 == target)
        .collect();
    Ok(FrequencySet { dim, points })
}

/// All k with j - width < |k| <= j, the frequency support of a unit-width
/// spectral cluster. Membership is decided on squared norms; for dyadic
/// widths the lower bound (j - width)^2 is exact in f64.
pub fn shell_cluster(dim: usize, j: u64, width: f64) -> Result<FrequencySet> {
    check_dim(dim)?;
    if !(width > 0.0) || width > j as f64 {
        return Err(CoreError::BadParameter(format!(
            "shell width must lie in (0, j]; got width {width}, j {j}"
        )));
    }
    let low = (j as f64 - width) * (j as f64 - width);
    let high = j * j;
    let ball = enumerate_ball(dim, j)?;
    let points = ball
        .points
        .into_iter()
        .filter(|k| {
            let s = k.iter().map(|c| c * c).sum::<i64>() as u64;
            s <= high && (s as f64) > low
        })
        .collect();
    Ok(FrequencySet { dim, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: scan the full coordinate box and filter. Shares no
    /// code path with the implementation above.
    fn box_scan(dim: usize, reach: i64, keep: impl Fn(&[i64]) -> bool) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let r = -reach..=reach;
        match dim {
            1 => {
                for a in r {
                    if keep(&[a]) {
                        out.push(vec![a]);
                    }
                }
            }
            2 => {
                for a in r.clone() {
                    for b in r.clone() {
                        if keep(&[a, b]) {
                            out.push(vec![a, b]);
                        }
                    }
                }
            }
            _ => {
                for a in r.clone() {
                    for b in r.clone() {
                        for c in r.clone() {
                            if keep(&[a, b, c]) {
                                out.push(vec![a, b, c]);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn norm_sq(k: &[i64]) -> u64 {
        k.iter().map(|c| c * c).sum::<i64>() as u64
    }

    #[test]
    fn representation_counts_match_frozen_values() {
        assert_eq!(count_representations(2, 25).unwrap(), 12);
        assert_eq!(count_representations(1, 4).unwrap(), 2);
        assert_eq!(count_representations(2, 3).unwrap(), 0);
        assert_eq!(count_representations(2, 625).unwrap(), 20);
        assert_eq!(count_representations(2, 4225).unwrap(), 36);
        assert_eq!(count_representations(1, 0).unwrap(), 1);
        assert_eq!(count_representations(3, 0).unwrap(), 1);
    }

    #[test]
    fn representation_counts_match_box_scan_oracle() {
        for dim in 1..=3usize {
            for r in [0u64, 1, 2, 3, 4, 5, 25, 49, 50, 90, 100, 169, 325] {
                let oracle = box_scan(dim, isqrt(r) as i64, |k| norm_sq(k) == r).len() as u64;
                assert_eq!(
                    count_representations(dim, r).unwrap(),
                    oracle,
                    "r_{dim}({r})"
                );
            }
        }
    }

    #[test]
    fn representation_counts_match_histogram_sweep_up_to_ten_thousand() {
        // Exhaustive cross-check of the two independent counting routes.
        for dim in 1..=3usize {
            let limit = 10_000u64;
            let mut hist = vec![0u64; limit as usize + 1];
            for p in box_scan(dim, isqrt(limit) as i64, |k| norm_sq(k) <= limit) {
                hist[norm_sq(&p) as usize] += 1;
            }
            // Spot-check densely at the low end, sparsely above.
            for r in (0..=200).chain((201..=limit).step_by(97)) {
                assert_eq!(
                    count_representations(dim, r).unwrap(),
                    hist[r as usize],
                    "r_{dim}({r})"
                );
            }
        }
    }

    #[test]
    fn ball_counts_match_frozen_values_and_oracle() {
        assert_eq!(ball_count(2, 10).unwrap(), 317);
        assert_eq!(ball_count(2, 8).unwrap(), 197);
        assert_eq!(ball_count(2, 16).unwrap(), 797);
        assert_eq!(ball_count(2, 32).unwrap(), 3209);
        assert_eq!(ball_count(2, 64).unwrap(), 12853);
        assert_eq!(ball_count(3, 10).unwrap(), 4169);
        assert_eq!(ball_count(1, 7).unwrap(), 15);
        for dim in 1..=3usize {
            for n in 0..=12u64 {
                let oracle =
                    box_scan(dim, n as i64, |k| norm_sq(k) <= n * n).len() as u64;
                assert_eq!(ball_count(dim, n).unwrap(), oracle);
                assert_eq!(enumerate_ball(dim, n).unwrap().len() as u64, oracle);
            }
        }
    }

    #[test]
    fn enumeration_is_sorted_and_deduplicated() {
        for dim in 1..=3usize {
            let set = enumerate_ball(dim, 6).unwrap();
            let mut sorted = set.points().to_vec();
            sorted.sort();
            sorted.dedup();
            assert_eq!(set.points(), &sorted[..]);
        }
    }

    #[test]
    fn cumulative_representations_match_ball_count() {
        // sum_{n<=R} r_d(n) + 1 (origin) equals the count of |k|^2 <= R.
        for dim in 1..=3usize {
            for bound in [1u64, 7, 10, 36, 100, 101] {
                let total: u64 = (1..=bound)
                    .map(|n| count_representations(dim, n).unwrap())
                    .sum();
                assert_eq!(total + 1, ball_count_norm_sq(dim, bound));
            }
        }
    }

    #[test]
    fn average_representation_matches_frozen_values() {
        let s = average_representation(1, 10).unwrap();
        assert!((s.average - 0.6).abs() < 1e-15);
        assert_eq!(s.max, 2);

        let s = average_representation(2, 1).unwrap();
        assert!((s.average - 4.0).abs() < 1e-15);
        assert_eq!(s.max, 4);

        // ball_3(10) = 4169, so the average over n <= 100 is 41.68; the
        // growth-rate prediction limit^{1/2} = 10 is matched within a small
        // constant factor.
        let s = average_representation(3, 100).unwrap();
        assert!((s.average - 41.68).abs() < 1e-12);
        assert!(s.average / 10.0 < 4.5 && s.average / 10.0 > 1.0 / 4.5);
    }

    #[test]
    fn shell_cluster_matches_enumeration_oracle() {
        // 16 < |k|^2 <= 25 splits as {17: 8, 18: 4, 20: 8, 25: 12}.
        let set = shell_cluster(2, 5, 1.0).unwrap();
        assert_eq!(set.len(), 32);
        let mut hist = std::collections::BTreeMap::new();
        for p in set.points() {
            *hist.entry(norm_sq(p)).or_insert(0u64) += 1;
        }
        let expect: std::collections::BTreeMap<u64, u64> =
            [(17, 8), (18, 4), (20, 8), (25, 12)].into_iter().collect();
        assert_eq!(hist, expect);

        let oracle = box_scan(2, 5, |k| {
            let s = norm_sq(k);
            s > 16 && s <= 25
        });
        assert_eq!(set.len(), oracle.len());

        // Half-width shell around j = 1 keeps only |k|^2 = 1.
        let set = shell_cluster(2, 1, 0.5).unwrap();
        assert_eq!(set.len(), 4);

        assert!(shell_cluster(2, 3, 0.0).is_err());
        assert!(shell_cluster(2, 3, 4.0).is_err());
    }

    #[test]
    fn rejects_unsupported_dimensions() {
        assert!(enumerate_ball(0, 3).is_err());
        assert!(enumerate_ball(4, 3).is_err());
        assert!(count_representations(5, 10).is_err());
    }

    #[test]
    fn isqrt_is_exact_near_squares() {
        for n in 0..2000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        for r in [1u64 << 20, (1 << 26) - 1, 1 << 31] {
            assert_eq!(isqrt(r * r), r);
            assert_eq!(isqrt(r * r - 1), r - 1);
        }
    }
}
