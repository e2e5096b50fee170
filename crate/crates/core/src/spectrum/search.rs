use alloc::vec::Vec;

use crate::error::{Error, Result};

use core::f64::consts::PI;

use super::{check_k_max, SpectralFunction, SpectralProblem, Spectrum};

pub const DEFAULT_GRID_PER_SPACING: usize = 8;

/// Number of times a suspect window is rescanned with a halved step.
pub const MAX_REFINEMENT_ROUNDS: usize = 4;

/// Width of the Weyl bookkeeping windows, in mean level spacings.
const WINDOW_SPACINGS: f64 = 32.0;

/// Root of `f` in `[a, b]` with `f(a)` and `f(b)` of opposite sign, refined
/// until the bracket cannot be split in floating point.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    let mut fb = f(b);
    loop {
        let mid = a + 0.5 * (b - a);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    if fa.abs() <= fb.abs() {
        a
    } else {
        b
    }
}

/// Minimizes `sign * f` on `[a, b]` by golden-section search; returns the
/// abscissa and the (unsigned) function value there.
fn golden_min<F: Fn(f64) -> f64>(f: &F, sign: f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let g = |x: f64| sign * f(x);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..80 {
        if gc < 0.0 {
            return (c, sign * gc);
        }
        if gd < 0.0 {
            return (d, sign * gd);
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
        if b - a <= 4.0 * f64::EPSILON * b.abs() {
            break;
        }
    }
    if gc < gd {
        (c, sign * gc)
    } else {
        (d, sign * gd)
    }
}

/// Roots of `f` in `(lo, hi]` from a uniform grid of step close to `step`.
///
/// Sign changes between neighbours are bisected. Where three consecutive
/// samples share a sign and the middle one is smallest in magnitude, the
/// local extremum is located; if it crosses zero the pair of roots on either
/// side is bisected as well, so close pairs inside one grid cell survive.
pub(crate) fn scan_roots<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let cells = libm::ceil((hi - lo) / step).max(1.0) as usize;
    let h = (hi - lo) / cells as f64;
    let xs: Vec<f64> = (0..=cells)
        .map(|j| if j == cells { hi } else { lo + j as f64 * h })
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for j in 1..xs.len() {
        let (mut x0, mut y0, x1, y1) = (xs[j - 1], ys[j - 1], xs[j], ys[j]);
        if y1 == 0.0 {
            roots.push(x1);
            continue;
        }
        if y0 == 0.0 {
            // x0 is itself a root; bracket from just past it
            x0 += 1e-9 * (x1 - x0);
            y0 = f(x0);
        }
        if y0 != 0.0 && (y0 < 0.0) != (y1 < 0.0) {
            roots.push(bisect(f, x0, x1, y0));
            continue;
        }
        if j + 1 < xs.len() && y0 != 0.0 {
            let y2 = ys[j + 1];
            let same_sign = (y0 < 0.0) == (y1 < 0.0) && (y1 < 0.0) == (y2 < 0.0) && y2 != 0.0;
            if same_sign && y1.abs() < y0.abs() && y1.abs() <= y2.abs() {
                let sign = if y1 > 0.0 { 1.0 } else { -1.0 };
                let (xm, ym) = golden_min(f, sign, x0, xs[j + 1]);
                if ym == 0.0 {
                    // tangency: keep it once per side
                    roots.push(xm);
                    roots.push(xm);
                } else if (ym < 0.0) != (y1 < 0.0) {
                    roots.push(bisect(f, x0, xm, y0));
                    roots.push(bisect(f, xm, xs[j + 1], ym));
                }
            }
        }
    }
    roots.retain(|&r| r > lo && r <= hi);
    roots.sort_by(f64::total_cmp);
    roots
}

/// Windows of 32 mean spacings in which the level staircase leaves the band
/// `weyl_count(k) +- (N + 2)`.
pub fn weyl_violations(problem: &SpectralProblem, roots: &[f64], k_max: f64) -> Vec<(f64, f64)> {
    let tol = problem.weyl_tolerance();
    let width = WINDOW_SPACINGS * problem.mean_spacing();
    let window_of = |k: f64| libm::floor(k / width) as usize;
    let mut bad: Vec<usize> = Vec::new();
    let mut flag = |w: usize| {
        if bad.last() != Some(&w) {
            bad.push(w);
        }
    };
    for (i, &k) in roots.iter().enumerate() {
        let weyl = problem.weyl_count(k);
        let below = i as f64;
        let at = (i + 1) as f64;
        if (at - weyl).abs() > tol || (below - weyl).abs() > tol {
            flag(window_of(k));
        }
    }
    if (roots.len() as f64 - problem.weyl_count(k_max)).abs() > tol {
        flag(window_of(k_max));
    }
    bad.into_iter()
        .map(|w| (w as f64 * width, ((w + 1) as f64 * width).min(k_max)))
        .collect()
}

/// Number of levels in `(0, k]`, from the Pruefer phase of the solution
/// started at the left wall.
///
/// With `psi = rho sin(theta)` and `psi' / k = rho cos(theta)`, free motion
/// over a length `l` adds `k l` to `theta`, and a defect maps
/// `tan(theta) -> tan(theta) / alpha^2` on the same branch (plus `pi` when
/// `alpha < 0`, which flips the sign of both `psi` and `psi'`). The phase at
/// `x = L` increases strictly with `k` and hits a multiple of `pi` exactly at
/// each level, so the count is `floor(theta(L) / pi)` minus the offset
/// accumulated at `k = 0`.
pub fn level_count(problem: &SpectralProblem, k: f64) -> usize {
    let alpha = problem.coupling().alpha();
    let a2 = alpha * alpha;
    let flips = if alpha < 0.0 {
        problem.defects().len()
    } else {
        0
    };
    let mut theta = 0.0;
    let mut left = -problem.half_length();
    for &s in problem.defects().positions() {
        theta += k * (s - left);
        let m = libm::round(theta / PI);
        let r = theta - m * PI;
        theta = m * PI + libm::atan2(libm::sin(r), a2 * libm::cos(r));
        if alpha < 0.0 {
            theta += PI;
        }
        left = s;
    }
    theta += k * (problem.half_length() - left);
    let count = libm::floor(theta / PI) as i64 - flips as i64;
    count.max(0) as usize
}

fn count_in(roots: &[f64], a: f64, b: f64) -> usize {
    roots.partition_point(|&r| r <= b) - roots.partition_point(|&r| r <= a)
}

/// Windows of roughly one mean spacing whose root count disagrees with
/// [`level_count`]. A level within rounding distance of a window edge may
/// fall on either side, so any count between those of the shrunk and the
/// widened window is accepted.
fn count_mismatches(
    problem: &SpectralProblem,
    roots: &[f64],
    lo: f64,
    k_max: f64,
) -> Vec<(f64, f64)> {
    let width = problem.mean_spacing();
    let windows = libm::ceil((k_max - lo) / width).max(1.0) as usize;
    let edge = |i: usize| {
        if i == windows {
            k_max
        } else {
            lo + i as f64 * width
        }
    };
    let fuzz = |x: f64| 1e-12 * x.max(1.0);
    // (count just below, count just above) each edge
    let counts = |x: f64| {
        let d = fuzz(x);
        (
            level_count(problem, (x - d).max(0.0)),
            level_count(problem, x + d),
        )
    };
    let mut out = Vec::new();
    let mut previous = counts(lo);
    for i in 1..=windows {
        let (a, b) = (edge(i - 1), edge(i));
        let current = counts(b);
        let fewest = current.0.saturating_sub(previous.1);
        let most = current.1.saturating_sub(previous.0);
        let found = count_in(roots, a, b);
        if found < fewest || found > most {
            out.push((a, b));
        }
        previous = current;
    }
    out
}

fn merge_windows(mut windows: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    windows.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in windows {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Eigenmomenta in `(0, k_max]` of the boxed chain.
///
/// The spectral function is sampled with `grid_per_spacing` points per mean
/// level spacing, sign changes are bisected to full double precision, and
/// close pairs inside a cell are recovered through local-extremum checks.
/// Every window of one mean spacing is then checked against the exact
/// [`level_count`]; mismatched windows are rescanned with a halved step, up
/// to [`MAX_REFINEMENT_ROUNDS`] times. The result must finally sit inside the
/// Weyl band `2Lk/pi +- (N + 2)` everywhere.
pub fn find_spectrum(
    problem: &SpectralProblem,
    k_max: f64,
    grid_per_spacing: usize,
) -> Result<Spectrum> {
    check_k_max(k_max)?;
    if grid_per_spacing == 0 {
        return Err(Error::invalid("grid_per_spacing must be at least 1"));
    }
    let function = SpectralFunction::new(problem)?;
    let f = |k: f64| function.eval(k);
    let mut step = problem.mean_spacing() / grid_per_spacing as f64;
    // F(0) = 0 for every chain; start just above it
    let start = step * 1e-6;
    let mut roots = scan_roots(&f, start, k_max, step);

    let mut suspects = count_mismatches(problem, &roots, start, k_max);
    let mut round = 0;
    while !suspects.is_empty() && round < MAX_REFINEMENT_ROUNDS {
        step *= 0.5;
        round += 1;
        for &(a, b) in &merge_windows(suspects) {
            let fresh = scan_roots(&f, a, b, step);
            roots.retain(|&r| r <= a || r > b);
            roots.extend(fresh);
        }
        roots.sort_by(f64::total_cmp);
        suspects = count_mismatches(problem, &roots, start, k_max);
    }
    suspects.extend(weyl_violations(problem, &roots, k_max));

    let residuals = roots.iter().map(|&k| f(k).abs()).collect();
    let spectrum = Spectrum {
        roots,
        k_max,
        residuals,
    };
    if suspects.is_empty() {
        Ok(spectrum)
    } else {
        Err(Error::IncompleteSpectrum {
            partial: spectrum,
            suspect_windows: merge_windows(suspects),
        })
    }
}
