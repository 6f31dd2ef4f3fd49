//! Small-pencil generalized eigenvalue reference via determinant interpolation.
//!
//! det(A - t B) is a polynomial in t of degree at most n. Evaluate it with a
//! pivoted complex LU at n+1 scaled roots of unity, interpolate the
//! coefficients, and root-find with the Durand-Kerner iteration. Degree
//! deficiency (vanishing leading coefficients) corresponds to infinite
//! eigenvalues of the pencil and simply lowers the polynomial degree. No code
//! is shared with the production QZ path.

use num_complex::Complex64;

type C = Complex64;

/// Determinant of a dense complex matrix (row-major, side n) by partially
/// pivoted Gaussian elimination.
pub fn det(mat: &[C], n: usize) -> C {
    assert_eq!(mat.len(), n * n);
    let mut a = mat.to_vec();
    let mut d = C::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm();
        for r in col + 1..n {
            let v = a[r * n + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return C::new(0.0, 0.0);
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            d = -d;
        }
        let pv = a[col * n + col];
        d *= pv;
        for r in col + 1..n {
            let f = a[r * n + col] / pv;
            if f.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let upper = a[col * n + k];
                a[r * n + k] -= f * upper;
            }
        }
    }
    d
}

/// All finite generalized eigenvalues of (A, B), each repeated per
/// multiplicity, sorted by (re, im). `scale` sets the sample-circle radius;
/// pass a value comfortably above the largest expected |eigenvalue|.
pub fn finite_eigenvalues(a: &[C], b: &[C], n: usize, scale: f64) -> Vec<C> {
    // Sample det(A - t B) on a circle of radius `scale`.
    let m = n + 1;
    let mut ts = Vec::with_capacity(m);
    let mut ds = Vec::with_capacity(m);
    for j in 0..m {
        let ang = 2.0 * std::f64::consts::PI * (j as f64 + 0.37) / m as f64;
        let t = C::from_polar(scale, ang);
        let mut pencil = vec![C::new(0.0, 0.0); n * n];
        for k in 0..n * n {
            pencil[k] = a[k] - t * b[k];
        }
        ts.push(t);
        ds.push(det(&pencil, n));
    }

    // Newton's divided differences -> monomial coefficients.
    let mut dd = ds.clone();
    for lvl in 1..m {
        for j in (lvl..m).rev() {
            dd[j] = (dd[j] - dd[j - 1]) / (ts[j] - ts[j - lvl]);
        }
    }
    // Expand the Newton form into monomial coefficients:
    // p(x) = dd[m-1]; then repeatedly p(x) <- p(x)*(x - ts[j]) + dd[j].
    let mut coef = vec![C::new(0.0, 0.0); m];
    coef[0] = dd[m - 1];
    let mut deg = 0usize;
    for j in (0..m - 1).rev() {
        deg += 1;
        let mut next = vec![C::new(0.0, 0.0); m];
        for k in 0..deg {
            next[k + 1] += coef[k];
            next[k] -= coef[k] * ts[j];
        }
        next[0] += dd[j];
        coef = next;
    }

    // Trim vanishing leading coefficients (infinite eigenvalues).
    let cmax = coef.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if cmax == 0.0 {
        return Vec::new(); // identically singular pencil
    }
    let mut d = n;
    while d > 0 && coef[d].norm() <= 1e-10 * cmax * scale.powi(-(d as i32)) {
        d -= 1;
    }
    if d == 0 {
        return Vec::new();
    }
    let poly: Vec<C> = coef[..=d].to_vec();

    durand_kerner(&poly)
}

/// Roots of a complex polynomial (coefficients low-to-high, leading nonzero).
fn durand_kerner(poly: &[C]) -> Vec<C> {
    let d = poly.len() - 1;
    let lead = poly[d];
    let monic: Vec<C> = poly.iter().map(|c| c / lead).collect();
    let eval = |x: C| -> C {
        let mut acc = C::new(0.0, 0.0);
        for k in (0..=d).rev() {
            acc = acc * x + monic[k];
        }
        acc
    };
    // Cauchy-style radius bound for initial guesses.
    let r = 1.0 + monic.iter().take(d).map(|c| c.norm()).fold(0.0f64, f64::max);
    let mut roots: Vec<C> = (0..d)
        .map(|j| C::from_polar(r * 0.7, 2.0 * std::f64::consts::PI * j as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..600 {
        let mut delta = 0.0f64;
        for j in 0..d {
            let mut denom = C::new(1.0, 0.0);
            for k in 0..d {
                if k != j {
                    denom *= roots[j] - roots[k];
                }
            }
            let step = eval(roots[j]) / denom;
            roots[j] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * r {
            break;
        }
    }
    roots.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
    roots
}
