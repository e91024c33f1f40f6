//! Real nonsymmetric eigensolver: power-of-two balancing, Householder
//! reduction to Hessenberg form, and Francis double-shift QR with
//! eigenvector back-substitution.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Eigenvalues and right eigenvectors, unsorted, as produced by the QR sweep.
#[derive(Debug, Clone)]
pub(crate) struct RawEigen {
    pub values: Vec<Complex64>,
    pub vectors: Vec<Vec<Complex64>>,
}

const EPS: f64 = f64::EPSILON;

struct Square {
    n: usize,
    data: Vec<f64>,
}

impl Square {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }
}

/// Scales rows and columns by powers of two so that row and column norms are
/// comparable. Returns the diagonal scaling `d` with `B = D^{-1} A D`.
fn balance(h: &mut Square) -> Vec<f64> {
    let n = h.n;
    let mut d = vec![1.0; n];
    for _ in 0..64 {
        let mut done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                c += h.at(j, i).abs();
                r += h.at(i, j).abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while c >= g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                d[i] *= f;
                for j in 0..n {
                    h.data[i * n + j] /= f;
                    h.data[j * n + i] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
    d
}

/// Householder reduction to upper Hessenberg form, accumulating the
/// orthogonal factor in `v`.
fn orthes(h: &mut Square, v: &mut Square) {
    let n = h.n;
    if n == 0 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h.at(i, m - 1).abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h.at(i, m - 1) / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;
        for j in m..n {
            let f = (m..=high).rev().map(|i| ort[i] * h.at(i, j)).sum::<f64>() / hh;
            for i in m..=high {
                h.add(i, j, -f * ort[i]);
            }
        }
        for i in 0..=high {
            let f = (m..=high).rev().map(|j| ort[j] * h.at(i, j)).sum::<f64>() / hh;
            for j in m..=high {
                h.add(i, j, -f * ort[j]);
            }
        }
        ort[m] *= scale;
        h.set(m, m - 1, scale * g);
    }

    for i in 0..n {
        for j in 0..n {
            v.set(i, j, if i == j { 1.0 } else { 0.0 });
        }
    }
    for m in (1..high).rev() {
        if h.at(m, m - 1) == 0.0 {
            continue;
        }
        for i in m + 1..=high {
            ort[i] = h.at(i, m - 1);
        }
        for j in m..=high {
            let mut g: f64 = (m..=high).map(|i| ort[i] * v.at(i, j)).sum();
            g = (g / ort[m]) / h.at(m, m - 1);
            for i in m..=high {
                v.add(i, j, g * ort[i]);
            }
        }
    }
}

fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    let q = Complex64::new(xr, xi) / Complex64::new(yr, yi);
    (q.re, q.im)
}

/// Double-shift QR on the Hessenberg `h` followed by back-substitution.
/// On return `v` holds the eigenvectors in the real packed layout: a
/// complex pair `(k, k+1)` with `e[k] > 0` stores the real and imaginary
/// parts of the vector for `d[k] + i e[k]` in columns `k` and `k+1`.
fn hqr2(h: &mut Square, v: &mut Square, d: &mut [f64], e: &mut [f64], max_sweeps: usize) -> Result<()> {
    let nn = h.n;
    let low = 0isize;
    let high = nn as isize - 1;
    let mut n = high;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut t, mut w, mut x, mut y);

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h.at(i, j).abs();
        }
    }

    let u = |i: isize| i as usize;
    let mut iter = 0;
    let mut sweeps = 0usize;
    while n >= low {
        let mut l = n;
        while l > low {
            s = h.at(u(l - 1), u(l - 1)).abs() + h.at(u(l), u(l)).abs();
            if s == 0.0 {
                s = norm;
            }
            if h.at(u(l), u(l - 1)).abs() <= EPS * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            h.add(u(n), u(n), exshift);
            d[u(n)] = h.at(u(n), u(n));
            e[u(n)] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            let (nu, nm) = (u(n), u(n - 1));
            w = h.at(nu, nm) * h.at(nm, nu);
            p = (h.at(nm, nm) - h.at(nu, nu)) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h.add(nu, nu, exshift);
            h.add(nm, nm, exshift);
            x = h.at(nu, nu);
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                d[nm] = x + z;
                d[nu] = d[nm];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nm] = 0.0;
                e[nu] = 0.0;
                x = h.at(nu, nm);
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in nm..nn {
                    z = h.at(nm, j);
                    h.set(nm, j, q * z + p * h.at(nu, j));
                    h.set(nu, j, q * h.at(nu, j) - p * z);
                }
                for i in 0..=nu {
                    z = h.at(i, nm);
                    h.set(i, nm, q * z + p * h.at(i, nu));
                    h.set(i, nu, q * h.at(i, nu) - p * z);
                }
                for i in u(low)..=u(high) {
                    z = v.at(i, nm);
                    v.set(i, nm, q * z + p * v.at(i, nu));
                    v.set(i, nu, q * v.at(i, nu) - p * z);
                }
            } else {
                d[nm] = x + p;
                d[nu] = x + p;
                e[nm] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            sweeps += 1;
            if sweeps > max_sweeps {
                return Err(Error::ConvergenceFailure {
                    iterations: max_sweeps,
                    converged: nn - 1 - u(n),
                    n: nn,
                });
            }
            let nu = u(n);
            x = h.at(nu, nu);
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h.at(nu - 1, nu - 1);
                w = h.at(nu, nu - 1) * h.at(nu - 1, nu);
            }
            if iter == 10 {
                exshift += x;
                for i in u(low)..=nu {
                    h.add(i, i, -x);
                }
                s = h.at(nu, nu - 1).abs() + h.at(nu - 1, nu - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in u(low)..=nu {
                        h.add(i, i, -s);
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;

            let mut m = n - 2;
            while m >= l {
                let mu = u(m);
                z = h.at(mu, mu);
                r = x - z;
                s = y - z;
                p = (r * s - w) / h.at(mu + 1, mu) + h.at(mu, mu + 1);
                q = h.at(mu + 1, mu + 1) - z - r - s;
                r = h.at(mu + 2, mu + 1);
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let lhs = h.at(mu, mu - 1).abs() * (q.abs() + r.abs());
                let rhs = EPS
                    * (p.abs()
                        * (h.at(mu - 1, mu - 1).abs() + z.abs() + h.at(mu + 1, mu + 1).abs()));
                if lhs < rhs {
                    break;
                }
                m -= 1;
            }
            let mu = u(m);
            for i in mu + 2..=nu {
                h.set(i, i - 2, 0.0);
                if i > mu + 2 {
                    h.set(i, i - 3, 0.0);
                }
            }

            for k in mu..nu {
                let notlast = k != nu - 1;
                if k != mu {
                    p = h.at(k, k - 1);
                    q = h.at(k + 1, k - 1);
                    r = if notlast { h.at(k + 2, k - 1) } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != mu {
                        h.set(k, k - 1, -s * x);
                    } else if l != m {
                        h.set(k, k - 1, -h.at(k, k - 1));
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..nn {
                        p = h.at(k, j) + q * h.at(k + 1, j);
                        if notlast {
                            p += r * h.at(k + 2, j);
                            h.add(k + 2, j, -p * z);
                        }
                        h.add(k, j, -p * x);
                        h.add(k + 1, j, -p * y);
                    }
                    for i in 0..=nu.min(k + 3) {
                        p = x * h.at(i, k) + y * h.at(i, k + 1);
                        if notlast {
                            p += z * h.at(i, k + 2);
                            h.add(i, k + 2, -p * r);
                        }
                        h.add(i, k, -p);
                        h.add(i, k + 1, -p * q);
                    }
                    for i in u(low)..=u(high) {
                        p = x * v.at(i, k) + y * v.at(i, k + 1);
                        if notlast {
                            p += z * v.at(i, k + 2);
                            v.add(i, k + 2, -p * r);
                        }
                        v.add(i, k, -p);
                        v.add(i, k + 1, -p * q);
                    }
                }
            }
        }
    }

    if norm == 0.0 {
        return Ok(());
    }

    for n in (0..nn).rev() {
        p = d[n];
        q = e[n];
        if q == 0.0 {
            let mut l = n;
            h.set(n, n, 1.0);
            for i in (0..n).rev() {
                w = h.at(i, i) - p;
                r = (l..=n).map(|j| h.at(i, j) * h.at(j, n)).sum();
                if e[i] < 0.0 {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i] == 0.0 {
                        let denom = if w != 0.0 { w } else { EPS * norm };
                        h.set(i, n, -r / denom);
                    } else {
                        x = h.at(i, i + 1);
                        y = h.at(i + 1, i);
                        q = (d[i] - p) * (d[i] - p) + e[i] * e[i];
                        t = (x * s - z * r) / q;
                        h.set(i, n, t);
                        let next = if x.abs() > z.abs() {
                            (-r - w * t) / x
                        } else {
                            (-s - y * t) / z
                        };
                        h.set(i + 1, n, next);
                    }
                    t = h.at(i, n).abs();
                    if (EPS * t) * t > 1.0 {
                        for j in i..=n {
                            h.set(j, n, h.at(j, n) / t);
                        }
                    }
                }
            }
        } else if q < 0.0 {
            let mut l = n - 1;
            if h.at(n, n - 1).abs() > h.at(n - 1, n).abs() {
                h.set(n - 1, n - 1, q / h.at(n, n - 1));
                h.set(n - 1, n, -(h.at(n, n) - p) / h.at(n, n - 1));
            } else {
                let (cr, ci) = cdiv(0.0, -h.at(n - 1, n), h.at(n - 1, n - 1) - p, q);
                h.set(n - 1, n - 1, cr);
                h.set(n - 1, n, ci);
            }
            h.set(n, n - 1, 0.0);
            h.set(n, n, 1.0);
            for i in (0..n.saturating_sub(1)).rev() {
                let mut ra = 0.0;
                let mut sa = 0.0;
                for j in l..=n {
                    ra += h.at(i, j) * h.at(j, n - 1);
                    sa += h.at(i, j) * h.at(j, n);
                }
                w = h.at(i, i) - p;
                if e[i] < 0.0 {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i] == 0.0 {
                        let (cr, ci) = cdiv(-ra, -sa, w, q);
                        h.set(i, n - 1, cr);
                        h.set(i, n, ci);
                    } else {
                        x = h.at(i, i + 1);
                        y = h.at(i + 1, i);
                        let mut vr = (d[i] - p) * (d[i] - p) + e[i] * e[i] - q * q;
                        let vi = (d[i] - p) * 2.0 * q;
                        if vr == 0.0 && vi == 0.0 {
                            vr = EPS * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (cr, ci) =
                            cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        h.set(i, n - 1, cr);
                        h.set(i, n, ci);
                        if x.abs() > z.abs() + q.abs() {
                            h.set(i + 1, n - 1, (-ra - w * h.at(i, n - 1) + q * h.at(i, n)) / x);
                            h.set(i + 1, n, (-sa - w * h.at(i, n) - q * h.at(i, n - 1)) / x);
                        } else {
                            let (cr, ci) =
                                cdiv(-r - y * h.at(i, n - 1), -s - y * h.at(i, n), z, q);
                            h.set(i + 1, n - 1, cr);
                            h.set(i + 1, n, ci);
                        }
                    }
                    t = h.at(i, n - 1).abs().max(h.at(i, n).abs());
                    if (EPS * t) * t > 1.0 {
                        for j in i..=n {
                            h.set(j, n - 1, h.at(j, n - 1) / t);
                            h.set(j, n, h.at(j, n) / t);
                        }
                    }
                }
            }
        }
    }

    for j in (0..nn).rev() {
        for i in 0..nn {
            let z: f64 = (0..=j).map(|k| v.at(i, k) * h.at(k, j)).sum();
            v.set(i, j, z);
        }
    }
    Ok(())
}

/// All eigenpairs of `a`. At most `100 n` QR sweeps are spent.
pub(crate) fn solve(a: &Matrix) -> Result<RawEigen> {
    let n = a.n();
    let mut h = Square {
        n,
        data: a.as_slice().to_vec(),
    };
    let scaling = balance(&mut h);
    let mut v = Square {
        n,
        data: vec![0.0; n * n],
    };
    orthes(&mut h, &mut v);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    hqr2(&mut h, &mut v, &mut d, &mut e, 100 * n)?;

    for i in 0..n {
        for j in 0..n {
            v.data[i * n + j] *= scaling[i];
        }
    }

    let column = |k: usize| -> Vec<f64> { (0..n).map(|i| v.at(i, k)).collect() };
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        if e[k] == 0.0 {
            values.push(Complex64::new(d[k], 0.0));
            vectors.push(normalized(column(k).into_iter().map(|x| Complex64::new(x, 0.0)).collect()));
            k += 1;
        } else {
            let (re, im) = (column(k), column(k + 1));
            let vec: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
            let conj: Vec<Complex64> = vec.iter().map(|z| z.conj()).collect();
            values.push(Complex64::new(d[k], e[k]));
            values.push(Complex64::new(d[k + 1], e[k + 1]));
            vectors.push(normalized(vec));
            vectors.push(normalized(conj));
            k += 2;
        }
    }
    Ok(RawEigen { values, vectors })
}

fn normalized(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|z| *z /= norm);
    }
    v
}

/// `||A v - λ v||_2` for a unit vector `v`.
pub(crate) fn residual(a: &Matrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    let n = a.n();
    (0..n)
        .map(|i| {
            let av: Complex64 = (0..n).map(|j| v[j] * a[(i, j)]).sum();
            (av - lambda * v[i]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}
