//! Complex FFT for any length: iterative radix-2 for powers of two, Bluestein
//! chirp-z convolution for everything else.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Twiddles are re-anchored to exact `sin_cos` values this often.
const TWIDDLE_ANCHOR: usize = 256;

/// `exp(-2πik/n)` for `k = 0..count`, generated by recurrence and re-anchored
/// every [`TWIDDLE_ANCHOR`] steps to bound drift.
pub(crate) fn twiddles(n: usize, count: usize) -> Vec<Complex64> {
    let step = unit_root(1, n);
    let mut out = Vec::with_capacity(count);
    let mut w = Complex64::new(1.0, 0.0);
    for k in 0..count {
        if k % TWIDDLE_ANCHOR == 0 {
            w = unit_root(k as u64, n);
        }
        out.push(w);
        w *= step;
    }
    out
}

/// `exp(-2πi·k/n)` evaluated directly, with `k` reduced mod `n`.
pub(crate) fn unit_root(k: u64, n: usize) -> Complex64 {
    let k = k % n as u64;
    let theta = -2.0 * PI * (k as f64) / (n as f64);
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

#[derive(Debug, Clone)]
struct Radix2 {
    len: usize,
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    fn new(len: usize) -> Self {
        debug_assert!(len.is_power_of_two());
        Radix2 {
            len,
            twiddles: twiddles(len, len / 2),
        }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        let n = self.len;
        debug_assert_eq!(buf.len(), n);
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for chunk in buf.chunks_exact_mut(2 * half) {
                let (lo, hi) = chunk.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let t = *b * self.twiddles[k * stride];
                    *b = *a - t;
                    *a += t;
                }
            }
            half *= 2;
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    len: usize,
    inner: Radix2,
    /// `exp(-iπ n²/len)`.
    chirp: Vec<Complex64>,
    /// FFT of the conjugate chirp laid out circularly, pre-scaled by `1/M`.
    kernel: Vec<Complex64>,
}

impl Bluestein {
    fn new(len: usize) -> Self {
        let m = (2 * len - 1).next_power_of_two();
        let inner = Radix2::new(m);
        let two_n = 2 * len as u64;
        let chirp: Vec<Complex64> = (0..len as u64)
            .map(|k| {
                // n² mod 2N is exact in integers, so the phase never loses precision.
                let r = (k as u128 * k as u128 % two_n as u128) as f64;
                let theta = -PI * r / len as f64;
                let (s, c) = theta.sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        let scale = 1.0 / m as f64;
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj() * scale;
        for k in 1..len {
            let v = chirp[k].conj() * scale;
            kernel[k] = v;
            kernel[m - k] = v;
        }
        inner.forward(&mut kernel);
        Bluestein {
            len,
            inner,
            chirp,
            kernel,
        }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        let m = self.inner.len;
        let mut work = vec![Complex64::new(0.0, 0.0); m];
        for ((w, x), c) in work.iter_mut().zip(buf.iter()).zip(&self.chirp) {
            *w = x * c;
        }
        self.inner.forward(&mut work);
        for (w, k) in work.iter_mut().zip(&self.kernel) {
            *w = (*w * k).conj();
        }
        // Inverse via conjugation; the 1/M factor already sits in the kernel.
        self.inner.forward(&mut work);
        for ((out, w), c) in buf.iter_mut().zip(&work).zip(&self.chirp) {
            *out = w.conj() * c;
        }
        debug_assert_eq!(buf.len(), self.len);
    }
}

#[derive(Debug, Clone)]
enum Algorithm {
    Trivial,
    Radix2(Radix2),
    Bluestein(Bluestein),
}

/// A planned unnormalized forward/inverse complex DFT of a fixed length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    algorithm: Algorithm,
}

impl FftPlan {
    pub fn new(len: usize) -> Self {
        let algorithm = if len <= 1 {
            Algorithm::Trivial
        } else if len.is_power_of_two() {
            Algorithm::Radix2(Radix2::new(len))
        } else {
            Algorithm::Bluestein(Bluestein::new(len))
        };
        FftPlan { len, algorithm }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In place `X[l] = Σ x[n]·exp(-2πi·ln/N)`.
    ///
    /// # Panics
    /// If `buf.len()` differs from the planned length.
    pub fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len, "buffer length does not match plan");
        match &self.algorithm {
            Algorithm::Trivial => {}
            Algorithm::Radix2(r) => r.forward(buf),
            Algorithm::Bluestein(b) => b.forward(buf),
        }
    }

    /// In place `x[n] = Σ X[l]·exp(+2πi·ln/N)`, without the `1/N` factor.
    pub fn inverse_unscaled(&self, buf: &mut [Complex64]) {
        buf.iter_mut().for_each(|v| *v = v.conj());
        self.forward(buf);
        buf.iter_mut().for_each(|v| *v = v.conj());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|l| {
                x.iter()
                    .enumerate()
                    .map(|(k, v)| v * unit_root((l * k) as u64, n))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn twiddle_recurrence_stays_accurate() {
        let n = 1 << 16;
        let tw = twiddles(n, n / 2);
        let worst = tw
            .iter()
            .enumerate()
            .map(|(k, w)| (w - unit_root(k as u64, n)).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-13, "worst twiddle drift {worst}");
    }

    #[test]
    fn matches_naive_for_small_lengths() {
        for n in 1..=40 {
            let x: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(((i * 7 + 3) % 5) as f64, ((i * 3) % 4) as f64 - 1.5))
                .collect();
            let mut y = x.clone();
            FftPlan::new(n).forward(&mut y);
            for (a, b) in y.iter().zip(naive(&x)) {
                assert!((a - b).norm() < 1e-10, "n = {n}");
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        for n in [6, 8, 97, 128, 1000] {
            let x: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new((i % 3) as f64, 0.25 * (i % 2) as f64))
                .collect();
            let plan = FftPlan::new(n);
            let mut y = x.clone();
            plan.forward(&mut y);
            plan.inverse_unscaled(&mut y);
            for (a, b) in y.iter().zip(&x) {
                assert!((a / n as f64 - b).norm() < 1e-12);
            }
        }
    }
}
