//! Minimal iterative radix-2 FFT used by the uniform-grid periodogram
//! fast path. Forward convention `X(j) = sum_r x(r) e^{-2 pi i j r / n}`.

pub(crate) fn fft_in_place(re: &mut [f64], im: &mut [f64]) {
    let n = re.len();
    debug_assert_eq!(n, im.len());
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let mut len = 2usize;
    while len <= n {
        let angle = -2.0 * std::f64::consts::PI / len as f64;
        let (ws, wc) = angle.sin_cos();
        for start in (0..n).step_by(len) {
            let mut w_re = 1.0f64;
            let mut w_im = 0.0f64;
            for off in 0..len / 2 {
                let a = start + off;
                let b = a + len / 2;
                let t_re = re[b] * w_re - im[b] * w_im;
                let t_im = re[b] * w_im + im[b] * w_re;
                re[b] = re[a] - t_re;
                im[b] = im[a] - t_im;
                re[a] += t_re;
                im[a] += t_im;
                let next_re = w_re * wc - w_im * ws;
                let next_im = w_re * ws + w_im * wc;
                w_re = next_re;
                w_im = next_im;
            }
        }
        len <<= 1;
    }
}

/// 2D FFT of a row-major `side x side` grid (rows first, then columns).
pub(crate) fn fft2_in_place(re: &mut [f64], im: &mut [f64], side: usize) {
    debug_assert_eq!(re.len(), side * side);
    for row in 0..side {
        fft_in_place(
            &mut re[row * side..(row + 1) * side],
            &mut im[row * side..(row + 1) * side],
        );
    }
    let mut col_re = vec![0.0; side];
    let mut col_im = vec![0.0; side];
    for col in 0..side {
        for row in 0..side {
            col_re[row] = re[row * side + col];
            col_im[row] = im[row * side + col];
        }
        fft_in_place(&mut col_re, &mut col_im);
        for row in 0..side {
            re[row * side + col] = col_re[row];
            im[row * side + col] = col_im[row];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dft_naive(values: &[f64]) -> Vec<(f64, f64)> {
        let n = values.len();
        (0..n)
            .map(|j| {
                let mut re = 0.0;
                let mut im = 0.0;
                for (r, &v) in values.iter().enumerate() {
                    let angle = -2.0 * std::f64::consts::PI * (j * r) as f64 / n as f64;
                    re += v * angle.cos();
                    im += v * angle.sin();
                }
                (re, im)
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let values: Vec<f64> = (0..64).map(|i| ((i * 37 + 11) % 17) as f64 - 8.0).collect();
        let mut re = values.clone();
        let mut im = vec![0.0; 64];
        fft_in_place(&mut re, &mut im);
        for (j, (er, ei)) in dft_naive(&values).into_iter().enumerate() {
            assert!((re[j] - er).abs() < 1e-9, "j={j}");
            assert!((im[j] - ei).abs() < 1e-9, "j={j}");
        }
    }
}
