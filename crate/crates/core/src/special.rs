//! Special functions: normal CDF, regularized incomplete beta and complex
//! log-gamma.

use num_complex::Complex64;
use statrs::function::beta;
use std::f64::consts::PI;

/// Standard normal distribution function.
pub fn normal_cdf(a: f64) -> f64 {
    0.5 * libm::erfc(-a / std::f64::consts::SQRT_2)
}

/// CDF of `Beta(a, b)` at `x`, with the degenerate laws `a = 0` (point mass
/// at 0) and `b = 0` (point mass at 1) handled explicitly.
pub fn beta_cdf(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return if a == 0.0 { 1.0 } else { 0.0 };
    }
    if x >= 1.0 {
        return 1.0;
    }
    if a == 0.0 {
        return 1.0;
    }
    if b == 0.0 {
        return 0.0;
    }
    beta::beta_reg(a, b, x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-ish `log Γ(z)` for complex `z` (Lanczos with reflection). The
/// imaginary part may differ from the principal branch by a multiple of `2π`,
/// which is harmless once exponentiated.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_complex(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `1/Γ(z)`, entire; returns exactly zero at the poles of `Γ`.
pub fn recip_gamma_complex(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.im == 0.0 {
        // the real path is more accurate for real arguments
        let g = gamma(z.re);
        return Complex64::new(1.0 / g, 0.0);
    }
    (-ln_gamma_complex(z)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_cdf_symmetry_and_values() {
        for i in 0..=100 {
            let a = -5.0 + 0.1 * i as f64;
            assert!((normal_cdf(a) + normal_cdf(-a) - 1.0).abs() < 1e-14);
        }
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-12);
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn normal_cdf_reference_table() {
        // 50 points on [-6, 6], 30-digit reference values
        let table: [(f64, f64); 50] = [
        (-6.0, 9.865876450376981407e-10),
        (-5.755102040816326, 4.3294737585959220033e-9),
        (-5.510204081632653, 1.7920894773734254461e-8),
        (-5.26530612244898, 6.9977974958383678786e-8),
        (-5.020408163265306, 2.5780899216204445766e-7),
        (-4.775510204081632, 8.9626100505208703182e-7),
        (-4.530612244897959, 2.9406498582287970041e-6),
        (-4.285714285714286, 9.107648574484000888e-6),
        (-4.040816326530612, 0.000026632732402504282168),
        (-3.795918367346939, 0.000073548949781638394018),
        (-3.5510204081632653, 0.00019187032999652310114),
        (-3.306122448979592, 0.00047298369249688842558),
        (-3.061224489795918, 0.0011021687712128373817),
        (-2.816326530612245, 0.0024288133851081427182),
        (-2.5714285714285716, 0.0050639952746953306779),
        (-2.326530612244898, 0.0099951306705066497428),
        (-2.0816326530612246, 0.018688018232839383874),
        (-1.8367346938775508, 0.033124535455597248285),
        (-1.591836734693878, 0.055710696888732034292),
        (-1.3469387755102042, 0.088999975939624811539),
        (-1.1020408163265305, 0.13522196363824505571),
        (-0.8571428571428568, 0.19568296915377609516),
        (-0.6122448979591839, 0.27018787011441763941),
        (-0.36734693877551017, 0.35668012281784726009),
        (-0.12244897959183643, 0.45127172510890495593),
        (0.12244897959183643, 0.54872827489109504407),
        (0.36734693877551017, 0.64331987718215273991),
        (0.6122448979591839, 0.72981212988558236059),
        (0.8571428571428568, 0.80431703084622390484),
        (1.1020408163265305, 0.86477803636175494429),
        (1.3469387755102042, 0.91100002406037518846),
        (1.591836734693878, 0.94428930311126796571),
        (1.8367346938775508, 0.96687546454440275171),
        (2.0816326530612237, 0.98131198176716057553),
        (2.3265306122448983, 0.99000486932949336209),
        (2.571428571428571, 0.99493600472530466283),
        (2.816326530612244, 0.99757118661489185057),
        (3.0612244897959187, 0.99889783122878716425),
        (3.3061224489795915, 0.99952701630750311082),
        (3.551020408163266, 0.99980812967000347755),
        (3.795918367346939, 0.99992645105021836161),
        (4.040816326530612, 0.99997336726759749572),
        (4.2857142857142865, 0.99999089235142551604),
        (4.530612244897959, 0.9999970593501417712),
        (4.775510204081632, 0.99999910373899494791),
        (5.020408163265307, 0.99999974219100783796),
        (5.26530612244898, 0.99999993002202504162),
        (5.5102040816326525, 0.99999998207910522627),
        (5.755102040816327, 0.9999999956705262414),
        (6.0, 0.99999999901341235496)

        ];
        for (x, want) in table {
            assert!((normal_cdf(x) - want).abs() < 1e-12, "Phi({x})");
        }
    }

    #[test]
    fn beta_cdf_edges() {
        // arcsine law
        let x: f64 = 0.3;
        let arcsine = 2.0 / PI * x.sqrt().asin();
        assert!((beta_cdf(0.5, 0.5, x) - arcsine).abs() < 1e-12);
        assert_eq!(beta_cdf(0.0, 1.0, 0.0), 1.0);
        assert_eq!(beta_cdf(1.0, 0.0, 0.99), 0.0);
        assert_eq!(beta_cdf(1.0, 0.0, 1.0), 1.0);
        assert!((beta_cdf(1.0, 1.0, 0.25) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn complex_log_gamma_matches_real() {
        for &x in &[0.1, 0.5, 1.0, 1.5, 2.5, 7.3, 20.0, -0.5, -2.7] {
            let z = ln_gamma_complex(Complex64::new(x, 0.0)).exp();
            let g = gamma(x);
            assert!(((z.re - g) / g).abs() < 1e-12, "x = {x}: {} vs {g}", z.re);
        }
        // Γ(1 + i) = i Γ(i); |Γ(i)|^2 = π / (sinh π)
        let gi = ln_gamma_complex(Complex64::new(0.0, 1.0)).exp();
        assert!((gi.norm_sqr() - PI / PI.sinh()).abs() < 1e-12);
        let g1i = ln_gamma_complex(Complex64::new(1.0, 1.0)).exp();
        let rhs = Complex64::new(0.0, 1.0) * gi;
        assert!((g1i - rhs).norm() < 1e-12);
    }

    #[test]
    fn reciprocal_gamma_at_poles() {
        assert_eq!(recip_gamma_complex(Complex64::new(-3.0, 0.0)).norm(), 0.0);
        assert!((recip_gamma_complex(Complex64::new(1.5, 0.0)).re - 2.0 / PI.sqrt()).abs() < 1e-14);
    }
}
