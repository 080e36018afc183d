#pragma once

#include <cmath>
#include <stdexcept>

namespace hvf {

/// Complete elliptic integral of the first kind in the parameter convention,
/// K(m) = int_0^{pi/2} dtheta / sqrt(1 - m sin^2 theta), for -1 < m < 1,
/// via the arithmetic-geometric mean: K(m) = pi / (2 agm(1, sqrt(1-m))).
inline double elliptic_K(double m) {
    if (!(m > -1.0 && m < 1.0)) throw std::domain_error("elliptic_K: m outside (-1,1)");
    double a = 1.0, b = std::sqrt(1.0 - m);
    for (int i = 0; i < 64; ++i) {
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        a = an;
        b = bn;
        if (std::abs(a - b) < 1e-17 * a) break;
    }
    return M_PI / (2.0 * a);
}

/// K parametrized by the complement u = 1 - m (accurate for m near 1).
inline double elliptic_K_complement(double u) {
    if (!(u > 0.0 && u < 2.0)) throw std::domain_error("elliptic_K_complement: u outside (0,2)");
    double a = 1.0, b = std::sqrt(u);
    for (int i = 0; i < 64; ++i) {
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        a = an;
        b = bn;
        if (std::abs(a - b) < 1e-17 * a) break;
    }
    return M_PI / (2.0 * a);
}

/// Complete elliptic integral of the second kind,
/// E(m) = int_0^{pi/2} sqrt(1 - m sin^2 theta) dtheta, via the AGM
/// c-sequence: E = K (1 - sum 2^{n-1} c_n^2) with c_0^2 = m.
inline double elliptic_E(double m) {
    if (!(m > -1.0 && m < 1.0)) throw std::domain_error("elliptic_E: m outside (-1,1)");
    double a = 1.0, b = std::sqrt(1.0 - m);
    double sum = 0.5 * m;  // 2^{-1} c_0^2, signed
    double pow2 = 1.0;
    for (int i = 0; i < 64; ++i) {
        double c = 0.5 * (a - b);
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        a = an;
        b = bn;
        sum += pow2 * c * c;
        pow2 *= 2.0;
        if (std::abs(c) < 1e-17) break;
    }
    return M_PI / (2.0 * a) * (1.0 - sum);
}

/// dK/dm = (E(m) - (1-m) K(m)) / (2 m (1-m)); the small-m series avoids the
/// 0/0 cancellation (K'(0) = pi/8).
inline double elliptic_K_prime(double m) {
    if (std::abs(m) < 1e-4) {
        // K(m) = (pi/2) sum ((2n choose n)/4^n)^2 m^n
        return M_PI / 2.0 *
               (1.0 / 4.0 + m * (9.0 / 32.0 + m * (75.0 / 256.0 + m * 1225.0 / 4096.0)));
    }
    double K = elliptic_K(m);
    double E = elliptic_E(m);
    return (E - (1.0 - m) * K) / (2.0 * m * (1.0 - m));
}

/// d^2K/dm^2 from the Legendre equation m(1-m)K'' + (1-2m)K' - K/4 = 0,
/// with the series near m = 0 where the quotient degenerates.
inline double elliptic_K_prime2(double m) {
    if (std::abs(m) < 1e-3) {
        return M_PI / 2.0 *
               (9.0 / 32.0 + m * (75.0 / 128.0 + m * (11025.0 / 12288.0)));
    }
    double K = elliptic_K(m);
    double Kp = elliptic_K_prime(m);
    return (K / 4.0 - (1.0 - 2.0 * m) * Kp) / (m * (1.0 - m));
}

/// E in the complement u = 1 - m, stable arbitrarily close to m = 1
/// (E(1) = 1); same AGM c-sequence as elliptic_E with b0 = sqrt(u).
inline double elliptic_E_complement(double u) {
    if (!(u > 0.0 && u < 2.0)) throw std::domain_error("elliptic_E_complement: u outside (0,2)");
    double a = 1.0, b = std::sqrt(u);
    double sum = 0.5 * (1.0 - u);  // 2^{-1} c_0^2 with c_0^2 = m
    double pow2 = 1.0;
    for (int i = 0; i < 64; ++i) {
        double c = 0.5 * (a - b);
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        a = an;
        b = bn;
        sum += pow2 * c * c;
        pow2 *= 2.0;
        if (std::abs(c) < 1e-17) break;
    }
    return M_PI / (2.0 * a) * (1.0 - sum);
}

/// dK/dm and d^2K/dm^2 in the complement parameter, for evaluation near the
/// pole where 1 - m cancels catastrophically in direct form.
inline double elliptic_K_prime_complement(double u) {
    double K = elliptic_K_complement(u);
    double E = elliptic_E_complement(u);
    return (E - u * K) / (2.0 * (1.0 - u) * u);
}

inline double elliptic_K_prime2_complement(double u) {
    double K = elliptic_K_complement(u);
    double Kp = elliptic_K_prime_complement(u);
    return (K / 4.0 + (1.0 - 2.0 * u) * Kp) / ((1.0 - u) * u);
}

}  // namespace hvf
