#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace ddisac {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// sum |v[i]|^2
inline double energy(const cvec& v) {
    double acc = 0.0;
    for (const auto& x : v) acc += std::norm(x);
    return acc;
}

// <a, b> = sum conj(a[i]) * b[i]
inline cplx inner(const cvec& a, const cvec& b) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

inline double db10(double x) { return 10.0 * std::log10(x); }
inline double from_db10(double x) { return std::pow(10.0, x / 10.0); }

}  // namespace ddisac
