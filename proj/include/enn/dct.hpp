#pragma once

// Truncated odd-harmonic cosine series used to parameterize activation
// functions. All gains are folded into the coefficients, so a coefficient
// vector F synthesizes f(x) = sum_q F[q] * cos_basis(q, x, N).

#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace enn {

/// Grid length N and coefficient budget Q (Q/2 odd harmonics are kept).
struct BasisConfig {
    std::size_t n = 512;
    std::size_t q = 12;

    std::size_t retained() const { return q / 2; }

    void validate() const {
        if (q < 2 || q % 2 != 0)
            throw std::invalid_argument("BasisConfig: Q must be an even integer >= 2");
        if (n < q)
            throw std::invalid_argument("BasisConfig: N must be >= Q");
    }

    friend bool operator==(const BasisConfig&, const BasisConfig&) = default;
};

namespace detail {
inline double basis_phase(std::size_t q, double x, std::size_t n) {
    const double nd = static_cast<double>(n);
    return std::numbers::pi * static_cast<double>(2 * q - 1) * (nd * (x + 1.0) + 1.0) / (2.0 * nd);
}
} // namespace detail

/// cos( pi (2q-1) (N(x+1)+1) / 2N ), q >= 1. Period 4 in x.
inline double cos_basis(std::size_t q, double x, std::size_t n) {
    return std::cos(detail::basis_phase(q, x, n));
}

inline double sin_basis(std::size_t q, double x, std::size_t n) {
    return std::sin(detail::basis_phase(q, x, n));
}

/// Point about which every retained basis function is odd.
inline double basis_center(std::size_t n) { return -1.0 / static_cast<double>(n); }

/// Sample positions for analyze(): x_n = -1 + 2n/N, n = 0..N-1. On this grid
/// cos_basis(q, x_n, N) is exactly the type-II DCT vector of harmonic 2q-1.
inline std::vector<double> sample_grid(std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n);
    return xs;
}

class DctCoefficients {
public:
    DctCoefficients() : DctCoefficients(BasisConfig{}) {}

    explicit DctCoefficients(BasisConfig config)
        : config_(config), values_(config.retained(), 0.0) {
        config_.validate();
    }

    DctCoefficients(BasisConfig config, std::vector<double> values)
        : config_(config), values_(std::move(values)) {
        config_.validate();
        if (values_.size() != config_.retained())
            throw std::invalid_argument("DctCoefficients: expected Q/2 values");
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("DctCoefficients: non-finite coefficient");
    }

    const BasisConfig& config() const { return config_; }
    std::size_t size() const { return values_.size(); }

    /// values()[i] multiplies cos_basis(i + 1, ., N), i.e. harmonic 2i+1.
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    double abs_sum() const {
        double s = 0.0;
        for (double v : values_) s += std::abs(v);
        return s;
    }

    friend bool operator==(const DctCoefficients&, const DctCoefficients&) = default;

private:
    BasisConfig config_;
    std::vector<double> values_;
};

inline double synthesize(const DctCoefficients& coeffs, double x) {
    const std::size_t n = coeffs.config().n;
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        acc += coeffs[i] * cos_basis(i + 1, x, n);
    return acc;
}

/// d/dx synthesize = -(pi/2) sum_q F_q (2q-1) sin_basis(q, x).
inline double synthesize_derivative(const DctCoefficients& coeffs, double x) {
    const std::size_t n = coeffs.config().n;
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        acc += coeffs[i] * static_cast<double>(2 * i + 1) * sin_basis(i + 1, x, n);
    return -0.5 * std::numbers::pi * acc;
}

/// Orthonormal type-II DCT by direct summation, c_k = g_k sum_n f_n cos(pi k (2n+1) / 2N).
inline std::vector<double> full_dct(std::span<const double> samples) {
    const std::size_t n = samples.size();
    const double nd = static_cast<double>(n);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += samples[i] * std::cos(std::numbers::pi * static_cast<double>(k) *
                                         static_cast<double>(2 * i + 1) / (2.0 * nd));
        out[k] = (k == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd)) * acc;
    }
    return out;
}

struct DctAnalysis {
    DctCoefficients coeffs;
    /// Root-sum-square of every orthonormal coefficient that was discarded
    /// (constant, even harmonics, odd harmonics above Q-1). Equals the l2 norm
    /// of the grid residual, so it bounds the max grid error.
    double tail = 0.0;
};

inline DctAnalysis analyze_with_tail(std::span<const double> samples, BasisConfig config) {
    config.validate();
    if (samples.size() != config.n)
        throw std::invalid_argument("analyze: expected exactly N samples, got " +
                                    std::to_string(samples.size()));
    const std::vector<double> full = full_dct(samples);
    const double gain = std::sqrt(2.0 / static_cast<double>(config.n));

    std::vector<double> kept(config.retained());
    double tail_sq = 0.0;
    for (std::size_t k = 0; k < full.size(); ++k) {
        const bool retained = (k % 2 == 1) && (k < config.q);
        if (retained)
            kept[k / 2] = gain * full[k];
        else
            tail_sq += full[k] * full[k];
    }
    return {DctCoefficients(config, std::move(kept)), std::sqrt(tail_sq)};
}

inline DctCoefficients analyze(std::span<const double> samples, BasisConfig config) {
    return analyze_with_tail(samples, config).coeffs;
}

inline double truncation_tail(std::span<const double> samples, BasisConfig config) {
    return analyze_with_tail(samples, config).tail;
}

/// Samples f on sample_grid(config.n) and analyzes it.
template <class F>
DctAnalysis analyze_function(F&& f, BasisConfig config) {
    config.validate();
    const auto xs = sample_grid(config.n);
    std::vector<double> samples(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) samples[i] = f(xs[i]);
    return analyze_with_tail(samples, config);
}

// Golden vectors: CSV `harmonic,value`, gains folded in.

inline void write_coefficients_csv(std::ostream& os, const DctCoefficients& coeffs) {
    os << "harmonic,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        os << (2 * i + 1) << ',' << coeffs[i] << '\n';
}

inline DctCoefficients read_coefficients_csv(std::istream& is, BasisConfig config) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("harmonic,value", 0) != 0)
        throw std::runtime_error("coefficient CSV: missing `harmonic,value` header");
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("coefficient CSV: malformed row `" + line + "`");
        const long harmonic = std::stol(line.substr(0, comma));
        if (harmonic != static_cast<long>(2 * values.size() + 1))
            throw std::runtime_error("coefficient CSV: harmonics must be 1,3,5,... in order");
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    return DctCoefficients(config, std::move(values));
}

inline DctCoefficients read_coefficients_csv(const std::string& path, BasisConfig config) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_coefficients_csv(in, config);
}

} // namespace enn
