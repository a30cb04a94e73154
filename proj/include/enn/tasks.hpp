#pragma once

// Synthetic two-input tasks. Classification problems are defined by an
// analytic discriminant d(x) with label sign(d), sign(0) = +1; regression
// problems by their target function.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "enn/network.hpp"
#include "enn/random.hpp"
#include "enn/sample.hpp"

namespace enn {

struct ProblemSpec {
    TaskKind kind = TaskKind::classification;
    std::string name;
    /// Discriminant (classification) or target (regression) on [-1,1]^2.
    std::function<double(double, double)> rule;
};

namespace detail {
inline double disk(double x1, double x2, double c1, double c2, double r) {
    return r - std::hypot(x1 - c1, x2 - c2);
}
inline double ring(double x1, double x2) { return 0.2 - std::abs(std::hypot(x1, x2) - 0.55); }
} // namespace detail

/// Canonical problem names, classification first.
inline const std::vector<std::string>& classification_problems() {
    static const std::vector<std::string> names{"P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8"};
    return names;
}

inline const std::vector<std::string>& regression_problems() {
    static const std::vector<std::string> names{"mean", "quarter-sum-squares", "product"};
    return names;
}

/// Looks up a problem by canonical name or alias (linear, quadratic, cubic,
/// blob, two-circles, ring, lines, face).
inline ProblemSpec find_problem(std::string_view name) {
    using detail::disk;
    const auto cls = [&](std::string canonical, std::function<double(double, double)> d) {
        return ProblemSpec{TaskKind::classification, std::move(canonical), std::move(d)};
    };
    const auto reg = [&](std::string canonical, std::function<double(double, double)> f) {
        return ProblemSpec{TaskKind::regression, std::move(canonical), std::move(f)};
    };

    if (name == "P1" || name == "linear") return cls("P1", [](double a, double b) { return a - b; });
    if (name == "P2" || name == "quadratic")
        return cls("P2", [](double a, double b) { return b - (2.0 * a * a - 0.5); });
    if (name == "P3" || name == "cubic")
        return cls("P3", [](double a, double b) { return b - 2.5 * a * a * a + a; });
    if (name == "P4" || name == "blob")
        return cls("P4", [](double a, double b) { return disk(a, b, 0.2, 0.1, 0.45); });
    if (name == "P5" || name == "two-circles")
        return cls("P5", [](double a, double b) {
            return std::max(disk(a, b, -0.45, -0.45, 0.35), disk(a, b, 0.45, 0.45, 0.35));
        });
    if (name == "P6" || name == "ring") return cls("P6", [](double a, double b) { return detail::ring(a, b); });
    if (name == "P7" || name == "lines")
        return cls("P7", [](double a, double b) { return std::sin(1.5 * std::numbers::pi * (a - b)); });
    if (name == "P8" || name == "face")
        return cls("P8", [](double a, double b) {
            return std::max({detail::ring(a, b), disk(a, b, -0.3, 0.25, 0.15), disk(a, b, 0.3, 0.25, 0.15)});
        });
    if (name == "mean") return reg("mean", [](double a, double b) { return 0.5 * (a + b); });
    if (name == "quarter-sum-squares")
        return reg("quarter-sum-squares", [](double a, double b) { return 0.25 * (a * a + b * b); });
    if (name == "product") return reg("product", [](double a, double b) { return a * b; });
    throw std::invalid_argument("unknown problem `" + std::string(name) + "`");
}

inline double label(const ProblemSpec& problem, std::span<const double> x) {
    if (x.size() != 2) throw std::invalid_argument("label: problems are defined on two inputs");
    const double v = problem.rule(x[0], x[1]);
    if (problem.kind == TaskKind::regression) return v;
    return v >= 0.0 ? 1.0 : -1.0;
}

/// n inputs i.i.d. uniform on [-1,1]^2, labelled by the problem rule.
inline std::vector<Sample> generate_dataset(const ProblemSpec& problem, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate_dataset: n must be > 0");
    Rng rng(seed);
    std::vector<Sample> out(n);
    for (auto& s : out) {
        const double a = rng.uniform(-1.0, 1.0);
        const double b = rng.uniform(-1.0, 1.0);
        s.x = {a, b};
        s.y = label(problem, s.x);
    }
    return out;
}

inline bool is_classification(std::span<const Sample> data) {
    return std::all_of(data.begin(), data.end(), [](const Sample& s) { return s.y == 1.0 || s.y == -1.0; });
}

template <class Act>
double accuracy(const TwoLayerNetwork<Act>& model, std::span<const Sample> data) {
    if (data.empty()) throw std::invalid_argument("accuracy: empty dataset");
    if (!is_classification(data)) throw std::invalid_argument("accuracy: targets must be +-1");
    std::size_t hits = 0;
    ForwardTrace t;
    for (const auto& s : data) {
        forward_into(model, s.x, t);
        if (predict_class(t.y_hat) == static_cast<int>(s.y)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

template <class Act>
double mse(const TwoLayerNetwork<Act>& model, std::span<const Sample> data) {
    if (data.empty()) throw std::invalid_argument("mse: empty dataset");
    double acc = 0.0;
    ForwardTrace t;
    for (const auto& s : data) {
        forward_into(model, s.x, t);
        const double e = s.y - t.y_hat;
        acc += e * e;
    }
    return acc / static_cast<double>(data.size());
}

// CSV `x1,x2,y`.

inline void write_dataset_csv(std::ostream& os, std::span<const Sample> data) {
    os << "x1,x2,y\n" << std::setprecision(17);
    for (const auto& s : data) os << s.x.at(0) << ',' << s.x.at(1) << ',' << s.y << '\n';
}

inline std::vector<Sample> read_dataset_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("x1,x2,y", 0) != 0)
        throw std::runtime_error("dataset CSV: missing `x1,x2,y` header");
    std::vector<Sample> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
            throw std::runtime_error("dataset CSV: malformed row `" + line + "`");
        out.push_back({{std::stod(a), std::stod(b)}, std::stod(c)});
    }
    return out;
}

inline nlohmann::json dataset_manifest(const ProblemSpec& problem, std::size_t n, std::uint64_t seed) {
    return {{"schema", 1},
            {"problem", problem.name},
            {"kind", problem.kind == TaskKind::classification ? "classification" : "regression"},
            {"size", n},
            {"seed", seed}};
}

} // namespace enn
