#pragma once

// Evaluable representations of completely monotone, Bernstein, creep (CrF)
// and complete Bernstein functions, plus sample-based class checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "viscowave/error.hpp"
#include "viscowave/measure.hpp"

namespace viscowave {

// ---------------------------------------------------------------------------
// Representations

/// f(t) = integral of e^{-tr} mu(dr).
struct CMRepr {
    RadonMeasure measure;
};

/// f(t) = a + b t + integral of (1 - e^{-rt}) lambda(dr).
struct BernsteinRepr {
    double a = 0.0;
    double b = 0.0;
    RadonMeasure measure;
};

/// f(x) = a + b x + x * integral of mu(dr) / (x + r).
struct StieltjesRepr {
    double a = 0.0;
    double b = 0.0;
    RadonMeasure measure;
};

// k(t) = c t^(alpha - 1), 0 < alpha < 1.
struct PowerKernel {
    double c = 1.0;
    double alpha = 0.5;
};

struct ExpSumTerm {
    double weight;
    double rate;
};

// k(t) = sum_i w_i e^{-r_i t}.
struct ExpSumKernel {
    std::vector<ExpSumTerm> terms;
};

// Right-continuous step function: k(t) = k[i] on [t[i], t[i+1]), k.back()
// beyond t.back(). t[0] must be 0.
struct TableKernel {
    std::vector<double> t;
    std::vector<double> k;
};

// k(t) = measure(]t, inf[); the general image of a Levy measure.
struct TailKernel {
    RadonMeasure measure;
};

using Kernel = std::variant<PowerKernel, ExpSumKernel, TableKernel, TailKernel>;

/// J(t) = a + b t + integral_0^t k(s) ds with k the sum of the kernel terms.
struct CrfRepr {
    double a = 0.0;
    double b = 0.0;
    std::vector<Kernel> kernel;
};

inline void validate(const Kernel& k) {
    std::visit(
        [](const auto& kk) {
            using K = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<K, PowerKernel>) {
                if (!(kk.c >= 0.0) || !std::isfinite(kk.c))
                    throw InvalidKernelError("power kernel: c must be finite and non-negative");
                if (!(kk.alpha > 0.0 && kk.alpha < 1.0))
                    throw InvalidKernelError("power kernel: alpha must lie in ]0,1[");
            } else if constexpr (std::is_same_v<K, ExpSumKernel>) {
                for (const auto& t : kk.terms)
                    if (!(t.weight >= 0.0) || !(t.rate > 0.0) || !std::isfinite(t.weight) || !std::isfinite(t.rate))
                        throw InvalidKernelError("exp-sum kernel: need weight >= 0 and rate > 0");
            } else if constexpr (std::is_same_v<K, TableKernel>) {
                if (kk.t.empty() || kk.t.size() != kk.k.size())
                    throw InvalidKernelError("table kernel: need matching, non-empty t and k");
                if (kk.t.front() != 0.0) throw InvalidKernelError("table kernel: first knot must be t = 0");
                for (std::size_t i = 0; i < kk.t.size(); ++i) {
                    if (!(kk.k[i] >= 0.0) || !std::isfinite(kk.k[i]) || !std::isfinite(kk.t[i]))
                        throw InvalidKernelError("table kernel: values must be finite and non-negative");
                    if (i > 0 && !(kk.t[i] > kk.t[i - 1]))
                        throw InvalidKernelError("table kernel: knots must be strictly increasing");
                    if (i > 0 && kk.k[i] > kk.k[i - 1])
                        throw InvalidKernelError("table kernel: values must be non-increasing");
                }
            } else {
                if (!check_twoineq(kk.measure).holds)
                    throw InvalidKernelError("tail kernel: measure violates the Levy integrability condition");
            }
        },
        k);
}

inline void validate(const CrfRepr& j) {
    if (!(j.a >= 0.0) || !(j.b >= 0.0) || !std::isfinite(j.a) || !std::isfinite(j.b))
        throw DomainError("creep representation: a and b must be finite and non-negative");
    for (const auto& k : j.kernel) validate(k);
}

inline void validate(const BernsteinRepr& f) {
    if (!(f.a >= 0.0) || !(f.b >= 0.0) || !std::isfinite(f.a) || !std::isfinite(f.b))
        throw DomainError("Bernstein representation: a and b must be finite and non-negative");
    if (!check_twoineq(f.measure).holds)
        throw DomainError("Bernstein representation: measure violates the Levy integrability condition");
}

inline void validate(const StieltjesRepr& f) {
    if (!(f.a >= 0.0) || !(f.b >= 0.0) || !std::isfinite(f.a) || !std::isfinite(f.b))
        throw DomainError("Stieltjes representation: a and b must be finite and non-negative");
    if (!check_licm(f.measure).holds)
        throw DomainError("Stieltjes representation: integral of mu(dr)/(1+r) must be finite");
}

// ---------------------------------------------------------------------------
// Kernels

inline double kernel_value(const Kernel& k, double t) {
    return std::visit(
        [t](const auto& kk) -> double {
            using K = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<K, PowerKernel>) {
                return kk.c * std::pow(t, kk.alpha - 1.0);
            } else if constexpr (std::is_same_v<K, ExpSumKernel>) {
                double s = 0.0;
                for (const auto& term : kk.terms) s += term.weight * std::exp(-term.rate * t);
                return s;
            } else if constexpr (std::is_same_v<K, TableKernel>) {
                auto it = std::upper_bound(kk.t.begin(), kk.t.end(), t);
                if (it == kk.t.begin()) return kk.k.front();
                return kk.k[static_cast<std::size_t>(it - kk.t.begin()) - 1];
            } else {
                return t > 0.0 ? tail_mass(kk.measure, t) : kInf;
            }
        },
        k);
}

/// Integral of k over [0, t], exact for every kernel type.
inline double kernel_primitive(const Kernel& k, double t) {
    if (t <= 0.0) return 0.0;
    return std::visit(
        [t](const auto& kk) -> double {
            using K = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<K, PowerKernel>) {
                return kk.c * std::pow(t, kk.alpha) / kk.alpha;
            } else if constexpr (std::is_same_v<K, ExpSumKernel>) {
                double s = 0.0;
                for (const auto& term : kk.terms) s += term.weight / term.rate * -std::expm1(-term.rate * t);
                return s;
            } else if constexpr (std::is_same_v<K, TableKernel>) {
                double s = 0.0;
                for (std::size_t i = 0; i < kk.t.size(); ++i) {
                    const double lo = kk.t[i];
                    if (t <= lo) break;
                    const double hi = i + 1 < kk.t.size() ? std::min(t, kk.t[i + 1]) : t;
                    s += kk.k[i] * (hi - lo);
                }
                return s;
            } else {
                return tail_mass_primitive(kk.measure, t);
            }
        },
        k);
}

/// p times the Laplace transform of k, for Re p >= 0, p != 0.
inline Complex kernel_laplace_symbol(const Kernel& k, Complex p, LevyRoute route = LevyRoute::closed_form) {
    return std::visit(
        [p, route](const auto& kk) -> Complex {
            using K = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<K, PowerKernel>) {
                return kk.c * std::tgamma(kk.alpha) * std::pow(p, 1.0 - kk.alpha);
            } else if constexpr (std::is_same_v<K, ExpSumKernel>) {
                Complex s = 0.0;
                for (const auto& term : kk.terms) s += term.weight * p / (p + term.rate);
                return s;
            } else if constexpr (std::is_same_v<K, TableKernel>) {
                Complex s = kk.k.back();
                for (std::size_t j = 1; j < kk.t.size(); ++j)
                    s += (kk.k[j - 1] - kk.k[j]) * detail::one_minus_exp(p * kk.t[j]);
                return s;
            } else {
                return levy_integral(kk.measure, p, route);
            }
        },
        k);
}

inline double eval_crf(const CrfRepr& j, double t) {
    if (t < 0.0) throw DomainError("eval_crf requires t >= 0");
    double s = j.a + j.b * t;
    for (const auto& k : j.kernel) s += kernel_primitive(k, t);
    return s;
}

/// p^2 times the Laplace transform of J: a p + b + p k~(p).
inline Complex creep_laplace_symbol(const CrfRepr& j, Complex p, LevyRoute route = LevyRoute::closed_form) {
    Complex s = j.a * p + j.b;
    for (const auto& k : j.kernel) s += kernel_laplace_symbol(k, p, route);
    return s;
}

// ---------------------------------------------------------------------------
// Evaluation

inline double eval_cm(const CMRepr& f, double t, const QuadratureOptions& opt = {}) {
    if (!(t > 0.0)) throw DomainError("eval_cm requires t > 0");
    QuadratureOptions o = opt;
    o.scales.push_back(1.0 / t);
    return integrate(f.measure, [t](double r) { return std::exp(-t * r); }, Interval::positive_axis(), o);
}

inline double eval_bf(const BernsteinRepr& f, double t, const QuadratureOptions& opt = {}) {
    if (!(t >= 0.0)) throw DomainError("eval_bf requires t >= 0");
    return f.a + f.b * t + levy_integral(f.measure, t, opt);
}

/// Analytic continuation to Re p >= 0.
inline Complex eval_bf(const BernsteinRepr& f, Complex p, LevyRoute route = LevyRoute::closed_form,
                       const QuadratureOptions& opt = {}) {
    return f.a + f.b * p + levy_integral(f.measure, p, route, opt);
}

struct SlopeEstimate {
    double slope;
    // f(T)/T at every probe time; non-increasing for a Bernstein function.
    std::vector<double> ratios;
};

/// Estimates lim f(t)/t from the secant slope over the last two probe times,
/// checking that f(T)/T decreases along the probes.
inline SlopeEstimate limit_slope(const BernsteinRepr& f, const std::vector<double>& probe_times) {
    if (probe_times.size() < 2) throw DomainError("limit_slope needs at least two probe times");
    for (std::size_t i = 0; i < probe_times.size(); ++i) {
        if (!(probe_times[i] > 0.0) || (i > 0 && !(probe_times[i] > probe_times[i - 1])))
            throw DomainError("limit_slope probe times must be positive and increasing");
    }
    SlopeEstimate out;
    std::vector<double> values;
    for (double T : probe_times) {
        values.push_back(eval_bf(f, T));
        out.ratios.push_back(values.back() / T);
    }
    for (std::size_t i = 1; i < out.ratios.size(); ++i) {
        const double prev = out.ratios[i - 1];
        if (out.ratios[i] > prev + 1e-9 * (1.0 + std::abs(prev)))
            throw InconsistencyError("f(T)/T increased between probe times " + std::to_string(probe_times[i - 1]) +
                                     " and " + std::to_string(probe_times[i]));
    }
    const std::size_t n = probe_times.size();
    out.slope = (values[n - 1] - values[n - 2]) / (probe_times[n - 1] - probe_times[n - 2]);
    return out;
}

// ---------------------------------------------------------------------------
// Sample-based class checks

inline constexpr double kVerdictTolerance = 1e-9;

struct Sample {
    double t;
    double f;
};

struct CrfVerdict {
    bool is_crf = true;
    std::optional<double> witness;
    std::string reason;
    double tolerance = kVerdictTolerance;
};

/// Non-negative, non-decreasing and midpoint-concave on consecutive triples.
/// The witness is the t of the first violating sample (middle of a triple for
/// concavity).
inline CrfVerdict classify_crf(const std::vector<Sample>& samples, double tolerance = kVerdictTolerance) {
    if (samples.size() < 3) throw DomainError("classify_crf needs at least 3 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].t >= 0.0) || !std::isfinite(samples[i].f))
            throw DomainError("classify_crf samples need t >= 0 and finite f");
        if (i > 0 && !(samples[i].t > samples[i - 1].t))
            throw DomainError("classify_crf samples must be sorted by strictly increasing t");
    }
    auto tol_at = [tolerance](double scale) { return tolerance * (1.0 + std::abs(scale)); };
    CrfVerdict v;
    v.tolerance = tolerance;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (s.f < -tol_at(s.f)) return {false, s.t, "negative", tolerance};
        if (i > 0 && s.f < samples[i - 1].f - tol_at(std::max(std::abs(s.f), std::abs(samples[i - 1].f))))
            return {false, s.t, "decreasing", tolerance};
        if (i > 0 && i + 1 < samples.size()) {
            const auto& x = samples[i - 1];
            const auto& z = samples[i + 1];
            const double theta = (z.t - s.t) / (z.t - x.t);
            const double chord = theta * x.f + (1.0 - theta) * z.f;
            const double scale = std::max({std::abs(x.f), std::abs(s.f), std::abs(z.f)});
            if (chord > s.f + tol_at(scale)) return {false, s.t, "convex", tolerance};
        }
    }
    return v;
}

struct DifferenceVerdict {
    bool pass = true;
    std::optional<int> failing_order;
    // Stencil centre of the first failing difference.
    std::optional<double> first_failure;
    // Interpolated sign change bounding the failing region.
    std::optional<double> witness;
    double tolerance = kVerdictTolerance;
};

using RealFunction = std::function<double(double)>;

namespace detail {

// Checks sign(order) * Delta_h^order f(x) >= -tol for each requested order.
inline DifferenceVerdict difference_check(const RealFunction& f, int max_order, int min_order,
                                          const std::function<int(int)>& sign, const std::vector<double>& grid,
                                          double h, double tolerance) {
    if (grid.empty()) throw DomainError("difference check needs a non-empty grid");
    if (!(h > 0.0)) throw DomainError("difference step h must be positive");
    if (!(tolerance > 0.0)) throw DomainError("verdict tolerance must be positive");
    if (max_order < min_order || max_order > 60) throw DomainError("difference order out of range");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("difference grid must be increasing");

    const auto n_max = static_cast<std::size_t>(max_order);
    // values[i][j] = f(grid[i] + j h)
    std::vector<std::vector<double>> values(grid.size(), std::vector<double>(n_max + 1));
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j <= n_max; ++j) {
            values[i][j] = f(grid[i] + static_cast<double>(j) * h);
            if (!std::isfinite(values[i][j])) throw DomainError("function is not finite on the difference stencil");
        }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    DifferenceVerdict out;
    out.tolerance = tolerance;
    for (int order = min_order; order <= max_order; ++order) {
        const auto n = static_cast<std::size_t>(order);
        std::vector<double> diff(grid.size()), tol(grid.size()), centre(grid.size());
        double signal = 0.0, noise_floor = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            // Delta^n f(x) = sum_j (-1)^(n-j) C(n,j) f(x + j h)
            double d = 0.0, binom = 1.0, scale = 0.0;
            for (std::size_t j = 0; j <= n; ++j) {
                const double sgn = ((n - j) % 2 == 0) ? 1.0 : -1.0;
                d += sgn * binom * values[i][j];
                scale = std::max(scale, std::abs(values[i][j]));
                binom = binom * static_cast<double>(n - j) / static_cast<double>(j + 1);
            }
            const double noise = 4.0 * std::ldexp(eps, order) * scale;
            diff[i] = sign(order) * d;
            tol[i] = std::max(tolerance * scale, noise);
            centre[i] = grid[i] + 0.5 * static_cast<double>(order) * h;
            signal = std::max(signal, std::abs(d));
            noise_floor = std::max(noise_floor, noise);
        }
        if (order > 0 && signal <= noise_floor)
            throw PrecisionError("order " + std::to_string(order) +
                                 " differences are below the rounding-noise floor; increase h");
        std::optional<std::size_t> first;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (diff[i] < -tol[i]) {
                first = i;
                break;
            }
        if (!first) continue;

        out.pass = false;
        out.failing_order = order;
        out.first_failure = centre[*first];
        out.tolerance = tol[*first];
        auto crossing = [&](std::size_t lo, std::size_t hi) {
            const double denom = diff[lo] - diff[hi];
            const double w = denom != 0.0 ? diff[lo] / denom : 0.5;
            return centre[lo] + w * (centre[hi] - centre[lo]);
        };
        if (*first > 0) {
            out.witness = crossing(*first - 1, *first);
        } else {
            out.witness = centre[*first];
            for (std::size_t i = *first + 1; i < grid.size(); ++i)
                if (diff[i] >= 0.0) {
                    out.witness = crossing(i - 1, i);
                    break;
                }
        }
        return out;
    }
    return out;
}

} // namespace detail

/// (-1)^n Delta_h^n f >= -tol for every n <= order at every grid point;
/// the finite-difference form of complete monotonicity.
inline DifferenceVerdict check_cm_differences(const RealFunction& f, int order, const std::vector<double>& grid,
                                              double h, double tolerance = kVerdictTolerance) {
    return detail::difference_check(f, order, 0, [](int n) { return n % 2 == 0 ? 1 : -1; }, grid, h, tolerance);
}

/// f >= 0 and (-1)^(n-1) Delta_h^n f >= -tol for 1 <= n <= order: the
/// derivative of f is completely monotone.
inline DifferenceVerdict check_bernstein_differences(const RealFunction& f, int order,
                                                     const std::vector<double>& grid, double h,
                                                     double tolerance = kVerdictTolerance) {
    return detail::difference_check(f, order, 0, [](int n) { return n == 0 || n % 2 == 1 ? 1 : -1; }, grid, h,
                                    tolerance);
}

// ---------------------------------------------------------------------------
// Complete Bernstein functions

using ComplexFunction = std::function<Complex(Complex)>;

inline Complex eval_cbf(const StieltjesRepr& f, Complex z, const QuadratureOptions& opt = {}) {
    if (z.imag() == 0.0 && !(z.real() > 0.0))
        throw BranchError("complete Bernstein functions are not defined on ]-inf, 0]");
    QuadratureOptions o = opt;
    o.scales.push_back(std::abs(z));
    if (z.imag() == 0.0) {
        const double x = z.real();
        const double s = integrate(f.measure, [x](double r) { return 1.0 / (x + r); }, Interval::positive_axis(), o);
        return {f.a + f.b * x + x * s, 0.0};
    }
    const Complex s = integrate(f.measure, [z](double r) { return 1.0 / (z + r); }, Interval::positive_axis(), o);
    return f.a + f.b * z + z * s;
}

inline ComplexFunction as_function(const StieltjesRepr& f) {
    return [f](Complex z) { return eval_cbf(f, z); };
}

struct NevanlinnaVerdict {
    bool pass = true;
    std::optional<Complex> witness;
    double tolerance = kVerdictTolerance;
};

/// Im F(z) >= 0 on the given upper half-plane samples, and Im F(conj z) <= 0.
inline NevanlinnaVerdict nevanlinna_check(const ComplexFunction& f, const std::vector<Complex>& samples,
                                          double tolerance = kVerdictTolerance) {
    NevanlinnaVerdict out;
    out.tolerance = tolerance;
    for (const Complex z : samples) {
        if (!(z.imag() > 0.0)) throw DomainError("nevanlinna_check samples must satisfy Im z > 0");
        const Complex up = f(z);
        const Complex down = f(std::conj(z));
        if (!std::isfinite(up.real()) || !std::isfinite(up.imag()) || !std::isfinite(down.real()) ||
            !std::isfinite(down.imag()))
            throw DomainError("function is not finite at a Nevanlinna sample");
        const bool bad_up = up.imag() < -tolerance * std::max(1.0, std::abs(up));
        const bool bad_down = down.imag() > tolerance * std::max(1.0, std::abs(down));
        if (bad_up || bad_down) {
            out.pass = false;
            out.witness = z;
            return out;
        }
    }
    return out;
}

/// Deterministic samples z = rho e^{i theta}, log-uniform rho in [1e-2, 1e2],
/// theta uniform in [0.01 pi, 0.99 pi].
inline std::vector<Complex> upper_half_plane_samples(std::size_t n, std::uint64_t seed = 97) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_mod(std::log(1e-2), std::log(1e2));
    std::uniform_real_distribution<double> angle(0.01 * std::numbers::pi, 0.99 * std::numbers::pi);
    std::vector<Complex> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::polar(std::exp(log_mod(rng)), angle(rng)));
    return out;
}

inline Complex principal_power(Complex w, double alpha) {
    if (alpha == 0.0) return 1.0;
    if (w == Complex(0.0)) return 0.0;
    return std::pow(w, alpha);
}

/// z -> f(z)^alpha on the principal branch, alpha in [0,1].
inline ComplexFunction cbf_power(ComplexFunction f, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("cbf_power requires alpha in [0,1]");
    return [f = std::move(f), alpha](Complex z) { return principal_power(f(z), alpha); };
}

inline ComplexFunction cbf_power(const StieltjesRepr& f, double alpha) { return cbf_power(as_function(f), alpha); }

/// z -> f(z)^alpha g(z)^(1-alpha), principal branches.
inline ComplexFunction cbf_product(ComplexFunction f, ComplexFunction g, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("cbf_product requires alpha in [0,1]");
    return [f = std::move(f), g = std::move(g), alpha](Complex z) {
        return principal_power(f(z), alpha) * principal_power(g(z), 1.0 - alpha);
    };
}

// ---------------------------------------------------------------------------
// Reference functions

/// x -> integral_0^x exp(-y^alpha) dy; a CrF for every alpha > 0 and a
/// Bernstein function only for alpha <= 1.
inline RealFunction creep_example(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("creep_example requires alpha > 0");
    return [alpha](double x) {
        if (x <= 0.0) return 0.0;
        return boost::math::tgamma_lower(1.0 / alpha, std::pow(x, alpha)) / alpha;
    };
}

/// x -> a + b x + c x^alpha.
inline RealFunction power_creep(double a, double b, double c, double alpha) {
    return [=](double x) { return a + b * x + c * std::pow(std::max(x, 0.0), alpha); };
}

inline std::vector<Sample> sample(const RealFunction& f, const std::vector<double>& ts) {
    std::vector<Sample> out;
    out.reserve(ts.size());
    for (double t : ts) out.push_back({t, f(t)});
    return out;
}

} // namespace viscowave
