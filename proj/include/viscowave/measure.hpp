#pragma once

// Positive Radon measures on ]0,inf[ built from atoms and smooth densities,
// with the integrals and integrability tests the function classes rely on.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "viscowave/error.hpp"

namespace viscowave {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Complex = std::complex<double>;

/// Interval of the positive half-line with explicit endpoint membership.
/// Atom bookkeeping depends on it: ]0,1] contains an atom at 1, ]1,inf[ does not.
struct Interval {
    double lo = 0.0;
    double hi = kInf;
    bool include_lo = false;
    bool include_hi = false;

    static Interval positive_axis() { return {0.0, kInf, false, false}; }
    static Interval open_closed(double lo, double hi) { return {lo, hi, false, true}; }
    static Interval above(double r) { return {r, kInf, false, false}; }

    bool contains(double r) const {
        const bool above_lo = include_lo ? r >= lo : r > lo;
        const bool below_hi = include_hi ? r <= hi : r < hi;
        return above_lo && below_hi;
    }
};

struct Atom {
    double location;
    double weight;
};

// coeff * r^exponent on [lo, hi]; hi may be infinite.
struct PowerDensity {
    double coeff = 1.0;
    double exponent = 0.0;
    double lo = 0.0;
    double hi = kInf;
};

struct ExpTerm {
    double coeff;
    double rate;
};

// sum_i coeff_i * exp(-rate_i * r) on ]0, inf[.
struct ExpDensity {
    std::vector<ExpTerm> terms;
};

// Piecewise linear between knots, zero outside [r.front(), r.back()].
struct TableDensity {
    std::vector<double> r;
    std::vector<double> value;
};

namespace detail {

inline double one_minus_exp(double x) { return -std::expm1(-x); }

// 1 - exp(-z) without cancellation for small |z|.
inline Complex one_minus_exp(Complex z) {
    const double decay = std::exp(-z.real());
    const double half_sin = std::sin(0.5 * z.imag());
    return {-std::expm1(-z.real()) + decay * 2.0 * half_sin * half_sin,
            decay * std::sin(z.imag())};
}

// Integral of r^s over [x1, x2] for 0 <= x1 <= x2 <= inf; +inf when divergent.
inline double power_integral(double s, double x1, double x2) {
    if (!(x1 < x2)) return 0.0;
    const double e = s + 1.0;
    if (e == 0.0) {
        if (x1 == 0.0 || x2 == kInf) return kInf;
        return std::log(x2 / x1);
    }
    if (e < 0.0 && x1 == 0.0) return kInf;
    if (e > 0.0 && x2 == kInf) return kInf;
    return (std::pow(x2, e) - std::pow(x1, e)) / e;
}

// Exact integral of (v1 + slope (x - x1)) * x^moment over [a, b] for moment 0 or 1.
inline double linear_piece_moment(double x1, double v1, double slope, double a, double b, int moment) {
    const double c0 = v1 - slope * x1;
    if (moment == 0) return c0 * (b - a) + 0.5 * slope * (b * b - a * a);
    return 0.5 * c0 * (b * b - a * a) + slope * (b * b * b - a * a * a) / 3.0;
}

} // namespace detail

/// Non-negative density with declared support. Closed forms are provided for
/// mass and first moment over any subinterval; general integrands go through
/// integrate().
class Density {
public:
    using Model = std::variant<PowerDensity, ExpDensity, TableDensity>;

    Density(PowerDensity d) : model_(std::move(d)) { validate(); }
    Density(ExpDensity d) : model_(std::move(d)) { validate(); }
    Density(TableDensity d) : model_(std::move(d)) { validate(); }

    const Model& model() const { return model_; }

    template <class T>
    const T* as() const { return std::get_if<T>(&model_); }

    double operator()(double r) const {
        return std::visit([r](const auto& d) { return eval(d, r); }, model_);
    }

    double support_lo() const {
        if (auto p = as<PowerDensity>()) return p->lo;
        if (auto t = as<TableDensity>()) return t->r.front();
        return 0.0;
    }

    double support_hi() const {
        if (auto p = as<PowerDensity>()) return p->hi;
        if (auto t = as<TableDensity>()) return t->r.back();
        return kInf;
    }

    // Decay exponent q with density ~ r^q as r -> inf; -inf for exponential
    // decay or compact support.
    double tail_exponent() const {
        if (auto p = as<PowerDensity>(); p && p->hi == kInf) return p->exponent;
        return -kInf;
    }

    // Characteristic r-range where the mass sits; seeds the quadrature core.
    std::pair<double, double> scale_range() const {
        if (auto p = as<PowerDensity>()) {
            const double lo = p->lo > 0.0 ? p->lo : std::min(1.0, p->hi) * 1e-3;
            const double hi = p->hi < kInf ? p->hi : std::max(1.0, p->lo) * 1e3;
            return {lo, hi};
        }
        if (auto e = as<ExpDensity>()) {
            double smax = 0.0, smin = kInf;
            for (const auto& t : e->terms) {
                smax = std::max(smax, t.rate);
                smin = std::min(smin, t.rate);
            }
            if (e->terms.empty()) return {1e-3, 1e3};
            return {1e-3 / smax, 40.0 / smin};
        }
        const auto& t = std::get<TableDensity>(model_);
        return {t.r.front(), t.r.back()};
    }

    // Knots where the density is not smooth.
    std::vector<double> breakpoints() const {
        if (auto t = as<TableDensity>()) return t->r;
        if (auto p = as<PowerDensity>()) {
            std::vector<double> out;
            if (p->lo > 0.0) out.push_back(p->lo);
            if (p->hi < kInf) out.push_back(p->hi);
            return out;
        }
        return {};
    }

    /// Closed-form integral of the density over [x1, x2]; +inf when divergent.
    double mass(double x1, double x2) const { return moment(x1, x2, 0); }

    /// Closed-form integral of r * density over [x1, x2]; +inf when divergent.
    double first_moment(double x1, double x2) const { return moment(x1, x2, 1); }

private:
    static double eval(const PowerDensity& d, double r) {
        if (r < d.lo || r > d.hi || d.coeff == 0.0) return 0.0;
        return d.coeff * std::pow(r, d.exponent);
    }
    static double eval(const ExpDensity& d, double r) {
        if (r < 0.0) return 0.0;
        double s = 0.0;
        for (const auto& t : d.terms) s += t.coeff * std::exp(-t.rate * r);
        return s;
    }
    static double eval(const TableDensity& d, double r) {
        if (r < d.r.front() || r > d.r.back()) return 0.0;
        auto it = std::upper_bound(d.r.begin(), d.r.end(), r);
        if (it == d.r.end()) return d.value.back();
        const auto i = static_cast<std::size_t>(it - d.r.begin()) - 1;
        const double w = (r - d.r[i]) / (d.r[i + 1] - d.r[i]);
        return d.value[i] + w * (d.value[i + 1] - d.value[i]);
    }

    double moment(double x1, double x2, int k) const {
        x1 = std::max(x1, 0.0);
        if (!(x1 < x2)) return 0.0;
        if (auto p = as<PowerDensity>()) {
            if (p->coeff == 0.0) return 0.0;
            const double a = std::max(x1, p->lo), b = std::min(x2, p->hi);
            if (!(a < b)) return 0.0;
            return p->coeff * detail::power_integral(p->exponent + k, a, b);
        }
        if (auto e = as<ExpDensity>()) {
            double s = 0.0;
            for (const auto& t : e->terms) {
                const double lam = t.rate;
                const double head = std::exp(-lam * x1);
                if (k == 0) {
                    const double span = x2 == kInf ? 1.0 : -std::expm1(-lam * (x2 - x1));
                    s += t.coeff / lam * head * span;
                } else {
                    const double upper = x2 == kInf ? 0.0 : (1.0 + lam * x2) * std::exp(-lam * x2);
                    s += t.coeff / (lam * lam) * ((1.0 + lam * x1) * head - upper);
                }
            }
            return s;
        }
        const auto& t = std::get<TableDensity>(model_);
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < t.r.size(); ++i) {
            const double a = std::max(x1, t.r[i]), b = std::min(x2, t.r[i + 1]);
            if (!(a < b)) continue;
            const double slope = (t.value[i + 1] - t.value[i]) / (t.r[i + 1] - t.r[i]);
            s += detail::linear_piece_moment(t.r[i], t.value[i], slope, a, b, k);
        }
        return s;
    }

    void validate() const {
        if (auto p = as<PowerDensity>()) {
            if (!(p->coeff >= 0.0) || !std::isfinite(p->coeff) || !std::isfinite(p->exponent))
                throw DomainError("power density: coefficient must be finite and non-negative");
            if (!(p->lo >= 0.0) || !(p->hi > p->lo) || !std::isfinite(p->lo))
                throw DomainError("power density: support must satisfy 0 <= lo < hi");
            return;
        }
        if (auto e = as<ExpDensity>()) {
            for (const auto& t : e->terms) {
                if (!(t.coeff >= 0.0) || !std::isfinite(t.coeff) || !(t.rate > 0.0) || !std::isfinite(t.rate))
                    throw DomainError("exp density: terms need coeff >= 0 and rate > 0");
            }
            return;
        }
        const auto& t = std::get<TableDensity>(model_);
        if (t.r.size() < 2 || t.r.size() != t.value.size())
            throw DomainError("table density: need >= 2 knots and matching value count");
        if (!(t.r.front() >= 0.0)) throw DomainError("table density: knots must be >= 0");
        for (std::size_t i = 0; i < t.r.size(); ++i) {
            if (!(t.value[i] >= 0.0) || !std::isfinite(t.value[i]) || !std::isfinite(t.r[i]))
                throw DomainError("table density: values must be finite and non-negative");
            if (i > 0 && !(t.r[i] > t.r[i - 1]))
                throw DomainError("table density: knots must be strictly increasing");
        }
    }

    Model model_;
};

/// Atoms plus a finite sum of densities. Immutable after construction.
class RadonMeasure {
public:
    RadonMeasure() = default;

    explicit RadonMeasure(std::vector<Atom> atoms, std::vector<Density> densities = {})
        : atoms_(std::move(atoms)), densities_(std::move(densities)) {
        for (const auto& a : atoms_) {
            if (!(a.location > 0.0) || !std::isfinite(a.location))
                throw DomainError("atom location must be finite and strictly positive");
            if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
                throw DomainError("atom weight must be finite and non-negative");
        }
    }

    static RadonMeasure atom(double location, double weight) { return RadonMeasure({{location, weight}}); }
    static RadonMeasure density(Density d) { return RadonMeasure({}, {std::move(d)}); }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Density>& densities() const { return densities_; }

    bool empty() const { return atoms_.empty() && densities_.empty(); }

    RadonMeasure operator+(const RadonMeasure& other) const {
        auto atoms = atoms_;
        atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
        auto dens = densities_;
        dens.insert(dens.end(), other.densities_.begin(), other.densities_.end());
        return RadonMeasure(std::move(atoms), std::move(dens));
    }

private:
    std::vector<Atom> atoms_;
    std::vector<Density> densities_;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    unsigned max_depth = 12;
    // Decade panels allowed on each side of the core before giving up.
    int max_extensions = 300;
    // Extra r-scales (e.g. 1/t for e^{-tr}) the core must cover.
    std::vector<double> scales;
};

template <class T>
struct QuadratureResult {
    T value{};
    double error = 0.0;
    bool converged = true;
    bool diverged = false;
};

namespace detail {

inline constexpr double kLn10 = 2.302585092994045684;

template <class T>
struct Accumulator {
    T value{};
    double error = 0.0;
    double l1 = 0.0;

    // Panels that are small against the mass already accumulated only need
    // absolute accuracy; asking for relative accuracy there chases rounding.
    template <class F>
    T panel(F&& f, double a, double b, const QuadratureOptions& opt) {
        using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
        double err = 0.0, l1_panel = 0.0;
        T v = GK::integrate(f, a, b, 0, 0.0, &err, &l1_panel);
        double tol = opt.rel_tol * 0.1;
        if (l1_panel > 0.0 && l1 > 0.0) tol = std::max(tol, 1e-3 * opt.rel_tol * l1 / l1_panel);
        if (err > tol * l1_panel) v = GK::integrate(f, a, b, opt.max_depth, tol, &err, &l1_panel);
        if (!std::isfinite(std::abs(v)))
            throw ConvergenceError("non-finite panel integral", std::abs(value), kInf);
        value += v;
        error += err;
        l1 += l1_panel;
        return v;
    }
};

// Walks decade panels away from the core until increments fall below
// tolerance (converged) or three consecutive non-shrinking increments each
// exceed tolerance (diverged).
template <class T, class F>
void extend_tail(Accumulator<T>& acc, F&& fu, double u_start, double direction, double u_limit,
                 const QuadratureOptions& opt, QuadratureResult<T>& out) {
    double prev = -1.0;
    int growth_streak = 0;
    double u = u_start;
    for (int k = 0; k < opt.max_extensions; ++k) {
        double u_next = u + direction * kLn10;
        const bool last = direction > 0 ? u_next >= u_limit : u_next <= u_limit;
        if (last) u_next = u_limit;
        const T inc = direction > 0 ? acc.panel(fu, u, u_next, opt) : acc.panel(fu, u_next, u, opt);
        if (last) return;
        const double size = std::abs(inc);
        const double tol = opt.rel_tol * std::max(std::abs(acc.value), acc.l1 * 1e-3);
        if (size == 0.0 && prev <= 0.0) return;
        if (prev > 0.0) {
            const double ratio = size / prev;
            if (ratio >= 1.0 - 1e-6 && size > tol) {
                if (++growth_streak >= 3) {
                    out.diverged = true;
                    out.converged = false;
                    return;
                }
            } else {
                growth_streak = 0;
                const double remainder = ratio < 1.0 ? size * ratio / (1.0 - ratio) : kInf;
                if (remainder <= tol) {
                    // geometric tail beyond the last panel
                    acc.value += inc * (ratio / (1.0 - ratio));
                    acc.error += remainder * std::min(1.0, ratio);
                    return;
                }
            }
        }
        prev = size;
        u = u_next;
    }
    out.converged = false;
}

template <class T, class Phi>
void integrate_density(const Density& d, Phi&& phi, double a, double b, const QuadratureOptions& opt,
                       Accumulator<T>& acc, QuadratureResult<T>& out) {
    a = std::max(a, d.support_lo());
    b = std::min(b, d.support_hi());
    if (!(a < b)) return;

    if (d.as<TableDensity>()) {
        std::vector<double> cuts{a};
        for (double k : d.breakpoints())
            if (k > a && k < b) cuts.push_back(k);
        cuts.push_back(b);
        auto fr = [&](double r) -> T { return d(r) * phi(r); };
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc.panel(fr, cuts[i], cuts[i + 1], opt);
        return;
    }

    // Logarithmic variable u = ln r; power laws become exponentials in u.
    auto fu = [&](double u) -> T {
        const double r = std::exp(u);
        const double dens = d(r);
        if (dens == 0.0) return T{};
        return (dens * r) * phi(r);
    };

    auto [core_lo, core_hi] = d.scale_range();
    for (double s : opt.scales) {
        if (s > 0.0 && std::isfinite(s)) {
            core_lo = std::min(core_lo, s * 1e-2);
            core_hi = std::max(core_hi, s * 1e2);
        }
    }
    const double u_a = a > 0.0 ? std::log(a) : -kInf;
    const double u_b = b < kInf ? std::log(b) : kInf;
    // Finite support ends are integrated exactly; only the infinite sides
    // (r -> 0 or r -> inf) are truncated adaptively.
    const double lo = std::isfinite(u_a) ? u_a : std::min(std::log(core_lo), u_b - kLn10);
    const double hi = std::isfinite(u_b) ? u_b : std::max(std::log(core_hi), lo + kLn10);
    for (double u = lo; u < hi;) {
        const double next = std::min(hi, u + kLn10);
        acc.panel(fu, u, next, opt);
        u = next;
    }
    constexpr double kUMin = -690.0, kUMax = 690.0;
    if (!std::isfinite(u_a)) extend_tail(acc, fu, lo, -1.0, kUMin, opt, out);
    if (out.diverged) return;
    if (!std::isfinite(u_b)) extend_tail(acc, fu, hi, +1.0, kUMax, opt, out);
}

} // namespace detail

/// Sum over atoms in `domain` of w*phi(r) plus quadrature of density*phi.
/// Never throws on non-convergence; inspect the flags.
template <class Phi>
auto integrate_detailed(const RadonMeasure& m, Phi&& phi, Interval domain = Interval::positive_axis(),
                        const QuadratureOptions& opt = {}) {
    using T = std::decay_t<std::invoke_result_t<Phi&, double>>;
    if (domain.lo < 0.0) throw DomainError("integration domain must lie in ]0,inf[");
    QuadratureResult<T> out;
    detail::Accumulator<T> acc;
    for (const auto& a : m.atoms()) {
        if (!domain.contains(a.location) || a.weight == 0.0) continue;
        const T v = phi(a.location);
        if (!std::isfinite(std::abs(v))) throw DomainError("integrand is not finite at an atom");
        acc.value += a.weight * v;
        acc.l1 += a.weight * std::abs(v);
    }
    for (const auto& d : m.densities()) {
        detail::integrate_density<T>(d, phi, domain.lo, domain.hi, opt, acc, out);
        if (out.diverged) break;
    }
    out.value = acc.value;
    out.error = acc.error;
    if (out.converged && acc.error > 10.0 * opt.rel_tol * std::max(acc.l1, 1e-300) + 1e-300)
        out.converged = false;
    return out;
}

/// Integral of phi against m over domain; throws ConvergenceError when the
/// quadrature fails or the integral diverges.
template <class Phi>
auto integrate(const RadonMeasure& m, Phi&& phi, Interval domain = Interval::positive_axis(),
               const QuadratureOptions& opt = {}) {
    auto res = integrate_detailed(m, std::forward<Phi>(phi), domain, opt);
    if (!res.converged) {
        throw ConvergenceError(res.diverged ? "integral diverges" : "quadrature did not converge",
                               std::abs(res.value), res.diverged ? kInf : res.error);
    }
    return res.value;
}

struct IntegrabilityCheck {
    double value;
    bool holds;
};

struct TwoSidedCheck {
    double head;
    double tail;
    bool holds;
};

namespace detail {

template <class Phi>
IntegrabilityCheck check_integrable(const RadonMeasure& m, Phi&& phi, const QuadratureOptions& opt) {
    auto res = integrate_detailed(m, std::forward<Phi>(phi), Interval::positive_axis(), opt);
    return {res.value, res.converged && std::isfinite(res.value)};
}

} // namespace detail

/// Integrability of r/(1+r): the admissibility condition for a Levy measure.
inline IntegrabilityCheck check_bs1(const RadonMeasure& m, const QuadratureOptions& opt = {}) {
    return detail::check_integrable(m, [](double r) { return r / (1.0 + r); }, opt);
}

/// Integrability of 1/(1+r): local integrability of the Laplace transform.
inline IntegrabilityCheck check_licm(const RadonMeasure& m, const QuadratureOptions& opt = {}) {
    return detail::check_integrable(m, [](double r) { return 1.0 / (1.0 + r); }, opt);
}

/// First moment on ]0,1] and mass on ]1,inf[, both in closed form.
inline TwoSidedCheck check_twoineq(const RadonMeasure& m) {
    double head = 0.0, tail = 0.0;
    for (const auto& a : m.atoms()) {
        if (a.location <= 1.0)
            head += a.location * a.weight;
        else
            tail += a.weight;
    }
    for (const auto& d : m.densities()) {
        head += d.first_moment(0.0, 1.0);
        tail += d.mass(1.0, kInf);
    }
    return {head, tail, std::isfinite(head) && std::isfinite(tail)};
}

/// m(]r, inf[). Right-continuous and non-increasing in r.
inline double tail_mass(const RadonMeasure& m, double r) {
    if (!(r > 0.0)) throw DomainError("tail_mass requires r > 0");
    double s = 0.0;
    for (const auto& a : m.atoms())
        if (a.location > r) s += a.weight;
    for (const auto& d : m.densities()) s += d.mass(r, kInf);
    return s;
}

/// Integral of min(r, t) m(dr); the primitive of tail_mass from 0 to t.
inline double tail_mass_primitive(const RadonMeasure& m, double t) {
    if (t <= 0.0) return 0.0;
    double s = 0.0;
    for (const auto& a : m.atoms()) s += a.weight * std::min(a.location, t);
    for (const auto& d : m.densities()) s += d.first_moment(0.0, t) + t * d.mass(t, kInf);
    return s;
}

// ---------------------------------------------------------------------------
// Integral of (1 - e^{-p r}) m(dr) for complex p with Re p >= 0.

enum class LevyRoute { closed_form, numeric };

namespace detail {

// Closed form when the density admits one; returns false otherwise.
inline bool levy_closed_form(const Density& d, Complex p, Complex& out) {
    if (auto e = d.as<ExpDensity>()) {
        out = 0.0;
        for (const auto& t : e->terms) out += t.coeff * p / (t.rate * (t.rate + p));
        return true;
    }
    if (auto pw = d.as<PowerDensity>()) {
        const double q = pw->exponent;
        if (pw->lo == 0.0 && pw->hi == kInf && q > -2.0 && q < -1.0) {
            const double alpha = q + 2.0;
            out = pw->coeff * std::tgamma(alpha) / (1.0 - alpha) * std::pow(p, 1.0 - alpha);
            return true;
        }
    }
    return false;
}

// Piecewise-linear density: exact per piece where the piece spans more than
// one radian of e^{-pr}, Gauss-Kronrod otherwise.
inline Complex levy_table(const TableDensity& t, Complex p, const QuadratureOptions& opt) {
    Complex s = 0.0;
    const double mod = std::abs(p);
    for (std::size_t i = 0; i + 1 < t.r.size(); ++i) {
        const double x1 = t.r[i], x2 = t.r[i + 1];
        const double v1 = t.value[i], v2 = t.value[i + 1];
        const double slope = (v2 - v1) / (x2 - x1);
        if (mod * (x2 - x1) <= 1.0) {
            auto f = [&](double x) { return (v1 + slope * (x - x1)) * one_minus_exp(p * x); };
            double err = 0.0;
            s += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, x1, x2, opt.max_depth,
                                                                              opt.rel_tol * 0.1, &err);
        } else {
            // int e^{-px} f dx = [-e^{-px} (f/p + f'/p^2)]
            auto prim = [&](double x, double v) { return -std::exp(-p * x) * (v / p + slope / (p * p)); };
            const Complex oscill = prim(x2, v2) - prim(x1, v1);
            const double plain = 0.5 * (v1 + v2) * (x2 - x1);
            s += plain - oscill;
        }
    }
    return s;
}

// e^{-pX} sum_k f^{(k)}(X) / p^{k+1} for f = c x^q; valid when |p| X >> |q|.
inline Complex power_laplace_tail(double c, double q, Complex p, double x) {
    Complex sum = 0.0;
    Complex term = c * std::pow(x, q) / p;
    for (int k = 0; k < 40; ++k) {
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        term *= (q - k) / (x * p);
    }
    return std::exp(-p * x) * sum;
}

template <class T>
void add_panels(Accumulator<T>& acc, const Density& d, Complex p, double a, double b, double width,
                const QuadratureOptions& opt) {
    if (!(a < b)) return;
    const double n = std::ceil((b - a) / width);
    if (n > 4e5)
        throw ConvergenceError("oscillatory quadrature needs too many panels", std::abs(acc.value), kInf);
    const auto count = static_cast<long>(n);
    auto f = [&](double x) -> Complex { return d(x) * one_minus_exp(p * x); };
    for (long i = 0; i < count; ++i) {
        const double x0 = a + (b - a) * static_cast<double>(i) / static_cast<double>(count);
        const double x1 = i + 1 == count ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(count);
        acc.panel(f, x0, x1, opt);
    }
}

// Oscillation-aware quadrature: log-variable quadrature below 1/|p|, panels
// no wider than pi/|p| up to 200/|p|, then an asymptotic endpoint expansion
// (power densities) or truncation where the tail mass is negligible.
inline Complex levy_numeric(const Density& d, Complex p, const QuadratureOptions& opt) {
    const double mod = std::abs(p);
    if (mod == 0.0) return 0.0;
    if (auto t = d.as<TableDensity>()) return levy_table(*t, p, opt);

    const double a = d.support_lo(), b = d.support_hi();
    const double knee = 1.0 / mod;
    const double width = std::numbers::pi / mod;

    QuadratureResult<Complex> res;
    Accumulator<Complex> acc;
    if (a < knee) {
        integrate_density<Complex>(d, [p](double r) { return one_minus_exp(p * r); }, a, std::min(b, knee), opt,
                                   acc, res);
        if (!res.converged)
            throw ConvergenceError("quadrature below the oscillation scale failed", std::abs(acc.value), acc.error);
    }
    const double osc_lo = std::max(a, knee);
    if (auto pw = d.as<PowerDensity>()) {
        const double far = std::max(osc_lo, 200.0 / mod);
        add_panels(acc, d, p, osc_lo, std::min(b, far), width, opt);
        if (far < b) {
            const double c = pw->coeff, q = pw->exponent;
            const double plain = d.mass(far, b);
            if (!std::isfinite(plain)) throw ConvergenceError("power tail mass diverges", std::abs(acc.value), kInf);
            Complex oscill = power_laplace_tail(c, q, p, far);
            if (b < kInf) oscill -= power_laplace_tail(c, q, p, b);
            acc.value += plain - oscill;
        }
        return acc.value;
    }
    // Exponential density: truncate where e^{-rate r} < 1e-17.
    const auto& e = std::get<ExpDensity>(d.model());
    double smin = kInf;
    for (const auto& t : e.terms) smin = std::min(smin, t.rate);
    if (e.terms.empty()) return 0.0;
    const double cut = 40.0 / smin;
    add_panels(acc, d, p, osc_lo, cut, width, opt);
    return acc.value;
}

} // namespace detail

/// Integral of (1 - e^{-p r}) m(dr), Re p >= 0. Atoms are exact; densities use
/// the requested route.
inline Complex levy_integral(const RadonMeasure& m, Complex p, LevyRoute route = LevyRoute::closed_form,
                             const QuadratureOptions& opt = {}) {
    if (p.real() < 0.0) throw DomainError("levy_integral requires Re p >= 0");
    Complex s = 0.0;
    for (const auto& a : m.atoms()) s += a.weight * detail::one_minus_exp(p * a.location);
    for (const auto& d : m.densities()) {
        Complex v;
        if (route == LevyRoute::closed_form && detail::levy_closed_form(d, p, v))
            s += v;
        else
            s += detail::levy_numeric(d, p, opt);
    }
    return s;
}

/// Real-argument version through integrate(); t >= 0.
inline double levy_integral(const RadonMeasure& m, double t, const QuadratureOptions& opt = {}) {
    if (t < 0.0) throw DomainError("levy_integral requires t >= 0");
    if (t == 0.0) return 0.0;
    QuadratureOptions o = opt;
    o.scales.push_back(1.0 / t);
    return integrate(m, [t](double r) { return detail::one_minus_exp(t * r); }, Interval::positive_axis(), o);
}

} // namespace viscowave
