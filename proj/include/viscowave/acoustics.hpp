#pragma once

// Plane-wave propagation in a viscoelastic medium with a CrF creep
// compliance: wave number, attenuation curves, the linear attenuation bound,
// wavefront speed, Green's function synthesis and power-law fits.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <fftw3.h>

#include "viscowave/duality.hpp"
#include "viscowave/error.hpp"
#include "viscowave/functions.hpp"
#include "viscowave/measure.hpp"
#include "viscowave/parallel.hpp"

namespace viscowave {

struct Material {
    CrfRepr creep;
    double rho = 1.0;
};

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("log grid needs 0 < lo <= hi");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (!(hi >= lo)) throw DomainError("linear grid needs lo <= hi");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

/// Samples J on {0} plus a log grid over [1e-3, 1e3] and runs classify_crf.
inline CrfVerdict classify_material(const Material& mat) {
    std::vector<double> ts{0.0};
    for (double t : log_grid(1e-3, 1e3, 61)) ts.push_back(t);
    return classify_crf(sample([&](double t) { return eval_crf(mat.creep, t); }, ts));
}

inline void validate(const Material& mat) {
    if (!(mat.rho > 0.0) || !std::isfinite(mat.rho)) throw DomainError("material density rho must be positive");
    validate(mat.creep);
    if (auto v = classify_material(mat); !v.is_crf)
        throw DomainError("creep compliance is not a CrF (" + v.reason + " near t = " + std::to_string(*v.witness) + ")");
}

/// kappa(-i omega) = rho^{1/2} (-i omega)^{1/2} g(-i omega)^{1/2} with g =
/// p^2 J~(p). Holds the converted symbol so sweeps pay the conversion once.
class WaveNumber {
public:
    explicit WaveNumber(const Material& mat, LevyRoute route = LevyRoute::closed_form)
        : symbol_(crf_to_bf(mat.creep)), sqrt_rho_(std::sqrt(mat.rho)), route_(route) {
        if (!(mat.rho > 0.0) || !std::isfinite(mat.rho)) throw DomainError("material density rho must be positive");
    }

    Complex operator()(double omega) const {
        if (omega == 0.0 || !std::isfinite(omega)) throw DomainError("wavenumber requires finite omega != 0");
        const Complex f = eval_bf_imag_axis(symbol_, omega, route_).value();
        if (f == Complex(0.0)) throw DegenerateMaterialError("g(-i omega) vanishes: zero material");
        // arg sqrt(p) = -+pi/4 and arg sqrt(f) lies between 0 and -+pi/4, so
        // Re kappa >= 0 up to rounding; clamp that rounding for lossless media.
        Complex k = sqrt_rho_ * std::sqrt(Complex(0.0, -omega)) * std::sqrt(f);
        if (k.real() < 0.0) k.real(0.0);
        return k;
    }

    const BernsteinRepr& symbol() const { return symbol_; }

private:
    BernsteinRepr symbol_;
    double sqrt_rho_;
    LevyRoute route_;
};

inline Complex wavenumber(const Material& mat, double omega) { return WaveNumber(mat)(omega); }

struct CurveRow {
    double omega;
    double kappa_R;
    double kappa_I;
    double atten;
    double phase_velocity;
};

struct AttenuationCurve {
    std::vector<CurveRow> rows;
};

inline CurveRow curve_row(double omega, Complex kappa) {
    const double c = kappa.imag() < 0.0 ? omega / -kappa.imag() : kInf;
    return {omega, kappa.real(), kappa.imag(), kappa.real(), c};
}

inline AttenuationCurve curve(const Material& mat, const std::vector<double>& grid) {
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
            throw DomainError("curve grid must be positive and strictly increasing");
    AttenuationCurve out;
    if (grid.empty()) return out;
    const WaveNumber kappa(mat);
    out.rows.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { out.rows[i] = curve_row(grid[i], kappa(grid[i])); });
    return out;
}

// ---------------------------------------------------------------------------
// Linear attenuation bound

struct BoundConstants {
    enum class Form { linear, square_root };

    Form form = Form::linear;
    double K = 0.0;
    double L = 0.0;
    // |kappa| <= sqrt_coeff |omega|^{1/2} when the linear coefficient M vanishes.
    double sqrt_coeff = 0.0;
    double m = 0.0;
    double M = 0.0;
    double A1 = 0.0;
    double T = 0.0;
    double a = 0.0;
    double b = 0.0;

    double bound(double omega) const {
        const double w = std::abs(omega);
        return form == Form::linear ? K + L * w : sqrt_coeff * std::sqrt(w);
    }
};

/// Bound constants from the Levy measure of g: A1 = int_{]0,1]} r lambda,
/// T = lambda(]1,inf[), m = a + 2T, M = b + A1, then
/// K = rho^{1/2} 2^{1/4} m / (2 M^{1/2}) and L = rho^{1/2} 2^{1/4} M^{1/2}.
inline BoundConstants bound_constants(const Material& mat) {
    if (!(mat.rho > 0.0)) throw DomainError("material density rho must be positive");
    const BernsteinRepr g = crf_to_bf(mat.creep);
    const TwoSidedCheck two = check_twoineq(g.measure);
    if (!two.holds) throw DomainError("Levy measure of p^2 J~(p) is not admissible");
    BoundConstants c;
    c.a = g.a;
    c.b = g.b;
    c.A1 = two.head;
    c.T = two.tail;
    c.m = g.a + 2.0 * two.tail;
    c.M = g.b + two.head;
    const double pre = std::sqrt(mat.rho) * std::pow(2.0, 0.25);
    if (c.M > 0.0) {
        c.form = BoundConstants::Form::linear;
        c.K = pre * c.m / (2.0 * std::sqrt(c.M));
        c.L = pre * std::sqrt(c.M);
    } else if (c.m > 0.0) {
        c.form = BoundConstants::Form::square_root;
        c.sqrt_coeff = pre * std::sqrt(c.m);
    } else {
        throw DegenerateMaterialError("zero material has no wave number");
    }
    return c;
}

struct BoundReport {
    BoundConstants constants;
    double max_violation = -kInf;
    double worst_omega = 0.0;
    double tolerance = 0.0;
    bool holds = true;
};

inline constexpr double kBoundTolerance = 1e-9;

/// max over the grid of max(|kappa_R|, |kappa_I|) - bound(omega); holds when
/// that stays below rel_tol * bound(omega_max).
inline BoundReport verify_bound(const Material& mat, const std::vector<double>& grid, const BoundConstants& c,
                                double rel_tol = kBoundTolerance) {
    BoundReport rep;
    rep.constants = c;
    if (grid.empty()) return rep;
    const WaveNumber kappa(mat);
    std::vector<double> violation(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const Complex k = kappa(grid[i]);
        violation[i] = std::max(std::abs(k.real()), std::abs(k.imag())) - c.bound(grid[i]);
    });
    double w_max = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        w_max = std::max(w_max, std::abs(grid[i]));
        if (violation[i] > rep.max_violation) {
            rep.max_violation = violation[i];
            rep.worst_omega = grid[i];
        }
    }
    rep.tolerance = rel_tol * c.bound(w_max);
    rep.holds = rep.max_violation <= rep.tolerance;
    return rep;
}

inline BoundReport verify_bound(const Material& mat, const std::vector<double>& grid) {
    return verify_bound(mat, grid, bound_constants(mat));
}

/// (rho J(0))^{-1/2}; infinite when J(0) = 0.
inline double wavefront_speed(const Material& mat) {
    if (!(mat.creep.a > 0.0)) return kInf;
    return 1.0 / std::sqrt(mat.rho * mat.creep.a);
}

// ---------------------------------------------------------------------------
// Green's function synthesis

struct GaussianWindow {
    double sigma = 40.0;
    double amplitude = 1.0;

    double operator()(double omega) const {
        if (amplitude == 0.0) return 0.0;
        const double z = omega / sigma;
        return amplitude * std::exp(-0.5 * z * z);
    }
    double rise_time() const { return 1.0 / sigma; }
};

struct GreenOptions {
    double dt = 0.01;
    std::size_t samples = 4096;
    GaussianWindow window;
};

struct GreenSignal {
    double dt = 0.0;
    std::vector<double> t;
    std::vector<double> u;
};

namespace detail {

struct FftwDeleter {
    void operator()(void* p) const { fftw_free(p); }
};

// FFTW's planner is not reentrant; fftw_execute is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwPlan {
    fftw_plan plan = nullptr;
    ~FftwPlan() {
        if (plan) {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

} // namespace detail

/// W(omega) exp(-kappa(-i omega) x): one spectral mode of the band-limited
/// Green's function at distance x.
inline Complex green_mode(const WaveNumber& kappa, const GaussianWindow& window, double x, double omega) {
    const double w = window(omega);
    if (w == 0.0) return 0.0;
    if (omega == 0.0) return w;
    return w * std::exp(-kappa(omega) * x);
}

/// u(x,t) = (1/2pi) int W(omega) e^{-i omega t - kappa(-i omega) x} d omega
/// on t_n = n dt, via a real inverse FFT of the conjugate-symmetric spectrum.
inline GreenSignal greens_function(const Material& mat, double x, const GreenOptions& opt = {}) {
    if (!(x > 0.0)) throw DomainError("greens_function requires x > 0");
    if (!(opt.dt > 0.0) || opt.samples < 16 || opt.samples % 2 != 0)
        throw DomainError("greens_function needs dt > 0 and an even sample count >= 16");
    const auto& win = opt.window;
    if (win.amplitude != 0.0) {
        if (!(win.sigma > 0.0)) throw DomainError("window sigma must be positive");
        const double nyquist = std::numbers::pi / opt.dt;
        if (win(nyquist) > 1e-10 * win(0.0))
            throw ResolutionError("time step too coarse for the window: spectrum aliases at Nyquist");
        const double speed = wavefront_speed(mat);
        const double record = opt.dt * static_cast<double>(opt.samples);
        if (std::isfinite(speed) && x / speed + 10.0 * win.rise_time() >= record)
            throw ResolutionError("record too short: the front arrives after the last sample");
    }

    const std::size_t n = opt.samples;
    const std::size_t bins = n / 2 + 1;
    GreenSignal out;
    out.dt = opt.dt;
    out.t.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.t[i] = opt.dt * static_cast<double>(i);
    out.u.assign(n, 0.0);
    if (win.amplitude == 0.0) return out;

    const WaveNumber kappa(mat);
    const double d_omega = 2.0 * std::numbers::pi / (opt.dt * static_cast<double>(n));
    std::vector<Complex> spectrum(bins);
    parallel_for(bins, [&](std::size_t k) {
        spectrum[k] = std::conj(green_mode(kappa, win, x, d_omega * static_cast<double>(k)));
    });
    spectrum[bins - 1] = spectrum[bins - 1].real();

    std::unique_ptr<fftw_complex, detail::FftwDeleter> in(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
    std::unique_ptr<double, detail::FftwDeleter> res(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
    if (!in || !res) throw std::bad_alloc();
    detail::FftwPlan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan.plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), res.get(), FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < bins; ++k) {
        in.get()[k][0] = spectrum[k].real();
        in.get()[k][1] = spectrum[k].imag();
    }
    fftw_execute(plan.plan);
    const double scale = 1.0 / (opt.dt * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) out.u[i] = res.get()[i] * scale;
    return out;
}

struct FrontReport {
    std::optional<double> front_arrival;
    std::optional<double> expected_arrival;
    std::optional<double> first_crossing;
    std::optional<double> leakage;
    double rise_time = 0.0;
    double max_abs = 0.0;
    double threshold = 0.5;
};

/// Arrival from the first crossing of threshold * max|u|, shifted by the lead
/// a Gaussian pulse has over its own peak at that threshold. Leakage is the
/// signal energy before expected_arrival - 3 rise_time over the total.
inline FrontReport analyze_front(const Material& mat, double x, const GreenSignal& sig, const GaussianWindow& win,
                                 double threshold = 0.5) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("front threshold must lie in ]0,1[");
    FrontReport rep;
    rep.threshold = threshold;
    rep.rise_time = win.sigma > 0.0 ? win.rise_time() : 0.0;
    const double speed = wavefront_speed(mat);
    if (std::isfinite(speed)) rep.expected_arrival = x / speed;
    for (double v : sig.u) rep.max_abs = std::max(rep.max_abs, std::abs(v));
    if (rep.max_abs == 0.0) {
        if (rep.expected_arrival) rep.leakage = 0.0;
        return rep;
    }
    const double level = threshold * rep.max_abs;
    for (std::size_t i = 0; i < sig.u.size(); ++i) {
        if (std::abs(sig.u[i]) < level) continue;
        double tc = sig.t[i];
        if (i > 0) {
            const double a = std::abs(sig.u[i - 1]), b = std::abs(sig.u[i]);
            tc = sig.t[i - 1] + (level - a) / (b - a) * (sig.t[i] - sig.t[i - 1]);
        }
        rep.first_crossing = tc;
        break;
    }
    if (rep.expected_arrival) {
        if (rep.first_crossing)
            rep.front_arrival = *rep.first_crossing + std::sqrt(2.0 * std::log(1.0 / threshold)) * rep.rise_time;
        const double cut = *rep.expected_arrival - 3.0 * rep.rise_time;
        double before = 0.0, total = 0.0;
        for (std::size_t i = 0; i < sig.u.size(); ++i) {
            const double e = sig.u[i] * sig.u[i];
            total += e;
            if (sig.t[i] < cut) before += e;
        }
        rep.leakage = before / total;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Power-law fit

struct PowerLawFit {
    double A = 0.0;
    double alpha = 0.0;
    double r2 = 0.0;
    std::size_t rows = 0;
};

/// Least squares in (log omega, log atten) over rows with omega in [lo, hi].
inline PowerLawFit fit_powerlaw(const AttenuationCurve& c, double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError("fit band needs 0 < lo < hi");
    const double slack = 1e-12;
    std::vector<double> xs, ys;
    for (const auto& r : c.rows) {
        if (r.omega < lo * (1.0 - slack) || r.omega > hi * (1.0 + slack)) continue;
        if (!(r.atten > 0.0))
            throw FitError("attenuation is not positive at omega = " + std::to_string(r.omega) +
                           "; no power law to fit");
        xs.push_back(std::log(r.omega));
        ys.push_back(std::log(r.atten));
    }
    if (xs.size() < 8) throw FitError("power-law fit needs at least 8 rows in the band");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw FitError("fit band contains a single frequency");
    PowerLawFit f;
    f.alpha = sxy / sxx;
    f.A = std::exp(my - f.alpha * mx);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (my + f.alpha * (xs[i] - mx));
        ss_res += e * e;
    }
    f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    f.rows = xs.size();
    return f;
}

} // namespace viscowave
