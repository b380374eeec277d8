// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "viscowave/viscowave.hpp"

using namespace viscowave;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;
int waived = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("AC%-2d %s  %s  [%.3fs]  %s\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Material> corpus() {
    const auto from_bf = [](BernsteinRepr g) { return bf_to_crf(g); };
    return {
        {{1, 0, {}}, 1.0},                                                      // elastic
        {{0, 1, {}}, 1.0},                                                      // Newtonian
        {from_bf({0, 0, RadonMeasure({{1.0, 1.0}})}), 1.0},                    // single atom
        {from_bf({0.2, 0.5, RadonMeasure({{0.1, 2.0}, {30.0, 0.5}})}), 2.5},   // atoms with drift
        {{1, 0, {ExpSumKernel{{{1, 1}}}}}, 1.0},                                // standard linear solid
        {{0.5, 0.2, {ExpSumKernel{{{1, 0.1}, {0.5, 10}, {2, 300}}}}}, 0.7},     // Prony series
        {{1, 0, {PowerKernel{1.0, 0.3}}}, 1.0},
        {{0, 0, {PowerKernel{2.0, 0.5}}}, 1.0},
        {{0.2, 0.1, {PowerKernel{0.5, 0.8}}}, 3.0},
        {{0.5, 0.5, {PowerKernel{1.0, 0.5}, ExpSumKernel{{{2, 3}}}, TableKernel{{0.0, 1.0}, {0.5, 0.0}}}}, 1.0},
        {{0.3, 0, {TableKernel{{0.0, 0.5, 2.0}, {2.0, 1.0, 0.0}}}}, 1.0},
        {{1, 0, {TailKernel{RadonMeasure({}, {TableDensity{{0.5, 1.0, 3.0}, {1.0, 2.0, 0.0}}})}}}, 1.0},
    };
}

// where the third derivative of creep_example(alpha) changes sign, alpha > 1
double creep_example_sign_change(double alpha) { return std::pow((alpha - 1.0) / alpha, 1.0 / alpha); }

} // namespace

int main() {
    report(1, "Newtonian attenuation exponent", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto fit = fit_powerlaw(curve(Material{{0, 1, {}}, 1.0}, log_grid(1, 100, 200)), 1, 100);
        const double secs = elapsed(t0);
        const double a_ref = 1.0 / std::numbers::sqrt2;
        const bool ok = std::abs(fit.alpha - 0.5) <= 0.005 && std::abs(fit.A - a_ref) <= 0.01 * a_ref && secs < 1.0;
        return Outcome{ok, fmt("alpha=%.6f (0.5+-0.005) A=%.6f (%.6f+-1%%) t=%.3fs<1s", fit.alpha, fit.A, a_ref, secs)};
    });

    report(2, "linear attenuation bound on corpus", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto grid = log_grid(1e-3, 1e6, 300);
        bool ok = true;
        double worst = -kInf;
        int n = 0;
        for (const auto& m : corpus()) {
            const auto r = verify_bound(m, grid);
            const double slack = 1e-9 * r.constants.bound(grid.back());
            ok = ok && r.holds && r.max_violation <= slack;
            worst = std::max(worst, r.max_violation / r.constants.bound(grid.back()));
            ++n;
        }
        const double secs = elapsed(t0);
        ok = ok && n >= 10 && secs < 30.0;
        return Outcome{ok, fmt("materials=%d worst violation/(K+L w_max)=%.3e (<=1e-9) t=%.2fs<30s", n, worst, secs)};
    });

    report(3, "duality round trip on corpus", [] {
        double worst = 0.0;
        for (const auto& m : corpus()) {
            const auto back = bf_to_crf(crf_to_bf(m.creep));
            for (double t : log_grid(1e-3, 1e3, 50)) {
                const double a = eval_crf(m.creep, t);
                worst = std::max(worst, std::abs(eval_crf(back, t) - a) / (1.0 + a));
            }
        }
        return Outcome{worst <= 1e-8, fmt("max rel err=%.3e (<=1e-8)", worst)};
    });

    report(4, "classifier fidelity on int_0^x exp(-y^alpha) dy", [] {
        const auto grid = linear_grid(0.01, 2.0, 200);
        const double h = 0.01;
        bool half_ok = true;
        for (int order = 1; order <= 8; ++order)
            half_ok = half_ok && check_bernstein_differences(creep_example(0.5), order, grid, h).pass;
        const auto v = check_bernstein_differences(creep_example(1.5), 8, grid, h);
        const bool crf_ok = classify_crf(sample(creep_example(0.5), grid)).is_crf &&
                            classify_crf(sample(creep_example(1.5), grid)).is_crf;
        const double w = v.witness.value_or(std::nan(""));
        const double exact = creep_example_sign_change(1.5);
        const bool near_exact = std::abs(w - exact) <= 0.05;
        const bool near_third = std::abs(w - 1.0 / 3.0) <= 0.05;
        if (!near_third) {
            ++waived;
            std::printf("AC4  FAIL  witness within 0.05 of 1/3  [waived]  witness=%.4f; the third derivative "
                        "(d2/dx2 exp(-x^1.5)) changes sign at (1/3)^(2/3)=%.4f, and not at 1/3\n",
                        w, exact);
        }
        const bool ok = half_ok && !v.pass && near_exact && crf_ok;
        return Outcome{ok, fmt("alpha=0.5 bernstein orders 1..8=%s; alpha=1.5 bernstein=%s order=%d witness=%.4f "
                               "(exact %.4f+-0.05); crf both=%s",
                               half_ok ? "true" : "false", v.pass ? "true" : "false", v.failing_order.value_or(0), w,
                               exact, crf_ok ? "true" : "false")};
    });

    report(5, "limit slope of a + b t + atom", [] {
        const auto s = limit_slope(BernsteinRepr{3, 2, RadonMeasure({{1.0, 1.0}})}, {1e2, 1e3, 1e4});
        const double tol[] = {5e-2, 5e-3, 5e-4};
        bool ok = s.ratios.size() == 3;
        for (std::size_t i = 0; ok && i < 3; ++i) {
            ok = std::abs(s.ratios[i] - 2.0) <= tol[i];
            if (i > 0) ok = ok && s.ratios[i] < s.ratios[i - 1];
        }
        return Outcome{ok, fmt("f(T)/T - 2 = %.3e, %.3e, %.3e", s.ratios[0] - 2, s.ratios[1] - 2, s.ratios[2] - 2)};
    });

    report(6, "sandwich t/(1+t) <= 1-e^-t <= 2t/(1+t)", [] {
        const BernsteinRepr g{0, 0, RadonMeasure({{1.0, 1.0}})};
        const std::size_t n = 10000;
        std::size_t bad = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = 100.0 * static_cast<double>(i) / static_cast<double>(n - 1);
            const double f = eval_bf(g, t);
            if (!(t / (1 + t) <= f && f <= 2 * t / (1 + t))) ++bad;
        }
        return Outcome{bad == 0, fmt("points=%zu violations=%zu", n, bad)};
    });

    const Material sls{{1, 0, {ExpSumKernel{{{1, 1}}}}}, 1.0};

    report(7, "wavefront causality, x=2", [&] {
        GreenOptions opt;
        const auto sig = greens_function(sls, 2.0, opt);
        const auto fr = analyze_front(sls, 2.0, sig, opt.window);
        if (!fr.front_arrival || !fr.leakage) return Outcome{false, "no front detected"};
        const bool ok = *fr.leakage < 1e-3 && std::abs(*fr.front_arrival - 2.0) <= 2 * opt.dt;
        return Outcome{ok, fmt("leakage=%.3e (<1e-3) arrival=%.4f (2+-%.3f) half-max crossing=%.4f rise=%.4f",
                               *fr.leakage, *fr.front_arrival, 2 * opt.dt, *fr.first_crossing, fr.rise_time)};
    });

    report(8, "high-frequency slope |kappa|/w -> 1", [&] {
        double prev = kInf;
        bool ok = true;
        std::string vals;
        for (double w : {1e3, 1e4, 1e5}) {
            const double d = std::abs(std::abs(wavenumber(sls, w)) / w - 1.0);
            ok = ok && d < prev;
            prev = d;
            vals += fmt(" %.3e", d);
        }
        return Outcome{ok, "deviation at 1e3,1e4,1e5:" + vals};
    });

    report(9, "complete Bernstein suite", [] {
        const auto zs = upper_half_plane_samples(200);
        const std::vector<StieltjesRepr> fs = {
            {0, 0, RadonMeasure({{1.0, 1.0}})},
            {1, 2, {}},
            {0, 0, RadonMeasure({}, {ExpDensity{{{1.0, 1.0}}}})},
            {0.5, 0.1, RadonMeasure({{3.0, 1.0}}, {PowerDensity{1.0, -0.5, 0.0, kInf}})},
            {0.2, 0, RadonMeasure({{0.01, 0.5}, {50.0, 2.0}}, {TableDensity{{0.5, 1.0, 3.0}, {1.0, 2.0, 0.0}}})},
        };
        int checked = 0;
        bool ok = true;
        for (const auto& f : fs) {
            ok = ok && nevanlinna_check(as_function(f), zs).pass;
            for (double a : {0.0, 0.3, 0.5, 1.0}) ok = ok && nevanlinna_check(cbf_power(f, a), zs).pass;
            checked += 5;
        }
        for (std::size_t i = 0; i < fs.size(); ++i)
            for (std::size_t j = 0; j < fs.size(); ++j) {
                ok = ok && nevanlinna_check(cbf_product(as_function(fs[i]), as_function(fs[j]), 0.4), zs).pass;
                ++checked;
            }
        const bool control = !nevanlinna_check([](Complex z) { return z * z; }, zs).pass;
        return Outcome{ok && control, fmt("checks passed=%s (%d functions) z^2 rejected=%s", ok ? "all" : "not all",
                                          checked, control ? "true" : "false")};
    });

    report(10, "low-frequency solid exponent", [] {
        const Material solid{{1, 0, {PowerKernel{1.0, 0.5}}}, 1.0};
        const double lo = 1e-4, hi = 1e-2;
        const double got = fit_powerlaw(curve(solid, log_grid(lo, hi, 200)), lo, hi).alpha;
        // independent closed form: J = 1 + 2 t^{1/2} gives p^2 J~ = p + sqrt(pi) p^{1/2}
        AttenuationCurve fine;
        for (double w : log_grid(lo, hi, 2000)) {
            const Complex p(0, -w);
            const Complex k = std::sqrt(p) * std::sqrt(p + std::sqrt(std::numbers::pi) * std::sqrt(p));
            fine.rows.push_back({w, k.real(), k.imag(), k.real(), 0});
        }
        const double ref = fit_powerlaw(fine, lo, hi).alpha;
        return Outcome{std::abs(got - ref) <= 0.05, fmt("exponent=%.4f oracle=%.4f (+-0.05)", got, ref)};
    });

    std::printf("summary: %d failing criteria, %d waived sub-check(s)\n", failures, waived);
    return failures == 0 ? 0 : 1;
}
