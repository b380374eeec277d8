#pragma once

// Correspondence between creep compliances J (CrF class) and Bernstein
// functions g(p) = p^2 J~(p), and evaluation of g on the imaginary axis.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "viscowave/error.hpp"
#include "viscowave/functions.hpp"
#include "viscowave/measure.hpp"

namespace viscowave {

/// g(-i omega) split into real and imaginary parts.
struct ImagAxisValue {
    double omega = 0.0;
    double f_R = 0.0;
    double f_I = 0.0;

    Complex value() const { return {f_R, f_I}; }
};

/// g(p) = p^2 J~(p). The constant and linear terms swap roles: offset = J.b,
/// slope = J.a; the Levy measure is -dk.
inline BernsteinRepr crf_to_bf(const CrfRepr& j) {
    validate(j);
    BernsteinRepr g;
    g.a = j.b;
    g.b = j.a;
    std::vector<Atom> atoms;
    std::vector<Density> densities;
    for (const auto& kernel : j.kernel) {
        if (auto pk = std::get_if<PowerKernel>(&kernel)) {
            if (pk->c > 0.0)
                densities.emplace_back(PowerDensity{pk->c * (1.0 - pk->alpha), pk->alpha - 2.0, 0.0, kInf});
        } else if (auto ek = std::get_if<ExpSumKernel>(&kernel)) {
            ExpDensity d;
            for (const auto& t : ek->terms)
                if (t.weight > 0.0) d.terms.push_back({t.weight * t.rate, t.rate});
            if (!d.terms.empty()) densities.emplace_back(std::move(d));
        } else if (auto tk = std::get_if<TableKernel>(&kernel)) {
            for (std::size_t i = 1; i < tk->t.size(); ++i) {
                const double drop = tk->k[i - 1] - tk->k[i];
                if (drop > 0.0) atoms.push_back({tk->t[i], drop});
            }
            // A non-zero final level is a constant kernel, i.e. extra steady flow.
            g.a += tk->k.back();
        } else {
            const auto& m = std::get<TailKernel>(kernel).measure;
            atoms.insert(atoms.end(), m.atoms().begin(), m.atoms().end());
            densities.insert(densities.end(), m.densities().begin(), m.densities().end());
        }
    }
    g.measure = RadonMeasure(std::move(atoms), std::move(densities));
    return g;
}

/// Inverse map: a = g.b, b = g.a, k(r) = lambda(]r, inf[). Atoms become a
/// step kernel, exponential and scale-free power densities keep a closed
/// form, anything else is carried as a tail kernel.
inline CrfRepr bf_to_crf(const BernsteinRepr& g) {
    validate(g);
    CrfRepr j;
    j.a = g.b;
    j.b = g.a;

    std::map<double, double> merged;
    for (const auto& at : g.measure.atoms())
        if (at.weight > 0.0) merged[at.location] += at.weight;
    if (!merged.empty()) {
        TableKernel tk;
        std::vector<double> locations, weights;
        for (const auto& [r, w] : merged) {
            locations.push_back(r);
            weights.push_back(w);
        }
        // Suffix sums keep each level exact relative to its own tail.
        std::vector<double> level(weights.size() + 1, 0.0);
        for (std::size_t i = weights.size(); i-- > 0;) level[i] = level[i + 1] + weights[i];
        tk.t.push_back(0.0);
        tk.k.push_back(level[0]);
        for (std::size_t i = 0; i < locations.size(); ++i) {
            tk.t.push_back(locations[i]);
            tk.k.push_back(level[i + 1]);
        }
        j.kernel.emplace_back(std::move(tk));
    }

    std::vector<Density> residual;
    for (const auto& d : g.measure.densities()) {
        if (auto e = d.as<ExpDensity>()) {
            ExpSumKernel ek;
            for (const auto& t : e->terms)
                if (t.coeff > 0.0) ek.terms.push_back({t.coeff / t.rate, t.rate});
            if (!ek.terms.empty()) j.kernel.emplace_back(std::move(ek));
            continue;
        }
        if (auto p = d.as<PowerDensity>(); p && p->lo == 0.0 && p->hi == kInf && p->exponent > -2.0 &&
                                           p->exponent < -1.0) {
            const double alpha = p->exponent + 2.0;
            if (p->coeff > 0.0) j.kernel.emplace_back(PowerKernel{p->coeff / (1.0 - alpha), alpha});
            continue;
        }
        residual.push_back(d);
    }
    if (!residual.empty()) j.kernel.emplace_back(TailKernel{RadonMeasure({}, std::move(residual))});
    return j;
}

/// F(omega) = g(-i omega) = a - i b omega + integral of (1 - e^{i omega r}) lambda(dr),
/// so f_R = a + int (1 - cos) and f_I = -b omega - int sin.
inline ImagAxisValue eval_bf_imag_axis(const BernsteinRepr& g, double omega,
                                       LevyRoute route = LevyRoute::closed_form,
                                       const QuadratureOptions& opt = {}) {
    if (!std::isfinite(omega)) throw DomainError("eval_bf_imag_axis requires finite omega");
    if (omega == 0.0) return {0.0, g.a, 0.0};
    const double w = std::abs(omega);
    const Complex f = g.a + g.b * Complex(0.0, -w) + levy_integral(g.measure, Complex(0.0, -w), route, opt);
    // Conjugate symmetry of the real measure fixes the negative half.
    return {omega, f.real(), omega > 0.0 ? f.imag() : -f.imag()};
}

/// M(p) = p G~(p) = p / g(p) with g from the Laplace-domain kernel formulas.
inline Complex complex_modulus(const CrfRepr& j, Complex p) {
    if (p.real() < 0.0 || p == Complex(0.0)) throw DomainError("complex_modulus requires Re p >= 0 and p != 0");
    validate(j);
    const Complex g = creep_laplace_symbol(j, p);
    if (g == Complex(0.0)) throw DegenerateMaterialError("zero creep compliance has no modulus");
    return p / g;
}

} // namespace viscowave
