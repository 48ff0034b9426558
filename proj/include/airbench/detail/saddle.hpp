#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "airbench/core.hpp"

namespace airbench::detail {

// One evaluation of the concave inner maximization at a fixed policy p.
// The objective is affine in p once the inner maximizer is fixed:
//   value = const_term + <coeffs, p>.
struct InnerValue {
    double value = 0.0;
    double const_term = 0.0;
    std::vector<double> coeffs;
    std::shared_ptr<const void> state;  // opaque handle on the inner maximizer
};

// Re-evaluates the affine-in-p representation at a convex combination of two
// stored inner maximizers: lam * a + (1 - lam) * b.
using InnerMix = std::function<InnerValue(const Policy&, const std::shared_ptr<const void>&,
                                          const std::shared_ptr<const void>&, double)>;

struct SaddlePlan {
    Policy p;
    double value = 0.0;  // inner sup at p
    double gap = 0.0;    // sup_nu f(p, nu) - inf_p' f(p', nu(p))
    int iterations = 0;
    bool converged = false;
};

// Minimizes p -> sup_nu f(p, nu) over the simplex, where inner_sup evaluates
// the sup together with the affine-in-p representation at the maximizer. The
// duality gap at an iterate is <coeffs, p> - min_j coeffs[j], which is exact
// because the objective is linear in p for a fixed inner point.
inline SaddlePlan solve_saddle(int K, const std::function<InnerValue(const Policy&)>& inner_sup,
                               double tol, int max_outer, const InnerMix& mix = nullptr) {
    auto gap_of = [](const InnerValue& iv, const Policy& p) {
        double dot = 0.0, mn = iv.coeffs[0];
        for (int j = 0; j < p.size(); ++j) {
            dot += p[j] * iv.coeffs[j];
            mn = std::min(mn, iv.coeffs[j]);
        }
        return dot - mn;
    };

    SaddlePlan best;
    best.p = Policy::uniform(K);
    InnerValue iv = inner_sup(best.p);
    best.value = iv.value;
    best.gap = gap_of(iv, best.p);
    best.iterations = 1;

    if (K == 2) {
        // The map t -> sup_nu f((t,1-t), nu) is convex, so the directional
        // derivative coeffs[0]-coeffs[1] is nondecreasing in t: bisect on it.
        InnerValue iv_lo, iv_hi;
        auto slope = [&](double t, InnerValue& store) {
            Policy p({t, 1.0 - t});
            InnerValue v = inner_sup(p);
            double g = gap_of(v, p);
            if (g < best.gap) {
                best.gap = g;
                best.p = p;
                best.value = v.value;
            }
            store = std::move(v);
            return store.coeffs[0] - store.coeffs[1];
        };
        double lo = 0.0, hi = 1.0;
        double slo = slope(lo, iv_lo);
        best.iterations = 2;
        if (slo >= 0.0) {
            best.converged = best.gap <= tol;
            return best;
        }
        double shi = slope(hi, iv_hi);
        ++best.iterations;
        if (shi <= 0.0) {
            best.converged = best.gap <= tol;
            return best;
        }
        for (int it = 0; it < max_outer && best.gap > tol && hi - lo > 1e-13; ++it) {
            double mid = 0.5 * (lo + hi);
            InnerValue ivm;
            if (slope(mid, ivm) <= 0.0) {
                lo = mid;
                iv_lo = std::move(ivm);
            } else {
                hi = mid;
                iv_hi = std::move(ivm);
            }
            ++best.iterations;
        }
        // At a kink of the convex map t -> sup the inner maximizer jumps and
        // neither one-sided maximizer closes the gap; the maximizer set at the
        // kink is convex, so bisect on the mixture weight that equalizes the
        // two affine coefficients. The certified gap uses the true sup at p.
        if (mix && best.gap > tol && iv_lo.state && iv_hi.state) {
            double t = 0.5 * (lo + hi);
            Policy p({t, 1.0 - t});
            // Mixture evaluations are exact, so they both tighten the lower
            // bound on the sup at p and, at the equalizing weight, bound the
            // inf over p' from below.
            double sup_lb = -std::numeric_limits<double>::infinity();
            double best_inf = -std::numeric_limits<double>::infinity();
            auto try_lam = [&](double lam) {
                InnerValue m = mix(p, iv_lo.state, iv_hi.state, lam);
                sup_lb = std::max(sup_lb, m.value);
                double mn = *std::min_element(m.coeffs.begin(), m.coeffs.end());
                best_inf = std::max(best_inf, m.const_term + mn);
                ++best.iterations;
                return m.coeffs[0] - m.coeffs[1];
            };
            for (int round = 0; round < 8; ++round) {
                // lam = 1 recovers the lo-side maximizer (slope <= 0), lam = 0
                // the hi side (slope > 0).
                double s1 = try_lam(1.0);
                double s0 = try_lam(0.0);
                if (s1 < 0.0 && s0 > 0.0) {
                    double llo = 0.0, lhi = 1.0;
                    for (int it = 0; it < 100; ++it) {
                        double lmid = 0.5 * (llo + lhi);
                        (try_lam(lmid) > 0.0 ? llo : lhi) = lmid;
                    }
                }
                // Recompute the sup; callers that warm-start from the mixture
                // iterates can only improve on the lower bound. Fold the
                // improved maximizer back into the matching endpoint and
                // re-balance against the other side.
                InnerValue sup_v = inner_sup(p);
                ++best.iterations;
                sup_lb = std::max(sup_lb, sup_v.value);
                double g = sup_lb - best_inf;
                if (g < best.gap) {
                    best.gap = g;
                    best.p = p;
                    best.value = sup_lb;
                }
                if (best.gap <= tol || !sup_v.state) break;
                double s = sup_v.coeffs[0] - sup_v.coeffs[1];
                (s <= 0.0 ? iv_lo : iv_hi) = std::move(sup_v);
            }
        }
        best.converged = best.gap <= tol;
        return best;
    }

    // Entropic mirror descent on p with exact inner maximization.
    Policy p = best.p;
    double scale = 1.0;
    for (double c : iv.coeffs) scale = std::max(scale, std::abs(c));
    for (int it = 1; it <= max_outer && best.gap > tol; ++it) {
        double step = std::sqrt(2.0 * std::log(std::max(K, 2)) / it) / scale;
        std::vector<double> w(K);
        double mn = *std::min_element(iv.coeffs.begin(), iv.coeffs.end());
        double total = 0.0;
        for (int j = 0; j < K; ++j) {
            w[j] = std::max(p[j], kEpsMin) * std::exp(-step * (iv.coeffs[j] - mn));
            total += w[j];
        }
        for (double& v : w) v /= total;
        p = Policy(w);
        iv = inner_sup(p);
        for (double c : iv.coeffs) scale = std::max(scale, std::abs(c));
        double g = gap_of(iv, p);
        ++best.iterations;
        if (g < best.gap) {
            best.gap = g;
            best.p = p;
            best.value = iv.value;
        }
    }
    best.converged = best.gap <= tol;
    return best;
}

}  // namespace airbench::detail
