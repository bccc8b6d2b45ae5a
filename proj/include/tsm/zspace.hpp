#pragma once

// Verification engine for the mean-vanishing function classes on an annulus:
// admissibility geometry, spherical-harmonic coefficient extraction on radial
// grids, least-squares characterization against the exterior profile bases
// (one-sided, two-sided, and Euclidean), membership checks by direct mean
// evaluation, and support-radius estimation.
//
// Every driver is deterministic: sample pairs come from low-discrepancy
// sequences in a fixed order, per-pair work may run on any number of threads,
// and all results are committed into index-addressed arrays before any
// reduction, so reports are byte-identical across thread counts.

#include "tsm/harmonic.hpp"
#include "tsm/numeric.hpp"
#include "tsm/quadrature.hpp"
#include "tsm/radial.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsm {

// ======================= geometry =======================

// Safety margin for the strict containment inequalities; keeps quadrature
// nodes strictly inside the open annulus.
inline constexpr double kGeometryMargin = 1e-9;

struct AnnulusSpec {
    int n = 1;
    double r = 0.0;
    double R = std::numeric_limits<double>::infinity();
};

inline void validate_annulus(const AnnulusSpec& ann) {
    if (ann.n < 1) throw std::invalid_argument("annulus: n must be >= 1");
    if (!(ann.r >= 0)) throw std::invalid_argument("annulus: r must be >= 0");
    if (!(ann.r < ann.R)) throw std::invalid_argument("annulus: need r < R");
}

inline double point_norm(const std::vector<std::complex<double>>& z) {
    double r2 = 0;
    for (const auto& w : z) r2 += std::norm(w);
    return std::sqrt(r2);
}

// True iff the sphere of radius s about z lies inside the annulus and the
// ball of radius r about the origin lies inside the ball of radius s about z.
// Geometrically this reduces to s > r + |z| together with s + |z| < R, the
// second clause dropping out when R is infinite; the margin keeps both
// inequalities strict.
inline bool admissible(const std::vector<std::complex<double>>& z, double s,
                       const AnnulusSpec& ann) {
    validate_annulus(ann);
    if (static_cast<int>(z.size()) != ann.n)
        throw std::invalid_argument("admissible: point length != n");
    const double zn = point_norm(z);
    if (!(s > ann.r + zn + kGeometryMargin)) return false;
    if (std::isinf(ann.R)) return true;
    return s + zn < ann.R - kGeometryMargin;
}

// Worst-case containment margin of a concrete rule for the sphere about z:
// the minimum over nodes y of (|y| - r), (R - |y|), together with the ball
// containment slack s - (r + |z|).  Positive means every node sits strictly
// inside the annulus and the central ball is covered.
inline double annulus_containment_margin(const std::vector<std::complex<double>>& z,
                                         const SphereRule& rule, const AnnulusSpec& ann) {
    validate_annulus(ann);
    if (static_cast<int>(z.size()) != rule.n || rule.n != ann.n)
        throw std::invalid_argument("annulus_containment_margin: dimension mismatch");
    double margin = rule.s - (ann.r + point_norm(z));
    for (size_t k = 0; k < rule.size(); ++k) {
        const std::complex<double>* w = rule.node(k);
        double y2 = 0;
        for (int j = 0; j < rule.n; ++j) y2 += std::norm(z[j] - w[j]);
        const double yn = std::sqrt(y2);
        margin = std::min(margin, yn - ann.r);
        if (!std::isinf(ann.R)) margin = std::min(margin, ann.R - yn);
    }
    return margin;
}

// ======================= deterministic sampling =======================

namespace detail {
inline double halton(unsigned long long index, unsigned base) {
    double f = 1.0, x = 0.0;
    while (index) {
        f /= base;
        x += f * static_cast<double>(index % base);
        index /= base;
    }
    return x;
}

inline constexpr unsigned kHaltonPrimes[16] = {2,  3,  5,  7,  11, 13, 17, 19,
                                               23, 29, 31, 37, 41, 43, 47, 53};
}  // namespace detail

// Deterministic low-discrepancy point on the unit sphere of C^n: Gaussian
// coordinates synthesized from Halton sequences through the Box-Muller map,
// then normalized.  index must be >= 1; distinct indices give well-spread
// directions with no rotational bias.
inline std::vector<std::complex<double>> sphere_direction(int n, unsigned long long index) {
    if (n < 1 || n > 8) throw std::invalid_argument("sphere_direction: need 1 <= n <= 8");
    if (index == 0) throw std::invalid_argument("sphere_direction: index must be >= 1");
    std::vector<std::complex<double>> z(n);
    double norm2 = 0;
    for (int j = 0; j < n; ++j) {
        const double u = detail::halton(index, detail::kHaltonPrimes[2 * j]);
        const double v = detail::halton(index, detail::kHaltonPrimes[2 * j + 1]);
        const double rad = std::sqrt(-2.0 * std::log(u));
        z[j] = std::complex<double>(rad * std::cos(2.0 * M_PI * v), rad * std::sin(2.0 * M_PI * v));
        norm2 += std::norm(z[j]);
    }
    const double nrm = std::sqrt(norm2);
    for (auto& w : z) w /= nrm;
    return z;
}

struct SpherePair {
    std::vector<std::complex<double>> z;
    double s = 0.0;
};

// How to build the (z, s) evaluation set: z_count centers on a radial ladder
// of low-discrepancy directions (the first center is always the origin), and
// s_per_z sphere radii per center spread over the admissible window.
struct PairPolicy {
    int z_count = 20;
    int s_per_z = 5;
    double z_max = 0.0;   // 0: derived from the annulus
    double s_span = 4.0;  // s window beyond r + |z| when R is infinite
    unsigned long long seed = 0;
};

inline std::vector<SpherePair> sample_pairs(const AnnulusSpec& ann, const PairPolicy& pol) {
    validate_annulus(ann);
    if (pol.z_count < 1 || pol.s_per_z < 1)
        throw std::invalid_argument("sample_pairs: counts must be >= 1");
    double zmax = pol.z_max;
    if (zmax <= 0) zmax = std::isinf(ann.R) ? ann.r + 1.0 : 0.45 * (ann.R - ann.r);
    std::vector<SpherePair> out;
    for (int k = 0; k < pol.z_count; ++k) {
        const double radius = pol.z_count == 1 ? 0.0 : zmax * k / (pol.z_count - 1.0);
        std::vector<std::complex<double>> z(static_cast<size_t>(ann.n), 0.0);
        if (radius > 0) {
            z = sphere_direction(ann.n, pol.seed * 1000003ULL + static_cast<unsigned>(k) + 1);
            for (auto& w : z) w *= radius;
        }
        const double zn = point_norm(z);
        const double lo = ann.r + zn;
        const double hi = std::isinf(ann.R) ? lo + pol.s_span : ann.R - zn;
        if (!(hi > lo + 1e3 * kGeometryMargin)) continue;  // no admissible s for this center
        const double pad = 0.02 * (hi - lo);
        for (double s : chebyshev_grid(pol.s_per_z, lo + pad, hi - pad))
            if (admissible(z, s, ann)) out.push_back({z, s});
    }
    return out;
}

// ======================= mean sweeps =======================

enum class MeanKind { twisted, left_twisted, euclidean };

struct PairRecord {
    std::vector<std::complex<double>> z;
    double s = 0.0;
    std::complex<double> mean;
};

struct MeanSweep {
    std::vector<PairRecord> records;
    double max_abs = 0.0;       // max |mean| over the set
    double sup_f = 0.0;         // max |f| over every sphere node touched
    double weighted_sup = 0.0;  // max e^{-|y|^2/4}|f(y)| (weight 1 for euclidean)
};

// Evaluates one mean per pair, in parallel, committing values by pair index
// so the result is independent of the thread count.  weighted_scale adds a
// second pass recording the Gaussian-weighted sup used by the support tests.
inline MeanSweep mean_sweep(const FunctionSampler& f, const std::vector<SpherePair>& pairs,
                            int order, double lambda, MeanKind kind, int threads = 0,
                            bool weighted_scale = false) {
    const size_t m = pairs.size();
    std::vector<std::complex<double>> means(m);
    std::vector<double> sups(m, 0.0), wsups(m, 0.0);
    parallel_for(m, resolve_threads(threads), [&](size_t i) {
        const SpherePair& pr = pairs[i];
        const SphereRule rule = build_sphere_rule(f.n, pr.s, order);
        double sup = 0.0;
        switch (kind) {
            case MeanKind::twisted: means[i] = twisted_mean(f, pr.z, rule, lambda, &sup); break;
            case MeanKind::left_twisted:
                means[i] = left_twisted_mean(f, pr.z, rule, lambda, &sup);
                break;
            case MeanKind::euclidean: means[i] = euclidean_mean(f, pr.z, rule, &sup); break;
        }
        sups[i] = sup;
        if (weighted_scale) {
            const double sign = kind == MeanKind::euclidean ? +1.0 : -1.0;
            double ws = 0.0;
            std::vector<std::complex<double>> y(static_cast<size_t>(f.n));
            for (size_t knode = 0; knode < rule.size(); ++knode) {
                const std::complex<double>* w = rule.node(knode);
                double y2 = 0.0;
                for (int j = 0; j < f.n; ++j) {
                    y[static_cast<size_t>(j)] = pr.z[static_cast<size_t>(j)] + sign * w[j];
                    y2 += std::norm(y[static_cast<size_t>(j)]);
                }
                const double weight = kind == MeanKind::euclidean ? 1.0 : std::exp(-0.25 * y2);
                ws = std::max(ws, weight * std::abs(f.f(y)));
            }
            wsups[i] = ws;
        }
    });
    MeanSweep sweep;
    sweep.records.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        sweep.records.push_back({pairs[i].z, pairs[i].s, means[i]});
        sweep.max_abs = std::max(sweep.max_abs, std::abs(means[i]));
        sweep.sup_f = std::max(sweep.sup_f, sups[i]);
        sweep.weighted_sup = std::max(sweep.weighted_sup, wsups[i]);
    }
    return sweep;
}

// ======================= coefficient extraction =======================

struct SampledProfile {
    int p = 0, q = 0, j = 0;
    std::vector<double> rho;
    std::vector<std::complex<double>> a;        // raw coefficient samples a(rho)
    std::vector<std::complex<double>> a_tilde;  // rho^{-(p+q)} a(rho)
};

struct ExtractionResult {
    std::vector<SampledProfile> profiles;  // one per orthonormal basis element
    double sup_f = 0.0;                    // max |f| over all sphere samples
    std::vector<std::string> warnings;
};

// Sensible default order for a sampler that declares its sphere-restriction
// degree; samplers without the declaration need an explicit order.
inline int default_quadrature_order(const FunctionSampler& f) {
    if (!f.sphere_degree)
        throw std::invalid_argument(
            "default_quadrature_order: sampler declares no sphere-restriction degree; "
            "pass an explicit order");
    return 2 * *f.sphere_degree + 16;
}

// Per-channel coefficients a_j(rho) = integral over the unit sphere of
// f(rho w) conj(Y_j(w)), one radial series per orthonormal basis element of
// the (p, q) harmonic space, plus the power-normalized series
// rho^{-(p+q)} a_j.  The integrand is a polynomial of degree at most
// sphere_degree + p + q on the sphere, so the rule is exact when the order
// reaches that; otherwise a warning is recorded.
inline ExtractionResult extract_coefficients(const FunctionSampler& f, const AnnulusSpec& ann,
                                             int p, int q, const std::vector<double>& grid,
                                             int order, int threads = 0) {
    validate_annulus(ann);
    if (f.n != ann.n) throw std::invalid_argument("extract_coefficients: sampler/annulus mismatch");
    if (grid.empty()) throw std::invalid_argument("extract_coefficients: empty grid");
    for (double rho : grid)
        if (!(rho > ann.r && rho < ann.R))
            throw std::invalid_argument("extract_coefficients: grid point outside the annulus");
    ExtractionResult out;
    if (f.sphere_degree && order < *f.sphere_degree + p + q)
        out.warnings.push_back("quadrature order " + std::to_string(order) +
                               " is below the exactness threshold " +
                               std::to_string(*f.sphere_degree + p + q) + " for channel (" +
                               std::to_string(p) + "," + std::to_string(q) + ")");
    const auto basis = orthonormal_basis(f.n, p, q);
    const size_t d = basis.size();
    const SphereRule rule = build_sphere_rule(f.n, 1.0, order);
    const size_t nodes = rule.size();
    // conj(Y_j) at the unit-sphere nodes, shared across all radii.
    std::vector<std::vector<std::complex<double>>> conjy(d);
    for (size_t jj = 0; jj < d; ++jj) {
        const CompiledPolynomial comp(conjugate(basis[jj].poly));
        const double sc = basis[jj].scale();
        conjy[jj].resize(nodes);
        for (size_t k = 0; k < nodes; ++k) conjy[jj][k] = sc * comp.eval(rule.node(k));
    }
    const size_t m = grid.size();
    std::vector<std::vector<std::complex<double>>> avals(d, std::vector<std::complex<double>>(m));
    std::vector<double> sups(m, 0.0);
    parallel_for(m, resolve_threads(threads), [&](size_t gi) {
        const double rho = grid[gi];
        std::vector<std::complex<double>> pt(static_cast<size_t>(f.n)), fv(nodes), terms(nodes);
        double sup = 0.0;
        for (size_t k = 0; k < nodes; ++k) {
            const std::complex<double>* w = rule.node(k);
            for (int j = 0; j < f.n; ++j) pt[static_cast<size_t>(j)] = rho * w[j];
            fv[k] = f.f(pt);
            sup = std::max(sup, std::abs(fv[k]));
        }
        sups[gi] = sup;
        for (size_t jj = 0; jj < d; ++jj) {
            for (size_t k = 0; k < nodes; ++k) terms[k] = rule.weights[k] * fv[k] * conjy[jj][k];
            avals[jj][gi] = pairwise_sum(terms);
        }
    });
    for (double s : sups) out.sup_f = std::max(out.sup_f, s);
    out.profiles.reserve(d);
    for (size_t jj = 0; jj < d; ++jj) {
        SampledProfile prof;
        prof.p = p;
        prof.q = q;
        prof.j = static_cast<int>(jj);
        prof.rho = grid;
        prof.a = std::move(avals[jj]);
        prof.a_tilde.resize(m);
        for (size_t gi = 0; gi < m; ++gi)
            prof.a_tilde[gi] = prof.a[gi] * std::pow(grid[gi], -static_cast<double>(p + q));
        out.profiles.push_back(std::move(prof));
    }
    return out;
}

// ======================= reports and verdicts =======================

struct FitRecord {
    int p = 0, q = 0, j = 0;
    std::vector<std::complex<double>> coeffs;
    double residual = 0.0;
    double conditioning = 0.0;
};

// Three-way classification: the underlying identities are exact, so numerics
// need a gap between "indistinguishable from a member" and "provably off".
struct VerdictThresholds {
    double member = 1e-8;
    double reject = 1e-4;
};

// Channels whose raw coefficients never rise above this multiple of the
// function scale are treated as identically zero rather than fitted noise.
inline constexpr double kChannelFloor = 1e-11;
inline constexpr double kConditioningLimit = 1e12;

struct MembershipReport {
    AnnulusSpec ann;
    double lambda = 1.0;
    std::vector<PairRecord> pairs;       // twisted (or euclidean) means
    std::vector<PairRecord> left_pairs;  // opposite-orientation means (two-sided runs)
    double max_mean_abs = 0.0;
    double max_left_mean_abs = 0.0;
    std::vector<SampledProfile> profiles;
    std::vector<FitRecord> fits;
    bool fit_raw = false;  // Euclidean reports fit a instead of a-tilde
    double max_fit_residual = 0.0;
    double scale = 0.0;
    bool ill_conditioned = false;
    std::string verdict;
    std::vector<std::string> flags;
};

namespace detail {

inline std::string channel_tag(int p, int q, int j) {
    return "(" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(j) + ")";
}

// Verdict from the numbers stored in the report, so a reader can re-derive it.
inline void classify(MembershipReport& rep, const VerdictThresholds& tol) {
    if (rep.scale == 0.0) {
        rep.verdict = "member";
        return;
    }
    const double worst =
        std::max(rep.max_fit_residual, std::max(rep.max_mean_abs, rep.max_left_mean_abs));
    if (worst > tol.reject * rep.scale)
        rep.verdict = "non-member";
    else if (worst < tol.member * rep.scale && !rep.ill_conditioned)
        rep.verdict = "member";
    else
        rep.verdict = "inconclusive";
}

// Shared fitting pass: extract every requested channel, floor the numerically
// dead ones, fit the rest against basis_for(n, p, q), and classify.
inline MembershipReport characterize_core(
    const FunctionSampler& f, const AnnulusSpec& ann,
    const std::vector<std::pair<int, int>>& pq_list, const std::vector<double>& grid, int order,
    double lambda, const std::function<std::vector<RadialProfile>(int, int, int)>& basis_for,
    bool fit_raw, const VerdictThresholds& tol, int threads) {
    MembershipReport rep;
    rep.ann = ann;
    rep.lambda = lambda;
    rep.fit_raw = fit_raw;
    std::vector<ExtractionResult> extractions;
    extractions.reserve(pq_list.size());
    for (const auto& [p, q] : pq_list) {
        extractions.push_back(extract_coefficients(f, ann, p, q, grid, order, threads));
        for (const auto& w : extractions.back().warnings) rep.flags.push_back(w);
        rep.scale = std::max(rep.scale, extractions.back().sup_f);
    }
    if (rep.scale == 0.0) rep.flags.push_back("function vanishes at every sampled point");
    for (size_t ci = 0; ci < pq_list.size(); ++ci) {
        const auto [p, q] = pq_list[ci];
        const auto basis = basis_for(ann.n, p, q);
        for (const SampledProfile& prof : extractions[ci].profiles) {
            double sup_a = 0.0;
            for (const auto& v : prof.a) sup_a = std::max(sup_a, std::abs(v));
            FitRecord fr;
            fr.p = prof.p;
            fr.q = prof.q;
            fr.j = prof.j;
            if (rep.scale == 0.0 || sup_a < kChannelFloor * rep.scale) {
                fr.coeffs.assign(basis.size(), 0.0);
                if (rep.scale > 0.0)
                    rep.flags.push_back("channel " + channel_tag(prof.p, prof.q, prof.j) +
                                        " below the coefficient floor; treated as zero");
            } else {
                const auto& series = fit_raw ? prof.a : prof.a_tilde;
                const FitResult res = fit_profile(grid, series, basis, lambda);
                fr.coeffs = res.coeffs;
                fr.residual = res.residual;
                fr.conditioning = res.conditioning;
                if (!basis.empty() && res.conditioning > kConditioningLimit) {
                    rep.ill_conditioned = true;
                    rep.flags.push_back("ill-conditioned fit on channel " +
                                        channel_tag(prof.p, prof.q, prof.j));
                }
            }
            rep.max_fit_residual = std::max(rep.max_fit_residual, fr.residual);
            rep.fits.push_back(std::move(fr));
            rep.profiles.push_back(prof);
        }
    }
    classify(rep, tol);
    return rep;
}

}  // namespace detail

// ======================= verification drivers =======================

// Default radial grid for coefficient extraction: Chebyshev points strictly
// inside the annulus, with a window of length 4 past the inner radius when
// the annulus is unbounded.
inline std::vector<double> default_grid(const AnnulusSpec& ann, int count = 24) {
    validate_annulus(ann);
    if (std::isinf(ann.R)) return chebyshev_grid(count, ann.r + 0.2, ann.r + 4.2);
    const double pad = 0.05 * (ann.R - ann.r);
    return chebyshev_grid(count, ann.r + pad, ann.R - pad);
}

// Direct membership check: max |twisted mean| over a deterministic admissible
// sample set, compared against tol times the sup of |f| on the touched
// spheres.  left_side switches to the opposite phase orientation.
inline MembershipReport membership_test(const FunctionSampler& f, const AnnulusSpec& ann,
                                        const PairPolicy& policy, double lambda, double tol,
                                        int order = 40, int threads = 0, bool left_side = false) {
    validate_annulus(ann);
    if (f.n != ann.n) throw std::invalid_argument("membership_test: sampler/annulus mismatch");
    const auto pairs = sample_pairs(ann, policy);
    if (pairs.empty())
        throw std::runtime_error("membership_test: no admissible (z, s) pairs for this annulus");
    MembershipReport rep;
    rep.ann = ann;
    rep.lambda = lambda;
    const MeanSweep sweep = mean_sweep(
        f, pairs, order, lambda, left_side ? MeanKind::left_twisted : MeanKind::twisted, threads);
    rep.pairs = sweep.records;
    rep.max_mean_abs = sweep.max_abs;
    rep.scale = sweep.sup_f;
    if (rep.scale == 0.0) {
        rep.verdict = "consistent";
        rep.flags.push_back("function vanishes at every sampled point");
    } else {
        rep.verdict = rep.max_mean_abs < tol * rep.scale ? "consistent" : "inconsistent";
    }
    return rep;
}

// Coefficient-level characterization: fit every requested (p, q) channel's
// power-normalized coefficients against the exterior profile basis (empty for
// the radial channel, which must vanish).  Verdict per the three-way
// thresholds, relative to the sampled sup of |f|.
inline MembershipReport characterize(const FunctionSampler& f, const AnnulusSpec& ann,
                                     const std::vector<std::pair<int, int>>& pq_list,
                                     const std::vector<double>& grid, int order,
                                     double lambda = 1.0, const VerdictThresholds& tol = {},
                                     int threads = 0) {
    return detail::characterize_core(
        f, ann, pq_list, grid, order, lambda,
        [](int n, int p, int q) { return characterization_basis(n, p, q); }, false, tol, threads);
}

// Two-sided characterization: fits run against the truncated basis (both
// exponential families cut at min(p, q), hence empty on pure-type channels,
// whose coefficients must vanish), and both mean orientations are checked on
// a sampled admissible set.
inline MembershipReport two_sided_characterize(const FunctionSampler& f, const AnnulusSpec& ann,
                                               const std::vector<std::pair<int, int>>& pq_list,
                                               const std::vector<double>& grid, int order,
                                               double lambda = 1.0, const PairPolicy& policy = {},
                                               const VerdictThresholds& tol = {},
                                               int threads = 0) {
    MembershipReport rep = detail::characterize_core(
        f, ann, pq_list, grid, order, lambda,
        [](int n, int p, int q) { return truncated_characterization_basis(n, p, q); }, false, tol,
        threads);
    const auto pairs = sample_pairs(ann, policy);
    if (pairs.empty())
        throw std::runtime_error("two_sided_characterize: no admissible (z, s) pairs");
    const MeanSweep right = mean_sweep(f, pairs, order, lambda, MeanKind::twisted, threads);
    const MeanSweep left = mean_sweep(f, pairs, order, lambda, MeanKind::left_twisted, threads);
    rep.pairs = right.records;
    rep.left_pairs = left.records;
    rep.max_mean_abs = right.max_abs;
    rep.max_left_mean_abs = left.max_abs;
    rep.scale = std::max({rep.scale, right.sup_f, left.sup_f});
    detail::classify(rep, tol);
    return rep;
}

// Euclidean characterization on R^{2n}: the degree-k channels decompose over
// the bigraded harmonic spaces with p + q = k; the raw coefficients are fit
// against the pure powers rho^{k-2n-2i} (empty for k = 0, which must vanish).
inline MembershipReport euclidean_characterize(const FunctionSampler& g, const AnnulusSpec& ann,
                                               const std::vector<int>& k_list,
                                               const std::vector<double>& grid, int order,
                                               const VerdictThresholds& tol = {},
                                               int threads = 0) {
    std::vector<std::pair<int, int>> pq;
    for (int k : k_list) {
        if (k < 0) throw std::invalid_argument("euclidean_characterize: degrees must be >= 0");
        for (int p = 0; p <= k; ++p)
            if (harmonic_space_dimension(ann.n, p, k - p) > 0) pq.push_back({p, k - p});
    }
    MembershipReport rep = detail::characterize_core(
        g, ann, pq, grid, order, /*lambda=*/1.0,
        [](int n, int p, int q) { return euclidean_characterization_basis(n, p + q); }, true, tol,
        threads);
    rep.lambda = 0.0;
    rep.flags.push_back("euclidean spherical means");
    return rep;
}

// ======================= support radius =======================

struct SupportPolicy {
    double r_step = 0.05;
    int z_count = 9;
    double z_max = 0.75;
    double s_step = 0.025;
    double s_reach = 1.5;  // spheres sampled up to s = |z| + r_max + s_reach
    unsigned long long seed = 0;
};

struct SupportGridEntry {
    double r = 0.0;
    double max_mean = 0.0;
    bool pass = false;
};

struct SupportViolation {
    double r = 0.0;  // candidate radius the pair rules out
    std::vector<std::complex<double>> z;
    double s = 0.0;
    double mean_abs = 0.0;
};

struct SupportReport {
    int n = 1;
    bool euclidean = false;
    double lambda = 1.0;
    double r_max = 0.0;
    double tol = 0.0;
    double scale = 0.0;  // weighted sup of |f| over the sampled spheres
    std::optional<double> r_hat;
    std::string message;  // set when no grid radius qualifies
    DecayInfo decay;
    std::vector<SupportGridEntry> grid;
    std::vector<SupportViolation> violations;  // pairs ruling out radii below r_hat
    std::vector<PairRecord> pairs;
    std::vector<std::string> flags;
};

// Smallest grid radius r such that every sampled mean with s > r + |z| is
// below tol * scale.  Means are evaluated once on a master (z, s) set and
// re-filtered per candidate radius, so the estimate is monotone by
// construction.  The decay metadata is recorded and drives the
// hypothesis-violation flag; it is not enforced pointwise.
inline SupportReport support_radius(const FunctionSampler& f, const DecayInfo& decay,
                                    double r_max, const SupportPolicy& pol = {},
                                    double tol = 1e-6, int order = 24, double lambda = 1.0,
                                    int threads = 0, bool euclidean = false) {
    if (!(r_max > 0)) throw std::invalid_argument("support_radius: r_max must be positive");
    if (!(pol.r_step > 0) || !(pol.s_step > 0))
        throw std::invalid_argument("support_radius: grid steps must be positive");
    if (pol.z_count < 2) throw std::invalid_argument("support_radius: need z_count >= 2");
    std::vector<SpherePair> pairs;
    const int steps = static_cast<int>(std::floor((r_max + pol.s_reach) / pol.s_step + 1e-9));
    for (int k = 0; k < pol.z_count; ++k) {
        const double radius = pol.z_max * k / (pol.z_count - 1.0);
        std::vector<std::complex<double>> z(static_cast<size_t>(f.n), 0.0);
        if (radius > 0) {
            z = sphere_direction(f.n, pol.seed * 1000003ULL + static_cast<unsigned>(k) + 1);
            for (auto& w : z) w *= radius;
        }
        const double zn = point_norm(z);
        for (int t = 1; t <= steps; ++t) pairs.push_back({z, zn + t * pol.s_step});
    }
    const MeanSweep sweep =
        mean_sweep(f, pairs, order, lambda, euclidean ? MeanKind::euclidean : MeanKind::twisted,
                   threads, /*weighted_scale=*/true);
    SupportReport rep;
    rep.n = f.n;
    rep.euclidean = euclidean;
    rep.lambda = lambda;
    rep.r_max = r_max;
    rep.tol = tol;
    rep.decay = decay;
    rep.pairs = sweep.records;
    rep.scale = sweep.weighted_sup;
    if (!decay.satisfied) rep.flags.push_back("decay hypothesis violated");
    if (rep.scale == 0.0) rep.flags.push_back("function vanishes at every sampled point");
    const double thresh = tol * rep.scale;
    const int rsteps = static_cast<int>(std::floor(r_max / pol.r_step + 1e-9));
    for (int ri = 0; ri <= rsteps; ++ri) {
        const double r = ri * pol.r_step;
        double mx = 0.0;
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (!(pairs[i].s > r + point_norm(pairs[i].z) + kGeometryMargin)) continue;
            mx = std::max(mx, std::abs(sweep.records[i].mean));
        }
        const bool pass = rep.scale == 0.0 ? true : mx < thresh;
        rep.grid.push_back({r, mx, pass});
        if (pass && !rep.r_hat) rep.r_hat = r;
    }
    for (const SupportGridEntry& entry : rep.grid) {
        if (rep.r_hat && entry.r >= *rep.r_hat - 0.5 * pol.r_step) break;
        if (entry.pass) continue;
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (!(pairs[i].s > entry.r + point_norm(pairs[i].z) + kGeometryMargin)) continue;
            const double a = std::abs(sweep.records[i].mean);
            if (a >= thresh) rep.violations.push_back({entry.r, pairs[i].z, pairs[i].s, a});
        }
    }
    if (!rep.r_hat) rep.message = "no support detected <= r_max";
    return rep;
}

// Euclidean analogue: ordinary spherical means, decay hypothesis
// sup |x|^k |g(x)| finite.
inline SupportReport helgason_support_check(const FunctionSampler& g, const DecayInfo& decay,
                                            double r_max, const SupportPolicy& pol = {},
                                            double tol = 1e-6, int order = 24, int threads = 0) {
    return support_radius(g, decay, r_max, pol, tol, order, /*lambda=*/0.0, threads,
                          /*euclidean=*/true);
}

// ======================= serialization =======================

namespace detail {

inline nlohmann::ordered_json annulus_json(const AnnulusSpec& ann) {
    nlohmann::ordered_json j;
    j["n"] = ann.n;
    j["r"] = ann.r;
    if (std::isinf(ann.R))
        j["R"] = "inf";
    else
        j["R"] = ann.R;
    return j;
}

inline nlohmann::ordered_json pair_json(const PairRecord& pr) {
    nlohmann::ordered_json j;
    auto z = nlohmann::ordered_json::array();
    for (const auto& w : pr.z) {
        z.push_back(w.real());
        z.push_back(w.imag());
    }
    j["z"] = std::move(z);
    j["s"] = pr.s;
    j["mean_re"] = pr.mean.real();
    j["mean_im"] = pr.mean.imag();
    return j;
}

inline nlohmann::ordered_json fit_json(const FitRecord& fr) {
    nlohmann::ordered_json j;
    j["p"] = fr.p;
    j["q"] = fr.q;
    j["j"] = fr.j;
    auto coeffs = nlohmann::ordered_json::array();
    for (const auto& c : fr.coeffs) coeffs.push_back({c.real(), c.imag()});
    j["coeffs"] = std::move(coeffs);
    j["residual"] = fr.residual;
    j["conditioning"] = fr.conditioning;
    return j;
}

}  // namespace detail

inline std::string report_to_json(const MembershipReport& rep) {
    nlohmann::ordered_json j;
    j["annulus"] = detail::annulus_json(rep.ann);
    j["lambda"] = rep.lambda;
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& pr : rep.pairs) pairs.push_back(detail::pair_json(pr));
    j["pairs"] = std::move(pairs);
    if (!rep.left_pairs.empty()) {
        auto lp = nlohmann::ordered_json::array();
        for (const auto& pr : rep.left_pairs) lp.push_back(detail::pair_json(pr));
        j["left_pairs"] = std::move(lp);
    }
    auto fits = nlohmann::ordered_json::array();
    for (const auto& fr : rep.fits) fits.push_back(detail::fit_json(fr));
    j["fits"] = std::move(fits);
    j["verdict"] = rep.verdict;
    j["flags"] = rep.flags;
    j["scale"] = rep.scale;
    j["max_mean_abs"] = rep.max_mean_abs;
    j["max_left_mean_abs"] = rep.max_left_mean_abs;
    j["max_fit_residual"] = rep.max_fit_residual;
    j["fit_raw"] = rep.fit_raw;
    return j.dump(2) + "\n";
}

// One row per (channel, grid point) of the fitted coefficient series:
// a-tilde for twisted reports, raw a for Euclidean ones.
inline std::string report_to_csv(const MembershipReport& rep) {
    std::string out = "p,q,j,rho,coeff_re,coeff_im\n";
    for (const auto& prof : rep.profiles) {
        const auto& series = rep.fit_raw ? prof.a : prof.a_tilde;
        for (size_t i = 0; i < prof.rho.size(); ++i) {
            out += std::to_string(prof.p) + "," + std::to_string(prof.q) + "," +
                   std::to_string(prof.j) + "," + format_double(prof.rho[i]) + "," +
                   format_double(series[i].real()) + "," + format_double(series[i].imag()) + "\n";
        }
    }
    return out;
}

// Single-channel slice of the coefficient table, for per-(p,q) artifact
// files.  Same row format as report_to_csv.
inline std::string report_channel_csv(const MembershipReport& rep, int p, int q) {
    std::string out = "p,q,j,rho,coeff_re,coeff_im\n";
    for (const auto& prof : rep.profiles) {
        if (prof.p != p || prof.q != q) continue;
        const auto& series = rep.fit_raw ? prof.a : prof.a_tilde;
        for (size_t i = 0; i < prof.rho.size(); ++i) {
            out += std::to_string(prof.p) + "," + std::to_string(prof.q) + "," +
                   std::to_string(prof.j) + "," + format_double(prof.rho[i]) + "," +
                   format_double(series[i].real()) + "," + format_double(series[i].imag()) + "\n";
        }
    }
    return out;
}

// One row per evaluated mean; the two-sided runs emit their opposite-
// orientation sweep with side "left".
inline std::string means_to_csv(const MembershipReport& rep) {
    std::string out = "side";
    for (int j = 1; j <= rep.ann.n; ++j)
        out += ",z" + std::to_string(j) + "_re,z" + std::to_string(j) + "_im";
    out += ",s,mean_re,mean_im\n";
    const auto emit = [&](const char* side, const std::vector<PairRecord>& records) {
        for (const auto& pr : records) {
            out += side;
            for (const auto& w : pr.z)
                out += "," + format_double(w.real()) + "," + format_double(w.imag());
            out += "," + format_double(pr.s) + "," + format_double(pr.mean.real()) + "," +
                   format_double(pr.mean.imag()) + "\n";
        }
    };
    emit("right", rep.pairs);
    emit("left", rep.left_pairs);
    return out;
}

inline std::string report_to_json(const SupportReport& rep) {
    nlohmann::ordered_json j;
    j["n"] = rep.n;
    j["euclidean"] = rep.euclidean;
    j["lambda"] = rep.lambda;
    j["r_max"] = rep.r_max;
    j["tol"] = rep.tol;
    j["scale"] = rep.scale;
    if (rep.r_hat)
        j["r_hat"] = *rep.r_hat;
    else
        j["r_hat"] = nullptr;
    if (!rep.message.empty()) j["message"] = rep.message;
    nlohmann::ordered_json decay;
    decay["satisfied"] = rep.decay.satisfied;
    decay["constants"] = rep.decay.constants;
    j["decay"] = std::move(decay);
    auto grid = nlohmann::ordered_json::array();
    for (const auto& e : rep.grid) {
        nlohmann::ordered_json g;
        g["r"] = e.r;
        g["max_mean"] = e.max_mean;
        g["pass"] = e.pass;
        grid.push_back(std::move(g));
    }
    j["grid"] = std::move(grid);
    auto viol = nlohmann::ordered_json::array();
    for (const auto& v : rep.violations) {
        nlohmann::ordered_json g;
        g["r"] = v.r;
        auto z = nlohmann::ordered_json::array();
        for (const auto& w : v.z) {
            z.push_back(w.real());
            z.push_back(w.imag());
        }
        g["z"] = std::move(z);
        g["s"] = v.s;
        g["mean_abs"] = v.mean_abs;
        viol.push_back(std::move(g));
    }
    j["violations"] = std::move(viol);
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& pr : rep.pairs) pairs.push_back(detail::pair_json(pr));
    j["pairs"] = std::move(pairs);
    j["flags"] = rep.flags;
    return j.dump(2) + "\n";
}

inline std::string support_to_csv(const SupportReport& rep) {
    std::string out = "r,max_mean,pass\n";
    for (const auto& e : rep.grid)
        out += format_double(e.r) + "," + format_double(e.max_mean) + "," + (e.pass ? "1" : "0") +
               "\n";
    return out;
}

}  // namespace tsm
