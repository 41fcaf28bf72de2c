#include "bgl/solve.hpp"

#include "bgl/errors.hpp"
#include "bgl/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

namespace bgl {

void SolveConfig::validate() const
{
    if (n_starts < 1) throw Rejected("n_starts must be >= 1");
    if (!(tol > 0.0)) throw Rejected("tol must be positive");
    if (max_iter < 10) throw Rejected("max_iter must be >= 10");
    if (!(damping > 0.0 && damping <= 1.0)) throw Rejected("damping must lie in (0, 1]");
    if (!(dedup_tol > tol)) throw Rejected("dedup_tol must exceed tol");
}

namespace {

constexpr double kPoleMargin = 1e-3;
constexpr double kNewtonGuard = 1e-12;
constexpr int kMaxHalvings = 30;
constexpr int kMaxResample = 1000;
constexpr double kImagBound = 3.0;
constexpr double kRadiusFactor = 10.0;
constexpr double kFlatJacobian = 1e-6;

double wrap_distance(cplx z, bool periodic, double period)
{
    if (!periodic) return std::abs(z);
    const double re = z.real() - period * std::round(z.real() / period);
    return std::abs(cplx(re, z.imag()));
}

double min_distance(const std::vector<ProductForm>& forms, std::span<const cplx> x)
{
    double d = std::numeric_limits<double>::infinity();
    for (const auto& f : forms) d = std::min(d, f.min_distance(x));
    return d;
}

// Log-residual values; nullopt at singular points.
std::optional<std::vector<cplx>> log_values(const std::vector<ProductForm>& forms, std::span<const cplx> x)
{
    std::vector<cplx> out;
    out.reserve(forms.size());
    try {
        for (const auto& f : forms) {
            const cplx v = f.value(x, kNewtonGuard);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || v == cplx(0.0)) return std::nullopt;
            out.push_back(v);
        }
    } catch (const SingularPoint&) {
        return std::nullopt;
    }
    return out;
}

struct NewtonProblem {
    const std::vector<ProductForm>& forms;
    bool real_mode;
    double bound;
    bool bound_imag_only;
};

// Damped Newton on log f_i(x) = 0 for holomorphic products, or on log|f_i(x)| = 0 for real unknowns.
// Returns the final point when max_i |f_i - target_i| <= tol with target_i = 1 (complex) or sign(f_i) (real).
// Iterates leaving the domain are abandoned: the products tend to constants at infinity.
std::optional<std::vector<cplx>> newton(const NewtonProblem& pb, std::vector<cplx> x, const SolveConfig& cfg)
{
    const auto& forms = pb.forms;
    const bool real_mode = pb.real_mode;
    auto inside = [&](const std::vector<cplx>& v) {
        return std::all_of(v.begin(), v.end(), [&](cplx z) {
            return pb.bound_imag_only ? std::abs(z.imag()) <= pb.bound : std::abs(z) <= pb.bound;
        });
    };
    const std::size_t n = x.size();
    auto residual = [&](const std::vector<cplx>& v) {
        double r = 0.0;
        for (cplx f : v) {
            const cplx target = real_mode ? cplx(f.real() >= 0 ? 1.0 : -1.0) : cplx(1.0);
            r = std::max(r, std::abs(f - target));
        }
        return r;
    };
    auto residual_vec = [&](const std::vector<cplx>& v) {
        Eigen::VectorXcd F(n);
        for (std::size_t i = 0; i < n; ++i) F(i) = real_mode ? cplx(std::log(std::abs(v[i]))) : std::log(v[i]);
        return F;
    };

    auto vals = log_values(forms, x);
    if (!vals) return std::nullopt;
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (residual(*vals) <= cfg.tol) return x;
        const Eigen::VectorXcd F = residual_vec(*vals);
        Eigen::MatrixXcd J(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto g = forms[i].log_gradient(x, n);
            for (std::size_t k = 0; k < n; ++k) J(i, k) = (real_mode ? cplx(g[k].real()) : g[k]);
        }
        if (real_mode) J = J.real().cast<cplx>();
        const Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
        if (!lu.isInvertible()) return std::nullopt;
        Eigen::VectorXcd step = -lu.solve(F);
        if (!step.allFinite()) return std::nullopt;
        if (real_mode) step = step.real().cast<cplx>();

        const double m0 = F.norm();
        double t = cfg.damping;
        bool moved = false;
        for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
            std::vector<cplx> y(x);
            for (std::size_t k = 0; k < n; ++k) y[k] += t * step(k);
            if (!inside(y)) continue;
            auto yv = log_values(forms, y);
            if (!yv) continue;
            if (residual_vec(*yv).norm() < m0 || residual(*yv) <= cfg.tol) {
                x = std::move(y);
                vals = std::move(yv);
                moved = true;
                break;
            }
        }
        if (!moved) return std::nullopt;
    }
    if (residual(*vals) <= cfg.tol) return x;
    return std::nullopt;
}

cplx canonical_root(const ChainSpec& chain, cplx z)
{
    if (chain.is_xxz()) z -= std::floor(z.real());
    if (!chain.is_open()) return z;
    if (chain.is_xxz()) {
        if (z.real() > 0.5) z = 1.0 - z;
        if ((std::abs(z.real()) < 1e-12 || std::abs(z.real() - 0.5) < 1e-12) && z.imag() < 0) z = std::conj(z);
        return z;
    }
    if (z.real() < 0 || (z.real() == 0.0 && z.imag() < 0)) z = -z;
    return z;
}

bool degenerate_roots(const ChainSpec& chain, const BetheRoots& u, double tol)
{
    const bool per = chain.is_xxz();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (chain.is_open() && wrap_distance(2.0 * u[i], per, 1.0) < tol) return true;
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            if (wrap_distance(u[i] - u[j], per, 1.0) < tol) return true;
            if (chain.is_open() && wrap_distance(u[i] + u[j], per, 1.0) < tol) return true;
        }
    }
    return false;
}

// Smallest singular value of the log-Jacobian below kFlatJacobian marks an asymptotic pseudo-solution.
bool flat_jacobian(const std::vector<ProductForm>& forms, const std::vector<cplx>& x)
{
    const std::size_t n = x.size();
    Eigen::MatrixXcd J(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto g = forms[i].log_gradient(x, n);
        for (std::size_t k = 0; k < n; ++k) J(i, k) = g[k];
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
    return svd.singularValues()(n - 1) < kFlatJacobian;
}

template <class Dist>
double permutation_distance(std::size_t n, Dist&& d)
{
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t i = 0; i < n && worst < best; ++i) worst = std::max(worst, d(i, p[i]));
        best = std::min(best, worst);
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

}  // namespace

double root_set_distance(const ChainSpec& chain, const BetheRoots& a, const BetheRoots& b)
{
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    const bool per = chain.is_xxz();
    return permutation_distance(a.size(), [&](std::size_t i, std::size_t j) {
        double d = wrap_distance(a[i] - b[j], per, 1.0);
        if (chain.is_open()) d = std::min(d, wrap_distance(a[i] + b[j], per, 1.0));
        return d;
    });
}

BetheSolveResult solve_bethe(const ChainSpec& chain, const SolveConfig& cfg)
{
    chain.validate();
    cfg.validate();
    BetheSolveResult res;
    const int M = chain.M;
    if (M == 0) {
        res.solutions.push_back({{}, 0.0});
        res.converged_starts = 1;
        return res;
    }

    std::vector<ProductForm> forms;
    for (int i = 0; i < M; ++i) forms.push_back(bethe_form(chain, i));

    std::mt19937_64 rng(cfg.seed);
    double radius = 0.0;
    for (int a = 0; a < chain.L; ++a)
        radius = std::max(radius, std::abs(chain.thetas[a]) + std::abs(chain.eta) * (std::abs(chain.spins[a]) + 0.5));
    radius += std::abs(chain.eta) * M / 2.0;
    std::uniform_real_distribution<double> re = chain.is_xxz() ? std::uniform_real_distribution<double>(0.0, 1.0)
                                                               : std::uniform_real_distribution<double>(-radius, radius);
    std::uniform_real_distribution<double> im = chain.is_xxz() ? std::uniform_real_distribution<double>(-0.4, 0.4)
                                                               : std::uniform_real_distribution<double>(-radius, radius);

    std::vector<std::vector<cplx>> starts;
    int resample_failures = 0;
    for (int s = 0; s < cfg.n_starts; ++s) {
        std::vector<cplx> x(M);
        int tries = 0;
        do {
            for (auto& z : x) z = cplx(re(rng), im(rng));
        } while (min_distance(forms, x) < kPoleMargin && ++tries < kMaxResample);
        if (tries >= kMaxResample) ++resample_failures;
        starts.push_back(std::move(x));
    }
    if (resample_failures) res.diagnostics.push_back(std::to_string(resample_failures) + " starts stayed near a pole");

    std::vector<std::optional<std::vector<cplx>>> found(starts.size());
    const NewtonProblem pb{forms, false, chain.is_xxz() ? kImagBound : kRadiusFactor * radius, chain.is_xxz()};
    parallel_for(starts.size(), [&](std::size_t s) { found[s] = newton(pb, starts[s], cfg); });

    for (auto& f : found) {
        if (!f) continue;
        ++res.converged_starts;
        BetheRoots roots(*f);
        for (auto& z : roots) z = canonical_root(chain, z);
        std::sort(roots.begin(), roots.end(),
                  [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
        if (degenerate_roots(chain, roots, cfg.dedup_tol)) {
            ++res.degenerate_starts;
            continue;
        }
        if (flat_jacobian(forms, roots)) {
            ++res.asymptotic_starts;
            continue;
        }
        double r = 0.0;
        for (int i = 0; i < M; ++i) r = std::max(r, bethe_lhs(chain, roots, i, 0.0).residual);
        if (!(r <= cfg.tol)) continue;
        const bool dup = std::any_of(res.solutions.begin(), res.solutions.end(), [&](const BetheSolution& s) {
            return root_set_distance(chain, s.roots, roots) < cfg.dedup_tol;
        });
        if (!dup) res.solutions.push_back({std::move(roots), r});
    }
    if (res.solutions.empty())
        res.diagnostics.push_back("no convergent start among " + std::to_string(cfg.n_starts) + " (" +
                                  std::to_string(res.converged_starts) + " converged, " +
                                  std::to_string(res.degenerate_starts) + " degenerate, " +
                                  std::to_string(res.asymptotic_starts) + " asymptotic)");
    return res;
}

namespace {

bool pi_periodic(Family f) { return f != Family::E8; }

double reduce_pi(double x)
{
    double r = x - kPi * std::floor(x / kPi);
    if (r >= kPi - 1e-12) r = 0.0;
    return r;
}

std::vector<std::vector<double>> symmetry_images(const GaugeTheorySpec& g, const std::vector<double>& s)
{
    std::vector<std::vector<double>> imgs;
    if (g.family == Family::E8)
        imgs.push_back(s);
    else
        imgs = weyl_images(g.family, g.rank, s).images;
    if (pi_periodic(g.family))
        for (auto& v : imgs)
            for (auto& x : v) x = reduce_pi(x);
    return imgs;
}

std::vector<double> canonical_vacuum(const GaugeTheorySpec& g, const std::vector<double>& s)
{
    auto imgs = symmetry_images(g, s);
    return *std::min_element(imgs.begin(), imgs.end());
}

double circle_distance(double d, bool periodic)
{
    if (!periodic) return std::abs(d);
    return std::abs(d - kPi * std::round(d / kPi));
}

bool degenerate_vacuum(const GaugeTheorySpec& g, const std::vector<double>& s, double tol)
{
    const bool bcd = g.family == Family::B || g.family == Family::C || g.family == Family::D;
    if (g.family != Family::A && !bcd) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (bcd && circle_distance(2.0 * s[i], true) < tol) return true;
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (circle_distance(s[i] - s[j], true) < tol) return true;
            if (bcd && circle_distance(s[i] + s[j], true) < tol) return true;
        }
    }
    return false;
}

}  // namespace

double vacuum_distance(const GaugeTheorySpec& gauge, const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    const bool per = pi_periodic(gauge.family);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& img : symmetry_images(gauge, b)) {
        double worst = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, circle_distance(a[k] - img[k], per));
        best = std::min(best, worst);
    }
    return best;
}

VacuumSolveResult solve_vacuum(const GaugeTheorySpec& gauge, Branch branch, const SolveConfig& cfg)
{
    gauge.validate();
    cfg.validate();
    VacuumSolveResult res;
    const int n = gauge.rank;
    const double target = sign(branch);

    std::vector<ProductForm> forms;
    for (int j = 0; j < n; ++j) forms.push_back(vacuum_form(gauge, j));

    const bool empty = std::all_of(forms.begin(), forms.end(), [](const ProductForm& f) { return f.factors().empty(); });
    if (empty) {
        res.underdetermined = true;
        double r = 0.0;
        for (const auto& f : forms) r = std::max(r, std::abs(f.constant() - target));
        if (r <= cfg.tol)
            res.solutions.push_back({std::vector<double>(n, 0.0), r});
        else
            res.diagnostics.push_back("equations are constant and differ from the branch");
        res.diagnostics.push_back("underdetermined: every sigma solves the equations");
        return res;
    }

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> us(0.0, kPi);
    std::vector<std::vector<cplx>> starts;
    for (int s = 0; s < cfg.n_starts; ++s) {
        std::vector<cplx> x(n);
        int tries = 0;
        do {
            for (auto& z : x) z = us(rng);
        } while (min_distance(forms, x) < kPoleMargin && ++tries < kMaxResample);
        starts.push_back(std::move(x));
    }

    std::vector<std::optional<std::vector<cplx>>> found(starts.size());
    const NewtonProblem pb{forms, true, std::numeric_limits<double>::infinity(), false};
    parallel_for(starts.size(), [&](std::size_t s) { found[s] = newton(pb, starts[s], cfg); });

    for (auto& f : found) {
        if (!f) continue;
        ++res.converged_starts;
        std::vector<double> sigma(n);
        for (int k = 0; k < n; ++k) sigma[k] = (*f)[k].real();
        double r = 0.0;
        for (int j = 0; j < n; ++j) r = std::max(r, vacuum_lhs(gauge, sigma, j, branch, 0.0).residual);
        if (!(r <= cfg.tol)) {
            ++res.other_branch_starts;
            continue;
        }
        if (degenerate_vacuum(gauge, sigma, cfg.dedup_tol)) {
            ++res.degenerate_starts;
            continue;
        }
        sigma = canonical_vacuum(gauge, sigma);
        const bool dup = std::any_of(res.solutions.begin(), res.solutions.end(), [&](const VacuumSolution& s) {
            return vacuum_distance(gauge, s.sigma, sigma) < cfg.dedup_tol;
        });
        if (!dup) res.solutions.push_back({std::move(sigma), r});
    }
    if (res.solutions.empty())
        res.diagnostics.push_back("no solution on this branch among " + std::to_string(cfg.n_starts) + " starts (" +
                                  std::to_string(res.converged_starts) + " converged, " +
                                  std::to_string(res.other_branch_starts) + " on the other branch, " +
                                  std::to_string(res.degenerate_starts) + " degenerate)");
    return res;
}

CrossCheckReport cross_check(const GaugeTheorySpec& gauge, const DictionaryPreset& preset, const SolveConfig& cfg,
                             double tol)
{
    const auto map = map_gauge_to_chain(preset, gauge);
    const auto sol = solve_bethe(map.chain, cfg);
    const bool two_d = preset.regime == Regime::TwoD;

    CrossCheckReport out;
    auto& rep = out.report;
    rep.preset = preset.id;
    rep.family = gauge.family;
    rep.rank = gauge.rank;
    rep.nf = gauge.nf();
    rep.samples = static_cast<int>(sol.solutions.size());
    rep.seed = cfg.seed;
    rep.tol = tol;
    rep.branch_used = preset.branch;
    rep.notes = sol.diagnostics;
    out.bethe_solutions = rep.samples;

    std::vector<ProductForm> forms;
    for (int j = 0; j < gauge.rank; ++j) forms.push_back(vacuum_form(gauge, j, two_d));
    const cplx target = sign(preset.branch);
    for (std::size_t s = 0; s < sol.solutions.size(); ++s) {
        std::vector<cplx> sigma;
        for (cplx u : sol.solutions[s].roots) sigma.push_back(map.scale * u);
        double r = 0.0;
        int worst_j = 0;
        for (int j = 0; j < gauge.rank; ++j) {
            double d = std::numeric_limits<double>::infinity();
            try {
                d = std::abs(forms[j].value(sigma, 0.0) - target);
            } catch (const SingularPoint&) {
            }
            if (!(d <= r)) {
                r = d;
                worst_j = j;
            }
        }
        out.residuals.push_back(r);
        if (rep.worst.sample < 0 || r > rep.max_residual) {
            rep.max_residual = r;
            std::vector<double> re;
            for (cplx z : sigma) re.push_back(z.real());
            rep.worst = {static_cast<int>(s), worst_j, re, gauge.masses, gauge.anti_masses, gauge.m_adj};
        }
    }
    if (sol.solutions.empty()) rep.notes.push_back("no Bethe solutions to transport");
    rep.pass = !sol.solutions.empty() && rep.max_residual <= tol;
    return out;
}

}  // namespace bgl
