#include "bgl/specfun.hpp"

#include "bgl/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace bgl {

namespace {

constexpr double kZeta2 = kPi * kPi / 6.0;

// B_{2k} / (2k+1)! for k = 1..
constexpr std::array<double, 20> kBernoulliOverFact = {
    2.7777777777777776236e-02, -2.7777777777777777754e-04, 4.7241118669690097817e-06,
    -9.1857730746619640821e-08, 1.8978869988971000546e-09, -4.0647616451442256036e-11,
    8.9216910204564523048e-13, -1.9939295860721074434e-14, 4.5189800296199182507e-16,
    -1.0356517612181247177e-17, 2.3952186210261869825e-19, -5.5817858743250089824e-21,
    1.3091507554183212505e-22, -3.0874198024267402857e-24, 7.3159756527022029255e-26,
    -1.7408456572340008765e-27, 4.1576356446138998800e-29, -9.9621484882846216844e-31,
    2.3940344248961652190e-32, -5.7683473553673896958e-34,
};

// |z| <= 1, Re z <= 1/2
cplx dilog_core(cplx z)
{
    const cplx w = -std::log(1.0 - z);
    const cplx w2 = w * w;
    cplx sum = w - 0.25 * w2;
    cplx p = w;
    for (double c : kBernoulliOverFact) {
        p *= w2;
        const cplx term = c * p;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

cplx dilog_unit_disk(cplx z)
{
    if (z.real() <= 0.5) return dilog_core(z);
    // reflection
    return kZeta2 - std::log(z) * std::log(1.0 - z) - dilog_core(1.0 - z);
}

}  // namespace

cplx dilog(cplx z)
{
    if (z == cplx(0.0)) return 0.0;
    if (z == cplx(1.0)) return kZeta2;
    if (z.imag() == 0.0 && z.real() > 1.0)
        throw Rejected("dilog argument " + std::to_string(z.real()) +
                       " lies on the branch cut [1, inf)");
    if (std::abs(z) <= 1.0) return dilog_unit_disk(z);
    // inversion
    const cplx l = std::log(-z);
    return -kZeta2 - 0.5 * l * l - dilog_unit_disk(1.0 / z);
}

GradCheck dilog_grad_check(cplx x, double h)
{
    if (!(h >= 1e-7 && h <= 1e-3)) throw Rejected("finite-difference step must lie in [1e-7, 1e-3]");
    const cplx ex = std::exp(x);
    if (std::abs(1.0 - ex) < 1e-12) throw SingularPoint("1 - e^x vanishes at the requested point");
    const cplx analytic = -std::log(1.0 - ex);
    const cplx fd = (dilog(std::exp(x + h)) - dilog(std::exp(x - h))) / (2.0 * h);
    return {analytic, fd};
}

BracketContext::BracketContext(double eta) : eta_(eta), sin_pi_eta_(std::sin(kPi * eta))
{
    if (std::abs(sin_pi_eta_) < 1e-12)
        throw Rejected("crossing parameter eta = " + std::to_string(eta) + " is an integer");
}

QPoch qpoch(cplx z, cplx q, int K)
{
    if (std::abs(q) >= 1.0) throw Rejected("qpoch requires |q| < 1");
    if (K < 1) throw Rejected("qpoch requires K >= 1");
    cplx prod = 1.0;
    cplx qk = 1.0;
    for (int k = 0; k < K; ++k) {
        prod *= 1.0 - z * qk;
        qk *= q;
    }
    const double aq = std::abs(q);
    return {prod, std::abs(z) * std::pow(aq, K) / (1.0 - aq)};
}

cplx qpoch_log(cplx z, cplx q, int K)
{
    if (std::abs(q) >= 1.0) throw Rejected("qpoch requires |q| < 1");
    if (K < 1) throw Rejected("qpoch requires K >= 1");
    cplx sum = 0.0;
    cplx qk = 1.0;
    for (int k = 0; k < K; ++k) {
        const cplx f = 1.0 - z * qk;
        if (f == cplx(0.0)) throw SingularPoint("qpoch factor vanishes at k = " + std::to_string(k));
        sum += std::log(f);
        qk *= q;
    }
    return sum;
}

int qpoch_terms(cplx z, cplx q, double tol)
{
    const double aq = std::abs(q);
    if (aq >= 1.0) throw Rejected("qpoch requires |q| < 1");
    const double az = std::abs(z);
    if (az == 0.0 || aq == 0.0) return 1;
    const double k = std::log(tol * (1.0 - aq) / az) / std::log(aq);
    return std::max(1, static_cast<int>(std::ceil(k)));
}

}  // namespace bgl
