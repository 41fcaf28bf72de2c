#pragma once

#include <complex>

namespace bgl {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Li2 on the principal branch. Real z > 1 lies on the cut and is rejected.
cplx dilog(cplx z);

struct GradCheck {
    cplx analytic;           // -log(1 - e^x)
    cplx finite_difference;  // central difference of Li2(e^x)
};

GradCheck dilog_grad_check(cplx x, double h);

class BracketContext {
public:
    explicit BracketContext(double eta);

    double eta() const { return eta_; }
    cplx operator()(cplx x) const { return std::sin(kPi * x) / sin_pi_eta_; }

private:
    double eta_;
    double sin_pi_eta_;
};

// [x] = sin(pi x)/sin(pi eta)
inline cplx bracket(cplx x, const BracketContext& ctx) { return ctx(x); }

struct QPoch {
    cplx value;
    double truncation_bound;  // |z| |q|^K / (1 - |q|)
};

// prod_{k=0}^{K-1} (1 - z q^k)
QPoch qpoch(cplx z, cplx q, int K);

// sum_{k<K} log(1 - z q^k) with principal logs; a logarithm of qpoch(z, q, K)
cplx qpoch_log(cplx z, cplx q, int K);

// Smallest K with truncation bound below tol.
int qpoch_terms(cplx z, cplx q, double tol);

}  // namespace bgl
