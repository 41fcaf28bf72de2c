#pragma once

#include "bgl/lie_roots.hpp"
#include "bgl/product_form.hpp"
#include "bgl/specfun.hpp"

#include <span>
#include <string>
#include <vector>

namespace bgl {

enum class Realization { I, II };

Realization parse_realization(std::string_view s);
std::string to_string(Realization r);

enum class Branch { Plus = 1, Minus = -1 };

inline int sign(Branch b) { return static_cast<int>(b); }
Branch parse_branch(std::string_view s);
std::string to_string(Branch b);

struct GaugeTheorySpec {
    Family family = Family::A;
    int rank = 1;
    std::vector<double> masses;       // fundamental masses m_a
    std::vector<double> anti_masses;  // m'_a: A-type antifundamentals, realization I for B/C/D
    double m_adj = 0.0;
    double beta2 = 1.0;
    Realization realization = Realization::II;

    int nf() const { return static_cast<int>(masses.size()); }
    void validate() const;
};

// One Li2 term of beta2 * W.
//   chiral:  c [Li2(e^{-ik x}) - k^2 x^2 / 4],  x = weight.sigma + mass
//   vector: -c [Li2(e^{ik y}) - k^2 y^2 / 4],   y = weight.sigma
struct SuperpotentialTerm {
    bool vector;
    std::vector<double> weight;
    double mass;
    double coeff;
    double freq;
    const char* origin;
};

std::vector<SuperpotentialTerm> superpotential_terms(const GaugeTheorySpec& spec);

// beta2 * W
cplx superpotential_value(const GaugeTheorySpec& spec, std::span<const double> sigma, double tol = 1e-10);

// d(beta2 W)/d sigma_j
std::vector<cplx> superpotential_grad(const GaugeTheorySpec& spec, std::span<const double> sigma);

int equation_count(const GaugeTheorySpec& spec);

// exp(i d(beta2 W)/d sigma_j) as a product of integer powers of sines built from the term list.
ProductForm exp_gradient_form(const GaugeTheorySpec& spec, int j);

// Closed-form vacuum equation j, contract LHS = branch. two_d selects the rational forms.
ProductForm vacuum_form(const GaugeTheorySpec& spec, int j, bool two_d = false);

// Squared (full) trigonometric vacuum product for A-D, written in double-angle form.
ProductForm full_vacuum_form(const GaugeTheorySpec& spec, int j);

struct EquationValue {
    cplx lhs;
    int target;
    double residual;  // |lhs - target|
};

EquationValue vacuum_lhs(const GaugeTheorySpec& spec, std::span<const double> sigma, int j,
                         Branch branch, double guard = kSingularGuard);
EquationValue vacuum_lhs(const GaugeTheorySpec& spec, std::span<const cplx> sigma, int j,
                         Branch branch, double guard = kSingularGuard);
EquationValue vacuum_lhs_2d(const GaugeTheorySpec& spec, std::span<const double> sigma, int j,
                            Branch branch, double guard = kSingularGuard);

cplx full_vacuum_product(const GaugeTheorySpec& spec, std::span<const double> sigma, int j,
                         double guard = kSingularGuard);

struct OneLoopReport {
    std::vector<double> beta2;
    std::vector<double> rel_error;
    std::vector<int> terms;  // Pochhammer truncation per beta2
    double rate;             // fitted exponent of rel_error ~ beta2^rate
    bool monotone;
};

// Compares -2 beta2 log (z; e^{-2 beta2})_inf with Li2(z) for every term of the superpotential.
OneLoopReport one_loop_asymptotic_check(const GaugeTheorySpec& spec, std::span<const double> sigma,
                                        std::span<const double> beta2_sequence);

// Same comparison for a single dilog argument.
OneLoopReport one_loop_asymptotic_check(cplx z, std::span<const double> beta2_sequence);

}  // namespace bgl
