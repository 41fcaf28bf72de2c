#pragma once

#include "bgl/specfun.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bgl {

// Distance below which a factor argument counts as a zero.
inline constexpr double kSingularGuard = 1e-6;

// A product  constant * prod_f g(scale * arg_f)^{p_f}  with arg_f affine in the unknowns and
// g = sin (trigonometric forms) or the identity (rational forms).
class ProductForm {
public:
    enum class Kind { Sine, Linear };

    struct Factor {
        cplx offset;
        std::vector<std::pair<int, double>> coeffs;
        int power;
        const char* tag;
    };

    ProductForm(Kind kind, double scale) : kind_(kind), scale_(scale) {}

    void add(cplx offset, std::vector<std::pair<int, double>> coeffs, int power, const char* tag);
    void multiply_constant(cplx c) { constant_ *= c; }

    Kind kind() const { return kind_; }
    const std::vector<Factor>& factors() const { return factors_; }
    cplx constant() const { return constant_; }

    cplx argument(const Factor& f, std::span<const cplx> x) const;

    // Throws SingularPoint when some factor argument is within guard of a zero of g.
    cplx value(std::span<const cplx> x, double guard = kSingularGuard) const;

    // d log(value) / d x_k
    std::vector<cplx> log_gradient(std::span<const cplx> x, std::size_t n) const;

    // Smallest distance of any factor argument to a zero of g.
    double min_distance(std::span<const cplx> x) const;

private:
    double distance(cplx scaled_arg) const;

    Kind kind_;
    double scale_;
    cplx constant_{1.0};
    std::vector<Factor> factors_;
};

std::vector<cplx> to_complex(std::span<const double> x);

}  // namespace bgl
