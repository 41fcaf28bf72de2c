#include "bgl/product_form.hpp"

#include "bgl/errors.hpp"

#include <cmath>
#include <sstream>

namespace bgl {

namespace {

cplx ipow(cplx g, int p)
{
    cplx r = 1.0;
    const cplx b = p < 0 ? 1.0 / g : g;
    for (int i = 0; i < std::abs(p); ++i) r *= b;
    return r;
}

}  // namespace

void ProductForm::add(cplx offset, std::vector<std::pair<int, double>> coeffs, int power,
                      const char* tag)
{
    if (power == 0) return;
    factors_.push_back({offset, std::move(coeffs), power, tag});
}

cplx ProductForm::argument(const Factor& f, std::span<const cplx> x) const
{
    cplx a = f.offset;
    for (const auto& [k, c] : f.coeffs) a += c * x[k];
    return scale_ * a;
}

double ProductForm::distance(cplx a) const
{
    if (kind_ == Kind::Linear) return std::abs(a);
    const double n = std::round(a.real() / kPi);
    return std::abs(a - n * kPi);
}

cplx ProductForm::value(std::span<const cplx> x, double guard) const
{
    cplx acc = constant_;
    for (const auto& f : factors_) {
        const cplx a = argument(f, x);
        if (distance(a) < guard) {
            std::ostringstream os;
            os << "singular " << f.tag << " factor: argument " << a.real() << (a.imag() < 0 ? "" : "+")
               << a.imag() << "i is within " << guard << " of a zero";
            throw SingularPoint(os.str());
        }
        const cplx g = kind_ == Kind::Sine ? std::sin(a) : a;
        acc *= ipow(g, f.power);
    }
    return acc;
}

std::vector<cplx> ProductForm::log_gradient(std::span<const cplx> x, std::size_t n) const
{
    std::vector<cplx> grad(n, 0.0);
    for (const auto& f : factors_) {
        const cplx a = argument(f, x);
        const cplx dlog = kind_ == Kind::Sine ? std::cos(a) / std::sin(a) : 1.0 / a;
        for (const auto& [k, c] : f.coeffs) grad[k] += static_cast<double>(f.power) * c * scale_ * dlog;
    }
    return grad;
}

double ProductForm::min_distance(std::span<const cplx> x) const
{
    double d = INFINITY;
    for (const auto& f : factors_) d = std::min(d, distance(argument(f, x)));
    return d;
}

std::vector<cplx> to_complex(std::span<const double> x)
{
    return {x.begin(), x.end()};
}

}  // namespace bgl
