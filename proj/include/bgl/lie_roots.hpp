#pragma once

#include <boost/rational.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bgl {

using Rational = boost::rational<long>;
using RootVector = std::vector<Rational>;

enum class Family { A, B, C, D, E6, E7, E8, F4, G2 };

Family parse_family(std::string_view name);
std::string to_string(Family f);

struct RootSystem {
    Family family;
    int rank;
    int ambient_dim;
    std::vector<RootVector> roots;
    std::vector<Rational> lengths_sq;

    std::size_t count() const { return roots.size(); }
};

RootSystem build_root_system(Family family, int rank);

Rational length_sq(const RootVector& v);
Rational inner(const RootVector& a, const RootVector& b);

// 4/|alpha|^2
Rational weight_factor(const RootVector& root);

std::vector<double> to_double(const RootVector& v);

struct WeylImages {
    std::vector<std::vector<double>> images;
    bool complete;  // false for E/F, where only permutations are produced
};

WeylImages weyl_images(Family family, int rank, std::span<const double> point);

}  // namespace bgl
