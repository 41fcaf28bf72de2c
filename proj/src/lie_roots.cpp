#include "bgl/lie_roots.hpp"

#include "bgl/errors.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>

namespace bgl {

Family parse_family(std::string_view name)
{
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (s == "A") return Family::A;
    if (s == "B") return Family::B;
    if (s == "C") return Family::C;
    if (s == "D") return Family::D;
    if (s == "E6") return Family::E6;
    if (s == "E7") return Family::E7;
    if (s == "E8") return Family::E8;
    if (s == "F4") return Family::F4;
    if (s == "G2") return Family::G2;
    throw Rejected("unknown Lie family '" + std::string(name) + "'");
}

std::string to_string(Family f)
{
    switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::E6: return "E6";
    case Family::E7: return "E7";
    case Family::E8: return "E8";
    case Family::F4: return "F4";
    case Family::G2: return "G2";
    }
    return "?";
}

Rational inner(const RootVector& a, const RootVector& b)
{
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rational length_sq(const RootVector& v) { return inner(v, v); }

Rational weight_factor(const RootVector& root)
{
    const Rational l2 = length_sq(root);
    if (l2.numerator() == 0) throw Rejected("weight factor of the zero vector");
    return Rational(4) / l2;
}

std::vector<double> to_double(const RootVector& v)
{
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& r : v) out.push_back(boost::rational_cast<double>(r));
    return out;
}

namespace {

RootVector unit(int dim, int i, long scale = 1)
{
    RootVector v(dim, Rational(0));
    v[i] = Rational(scale);
    return v;
}

// +-e_i +- e_j for i<j
void add_long_pairs(std::vector<RootVector>& out, int dim, int upto)
{
    for (int i = 0; i < upto; ++i)
        for (int j = i + 1; j < upto; ++j)
            for (int si : {1, -1})
                for (int sj : {1, -1}) {
                    RootVector v(dim, Rational(0));
                    v[i] = Rational(si);
                    v[j] = Rational(sj);
                    out.push_back(std::move(v));
                }
}

// 1/2 (+-1, ..., +-1), optionally only with an even number of minus signs
void add_half_roots(std::vector<RootVector>& out, int dim, bool even_only)
{
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
        if (even_only && (std::popcount(mask) % 2) != 0) continue;
        RootVector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = Rational((mask >> i) & 1u ? -1 : 1, 2);
        out.push_back(std::move(v));
    }
}

std::vector<RootVector> e8_roots()
{
    std::vector<RootVector> r;
    add_long_pairs(r, 8, 8);
    add_half_roots(r, 8, true);
    return r;
}

std::vector<RootVector> orthogonal_subset(const std::vector<RootVector>& roots,
                                          const std::vector<RootVector>& normals)
{
    std::vector<RootVector> out;
    for (const auto& a : roots) {
        bool keep = std::all_of(normals.begin(), normals.end(),
                                [&](const RootVector& n) { return inner(a, n).numerator() == 0; });
        if (keep) out.push_back(a);
    }
    return out;
}

RootVector vec8(std::initializer_list<long> xs)
{
    RootVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace

RootSystem build_root_system(Family family, int rank)
{
    RootSystem rs{family, rank, rank, {}, {}};
    auto need_rank = [&](int r) {
        if (rank != r)
            throw Rejected(to_string(family) + " requires rank " + std::to_string(r) + ", got " +
                           std::to_string(rank));
    };

    switch (family) {
    case Family::G2:
        throw Rejected("G2 is out of scope");
    case Family::A:
    case Family::B:
    case Family::C:
    case Family::D:
        if (rank < 1) throw Rejected("rank must be >= 1, got " + std::to_string(rank));
        break;
    default:
        break;
    }

    auto& r = rs.roots;
    switch (family) {
    case Family::A:
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) {
                if (i == j) continue;
                RootVector v(rank, Rational(0));
                v[i] = 1;
                v[j] = -1;
                r.push_back(std::move(v));
            }
        break;
    case Family::B:
        add_long_pairs(r, rank, rank);
        for (int i = 0; i < rank; ++i) {
            r.push_back(unit(rank, i, 1));
            r.push_back(unit(rank, i, -1));
        }
        break;
    case Family::C:
        add_long_pairs(r, rank, rank);
        for (int i = 0; i < rank; ++i) {
            r.push_back(unit(rank, i, 2));
            r.push_back(unit(rank, i, -2));
        }
        break;
    case Family::D:
        add_long_pairs(r, rank, rank);
        break;
    case Family::E8:
        need_rank(8);
        r = e8_roots();
        break;
    case Family::E7:
        need_rank(7);
        rs.ambient_dim = 8;
        r = orthogonal_subset(e8_roots(), {vec8({0, 0, 0, 0, 0, 0, 1, 1})});
        break;
    case Family::E6:
        need_rank(6);
        rs.ambient_dim = 8;
        r = orthogonal_subset(e8_roots(),
                              {vec8({0, 0, 0, 0, 0, 1, -1, 0}), vec8({0, 0, 0, 0, 0, 0, 1, 1})});
        break;
    case Family::F4:
        need_rank(4);
        for (int i = 0; i < 4; ++i) {
            r.push_back(unit(4, i, 1));
            r.push_back(unit(4, i, -1));
        }
        add_long_pairs(r, 4, 4);
        add_half_roots(r, 4, false);
        break;
    case Family::G2:
        break;
    }

    rs.lengths_sq.reserve(r.size());
    for (const auto& a : r) rs.lengths_sq.push_back(length_sq(a));
    return rs;
}

WeylImages weyl_images(Family family, int rank, std::span<const double> point)
{
    if (static_cast<int>(point.size()) != rank)
        throw Rejected("point has dimension " + std::to_string(point.size()) + ", expected " +
                       std::to_string(rank));

    std::vector<int> perm(rank);
    std::iota(perm.begin(), perm.end(), 0);

    const bool signs = family == Family::B || family == Family::C || family == Family::D;
    const bool even_signs = family == Family::D;

    WeylImages out{{}, family == Family::A || signs};
    do {
        std::vector<double> base(rank);
        for (int i = 0; i < rank; ++i) base[i] = point[perm[i]];
        const unsigned nmask = signs ? (1u << rank) : 1u;
        for (unsigned mask = 0; mask < nmask; ++mask) {
            if (even_signs && std::popcount(mask) % 2 != 0) continue;
            auto img = base;
            for (int i = 0; i < rank; ++i)
                if ((mask >> i) & 1u) img[i] = -img[i];
            out.images.push_back(std::move(img));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace bgl
