#include "bgl/gauge.hpp"

#include "bgl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bgl {

Realization parse_realization(std::string_view s)
{
    if (s == "I" || s == "i" || s == "1") return Realization::I;
    if (s == "II" || s == "ii" || s == "2") return Realization::II;
    throw Rejected("unknown realization '" + std::string(s) + "' (expected I or II)");
}

std::string to_string(Realization r) { return r == Realization::I ? "I" : "II"; }

Branch parse_branch(std::string_view s)
{
    if (s == "+" || s == "+1" || s == "1" || s == "plus") return Branch::Plus;
    if (s == "-" || s == "-1" || s == "minus") return Branch::Minus;
    throw Rejected("unknown branch '" + std::string(s) + "' (expected + or -)");
}

std::string to_string(Branch b) { return b == Branch::Plus ? "+" : "-"; }

void GaugeTheorySpec::validate() const
{
    switch (family) {
    case Family::A:
    case Family::B:
    case Family::C:
    case Family::D:
        if (rank < 1) throw Rejected("rank must be >= 1");
        break;
    case Family::E8:
        if (rank != 8) throw Rejected("E8 requires rank 8");
        break;
    case Family::F4:
        if (rank != 4) throw Rejected("F4 requires rank 4");
        break;
    case Family::G2:
        throw Rejected("G2 is out of scope");
    default:
        throw Rejected("no superpotential for " + to_string(family) + " (only via the E8 embedding)");
    }
    if (!(beta2 > 0.0) || !std::isfinite(beta2)) throw Rejected("beta2 must be positive");
    if (!std::isfinite(m_adj)) throw Rejected("m_adj must be finite");
    for (double m : masses)
        if (!std::isfinite(m)) throw Rejected("masses must be finite");
    for (double m : anti_masses)
        if (!std::isfinite(m)) throw Rejected("masses must be finite");
    if (realization == Realization::I) {
        if (family == Family::E8 || family == Family::F4)
            throw Rejected("realization I is not available for " + to_string(family));
        if (family != Family::A && !anti_masses.empty()) {
            if (anti_masses.size() != masses.size())
                throw Rejected("realization I requires N_f = N_f'");
            for (std::size_t a = 0; a < masses.size(); ++a)
                if (masses[a] != anti_masses[a]) throw Rejected("realization I requires m = m'");
        }
    }
}

namespace {

std::vector<double> unit(int n, int j, double s)
{
    std::vector<double> v(n, 0.0);
    v[j] = s;
    return v;
}

double dot(const std::vector<double>& a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_point(const GaugeTheorySpec& spec, std::size_t n)
{
    if (static_cast<int>(n) != spec.rank)
        throw Rejected("sigma has " + std::to_string(n) + " components, rank is " +
                       std::to_string(spec.rank));
}

void check_index(const GaugeTheorySpec& spec, int j)
{
    if (j < 0 || j >= spec.rank) throw Rejected("equation index " + std::to_string(j) + " out of range");
}

int integer_power(double p)
{
    const double r = std::round(p);
    if (std::abs(p - r) > 1e-9) throw Rejected("non-integer exponent in the exponentiated gradient");
    return static_cast<int>(r);
}

}  // namespace

std::vector<SuperpotentialTerm> superpotential_terms(const GaugeTheorySpec& spec)
{
    spec.validate();
    const int n = spec.rank;
    const bool r1 = spec.realization == Realization::I;
    std::vector<SuperpotentialTerm> terms;

    const RootSystem rs = build_root_system(spec.family, spec.rank);
    for (const auto& root : rs.roots) {
        const double w = boost::rational_cast<double>(weight_factor(root));
        const auto a = to_double(root);
        const double c = r1 ? w / 2 : 1.0;
        const double k = r1 ? 2.0 : w;
        terms.push_back({true, a, 0.0, c, k, "vector"});
        terms.push_back({false, a, spec.m_adj, c, k, "adjoint"});
    }

    if (spec.family == Family::A) {
        for (double m : spec.masses)
            for (int j = 0; j < n; ++j) terms.push_back({false, unit(n, j, 1), m, 1.0, 2.0, "fundamental"});
        for (double m : spec.anti_masses)
            for (int j = 0; j < n; ++j)
                terms.push_back({false, unit(n, j, -1), m, 1.0, 2.0, "antifundamental"});
        return terms;
    }

    auto add_flavours = [&](const std::vector<double>& ms, double c, const char* origin) {
        for (double m : ms)
            for (int j = 0; j < n; ++j)
                for (double s : {1.0, -1.0}) terms.push_back({false, unit(n, j, s), m, c, 2.0, origin});
    };
    if (r1) {
        add_flavours(spec.masses, 0.5, "fundamental");
        add_flavours(spec.anti_masses.empty() ? spec.masses : spec.anti_masses, 0.5, "fundamental'");
    } else {
        add_flavours(spec.masses, 1.0, "fundamental");
    }
    return terms;
}

cplx superpotential_value(const GaugeTheorySpec& spec, std::span<const double> sigma, double tol)
{
    if (!(tol > 0.0)) throw Rejected("tolerance must be positive");
    check_point(spec, sigma.size());
    const cplx I(0.0, 1.0);
    cplx total = 0.0;
    for (const auto& t : superpotential_terms(spec)) {
        const double x = dot(t.weight, sigma) + t.mass;
        const double quad = t.freq * t.freq * x * x / 4;
        if (t.vector)
            total -= t.coeff * (dilog(std::exp(I * t.freq * x)) - quad);
        else
            total += t.coeff * (dilog(std::exp(-I * t.freq * x)) - quad);
    }
    return total;
}

std::vector<cplx> superpotential_grad(const GaugeTheorySpec& spec, std::span<const double> sigma)
{
    check_point(spec, sigma.size());
    const cplx I(0.0, 1.0);
    std::vector<cplx> g(spec.rank, 0.0);
    for (const auto& t : superpotential_terms(spec)) {
        const double x = dot(t.weight, sigma) + t.mass;
        const double half = t.freq * x / 2;
        if (std::abs(half - kPi * std::round(half / kPi)) < kSingularGuard)
            throw SingularPoint(std::string("singular ") + t.origin + " term: 1 - e^{ikx} vanishes (kx = " +
                                std::to_string(t.freq * x) + ")");
        cplx d;
        if (t.vector)
            d = t.coeff * (I * t.freq * std::log(1.0 - std::exp(I * t.freq * x)) + t.freq * t.freq * x / 2);
        else
            d = t.coeff * (I * t.freq * std::log(1.0 - std::exp(-I * t.freq * x)) - t.freq * t.freq * x / 2);
        for (int j = 0; j < spec.rank; ++j)
            if (t.weight[j] != 0.0) g[j] += t.weight[j] * d;
    }
    return g;
}

int equation_count(const GaugeTheorySpec& spec)
{
    spec.validate();
    return spec.rank;
}

ProductForm exp_gradient_form(const GaugeTheorySpec& spec, int j)
{
    check_index(spec, j);
    const cplx two_i(0.0, 2.0);
    ProductForm form(ProductForm::Kind::Sine, 1.0);
    for (const auto& t : superpotential_terms(spec)) {
        if (t.weight[j] == 0.0) continue;
        const int p = integer_power(-t.coeff * t.freq * t.weight[j]);
        if (t.vector) {
            // the +alpha and -alpha factors combine to (-1)^p
            auto first = std::find_if(t.weight.begin(), t.weight.end(), [](double v) { return v != 0.0; });
            if (*first > 0 && p % 2 != 0) form.multiply_constant(-1.0);
            continue;
        }
        std::vector<std::pair<int, double>> coeffs;
        for (int i = 0; i < spec.rank; ++i)
            if (t.weight[i] != 0.0) coeffs.emplace_back(i, t.freq / 2 * t.weight[i]);
        form.add(t.freq / 2 * t.mass, std::move(coeffs), p, t.origin);
        cplx c = 1.0;
        for (int s = 0; s < std::abs(p); ++s) c *= p > 0 ? two_i : 1.0 / two_i;
        form.multiply_constant(c);
    }
    return form;
}

namespace {

using Coeffs = std::vector<std::pair<int, double>>;

struct FormBuilder {
    ProductForm form;
    bool two_d;

    void ratio(double off_num, Coeffs num, double off_den, Coeffs den, int power, const char* tag)
    {
        form.add(off_num, std::move(num), power, tag);
        form.add(off_den, std::move(den), -power, tag);
    }

    // cos x = sin(x + pi/2); dropped in the rational forms
    void cos_ratio(double off_num, Coeffs num, double off_den, Coeffs den, int power, const char* tag)
    {
        if (two_d) return;
        ratio(off_num + kPi / 2, std::move(num), off_den + kPi / 2, std::move(den), power, tag);
    }

    // prod_{k != j} prod_s sin(s_j + s s_k - m) / sin(-s_j + s s_k - m)
    void pairs(int n, int j, double m, int power)
    {
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            for (double s : {1.0, -1.0}) ratio(-m, {{j, 1.0}, {k, s}}, -m, {{j, -1.0}, {k, s}}, power, "root pair");
        }
    }

    // prod_a sin(s_j - m_a) / sin(-s_j - m_a)
    void flavours(int j, const std::vector<double>& ms, int power)
    {
        for (double ma : ms) ratio(-ma, {{j, 1.0}}, -ma, {{j, -1.0}}, power, "flavour");
    }
};

void require_balanced_a(const GaugeTheorySpec& spec)
{
    if (spec.anti_masses.size() != spec.masses.size())
        throw Rejected("A-type vacuum equations require N_f = N_f' (got " + std::to_string(spec.masses.size()) +
                       " and " + std::to_string(spec.anti_masses.size()) + ")");
}

}  // namespace

ProductForm vacuum_form(const GaugeTheorySpec& spec, int j, bool two_d)
{
    spec.validate();
    check_index(spec, j);
    const int n = spec.rank;
    const double m = spec.m_adj;
    const bool r1 = spec.realization == Realization::I;
    FormBuilder b{ProductForm(two_d ? ProductForm::Kind::Linear : ProductForm::Kind::Sine, 1.0), two_d};

    switch (spec.family) {
    case Family::A:
        require_balanced_a(spec);
        for (std::size_t a = 0; a < spec.masses.size(); ++a)
            b.ratio(-spec.anti_masses[a], {{j, 1.0}}, spec.masses[a], {{j, 1.0}}, 1, "flavour");
        for (int k = 0; k < n; ++k)
            if (k != j) b.ratio(-m, {{j, 1.0}, {k, -1.0}}, m, {{j, 1.0}, {k, -1.0}}, 1, "root pair");
        break;
    case Family::B:
        if (r1) {
            b.ratio(-m, {{j, 1.0}}, m, {{j, 1.0}}, 2, "short root");
        } else {
            b.ratio(-m, {{j, 1.0}}, m, {{j, 1.0}}, 2, "short root");
            b.cos_ratio(-m, {{j, 1.0}}, m, {{j, 1.0}}, 2, "short root");
        }
        b.pairs(n, j, m, 1);
        b.flavours(j, spec.masses, 1);
        break;
    case Family::C:
        b.ratio(-m / 2, {{j, 1.0}}, m / 2, {{j, 1.0}}, 1, "long root");
        if (r1) b.cos_ratio(-m / 2, {{j, 1.0}}, m / 2, {{j, 1.0}}, 1, "long root");
        b.pairs(n, j, m, 1);
        b.flavours(j, spec.masses, 1);
        break;
    case Family::D:
        b.pairs(n, j, m, 1);
        b.flavours(j, spec.masses, 1);
        break;
    case Family::F4:
        if (two_d) throw Rejected("no rational vacuum equations for F4");
        b.ratio(-m, {{j, 1.0}}, m, {{j, 1.0}}, 2, "short root");
        b.pairs(n, j, m, 1);
        for (unsigned mask = 0; mask < 8; ++mask) {
            Coeffs num{{j, 1.0}}, den{{j, -1.0}};
            int bit = 0;
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                const double s = (mask >> bit++) & 1u ? -1.0 : 1.0;
                num.emplace_back(k, s);
                den.emplace_back(k, s);
            }
            b.ratio(-m, std::move(num), -m, std::move(den), 1, "half root");
        }
        b.flavours(j, spec.masses, 1);
        break;
    case Family::E8:
        if (two_d) throw Rejected("no rational vacuum equations for E8");
        return exp_gradient_form(spec, j);
    default:
        throw Rejected("no vacuum equations for " + to_string(spec.family));
    }
    return std::move(b.form);
}

ProductForm full_vacuum_form(const GaugeTheorySpec& spec, int j)
{
    spec.validate();
    check_index(spec, j);
    const int n = spec.rank;
    const double m = spec.m_adj;
    const bool r1 = spec.realization == Realization::I;
    FormBuilder b{ProductForm(ProductForm::Kind::Sine, 1.0), false};

    switch (spec.family) {
    case Family::A:
        require_balanced_a(spec);
        for (std::size_t a = 0; a < spec.masses.size(); ++a)
            b.ratio(-spec.anti_masses[a], {{j, 1.0}}, spec.masses[a], {{j, 1.0}}, 2, "flavour");
        for (int k = 0; k < n; ++k)
            if (k != j) b.ratio(-m, {{j, 1.0}, {k, -1.0}}, m, {{j, 1.0}, {k, -1.0}}, 2, "root pair");
        return std::move(b.form);
    case Family::B:
        if (r1)
            b.ratio(-m, {{j, 1.0}}, m, {{j, 1.0}}, 4, "short root");
        else
            b.ratio(-2 * m, {{j, 2.0}}, 2 * m, {{j, 2.0}}, 4, "short root");
        break;
    case Family::C:
        if (r1)
            b.ratio(-m, {{j, 2.0}}, m, {{j, 2.0}}, 2, "long root");
        else
            b.ratio(-m / 2, {{j, 1.0}}, m / 2, {{j, 1.0}}, 2, "long root");
        break;
    case Family::D:
        break;
    default:
        throw Rejected("full trigonometric vacuum product is tabulated for A-D only");
    }
    b.pairs(n, j, m, 2);
    b.flavours(j, spec.masses, 2);
    return std::move(b.form);
}

EquationValue vacuum_lhs(const GaugeTheorySpec& spec, std::span<const cplx> sigma, int j, Branch branch,
                         double guard)
{
    check_point(spec, sigma.size());
    const cplx v = vacuum_form(spec, j, false).value(sigma, guard);
    return {v, sign(branch), std::abs(v - static_cast<double>(sign(branch)))};
}

EquationValue vacuum_lhs(const GaugeTheorySpec& spec, std::span<const double> sigma, int j, Branch branch,
                         double guard)
{
    return vacuum_lhs(spec, std::span<const cplx>(to_complex(sigma)), j, branch, guard);
}

EquationValue vacuum_lhs_2d(const GaugeTheorySpec& spec, std::span<const double> sigma, int j, Branch branch,
                            double guard)
{
    check_point(spec, sigma.size());
    const auto x = to_complex(sigma);
    const cplx v = vacuum_form(spec, j, true).value(x, guard);
    return {v, sign(branch), std::abs(v - static_cast<double>(sign(branch)))};
}

cplx full_vacuum_product(const GaugeTheorySpec& spec, std::span<const double> sigma, int j, double guard)
{
    check_point(spec, sigma.size());
    const auto x = to_complex(sigma);
    return full_vacuum_form(spec, j).value(x, guard);
}

namespace {

struct Li2Term {
    cplx z;
    double coeff;
};

OneLoopReport compare_one_loop(const std::vector<Li2Term>& terms, std::span<const double> betas)
{
    OneLoopReport rep{{}, {}, {}, 0.0, true};
    cplx exact = 0.0;
    for (const auto& t : terms) exact += t.coeff * dilog(t.z);

    for (double beta : betas) {
        if (!(beta > 0.0)) throw Rejected("beta2 values must be positive");
        const cplx q = std::exp(-2.0 * beta);
        cplx approx = 0.0;
        int kmax = 0;
        for (const auto& t : terms) {
            if (t.z == cplx(0.0)) continue;
            const int K = qpoch_terms(t.z, q, 1e-15);
            kmax = std::max(kmax, K);
            approx += t.coeff * (-2.0 * beta * qpoch_log(t.z, q, K));
        }
        const double diff = std::abs(approx - exact);
        rep.beta2.push_back(beta);
        rep.terms.push_back(kmax);
        rep.rel_error.push_back(std::abs(exact) > 0.0 ? diff / std::abs(exact) : diff);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < rep.beta2.size(); ++i) {
        if (rep.rel_error[i] <= 0.0) continue;
        const double x = std::log(rep.beta2[i]), y = std::log(rep.rel_error[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y, ++cnt;
    }
    if (cnt >= 2 && cnt * sxx - sx * sx != 0.0) rep.rate = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    for (std::size_t i = 1; i < rep.beta2.size(); ++i) {
        const bool refining = rep.beta2[i] < rep.beta2[i - 1];
        if (refining && !(rep.rel_error[i] < rep.rel_error[i - 1]) && rep.rel_error[i - 1] > 0.0)
            rep.monotone = false;
    }
    return rep;
}

}  // namespace

OneLoopReport one_loop_asymptotic_check(const GaugeTheorySpec& spec, std::span<const double> sigma,
                                        std::span<const double> beta2_sequence)
{
    check_point(spec, sigma.size());
    const cplx I(0.0, 1.0);
    std::vector<Li2Term> terms;
    for (const auto& t : superpotential_terms(spec)) {
        const double x = dot(t.weight, sigma) + t.mass;
        const cplx z = t.vector ? std::exp(I * t.freq * x) : std::exp(-I * t.freq * x);
        if (std::abs(1.0 - z) < kSingularGuard)
            throw SingularPoint(std::string("inadmissible ") + t.origin + " term: argument at 1");
        terms.push_back({z, t.vector ? -t.coeff : t.coeff});
    }
    return compare_one_loop(terms, beta2_sequence);
}

OneLoopReport one_loop_asymptotic_check(cplx z, std::span<const double> beta2_sequence)
{
    if (std::abs(z) >= 1.0 && std::abs(1.0 - z) < kSingularGuard)
        throw SingularPoint("inadmissible argument at 1");
    if (std::abs(z) > 1.0) throw Rejected("Pochhammer comparison requires |z| <= 1");
    return compare_one_loop({{z, 1.0}}, beta2_sequence);
}

}  // namespace bgl
