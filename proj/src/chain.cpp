#include "bgl/chain.hpp"

#include "bgl/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <limits>

namespace bgl {

ChainKind parse_chain_kind(std::string_view s)
{
    if (s == "closed-xxz") return ChainKind::ClosedXXZ;
    if (s == "open-xxz") return ChainKind::OpenXXZ;
    if (s == "closed-xxx") return ChainKind::ClosedXXX;
    if (s == "open-xxx") return ChainKind::OpenXXX;
    throw Rejected("unknown chain kind '" + std::string(s) + "'");
}

std::string to_string(ChainKind k)
{
    switch (k) {
    case ChainKind::ClosedXXZ: return "closed-xxz";
    case ChainKind::OpenXXZ: return "open-xxz";
    case ChainKind::ClosedXXX: return "closed-xxx";
    case ChainKind::OpenXXX: return "open-xxx";
    }
    return "?";
}

void ChainSpec::validate() const
{
    if (L < 1) throw Rejected("chain needs at least one site");
    if (M < 0) throw Rejected("magnon number must be non-negative");
    if (static_cast<int>(spins.size()) != L || static_cast<int>(thetas.size()) != L)
        throw Rejected("spins and inhomogeneities must have length L = " + std::to_string(L));
    if (!std::isfinite(eta)) throw Rejected("eta must be finite");
    if (is_xxz() && std::abs(std::sin(kPi * eta)) < 1e-12)
        throw Rejected("XXZ crossing parameter eta must not be an integer");
    if (!is_xxz() && eta == 0.0) throw Rejected("XXX crossing parameter must be nonzero");
}

ProductForm bethe_form(const ChainSpec& chain, int i)
{
    chain.validate();
    if (i < 0 || i >= chain.M) throw Rejected("Bethe equation index out of range");
    const double eta = chain.eta;
    ProductForm f(chain.is_xxz() ? ProductForm::Kind::Sine : ProductForm::Kind::Linear,
                  chain.is_xxz() ? kPi : 1.0);

    if (!chain.is_open()) {
        for (int a = 0; a < chain.L; ++a) {
            const double s = chain.spins[a], th = chain.thetas[a];
            f.add(eta / 2 + eta * s - th, {{i, 1.0}}, 1, "site");
            f.add(eta / 2 - eta * s - th, {{i, 1.0}}, -1, "site");
        }
        for (int j = 0; j < chain.M; ++j) {
            if (j == i) continue;
            f.add(-eta, {{i, 1.0}, {j, -1.0}}, 1, "magnon");
            f.add(eta, {{i, 1.0}, {j, -1.0}}, -1, "magnon");
        }
        return f;
    }

    for (cplx xi : {chain.xi_plus, chain.xi_minus}) {
        f.add(xi - eta / 2, {{i, 1.0}}, 1, "boundary");
        f.add(eta / 2 - xi, {{i, 1.0}}, -1, "boundary");
    }
    for (int a = 0; a < chain.L; ++a) {
        const double s = chain.spins[a], th = chain.thetas[a];
        f.add(eta / 2 + eta * s - th, {{i, 1.0}}, 1, "site");
        f.add(eta / 2 - eta * s - th, {{i, -1.0}}, 1, "site");
        f.add(eta / 2 + eta * s - th, {{i, -1.0}}, -1, "site");
        f.add(eta / 2 - eta * s - th, {{i, 1.0}}, -1, "site");
    }
    for (int j = 0; j < chain.M; ++j) {
        if (j == i) continue;
        for (double sj : {-1.0, 1.0}) {
            f.add(-eta, {{i, 1.0}, {j, sj}}, 1, "magnon");
            f.add(eta, {{i, 1.0}, {j, sj}}, -1, "magnon");
        }
    }
    return f;
}

EquationValue bethe_lhs(const ChainSpec& chain, std::span<const cplx> roots, int i, double guard)
{
    if (static_cast<int>(roots.size()) != chain.M)
        throw Rejected("expected " + std::to_string(chain.M) + " Bethe roots, got " +
                       std::to_string(roots.size()));
    const cplx v = bethe_form(chain, i).value(roots, guard);
    return {v, 1, std::abs(v - 1.0)};
}

Eigen::Matrix4cd r_matrix(cplx u, const BracketContext& ctx)
{
    const cplx a = ctx(u + ctx.eta()), b = ctx(u), c = ctx(ctx.eta());
    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    r(0, 0) = a;
    r(1, 1) = b;
    r(1, 2) = c;
    r(2, 1) = c;
    r(2, 2) = b;
    r(3, 3) = a;
    return r;
}

Eigen::Matrix2cd k_matrix(cplx u, cplx xi, const BracketContext& ctx)
{
    Eigen::Matrix2cd k = Eigen::Matrix2cd::Zero();
    k(0, 0) = ctx(u + xi);
    k(1, 1) = -ctx(u - xi);
    return k;
}

void require_oracle_chain(const ChainSpec& chain)
{
    chain.validate();
    if (!chain.is_xxz()) throw Rejected("transfer-matrix oracle is built for XXZ chains");
    if (chain.L > 8) throw Rejected("transfer-matrix oracle supports L <= 8");
    for (double s : chain.spins)
        if (s != 0.5) throw Rejected("oracle supports spin-1/2 only");
}

namespace {

// T <- R_{0a}(u) T, with site a stored at bit L-1-a of the basis index
void apply_r(Mat& t, const Eigen::Matrix4cd& r, int site, int L)
{
    const Eigen::Index dim = Eigen::Index(1) << L;
    const Eigen::Index bit = Eigen::Index(1) << (L - 1 - site);
    for (Eigen::Index st = 0; st < dim; ++st) {
        if (st & bit) continue;
        const Eigen::Index rows[4] = {st, st | bit, dim + st, dim + (st | bit)};
        for (Eigen::Index col = 0; col < t.cols(); ++col) {
            Eigen::Vector4cd old;
            for (int k = 0; k < 4; ++k) old(k) = t(rows[k], col);
            const Eigen::Vector4cd nw = r * old;
            for (int k = 0; k < 4; ++k) t(rows[k], col) = nw(k);
        }
    }
}

Mat aux_kron(const Eigen::Matrix2cd& k, Eigen::Index dim)
{
    Mat out = Mat::Zero(2 * dim, 2 * dim);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            if (k(a, b) != cplx(0.0)) out.block(a * dim, b * dim, dim, dim).diagonal().setConstant(k(a, b));
    return out;
}

Mat aux_transpose(const Mat& m, Eigen::Index dim)
{
    Mat out(2 * dim, 2 * dim);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out.block(a * dim, b * dim, dim, dim) = m.block(b * dim, a * dim, dim, dim);
    return out;
}

Eigen::Matrix2cd sigma_y()
{
    Eigen::Matrix2cd s;
    s << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return s;
}

}  // namespace

Mat monodromy(const ChainSpec& chain, cplx u)
{
    require_oracle_chain(chain);
    const BracketContext ctx(chain.eta);
    const Eigen::Index dim = Eigen::Index(1) << chain.L;
    Mat t = Mat::Identity(2 * dim, 2 * dim);
    for (int a = 0; a < chain.L; ++a) apply_r(t, r_matrix(u - chain.thetas[a], ctx), a, chain.L);
    return t;
}

Blocks split_auxiliary(const Mat& m, int L)
{
    const Eigen::Index dim = Eigen::Index(1) << L;
    return {m.block(0, 0, dim, dim), m.block(0, dim, dim, dim), m.block(dim, 0, dim, dim),
            m.block(dim, dim, dim, dim)};
}

Mat double_row_monodromy(const ChainSpec& chain, cplx u)
{
    const BracketContext ctx(chain.eta);
    const Eigen::Index dim = Eigen::Index(1) << chain.L;
    const Mat sy = aux_kron(sigma_y(), dim);
    const Mat km = aux_kron(k_matrix(u - chain.eta / 2, chain.xi_minus, ctx), dim);
    return monodromy(chain, u) * km * sy * aux_transpose(monodromy(chain, -u), dim) * sy;
}

DoubleRow double_row_blocks(const ChainSpec& chain, cplx u)
{
    const BracketContext ctx(chain.eta);
    auto b = split_auxiliary(double_row_monodromy(chain, u), chain.L);
    Mat dt = ctx(2.0 * u) * b.D - ctx(chain.eta) * b.A;
    return {std::move(b.A), std::move(b.B), std::move(b.C), std::move(b.D), std::move(dt)};
}

Mat transfer_matrix(const ChainSpec& chain, cplx u)
{
    if (!chain.is_open()) {
        const auto b = split_auxiliary(monodromy(chain, u), chain.L);
        return b.A + b.D;
    }
    const BracketContext ctx(chain.eta);
    const auto k = k_matrix(u + chain.eta / 2, chain.xi_plus, ctx);
    const auto b = split_auxiliary(double_row_monodromy(chain, u), chain.L);
    return k(0, 0) * b.A + k(1, 1) * b.D;
}

BetheVector bethe_vector(const ChainSpec& chain, std::span<const cplx> roots)
{
    require_oracle_chain(chain);
    const Eigen::Index dim = Eigen::Index(1) << chain.L;
    Vec v = Vec::Zero(dim);
    v(0) = 1.0;
    double scale = 1.0;
    for (cplx u : roots) {
        const Mat b = chain.is_open() ? split_auxiliary(double_row_monodromy(chain, u), chain.L).B
                                      : split_auxiliary(monodromy(chain, u), chain.L).B;
        scale *= std::max(b.cwiseAbs().maxCoeff() * static_cast<double>(dim), 1e-300);
        v = b * v;
    }
    const double n = v.norm();
    return {v, !(n > 1e-12 * scale)};
}

double yang_baxter_residual(cplx u, cplx v, const BracketContext& ctx)
{
    using M8 = Eigen::Matrix<cplx, 8, 8>;
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    auto r12 = [&](const Eigen::Matrix4cd& r) {
        M8 out = M8::Zero();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) out.block<2, 2>(2 * i, 2 * j) = r(i, j) * id;
        return out;
    };
    auto r23 = [&](const Eigen::Matrix4cd& r) {
        M8 out = M8::Zero();
        out.block<4, 4>(0, 0) = r;
        out.block<4, 4>(4, 4) = r;
        return out;
    };
    M8 p23 = M8::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) p23(4 * a + 2 * b + c, 4 * a + 2 * c + b) = 1.0;

    const M8 a12 = r12(r_matrix(u - v, ctx));
    const M8 a13 = p23 * r12(r_matrix(u, ctx)) * p23;
    const M8 a23 = r23(r_matrix(v, ctx));
    return (a12 * a13 * a23 - a23 * a13 * a12).cwiseAbs().maxCoeff();
}

double reflection_residual(cplx u, cplx v, cplx xi, const BracketContext& ctx)
{
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix4cd k1 = Eigen::kroneckerProduct(k_matrix(u, xi, ctx), id);
    const Eigen::Matrix4cd k2 = Eigen::kroneckerProduct(id, k_matrix(v, xi, ctx));
    Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
    p(0, 0) = p(1, 2) = p(2, 1) = p(3, 3) = 1.0;
    const auto rm = r_matrix(u - v, ctx), rp = r_matrix(u + v, ctx);
    const Eigen::Matrix4cd lhs = rm * k1 * (p * rp * p) * k2;
    const Eigen::Matrix4cd rhs = k2 * rp * k1 * (p * rm * p);
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

double rtt_residual(const ChainSpec& chain, cplx u, cplx v)
{
    const BracketContext ctx(chain.eta);
    const Eigen::Index dim = Eigen::Index(1) << chain.L;
    const Mat tu = monodromy(chain, u), tv = monodromy(chain, v);
    const Eigen::Index n = 4 * dim;
    // basis index (a, b, s) = (2 a + b) dim + s with a the first auxiliary space, b the second
    Mat t1 = Mat::Zero(n, n), t2 = Mat::Zero(n, n), r = Mat::Zero(n, n);
    for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
            for (int b = 0; b < 2; ++b) {
                t1.block((2 * a + b) * dim, (2 * ap + b) * dim, dim, dim) = tu.block(a * dim, ap * dim, dim, dim);
                t2.block((2 * b + a) * dim, (2 * b + ap) * dim, dim, dim) = tv.block(a * dim, ap * dim, dim, dim);
            }
    const auto rm = r_matrix(u - v, ctx);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (rm(i, j) != cplx(0.0)) r.block(i * dim, j * dim, dim, dim).diagonal().setConstant(rm(i, j));
    return (r * t1 * t2 - t2 * t1 * r).cwiseAbs().maxCoeff();
}

double commutator_residual(const ChainSpec& chain, cplx u, cplx v)
{
    const Mat a = transfer_matrix(chain, u), b = transfer_matrix(chain, v);
    return (a * b - b * a).cwiseAbs().maxCoeff();
}

double collinearity_residual(const Mat& t, const Vec& v)
{
    const double n2 = v.squaredNorm();
    if (!(n2 > 0.0)) return std::numeric_limits<double>::infinity();
    const Vec tv = t * v;
    const cplx lambda = v.dot(tv) / n2;
    return (tv - lambda * v).norm() / std::sqrt(n2);
}

OracleReport chain_oracle(const ChainSpec& chain, const std::vector<BetheRoots>& root_sets, cplx probe_u,
                          cplx probe_v)
{
    require_oracle_chain(chain);
    OracleReport rep;
    rep.commutator = commutator_residual(chain, probe_u, probe_v);
    const Mat tu = transfer_matrix(chain, probe_u), tv = transfer_matrix(chain, probe_v);

    const double shifts[3] = {0.0, 0.5, -0.5};
    std::vector<std::vector<double>> per_shift;
    for (double d : shifts) {
        std::vector<double> res;
        double worst = 0.0;
        for (const auto& roots : root_sets) {
            BetheRoots shifted(roots);
            for (auto& u : shifted) u += d * chain.eta;
            const auto bv = bethe_vector(chain, shifted);
            const double r = bv.is_zero ? std::numeric_limits<double>::infinity()
                                        : std::max(collinearity_residual(tu, bv.state),
                                                   collinearity_residual(tv, bv.state));
            res.push_back(r);
            worst = std::max(worst, r);
        }
        rep.shift_scan.push_back(worst);
        per_shift.push_back(std::move(res));
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < 3; ++k)
        if (rep.shift_scan[k] < rep.shift_scan[best]) best = k;
    rep.shift = shifts[best];
    rep.collinearity = per_shift[best];
    rep.max_collinearity = rep.shift_scan[best];
    return rep;
}

}  // namespace bgl
