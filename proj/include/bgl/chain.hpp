#pragma once

#include "bgl/gauge.hpp"
#include "bgl/product_form.hpp"
#include "bgl/specfun.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace bgl {

enum class ChainKind { ClosedXXZ, OpenXXZ, ClosedXXX, OpenXXX };

ChainKind parse_chain_kind(std::string_view s);
std::string to_string(ChainKind k);

struct ChainSpec {
    ChainKind kind = ChainKind::ClosedXXZ;
    int L = 1;
    int M = 0;
    double eta = 0.5;
    std::vector<double> spins;   // s_a
    std::vector<double> thetas;  // inhomogeneities
    cplx xi_plus{0.0};
    cplx xi_minus{0.0};

    bool is_open() const { return kind == ChainKind::OpenXXZ || kind == ChainKind::OpenXXX; }
    bool is_xxz() const { return kind == ChainKind::ClosedXXZ || kind == ChainKind::OpenXXZ; }
    void validate() const;
};

using BetheRoots = std::vector<cplx>;

// Bethe equation i as one product whose contract value is 1.
ProductForm bethe_form(const ChainSpec& chain, int i);

EquationValue bethe_lhs(const ChainSpec& chain, std::span<const cplx> roots, int i,
                        double guard = kSingularGuard);

// ---- transfer-matrix oracle (spin 1/2) ----

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

Eigen::Matrix4cd r_matrix(cplx u, const BracketContext& ctx);
Eigen::Matrix2cd k_matrix(cplx u, cplx xi, const BracketContext& ctx);

// Auxiliary space first: a (2 * 2^L)-square matrix in the basis aux (x) sites.
Mat monodromy(const ChainSpec& chain, cplx u);

struct Blocks {
    Mat A, B, C, D;
};

Blocks split_auxiliary(const Mat& m, int L);

// U_-(u) = T(u) K(u - eta/2, xi_-) sigma_y T^{t_aux}(-u) sigma_y
Mat double_row_monodromy(const ChainSpec& chain, cplx u);

struct DoubleRow {
    Mat A, B, C, D, Dtilde;  // Dtilde = [2u] D - [eta] A
};

DoubleRow double_row_blocks(const ChainSpec& chain, cplx u);

Mat transfer_matrix(const ChainSpec& chain, cplx u);

struct BetheVector {
    Vec state;
    bool is_zero;
};

BetheVector bethe_vector(const ChainSpec& chain, std::span<const cplx> roots);

double yang_baxter_residual(cplx u, cplx v, const BracketContext& ctx);
double reflection_residual(cplx u, cplx v, cplx xi, const BracketContext& ctx);
double rtt_residual(const ChainSpec& chain, cplx u, cplx v);
double commutator_residual(const ChainSpec& chain, cplx u, cplx v);

// ||t v - lambda v|| / ||v|| with lambda the Rayleigh quotient; infinity for a zero vector.
double collinearity_residual(const Mat& t, const Vec& v);

struct OracleReport {
    double commutator = 0.0;
    double shift = 0.0;  // calibrated root shift, in units of eta
    std::vector<double> collinearity;  // per root set, at the calibrated shift
    std::vector<double> shift_scan;    // max collinearity residual for shifts {0, 1/2, -1/2}
    double max_collinearity = 0.0;
};

// Certifies root sets as transfer-matrix eigenvectors after choosing a global shift of the roots.
OracleReport chain_oracle(const ChainSpec& chain, const std::vector<BetheRoots>& root_sets, cplx probe_u,
                          cplx probe_v);

void require_oracle_chain(const ChainSpec& chain);

}  // namespace bgl
