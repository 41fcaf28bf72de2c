#pragma once

#include "bgl/chain.hpp"
#include "bgl/gauge.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bgl {

enum class Regime { ThreeD, TwoD };

Regime parse_regime(std::string_view s);
std::string to_string(Regime r);

// Boundary parameter eta_coeff * eta + constant, or +-i infinity.
struct XiExpr {
    double eta_coeff = 0.0;
    double constant = 0.0;
    int infinity = 0;  // +1: +i inf, -1: -i inf

    cplx value(double eta, double cutoff) const;
    std::string to_string() const;
    bool operator==(const XiExpr&) const = default;
};

struct FixedSite {
    double spin;
    double theta;
};

struct DictionaryPreset {
    std::string id;
    Family family = Family::A;
    Regime regime = Regime::ThreeD;
    double scale = kPi;
    XiExpr xi_plus, xi_minus;
    std::vector<FixedSite> fixed_sites;
    Branch branch = Branch::Plus;

    bool open() const { return family != Family::A; }
    bool infinite_boundary() const { return xi_plus.infinity != 0 || xi_minus.infinity != 0; }
    ChainKind chain_kind() const;
    // Chain length for N_f flavours; rejects incompatible N_f.
    int chain_length(int nf) const;
};

std::vector<DictionaryPreset> presets(Family family, Regime regime);
std::vector<DictionaryPreset> all_presets();
DictionaryPreset find_preset(std::string_view id);

inline constexpr double kDefaultCutoff = 20.0;

// sigma = scale * u, m_adj = scale * eta
struct ChainMapping {
    ChainSpec chain;
    double scale;
};

ChainMapping map_gauge_to_chain(const DictionaryPreset& preset, const GaugeTheorySpec& gauge,
                                double cutoff = kDefaultCutoff);

// Inverse map: masses recovered from the free sites (in site order), m_adj from eta.
GaugeTheorySpec map_chain_to_gauge(const DictionaryPreset& preset, const ChainSpec& chain, int rank);

struct WorstPoint {
    int sample = -1;
    int equation = -1;
    std::vector<double> sigma;
    std::vector<double> masses;
    std::vector<double> anti_masses;
    double m_adj = 0.0;
};

struct CalibrationEntry {
    std::string xi_plus, xi_minus;
    int fixed_sites;
    int half_thetas;
    Branch branch;
    double max_residual;
    bool pass;
};

struct VerificationReport {
    std::string preset;
    Family family = Family::A;
    int rank = 0;
    int nf = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    double max_residual = 0.0;
    WorstPoint worst;
    bool pass = false;
    Branch branch_used = Branch::Plus;
    std::vector<double> cutoffs;           // i infinity cutoffs T
    std::vector<double> cutoff_residuals;  // max residual at each T before extrapolation
    std::vector<CalibrationEntry> calibration;
    std::vector<std::string> notes;
};

struct VerifyOptions {
    int rank = 2;
    int nf = 4;
    int samples = 200;
    double tol = 1e-10;
    std::uint64_t seed = 42;
    std::optional<Branch> branch;  // overrides the preset branch
};

// Minimum distance of every sampled sine or linear argument from a zero.
inline constexpr double kSampleMargin = 0.05;

VerificationReport verify_identity(const DictionaryPreset& preset, const VerifyOptions& opt);

struct CalibrationGrid {
    std::vector<std::pair<XiExpr, XiExpr>> xi_pairs;
    std::vector<int> fixed_counts{0, 2, 3, 4};
    std::vector<Branch> branches{Branch::Plus, Branch::Minus};
    VerifyOptions verify{2, 4, 50, 1e-10, 42, std::nullopt};
};

// Catalog boundary pairs first, then every pair of generic candidates.
CalibrationGrid default_grid(Family family, Regime regime);

struct CalibrationResult {
    DictionaryPreset preset;
    VerificationReport report;
};

CalibrationResult calibrate_preset(Family family, Regime regime, const CalibrationGrid& grid);

// max over sampled sigma of the scaled difference of the squared vacuum products.
VerificationReport duality_compare(const GaugeTheorySpec& gauge_i, const GaugeTheorySpec& gauge_ii, int samples,
                                   std::uint64_t seed, double tol = 1e-10);

}  // namespace bgl
