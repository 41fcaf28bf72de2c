#pragma once

#include "bgl/bridge.hpp"
#include "bgl/chain.hpp"
#include "bgl/gauge.hpp"
#include "bgl/lie_roots.hpp"
#include "bgl/solve.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace bgl {

inline constexpr int kSchemaVersion = 1;

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double metric = 0.0;     // worst observed value of the criterion's measure
    double threshold = 0.0;  // bound the measure is compared against
    std::vector<std::string> notes;
    nlohmann::ordered_json details;
};

struct AcceptanceReport {
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;
    bool pass() const;
};

CriterionResult check_root_counts();
CriterionResult check_gradient_equivalence(std::uint64_t seed);
CriterionResult check_dictionary(std::uint64_t seed);
CriterionResult check_transfer_matrix(std::uint64_t seed);
CriterionResult check_degeneration(std::uint64_t seed);
CriterionResult check_duality(std::uint64_t seed);
CriterionResult check_special_functions(std::uint64_t seed);

// Criteria 1-7. Determinism (8) compares two serialized runs and lives with the caller.
AcceptanceReport run_acceptance(std::uint64_t seed);

// Independent stream for criterion or draw `stream` under a user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

using Json = nlohmann::ordered_json;

Json to_json(const RootSystem& rs);
Json to_json(const VerificationReport& r);
Json to_json(const CalibrationResult& r);
Json to_json(const DictionaryPreset& p);
Json to_json(const BetheSolveResult& r);
Json to_json(const VacuumSolveResult& r);
Json to_json(const CrossCheckReport& r);
Json to_json(const OracleReport& r);
Json to_json(const OneLoopReport& r);
Json to_json(const CriterionResult& r);
Json to_json(const AcceptanceReport& r);
Json to_json(cplx z);

// Adds schema_version and the report kind at the front.
Json envelope(const std::string& kind, Json body);

}  // namespace bgl
