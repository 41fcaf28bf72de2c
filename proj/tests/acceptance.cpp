#include "bgl/report.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

using namespace bgl;

namespace {

std::string line(int id, const std::string& name, bool pass, const std::string& detail)
{
    std::ostringstream os;
    os << "criterion " << id << " [" << (pass ? "PASS" : "FAIL") << "] " << name << ": " << detail;
    return os.str();
}

std::string metric_text(const CriterionResult& c)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "metric %.3e, threshold %.3e", c.metric, c.threshold);
    std::string s = buf;
    if (!c.notes.empty()) s += "; " + c.notes.front();
    return s;
}

}  // namespace

int main()
{
    constexpr std::uint64_t kSeed = 42;
    const auto first = run_acceptance(kSeed);
    bool all = true;
    for (const auto& c : first.criteria) {
        std::cout << line(c.id, c.name, c.pass, metric_text(c)) << "\n";
        all = all && c.pass;
    }
    const std::string a = to_json(first).dump(2), b = to_json(run_acceptance(kSeed)).dump(2);
    const bool same = a == b;
    all = all && same;
    std::cout << line(8, "determinism", same,
                      same ? "two runs at seed 42 serialize to identical JSON (" + std::to_string(a.size()) + " bytes)"
                           : "JSON differs between two runs at seed 42")
              << "\n";
    return all ? 0 : 1;
}
